"""Dirichlet characters modulo a prime, indexed through a discrete-log table.

With g the least primitive root mod q, every unit is g**k and the characters
are chi_j(g**k) = exp(2 pi i j k / (q - 1)), j = 0..q-2.  j = 0 is the
principal character; the family F_q is j = 1..q-2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numeric import DomainError, is_prime

__all__ = ["CharacterGroup", "DirichletCharacter", "build_group", "least_primitive_root"]


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def least_primitive_root(q: int) -> int:
    factors = _prime_factors(q - 1)
    for g in range(2, q):
        if all(pow(g, (q - 1) // r, q) != 1 for r in factors):
            return g
    raise DomainError(f"no primitive root modulo {q}")


@dataclass(frozen=True, eq=False)
class CharacterGroup:
    """All characters mod a prime q (principal one included at j = 0)."""

    q: int
    g: int
    dlog: np.ndarray  # dlog[n] = k with g**k = n mod q; dlog[0] = -1
    powers: np.ndarray  # powers[k] = g**k mod q

    @property
    def order(self) -> int:
        return self.q - 1

    def character(self, j: int) -> DirichletCharacter:
        return DirichletCharacter(self, int(j) % self.order)

    def family(self) -> list[DirichletCharacter]:
        """The q - 2 non-principal characters, in index order."""
        return [DirichletCharacter(self, j) for j in range(1, self.order)]

    def __repr__(self):
        return f"CharacterGroup(q={self.q}, g={self.g})"


@lru_cache(maxsize=64)
def build_group(q: int) -> CharacterGroup:
    q = int(q)
    if not is_prime(q):
        raise DomainError(f"modulus {q} is not prime")
    if q == 2:
        raise DomainError("modulus 2 has no non-principal characters")
    g = least_primitive_root(q)
    powers = np.empty(q - 1, dtype=np.int64)
    dlog = np.full(q, -1, dtype=np.int64)
    x = 1
    for k in range(q - 1):
        powers[k] = x
        dlog[x] = k
        x = x * g % q
    powers.setflags(write=False)
    dlog.setflags(write=False)
    return CharacterGroup(q, g, dlog, powers)


@dataclass(frozen=True)
class DirichletCharacter:
    group: CharacterGroup
    j: int

    @property
    def q(self) -> int:
        return self.group.q

    @property
    def is_principal(self) -> bool:
        return self.j == 0

    @property
    def is_real(self) -> bool:
        return (2 * self.j) % self.group.order == 0

    def __call__(self, n: int) -> complex:
        r = int(n) % self.q
        if r == 0:
            return 0j
        k = int(self.group.dlog[r])
        return cmath.exp(2j * math.pi * ((self.j * k) % self.group.order) / self.group.order)

    def values(self, n) -> np.ndarray:
        """Vectorized evaluation over an integer array."""
        r = np.asarray(n, dtype=np.int64) % self.q
        k = self.group.dlog[r]
        phase = (self.j * k) % self.group.order
        out = np.exp(2j * np.pi * phase / self.group.order)
        return np.where(r == 0, 0j, out)

    def conjugate(self) -> DirichletCharacter:
        return DirichletCharacter(self.group, (-self.j) % self.group.order)

    def parity(self) -> int:
        """chi(-1): +1 for even characters, -1 for odd ones."""
        # -1 = g**((q-1)/2), so chi(-1) = (-1)**j
        return -1 if self.j % 2 else 1

    def gauss_sum(self) -> complex:
        if self.is_principal:
            raise DomainError("Gauss sum requested for the principal character")
        a = np.arange(1, self.q)
        return complex(np.sum(self.values(a) * np.exp(2j * np.pi * a / self.q)))

    def __repr__(self):
        return f"chi(q={self.q}, j={self.j})"
