"""Twisted second moments of Dirichlet L-functions mod a prime.

Brute force sums L(s, chi) L(s', conj chi) chi(m) conj chi(n) over the
non-principal characters; the formula side carries Selberg's two main terms,
their closed-form limit on the diagonal s + s' = 1, Bettin's central formula
and Paley's asymptotic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lfunctions import l_values, make_context
from .numeric import EULER_GAMMA, DomainError, gamma, is_prime, riemann_zeta

__all__ = [
    "MomentReport",
    "DiagonalError",
    "brute_twisted_moment",
    "selberg_main_term",
    "central_main_term",
    "central_constant",
    "bettin_main_term",
    "paley_moment",
    "predict_weight_ratio",
    "moment_report",
    "simple_error_scale",
    "selberg_error_scale",
    "MOMENT_CSV_FIELDS",
]

DIAGONAL_TOL = 1e-6
LOG_8PI = math.log(8 * math.pi)

MOMENT_CSV_FIELDS = ("q", "s_re", "s_im", "sp_re", "sp_im", "m", "n",
                     "brute_re", "brute_im", "main_re", "main_im", "abs_err", "norm_err")


class DiagonalError(DomainError):
    """Selberg's main term requested on (or next to) the line s + s' = 1."""


def _check_args(q: int, m: int, n: int):
    if not is_prime(q):
        raise DomainError(f"modulus {q} is not prime")
    if m < 1 or n < 1:
        raise DomainError("m and n must be positive integers")
    if math.gcd(m, n) != 1:
        raise DomainError(f"m={m} and n={n} are not coprime")
    if (m * n) % q == 0:
        raise DomainError(f"m*n={m * n} is not coprime to q={q}")


def _check_strip(s: complex, name: str):
    if not 0 < s.real < 1:
        raise DomainError(f"Re {name} must lie in (0, 1); got {s}")


@lru_cache(maxsize=64)
def _l_vector(q: int, s: complex) -> np.ndarray:
    out = l_values(make_context(q), s)
    out.setflags(write=False)
    return out


def brute_twisted_moment(q: int, s, s_prime, m: int = 1, n: int = 1) -> complex:
    """Sum over chi in F_q of L(s, chi) L(s', conj chi) chi(m) conj chi(n)."""
    s, s_prime = complex(s), complex(s_prime)
    _check_args(q, m, n)
    _check_strip(s, "s")
    _check_strip(s_prime, "s'")
    group = make_context(q).group
    order = group.order
    a = _l_vector(q, s)
    b = _l_vector(q, s_prime)
    j = np.arange(1, order)
    b_conj = b[(-j) % order]  # L(s', conj chi_j) = L(s', chi_{-j})
    k = (int(group.dlog[m % q]) - int(group.dlog[n % q])) % order
    twist = np.exp(2j * np.pi * ((j * k) % order) / order)
    # fixed summation order keeps results bit-reproducible
    return complex(np.sum(a[1:] * b_conj * twist))


def selberg_main_term(q: int, s, s_prime, m: int = 1, n: int = 1) -> complex:
    """The two main terms of Selberg's twisted second moment formula."""
    s, s_prime = complex(s), complex(s_prime)
    _check_args(q, m, n)
    if abs(s + s_prime - 1) <= DIAGONAL_TOL:
        raise DiagonalError("s + s' = 1: use central_main_term for the diagonal limit")
    first = (q - 1) * riemann_zeta(s + s_prime) / (m**s_prime * n**s)
    second = ((q - 1) * q ** (1 - s - s_prime) / (m ** (1 - s) * n ** (1 - s_prime))
              * (2 * math.pi) ** (s + s_prime - 1) / math.pi
              * gamma(1 - s) * gamma(1 - s_prime)
              * cmath.cos(math.pi / 2 * (s - s_prime))
              * riemann_zeta(2 - s - s_prime))
    return complex(first + second)


def central_constant(q: int, m: int = 1) -> float:
    """log q - log m + gamma - log(8 pi)."""
    return math.log(q) - math.log(m) + EULER_GAMMA - LOG_8PI


def central_main_term(q: int, m: int = 1) -> float:
    """(q - 1) m^{-1/2} (log q - log m + gamma - log 8 pi): the s = s' = 1/2 limit."""
    _check_args(q, m, 1)
    return (q - 1) / math.sqrt(m) * central_constant(q, m)


def bettin_main_term(q: int, m: int = 1, n: int = 1) -> float:
    """(q - 1) (mn)^{-1/2} (log(q/mn) + gamma - log 8 pi), valid for q >= 4mn."""
    _check_args(q, m, n)
    if q < 4 * m * n:
        raise DomainError(f"Bettin's formula needs q >= 4mn; q={q}, mn={m * n}")
    return (q - 1) / math.sqrt(m * n) * (math.log(q / (m * n)) + EULER_GAMMA - LOG_8PI)


def paley_moment(q: int) -> float:
    """(q - 1)^2 / q * log q."""
    if not is_prime(q):
        raise DomainError(f"modulus {q} is not prime")
    return (q - 1) ** 2 / q * math.log(q)


def predict_weight_ratio(q: int, s: float, m: int) -> float:
    """Main term of the |L(s)|^2-weighted average of chi(m) over F_q.

    m^{-s} for 1/2 < s < 1; m^{-1/2} (1 - log m / log q) at s = 1/2.
    """
    s = float(s)
    if not 0.5 <= s < 1:
        raise DomainError(f"s must lie in [1/2, 1); got {s}")
    if m % q == 0:
        raise DomainError(f"m={m} is not coprime to q={q}")
    if s == 0.5:
        return m**-0.5 * (1 - math.log(m) / math.log(q))
    return m**-s


@dataclass(frozen=True)
class MomentReport:
    q: int
    s: complex
    s_prime: complex
    m: int
    n: int
    brute: complex
    main_term: complex
    scale: float  # the error scale the observed error is normalized by

    @property
    def observed_error(self) -> complex:
        return self.brute - self.main_term

    @property
    def normalized_error(self) -> float:
        return abs(self.observed_error) / self.scale

    def row(self) -> dict:
        return {
            "q": self.q, "s_re": self.s.real, "s_im": self.s.imag,
            "sp_re": self.s_prime.real, "sp_im": self.s_prime.imag,
            "m": self.m, "n": self.n,
            "brute_re": self.brute.real, "brute_im": self.brute.imag,
            "main_re": self.main_term.real, "main_im": self.main_term.imag,
            "abs_err": abs(self.observed_error), "norm_err": self.normalized_error,
        }


def moment_report(q: int, s, s_prime=None, m: int = 1, n: int = 1) -> MomentReport:
    """Brute force against the matching main term, with its error scale.

    Off the diagonal: Selberg's terms, scale from selberg_error_scale.
    On the diagonal s = s' = 1/2: Bettin's term (central_main_term when n = 1),
    scale sqrt(m) sqrt(q) log q for n = 1, else sqrt(m + n) sqrt(q) log q.
    """
    s = complex(s)
    s_prime = s if s_prime is None else complex(s_prime)
    brute = brute_twisted_moment(q, s, s_prime, m, n)
    if abs(s + s_prime - 1) <= DIAGONAL_TOL:
        if s != 0.5 or s_prime != 0.5:
            raise DiagonalError("closed forms on s + s' = 1 exist only at s = s' = 1/2")
        main = central_main_term(q, m) if n == 1 else bettin_main_term(q, m, n)
        scale = math.sqrt(m if n == 1 else m + n) * math.sqrt(q) * math.log(q)
    else:
        main = selberg_main_term(q, s, s_prime, m, n)
        scale = selberg_error_scale(q, s, s_prime, m, n)
    return MomentReport(q, s, s_prime, m, n, brute, complex(main), scale)


def simple_error_scale(q: int, s, s_prime, m: int = 1, n: int = 1) -> float:
    """max(m, n) q^{1 - min(Re s, Re s')}: the error size with constants dropped."""
    return max(m, n) * q ** (1 - min(complex(s).real, complex(s_prime).real))


def selberg_error_scale(q: int, s, s_prime, m: int = 1, n: int = 1) -> float:
    """Error size of Selberg's formula including its dependence on s and s'.

    |s s'| / (sigma sigma' (1 - sigma)(1 - sigma')) (m q^{1-sigma} + n q^{1-sigma'}
    + mn q^{1-sigma-sigma'}).  This blows up as sigma -> 1, which the simple
    scale ignores.
    """
    s, s_prime = complex(s), complex(s_prime)
    a, b = s.real, s_prime.real
    pref = abs(s * s_prime) / (a * b * (1 - a) * (1 - b))
    return pref * (m * q ** (1 - a) + n * q ** (1 - b) + m * n * q ** (1 - a - b))
