"""Dirichlet L-functions mod a prime: values, completion, root numbers, Z-function.

L(s, chi) = q^{-s} sum_{a=1}^{q-1} chi(a) zeta(s, a/q).  Ordering the Hurwitz
values by discrete log turns the sum over a into a DFT over the exponent, so
one FFT yields L(s, chi_j) for every j at once.

Completion and phase convention (a = 0 for even chi, 1 for odd chi):

    Lambda(s, chi) = (q/pi)^{(s+a)/2} Gamma((s+a)/2) L(s, chi)
    Lambda(s, chi) = eps(chi) Lambda(1 - s, conj chi),  eps = tau(chi) / (i^a sqrt q)

    theta(t) = (t/2) log(q/pi) + Im log Gamma((1/2 + a + i t)/2) - arg(eps)/2
    Z(t)     = exp(i theta(t)) L(1/2 + i t, chi)

arg(eps) is taken in (-pi, pi].  Z is real with |Z| = |L|, and
Z(-t, chi) = Z(t, conj chi), except that the sign flips when eps(chi) = -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .characters import CharacterGroup, DirichletCharacter, build_group
from .numeric import POLE_TOL, DomainError, PoleError, hurwitz_zeta, log_gamma

__all__ = [
    "AccuracyError",
    "LContext",
    "make_context",
    "l_value",
    "l_values",
    "l_series_oracle",
    "completed_l",
    "hardy_theta",
    "hardy_z",
    "hardy_rotated",
    "hardy_z_all",
]

SIGMA_RANGE = (0.2, 3.0)
T_MAX = 200.0


class AccuracyError(DomainError):
    """Evaluation point outside the region where the stated accuracy holds."""


@dataclass(frozen=True, eq=False)
class LContext:
    group: CharacterGroup
    parity_bits: np.ndarray = field(repr=False)  # a_j in {0, 1}
    gauss_sums: np.ndarray = field(repr=False)  # tau(chi_j); entry 0 unused
    root_numbers: np.ndarray = field(repr=False)  # eps(chi_j); entry 0 unused

    @property
    def q(self) -> int:
        return self.group.q

    def parity_bit(self, chi: DirichletCharacter) -> int:
        return int(self.parity_bits[chi.j])

    def root_number(self, chi: DirichletCharacter) -> complex:
        if chi.is_principal:
            raise DomainError("root number requested for the principal character")
        return complex(self.root_numbers[chi.j])

    def hurwitz_by_dlog(self, s) -> np.ndarray:
        """zeta(s, g^k/q) - 1/(s-1) for k = 0..q-2.

        The pole part is the same for every k, so it drops out of any
        non-principal character sum.
        """
        return _hurwitz_vector(self.q, complex(s))


@lru_cache(maxsize=64)
def make_context(q: int) -> LContext:
    group = build_group(q)
    n = group.order
    j = np.arange(n)
    bits = (j % 2).astype(np.int64)
    # tau(chi_j) = sum_k exp(2 pi i j k / n) exp(2 pi i g^k / q)
    tau = n * np.fft.ifft(np.exp(2j * np.pi * group.powers / group.q))
    eps = tau / ((1j) ** bits * math.sqrt(group.q))
    eps[0] = np.nan
    for arr in (bits, tau, eps):
        arr.setflags(write=False)
    return LContext(group, bits, tau, eps)


@lru_cache(maxsize=32)
def _hurwitz_vector(q: int, s: complex) -> np.ndarray:
    group = build_group(q)
    out = hurwitz_zeta(s, group.powers / q, regularized=True)
    out.setflags(write=False)
    return out


def _check_domain(s: complex):
    if not (SIGMA_RANGE[0] <= s.real <= SIGMA_RANGE[1]) or abs(s.imag) > T_MAX:
        raise AccuracyError(
            f"s = {s} outside Re s in [{SIGMA_RANGE[0]}, {SIGMA_RANGE[1]}], |Im s| <= {T_MAX}"
        )


def _phases(chi: DirichletCharacter) -> np.ndarray:
    n = chi.group.order
    return np.exp(2j * np.pi * ((chi.j * np.arange(n)) % n) / n)


def l_value(ctx: LContext, chi: DirichletCharacter, s) -> complex:
    s = complex(s)
    _check_domain(s)
    h = ctx.hurwitz_by_dlog(s)
    val = np.dot(_phases(chi), h)
    if chi.is_principal:
        if abs(s - 1) < POLE_TOL:
            raise PoleError("L(s, principal character) has a pole at s = 1")
        val = val + chi.group.order / (s - 1)
    return complex(ctx.q ** (-s) * val)


def l_values(ctx: LContext, s) -> np.ndarray:
    """L(s, chi_j) for all j = 0..q-2.

    Entry 0 is the principal character, NaN at the pole s = 1.
    """
    s = complex(s)
    _check_domain(s)
    h = ctx.hurwitz_by_dlog(s)
    n = ctx.group.order
    out = ctx.q ** (-s) * n * np.fft.ifft(h)
    out[0] = out[0] + ctx.q ** (-s) * n / (s - 1) if abs(s - 1) >= POLE_TOL else np.nan
    return out


def _smooth_cutoff(x: np.ndarray) -> np.ndarray:
    """1 on [0, 1], 0 on [2, inf), C-infinity in between."""
    t = np.clip(x - 1.0, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f0 = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        f1 = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
    return f1 / (f0 + f1)


def l_series_oracle(chi: DirichletCharacter, s, n_terms: int, smooth: bool = False,
                    chunk: int = 1 << 18) -> tuple[complex, float]:
    """Dirichlet-series value of L(s, chi) and a bound on the neglected tail.

    Plain mode sums chi(n) n^{-s} for n <= n_terms.  Smooth mode weights the
    terms by a C-infinity cutoff falling from 1 at n_terms to 0 at 2 n_terms,
    which converges far faster for characters; the weights only ever shrink
    the tail, so the same bound applies.  The bound is
    sum_{n > N} n^{-sigma} <= (N + 1/2)^{1 - sigma} / (sigma - 1), by convexity.
    """
    s = complex(s)
    if s.real <= 1:
        raise DomainError("the Dirichlet series needs Re s > 1")
    n_terms = int(n_terms)
    stop = 2 * n_terms if smooth else n_terms
    total = 0j
    for lo in range(1, stop + 1, chunk):
        n = np.arange(lo, min(lo + chunk, stop + 1), dtype=np.int64)
        terms = chi.values(n) * np.exp(-s * np.log(n.astype(float)))
        if smooth:
            terms = terms * _smooth_cutoff(n / n_terms)
        total += np.sum(terms)
    tail = (n_terms + 0.5) ** (1 - s.real) / (s.real - 1)
    return complex(total), float(tail)


def completed_l(ctx: LContext, chi: DirichletCharacter, s) -> complex:
    s = complex(s)
    a = ctx.parity_bit(chi)
    w = (s + a) / 2
    return complex(np.exp(w * math.log(ctx.q / math.pi) + log_gamma(w)) * l_value(ctx, chi, s))


def hardy_theta(ctx: LContext, chi: DirichletCharacter, t):
    """Rotation angle making exp(i theta) L(1/2 + it) real (vectorized in t)."""
    a = ctx.parity_bit(chi)
    t = np.asarray(t, dtype=float)
    arg_eps = float(np.angle(ctx.root_number(chi)))
    th = 0.5 * t * math.log(ctx.q / math.pi) + np.imag(log_gamma((0.5 + a + 1j * t) / 2)) - arg_eps / 2
    return float(th) if th.ndim == 0 else th


def hardy_rotated(ctx: LContext, chi: DirichletCharacter, t: float) -> complex:
    """exp(i theta(t)) L(1/2 + it); real up to rounding."""
    t = float(t)
    return complex(np.exp(1j * hardy_theta(ctx, chi, t)) * l_value(ctx, chi, 0.5 + 1j * t))


def hardy_z(ctx: LContext, chi: DirichletCharacter, t: float) -> float:
    return hardy_rotated(ctx, chi, t).real


def hardy_z_all(ctx: LContext, t: float) -> np.ndarray:
    """Z(t, chi_j) for all j (entry 0, the principal character, is NaN)."""
    t = float(t)
    lv = l_values(ctx, 0.5 + 1j * t)
    bits = ctx.parity_bits
    lg = np.array([np.imag(log_gamma((0.5 + b + 1j * t) / 2)) for b in (0, 1)])
    arg_eps = np.angle(ctx.root_numbers)
    th = 0.5 * t * math.log(ctx.q / math.pi) + lg[bits] - arg_eps / 2
    out = np.real(np.exp(1j * th) * lv)
    out[0] = np.nan
    return out
