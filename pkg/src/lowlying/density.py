"""The |L(s, chi)|^2-weighted one-level density over F_q.

    E_q(s; phi) = sum_chi |L(s, chi)|^2 D(chi, phi) / sum_chi |L(s, chi)|^2

Prime side: E_q = phi_hat(0) - M1 - M2, where
    M_k = (1/log q) sum_p A(p^k) phi_hat(k log p / log q) log p / p^{k/2}
and A(m) is the weighted average of chi(m) + conj chi(m).  The weights are
exact (brute-force L-values), so M_k is an exact finite sum: phi_hat vanishes
beyond alpha, leaving only p <= q^{alpha/k}.

Zero side: D(chi, phi) summed over computed zeros, then weighted.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy import integrate, special

from .characters import DirichletCharacter
from .lfunctions import LContext, l_values, make_context
from .numeric import DomainError, PrimeTable, is_prime, primes_upto
from .testfuncs import W_U1, TestFunction, kernel_integral, parse_phi
from .zeros import ZeroList, one_level_from_zeros, scan_family

__all__ = [
    "WeightVector",
    "DensityStatistic",
    "SupportWarning",
    "ExperimentConfig",
    "weight_vector",
    "uniform_weights",
    "weighted_char_avg",
    "m_term",
    "one_level_primeside",
    "one_level_zeroside",
    "unweighted_one_level",
    "primeside_char",
    "support_ok",
    "target_value",
    "run_experiment",
    "DENSITY_CSV_FIELDS",
]

DENSITY_CSV_FIELDS = ("q", "s", "phi", "alpha", "mode", "value", "target", "dev",
                      "dev_times_logq", "m1", "m2", "tail_bound", "support_ok")

SUPPORT_EPS = 1e-12


class SupportWarning(UserWarning):
    """The test function's support exceeds what the theorem for this s allows."""


@dataclass(frozen=True, eq=False)
class WeightVector:
    q: int
    s: float | None  # None for uniform weights
    weights: np.ndarray  # weights[j - 1] for chi_j, j = 1..q-2

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))

    @cached_property
    def _char_sums(self) -> np.ndarray:
        """sum_j w_j exp(2 pi i j k / (q - 1)) for every exponent k."""
        order = self.q - 1
        full = np.concatenate(([0.0], self.weights))
        return order * np.fft.ifft(full)

    def avg_by_dlog(self, k) -> np.ndarray:
        """Weighted average of chi(m) + conj chi(m) for m = g^k."""
        return 2.0 * self._char_sums[np.asarray(k)].real / self.total


def weight_vector(ctx: LContext, s: float) -> WeightVector:
    """|L(s, chi)|^2 for every chi in F_q; cached per (q, s)."""
    s = float(s)
    if not 0.5 <= s < 1:
        raise DomainError(f"weights are defined for s in [1/2, 1); got {s}")
    return _weight_vector(ctx.q, s)


@lru_cache(maxsize=128)
def _weight_vector(q: int, s: float) -> WeightVector:
    lv = l_values(make_context(q), s)[1:]
    w = np.abs(lv) ** 2
    if not np.sum(w) > 0:
        raise DomainError(f"total weight vanished for q={q}, s={s}")
    w.setflags(write=False)
    return WeightVector(q, s, w)


def uniform_weights(ctx: LContext) -> WeightVector:
    w = np.ones(ctx.q - 2)
    w.setflags(write=False)
    return WeightVector(ctx.q, None, w)


def weighted_char_avg(wv: WeightVector, m: int) -> float:
    """sum_chi w_chi (chi(m) + conj chi(m)) / sum_chi w_chi; 0 when q | m."""
    r = int(m) % wv.q
    if r == 0:
        return 0.0
    group = make_context(wv.q).group
    return float(wv.avg_by_dlog(group.dlog[r]))


def _orthogonal_avg(q: int, residues: np.ndarray) -> np.ndarray:
    """Average of chi(m) + conj chi(m) over the full character group: 2 [m = 1 mod q]."""
    return np.where(residues == 1, 2.0, 0.0)


def _prime_power_residues(p: np.ndarray, k: int, q: int) -> np.ndarray:
    r = np.ones_like(p)
    base = p % q
    for _ in range(k):
        r = r * base % q
    return r


def _primes_for(bound: float, primes: PrimeTable | None) -> np.ndarray:
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    if primes is None:
        primes = primes_upto(int(math.floor(bound)) + 1)
    elif primes.limit < math.floor(bound):
        raise DomainError(
            f"prime table up to {primes.limit} is too small; need primes up to {bound:.6g}"
        )
    return primes.upto(bound)


def _m_term_from(avg_fn, q: int, k: int, phi: TestFunction, primes: PrimeTable | None) -> float:
    L = math.log(q)
    p = _primes_for(q ** (phi.alpha / k), primes)
    if len(p) == 0:
        return 0.0
    pf = p.astype(float)
    res = _prime_power_residues(p, k, q)
    logp = np.log(pf)
    terms = avg_fn(res) * phi.phi_hat(k * logp / L) * logp / pf ** (k / 2)
    return float(np.sum(terms)) / L


def m_term(wv: WeightVector, k: int, phi: TestFunction, primes: PrimeTable | None = None) -> float:
    """M_q^{(k)}: the weighted prime-power sum of the explicit formula."""
    if k not in (1, 2):
        raise DomainError("k must be 1 or 2")
    group = make_context(wv.q).group

    def avg(res):
        out = wv.avg_by_dlog(group.dlog[res])
        return np.where(res == 0, 0.0, out)

    return _m_term_from(avg, wv.q, k, phi, primes)


def support_ok(alpha: float, s: float, widened: bool = False) -> bool:
    """supp phi_hat within the range the relevant theorem allows.

    1/2 < s < 1: alpha <= 2s/3.  s = 1/2: alpha <= 1/3, or 1/2 with `widened`.
    """
    if s is None:
        return alpha <= 2 + SUPPORT_EPS
    if s == 0.5:
        return alpha <= (0.5 if widened else 1 / 3) + SUPPORT_EPS
    return alpha <= 2 * s / 3 + SUPPORT_EPS


def target_value(phi: TestFunction, s: float | None) -> float:
    """Limit of E_q(s; phi): integral of phi W_U1 at s = 1/2, phi_hat(0) otherwise."""
    if s == 0.5:
        return kernel_integral(phi, W_U1) if phi.alpha <= 1 else math.nan
    return float(phi.phi_hat(0.0))


@dataclass(frozen=True)
class DensityStatistic:
    q: int
    s: float | None
    phi: str
    alpha: float
    mode: str  # "prime_side" or "zero_side"
    value: float
    phi_hat_zero: float
    m1: float = math.nan
    m2: float = math.nan
    target: float = math.nan
    tail_bound: float = 0.0
    support_ok: bool = True

    @property
    def dev(self) -> float:
        return abs(self.value - self.target)

    def row(self) -> dict:
        return {
            "q": self.q, "s": self.s, "phi": self.phi, "alpha": self.alpha, "mode": self.mode,
            "value": self.value, "target": self.target, "dev": self.dev,
            "dev_times_logq": self.dev * math.log(self.q), "m1": self.m1, "m2": self.m2,
            "tail_bound": self.tail_bound, "support_ok": self.support_ok,
        }


def _support_check(phi: TestFunction, s, widened: bool, q: int) -> bool:
    ok = support_ok(phi.alpha, s, widened)
    if not ok:
        warnings.warn(f"{phi.name} (alpha={phi.alpha:g}) exceeds the support hypothesis at "
                      f"s={s}, q={q}; the theorem's guarantee does not apply", SupportWarning,
                      stacklevel=3)
    return ok


def one_level_primeside(wv: WeightVector, phi: TestFunction, widened: bool = False,
                        primes: PrimeTable | None = None) -> DensityStatistic:
    """E_q(s; phi) = phi_hat(0) - M1 - M2."""
    ok = _support_check(phi, wv.s, widened, wv.q)
    m1 = m_term(wv, 1, phi, primes)
    m2 = m_term(wv, 2, phi, primes)
    ph0 = float(phi.phi_hat(0.0))
    return DensityStatistic(wv.q, wv.s, phi.name, phi.alpha, "prime_side", ph0 - m1 - m2, ph0,
                            m1, m2, target_value(phi, wv.s), 0.0, ok)


# -- per-character explicit formula ---------------------------------------------

def _archimedean(phi: TestFunction, L: float, parity_bit: int) -> float:
    """Integral of phi(x) digamma(1/4 + a/2 + i pi x / L) dx, via phi_hat.

    Uses digamma(z) = int_0^inf (e^{-t}/t - e^{-zt}/(1 - e^{-t})) dt; beyond
    t = 2 L alpha only the first part survives and integrates to E1.
    """
    c = 0.25 + 0.5 * parity_bit
    ph0 = float(phi.phi_hat(0.0))
    t_max = 2 * L * phi.alpha

    def f(t):
        return ph0 * math.exp(-t) / t + math.exp(-c * t) * float(phi.phi_hat(t / (2 * L))) / math.expm1(-t)

    if t_max == 0:
        return 0.0
    pts = [2 * L * abs(k) for k in phi.kinks if 0 < abs(k) < phi.alpha]
    val, _ = integrate.quad(f, 0.0, t_max, points=pts or None, epsabs=1e-12, epsrel=1e-12, limit=200)
    return val + ph0 * float(special.exp1(t_max))


def primeside_char(ctx: LContext, chi: DirichletCharacter, phi: TestFunction,
                   exact: bool = False) -> float:
    """D(chi, phi) from primes.

    exact=False: phi_hat(0) minus the p and p^2 sums (the O(1/log q) remainder dropped).
    exact=True:  the full explicit formula, with every prime power and the
                 archimedean term (log(q/pi) and digamma density).
    """
    if chi.is_principal:
        raise DomainError("explicit formula applies to non-principal characters")
    L = math.log(ctx.q)
    group = ctx.group
    order = group.order

    def avg(res):
        k = group.dlog[res]
        out = 2.0 * np.cos(2 * np.pi * ((chi.j * k) % order) / order)
        return np.where(res == 0, 0.0, out)

    ph0 = float(phi.phi_hat(0.0))
    if not exact:
        return ph0 - _m_term_from(avg, ctx.q, 1, phi, None) - _m_term_from(avg, ctx.q, 2, phi, None)
    total = 0.0
    k = 1
    while 2 ** k <= ctx.q ** phi.alpha:
        total += _m_term_from(avg, ctx.q, k, phi, None)
        k += 1
    arch = (ph0 * math.log(ctx.q / math.pi) + _archimedean(phi, L, ctx.parity_bit(chi))) / L
    return arch - total


# -- zero side -----------------------------------------------------------------

def _zero_lists(ctx: LContext, T: float, zero_lists, workers) -> list[ZeroList]:
    if zero_lists is None:
        return scan_family(ctx, T, workers=workers)
    zero_lists = sorted(zero_lists, key=lambda z: z.j)
    if [z.j for z in zero_lists] != list(range(1, ctx.q - 1)):
        raise DomainError("zero lists must cover every character of F_q")
    return zero_lists


def _zero_side(wv: WeightVector, phi: TestFunction, zls: list[ZeroList]) -> tuple[float, float]:
    vals = np.empty(len(zls))
    tails = np.empty(len(zls))
    for i, zl in enumerate(zls):
        vals[i], tails[i] = one_level_from_zeros(zl, phi)  # raises on an incomplete list
    w = wv.weights
    return float(np.sum(w * vals)) / wv.total, float(np.sum(w * tails)) / wv.total


def one_level_zeroside(ctx: LContext, s: float, phi: TestFunction, T: float,
                       zero_lists=None, workers: int | None = None,
                       widened: bool = False) -> DensityStatistic:
    """Weighted average of D(chi, phi) computed from zeros up to height T."""
    wv = weight_vector(ctx, s)
    ok = _support_check(phi, s, widened, ctx.q)
    zls = _zero_lists(ctx, T, zero_lists, workers)
    value, tail = _zero_side(wv, phi, zls)
    return DensityStatistic(ctx.q, float(s), phi.name, phi.alpha, "zero_side", value,
                            float(phi.phi_hat(0.0)), target=target_value(phi, s),
                            tail_bound=tail, support_ok=ok)


def unweighted_one_level(ctx: LContext, phi: TestFunction, T: float | None = None,
                         mode: str = "zero", zero_lists=None, workers: int | None = None,
                         exact_family: bool = False) -> DensityStatistic:
    """(1/#F_q) sum_chi D(chi, phi).

    Prime side uses orthogonality over the whole character group, which makes
    A(m) = 2 [m = 1 mod q]; with exact_family=True the principal character is
    removed, giving A(m) = 2 ((q - 1)[m = 1] - 1)/(q - 2).
    """
    ph0 = float(phi.phi_hat(0.0))
    if mode == "prime":
        q = ctx.q

        def avg(res):
            if exact_family:
                return np.where(res == 0, 0.0, 2.0 * ((q - 1) * (res == 1) - 1) / (q - 2))
            return _orthogonal_avg(q, res)

        m1 = _m_term_from(avg, q, 1, phi, None)
        m2 = _m_term_from(avg, q, 2, phi, None)
        return DensityStatistic(q, None, phi.name, phi.alpha, "prime_side", ph0 - m1 - m2, ph0,
                                m1, m2, target=ph0, support_ok=support_ok(phi.alpha, None))
    if mode != "zero":
        raise DomainError(f"unknown mode {mode!r}")
    if T is None:
        raise DomainError("zero-side evaluation needs a height T")
    zls = _zero_lists(ctx, T, zero_lists, workers)
    value, tail = _zero_side(uniform_weights(ctx), phi, zls)
    return DensityStatistic(ctx.q, None, phi.name, phi.alpha, "zero_side", value, ph0,
                            target=ph0, tail_bound=tail, support_ok=support_ok(phi.alpha, None))


# -- experiment sweep -----------------------------------------------------------

@dataclass
class ExperimentConfig:
    qs: list
    ss: list
    phis: list  # specs such as "triangle:0.3333" or TestFunction objects
    mode: str = "prime"
    T: float | None = None
    widened: bool = False
    workers: int | None = None
    extra: dict = field(default_factory=dict)


def run_experiment(config: ExperimentConfig) -> list[DensityStatistic]:
    """One row per (q, s, phi), in config order."""
    for q in config.qs:
        if not is_prime(q):
            raise DomainError(f"modulus {q} is not prime")
    phis = [parse_phi(p) if isinstance(p, str) else p for p in config.phis]
    rows = []
    for q in config.qs:
        ctx = make_context(q)
        zls = None
        if config.mode == "zero":
            if config.T is None:
                raise DomainError("zero mode needs a height T")
            zls = scan_family(ctx, config.T, workers=config.workers)
        elif config.mode != "prime":
            raise DomainError(f"unknown mode {config.mode!r}")
        for s in config.ss:
            for phi in phis:
                if zls is None:
                    rows.append(one_level_primeside(weight_vector(ctx, s), phi, config.widened))
                else:
                    rows.append(one_level_zeroside(ctx, s, phi, config.T, zls,
                                                   widened=config.widened))
    return rows
