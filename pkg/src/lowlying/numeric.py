"""Primes, constants and special functions in double precision.

Everything here is a pure function of its inputs.  The Hurwitz zeta
function is evaluated by Euler-Maclaurin summation; log-gamma and digamma
use the Stirling series after an upward shift.  All three draw their
correction coefficients from one exact table of Bernoulli numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "DomainError",
    "PoleError",
    "PrimeTable",
    "Constants",
    "CONSTANTS",
    "bernoulli_even",
    "sieve_primes",
    "segmented_sieve",
    "primes_upto",
    "is_prime",
    "chebyshev_power_sum",
    "hurwitz_zeta",
    "riemann_zeta",
    "log_gamma",
    "gamma",
    "digamma",
]

EULER_GAMMA = 0.57721566490153286061

# Euler-Maclaurin: shift length max(EM_MIN_SHIFT, ceil(2|Im s|)), EM_DEPTH Bernoulli terms.
EM_MIN_SHIFT = 30
EM_DEPTH = 25
POLE_TOL = 1e-8

# Stirling series is applied once Re z >= STIRLING_SHIFT.
STIRLING_SHIFT = 15.0
STIRLING_DEPTH = 12


class DomainError(ValueError):
    """Input outside the domain on which an operation is defined."""


class PoleError(DomainError):
    """Input at (or numerically adjacent to) a pole."""


# -- Bernoulli numbers -------------------------------------------------------

def bernoulli_even(k_max: int) -> tuple[Fraction, ...]:
    """Exact B_2, B_4, ..., B_{2 k_max} (Akiyama-Tanigawa)."""
    n_max = 2 * k_max
    out = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(a[0])
    return tuple(out)


@dataclass(frozen=True)
class Constants:
    euler_gamma: float
    bernoulli: tuple[Fraction, ...]  # B_2, B_4, ...

    @property
    def k_max(self) -> int:
        return len(self.bernoulli)

    def b(self, n: int) -> Fraction:
        """B_n for even n >= 2."""
        if n < 2 or n % 2:
            raise DomainError("only even-index Bernoulli numbers are tabulated")
        return self.bernoulli[n // 2 - 1]


CONSTANTS = Constants(euler_gamma=EULER_GAMMA, bernoulli=bernoulli_even(EM_DEPTH + 5))

# B_{2k}/(2k)!, k = 1..EM_DEPTH; consumed by hurwitz_zeta.
EM_COEFFS = np.array(
    [float(CONSTANTS.b(2 * k) / math.factorial(2 * k)) for k in range(1, EM_DEPTH + 1)]
)
# B_{2k}/(2k(2k-1)), k = 1..STIRLING_DEPTH; consumed by log_gamma.
STIRLING_COEFFS = np.array(
    [float(CONSTANTS.b(2 * k) / (2 * k * (2 * k - 1))) for k in range(1, STIRLING_DEPTH + 1)]
)
# B_{2k}/(2k); consumed by digamma.
DIGAMMA_COEFFS = np.array(
    [float(CONSTANTS.b(2 * k) / (2 * k)) for k in range(1, STIRLING_DEPTH + 1)]
)


# -- primes ------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray

    def __post_init__(self):
        self.primes.setflags(write=False)

    def __len__(self):
        return len(self.primes)

    def upto(self, x: float) -> np.ndarray:
        """Primes p <= x; x must not exceed the table limit."""
        if math.floor(x) > self.limit:
            raise DomainError(f"prime table limit {self.limit} is below requested bound {x}")
        return self.primes[: np.searchsorted(self.primes, math.floor(x), side="right")]


def sieve_primes(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes on the odd numbers up to `limit`."""
    limit = int(limit)
    if limit < 2:
        raise DomainError("sieve limit must be at least 2 (no primes below 2)")
    # index i stands for 2*i + 1
    size = (limit - 1) // 2 + 1
    odd = np.ones(size, dtype=bool)
    odd[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if odd[i]:
            p = 2 * i + 1
            odd[p * p // 2 :: p] = False
    primes = np.concatenate(([2], 2 * np.flatnonzero(odd) + 1)).astype(np.int64)
    return PrimeTable(limit, primes[primes <= limit])


def segmented_sieve(limit: int, segment: int = 1 << 16) -> PrimeTable:
    """Segmented sieve over all integers; independent of `sieve_primes`."""
    limit = int(limit)
    if limit < 2:
        raise DomainError("sieve limit must be at least 2 (no primes below 2)")
    root = math.isqrt(limit)
    base = []
    small = bytearray([1]) * (root + 1)
    for n in range(2, root + 1):
        if small[n]:
            base.append(n)
            small[n * n :: n] = bytearray(len(range(n * n, root + 1, n)))
    chunks = []
    for lo in range(2, limit + 1, segment):
        hi = min(lo + segment, limit + 1)
        mark = np.ones(hi - lo, dtype=bool)
        for p in base:
            start = max(p * p, -(-lo // p) * p)
            if start >= hi:
                continue
            mark[start - lo :: p] = False
        chunks.append(np.flatnonzero(mark) + lo)
    return PrimeTable(limit, np.concatenate(chunks).astype(np.int64))


@lru_cache(maxsize=8)
def primes_upto(limit: int) -> PrimeTable:
    """Cached sieve; the table is immutable and safe to share."""
    return sieve_primes(max(int(limit), 2))


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    f = 17
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def chebyshev_power_sum(x: float, a: float, table: PrimeTable | None = None) -> float:
    """Sum of p**a * log(p) over primes p <= x."""
    if a <= -1:
        raise DomainError("exponent a must exceed -1 (the sum's growth law needs a > -1)")
    if x < 2:
        raise DomainError("x must be at least 2")
    if table is None:
        table = primes_upto(int(math.floor(x)))
    p = table.upto(x).astype(float)
    return float(np.sum(p**a * np.log(p)))


# -- zeta ----------------------------------------------------------------------

def em_shift(s: complex) -> int:
    return max(EM_MIN_SHIFT, math.ceil(2 * abs(complex(s).imag)))


def hurwitz_zeta(s, a, regularized: bool = False):
    """zeta(s, a) = sum_{n>=0} (n + a)^{-s} for a in (0, 1].

    `a` may be an array; the result then has the same shape.  With
    `regularized=True` the pole is removed: the value is
    zeta(s, a) - 1/(s - 1), finite at s = 1 where it equals -digamma(a).
    """
    s = complex(s)
    if not regularized and abs(s - 1) < POLE_TOL:
        raise PoleError(f"zeta(s, a) has a pole at s = 1 (got s = {s})")
    scalar = np.ndim(a) == 0
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0) or np.any(a > 1):
        raise DomainError("Hurwitz parameter must lie in (0, 1]")
    n_shift = em_shift(s)
    x = a[..., None] + np.arange(n_shift)
    head = np.exp(-s * np.log(x)).sum(axis=-1)

    w = a + n_shift
    log_w = np.log(w)
    w_pow = np.exp(-s * log_w)
    if regularized:
        # (w^{1-s} - 1)/(s - 1), continuous through s = 1
        if s == 1:
            pole_part = -log_w
        else:
            pole_part = np.expm1((1 - s) * log_w) / (s - 1)
    else:
        pole_part = w * w_pow / (s - 1)
    total = head + pole_part + 0.5 * w_pow
    inv_w2 = 1.0 / (w * w)
    term = s * w_pow / w
    for k in range(1, EM_DEPTH + 1):
        total = total + EM_COEFFS[k - 1] * term
        term = term * (s + 2 * k - 1) * (s + 2 * k) * inv_w2
    return complex(total) if scalar else total


def riemann_zeta(s) -> complex:
    return hurwitz_zeta(s, 1.0)


# -- gamma family ----------------------------------------------------------------

def _check_gamma_poles(z: np.ndarray):
    bad = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(bad):
        raise PoleError("gamma function has poles at non-positive integers")


def log_gamma(z):
    """Principal branch of log Gamma(z); accepts scalars or arrays."""
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    _check_gamma_poles(z)
    shift = max(0, math.ceil(STIRLING_SHIFT - float(np.min(z.real)))) if z.size else 0
    acc = np.zeros_like(z)
    for k in range(shift):
        acc = acc + np.log(z + k)
    w = z + shift
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    pw = inv
    for c in STIRLING_COEFFS:
        series = series + c * pw
        pw = pw * inv2
    out = (w - 0.5) * np.log(w) - w + 0.5 * math.log(2 * math.pi) + series - acc
    return complex(out) if scalar else out


def gamma(z):
    out = np.exp(log_gamma(z))
    return complex(out) if np.ndim(out) == 0 else out


def digamma(z):
    """Gamma'(z)/Gamma(z); accepts scalars or arrays."""
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    _check_gamma_poles(z)
    shift = max(0, math.ceil(STIRLING_SHIFT - float(np.min(z.real)))) if z.size else 0
    acc = np.zeros_like(z)
    for k in range(shift):
        acc = acc + 1.0 / (z + k)
    w = z + shift
    inv2 = 1.0 / (w * w)
    series = np.zeros_like(w)
    pw = inv2
    for c in DIGAMMA_COEFFS:
        series = series + c * pw
        pw = pw * inv2
    out = np.log(w) - 0.5 / w - series - acc
    return complex(out) if scalar else out
