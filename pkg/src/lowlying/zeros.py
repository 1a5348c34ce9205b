"""Critical-line zeros of L(s, chi): scanning, refinement, counting, D(chi, phi)."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .characters import DirichletCharacter
from .lfunctions import LContext, hardy_z, hardy_z_all, l_value, make_context
from .numeric import DomainError, log_gamma
from .parallel import resolve_workers
from .testfuncs import TestFunction

__all__ = [
    "ZeroList",
    "ZeroSum",
    "IncompleteZeroListError",
    "CountingError",
    "expected_count",
    "scan_zeros",
    "scan_family",
    "one_level_from_zeros",
    "zero_tail_bound",
    "write_zero_csv",
]

REFINE_XTOL = 1e-11
GRID_FRACTION = 8  # grid step = mean zero gap / GRID_FRACTION
RESCAN_FACTORS = (4, 16)  # finer grids tried for characters whose count comes up short
COUNT_ATTEMPTS = 5
COUNT_SLACK = 0.25
NEAR_ZERO = 1e-4


class IncompleteZeroListError(DomainError):
    def __init__(self, zl: ZeroList):
        self.deficit = int(round(zl.expected_count)) - zl.found_count
        super().__init__(
            f"zero list for q={zl.q}, j={zl.j} incomplete at T={zl.T:g}: "
            f"found {zl.found_count}, expected {zl.expected_count:.3f} (deficit {self.deficit})"
        )


class CountingError(DomainError):
    """The argument-principle contour kept passing too close to a zero."""


@dataclass
class ZeroList:
    q: int
    j: int
    T: float
    ordinates: np.ndarray
    expected_count: float
    failures: list = field(default_factory=list)  # brackets that did not converge

    @property
    def found_count(self) -> int:
        return len(self.ordinates)

    @property
    def complete(self) -> bool:
        return not self.failures and self.found_count == int(round(self.expected_count))


class ZeroSum(NamedTuple):
    value: float
    tail_bound: float


def mean_gap(q: int, T: float) -> float:
    return 2 * math.pi / max(1.0, math.log(q * max(T, 1.0) / (2 * math.pi)))


# -- counting -----------------------------------------------------------------

def _unrotated_theta(ctx: LContext, chi: DirichletCharacter, T: float) -> float:
    a = ctx.parity_bit(chi)
    return 0.5 * T * math.log(ctx.q / math.pi) + float(np.imag(log_gamma((0.5 + a + 1j * T) / 2)))


def _tracked_arg(ctx: LContext, chi: DirichletCharacter, t: float, n0: int = 16,
                 max_depth: int = 14) -> tuple[float, float]:
    """arg L(1/2 + it) continued from sigma = 2 along Im s = t.

    Also returns min |L| seen along the segment.
    """
    def f(sig):
        return l_value(ctx, chi, complex(sig, t))

    sig = np.linspace(2.0, 0.5, n0 + 1)
    vals = [f(x) for x in sig]
    start = math.atan2(vals[0].imag, vals[0].real)  # |L(2 + it) - 1| < 1, so principal
    total = start
    smallest = min(abs(v) for v in vals)

    def walk(a, fa, b, fb, depth):
        nonlocal smallest
        d = math.remainder(math.atan2(fb.imag, fb.real) - math.atan2(fa.imag, fa.real), 2 * math.pi)
        if abs(d) < 0.5 or depth >= max_depth:
            return d
        m = 0.5 * (a + b)
        fm = f(m)
        smallest = min(smallest, abs(fm))
        return walk(a, fa, m, fm, depth + 1) + walk(m, fm, b, fb, depth + 1)

    for i in range(n0):
        total += walk(sig[i], vals[i], sig[i + 1], vals[i + 1], 0)
    return total, smallest


def _raw_count(ctx: LContext, chi: DirichletCharacter, T: float) -> tuple[float, float]:
    """Argument-principle count of zeros with |Im| < T, and min |L| on the contour."""
    if T <= 0:
        raise DomainError("height T must be positive")
    up, m_up = _tracked_arg(ctx, chi, T)
    down, m_down = _tracked_arg(ctx, chi, -T)
    n = (2 * _unrotated_theta(ctx, chi, T) + up - down) / math.pi
    return n, min(m_up, m_down)


def _count_with_jitter(ctx: LContext, chi: DirichletCharacter, T: float) -> tuple[float, float]:
    """(count, height actually used); height is nudged when the contour grazes a zero."""
    step = 0.37 * mean_gap(ctx.q, T) / GRID_FRACTION
    for attempt in range(COUNT_ATTEMPTS):
        t_try = T + attempt * step
        n, smallest = _raw_count(ctx, chi, t_try)
        if abs(n - round(n)) < COUNT_SLACK and smallest > NEAR_ZERO:
            return n, t_try
    raise CountingError(
        f"zero count for q={ctx.q}, j={chi.j} unstable near T={T:g} after {COUNT_ATTEMPTS} attempts"
    )


def expected_count(ctx: LContext, chi: DirichletCharacter, T: float) -> float:
    """Number of zeros with |gamma| <= T predicted by the argument principle.

    If the contour passes within NEAR_ZERO of a zero the height is jittered
    upward; scan_zeros uses the same jittered height.
    """
    return _count_with_jitter(ctx, chi, T)[0]


# -- scanning -----------------------------------------------------------------

def _grid(q: int, T: float, factor: int = 1) -> np.ndarray:
    h = mean_gap(q, T) / (GRID_FRACTION * factor)
    n = int(math.ceil(2 * T / h)) + 1
    return np.linspace(-T, T, n)


def _refine(q: int, j: int, brackets: list, exact: list) -> tuple[list, list]:
    ctx = make_context(q)
    chi = ctx.group.character(j)
    roots = list(exact)
    failures = []
    for a, b in brackets:
        try:
            r = brentq(lambda t: hardy_z(ctx, chi, t), a, b, xtol=REFINE_XTOL, maxiter=200)
        except (RuntimeError, ValueError) as exc:
            failures.append((a, b, str(exc)))
            continue
        roots.append(r)
    return sorted(roots), failures


def _brackets(t: np.ndarray, z: np.ndarray) -> tuple[list, list]:
    exact = [float(x) for x in t[z == 0.0]]
    idx = np.flatnonzero(z[:-1] * z[1:] < 0)
    return [(float(t[i]), float(t[i + 1])) for i in idx], exact


def scan_family(ctx: LContext, T: float, chars=None, workers: int | None = None) -> list[ZeroList]:
    """Zero lists for several characters (default: all of F_q), in index order.

    One grid evaluation serves every character; refinement is per character
    and may be spread over worker processes.
    """
    if T <= 0:
        raise DomainError("height T must be positive")
    chars = ctx.group.family() if chars is None else list(chars)
    heights = {}
    counts = {}
    for chi in chars:
        counts[chi.j], heights[chi.j] = _count_with_jitter(ctx, chi, T)

    n_workers = resolve_workers(workers)
    results = {}
    pending = list(chars)
    for factor in (1,) + RESCAN_FACTORS:
        grids = {}
        for h in sorted({heights[chi.j] for chi in pending}):
            t = _grid(ctx.q, h, factor)
            grids[h] = (t, np.array([hardy_z_all(ctx, x) for x in t]))
        jobs = []
        for chi in pending:
            t, z = grids[heights[chi.j]]
            br, exact = _brackets(t, z[:, chi.j])
            jobs.append((ctx.q, chi.j, br, exact))
        if n_workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=n_workers) as pool:
                found = list(pool.map(_refine, *zip(*jobs)))
        else:
            found = [_refine(*job) for job in jobs]
        for chi, res in zip(pending, found):
            results[chi.j] = res
        # a finer grid only helps when zeros are missing
        pending = [chi for chi in pending
                   if len(results[chi.j][0]) < int(round(counts[chi.j]))]
        if not pending:
            break

    out = []
    for chi in chars:
        roots, failures = results[chi.j]
        out.append(ZeroList(ctx.q, chi.j, heights[chi.j], np.array(roots, dtype=float),
                            counts[chi.j], failures))
    return out


def scan_zeros(ctx: LContext, chi: DirichletCharacter, T: float) -> ZeroList:
    """Critical-line ordinates of L(s, chi) in [-T, T] with a completeness check."""
    return scan_family(ctx, T, [chi], workers=1)[0]


# -- zero-side statistic ---------------------------------------------------------

def zero_tail_bound(phi: TestFunction, q: int, T: float) -> float:
    """Estimated bound on sum over |gamma| > T of |phi(gamma log q / 2 pi)|.

    Uses the zero density (1/pi) log(q t / 2 pi) and the decay of phi, with a
    factor 2 of slack for fluctuations in the zero count.
    """
    if phi.decay_const == 0:
        return 0.0
    L = math.log(q)
    d = phi.decay_order
    integral = T ** (1 - d) / (d - 1) * (math.log(q * T / (2 * math.pi)) + 1 / (d - 1))
    return 2 * phi.decay_const / math.pi * (2 * math.pi / L) ** d * integral


def one_level_from_zeros(zl: ZeroList, phi: TestFunction, q: int | None = None) -> ZeroSum:
    """D(chi, phi) from a complete zero list, with the tail bound beyond T."""
    if not zl.complete:
        raise IncompleteZeroListError(zl)
    q = zl.q if q is None else q
    L = math.log(q)
    value = float(np.sum(phi.phi(zl.ordinates * L / (2 * math.pi)))) if zl.found_count else 0.0
    return ZeroSum(value, zero_tail_bound(phi, q, zl.T))


def write_zero_csv(zero_lists, path_or_file):
    """Rows (q, j, gamma) with 12 significant digits."""
    own = isinstance(path_or_file, str)
    fh = open(path_or_file, "w", newline="", encoding="utf-8") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["q", "j", "gamma"])
        for zl in zero_lists:
            for g in zl.ordinates:
                w.writerow([zl.q, zl.j, f"{g:.12g}"])
    finally:
        if own:
            fh.close()
