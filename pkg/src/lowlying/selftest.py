"""Small-scale invariant suite (q <= 211) run by `lowlying selftest`."""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import characters, density, lfunctions, moments, numeric
from .characters import build_group
from .density import (one_level_primeside, primeside_char, unweighted_one_level,
                      weight_vector)
from .lfunctions import completed_l, l_series_oracle, l_value, make_context
from .numeric import (digamma, gamma, hurwitz_zeta, riemann_zeta, segmented_sieve,
                      sieve_primes)
from .testfuncs import W_U1, kernel_integral, triangle, triangle_conv, x_side_kernel_integral
from .zeros import one_level_from_zeros, scan_family

# Moments ceilings on the error scales used by moment_report.
SELBERG_CEILING = 20.0
CENTRAL_CEILING = 10.0


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0


def clear_caches():
    """Drop memoized values so a patched numeric core is seen everywhere."""
    lfunctions._hurwitz_vector.cache_clear()
    lfunctions.make_context.cache_clear()
    characters.build_group.cache_clear()
    moments._l_vector.cache_clear()
    density._weight_vector.cache_clear()
    numeric.primes_upto.cache_clear()


def _rel(a, b) -> float:
    return abs(a - b) / abs(b)


# -- checks -----------------------------------------------------------------------

def check_hurwitz_closed_forms():
    cases = [
        (hurwitz_zeta(2, 1), math.pi**2 / 6),
        (hurwitz_zeta(4, 1), math.pi**4 / 90),
        (hurwitz_zeta(2, 0.5), math.pi**2 / 2),
        (hurwitz_zeta(2, 0.25), math.pi**2 + 8 * 0.915965594177219015),  # Catalan's constant
    ]
    err = max(_rel(complex(v).real, ref) for v, ref in cases)
    return err < 1e-12, f"max rel err {err:.2e}"


def check_hurwitz_half_identity():
    pts = [0.3 + 5j, 0.75, 2.0 + 20j, 0.5 + 100j, 1.5 - 40j]
    err = max(abs(hurwitz_zeta(s, 0.5) - (2**s - 1) * riemann_zeta(s)) / abs(riemann_zeta(s)) for s in pts)
    return err < 1e-10, f"max rel residual {err:.2e}"


def check_gamma():
    errs = [
        _rel(complex(gamma(0.5)).real, math.sqrt(math.pi)),
        _rel(complex(gamma(5.0)).real, 24.0),
        _rel(complex(digamma(1.0)).real, -numeric.EULER_GAMMA),
    ]
    z = 0.3 + 7.1j
    refl = abs(gamma(z) * gamma(1 - z) * np.sin(np.pi * z) / np.pi - 1)
    err = max(errs + [float(refl)])
    return err < 1e-12, f"max rel err {err:.2e}"


def check_sieves():
    a, b = sieve_primes(10**5), segmented_sieve(10**5, segment=4096)
    ok = len(a.primes) == 9592 and np.array_equal(a.primes, b.primes)
    return ok, f"pi(1e5) = {len(a.primes)}"


def check_orthogonality():
    worst = 0.0
    for q in (11, 101):
        g = build_group(q)
        chars = [g.character(j) for j in range(g.order)]
        n = np.arange(q)
        vals = np.array([ch.values(n) for ch in chars])
        gram = vals @ vals.conj().T
        worst = max(worst, float(np.max(np.abs(gram - (q - 1) * np.eye(q - 1)))))
    return worst < 1e-9, f"max Gram deviation {worst:.2e}"


def check_multiplicativity():
    g = build_group(101)
    rng = np.random.default_rng(0)
    worst = 0.0
    for j in (1, 7, 50):
        ch = g.character(j)
        for m, n in rng.integers(1, 10**6, size=(50, 2)):
            worst = max(worst, abs(ch(int(m) * int(n)) - ch(int(m)) * ch(int(n))))
    return worst < 1e-12, f"max deviation {worst:.2e}"


def check_gauss_sums():
    worst = 0.0
    for q in (5, 101, 211):
        ctx = make_context(q)
        worst = max(worst, float(np.max(np.abs(np.abs(ctx.gauss_sums[1:]) ** 2 / q - 1))))
    return worst < 1e-10, f"max | |tau|^2/q - 1 | = {worst:.2e}"


def check_functional_equation():
    worst = 0.0
    for q in (3, 5, 101):
        ctx = make_context(q)
        for ch in ctx.group.family()[:6]:
            for s in (0.3 + 4j, 0.5 + 17j, 0.7 - 9j):
                lhs = completed_l(ctx, ch, s)
                rhs = ctx.root_number(ch) * completed_l(ctx, ch.conjugate(), 1 - s)
                worst = max(worst, abs(lhs - rhs) / abs(lhs))
    return worst < 1e-9, f"max rel residual {worst:.2e}"


def check_l_series():
    ctx = make_context(101)
    worst = 0.0
    for ch in (ctx.group.character(1), ctx.group.character(50)):
        ref, tail = l_series_oracle(ch, 2.0 + 3j, 20000)
        worst = max(worst, abs(l_value(ctx, ch, 2.0 + 3j) - ref) - tail)
    return worst < 1e-10, f"excess over tail bound {worst:.2e}"


def check_l_at_one():
    ctx = make_context(3)
    v = l_value(ctx, ctx.group.character(1), 1.0)
    ref = math.pi / (3 * math.sqrt(3))
    return _rel(v.real, ref) < 1e-12, f"L(1, chi_3) = {v.real:.15f}"


def check_zero_completeness():
    parts = []
    ok = True
    for q in (3, 5, 101):
        zls = scan_family(make_context(q), 30.0, workers=1)
        done = sum(z.complete for z in zls)
        ok &= done == len(zls)
        parts.append(f"q={q}: {done}/{len(zls)}")
    return ok, ", ".join(parts)


def check_first_zero():
    ctx = make_context(3)
    zl = scan_family(ctx, 10.0, workers=1)[0]
    pos = zl.ordinates[zl.ordinates > 0]
    ok = zl.complete and len(pos) and abs(pos[0] - 8.0397371) < 1e-6
    return bool(ok), f"first ordinate {pos[0] if len(pos) else float('nan'):.9f}"


def check_selberg_moment():
    worst = max(moments.moment_report(q, 0.75, m=m).normalized_error
                for q in (101, 211) for m in (1, 2, 3))
    return worst <= SELBERG_CEILING, f"max normalized error {worst:.3f}"


def check_central_moment():
    worst = max(moments.moment_report(q, 0.5, m=m).normalized_error
                for q in (101, 211) for m in (1, 2, 3))
    return worst <= CENTRAL_CEILING, f"max normalized error {worst:.3f}"


def check_fourier_identity():
    phi = triangle(1 / 3)
    v = kernel_integral(phi, W_U1)
    xs, tail = x_side_kernel_integral(phi, W_U1)
    ok = abs(v - 19 / 27) < 1e-8 and abs(xs - v) < 1e-4
    return ok, f"closed form err {abs(v - 19 / 27):.1e}, x-side err {abs(xs - v):.1e}"


def check_density_components():
    ctx = make_context(211)
    phi = triangle(1 / 3)
    st = one_level_primeside(weight_vector(ctx, 0.5), phi)
    un = unweighted_one_level(ctx, phi, mode="prime").value
    ok = st.value == st.phi_hat_zero - st.m1 - st.m2 and un == 1.0
    return ok, f"weighted {st.value:.6f}, unweighted {un:.6f}"


def check_explicit_formula():
    ctx = make_context(101)
    phi = triangle_conv(1 / 6)
    chars = [ctx.group.character(j) for j in (1, 2)]
    worst, bound = 0.0, 0.0
    for ch, zl in zip(chars, scan_family(ctx, 40.0, chars, workers=1)):
        z, tail = one_level_from_zeros(zl, phi)
        worst = max(worst, abs(z - primeside_char(ctx, ch, phi, exact=True)))
        bound = max(bound, tail)
    return worst <= bound + 1e-6, f"zero/prime residual {worst:.2e} (tail {bound:.2e})"


CHECKS: list[tuple[str, Callable]] = [
    ("hurwitz_closed_forms", check_hurwitz_closed_forms),
    ("hurwitz_half_identity", check_hurwitz_half_identity),
    ("gamma_digamma", check_gamma),
    ("prime_sieves", check_sieves),
    ("character_orthogonality", check_orthogonality),
    ("character_multiplicativity", check_multiplicativity),
    ("gauss_sum_modulus", check_gauss_sums),
    ("functional_equation", check_functional_equation),
    ("l_series_agreement", check_l_series),
    ("l_value_at_one", check_l_at_one),
    ("zero_list_completeness", check_zero_completeness),
    ("first_zero_mod_3", check_first_zero),
    ("selberg_moment", check_selberg_moment),
    ("central_moment", check_central_moment),
    ("fourier_identity", check_fourier_identity),
    ("density_components", check_density_components),
    ("explicit_formula", check_explicit_formula),
]


def run_checks(names=None) -> list[CheckResult]:
    clear_caches()
    out = []
    for name, fn in CHECKS:
        if names and name not in names:
            continue
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed invariant, reported by name
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    clear_caches()
    return out


def main(stream=None, timing: bool = False) -> int:
    stream = stream or sys.stdout
    results = run_checks()
    for r in results:
        line = f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}"
        if timing:
            line += f" [{r.seconds:.1f}s]"
        print(line, file=stream)
    failed = [r.name for r in results if not r.ok]
    if failed:
        print(f"selftest failed: {', '.join(failed)}", file=stream)
        return 1
    print(f"selftest passed ({len(results)} checks)", file=stream)
    return 0
