import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lowlying.lfunctions import (
    AccuracyError,
    completed_l,
    hardy_rotated,
    hardy_theta,
    hardy_z,
    hardy_z_all,
    l_series_oracle,
    l_value,
    l_values,
    make_context,
)
from lowlying.numeric import PoleError

mpmath.mp.dps = 25


def _mp_l(chi, s):
    vals = [complex(chi(n)) for n in range(chi.q)]
    return complex(mpmath.dirichlet(s, vals))


@pytest.mark.parametrize("q,j", [(3, 1), (5, 1), (5, 2), (11, 3), (101, 1), (101, 50), (101, 77)])
@pytest.mark.parametrize("s", [0.5 + 1j, 0.5 + 37.3j, 0.75, 0.2 - 60j, 1.0 + 0.5j, 2.5 + 150j])
def test_l_value_against_mpmath(q, j, s):
    ctx = make_context(q)
    chi = ctx.group.character(j)
    ref = _mp_l(chi, s)
    assert abs(l_value(ctx, chi, s) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_class_number_values_at_one():
    # L(1, chi_{-3}) = pi / (3 sqrt 3); L(1, (./5)) = 2 log(golden ratio) / sqrt 5
    ctx3, ctx5 = make_context(3), make_context(5)
    assert l_value(ctx3, ctx3.group.character(1), 1).real == pytest.approx(math.pi / (3 * math.sqrt(3)), rel=1e-13)
    golden = (1 + math.sqrt(5)) / 2
    assert l_value(ctx5, ctx5.group.character(2), 1).real == pytest.approx(
        2 * math.log(golden) / math.sqrt(5), rel=1e-13)


def test_principal_pole():
    ctx = make_context(7)
    with pytest.raises(PoleError):
        l_value(ctx, ctx.group.character(0), 1.0)
    assert np.isnan(l_values(ctx, 1.0)[0])
    # principal L(s) = (1 - q^{-s}) zeta(s)
    s = 0.5 + 3j
    ref = (1 - 7 ** (-s)) * complex(mpmath.zeta(s))
    assert l_value(ctx, ctx.group.character(0), s) == pytest.approx(ref, rel=1e-12)


def test_accuracy_region_enforced():
    ctx = make_context(5)
    chi = ctx.group.character(1)
    for s in (0.1 + 1j, 3.5, 0.5 + 250j):
        with pytest.raises(AccuracyError):
            l_value(ctx, chi, s)


def test_l_values_vector_matches_single():
    ctx = make_context(211)
    v = l_values(ctx, 0.5 + 10j)
    for j in (1, 2, 105, 209):
        assert v[j] == pytest.approx(l_value(ctx, ctx.group.character(j), 0.5 + 10j), rel=1e-12)


def test_series_oracle_plain_and_smooth():
    ctx = make_context(1009)
    chi = ctx.group.character(3)
    exact = l_value(ctx, chi, 1.5 + 2j)
    v, tail = l_series_oracle(chi, 1.5 + 2j, 20000)
    assert abs(v - exact) <= tail
    v_s, _ = l_series_oracle(chi, 1.5 + 2j, 20000, smooth=True)
    assert abs(v_s - exact) < 1e-9


def test_root_numbers_quadratic():
    # real characters have eps = 1
    for q in (5, 7, 101, 103):
        ctx = make_context(q)
        assert ctx.root_number(ctx.group.character((q - 1) // 2)) == pytest.approx(1, abs=1e-12)


def test_first_zero_mod_three():
    ctx = make_context(3)
    chi = ctx.group.character(1)
    # 8.0397371568... is the lowest zero of L(s, chi_{-3})
    assert abs(l_value(ctx, chi, 0.5 + 8.039737156j)) < 1e-8
    assert hardy_z(ctx, chi, 8.0) * hardy_z(ctx, chi, 8.1) < 0


@pytest.mark.parametrize("q", [3, 5, 101])
def test_functional_equation(q):
    ctx = make_context(q)
    for chi in ctx.group.family():
        for s in (0.3 + 4j, 0.5 + 17j, 0.7 - 9j):
            lhs = completed_l(ctx, chi, s)
            rhs = ctx.root_number(chi) * completed_l(ctx, chi.conjugate(), 1 - s)
            assert abs(lhs - rhs) <= 1e-9 * abs(lhs)


def test_root_numbers_unimodular():
    ctx = make_context(211)
    assert np.allclose(np.abs(ctx.root_numbers[1:]), 1, atol=1e-12)


@given(q=st.sampled_from([5, 7, 11, 101, 211]), data=st.data(), t=st.floats(-150, 150))
def test_hardy_z_is_real_with_modulus_of_l(q, data, t):
    ctx = make_context(q)
    chi = ctx.group.character(data.draw(st.integers(1, q - 2)))
    r = hardy_rotated(ctx, chi, t)
    lv = abs(l_value(ctx, chi, 0.5 + 1j * t))
    assert abs(r.imag) <= 1e-10 * max(1.0, lv)
    assert abs(abs(r) - lv) <= 1e-12 * max(1.0, lv)


@given(q=st.sampled_from([5, 7, 11, 101]), data=st.data(), t=st.floats(0.1, 100))
def test_hardy_z_reflection(q, data, t):
    ctx = make_context(q)
    chi = ctx.group.character(data.draw(st.integers(1, q - 2)))
    eps = ctx.root_number(chi)
    sign = -1 if abs(eps + 1) < 1e-9 else 1
    assert hardy_z(ctx, chi, -t) == pytest.approx(sign * hardy_z(ctx, chi.conjugate(), t), abs=1e-10)


@given(t=st.floats(-150, 150))
def test_hardy_z_all_matches_single(t):
    ctx = make_context(101)
    z = hardy_z_all(ctx, t)
    assert np.isnan(z[0])
    for j in (1, 50, 99):
        assert z[j] == pytest.approx(hardy_z(ctx, ctx.group.character(j), t), abs=1e-10)


def test_hardy_theta_vectorized():
    ctx = make_context(11)
    chi = ctx.group.character(3)
    t = np.array([0.0, 1.0, 40.0])
    assert np.allclose(hardy_theta(ctx, chi, t), [hardy_theta(ctx, chi, x) for x in t])
