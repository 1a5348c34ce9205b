import io
import math

import mpmath
import numpy as np
import pytest

from lowlying.lfunctions import make_context
from lowlying.numeric import DomainError
from lowlying.testfuncs import triangle, zero_function
from lowlying.zeros import (
    IncompleteZeroListError,
    ZeroList,
    expected_count,
    one_level_from_zeros,
    scan_family,
    scan_zeros,
    write_zero_csv,
    zero_tail_bound,
)


@pytest.fixture(scope="module")
def family_101():
    return scan_family(make_context(101), 30.0, workers=1)


def test_first_zero_mod_three():
    ctx = make_context(3)
    zl = scan_zeros(ctx, ctx.group.character(1), 10.0)
    assert zl.complete
    # chi_{-3} is real, so zeros come in pairs +-gamma
    assert np.allclose(zl.ordinates, [-8.0397371568, 8.0397371568], atol=1e-9)


def test_no_zeros_below_low_height():
    ctx = make_context(5)
    zl = scan_zeros(ctx, ctx.group.character(1), 0.5)
    assert zl.complete and zl.found_count == 0


def test_zeros_are_zeros_by_mpmath():
    ctx = make_context(11)
    chi = ctx.group.character(3)
    zl = scan_zeros(ctx, chi, 15.0)
    vals = [complex(chi(n)) for n in range(11)]
    for g in zl.ordinates[::3]:
        assert abs(complex(mpmath.dirichlet(0.5 + 1j * g, vals))) < 1e-9


@pytest.mark.parametrize("q", [3, 5])
def test_completeness_small(q):
    zls = scan_family(make_context(q), 30.0, workers=1)
    assert all(z.complete for z in zls)


def test_completeness_101(family_101):
    assert len(family_101) == 99
    assert all(z.complete for z in family_101)


def test_conjugate_characters_have_mirrored_zeros(family_101):
    by_j = {z.j: z for z in family_101}
    for j in (1, 7, 33):
        a = by_j[j].ordinates
        b = -by_j[101 - 1 - j].ordinates[::-1]
        # heights may differ by the counting jitter; compare the common window
        h = min(by_j[j].T, by_j[101 - 1 - j].T) - 1e-6
        assert np.allclose(a[np.abs(a) < h], b[np.abs(b) < h], atol=1e-8)


def test_expected_count_matches_riemann_von_mangoldt():
    ctx = make_context(101)
    chi = ctx.group.character(1)
    n = expected_count(ctx, chi, 30.0)
    # N(T) for |gamma| <= T is about (T/pi) log(q T / (2 pi e))
    approx = 30 / math.pi * math.log(101 * 30 / (2 * math.pi * math.e))
    assert abs(n - round(n)) < 0.25
    assert abs(n - approx) < 3


def test_incomplete_list_refused():
    zl = ZeroList(7, 1, 10.0, np.array([1.0]), expected_count=3.0)
    with pytest.raises(IncompleteZeroListError) as err:
        one_level_from_zeros(zl, triangle(0.3))
    assert err.value.deficit == 2


def test_bad_height():
    ctx = make_context(5)
    with pytest.raises(DomainError):
        scan_family(ctx, 0.0)


def test_one_level_from_zeros(family_101):
    zl = family_101[0]
    phi = triangle(1 / 3)
    v, tail = one_level_from_zeros(zl, phi)
    L = math.log(101)
    assert v == pytest.approx(float(np.sum(phi.phi(zl.ordinates * L / (2 * math.pi)))))
    assert tail == zero_tail_bound(phi, 101, zl.T) > 0
    assert one_level_from_zeros(zl, zero_function()).value == 0.0


def test_worker_count_does_not_change_result():
    ctx = make_context(23)
    a = scan_family(ctx, 20.0, workers=1)
    b = scan_family(ctx, 20.0, workers=2)
    for x, y in zip(a, b):
        assert np.array_equal(x.ordinates, y.ordinates)


def test_csv_export():
    ctx = make_context(3)
    buf = io.StringIO()
    write_zero_csv(scan_family(ctx, 10.0, workers=1), buf)
    assert buf.getvalue() == "q,j,gamma\n3,1,-8.03973715568\n3,1,8.03973715568\n"
