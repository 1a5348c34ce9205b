import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lowlying.characters import build_group, least_primitive_root
from lowlying.numeric import DomainError, sieve_primes

SMALL_PRIMES = [int(p) for p in sieve_primes(400).primes if p > 2]


@pytest.mark.parametrize("q,g", [(3, 2), (5, 2), (7, 3), (23, 5), (41, 6), (101, 2), (191, 19), (409, 21)])
def test_least_primitive_root(q, g):
    assert least_primitive_root(q) == g


def test_rejects_composite_and_two():
    for q in (1, 4, 91, 2):
        with pytest.raises(DomainError):
            build_group(q)


def test_discrete_log_inverts_powers():
    g = build_group(211)
    assert np.array_equal(g.powers[g.dlog[1:]], np.arange(1, 211))
    assert g.dlog[0] == -1


def test_quadratic_character_is_legendre_symbol():
    q = 101
    chi = build_group(q).character((q - 1) // 2)
    for n in range(1, q):
        legendre = 1 if pow(n, (q - 1) // 2, q) == 1 else -1
        assert chi(n) == pytest.approx(legendre, abs=1e-12)
    assert chi.is_real and chi.parity() == 1  # 101 = 1 mod 4


def test_character_values_vanish_on_multiples_of_q():
    chi = build_group(13).character(5)
    assert chi(0) == 0 and chi(26) == 0
    assert np.all(chi.values(np.array([0, 13, 39])) == 0)


def test_family_excludes_principal():
    fam = build_group(11).family()
    assert [c.j for c in fam] == list(range(1, 10))
    assert all(not c.is_principal for c in fam)


def test_gauss_sum_quadratic():
    # tau = sqrt(q) for q = 1 mod 4 and i sqrt(q) for q = 3 mod 4
    for q in (13, 101, 7, 103):
        tau = build_group(q).character((q - 1) // 2).gauss_sum()
        expected = math.sqrt(q) if q % 4 == 1 else 1j * math.sqrt(q)
        assert tau == pytest.approx(expected, abs=1e-10)
    with pytest.raises(DomainError):
        build_group(7).character(0).gauss_sum()


@pytest.mark.parametrize("q", [3, 11, 101])
def test_orthogonality_relations(q):
    g = build_group(q)
    vals = np.array([g.character(j).values(np.arange(q)) for j in range(q - 1)])
    # rows: sum_n chi(n) conj psi(n) = (q - 1) delta; columns: sum_chi chi(a) conj chi(b)
    assert np.allclose(vals @ vals.conj().T, (q - 1) * np.eye(q - 1), atol=1e-9)
    col = vals.conj().T @ vals
    expected = np.zeros((q, q))
    expected[1:, 1:] = (q - 1) * np.eye(q - 1)
    assert np.allclose(col, expected, atol=1e-9)


@given(q=st.sampled_from(SMALL_PRIMES), data=st.data())
def test_multiplicativity(q, data):
    g = build_group(q)
    j = data.draw(st.integers(0, q - 2))
    m = data.draw(st.integers(-10**6, 10**6))
    n = data.draw(st.integers(-10**6, 10**6))
    chi = g.character(j)
    assert abs(chi(m * n) - chi(m) * chi(n)) < 1e-12


@given(q=st.sampled_from(SMALL_PRIMES), data=st.data())
def test_conjugate_and_parity(q, data):
    chi = build_group(q).character(data.draw(st.integers(0, q - 2)))
    n = data.draw(st.integers(1, 10**5))
    assert abs(chi.conjugate()(n) - chi(n).conjugate()) < 1e-12
    assert chi(-1) == pytest.approx(chi.parity(), abs=1e-12)


@given(q=st.sampled_from(SMALL_PRIMES), data=st.data())
def test_gauss_sum_modulus(q, data):
    chi = build_group(q).character(data.draw(st.integers(1, q - 2)))
    assert abs(chi.gauss_sum()) ** 2 == pytest.approx(q, rel=1e-10)


@given(q=st.sampled_from(SMALL_PRIMES), n=st.integers(-10**6, 10**6))
def test_values_matches_scalar_call(q, n):
    chi = build_group(q).character(q // 3)
    assert chi.values(np.array([n]))[0] == pytest.approx(chi(n), abs=1e-12)
