import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatks.linalg import det
from quatks.orders import (
    MuElement,
    MuNotFound,
    basis_change,
    check_star_stabilizes,
    find_mu,
    is_maximal,
    make_order,
    reduced_discriminant,
    star_involution,
    verify_order,
)
from quatks.quat import QuatAlgebra, QuaternionError, conjugate_main, reduced_norm, reduced_trace
from quatks.riemann import dual_lattice_index

h = Fraction(1, 2)


def std_order(a, b):
    A = QuatAlgebra(a, b)
    one = A.one()
    i, j, k = A.gens()
    return A, [one, i, j, k]


def test_closure_exhaustive(maximal_entries):
    # every product of basis elements, and every small combination, lands back in the lattice
    for e in maximal_entries:
        O = e.order()
        for x, y in itertools.product(O.basis, repeat=2):
            c = O.coordinates(x * y)
            assert all(v.denominator == 1 for v in c)
        for coeffs in itertools.product(range(-1, 2), repeat=4):
            q = O.element(coeffs)
            assert reduced_trace(q).denominator == 1 and reduced_norm(q).denominator == 1


def test_verify_order_rejects_non_rings():
    A, (one, i, j, k) = std_order(-1, 3)
    rep = verify_order(A, [one, i / 2, j, k])
    assert not rep.ok and not rep.norm_integral
    rep = verify_order(A, [2 * one, i, j, k])
    assert not rep.contains_one
    with pytest.raises(QuaternionError):
        verify_order(A, [one, i, j, i + j])
    with pytest.raises(QuaternionError):
        make_order(A, [one, (i + j) / 2, j, k])


def test_reduced_discriminants(catalog):
    for e in catalog.values():
        O = e.order()
        rd = reduced_discriminant(O)
        assert is_maximal(O) == e.maximal
        assert rd == (e.expected_d_B if e.maximal else 12)
        assert dual_lattice_index(O) == rd * rd


def test_lipschitz_order_in_hamilton_quaternions():
    A, basis = std_order(-1, -1)
    assert reduced_discriminant(make_order(A, basis)) == 4
    hurwitz = basis[:3] + [(basis[0] + basis[1] + basis[2] + basis[3]) / 2]
    assert reduced_discriminant(make_order(A, hurwitz)) == 2


@st.composite
def unimodular(draw):
    U = [[int(i == j) for j in range(4)] for i in range(4)]
    for _ in range(draw(st.integers(0, 8))):
        r, c = draw(st.integers(0, 3)), draw(st.integers(0, 3))
        if r != c:
            f = draw(st.integers(-2, 2))
            U[r] = [x + f * y for x, y in zip(U[r], U[c])]
    if draw(st.booleans()):
        U[0] = [-x for x in U[0]]
    return U


@given(unimodular())
@settings(max_examples=30, deadline=None)
def test_discriminant_invariant_under_unimodular_change(U):
    A, basis = std_order(-1, 3)
    O = make_order(A, basis[:3] + [sum(basis, A.element()) / 2])
    assert abs(det(U)) == 1
    O2 = basis_change(O, U)
    assert reduced_discriminant(O2) == 6
    assert dual_lattice_index(O2) == 36
    mu = find_mu(O2)
    assert O.contains(mu.mu)


def test_find_mu_examples(catalog):
    A = QuatAlgebra(-1, 3)
    i, j, k = A.gens()
    assert find_mu(catalog["dB06"].order()).mu == 3 * i + j
    m2 = find_mu(catalog["M2Z"].order())
    assert m2.mu == QuatAlgebra(1, 1).gens()[2]


def test_find_mu_properties(maximal_entries):
    for e in maximal_entries:
        O = e.order()
        mu = find_mu(O)
        assert reduced_trace(mu.mu) == 0
        assert mu.mu * mu.mu == -e.expected_d_B
        assert O.contains(mu.mu)


def test_find_mu_errors(catalog):
    with pytest.raises(QuaternionError):
        find_mu(catalog["dB06-nonmaximal"].order())
    A, basis = std_order(-1, -1)
    hurwitz = make_order(A, basis[:3] + [sum(basis, A.element()) / 2])
    with pytest.raises(QuaternionError):
        find_mu(hurwitz)
    with pytest.raises(MuNotFound):
        find_mu(catalog["dB14"].order(), bound=1)


def test_mu_element_validation():
    A, (one, i, j, k) = std_order(-1, 3)
    with pytest.raises(QuaternionError):
        MuElement(one + i, 6)
    with pytest.raises(QuaternionError):
        MuElement(i, 6)


def test_star_is_involutive_anti_automorphism(polarized):
    for e, O, mu, _ in polarized:
        for x, y in itertools.product(O.basis, repeat=2):
            assert star_involution(x * y, mu) == star_involution(y, mu) * star_involution(x, mu)
            assert star_involution(star_involution(x, mu), mu) == x
        assert check_star_stabilizes(O, mu)


def test_star_fails_on_a_smaller_order():
    A, (one, i, j, k) = std_order(-1, 3)
    mu = MuElement(3 * i + j, 6)
    assert check_star_stabilizes(make_order(A, [one, i, j, k]), mu)
    small = make_order(A, [one, i, 3 * j, 3 * k])
    assert not check_star_stabilizes(small, mu)


def test_star_positive(polarized):
    # trd(x x^*) > 0 for nonzero x: the involution is positive
    for e, O, mu, _ in polarized:
        for coeffs in itertools.product(range(-1, 2), repeat=4):
            if any(coeffs):
                x = O.element(coeffs)
                assert reduced_trace(x * star_involution(x, mu)) > 0


def test_conjugating_mu_by_unit_keeps_stability(polarized):
    for e, O, mu, _ in polarized:
        for u in O.basis:
            if abs(reduced_norm(u)) == 1:
                mu2 = MuElement(u * mu.mu * u.inverse(), mu.d_B)
                if O.contains(mu2.mu):
                    assert check_star_stabilizes(O, mu2)
        assert conjugate_main(mu.mu) == -mu.mu
