import itertools
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hssp.errors import ParameterError
from hssp.group import (
    GroupParams,
    act,
    brute_force_stabilizer,
    conjugate_subgroup,
    inverse,
    multiplication_table,
    multiply,
    phi_apply,
    stabilizer_of,
)


def slow_phi(params, h, x):
    # independent oracle: h-fold repeated multiplication, no pow()
    out = x
    for _ in range(h % params.p):
        out = out * params.phi_gen % params.modulus
    return out


@st.composite
def group_params(draw, primes=(3, 5, 7, 11), max_n=4):
    p = draw(st.sampled_from(primes))
    n = draw(st.integers(2, max_n))
    r = draw(st.integers(1, p - 1))
    return GroupParams(p, n, r)


@st.composite
def params_and_elements(draw, count=2):
    params = draw(group_params())
    elems = [
        params.element(draw(st.integers(0, params.modulus - 1)), draw(st.integers(0, params.p - 1)))
        for _ in range(count)
    ]
    x = draw(st.integers(0, params.modulus - 1))
    return params, elems, params.k(x)


@pytest.mark.parametrize(
    "p,n,r", [(4, 2, 1), (2, 3, 1), (9, 2, 1), (3, 1, 1), (3, 2, 0), (3, 2, 3), (5, 2, -1)]
)
def test_bad_params_rejected(p, n, r):
    with pytest.raises(ParameterError):
        GroupParams(p, n, r)


def test_derived_fields(g321):
    assert g321.modulus == 9
    assert g321.phi_gen == 4
    assert g321.order == 27


@given(group_params())
def test_phi_gen_has_order_p(params):
    g, m = params.phi_gen, params.modulus
    assert gcd(g, m) == 1
    assert pow(g, params.p, m) == 1
    assert all(pow(g, k, m) != 1 for k in range(1, params.p))


def test_phi_apply_examples(g321):
    assert all(phi_apply(g321, 0, x) == x for x in range(9))
    assert phi_apply(g321, 1, 2) == 8
    assert all(phi_apply(g321, h, 3) == 3 for h in range(3))


@given(group_params(), st.data())
def test_phi_apply_matches_repeated_multiplication(params, data):
    h = data.draw(st.integers(0, params.p - 1))
    x = data.draw(st.integers(0, params.modulus - 1))
    assert phi_apply(params, h, x) == slow_phi(params, h, x)


@given(group_params(), st.data())
def test_phi_is_homomorphism(params, data):
    h1, h2 = data.draw(st.integers(0, params.p - 1)), data.draw(st.integers(0, params.p - 1))
    x = data.draw(st.integers(0, params.modulus - 1))
    assert phi_apply(params, (h1 + h2) % params.p, x) == phi_apply(params, h1, phi_apply(params, h2, x))


def test_multiply_examples(g321):
    e = g321.identity
    assert all(multiply(e, g) == g for g in g321.elements())
    assert multiply(g321.element(0, 1), g321.element(1, 0)).astuple() == (4, 1)
    assert all(multiply(g, inverse(g)) == e for g in g321.elements())


def test_inverse_examples(g321):
    assert inverse(g321.identity) == g321.identity
    assert inverse(g321.element(1, 0)).astuple() == (8, 0)
    assert inverse(g321.element(0, 1)).astuple() == (0, 2)


def test_associativity_exhaustive(g321):
    elems = list(g321.elements())
    for a, b, c in itertools.product(elems, repeat=3):
        assert (a * b) * c == a * (b * c)


def test_multiplication_table_matches_multiply():
    params = GroupParams(5, 2, 3)
    T = multiplication_table(params)
    for g in params.elements():
        for h in params.elements():
            assert params.from_index(T[params.index(g), params.index(h)]) == g * h


@given(params_and_elements(count=2))
def test_action_axioms(args):
    params, (g, h), k = args
    assert act(g * h, k) == act(g, act(h, k))
    assert act(params.identity, k) == k


def test_action_is_conjugation(g321):
    # (y,h) o (x,0) equals the first coordinate of (y,h)(x,0)(0,-h)
    for g in g321.elements():
        for x in range(9):
            conj = g * g321.element(x, 0) * g321.element(0, -g.b)
            assert conj.b == 0
            assert act(g, g321.k(x)).x == conj.a


def test_act_examples(g321):
    assert all(act(g321.identity, g321.k(x)).x == x for x in range(9))
    assert act(g321.element(0, 1), g321.k(1)).x == 4
    assert all(act(g321.element(0, h), g321.k(6)).x == 6 for h in range(3))


def test_mismatched_params_rejected(g321):
    other = GroupParams(3, 2, 2)
    with pytest.raises(ParameterError):
        multiply(g321.element(1, 1), other.element(1, 1))
    with pytest.raises(ParameterError):
        act(g321.element(1, 1), other.k(1))


def test_element_range_checked(g321):
    from hssp.group import GroupElement

    with pytest.raises(ParameterError):
        GroupElement(g321, 9, 0)
    with pytest.raises(ParameterError):
        GroupElement(g321, 0, 3)


def test_conjugate_subgroup_examples(g321):
    H = {g321.element(0, h) for h in range(3)}
    assert conjugate_subgroup(g321, 0) == H
    assert {g.astuple() for g in conjugate_subgroup(g321, 1)} == {(0, 0), (6, 1), (3, 2)}
    with pytest.raises(ParameterError):
        conjugate_subgroup(g321, 3)


@given(group_params(max_n=3), st.data())
def test_conjugate_subgroup_closed_form(params, data):
    t = data.draw(st.integers(0, params.p - 1))
    S = conjugate_subgroup(params, t)
    q = params.p ** (params.n - 1)
    closed = {params.element(-t * h * params.r * q, h) for h in range(params.p)}
    assert S == closed
    assert all(a * b in S for a in S for b in S)


def test_conjugation_by_any_point_of_P_t(g321):
    for x in range(9):
        conj = {g321.element(x, 0) * s * g321.element(-x, 0) for s in conjugate_subgroup(g321, 0)}
        assert conjugate_subgroup(g321, x % 3) == conj


def test_stabilizer_examples(g321):
    assert stabilizer_of(g321, g321.k(0)) == conjugate_subgroup(g321, 0)
    assert stabilizer_of(g321, g321.k(4)) == conjugate_subgroup(g321, 1)
    brute = {g for g in g321.elements() if act(g, g321.k(4)) == g321.k(4)}
    assert {g.astuple() for g in brute} == {(0, 0), (6, 1), (3, 2)}


@pytest.mark.parametrize("p,n,r", [(3, 2, 1), (3, 3, 2), (5, 2, 4), (7, 2, 3)])
def test_stabilizer_matches_brute_force(p, n, r):
    params = GroupParams(p, n, r)
    for x in range(params.modulus):
        scan = {g for g in params.elements() if act(g, params.k(x)).x == x}
        assert brute_force_stabilizer(params, x) == scan
        assert stabilizer_of(params, params.k(x)) == scan


@pytest.mark.parametrize("p,n,r", [(3, 2, 1), (5, 3, 2)])
def test_fixed_points_and_faithfulness(p, n, r):
    params = GroupParams(p, n, r)
    for y in range(params.modulus):
        images = [act(params.element(0, h), params.k(y)).x for h in range(p)]
        if gcd(y, p) > 1:
            assert set(images) == {y}
        else:
            assert len(set(images)) == p
