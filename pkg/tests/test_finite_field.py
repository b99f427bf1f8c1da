import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hermcode.finite_field import DEFINING_POLYNOMIALS, build_field, conjugate, nullspace, rank, rref

FIELDS = {t: build_field(t) for t in DEFINING_POLYNOMIALS}


def elements(t):
    return st.integers(min_value=0, max_value=t * t - 1)


@pytest.mark.parametrize("t,p", [(2, 2), (3, 3), (4, 2), (5, 5)])
def test_order_and_characteristic(t, p):
    f = FIELDS[t]
    assert f.q == t * t
    assert f.p == p
    assert list(f.elements) == list(range(t * t))
    # p * 1 = 0
    acc = 0
    for _ in range(p):
        acc = f.add(acc, 1)
    assert acc == 0


@pytest.mark.parametrize("t", [2, 3, 4])
def test_axioms_by_exhaustion(t):
    f = FIELDS[t]
    q = f.q
    for a, b, c in itertools.product(range(q), repeat=3):
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    for a in range(q):
        assert f.add(a, 0) == a and f.mul(a, 1) == a
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1


def test_gf4_omega():
    f = FIELDS[2]
    w = 2  # the class of x
    assert f.mul(w, w) == f.add(w, 1)
    assert conjugate(w, f) == f.mul(w, w) == f.add(w, 1)
    assert conjugate(1, f) == 1


def test_gf9_conjugation_is_cube():
    f = FIELDS[3]
    for a in range(9):
        assert conjugate(a, f) == f.pow(a, 3)
        assert conjugate(conjugate(a, f), f) == a


@pytest.mark.parametrize("t", sorted(DEFINING_POLYNOMIALS))
def test_conjugation_fixes_subfield(t):
    f = FIELDS[t]
    fixed = [a for a in range(f.q) if f.conj(a) == a]
    assert fixed == sorted(f.subfield())
    assert len(fixed) == t


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        FIELDS[2].inv(0)


def test_unsupported_t():
    with pytest.raises(ValueError):
        build_field(7)


@given(st.sampled_from(sorted(DEFINING_POLYNOMIALS)).flatmap(lambda t: st.tuples(st.just(t), elements(t), elements(t))))
def test_conjugation_is_automorphism(args):
    t, a, b = args
    f = FIELDS[t]
    assert f.conj(f.add(a, b)) == f.add(f.conj(a), f.conj(b))
    assert f.conj(f.mul(a, b)) == f.mul(f.conj(a), f.conj(b))
    # the norm lands in GF(t)
    assert f.conj(f.norm(a)) == f.norm(a)


@given(st.sampled_from([2, 3, 4, 5]).flatmap(lambda t: st.tuples(st.just(t), st.lists(elements(t), min_size=8, max_size=8))))
def test_spread_collapse_matches_addition(args):
    t, xs = args
    f = FIELDS[t]
    acc = 0
    for x in xs:
        acc = f.add(acc, x)
    assert int(f.collapse(f.spread[xs].sum())) == acc


def test_rref_and_nullspace():
    f = FIELDS[3]
    rows = [[1, 2, 0, 1], [2, 1, 0, 2]]  # second row is 2 * first
    assert rank(rows, f) == 1
    r, piv = rref(rows, f)
    assert piv == [0]
    basis = nullspace(rows, 4, f)
    assert len(basis) == 3
    for v in basis:
        assert f.add(f.add(v[0], f.mul(2, v[1])), v[3]) == 0
