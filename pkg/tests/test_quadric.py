import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermcode.hermitian_surface import GeometryError, LineClass
from hermcode.quadric import (
    TYPE_RANK,
    QuadraticForm,
    batch_classifier,
    classify,
    decompose_plane_pair,
    evaluate,
    irreducible_quadratic,
    product_form,
    reguli,
    zero_set,
)

F = QuadraticForm.from_terms
OMEGA = 2


def test_evaluate_examples(s2):
    sp, f = s2.space, s2.field
    assert evaluate(F({(0, 1): 1}), sp.normalize((0, 0, 1, 0)), f) == 0
    assert evaluate(F({(0, 0): 1}), sp.normalize((1, 1, 0, 0)), f) == 1


@given(st.lists(st.integers(0, 3), min_size=10, max_size=10), st.integers(1, 3), st.integers(0, 84))
def test_evaluate_linear_in_coefficients(coeffs, lam, pid):
    from hermcode.hermitian_surface import surface

    s = surface(2)
    f, p = s.field, s.space.point(pid)
    form = QuadraticForm(tuple(coeffs))
    assert evaluate(form.scaled(lam, f), p, f) == f.mul(lam, evaluate(form, p, f))


def test_zero_set_sizes(s2):
    sp = s2.space
    assert zero_set(F({(0, 1): 1, (2, 3): 1}), sp).sum() == 25
    plane = zero_set(F({(0, 0): 1}), sp)
    assert plane.sum() == 21 and np.array_equal(plane, sp.plane_incidence[sp.plane_from_dual((1, 0, 0, 0)).id])
    # x^2 + x + omega has no root in GF(4)
    f = s2.field
    assert all(f.add(f.add(f.mul(x, x), x), OMEGA) for x in range(4))
    assert zero_set(F({(0, 1): 1, (2, 2): 1, (2, 3): 1, (3, 3): OMEGA}), sp).sum() == 17
    with pytest.raises(ValueError):
        zero_set(QuadraticForm((0,) * 10), sp)


def test_form_validation():
    with pytest.raises(ValueError):
        QuadraticForm((1, 2, 3))


def test_classify_plane_pair(s2):
    qc = classify(F({(0, 1): 1}), s2)
    assert (qc.rank, qc.type_id, qc.section) == (2, 8, 15)
    p1, p2, line = decompose_plane_pair(qc)
    assert {p1.dual, p2.dual} == {(1, 0, 0, 0), (0, 1, 0, 0)}
    assert qc.detail["line_class"] == LineClass.SECANT
    assert set(line.points) == set(np.flatnonzero(s2.space.plane_incidence[p1.id] & s2.space.plane_incidence[p2.id]))
    # reconstruction up to a scalar
    f = s2.field
    rebuilt = product_form(p1.dual, p2.dual, f)
    assert rebuilt.projective(f) == qc.form.projective(f)
    with pytest.raises(ValueError):
        reguli(qc)


def test_classify_repeated_plane(s2):
    qc = classify(F({(0, 0): 1}), s2)
    assert (qc.rank, qc.type_id, qc.section) == (1, 2, 9)


def test_classify_elliptic(s2):
    qc = classify(F({(0, 1): 1, (2, 2): 1, (2, 3): 1, (3, 3): OMEGA}), s2)
    assert (qc.rank, qc.type_id) == (4, 15)
    assert not qc.zero_set[s2.space.lines].all(axis=1).any()


def test_reguli(s2):
    qc = classify(F({(0, 1): 1, (2, 3): 1}), s2)
    ra, rb = reguli(qc)
    assert len(ra.lines) == len(rb.lines) == 5
    cover = np.zeros(85, dtype=int)
    for line in ra.lines + rb.lines:
        cover[list(line.points)] += 1
    assert (cover[qc.zero_set] == 2).all() and (cover[~qc.zero_set] == 0).all()
    for a in ra.lines:
        for b in rb.lines:
            assert len(set(a.points) & set(b.points)) == 1
    with pytest.raises(ValueError):
        decompose_plane_pair(qc)


def test_type10_cone_with_section_11(s2):
    """A cone holding exactly one generator of X whose section is t^3+t^2-t+1."""
    form = F({(0, 1): 1, (0, 2): 3, (0, 3): 2, (1, 1): 1, (1, 2): 3, (1, 3): 2, (2, 2): 3, (3, 3): 1})
    qc = classify(form, s2)
    assert qc.type_id == 10 and qc.section == 11
    assert qc.detail["vertex"].coords == (0, 0, 1, 2)
    assert len(qc.detail["generators"]) == 1
    inside = np.flatnonzero(qc.zero_set[s2.space.lines].all(axis=1))
    classes = sorted(int(c) for c in s2.line_classes[inside])
    assert classes == [1, 2, 2, 2, 3]


def test_line_shaped_zero_set(s2):
    f = s2.field
    a, b = irreducible_quadratic(f)
    # x0^2 + a x0 x1 + b x1^2 vanishes only on x0 = x1 = 0
    qc = classify(F({(0, 0): 1, (0, 1): a, (1, 1): b}), s2)
    assert qc.type_id == 4 and qc.section == 3


def test_impossible_zero_set(s2):
    bad = np.zeros((1, 85), dtype=bool)
    bad[0, :7] = True
    with pytest.raises(GeometryError):
        batch_classifier(s2).classify(bad)


def _agreement(s, n, seed):
    rng = np.random.default_rng(seed)
    coeffs = rng.integers(0, s.q, size=(n, 10))
    coeffs = coeffs[coeffs.any(axis=1)]
    bc = batch_classifier(s)
    res = bc.classify(bc.evaluate(coeffs) == 0)
    for row, tp, sec in zip(coeffs, res.type_id, res.section):
        qc = classify(QuadraticForm(tuple(row)), s)
        assert (qc.type_id, qc.section) == (int(tp), int(sec)), QuadraticForm(tuple(row))
        assert qc.rank == TYPE_RANK[qc.type_id]


def test_batch_matches_per_form_q4(s2):
    _agreement(s2, 400, 1)


def test_batch_matches_per_form_q9(s3):
    _agreement(s3, 150, 2)


def test_batch_matches_per_form_rank2_q9(s3):
    f = s3.field
    rng = np.random.default_rng(3)
    for _ in range(20):
        d1, d2 = rng.integers(0, 9, size=(2, 4))
        if not d1.any() or not d2.any():
            continue
        form = product_form(d1.tolist(), d2.tolist(), f)
        qc = classify(form, s3)
        bc = batch_classifier(s3)
        res = bc.classify(bc.evaluate(np.array([form.coeffs])) == 0)
        assert (qc.type_id, qc.section) == (int(res.type_id[0]), int(res.section[0]))
        assert qc.type_id in (1, 2, 6, 7, 8)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=10, max_size=10).filter(any), st.integers(1, 3))
def test_classification_is_scalar_invariant(coeffs, lam):
    from hermcode.hermitian_surface import surface

    s = surface(2)
    form = QuadraticForm(tuple(coeffs))
    a, b = classify(form, s), classify(form.scaled(lam, s.field), s)
    assert (a.type_id, a.section) == (b.type_id, b.section)
    assert np.array_equal(a.zero_set, b.zero_set)
