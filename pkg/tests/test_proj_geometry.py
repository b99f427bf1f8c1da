import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermcode.finite_field import build_field
from hermcode.proj_geometry import ProjectiveSpace, count_lines, count_points, ids_of, mask_of

PG4 = ProjectiveSpace(build_field(2))
PG9 = ProjectiveSpace(build_field(3))


def test_point_counts():
    assert count_points(4) == 85 and PG4.num_points == 85
    assert count_points(9) == 820 and PG9.num_points == 820
    assert len(PG4.enumerate_points()) == 85


def test_canonical_form_and_unique_ids():
    for space in (PG4, PG9):
        coords = space.coords
        first = (coords != 0).argmax(axis=1)
        assert (coords[np.arange(len(coords)), first] == 1).all()
        assert len({tuple(r) for r in coords.tolist()}) == space.num_points
        for p in space.enumerate_points()[:: max(1, space.num_points // 50)]:
            assert space.normalize(p.coords) == p


def test_normalize_examples():
    # omega = 2, omega^2 = 3 in GF(4)
    p = PG4.normalize((0, 2, 1, 0))
    assert p.coords == (0, 1, 3, 0)
    assert PG4.normalize((1, 0, 0, 0)).coords == (1, 0, 0, 0)
    assert PG9.normalize((0, 0, 0, 2)).coords == (0, 0, 0, 1)


@pytest.mark.parametrize("raw", [(0, 0, 0, 0), (1, 2, 3), (0, 4, 0, 0)])
def test_normalize_rejects(raw):
    with pytest.raises(ValueError):
        PG4.normalize(raw)


@given(st.lists(st.integers(0, 8), min_size=4, max_size=4).filter(any), st.integers(1, 8))
def test_normalize_scalar_invariance(raw, lam):
    f = PG9.field
    scaled = [f.mul(lam, c) for c in raw]
    assert PG9.normalize(raw) == PG9.normalize(scaled)
    assert PG9.normalize_ids(np.array([scaled]))[0] == PG9.normalize(raw).id


def test_line_counts_by_dedup():
    assert count_lines(4) == 357 and len(PG4.lines) == 357
    pts = PG4.enumerate_points()
    seen = {PG4.line_through(a, b).points for a, b in itertools.combinations(pts, 2)}
    assert len(seen) == 357
    assert {tuple(r) for r in PG4.lines.tolist()} == seen
    assert len(PG9.lines) == count_lines(9) == 7462


def test_line_through():
    a, b = PG4.point(3), PG4.point(40)
    line = PG4.line_through(a, b)
    assert len(line) == 5
    assert line == PG4.line_through(b, a)
    assert a.id in line and b.id in line
    with pytest.raises(ValueError):
        PG4.line_through(a, a)


@settings(max_examples=30)
@given(st.integers(0, 356))
def test_planes_through_line(k):
    line = PG4.line(k)
    planes = PG4.planes_through_line(line)
    assert len({h.id for h in planes}) == 5
    union = np.zeros(85, dtype=bool)
    for h in planes:
        pts = PG4.plane_points(h)
        assert set(line.points) <= set(pts.tolist())
        union[pts] = True
    assert union.all()


def test_incidence_tables():
    inc = PG4.plane_incidence
    assert (inc.sum(axis=1) == 21).all()
    assert (PG9.plane_incidence.sum(axis=1) == 91).all()
    assert np.array_equal(inc, inc.T)
    # pair_line / plane_pair_line agree with the line table
    for a, b in [(0, 1), (5, 80), (17, 33)]:
        k = PG4.pair_line[a, b]
        assert a in PG4.lines[k] and b in PG4.lines[k]
        m = PG4.plane_pair_line[a, b]
        assert inc[a, PG4.lines[m]].all() and inc[b, PG4.lines[m]].all()
    assert (np.sort(PG4.lines[PG4.lines_through_point[7]].ravel() == 7).sum()) == 21


def test_plane_through():
    p = [PG4.normalize(c) for c in [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)]]
    h = PG4.plane_through(*p)
    assert h.dual == (0, 0, 0, 1)
    assert all(PG4.on_plane(x, h) for x in p)
    with pytest.raises(ValueError):
        PG4.plane_through(p[0], p[1], PG4.normalize((1, 1, 0, 0)))


def test_bitset_roundtrip():
    ids = [0, 5, 84]
    assert ids_of(mask_of(ids)) == ids
