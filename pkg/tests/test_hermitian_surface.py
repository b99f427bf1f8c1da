import numpy as np
import pytest

from hermcode.hermitian_surface import HermitianSurface, LineClass, surface


def test_sizes(s2, s3):
    assert int(s2.mask.sum()) == 45
    assert int(s3.mask.sum()) == 280
    assert sum(s2.contains(p) for p in s2.space.enumerate_points()) == 45


def test_contains_examples(s2):
    sp = s2.space
    assert s2.contains(sp.normalize((0, 1, 1, 0)))
    assert not s2.contains(sp.normalize((1, 0, 0, 0)))


def test_tangent_plane_example(s2):
    sp = s2.space
    h = s2.tangent_plane_at(sp.normalize((1, 1, 0, 0)))
    assert h.dual == (1, 1, 0, 0)
    assert int(s2.plane_sections[h.id]) == 13
    assert s2.is_tangent_plane(h)
    assert not s2.is_tangent_plane(sp.plane_from_dual((1, 0, 0, 0)))
    assert int(s2.plane_sections[sp.plane_from_dual((1, 0, 0, 0)).id]) == 9
    with pytest.raises(ValueError):
        s2.tangent_plane_at(sp.normalize((1, 0, 0, 0)))


@pytest.mark.parametrize("t", [2, 3])
def test_tangent_planes(t):
    s = surface(t)
    assert int(s.tangent_planes.sum()) == s.size
    planes = s.tangent_plane_of
    assert len(set(planes.values())) == s.size
    for p, h in planes.items():
        assert s.space.plane_incidence[h, p]
        assert s.tangent_planes[h]


def test_line_examples(s2):
    sp = s2.space
    gen = sp.line_through(sp.normalize((0, 1, 1, 0)), sp.normalize((1, 0, 0, 1)))
    assert s2.classify_line(gen) == LineClass.GENERATOR
    assert all(s2.mask[p] for p in gen.points)
    sec = sp.line_through(sp.normalize((0, 0, 1, 0)), sp.normalize((0, 0, 0, 1)))
    assert s2.classify_line(sec) == LineClass.SECANT
    on_x = sorted(sp.point(p).coords for p in sec.points if s2.mask[p])
    f = s2.field
    assert on_x == sorted((0, 0, 1, b) for b in range(1, 4) if f.pow(b, 3) == 1)


@pytest.mark.parametrize("t,counts", [(2, (90, 240, 27)), (3, (1680, 5670, 112))])
def test_line_trichotomy(t, counts):
    s = surface(t)
    cls = s.line_classes
    assert set(np.unique(cls).tolist()) == {1, 2, 3}
    assert tuple(int((cls == c).sum()) for c in LineClass) == counts
    assert sum(counts) == len(s.space.lines)


@pytest.mark.parametrize("t", [2, 3])
def test_generators(t):
    s = surface(t)
    for line in s.generators():
        assert all(s.mask[p] for p in line.points)
    assert {len(v) for v in s.generators_through.values()} == {t + 1}


def test_summary_fresh_instance():
    s = HermitianSurface.from_t(2)
    info = s.summary()
    assert info["points"] == 45 and info["tangent_planes"] == 45
    assert info["lines"] == {"tangent": 90, "secant": 240, "generator": 27}
