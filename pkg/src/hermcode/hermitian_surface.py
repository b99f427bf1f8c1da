"""
The non-degenerate Hermitian surface x0^(t+1) + x1^(t+1) + x2^(t+1) + x3^(t+1) = 0.
"""

from __future__ import annotations

import enum
from functools import cached_property, lru_cache

import numpy as np

from .finite_field import FieldSpec, build_field
from .proj_geometry import Line, Plane, ProjectiveSpace, ProjPoint


class GeometryError(RuntimeError):
    """An incidence count that the geometry says is impossible."""


class LineClass(enum.IntEnum):
    TANGENT = 1
    SECANT = 2
    GENERATOR = 3


class HermitianSurface:
    """Point set of X in PG(3, t^2) with tangency and line services.

    Construction is cheap; incidence tables are built on first use and
    cached, after which the object is effectively immutable.
    """

    def __init__(self, field: FieldSpec, space: ProjectiveSpace | None = None):
        self.field = field
        self.t = field.t
        self.q = field.q
        self.space = space or ProjectiveSpace(field)
        t = self.t
        self.size = t**5 + t**3 + t**2 + 1
        self.tangent_section = t**3 + t**2 + 1
        self.nontangent_section = t**3 + 1

    @classmethod
    def from_t(cls, t: int) -> "HermitianSurface":
        return cls(build_field(t))

    # -- points ---------------------------------------------------------------

    @cached_property
    def mask(self) -> np.ndarray:
        f = self.field
        norm = f.mul_table[self.space.coords, f.conj_table[self.space.coords]]
        acc = f.spread[norm].sum(axis=1, dtype=np.int32)
        m = f.collapse(acc) == 0
        if int(m.sum()) != self.size:
            raise GeometryError(f"surface has {int(m.sum())} points, expected {self.size}")
        m.setflags(write=False)
        return m

    @cached_property
    def point_ids(self) -> np.ndarray:
        """Ids of the points of X in increasing order (the code's coordinate order)."""
        ids = np.flatnonzero(self.mask)
        ids.setflags(write=False)
        return ids

    @cached_property
    def position(self) -> dict[int, int]:
        """Point id -> coordinate position in codewords."""
        return {int(p): k for k, p in enumerate(self.point_ids)}

    def contains(self, p: ProjPoint) -> bool:
        f = self.field
        s = 0
        for c in p.coords:
            s = f.add(s, f.norm(c))
        return s == 0

    # -- planes ---------------------------------------------------------------

    @cached_property
    def plane_sections(self) -> np.ndarray:
        """|H cap X| for every plane id."""
        inc = self.space.pairing(self.space.coords, self.space.coords[self.point_ids]) == 0
        sec = inc.sum(axis=1).astype(np.int32)
        sec.setflags(write=False)
        return sec

    @cached_property
    def tangent_planes(self) -> np.ndarray:
        """Boolean flag per plane id, decided by section size and checked against the polarity."""
        sec = self.plane_sections
        tangent = sec == self.tangent_section
        bad = ~(tangent | (sec == self.nontangent_section))
        if bad.any():
            h = int(np.flatnonzero(bad)[0])
            raise GeometryError(f"plane {h} meets X in {int(sec[h])} points")
        # the pole of plane d is conj(d); H is tangent iff its pole is on X
        poles = self.field.conj_table[self.space.coords]
        pole_on_x = self.mask[self.space.normalize_ids(poles)]
        if not np.array_equal(pole_on_x, tangent):
            raise GeometryError("section-size tangency disagrees with the Hermitian polarity")
        tangent.setflags(write=False)
        return tangent

    def tangent_plane_at(self, p: ProjPoint) -> Plane:
        if not self.contains(p):
            raise ValueError(f"{p.coords} is not a point of X")
        dual = tuple(self.field.conj(c) for c in p.coords)
        return self.space.plane_from_dual(dual)

    @cached_property
    def tangent_plane_of(self) -> dict[int, int]:
        """Point id of X -> id of its tangent plane."""
        return {int(p): self.tangent_plane_at(self.space.point(int(p))).id for p in self.point_ids}

    def is_tangent_plane(self, h: Plane) -> bool:
        sec = int(self.plane_sections[h.id])
        if sec == self.tangent_section:
            return True
        if sec == self.nontangent_section:
            return False
        raise GeometryError(f"plane {h.dual} meets X in {sec} points")

    # -- lines ----------------------------------------------------------------

    @cached_property
    def line_sections(self) -> np.ndarray:
        """|l cap X| for every line index of the space."""
        sec = self.mask[self.space.lines].sum(axis=1).astype(np.int32)
        sec.setflags(write=False)
        return sec

    @cached_property
    def line_classes(self) -> np.ndarray:
        sec = self.line_sections
        t = self.t
        cls = np.zeros(len(sec), dtype=np.int8)
        cls[sec == 1] = LineClass.TANGENT
        cls[sec == t + 1] = LineClass.SECANT
        cls[sec == t * t + 1] = LineClass.GENERATOR
        if (cls == 0).any():
            k = int(np.flatnonzero(cls == 0)[0])
            raise GeometryError(f"line {k} meets X in {int(sec[k])} points")
        cls.setflags(write=False)
        return cls

    def classify_line(self, line: Line) -> LineClass:
        n = sum(1 for p in line.points if self.mask[p])
        t = self.t
        if n == 1:
            return LineClass.TANGENT
        if n == t + 1:
            return LineClass.SECANT
        if n == t * t + 1:
            return LineClass.GENERATOR
        raise GeometryError(f"line {line.points} meets X in {n} points")

    @cached_property
    def generator_indices(self) -> np.ndarray:
        """Line indices of the lines contained in X."""
        idx = np.flatnonzero(self.line_classes == LineClass.GENERATOR).astype(np.int32)
        idx.setflags(write=False)
        return idx

    def generators(self) -> list[Line]:
        return [self.space.line(int(k)) for k in self.generator_indices]

    @cached_property
    def generators_through(self) -> dict[int, list[int]]:
        """Point id of X -> line indices of the generators through it."""
        out: dict[int, list[int]] = {int(p): [] for p in self.point_ids}
        for k in self.generator_indices:
            for p in self.space.lines[k]:
                out[int(p)].append(int(k))
        return out

    def summary(self) -> dict:
        cls = self.line_classes
        return {
            "t": self.t,
            "q": self.q,
            "poly": self.field.poly_str,
            "points": int(self.mask.sum()),
            "tangent_planes": int(self.tangent_planes.sum()),
            "nontangent_planes": int((~self.tangent_planes).sum()),
            "lines": {
                "tangent": int((cls == LineClass.TANGENT).sum()),
                "secant": int((cls == LineClass.SECANT).sum()),
                "generator": int((cls == LineClass.GENERATOR).sum()),
            },
            "generators_per_point": sorted({len(v) for v in self.generators_through.values()}),
        }


@lru_cache(maxsize=None)
def surface(t: int) -> HermitianSurface:
    """Shared surface instance for ``t`` (construction caches are reused)."""
    return HermitianSurface.from_t(t)
