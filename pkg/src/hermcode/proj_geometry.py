"""
Points, lines and planes of PG(3, q).

Points are stored in W_i-canonical form: the first nonzero coordinate is 1.
Point ids enumerate W_0, W_1, W_2, W_3 in that order; inside W_i the
trailing coordinates (x_{i+1}, ..., x_3) are read as a base-q number with
x_{i+1} most significant.  Planes reuse the same enumeration on their dual
coordinates, so plane ``k`` is {x : sum_i d_i x_i = 0} with d = point ``k``.

Lines are enumerated from 2x4 reduced row echelon bases.  Each line is a
sorted tuple of point ids; the heavier incidence tables (plane/point
incidence, point-pair -> line, plane-pair -> line) are built lazily.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from .finite_field import FieldSpec, nullspace, rref


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[int, int, int, int]
    id: int


@dataclass(frozen=True)
class Plane:
    dual: tuple[int, int, int, int]
    id: int


@dataclass(frozen=True)
class Line:
    """A line as the sorted ids of its q+1 points.

    ``basis`` is the canonical (row-reduced) pair of points spanning the line;
    it does not take part in equality.
    """

    points: tuple[int, ...]
    basis: tuple[ProjPoint, ProjPoint] = field(compare=False, repr=False)

    def __contains__(self, p) -> bool:
        pid = p.id if isinstance(p, ProjPoint) else p
        return pid in self.points

    def __len__(self) -> int:
        return len(self.points)


def count_points(q: int) -> int:
    return q**3 + q**2 + q + 1


def count_lines(q: int) -> int:
    return (q**2 + 1) * (q**2 + q + 1)


class ProjectiveSpace:
    """PG(3, q) over a :class:`FieldSpec`."""

    def __init__(self, field: FieldSpec):
        self.field = field
        self.q = field.q
        self.num_points = count_points(self.q)
        q = self.q
        self._offsets = (0, q**3, q**3 + q**2, q**3 + q**2 + q)

    # -- points ---------------------------------------------------------------

    @cached_property
    def coords(self) -> np.ndarray:
        """(N, 4) uint8 canonical coordinates in id order."""
        q = self.q
        rows = []
        for i in range(4):
            for tail in product(range(q), repeat=3 - i):
                rows.append((0,) * i + (1,) + tail)
        arr = np.array(rows, dtype=np.uint8)
        arr.setflags(write=False)
        return arr

    def point_id(self, coords: Sequence[int]) -> int:
        """Id of an already canonical coordinate tuple."""
        i = next(k for k, c in enumerate(coords) if c)
        if coords[i] != 1:
            raise ValueError(f"{tuple(coords)} is not in canonical form")
        v = 0
        for c in coords[i + 1:]:
            v = v * self.q + c
        return self._offsets[i] + v

    def point(self, pid: int) -> ProjPoint:
        return ProjPoint(tuple(int(c) for c in self.coords[pid]), int(pid))

    def normalize(self, raw: Sequence[int]) -> ProjPoint:
        """Scale ``raw`` so that its first nonzero coordinate is 1."""
        f = self.field
        if len(raw) != 4:
            raise ValueError("a point of PG(3,q) needs 4 coordinates")
        if any(not 0 <= c < self.q for c in raw):
            raise ValueError(f"coordinates {tuple(raw)} are not elements of GF({self.q})")
        lead = next((c for c in raw if c), None)
        if lead is None:
            raise ValueError("the zero vector is not a projective point")
        s = f.inv(lead)
        coords = tuple(f.mul(s, c) for c in raw)
        return ProjPoint(coords, self.point_id(coords))

    def normalize_ids(self, raw: np.ndarray) -> np.ndarray:
        """Vectorised :meth:`normalize` returning ids; rows must be nonzero."""
        f = self.field
        raw = np.asarray(raw, dtype=np.intp)
        nz = raw != 0
        if not nz.any(axis=1).all():
            raise ValueError("the zero vector is not a projective point")
        first = nz.argmax(axis=1)
        lead = raw[np.arange(len(raw)), first]
        scale = f.inv_table[lead].astype(np.intp)
        return self._ids_canonical(f.mul_table[scale[:, None], raw])

    def enumerate_points(self) -> list[ProjPoint]:
        return [self.point(i) for i in range(self.num_points)]

    # -- pairing / planes -----------------------------------------------------

    def pairing(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix of sum_k a[i,k] b[j,k] over GF(q)."""
        f = self.field
        a = np.asarray(a, dtype=np.intp)
        b = np.asarray(b, dtype=np.intp)
        acc = np.zeros((len(a), len(b)), dtype=np.int32)
        for k in range(4):
            acc += f.spread[f.mul_table[a[:, k, None], b[None, :, k]]]
        return f.collapse(acc)

    @cached_property
    def plane_incidence(self) -> np.ndarray:
        """(planes, points) boolean incidence; symmetric by construction."""
        inc = self.pairing(self.coords, self.coords) == 0
        inc.setflags(write=False)
        return inc

    def plane(self, hid: int) -> Plane:
        return Plane(tuple(int(c) for c in self.coords[hid]), int(hid))

    def plane_from_dual(self, dual: Sequence[int]) -> Plane:
        p = self.normalize(dual)
        return Plane(p.coords, p.id)

    def plane_points(self, h) -> np.ndarray:
        hid = h.id if isinstance(h, Plane) else h
        return np.flatnonzero(self.plane_incidence[hid])

    def on_plane(self, p: ProjPoint, h: Plane) -> bool:
        f = self.field
        s = 0
        for x, d in zip(p.coords, h.dual):
            s = f.add(s, f.mul(x, d))
        return s == 0

    def plane_through(self, p1: ProjPoint, p2: ProjPoint, p3: ProjPoint) -> Plane:
        ns = nullspace([p1.coords, p2.coords, p3.coords], 4, self.field)
        if len(ns) != 1:
            raise ValueError("points are collinear; they do not span a plane")
        return self.plane_from_dual(ns[0])

    @cached_property
    def plane_masks(self) -> list[int]:
        return [mask_of(np.flatnonzero(row)) for row in self.plane_incidence]

    # -- lines ----------------------------------------------------------------

    def _line_points_from_basis(self, r1: Sequence[int], r2: Sequence[int]) -> tuple[int, ...]:
        f = self.field
        pts = [self.point_id(tuple(r2))]
        for b in range(self.q):
            pts.append(self.point_id(tuple(f.add(x, f.mul(b, y)) for x, y in zip(r1, r2))))
        return tuple(sorted(pts))

    def line_through(self, p1: ProjPoint, p2: ProjPoint) -> Line:
        if p1.id == p2.id:
            raise ValueError("a line needs two distinct points")
        red, _ = rref([p1.coords, p2.coords], self.field)
        b1, b2 = (self.normalize(r) for r in red)
        return Line(self._line_points_from_basis(b1.coords, b2.coords), (b1, b2))

    @cached_property
    def lines(self) -> np.ndarray:
        """(L, q+1) int32 table of all lines, each row sorted."""
        f, q = self.field, self.q
        rows = []
        for i, j in combinations(range(4), 2):
            free1 = [k for k in range(i + 1, 4) if k != j]
            free2 = list(range(j + 1, 4))
            for a in product(range(q), repeat=len(free1)):
                r1 = [0, 0, 0, 0]
                r1[i] = 1
                for k, v in zip(free1, a):
                    r1[k] = v
                for b in product(range(q), repeat=len(free2)):
                    r2 = [0, 0, 0, 0]
                    r2[j] = 1
                    for k, v in zip(free2, b):
                        r2[k] = v
                    rows.append(r1 + r2)
        basis = np.array(rows, dtype=np.intp)
        r1, r2 = basis[:, :4], basis[:, 4:]
        scal = np.arange(q)
        # r1 + b r2 is already canonical: r2 vanishes up to the pivot of r1
        comb = f.add_table[r1[:, None, :], f.mul_table[scal[None, :, None], r2[:, None, :]]]
        ids = np.empty((len(basis), q + 1), dtype=np.int32)
        ids[:, :q] = self._ids_canonical(comb.reshape(-1, 4)).reshape(len(basis), q)
        ids[:, q] = self._ids_canonical(r2)
        ids.sort(axis=1)
        ids.setflags(write=False)
        return ids

    def _ids_canonical(self, canon: np.ndarray) -> np.ndarray:
        canon = np.asarray(canon, dtype=np.intp)
        first = (canon != 0).argmax(axis=1)
        tail = np.zeros(len(canon), dtype=np.intp)
        for k in range(4):
            tail = np.where(first < k, tail * self.q + canon[:, k], tail)
        return np.asarray(self._offsets, dtype=np.intp)[first] + tail

    @cached_property
    def line_index(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(x) for x in row): k for k, row in enumerate(self.lines)}

    def line(self, k: int) -> Line:
        pts = tuple(int(x) for x in self.lines[k])
        return self.line_through(self.point(pts[0]), self.point(pts[1]))

    def enumerate_lines(self) -> list[Line]:
        return [self.line(k) for k in range(len(self.lines))]

    @cached_property
    def pair_line(self) -> np.ndarray:
        """(N, N) int32: index of the line through two distinct points (-1 on the diagonal)."""
        n = self.num_points
        table = np.full((n, n), -1, dtype=np.int32)
        lines = self.lines
        idx = np.arange(len(lines), dtype=np.int32)
        for a in range(lines.shape[1]):
            for b in range(lines.shape[1]):
                if a != b:
                    table[lines[:, a], lines[:, b]] = idx
        table.setflags(write=False)
        return table

    @cached_property
    def dual_lines(self) -> np.ndarray:
        """dual_lines[k] = index of the line whose points are the plane ids through line k."""
        inc = self.plane_incidence
        lines = self.lines
        through = inc[:, lines[:, 0]] & inc[:, lines[:, 1]]  # (planes, L)
        out = np.empty(len(lines), dtype=np.int32)
        index = self.line_index
        for k in range(len(lines)):
            out[k] = index[tuple(int(x) for x in np.flatnonzero(through[:, k]))]
        out.setflags(write=False)
        return out

    @cached_property
    def plane_pair_line(self) -> np.ndarray:
        """(N, N) int32: index of the line in which two distinct planes meet."""
        table = self.dual_lines[self.pair_line]
        table[np.diag_indices(self.num_points)] = -1
        table.setflags(write=False)
        return table

    def planes_through_line(self, line: Line) -> list[Plane]:
        b1, b2 = line.basis
        u, v = nullspace([b1.coords, b2.coords], 4, self.field)
        f = self.field
        planes = [self.plane_from_dual(v)]
        for s in range(self.q):
            planes.append(self.plane_from_dual([f.add(x, f.mul(s, y)) for x, y in zip(u, v)]))
        return planes

    @cached_property
    def lines_through_point(self) -> np.ndarray:
        """(N, q^2+q+1) int32 line indices through each point."""
        lines = self.lines
        flat = lines.ravel()
        order = np.argsort(flat, kind="stable")
        per = self.q**2 + self.q + 1
        out = (order // lines.shape[1]).astype(np.int32).reshape(self.num_points, per)
        out.setflags(write=False)
        return out


def mask_of(ids: Iterable[int]) -> int:
    """Bitset (Python int) with bit ``i`` set for every id."""
    m = 0
    for i in ids:
        m |= 1 << int(i)
    return m


def ids_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out
