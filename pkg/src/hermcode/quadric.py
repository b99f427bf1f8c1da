"""
Quadratic forms on PG(3, q), their zero sets, and the 15 intersection types.

Type ids (rank in parentheses):

    1, 2     (1) repeated plane, tangent / non-tangent to X
    3, 4, 5  (2) a single line (conjugate plane pair): tangent / secant / generator
    6, 7, 8  (2) two distinct planes: both tangent / one tangent / none tangent
    9, 10    (3) cone with no / with one or more generators of X
    11..14   (4) hyperbolic, the richer regulus holds >=3 / 2 / 1 / 0 generators of X
    15       (4) elliptic

Rank is read off the zero set (its size and whether it is coplanar), not from
a matrix, so the same code works in characteristic 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .finite_field import FieldSpec
from .hermitian_surface import GeometryError, HermitianSurface, LineClass
from .proj_geometry import Line, Plane, ProjectiveSpace, ProjPoint

MONOMIALS: tuple[tuple[int, int], ...] = tuple((i, j) for i in range(4) for j in range(i, 4))

TYPE_RANK = {1: 1, 2: 1, 3: 2, 4: 2, 5: 2, 6: 2, 7: 2, 8: 2, 9: 3, 10: 3, 11: 4, 12: 4, 13: 4, 14: 4, 15: 4}

TYPE_NAMES = {
    1: "repeated tangent plane",
    2: "repeated non-tangent plane",
    3: "line, tangent to X",
    4: "line, secant to X",
    5: "line, generator of X",
    6: "two tangent planes",
    7: "tangent + non-tangent plane",
    8: "two non-tangent planes",
    9: "cone, no generator of X",
    10: "cone, 1 or 2 generators of X",
    11: "hyperbolic, >=3 skew generators in a regulus",
    12: "hyperbolic, 2 skew generators in a regulus",
    13: "hyperbolic, 1 generator in a regulus",
    14: "hyperbolic, no generator",
    15: "elliptic",
}


@dataclass(frozen=True)
class QuadraticForm:
    """Sum of c_ij x_i x_j over i <= j, coefficients in :data:`MONOMIALS` order."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(MONOMIALS):
            raise ValueError(f"a quadratic form has {len(MONOMIALS)} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], int]) -> "QuadraticForm":
        coeffs = [0] * len(MONOMIALS)
        for (i, j), c in terms.items():
            coeffs[MONOMIALS.index((min(i, j), max(i, j)))] = c
        return cls(tuple(coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def scaled(self, lam: int, f: FieldSpec) -> "QuadraticForm":
        return QuadraticForm(tuple(f.mul(lam, c) for c in self.coeffs))

    def projective(self, f: FieldSpec) -> "QuadraticForm":
        """The scalar multiple whose first nonzero coefficient is 1."""
        lead = next((c for c in self.coeffs if c), None)
        if lead is None:
            return self
        return self.scaled(f.inv(lead), f)

    def __str__(self) -> str:
        parts = []
        for c, (i, j) in zip(self.coeffs, MONOMIALS):
            if c:
                mono = f"x{i}^2" if i == j else f"x{i}*x{j}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"


def product_form(d1: Sequence[int], d2: Sequence[int], f: FieldSpec) -> QuadraticForm:
    """(sum a_i x_i)(sum b_j x_j) as a quadratic form."""
    coeffs = []
    for i, j in MONOMIALS:
        if i == j:
            coeffs.append(f.mul(d1[i], d2[i]))
        else:
            coeffs.append(f.add(f.mul(d1[i], d2[j]), f.mul(d1[j], d2[i])))
    return QuadraticForm(tuple(coeffs))


def irreducible_quadratic(f: FieldSpec) -> tuple[int, int]:
    """The first (a, b) in index order with x^2 + a x + b irreducible over GF(q)."""
    for a in range(f.q):
        for b in range(1, f.q):
            if all(f.add(f.add(f.mul(x, x), f.mul(a, x)), b) for x in range(f.q)):
                return a, b
    raise AssertionError("every finite field has an irreducible quadratic")


def line_form(d1: Sequence[int], d2: Sequence[int], f: FieldSpec) -> QuadraticForm:
    """L1^2 + a L1 L2 + b L2^2 with x^2+ax+b irreducible: its zero set is L1 = L2 = 0."""
    a, b = irreducible_quadratic(f)
    q11 = product_form(d1, d1, f).coeffs
    q12 = product_form(d1, d2, f).coeffs
    q22 = product_form(d2, d2, f).coeffs
    return QuadraticForm(tuple(f.add(f.add(x, f.mul(a, y)), f.mul(b, z)) for x, y, z in zip(q11, q12, q22)))


# -- evaluation ---------------------------------------------------------------


def evaluate(form: QuadraticForm, p: ProjPoint, f: FieldSpec) -> int:
    x = p.coords
    s = 0
    for c, (i, j) in zip(form.coeffs, MONOMIALS):
        if c:
            s = f.add(s, f.mul(c, f.mul(x[i], x[j])))
    return s


@lru_cache(maxsize=None)
def monomial_values(space: ProjectiveSpace) -> np.ndarray:
    """(N, 10) values of each monomial at every canonical point."""
    f = space.field
    x = space.coords.astype(np.intp)
    out = np.stack([f.mul_table[x[:, i], x[:, j]] for i, j in MONOMIALS], axis=1)
    out.setflags(write=False)
    return out


def values(form: QuadraticForm, space: ProjectiveSpace) -> np.ndarray:
    f = space.field
    mv = monomial_values(space)
    acc = np.zeros(space.num_points, dtype=np.int32)
    for m, c in enumerate(form.coeffs):
        if c:
            acc += f.spread[f.mul_table[c, mv[:, m]]]
    return f.collapse(acc)


def zero_set(form: QuadraticForm, space: ProjectiveSpace) -> np.ndarray:
    """Boolean point bitset of Z(form)."""
    if form.is_zero():
        raise ValueError("the zero form has no zero set")
    return values(form, space) == 0


# -- per-form classification -----------------------------------------------------


@dataclass(frozen=True)
class Regulus:
    lines: tuple[Line, ...]


@dataclass(eq=False)
class QuadricClass:
    form: QuadraticForm
    rank: int
    type_id: int
    zero_set: np.ndarray = field(repr=False)
    section: int
    detail: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(self.zero_set.sum())

    @property
    def name(self) -> str:
        return TYPE_NAMES[self.type_id]


def signatures(q: int) -> dict[str, int]:
    return {
        "line": q + 1,
        "plane_or_cone": q * q + q + 1,
        "plane_pair": 2 * q * q + q + 1,
        "hyperbolic": (q + 1) ** 2,
        "elliptic": q * q + 1,
    }


def _lines_in(zero: np.ndarray, space: ProjectiveSpace) -> list[int]:
    return [int(k) for k in np.flatnonzero(zero[space.lines].all(axis=1))]


def _hyperbolic_subtype(counts: tuple[int, int]) -> int:
    hi = max(counts)
    return 11 if hi >= 3 else {2: 12, 1: 13, 0: 14}[hi]


def classify(form: QuadraticForm, s: HermitianSurface) -> QuadricClass:
    """Classify Z(form) and record the geometric evidence for its type.

    Raises
    ------
    GeometryError
        If the zero set has none of the six possible quadric signatures.
    """
    space = s.space
    zero = zero_set(form, space)
    size = int(zero.sum())
    section = int((zero & s.mask).sum())
    sig = signatures(s.q)
    ids = np.flatnonzero(zero)

    def done(rank, type_id, **detail):
        return QuadricClass(form, rank, type_id, zero, section, detail)

    if size == sig["line"]:
        line = space.line_through(space.point(int(ids[0])), space.point(int(ids[1])))
        if set(line.points) != set(int(i) for i in ids):
            raise GeometryError(f"{form}: {size} zeros that are not collinear")
        lc = s.classify_line(line)
        return done(2, {LineClass.TANGENT: 3, LineClass.SECANT: 4, LineClass.GENERATOR: 5}[lc], line=line, line_class=lc)

    if size == sig["plane_or_cone"]:
        lines = _lines_in(zero, space)
        plane = _spanned_plane(ids, space)
        if plane is not None and space.plane_incidence[plane.id][zero].all():
            return done(1, 1 if s.is_tangent_plane(plane) else 2, plane=plane)
        if len(lines) != s.q + 1:
            raise GeometryError(f"{form}: cone-sized zero set holding {len(lines)} lines")
        common = set(int(x) for x in space.lines[lines[0]])
        for k in lines[1:]:
            common &= set(int(x) for x in space.lines[k])
        if len(common) != 1:
            raise GeometryError(f"{form}: cone lines do not share a vertex")
        gens = [k for k in lines if s.line_classes[k] == LineClass.GENERATOR]
        vertex = space.point(common.pop())
        return done(3, 10 if gens else 9, vertex=vertex, cone_lines=len(lines),
                    generators=[space.line(k) for k in gens])

    if size == sig["plane_pair"]:
        p1, p2, line = _plane_pair(zero, space)
        t1, t2 = s.is_tangent_plane(p1), s.is_tangent_plane(p2)
        lc = s.classify_line(line)
        type_id = {2: 6, 1: 7, 0: 8}[int(t1) + int(t2)]
        return done(2, type_id, planes=(p1, p2), tangent=(t1, t2), line=line, line_class=lc)

    if size == sig["hyperbolic"]:
        reg = _reguli(zero, space)
        counts = tuple(sum(1 for ln in r.lines if s.classify_line(ln) == LineClass.GENERATOR) for r in reg)
        return done(4, _hyperbolic_subtype(counts), reguli=reg, generator_counts=counts)

    if size == sig["elliptic"]:
        if _lines_in(zero, space):
            raise GeometryError(f"{form}: elliptic-sized zero set contains a line")
        return done(4, 15)

    raise GeometryError(f"{form}: zero set of size {size} is not a quadric of PG(3,{s.q})")


def _spanned_plane(ids: np.ndarray, space: ProjectiveSpace) -> Plane | None:
    """A plane through three non-collinear points of ``ids``, or None if all are collinear."""
    a, b = space.point(int(ids[0])), space.point(int(ids[1]))
    line = space.line_through(a, b)
    for c in ids[2:]:
        if int(c) not in line.points:
            return space.plane_through(a, b, space.point(int(c)))
    return None


def _plane_pair(zero: np.ndarray, space: ProjectiveSpace) -> tuple[Plane, Plane, Line]:
    inc = space.plane_incidence
    inside = np.flatnonzero(~(inc & ~zero[None, :]).any(axis=1))
    if len(inside) != 2:
        raise GeometryError(f"plane-pair zero set contains {len(inside)} planes")
    h1, h2 = (space.plane(int(h)) for h in inside)
    common = np.flatnonzero(inc[h1.id] & inc[h2.id])
    line = space.line_through(space.point(int(common[0])), space.point(int(common[1])))
    return h1, h2, line


def _reguli(zero: np.ndarray, space: ProjectiveSpace) -> tuple[Regulus, Regulus]:
    q = space.q
    lines = _lines_in(zero, space)
    if len(lines) != 2 * (q + 1):
        raise GeometryError(f"hyperbolic zero set holds {len(lines)} lines, expected {2 * (q + 1)}")
    pts = {k: set(int(x) for x in space.lines[k]) for k in lines}
    first = lines[0]
    fam_a = [k for k in lines if k == first or not (pts[k] & pts[first])]
    fam_b = [k for k in lines if k not in fam_a]
    for fam in (fam_a, fam_b):
        if len(fam) != q + 1:
            raise GeometryError("reguli of unequal size")
        for i, k in enumerate(fam):
            for k2 in fam[i + 1:]:
                if pts[k] & pts[k2]:
                    raise GeometryError("lines of one regulus meet")
    for ka in fam_a:
        for kb in fam_b:
            if len(pts[ka] & pts[kb]) != 1:
                raise GeometryError("lines of opposite reguli must meet exactly once")
    return Regulus(tuple(space.line(k) for k in fam_a)), Regulus(tuple(space.line(k) for k in fam_b))


def reguli(qc: QuadricClass) -> tuple[Regulus, Regulus]:
    if qc.type_id not in (11, 12, 13, 14):
        raise ValueError(f"type {qc.type_id} is not a hyperbolic quadric")
    return qc.detail["reguli"]


def decompose_plane_pair(qc: QuadricClass) -> tuple[Plane, Plane, Line]:
    if qc.type_id not in (6, 7, 8):
        raise ValueError(f"type {qc.type_id} is not a pair of distinct planes")
    p1, p2 = qc.detail["planes"]
    return p1, p2, qc.detail["line"]


# -- batch classification -----------------------------------------------------


@dataclass
class BatchResult:
    """Column-wise classification of a batch of zero sets.

    ``gens_hi``/``gens_lo``: generators of X per regulus (hyperbolic) or the
    generator count in the first column (cone); ``tangent_planes`` and
    ``line_class`` describe plane pairs and lines.  Unused entries are 0.
    """

    size: np.ndarray
    section: np.ndarray
    type_id: np.ndarray
    gens_hi: np.ndarray
    gens_lo: np.ndarray
    tangent_planes: np.ndarray
    line_class: np.ndarray

    @property
    def rank(self) -> np.ndarray:
        lut = np.zeros(16, dtype=np.int8)
        for k, r in TYPE_RANK.items():
            lut[k] = r
        return lut[self.type_id]


class BatchClassifier:
    """Vectorised classifier sharing precomputed incidence data for one surface.

    Produces the same type ids as :func:`classify` (cross-checked in the tests),
    but works on many zero sets at once through matrix products.
    """

    def __init__(self, s: HermitianSurface):
        self.surface = s
        self.space = s.space
        self.field = s.field
        self.q = s.q

    @cached_property
    def _rows(self) -> np.ndarray:
        """(10, q, N) spread codes of c * monomial_m(x)."""
        f = self.field
        mv = monomial_values(self.space).astype(np.intp)
        rows = f.spread[f.mul_table[np.arange(self.q)[None, :, None], mv.T[:, None, :]]]
        max_acc = int(rows.max(axis=1).sum(axis=0).max())
        dtype = np.int16 if max_acc < 2**15 else np.int32
        return rows.astype(dtype)

    def evaluate(self, coeffs: np.ndarray) -> np.ndarray:
        """(B, N) values of a batch of forms given as (B, 10) coefficient rows."""
        coeffs = np.asarray(coeffs, dtype=np.intp)
        rows = self._rows
        acc = rows[0][coeffs[:, 0]].copy()
        for m in range(1, len(MONOMIALS)):
            acc += rows[m][coeffs[:, m]]
        return self.field.collapse(acc)

    @cached_property
    def _gen_incidence(self) -> np.ndarray:
        s = self.surface
        gen_pts = self.space.lines[s.generator_indices]
        inc = np.zeros((self.space.num_points, len(gen_pts)), dtype=np.float32)
        for k, row in enumerate(gen_pts):
            inc[row, k] = 1.0
        return inc[s.point_ids]

    @cached_property
    def _skew_or_self(self) -> np.ndarray:
        inc = self._gen_incidence
        meet = (inc.T @ inc) > 0
        return ~meet | np.eye(len(meet), dtype=bool)

    @cached_property
    def _plane_inc(self) -> np.ndarray:
        return self.space.plane_incidence.T.astype(np.float32)

    def classify(self, zero: np.ndarray) -> BatchResult:
        s, space, q = self.surface, self.space, self.q
        zero = np.asarray(zero, dtype=bool)
        n = len(zero)
        size = zero.sum(axis=1).astype(np.int32)
        zx = zero[:, s.point_ids]
        section = zx.sum(axis=1).astype(np.int32)
        type_id = np.zeros(n, dtype=np.int8)
        gens_hi = np.zeros(n, dtype=np.int16)
        gens_lo = np.zeros(n, dtype=np.int16)
        tangent = np.zeros(n, dtype=np.int8)
        lclass = np.zeros(n, dtype=np.int8)
        sig = signatures(q)

        sel = np.flatnonzero(size == sig["line"])
        if len(sel):
            z = zero[sel]
            a = z.argmax(axis=1)
            b = space.num_points - 1 - z[:, ::-1].argmax(axis=1)
            line = space.pair_line[a, b]
            if not z[np.arange(len(sel))[:, None], space.lines[line]].all():
                raise GeometryError("a line-sized zero set is not collinear")
            lc = s.line_classes[line]
            lclass[sel] = lc
            type_id[sel] = lc + 2

        sel = np.flatnonzero(size == sig["plane_or_cone"])
        if len(sel):
            z = zero[sel].astype(np.float32)
            coplanar = ((z @ self._plane_inc) == sig["plane_or_cone"]).any(axis=1)
            pl = sel[coplanar]
            if len(pl):
                h = (zero[pl].astype(np.float32) @ self._plane_inc).argmax(axis=1)
                type_id[pl] = np.where(s.tangent_planes[h], 1, 2)
            cone = sel[~coplanar]
            if len(cone):
                g = ((zx[cone].astype(np.float32) @ self._gen_incidence) == q + 1).sum(axis=1)
                gens_hi[cone] = g
                type_id[cone] = np.where(g > 0, 10, 9)

        sel = np.flatnonzero(size == sig["plane_pair"])
        if len(sel):
            contained = (zero[sel].astype(np.float32) @ self._plane_inc) == sig["plane_or_cone"]
            if not (contained.sum(axis=1) == 2).all():
                raise GeometryError("a plane-pair-sized zero set does not contain exactly two planes")
            h1 = contained.argmax(axis=1)
            h2 = space.num_points - 1 - contained[:, ::-1].argmax(axis=1)
            tc = s.tangent_planes[h1].astype(np.int8) + s.tangent_planes[h2]
            tangent[sel] = tc
            lclass[sel] = s.line_classes[space.plane_pair_line[h1, h2]]
            type_id[sel] = 8 - tc

        sel = np.flatnonzero(size == sig["hyperbolic"])
        if len(sel):
            c = (zx[sel].astype(np.float32) @ self._gen_incidence) == q + 1
            first = c.argmax(axis=1)
            fam_a = (c & self._skew_or_self[first]).sum(axis=1)
            total = c.sum(axis=1)
            hi = np.maximum(fam_a, total - fam_a)
            gens_hi[sel] = hi
            gens_lo[sel] = total - hi
            type_id[sel] = np.select([hi >= 3, hi == 2, hi == 1], [11, 12, 13], 14)

        type_id[size == sig["elliptic"]] = 15

        if (type_id == 0).any():
            k = int(np.flatnonzero(type_id == 0)[0])
            raise GeometryError(f"zero set of size {int(size[k])} is not a quadric of PG(3,{q})")
        return BatchResult(size, section, type_id, gens_hi, gens_lo, tangent, lclass)


@lru_cache(maxsize=None)
def batch_classifier(s: HermitianSurface) -> BatchClassifier:
    return BatchClassifier(s)
