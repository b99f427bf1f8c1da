"""
Table-driven arithmetic in GF(q), q = t^2, for t in {2, 3, 4, 5}.

Elements are dense integer indices 0..q-1.  Index ``a`` encodes the
polynomial sum_i d_i x^i where d_i are the base-p digits of ``a``
(least significant digit first), reduced modulo a fixed defining
polynomial.  0 is the additive identity and 1 the multiplicative one.

Besides the scalar tables the field carries a *spread* encoding used by
the vectorised evaluators: each element is mapped to an integer whose
base-B digits are its base-p digits, with B large enough that a sum of
up to ``SPREAD_TERMS`` encodings never carries.  A sum of spread codes
is turned back into a field element with a single table lookup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

# t -> (p, n, defining polynomial coefficients low -> high, monic)
DEFINING_POLYNOMIALS: dict[int, tuple[int, int, tuple[int, ...]]] = {
    2: (2, 2, (1, 1, 1)),  # x^2 + x + 1
    3: (3, 2, (2, 2, 1)),  # x^2 + 2x + 2
    4: (2, 4, (1, 1, 0, 0, 1)),  # x^4 + x + 1
    5: (5, 2, (2, 4, 1)),  # x^2 + 4x + 2
}

SPREAD_TERMS = 16


class FieldError(ValueError):
    """Unsupported field parameters or malformed field tables."""


def _poly_str(coeffs: Sequence[int]) -> str:
    terms = []
    for deg in range(len(coeffs) - 1, -1, -1):
        c = coeffs[deg]
        if c == 0:
            continue
        mono = "" if deg == 0 else ("x" if deg == 1 else f"x^{deg}")
        if deg == 0:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}{mono}")
    return "+".join(terms)


def _digits(a: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        out.append(a % p)
        a //= p
    return out


def _from_digits(d: Sequence[int], p: int) -> int:
    a = 0
    for x in reversed(d):
        a = a * p + x
    return a


def _polymulmod(a: list[int], b: list[int], modulus: Sequence[int], p: int) -> list[int]:
    n = len(modulus) - 1
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # modulus is monic
    for deg in range(len(prod) - 1, n - 1, -1):
        c = prod[deg]
        if c:
            for k in range(n + 1):
                prod[deg - n + k] = (prod[deg - n + k] - c * modulus[k]) % p
    return prod[:n]


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(q) with q = t^2 and the conjugation x -> x^t.

    Build instances with :func:`build_field`.  All tables are read-only numpy
    arrays; the scalar methods use plain Python lists for speed.
    """

    t: int
    q: int
    p: int
    n: int
    poly: tuple[int, ...]
    add_table: np.ndarray
    mul_table: np.ndarray
    neg_table: np.ndarray
    inv_table: np.ndarray
    conj_table: np.ndarray
    spread: np.ndarray = field(repr=False)
    spread_base: int = field(repr=False)
    collapse_table: np.ndarray = field(repr=False)
    _add: list = field(repr=False)
    _mul: list = field(repr=False)
    _neg: list = field(repr=False)
    _inv: list = field(repr=False)
    _conj: list = field(repr=False)

    @property
    def poly_str(self) -> str:
        return _poly_str(self.poly)

    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(%d)" % self.q)
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self._mul[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = self._mul[r][a]
        return r

    def conj(self, a: int) -> int:
        return self._conj[a]

    def norm(self, a: int) -> int:
        """a^(t+1), which always lies in GF(t)."""
        return self._mul[a][self._conj[a]]

    def subfield(self) -> list[int]:
        return [a for a in range(self.q) if self._conj[a] == a]

    def collapse(self, acc: np.ndarray) -> np.ndarray:
        """Map sums of spread codes back to field element indices."""
        return self.collapse_table[acc]

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q}, t={self.t}, poly={self.poly_str})"


def conjugate(a: int, f: FieldSpec) -> int:
    """Return a^t."""
    return f.conj(a)


def build_field(t: int) -> FieldSpec:
    """Construct GF(t^2) with full, verified lookup tables.

    Raises
    ------
    FieldError
        If ``t`` is not one of 2, 3, 4, 5 or the tables fail verification.
    """
    if t not in DEFINING_POLYNOMIALS:
        raise FieldError(f"unsupported subfield order t={t}; expected one of 2, 3, 4, 5")
    p, n, poly = DEFINING_POLYNOMIALS[t]
    q = p**n
    if q != t * t:
        raise FieldError(f"defining polynomial for t={t} has degree {n}, field size {q} != t^2")

    digits = [_digits(a, p, n) for a in range(q)]
    add = [[_from_digits([(x + y) % p for x, y in zip(digits[a], digits[b])], p) for b in range(q)] for a in range(q)]
    mul = [[_from_digits(_polymulmod(digits[a], digits[b], poly, p), p) for b in range(q)] for a in range(q)]
    neg = [_from_digits([(-x) % p for x in digits[a]], p) for a in range(q)]

    inv = [0] * q
    for a in range(1, q):
        hits = [b for b in range(1, q) if mul[a][b] == 1]
        if len(hits) != 1:
            raise FieldError(f"defining polynomial {_poly_str(poly)} is reducible over GF({p})")
        inv[a] = hits[0]

    conj = []
    for a in range(q):
        r = 1
        for _ in range(t):
            r = mul[r][a]
        conj.append(r)
    _verify_conjugation(conj, add, mul, t)

    base = 1
    while base <= SPREAD_TERMS * (p - 1):
        base *= 2
    spread = np.array([sum(d * base**i for i, d in enumerate(digits[a])) for a in range(q)], dtype=np.int32)
    size = base**n
    collapse = np.zeros(size, dtype=np.uint8)
    acc = np.arange(size)
    for i in range(n):
        collapse += (((acc // base**i) % base) % p * p**i).astype(np.uint8)

    def ro(x):
        arr = np.array(x, dtype=np.uint8)
        arr.setflags(write=False)
        return arr

    spread.setflags(write=False)
    collapse.setflags(write=False)
    return FieldSpec(
        t=t, q=q, p=p, n=n, poly=poly,
        add_table=ro(add), mul_table=ro(mul), neg_table=ro(neg), inv_table=ro(inv), conj_table=ro(conj),
        spread=spread, spread_base=base, collapse_table=collapse,
        _add=add, _mul=mul, _neg=neg, _inv=inv, _conj=conj,
    )


def _verify_conjugation(conj, add, mul, t):
    q = len(conj)
    fixed = sum(1 for a in range(q) if conj[a] == a)
    if fixed != t:
        raise FieldError(f"conjugation fixes {fixed} elements, expected {t}")
    for a in range(q):
        if conj[conj[a]] != a:
            raise FieldError("conjugation is not an involution")


# -- linear algebra over GF(q) on small dense matrices ------------------------


def rref(rows: Sequence[Sequence[int]], f: FieldSpec) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = f.inv(m[r][c])
        m[r] = [f.mul(s, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                k = f.neg(m[i][c])
                m[i] = [f.add(x, f.mul(k, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[int]], f: FieldSpec) -> int:
    return len(rref(rows, f)[0])


def nullspace(rows: Sequence[Sequence[int]], ncols: int, f: FieldSpec) -> list[list[int]]:
    """Basis of {v : rows . v = 0}."""
    red, pivots = rref(rows, f) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(red, pivots):
            v[pc] = f.neg(row[fc])
        basis.append(v)
    return basis
