"""
The functional code C_2(X): evaluations of quadratic forms at the points of X.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .finite_field import rank
from .hermitian_surface import HermitianSurface
from .quadric import QuadraticForm, monomial_values, values
from .scan import ScanStats, exhaustive_scan


@dataclass(frozen=True)
class Codeword:
    symbols: tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(1 for x in self.symbols if x)


@dataclass
class WeightDistribution:
    """weight -> number of nonzero codewords.

    ``exact`` is False for partial distributions built from a stratified
    census; those cover only the exhaustively enumerated strata.
    """

    t: int
    length: int
    counts: dict[int, int] = field(default_factory=dict)
    exact: bool = True

    @property
    def q(self) -> int:
        return self.t * self.t

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def weights(self) -> list[int]:
        return sorted(w for w, n in self.counts.items() if n)

    def minimum_distance(self) -> int:
        return self.weights()[0]

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "q": self.q,
            "length": self.length,
            "exact": self.exact,
            "total": self.total,
            "counts": {str(w): self.counts[w] for w in self.weights()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["weight", "codeword_count", "projective_count"])
        for w in self.weights():
            writer.writerow([w, self.counts[w], self.counts[w] // (self.q - 1)])
        return buf.getvalue()


def encode(form: QuadraticForm, s: HermitianSurface) -> Codeword:
    """Symbols are the form's values at the canonical points of X, in id order."""
    return Codeword(tuple(int(v) for v in values(form, s.space)[s.point_ids]))


def generator_matrix(s: HermitianSurface) -> np.ndarray:
    """10 x |X| matrix whose row m encodes the m-th monomial."""
    return np.ascontiguousarray(monomial_values(s.space)[s.point_ids].T)


def generator_rank(s: HermitianSurface) -> int:
    return rank(generator_matrix(s).tolist(), s.field)


def weight_distribution_from(stats: ScanStats, s: HermitianSurface, exact: bool) -> WeightDistribution:
    counts: dict[int, int] = {}
    for (_, section), n in stats.forms.items():
        w = s.size - section
        counts[w] = counts.get(w, 0) + n * (s.q - 1)
    return WeightDistribution(s.t, s.size, dict(sorted(counts.items())), exact)


def full_weight_distribution(s: HermitianSurface, shards: int = 1) -> WeightDistribution:
    """Exact distribution by scanning all projective forms (t = 2 only)."""
    if s.t != 2:
        raise ValueError("exhaustive weight distribution is limited to t=2; use stratified_census")
    return weight_distribution_from(exhaustive_scan(2, shards), s, exact=True)


def stratified_census(s: HermitianSurface, config=None):
    """Partial weight distribution and census report for t >= 3.

    Ranks 1-2 are enumerated exactly (one form per zero set, weighted by the
    number of projective forms with that zero set); ranks 3-4 are sampled.
    """
    from .census import CensusConfig, verify_table

    config = config or CensusConfig()
    if s.t < 3:
        raise ValueError("stratified census is meant for t >= 3; t=2 is exhaustive")
    report = verify_table(s, mode="stratified", config=config)
    return weight_distribution_from(report.stats["strata"], s, exact=False), report

