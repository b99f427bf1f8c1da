"""
Sharded scanning of quadratic forms.

A scan is a list of independent *jobs*; each job produces a :class:`ScanStats`
histogram and jobs are merged in job order, so the result does not depend on
how many worker processes ran them.  Job kinds:

``exhaustive``  every projective form whose top coefficients equal a fixed prefix
``planes``      the repeated planes L^2, one per plane
``lines``       one form per line (an irreducible binary quadric in two planes through it)
``pairs``       products L1*L2 over a slice of the unordered plane pairs
``sample``      uniformly random nonzero forms from a seeded generator
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .finite_field import FieldSpec
from .hermitian_surface import HermitianSurface, surface
from .quadric import MONOMIALS, batch_classifier, irreducible_quadratic

log = logging.getLogger(__name__)

BLOCK = 16384
EXHAUSTIVE_PREFIX = 3  # top coefficients fixed per exhaustive job


@dataclass(frozen=True)
class Job:
    kind: str
    t: int
    start: int = 0
    stop: int = 0
    seed: int = 0
    collect: tuple[tuple[int, int], ...] = ()


@dataclass
class ScanStats:
    """Histograms of one or more scanned batches.

    ``sections`` counts scanned forms by (type, |Z cap X|); ``forms`` weights the
    same keys by how many projective forms each scanned form stands for.
    """

    sections: Counter = field(default_factory=Counter)
    forms: Counter = field(default_factory=Counter)
    detail: Counter = field(default_factory=Counter)
    witness: dict = field(default_factory=dict)
    collected: dict = field(default_factory=dict)
    scanned: int = 0
    zero_forms: int = 0

    def merge(self, other: "ScanStats") -> "ScanStats":
        self.sections.update(other.sections)
        self.forms.update(other.forms)
        self.detail.update(other.detail)
        for k, v in other.witness.items():
            self.witness.setdefault(k, v)
        for k, v in other.collected.items():
            self.collected.setdefault(k, []).extend(v)
        self.scanned += other.scanned
        self.zero_forms += other.zero_forms
        return self

    def types(self) -> list[int]:
        return sorted({k[0] for k in self.sections})

    def histogram(self, type_id: int) -> dict[int, int]:
        return {sec: n for (tp, sec), n in sorted(self.sections.items()) if tp == type_id}


# -- form builders --------------------------------------------------------------


def product_coeffs(d1: np.ndarray, d2: np.ndarray, f: FieldSpec) -> np.ndarray:
    """Vectorised coefficients of (d1 . x)(d2 . x) for rows of d1, d2."""
    d1 = np.asarray(d1, dtype=np.intp)
    d2 = np.asarray(d2, dtype=np.intp)
    out = np.empty((len(d1), len(MONOMIALS)), dtype=np.intp)
    for m, (i, j) in enumerate(MONOMIALS):
        if i == j:
            out[:, m] = f.mul_table[d1[:, i], d2[:, i]]
        else:
            out[:, m] = f.add_table[f.mul_table[d1[:, i], d2[:, j]], f.mul_table[d1[:, j], d2[:, i]]]
    return out


def _combine(a: np.ndarray, b: np.ndarray, c: np.ndarray, f: FieldSpec, ka: int, kb: int) -> np.ndarray:
    """a + ka*b + kb*c coefficientwise."""
    return f.add_table[f.add_table[a, f.mul_table[ka, b]], f.mul_table[kb, c]].astype(np.intp)


def projective_coeffs(q: int, start: int, stop: int) -> np.ndarray:
    """Forms with index in [start, stop) whose first nonzero coefficient is 1.

    Form index = sum_m c_m q^m, so the top coefficients are the prefix.
    """
    idx = np.arange(start, stop, dtype=np.int64)
    coeffs = (idx[:, None] // (q ** np.arange(len(MONOMIALS), dtype=np.int64))) % q
    nz = coeffs != 0
    keep = nz.any(axis=1)
    lead = coeffs[np.arange(len(coeffs)), nz.argmax(axis=1)]
    return coeffs[keep & (lead == 1)].astype(np.intp)


def stratum_coeffs(s: HermitianSurface, kind: str, start: int = 0, stop: int | None = None) -> np.ndarray:
    f, space = s.field, s.space
    d = space.coords
    if kind == "planes":
        return product_coeffs(d, d, f)
    if kind == "lines":
        planes = space.lines[space.dual_lines][:, :2]
        d1, d2 = d[planes[:, 0]], d[planes[:, 1]]
        a, b = irreducible_quadratic(f)
        return _combine(product_coeffs(d1, d1, f), product_coeffs(d1, d2, f), product_coeffs(d2, d2, f), f, a, b)
    if kind == "pairs":
        i, j = plane_pairs(space.num_points)
        stop = len(i) if stop is None else stop
        return product_coeffs(d[i[start:stop]], d[j[start:stop]], f)
    raise ValueError(f"unknown stratum {kind!r}")


@lru_cache(maxsize=4)
def plane_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    i, j = np.triu_indices(n, k=1)
    return i.astype(np.int32), j.astype(np.int32)


def line_multiplicity(q: int) -> int:
    """Projective forms per line-shaped zero set: the monic irreducible quadratics."""
    return (q * q - q) // 2


def sample_coeffs(q: int, seed: int, block: int, n: int) -> np.ndarray:
    rng = np.random.default_rng([seed, block])
    return rng.integers(0, q, size=(n, len(MONOMIALS)), dtype=np.int64).astype(np.intp)


# -- job execution ------------------------------------------------------------


def scan_coeffs(s: HermitianSurface, coeffs: np.ndarray, multiplicity: int = 1,
                collect: Iterable[tuple[int, int]] = ()) -> ScanStats:
    """Classify a batch of forms and histogram the outcome."""
    stats = ScanStats()
    nonzero = coeffs.any(axis=1)
    stats.zero_forms = int((~nonzero).sum())
    coeffs = coeffs[nonzero]
    stats.scanned = len(coeffs)
    if not len(coeffs):
        return stats
    bc = batch_classifier(s)
    res = bc.classify(bc.evaluate(coeffs) == 0)
    tp, sec = res.type_id.astype(np.int64), res.section.astype(np.int64)
    key = tp * 10**6 + sec
    uniq, first, counts = np.unique(key, return_index=True, return_counts=True)
    for k, i0, n in zip(uniq.tolist(), first.tolist(), counts.tolist()):
        pair = (k // 10**6, k % 10**6)
        stats.sections[pair] += n
        stats.forms[pair] += n * multiplicity
        stats.witness[pair] = tuple(int(c) for c in coeffs[i0])

    def tally(name, mask, *cols):
        if not mask.any():
            return
        arr = np.stack([c[mask].astype(np.int64) for c in (tp, *cols, sec)], axis=1)
        rows, cnt = np.unique(arr, axis=0, return_counts=True)
        for r, n in zip(rows.tolist(), cnt.tolist()):
            stats.detail[(name, *r)] += n

    tally("line", (tp >= 3) & (tp <= 5), res.line_class)
    tally("pair", (tp >= 6) & (tp <= 8), res.tangent_planes, res.line_class)
    tally("cone", (tp >= 9) & (tp <= 10), res.gens_hi)
    tally("hyperbolic", (tp >= 11) & (tp <= 14), res.gens_hi, res.gens_lo)

    for want in collect:
        hit = (tp == want[0]) & (sec == want[1])
        if hit.any():
            stats.collected[tuple(want)] = [tuple(int(c) for c in row) for row in coeffs[hit]]
    return stats


def run_job(job: Job) -> ScanStats:
    s = surface(job.t)
    q = s.q
    if job.kind == "exhaustive":
        return scan_coeffs(s, projective_coeffs(q, job.start, job.stop), collect=job.collect)
    if job.kind == "planes":
        return scan_coeffs(s, stratum_coeffs(s, "planes"))
    if job.kind == "lines":
        return scan_coeffs(s, stratum_coeffs(s, "lines"), multiplicity=line_multiplicity(q))
    if job.kind == "pairs":
        return scan_coeffs(s, stratum_coeffs(s, "pairs", job.start, job.stop))
    if job.kind == "sample":
        return scan_coeffs(s, sample_coeffs(q, job.seed, job.start, job.stop), collect=job.collect)
    raise ValueError(f"unknown job kind {job.kind!r}")


def run_jobs(jobs: Sequence[Job], shards: int = 1) -> ScanStats:
    """Run jobs (in worker processes when ``shards > 1``) and merge in job order."""
    if shards < 1:
        raise ValueError("shards must be >= 1")
    total = ScanStats()
    if shards == 1 or len(jobs) <= 1:
        results: Iterable[ScanStats] = map(run_job, jobs)
    else:
        pool = ProcessPoolExecutor(max_workers=shards)
        results = pool.map(run_job, jobs)
    try:
        for k, part in enumerate(results):
            total.merge(part)
            if (k + 1) % 16 == 0:
                log.debug("merged %d/%d jobs", k + 1, len(jobs))
    finally:
        if shards > 1 and len(jobs) > 1:
            pool.shutdown()
    return total


def exhaustive_jobs(t: int, collect: tuple[tuple[int, int], ...] = ()) -> list[Job]:
    q = t * t
    width = q ** (len(MONOMIALS) - EXHAUSTIVE_PREFIX)
    return [Job("exhaustive", t, b * width, (b + 1) * width, collect=collect) for b in range(q**EXHAUSTIVE_PREFIX)]


def stratum_jobs(t: int) -> list[Job]:
    q = t * t
    n = q**3 + q**2 + q + 1
    npairs = n * (n - 1) // 2
    jobs = [Job("planes", t), Job("lines", t)]
    jobs += [Job("pairs", t, a, min(a + BLOCK, npairs)) for a in range(0, npairs, BLOCK)]
    return jobs


def sample_jobs(t: int, sample_size: int, seed: int, collect: tuple[tuple[int, int], ...] = ()) -> list[Job]:
    """Sample blocks are seeded by (seed, block index), independent of sharding."""
    if sample_size <= 0:
        raise ValueError("sample size must be positive")
    return [Job("sample", t, b, min(BLOCK, sample_size - b * BLOCK), seed=seed, collect=collect)
            for b in range((sample_size + BLOCK - 1) // BLOCK)]


@lru_cache(maxsize=4)
def exhaustive_scan(t: int, shards: int = 1) -> ScanStats:
    """Every projective quadratic form over GF(t^2); only practical for t = 2."""
    if t != 2:
        raise ValueError(f"exhaustive scan needs t=2 (t={t} has {(t**20 - 1) // (t * t - 1)} projective forms)")
    return run_jobs(exhaustive_jobs(t), shards)
