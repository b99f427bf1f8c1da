import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermcode.functional_code import (
    encode,
    full_weight_distribution,
    generator_matrix,
    generator_rank,
    stratified_census,
)
from hermcode.quadric import QuadraticForm, classify

F = QuadraticForm.from_terms


@pytest.mark.parametrize("t,n", [(2, 45), (3, 280)])
def test_generator_matrix_rank(t, n):
    from hermcode.hermitian_surface import surface

    s = surface(t)
    g = generator_matrix(s)
    assert g.shape == (10, n)
    assert generator_rank(s) == 10


def test_encode_examples(s2):
    assert encode(F({(0, 0): 1}), s2).weight == 36
    hyp = classify(F({(0, 1): 1, (2, 3): 1}), s2)
    assert encode(hyp.form, s2).weight == 45 - hyp.section


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=10, max_size=10).filter(any), st.integers(1, 3))
def test_weight_is_length_minus_section(coeffs, lam):
    from hermcode.hermitian_surface import surface

    s = surface(2)
    f = s.field
    form = QuadraticForm(tuple(coeffs))
    word = encode(form, s)
    assert word.weight == s.size - classify(form, s).section
    assert encode(form.scaled(lam, f), s).weight == word.weight
    # the codeword is the coefficient vector times the generator matrix
    g = generator_matrix(s)
    combo = [0] * s.size
    for c, row in zip(coeffs, g):
        combo = [f.add(a, f.mul(c, int(b))) for a, b in zip(combo, row)]
    assert tuple(combo) == word.symbols


def test_full_distribution_q4(s2):
    wd = full_weight_distribution(s2)
    assert wd.minimum_distance() == 22
    assert wd.weights()[:5] == [22, 24, 26, 28, 30]
    assert wd.counts[24] == 2970 and wd.counts[26] == 4320
    assert wd.total == 4**10 - 1
    assert all(w % 2 == 0 for w in wd.weights())
    assert max(wd.weights()) <= 45


def test_distribution_exports(s2):
    wd = full_weight_distribution(s2)
    rows = wd.to_csv().strip().splitlines()
    assert rows[0] == "weight,codeword_count,projective_count"
    assert rows[1] == "22,2160,720"
    assert len(rows) - 1 <= 45
    assert '"24": 2970' in wd.to_json()


def test_full_distribution_refuses_t3(s3):
    with pytest.raises(ValueError):
        full_weight_distribution(s3)


@pytest.mark.slow
def test_stratified_rank_one_and_two(s3):
    from hermcode.census import CensusConfig

    wd, report = stratified_census(s3, CensusConfig(sample_size=16384))
    assert not wd.exact
    strata = report.stats["strata"]
    assert strata.histogram(1) == {37: 280} and strata.histogram(2) == {28: 540}
    assert strata.scanned == 820 + 7462 + 820 * 819 // 2
    assert wd.counts[280 - 64] == 8 * (5040 + 15120)
