"""The Markov-chain sampler: validity, determinism, exactness at N=1."""

from collections import Counter
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from towerdimer.interlacing import arrays_to_matching, validate
from towerdimer.kasteleyn import enumerate_matchings, matching_weight, partition_function
from towerdimer.lattice import build_tower
from towerdimer.shuffle import StepRandomness, evolve, sample_many, sample_tower


def test_jump_probabilities():
    r = StepRandomness.from_seed(Fraction(1, 2), Fraction(3), 0)
    assert abs(r.p_y - (3 / 2) / (1 + 3 / 2)) < 1e-15
    assert abs(r.p_x - 3 / 4) < 1e-15


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=10**6))
def test_every_sample_is_valid(n, seed):
    c = evolve(n, StepRandomness.from_seed(Fraction(2), Fraction(1, 2), seed))
    assert c.n == n
    validate(c)


def test_sampling_is_deterministic_in_seed():
    a, b = Fraction(1), Fraction(2)
    _, m1 = sample_tower(3, a, b, seed=42)
    _, m2 = sample_tower(3, a, b, seed=42)
    assert m1 == m2


def test_sample_many_returns_independent_draws():
    out = sample_many(2, Fraction(1), Fraction(1), seed=7, count=50)
    assert len(out) == 50
    assert len({tuple(map(tuple, c.xs)) for c in out}) > 1


def test_exact_distribution_small_tower():
    # chi-square against the exact Boltzmann law at N=1
    a, b = Fraction(2), Fraction(1, 2)
    g = build_tower(1, a, b)
    z = partition_function(g)
    probs = {frozenset(m): float(matching_weight(m) / z) for m in enumerate_matchings(g)}
    r = StepRandomness.from_seed(a, b, 2718)
    samples = 20_000
    counts = Counter(frozenset(arrays_to_matching(g, evolve(1, r))) for _ in range(samples))
    stat = sum(
        (counts[k] - samples * p) ** 2 / (samples * p) for k, p in probs.items()
    )
    from scipy.stats import chi2

    assert chi2.sf(stat, len(probs) - 1) > 1e-3
