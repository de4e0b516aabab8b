"""Particle arrays, the matching bijection and height functions."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from towerdimer.interlacing import (
    Configuration,
    ConfigurationError,
    arrays_to_matching,
    config_from_json,
    config_to_json,
    config_weight,
    height_function,
    height_from_particles,
    matching_to_arrays,
    staircase,
    validate,
)
from towerdimer.kasteleyn import enumerate_matchings, matching_weight
from towerdimer.lattice import build_tower
from towerdimer.shuffle import StepRandomness, evolve

A = Fraction(2, 3)
B = Fraction(5, 7)


def test_staircase():
    assert staircase(4) == [-1, -2, -3, -4]
    assert staircase(0) == []


@pytest.mark.parametrize("n", [1, 2, 3])
def test_bijection_roundtrip_and_injectivity(n):
    g = build_tower(n, A, B)
    seen = set()
    for m in enumerate_matchings(g):
        c = matching_to_arrays(g, frozenset(m))
        validate(c)
        key = config_to_json(c)
        assert key not in seen
        seen.add(key)
        assert arrays_to_matching(g, c) == frozenset(m)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_weight_exponents_reproduce_matching_weight(n):
    g = build_tower(n, A, B)
    for m in enumerate_matchings(g):
        c = matching_to_arrays(g, frozenset(m))
        ea, eb = config_weight(c)
        assert A**ea * B**eb == matching_weight(m)


def test_invalid_configuration_rejected():
    c = Configuration(n=1, ys=[[0], [0, -1]], xs=[[5], [0, -1]], zs=[[-1, -2]])
    with pytest.raises(ConfigurationError):
        validate(c)


@pytest.mark.parametrize("n", [1, 2])
def test_height_function_agrees_with_particle_form(n):
    g = build_tower(n, A, B)
    for m in enumerate_matchings(g):
        c = matching_to_arrays(g, frozenset(m))
        h_geom = height_function(g, frozenset(m))
        h_part = height_from_particles(c)
        common = set(h_geom) & set(h_part)
        assert common
        for f in common:
            assert h_geom[f] == h_part[f], f


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=10**6))
def test_random_configurations_serialize(n, seed):
    c = evolve(n, StepRandomness.from_seed(A, B, seed))
    validate(c)
    assert config_from_json(config_to_json(c)) == c
