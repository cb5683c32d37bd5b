"""Shared exact oracles for the test suite."""

from fractions import Fraction

from pentachain import IndexKind, enumerate_blueprints, incremental_indices


def enumeration_moments(index: IndexKind, n: int, p) -> tuple[Fraction, Fraction]:
    """Exact (mean, variance) of one index by weighted exhaustive sweep."""
    mean = Fraction(0)
    second = Fraction(0)
    for blueprint, prob in enumerate_blueprints(n, p):
        x = incremental_indices(blueprint).get(index)
        mean += prob * x
        second += prob * x * x
    return mean, second - mean * mean
