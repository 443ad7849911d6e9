"""Hypothesis settings profiles shared by the property tests.

Usage:
    from tests.settings import STANDARD_SETTINGS

    @given(matrix=small_matrices())
    @STANDARD_SETTINGS
    def test_something(matrix):
        ...

Tiers:
- STANDARD_SETTINGS: 60 examples - matrix algebra
- SLOW_SETTINGS: 15 examples - anything that builds cochain complexes
"""

from hypothesis import HealthCheck, settings

STANDARD_SETTINGS = settings(max_examples=60, deadline=None)

# Cochain modules are rebuilt per example
SLOW_SETTINGS = settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
