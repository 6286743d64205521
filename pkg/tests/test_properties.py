import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from props import PROPERTIES, check_emptiness_oracle, check_ground_transfer

FAST = settings(max_examples=80, deadline=None, suppress_health_check=list(HealthCheck))


@pytest.mark.parametrize("name", sorted(PROPERTIES))
def test_soundness_property(name):
    check = PROPERTIES[name]

    @FAST
    @given(st.randoms(use_true_random=False))
    def run(rng):
        check(rng)

    run()


@FAST
@given(st.randoms(use_true_random=False))
def test_emptiness_matches_enumeration(rng):
    check_emptiness_oracle(rng)


@FAST
@given(st.randoms(use_true_random=False))
def test_ground_encoding_preserves_membership(rng):
    check_ground_transfer(rng)
