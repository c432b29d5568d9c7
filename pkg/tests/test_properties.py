"""Wrappers running every randomized property suite with its fixed seed."""

import pytest

import property_suites


@pytest.mark.parametrize(
    "suite", property_suites.ALL_SUITES, ids=lambda s: s.__name__)
def test_property_suite(suite):
    out = suite()
    print(f"{out['suite']}: seed={out['seed']} "
          f"instances={out['instances']} failures={len(out['failures'])}")
    assert out["instances"] >= 50
    assert out["failures"] == []
