import json

import numpy as np
import pytest

from specmeas.ldp import TestFunction
from specmeas.measures import CircleAtomicMeasure, IntervalAtomicMeasure


@pytest.fixture
def rng():
    """Seeded generator; every test gets a fresh stream."""
    return np.random.default_rng(20240601)


@pytest.fixture
def symmetric_measure():
    """Conjugation-invariant circle measure with an atom at pi."""
    return CircleAtomicMeasure(
        np.array([0.4, -0.4, 2.0, -2.0, np.pi]),
        np.array([0.1, 0.1, 0.2, 0.2, 0.4]),
    )


@pytest.fixture
def three_point_measure():
    """Measure on [0, 1] with three interior atoms."""
    return IntervalAtomicMeasure(
        np.array([0.1, 0.5, 0.8]), np.array([0.2, 0.5, 0.3])
    )


@pytest.fixture
def cosine():
    """``Re z`` on the default grid."""
    return TestFunction.real_part()


def normalize_spec(spec):
    """Normalize a Vega-Lite spec for comparison"""
    spec = spec.copy()

    if "$schema" in spec:
        spec["$schema"] = "https://vega.github.io/schema/vega-lite/v5.json"

    def normalize_data(d):
        if isinstance(d, dict):
            # Inline datasets are hashed by name and change with every estimate
            d.pop("data", None)
            d.pop("datasets", None)
            return {k: normalize_data(v) for k, v in sorted(d.items())}
        if isinstance(d, list):
            if d and isinstance(d[0], dict):
                return sorted(
                    (normalize_data(x) for x in d if x is not None),
                    key=lambda x: json.dumps(x, sort_keys=True),
                )
            return d
        return d

    normalized = normalize_data(spec)
    return dict(sorted(normalized.items()))
