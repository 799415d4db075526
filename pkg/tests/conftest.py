import numpy as np
import pytest
from hypothesis import settings

from seqgraph.dataset import Dataset, TimeSeries

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


def make_dataset(rows, labels=None, name="test"):
    series = tuple(TimeSeries(np.asarray(r, dtype=float), id=i) for i, r in enumerate(rows))
    return Dataset(series, None if labels is None else np.asarray(labels), name)


@pytest.fixture
def two_family_dataset():
    """Two clearly separated pattern families, 10 series each, length 60."""
    rng = np.random.default_rng(7)
    t = np.arange(60, dtype=float)
    rows, labels = [], []
    for i in range(10):
        rows.append(np.sin(2 * np.pi * t / 20) + rng.normal(0, 0.05, 60))
        labels.append(0)
    for i in range(10):
        tri = 2 * np.abs((t % 20) / 20 - 0.5)
        rows.append(3.0 * tri + rng.normal(0, 0.05, 60))
        labels.append(1)
    return make_dataset(rows, labels)
