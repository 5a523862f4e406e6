"""Shared fixtures: the bundled sample dataset, loaded once per session."""

from pathlib import Path

import pytest

from scoreline.features import FeatureBuilder
from scoreline.ingest import Dataset, load_dataset

SAMPLE_DIR = Path(__file__).resolve().parent.parent / "data" / "sample"


@pytest.fixture(scope="session")
def sample_dir() -> Path:
    return SAMPLE_DIR


@pytest.fixture(scope="session")
def dataset() -> Dataset:
    return load_dataset(SAMPLE_DIR, test_size=8)


@pytest.fixture(scope="session")
def builder(dataset) -> FeatureBuilder:
    return FeatureBuilder(dataset)
