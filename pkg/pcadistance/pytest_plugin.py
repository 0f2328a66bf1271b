import numpy as np
import pytest

from pcadistance.testing import noisy_line_data, planted_outlier_data

SEED = 20240917


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def noisy_line(rng):
    return noisy_line_data(rng)


@pytest.fixture
def planted_outlier(rng):
    return planted_outlier_data(rng)


@pytest.fixture
def write_csv(tmp_path):
    """Write text to a CSV file under ``tmp_path`` and return its path as a string."""

    def write(text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write
