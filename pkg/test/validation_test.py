import json

import numpy as np
import pandas as pd
import pytest
from pytest import approx, raises

from pcadistance.data_matrix import DataMatrix
from pcadistance.exceptions import (
    DimensionMismatchError,
    InsufficientDataError,
    InvalidParameterError,
    UnknownColumnError,
)
from pcadistance.testing import affine_subspace_data, noisy_line_data
from pcadistance.validation import (
    ValidationReport,
    kfold_cv,
    knn_imputation_cv,
    loo_cv,
    mean_imputation_cv,
)


def exact_line(samples=10):
    x = np.linspace(-3.0, 6.0, samples)
    return DataMatrix(np.column_stack([x, 2.0 * x + 1.0]), ("x", "y"))


class TestLooCv(object):
    def test_exact_linear_data_is_predicted_exactly(self):
        report = loo_cv(exact_line(), 1, "y")

        assert report.mse <= 1e-12
        assert report.predicted == approx(report.actual)
        assert report.folds == 10
        assert report.method == "pca-distance"

    @pytest.mark.parametrize("components", [1, 2, 3])
    def test_exact_subspace_data_is_predicted_exactly(self, rng, components):
        matrix = affine_subspace_data(rng, 50, 6, components)

        assert loo_cv(matrix, components, 0).mse <= 1e-12

    def test_needs_two_rows_more_than_components(self):
        with raises(InsufficientDataError):
            loo_cv(exact_line(2), 1, "y")

    def test_beats_column_mean_imputation(self, noisy_line):
        pca = loo_cv(noisy_line, 1, "y")
        mean = mean_imputation_cv(noisy_line, "y")

        assert pca.mse < mean.mse
        assert pca.mse < 0.1

    def test_target_by_index(self):
        report = loo_cv(exact_line(), 1, 0)

        assert report.target == 0
        assert report.mse <= 1e-12

    def test_unknown_target(self):
        with raises(UnknownColumnError):
            loo_cv(exact_line(), 1, "w")

    def test_needs_another_column(self):
        with raises(DimensionMismatchError):
            loo_cv(DataMatrix([[1.0], [2.0], [3.0]]), 1, 0)


class TestKfoldCv(object):
    def test_every_row_is_predicted_once(self, noisy_line):
        report = kfold_cv(noisy_line, 1, "y", folds=5)

        assert report.folds == 5
        assert len(report.predicted) == noisy_line.s
        assert np.all(np.isfinite(report.predicted))

    def test_seed_fixes_the_folds(self, noisy_line):
        first = kfold_cv(noisy_line, 1, "y", folds=5, seed=3)
        second = kfold_cv(noisy_line, 1, "y", folds=5, seed=3, threads=4)

        assert np.array_equal(first.predicted, second.predicted)

    def test_reports_the_in_sample_error(self):
        report = kfold_cv(exact_line(12), 1, "y", folds=3)

        assert report.in_sample_mse == approx(0.0, abs=1e-12)

    def test_rejects_a_single_fold(self, noisy_line):
        with raises(InvalidParameterError):
            kfold_cv(noisy_line, 1, "y", folds=1)

    def test_rejects_more_folds_than_rows(self):
        with raises(InvalidParameterError):
            kfold_cv(exact_line(5), 1, "y", folds=6)

    def test_variance_fraction(self, noisy_line):
        assert kfold_cv(noisy_line, 0.9, "y", folds=4).mse < 0.1


class TestBaselines(object):
    def test_column_mean(self):
        matrix = DataMatrix([[0.0, 1.0], [1.0, 2.0], [2.0, 6.0]])

        report = mean_imputation_cv(matrix, 1)

        assert report.predicted == approx([4.0, 3.5, 1.5])
        assert report.method == "column-mean"

    def test_nearest_neighbours_beat_the_mean(self, noisy_line):
        knn = knn_imputation_cv(noisy_line, "y", neighbours=5, folds=10)
        mean = mean_imputation_cv(noisy_line, "y", folds=10)

        assert knn.mse < mean.mse
        assert knn.method == "nearest-neighbours"

    def test_single_neighbour(self):
        matrix = DataMatrix([[0.0, 10.0], [1.0, 20.0], [5.0, 30.0], [6.0, 40.0]])

        report = knn_imputation_cv(matrix, 1, neighbours=1, scale=False)

        assert report.predicted == approx([20.0, 10.0, 40.0, 30.0])

    def test_needs_a_neighbour(self, noisy_line):
        with raises(InvalidParameterError):
            knn_imputation_cv(noisy_line, "y", neighbours=0)


class TestValidationReport(object):
    def test_mse_is_the_mean_squared_error(self):
        report = ValidationReport([1.0, 2.0, 4.0], [1.0, 3.0, 2.0], "column-mean", 0, 3)

        assert report.squared_errors == approx([0.0, 1.0, 4.0])
        assert report.mse == approx(5.0 / 3.0, abs=1e-12)

    def test_to_csv(self, tmp_path):
        path = str(tmp_path / "validation.csv")

        ValidationReport([1.0, 2.0], [1.0, 3.0], "column-mean", 1, 2).to_csv(path)

        frame = pd.read_csv(path)
        assert frame.columns.tolist() == ["row", "actual", "predicted", "squared_error"]
        assert frame["squared_error"].tolist() == [0.0, 1.0]

    def test_to_json(self, tmp_path):
        path = str(tmp_path / "validation.json")

        ValidationReport([1.0], [3.0], "pca-distance", 1, 1, in_sample_mse=0.5).to_json(path)

        with open(path) as handle:
            assert json.load(handle) == {
                "method": "pca-distance",
                "target": 1,
                "folds": 1,
                "mse": 4.0,
                "in_sample_mse": 0.5,
            }


@pytest.mark.slow
class TestNoisyLineAcrossSeeds(object):
    def test_beats_column_mean_imputation(self):
        wins = 0
        for trial in range(100):
            matrix = noisy_line_data(np.random.default_rng(trial))
            wins += int(loo_cv(matrix, 1, "y").mse < mean_imputation_cv(matrix, "y").mse)

        assert wins >= 95
