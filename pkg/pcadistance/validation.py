"""Cross-validated prediction error for one target column.

Every method here shares one protocol: rows are split into folds, a predictor is fitted on the rows
outside a fold and predicts the target of each held-out row from its other coordinates. The
PCA-distance method is compared against column-mean and nearest-neighbour imputation this way.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd
import scipy.spatial.distance

from pcadistance.dataio import write_json, write_table
from pcadistance.exceptions import (
    DimensionMismatchError,
    InsufficientDataError,
    InvalidParameterError,
)
from pcadistance.model import fit_pca
from pcadistance.predictor import predict_line
from pcadistance.scaling import fit_scaling
from pcadistance.task import PredictionTask
from pcadistance.utils import ordered_map

logger = logging.getLogger(__name__)

PCA_DISTANCE = "pca-distance"
COLUMN_MEAN = "column-mean"
NEAREST_NEIGHBOURS = "nearest-neighbours"
DEFAULT_NEIGHBOURS = 5


@dataclass(frozen=True)
class ValidationReport:
    """Held-out predictions of the target column and their errors, in data units."""

    predicted: np.ndarray
    actual: np.ndarray
    method: str
    target: int
    folds: int
    in_sample_mse: Optional[float] = None

    def __post_init__(self):
        for name in ("predicted", "actual"):
            values = np.array(getattr(self, name), dtype=np.float64).ravel()
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    @property
    def squared_errors(self):
        return (self.predicted - self.actual) ** 2

    @property
    def mse(self):
        return float(np.mean(self.squared_errors))

    def to_frame(self):
        return pd.DataFrame(
            {
                "row": np.arange(len(self.actual)),
                "actual": self.actual,
                "predicted": self.predicted,
                "squared_error": self.squared_errors,
            }
        )

    def summary(self):
        return {
            "method": self.method,
            "target": self.target,
            "folds": self.folds,
            "mse": self.mse,
            "in_sample_mse": self.in_sample_mse,
        }

    def to_csv(self, path):
        write_table(self.to_frame(), path)

    def to_json(self, path):
        write_json(self.summary(), path)


def _fold_indices(s, folds, seed):
    if folds == s:
        return [np.array([row]) for row in range(s)]

    permutation = np.random.default_rng(seed).permutation(s)
    return [np.sort(fold) for fold in np.array_split(permutation, folds)]


def _held_out_predictions(matrix, target, folds, seed, threads, fit_predict, required_rows):
    s = matrix.s
    folds = s if folds is None else int(folds)

    if not 2 <= folds <= s:
        raise InvalidParameterError("Folds must lie in 2..{}; got {}.".format(s, folds))

    split = _fold_indices(s, folds, seed)
    training_rows = s - max(len(fold) for fold in split)
    if training_rows < required_rows:
        raise InsufficientDataError(
            "Each fold trains on {} rows but at least {} are needed.".format(
                training_rows, required_rows
            )
        )

    def evaluate(fold):
        return fit_predict(matrix.drop_rows(fold), matrix.values[fold])

    predicted = np.empty(s)
    for fold, values in zip(split, ordered_map(evaluate, split, threads)):
        predicted[fold] = values

    logger.debug("Cross-validated column %d over %d folds.", target, folds)
    return predicted, folds


def _resolve_target(matrix, target_column):
    if matrix.m < 2:
        raise DimensionMismatchError("Predicting a column needs at least one other column.")

    return matrix.column_index(target_column)


def _pca_predictor(n, target, scale):
    def fit_predict(training, rows):
        model = fit_pca(training, n, scale=scale)
        predictions = []

        for row in rows:
            known = {index: value for index, value in enumerate(row) if index != target}
            result = predict_line(model, PredictionTask(known, (target,)))
            predictions.append(result.imputed[target])

        return np.array(predictions)

    return fit_predict


def kfold_cv(matrix, n, target_column, folds=None, seed=0, scale=True, threads=1):
    """Cross-validate PCA-distance prediction of one column.

    Scaling and the principal subspace are refit on each fold's training rows, so a held-out row
    never contributes to the means and deviations it is predicted with.

    :param DataMatrix matrix: The complete samples.
    :param n: The component count or variance fraction, as for ``fit_pca``.
    :param target_column: The column to predict, by name or index.
    :param int folds: The number of folds; leave-one-out when ``None``.
    :param int seed: Seeds the fold assignment; unused for leave-one-out.
    :rtype: ValidationReport
    :raise: ``InsufficientDataError`` if a fold trains on fewer than ``n + 1`` rows.
    """

    target = _resolve_target(matrix, target_column)
    required = n + 1 if isinstance(n, (int, np.integer)) and not isinstance(n, bool) else 2
    fit_predict = _pca_predictor(n, target, scale)

    predicted, folds = _held_out_predictions(
        matrix, target, folds, seed, threads, fit_predict, required
    )
    in_sample = fit_predict(matrix, matrix.values)

    return ValidationReport(
        predicted=predicted,
        actual=matrix.values[:, target],
        method=PCA_DISTANCE,
        target=target,
        folds=folds,
        in_sample_mse=float(np.mean((in_sample - matrix.values[:, target]) ** 2)),
    )


def loo_cv(matrix, n, target_column, scale=True, threads=1):
    """Leave-one-out cross-validation of PCA-distance prediction.

    :raise: ``InsufficientDataError`` if there are fewer than ``n + 2`` rows.
    """

    return kfold_cv(matrix, n, target_column, folds=matrix.s, scale=scale, threads=threads)


def mean_imputation_cv(matrix, target_column, folds=None, seed=0, threads=1):
    """Cross-validate predicting the target as the training rows' column mean."""

    target = _resolve_target(matrix, target_column)

    def fit_predict(training, rows):
        return np.full(len(rows), training.values[:, target].mean())

    predicted, folds = _held_out_predictions(matrix, target, folds, seed, threads, fit_predict, 1)
    in_sample = fit_predict(matrix, matrix.values)

    return ValidationReport(
        predicted=predicted,
        actual=matrix.values[:, target],
        method=COLUMN_MEAN,
        target=target,
        folds=folds,
        in_sample_mse=float(np.mean((in_sample - matrix.values[:, target]) ** 2)),
    )


def knn_imputation_cv(
    matrix, target_column, neighbours=DEFAULT_NEIGHBOURS, folds=None, seed=0, scale=True, threads=1
):
    """Cross-validate predicting the target as the mean over the nearest training rows.

    Nearness is the Euclidean distance over the other columns, standardized with the training
    rows' scaling when ``scale`` is set.
    """

    if neighbours < 1:
        raise InvalidParameterError(
            "At least one neighbour is required; got {}.".format(neighbours)
        )

    target = _resolve_target(matrix, target_column)
    others = [index for index in range(matrix.m) if index != target]

    def fit_predict(training, rows):
        scaling = fit_scaling(training, standardize=scale)
        reference = scaling.apply(training.values)[:, others]
        queries = scaling.apply(rows)[:, others]

        distances = scipy.spatial.distance.cdist(queries, reference)
        nearest = np.argsort(distances, axis=1, kind="stable")[:, : min(neighbours, training.s)]
        return training.values[nearest, target].mean(axis=1)

    predicted, folds = _held_out_predictions(matrix, target, folds, seed, threads, fit_predict, 2)
    in_sample = fit_predict(matrix, matrix.values)

    return ValidationReport(
        predicted=predicted,
        actual=matrix.values[:, target],
        method=NEAREST_NEIGHBOURS,
        target=target,
        folds=folds,
        in_sample_mse=float(np.mean((in_sample - matrix.values[:, target]) ** 2)),
    )
