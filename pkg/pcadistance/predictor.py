"""Minimal-distance predictions of missing coordinates.

Every closed form here is stated for the missing coordinates placed first and for a principal
subspace through the origin. A task is therefore moved into scaled, centered coordinates and
permuted missing-first (:class:`_Frame`); predictions are mapped back before they are returned.
"""

import logging
from collections.abc import Mapping

import numpy as np
import scipy.linalg

from pcadistance.exceptions import (
    DimensionMismatchError,
    DistanceInvariantError,
    InvalidParameterError,
    InvalidTaskError,
    LeftInverseUnavailableError,
)
from pcadistance.linalg import EPS, gram_tolerance, solve_spd, zero_threshold
from pcadistance.metric import EUCLIDEAN
from pcadistance.task import PredictionResult, PredictionTask
from pcadistance.utils import ordered_map

logger = logging.getLogger(__name__)

NORMAL_SYSTEM = "normal-system"
LEFT_INVERSE = "left-inverse"
QUADRATIC_FIT = "quadratic-fit"
METHODS = (NORMAL_SYSTEM, LEFT_INVERSE, QUADRATIC_FIT)

QUADRATIC_SAMPLES = np.array([-1.0, 0.0, 1.0])


class _Frame(object):
    """A task in scaled, centered, missing-first coordinates."""

    def __init__(self, model, task):
        if task.m != model.m:
            raise DimensionMismatchError(
                "The record has {} coordinates but the model lives in R^{}.".format(
                    task.m, model.m
                )
            )
        task.metric.check_dimension(model.m)

        order = task.order
        known = model.scaling.apply(task.known_vector, columns=list(task.known_indices))

        self.k = task.k
        self.tau = zero_threshold(model.m)
        self.residual_map = model.residual_map.permuted(order)
        self.metric = task.metric.permuted(order)
        self.anchor = np.concatenate([np.zeros(task.k), known])

    def point(self, t):
        point = self.anchor.copy()
        point[: self.k] = t
        return point

    def norm(self, residual):
        return float(np.sqrt(max(0.0, residual @ self.metric.apply(residual))))

    def squared_distance(self, t):
        residual = self.residual_map.apply(self.point(t))
        return float(residual @ self.metric.apply(residual))

    def distance(self, t):
        return self.norm(self.residual_map.apply(self.point(t)))


def _result(model, task, t_pred, distance, unique, invariant):
    t_pred = np.asarray(t_pred, dtype=np.float64)
    missing = list(task.missing_indices)
    values = model.scaling.invert(t_pred, columns=missing)

    point = np.empty(task.m)
    point[list(task.known_indices)] = task.known_vector
    point[missing] = values

    return PredictionResult(
        imputed={index: float(value) for index, value in zip(missing, values)},
        t_pred=t_pred,
        distance=distance,
        unique=unique,
        distance_invariant=invariant,
        point=point,
    )


def _invariant_result(model, task, frame, offset):
    logger.debug(
        "Distance is invariant along the prediction space for %s; using column means.",
        list(task.missing_indices),
    )
    return _result(model, task, np.zeros(task.k), frame.norm(offset), False, True)


def _block_rank(block):
    eigenvalues = np.abs(scipy.linalg.eigvalsh(block.T @ block))
    return int(np.count_nonzero(eigenvalues > gram_tolerance(eigenvalues)))


def _require_single(task, operation):
    if task.k != 1:
        raise InvalidTaskError(
            "{} predicts exactly one missing value but the record has {}; "
            "use predict_space.".format(operation, task.k)
        )


def predict_line(model, task):
    """Predict a single missing coordinate with the Euclidean closed form.

    With ``w_1`` the residual column of the missing coordinate and ``W'l'`` the residual of the
    known part, ``t_pred = -(w_1^T W'l') / ||w_1||^2``. When ``||w_1||`` is below the zero
    threshold the distance does not depend on the missing value and the column mean is returned.

    :param PrincipalModel model: The fitted model.
    :param PredictionTask task: A task with exactly one missing index.
    :rtype: PredictionResult
    :raise: ``InvalidTaskError`` if more than one value is missing.
    """

    _require_single(task, "predict_line")
    frame = _Frame(model, task.with_metric(EUCLIDEAN))

    column = frame.residual_map.column(0)
    offset = frame.residual_map.apply(frame.anchor)

    if np.linalg.norm(column) < frame.tau:
        return _invariant_result(model, task, frame, offset)

    t = -(column @ offset) / (column @ column)
    return _result(model, task, [t], float(np.linalg.norm(t * column + offset)), True, False)


def predict_line_quadfit(model, task):
    """Predict a single missing coordinate from a quadratic fit of the squared distance.

    ``d(t)^2`` is sampled at ``t = -1, 0, 1``; its coefficients ``a_0, a_1, a_2`` solve the
    Vandermonde system of the samples and the minimiser is ``-a_1 / (2 a_2)``. This path shares no
    algebra with :func:`predict_line`.

    :raise: ``DistanceInvariantError`` if the fitted quadratic term vanishes.
    """

    _require_single(task, "predict_line_quadfit")
    frame = _Frame(model, task.with_metric(EUCLIDEAN))

    samples = np.array([frame.squared_distance([t]) for t in QUADRATIC_SAMPLES])
    vandermonde = np.vander(QUADRATIC_SAMPLES, 3, increasing=True)
    _, linear, quadratic = scipy.linalg.solve(vandermonde, samples)

    if quadratic < max(frame.tau**2, 16 * EPS * float(np.max(samples))):
        raise DistanceInvariantError("distance invariant along line")

    t = -linear / (2.0 * quadratic)
    return _result(model, task, [t], frame.distance([t]), True, False)


def predict_line_metric(model, task, metric):
    """Predict a single missing coordinate under the inner product ``x^T M y``.

    ``t_pred = -(w_1^T M W'l') / ||w_1||_M^2``. With ``M = E`` this is :func:`predict_line`.

    :param MetricSpec metric: The metric; its matrix is given in the data's column order.
    :raise: ``MetricError`` if the matrix is not symmetric positive-definite.
    """

    _require_single(task, "predict_line_metric")
    frame = _Frame(model, task.with_metric(metric))

    column = frame.residual_map.column(0)
    offset = frame.residual_map.apply(frame.anchor)

    if np.linalg.norm(column) < frame.tau:
        return _invariant_result(model, task, frame, offset)

    weighted = frame.metric.apply(column)
    t = -(weighted @ offset) / (weighted @ column)
    return _result(model, task, [t], frame.norm(t * column + offset), True, False)


def predict_space(model, task, method=NORMAL_SYSTEM):
    """Predict any number of missing coordinates.

    ``method`` selects how ``t_pred`` is obtained from the residual block ``W_k`` of the missing
    coordinates and the residual ``W'l'`` of the known part:

    * ``normal-system``: solve ``A t = b`` with ``A = W_k^T M W_k`` and ``b = -W_k^T M W'l'``. A
      singular system yields its minimum-norm solution and ``unique = False``.
    * ``left-inverse``: ``t = -L W_k (W_k^T W_k)^{-1} W_k^T W'l'`` with ``L`` a left inverse of
      ``W_k``. Only defined for full column rank and the Euclidean metric.
    * ``quadratic-fit``: fit the quadratic ``d(t)^2`` from ``(k+1)(k+2)/2`` samples and minimise it.

    :param PrincipalModel model: The fitted model.
    :param PredictionTask task: The record; its metric is honoured by every method but
        ``left-inverse``.
    :param str method: One of ``normal-system``, ``left-inverse``, ``quadratic-fit``.
    :rtype: PredictionResult
    :raise: ``LeftInverseUnavailableError`` if ``left-inverse`` is asked for a rank-deficient block.
    """

    if method not in METHODS:
        raise InvalidParameterError(
            "Unknown method {!r}; expected one of {}.".format(method, ", ".join(METHODS))
        )

    frame = _Frame(model, task)
    block = frame.residual_map.columns(np.arange(task.k))
    offset = frame.residual_map.apply(frame.anchor)

    if np.linalg.norm(block) < frame.tau:
        return _invariant_result(model, task, frame, offset)

    if method == LEFT_INVERSE:
        t_pred, unique = _solve_left_inverse(frame, block, offset), True
    elif method == QUADRATIC_FIT:
        t_pred, unique = _solve_quadratic_fit(frame)
    else:
        weighted = frame.metric.apply(block)
        t_pred, unique = solve_spd(block.T @ weighted, -(weighted.T @ offset))

    return _result(model, task, t_pred, frame.distance(t_pred), unique, False)


def _solve_left_inverse(frame, block, offset):
    if not frame.metric.is_euclidean:
        raise InvalidParameterError(
            "The left-inverse path is defined for the Euclidean metric only."
        )
    if _block_rank(block) < frame.k:
        raise LeftInverseUnavailableError("left inverse unavailable")

    left_inverse = scipy.linalg.pinv(block)
    gram = block.T @ block
    projection = block @ scipy.linalg.solve(gram, block.T @ offset, assume_a="pos")
    return -(left_inverse @ projection)


def _solve_quadratic_fit(frame):
    k = frame.k
    unit = np.eye(k)

    constant = frame.squared_distance(np.zeros(k))
    plus = np.array([frame.squared_distance(unit[i]) for i in range(k)])
    minus = np.array([frame.squared_distance(-unit[i]) for i in range(k)])

    linear = (plus - minus) / 2.0
    quadratic = np.diag((plus + minus) / 2.0 - constant)
    samples = [constant, *plus, *minus]

    for i in range(k):
        for j in range(i + 1, k):
            pair = frame.squared_distance(unit[i] + unit[j])
            samples.append(pair)
            cross = pair - constant - linear[i] - linear[j] - quadratic[i, i] - quadratic[j, j]
            quadratic[i, j] = quadratic[j, i] = cross / 2.0

    if np.max(np.abs(quadratic)) < max(frame.tau**2, 16 * EPS * max(samples)):
        raise DistanceInvariantError("distance invariant along the prediction space")

    return solve_spd(quadratic, -linear / 2.0)


def impute_record(model, record, method=NORMAL_SYSTEM):
    """Predict the missing values of one record.

    A single missing value goes through the line formulas (Euclidean, or the general inner product
    when the task carries one); several missing values go through :func:`predict_space`.

    :param PrincipalModel model: The fitted model.
    :param record: A ``PredictionTask``, a mapping of column names to values (``None`` or absent for
        missing), or a full-length sequence with ``NaN`` for missing values.
    :param str method: The :func:`predict_space` method.
    :rtype: PredictionResult
    :raise: ``UnknownColumnError`` if a mapping names an unknown column, ``InvalidTaskError`` if the
        record has no missing or no known value.
    """

    if isinstance(record, PredictionTask):
        task = record
    elif isinstance(record, Mapping):
        task = PredictionTask.from_mapping(model.column_names, record)
    else:
        task = PredictionTask.from_values(record)

    if task.k == 1 and method == NORMAL_SYSTEM:
        if task.metric.is_euclidean:
            return predict_line(model, task)
        return predict_line_metric(model, task, task.metric)

    return predict_space(model, task, method=method)


def impute_records(model, tasks, method=NORMAL_SYSTEM, threads=1):
    """Impute several records against one shared model, returning results in input order."""

    return ordered_map(lambda task: impute_record(model, task, method=method), tasks, threads)
