"""Percentile intervals for a predicted value from resampled model fits."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from pcadistance.exceptions import (
    DegenerateDataError,
    InvalidParameterError,
    InvalidTaskError,
    ResamplingError,
)
from pcadistance.model import fit_pca
from pcadistance.predictor import impute_record
from pcadistance.utils import ordered_map

logger = logging.getLogger(__name__)

BOOTSTRAP = "bootstrap"
JACKKNIFE = "jackknife"
RESAMPLING_METHODS = (BOOTSTRAP, JACKKNIFE)

MINIMUM_REPLICATES = 20
DEFAULT_REPLICATES = 500
DEFAULT_LEVEL = 0.9


@dataclass(frozen=True)
class IntervalEstimate:
    """An empirical percentile interval for one imputed coordinate, in data units.

    ``lower <= upper`` always holds; ``point`` (the full-data prediction) may fall outside the
    interval when the replicate predictions are skewed.
    """

    point: float
    lower: float
    upper: float
    level: float
    replicates: int
    skipped: int
    method: str
    seed: int
    column: int
    p: Optional[int] = None

    @property
    def width(self):
        return self.upper - self.lower

    def to_dict(self):
        return {
            "point": self.point,
            "lower": self.lower,
            "upper": self.upper,
            "level": self.level,
            "replicates": self.replicates,
            "skipped": self.skipped,
            "method": self.method,
            "p": self.p,
            "seed": self.seed,
            "column": self.column,
        }


def _replicate_rows(s, method, p, replicates, seed):
    rng = np.random.default_rng(seed)

    if method == BOOTSTRAP:
        return [rng.integers(0, s, size=s) for _ in range(replicates)]

    return [np.sort(rng.choice(s, size=s - p, replace=False)) for _ in range(replicates)]


def _replicate_prediction(matrix, rows, n, scale, task, column):
    """Refit on ``rows`` and predict ``column``; ``None`` when the resample is too degenerate."""

    try:
        model = fit_pca(matrix.take_rows(rows), n, scale=scale)
    except DegenerateDataError:
        return None

    if model.clamped:
        return None

    return impute_record(model, task).imputed[column]


def resample_ci(
    matrix,
    n,
    task,
    method=BOOTSTRAP,
    p=1,
    replicates=DEFAULT_REPLICATES,
    level=DEFAULT_LEVEL,
    seed=0,
    scale=True,
    column=None,
    threads=1,
):
    """Estimate a percentile interval for one missing value of ``task``.

    Every replicate refits scaling and the principal subspace on a resample of the rows: ``s`` rows
    drawn with replacement (``bootstrap``), or ``s - p`` rows drawn without replacement
    (``jackknife``). All resamples are drawn from ``numpy.random.default_rng(seed)`` before any is
    evaluated, so the result does not depend on ``threads``.

    A replicate whose rank falls below ``n`` is skipped and counted.

    :param DataMatrix matrix: The complete samples.
    :param n: The component count or variance fraction.
    :param PredictionTask task: The incomplete record.
    :param str method: ``bootstrap`` or ``jackknife``.
    :param int p: Rows left out per jackknife replicate, ``1 <= p <= s - n - 2``.
    :param int replicates: At least 20.
    :param float level: The coverage level in ``(0, 1)``.
    :param int seed: Seeds the resampling generator.
    :param column: The missing coordinate to report; the first missing one by default.
    :rtype: IntervalEstimate
    :raise: ``ResamplingError`` if more than half of the replicates are skipped.
    """

    if method not in RESAMPLING_METHODS:
        raise InvalidParameterError(
            "Unknown resampling method {!r}; expected one of {}.".format(
                method, ", ".join(RESAMPLING_METHODS)
            )
        )
    if replicates < MINIMUM_REPLICATES:
        raise InvalidParameterError(
            "At least {} replicates are required; got {}.".format(MINIMUM_REPLICATES, replicates)
        )
    if not 0.0 < level < 1.0:
        raise InvalidParameterError("The level must lie in (0, 1); got {}.".format(level))

    if method == JACKKNIFE:
        count = n if isinstance(n, (int, np.integer)) and not isinstance(n, bool) else 1
        if not 1 <= p <= matrix.s - count - 2:
            raise InvalidParameterError(
                "Leave-p-out needs 1 <= p <= {}; got {}.".format(matrix.s - count - 2, p)
            )

    if column is None:
        column = task.missing_indices[0]
    else:
        column = matrix.column_index(column)
        if column not in task.missing_indices:
            raise InvalidTaskError("Column {} is not missing in the record.".format(column))

    point = impute_record(fit_pca(matrix, n, scale=scale), task).imputed[column]
    samples = _replicate_rows(matrix.s, method, p, replicates, seed)

    predictions = ordered_map(
        lambda rows: _replicate_prediction(matrix, rows, n, scale, task, column), samples, threads
    )
    values = np.array([value for value in predictions if value is not None])
    skipped = replicates - len(values)

    if skipped * 2 > replicates:
        raise ResamplingError(
            "{} of {} replicates were rank deficient; no interval.".format(skipped, replicates)
        )
    if skipped:
        logger.warning("Skipped %d of %d rank-deficient replicates.", skipped, replicates)

    tail = (1.0 - level) / 2.0
    lower, upper = np.quantile(values, [tail, 1.0 - tail])

    return IntervalEstimate(
        point=float(point),
        lower=float(lower),
        upper=float(upper),
        level=level,
        replicates=replicates,
        skipped=skipped,
        method=method,
        seed=seed,
        column=int(column),
        p=p if method == JACKKNIFE else None,
    )
