"""Leave-one-out influence of samples on the principal subspace.

Removing sample ``i`` and refitting moves the projections of all samples. The Frobenius norm of
that move is the absolute influence ``C_i``; dividing by the norm of the full-data residuals gives
the relative influence ``RC_i``. Large values flag outliers.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from pcadistance.dataio import write_json, write_table
from pcadistance.exceptions import InsufficientDataError, InvalidParameterError
from pcadistance.model import fit_pca
from pcadistance.scaling import fit_scaling
from pcadistance.utils import ordered_map

logger = logging.getLogger(__name__)

DEFAULT_OUTLIER_FRACTION = 0.05
BASELINE_TOLERANCE = 1e-10


@dataclass(frozen=True)
class InfluenceReport:
    """Absolute and relative influence of every sample, indexed like the data rows.

    When the data lies on its principal subspace the baseline vanishes, ``baseline_degenerate`` is
    set and every relative influence is reported as 0.
    """

    absolute: np.ndarray
    relative: np.ndarray
    baseline: float
    baseline_degenerate: bool = False

    def __post_init__(self):
        for name in ("absolute", "relative"):
            values = np.array(getattr(self, name), dtype=np.float64).ravel()
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    @property
    def ranking(self):
        """Row indices by decreasing influence; ties keep row order."""

        return np.argsort(-self.absolute, kind="stable")

    def to_frame(self, rows=None):
        """Tabulate the scores; ``rows`` relabels the samples, e.g. with their file rows."""

        return pd.DataFrame(
            {
                "row": np.arange(len(self.absolute)) if rows is None else rows,
                "absolute": self.absolute,
                "relative": self.relative,
            }
        )

    def to_dict(self):
        return {
            "absolute": self.absolute.tolist(),
            "relative": self.relative.tolist(),
            "baseline": self.baseline,
            "baseline_degenerate": self.baseline_degenerate,
        }

    def to_csv(self, path, rows=None):
        write_table(self.to_frame(rows), path)

    def to_json(self, path):
        write_json(self.to_dict(), path)


def _check_component_count(s, m, n):
    if isinstance(n, (int, np.integer)) and not isinstance(n, bool):
        if n > min(s - 2, m):
            raise InsufficientDataError(
                "Influence with {} components needs n <= min(s - 2, m) = {}.".format(
                    n, min(s - 2, m)
                )
            )


def influence_scores(matrix, n, scale=True, threads=1):
    """Compute the influence of every sample on the fitted principal subspace.

    Projections are compared in the scaled coordinates of the full data. For fold ``i`` the
    scaling and the principal subspace are refit without row ``i``; every sample is projected with
    that fold's model and re-expressed in full-data scaled units.

    :param DataMatrix matrix: The complete samples.
    :param n: The component count or variance fraction, as for ``fit_pca``.
    :param bool scale: Standardize columns in every fit.
    :param int threads: Folds evaluated concurrently.
    :rtype: InfluenceReport
    :raise: ``InsufficientDataError`` if there are fewer than 3 rows or too many components.
    """

    if matrix.s < 3:
        raise InsufficientDataError("Influence needs at least 3 rows; got {}.".format(matrix.s))
    _check_component_count(matrix.s, matrix.m, n)

    scaling = fit_scaling(matrix, standardize=scale)
    scaled = scaling.apply(matrix.values)
    full = scaling.apply(fit_pca(matrix, n, scale=scale).project(matrix.values))

    def fold(row):
        model = fit_pca(matrix.drop_rows([row]), n, scale=scale)
        return float(np.linalg.norm(scaling.apply(model.project(matrix.values)) - full))

    absolute = np.array(ordered_map(fold, range(matrix.s), threads))
    baseline = float(np.linalg.norm(full - scaled))

    if baseline <= BASELINE_TOLERANCE * max(1.0, float(np.linalg.norm(scaled))):
        logger.warning("The data lies on its principal subspace; relative influence is undefined.")
        return InfluenceReport(absolute, np.zeros(matrix.s), baseline, baseline_degenerate=True)

    return InfluenceReport(absolute, absolute / baseline, baseline)


def outlier_count(s, fraction):
    """``ceil(fraction * s)``, the number of rows an outlier fraction removes."""

    if not 0.0 <= fraction < 0.5:
        raise InvalidParameterError(
            "The outlier fraction must lie in [0, 0.5); got {}.".format(fraction)
        )

    return int(math.ceil(fraction * s - 1e-9))


def remove_outliers(
    matrix, n, fraction=DEFAULT_OUTLIER_FRACTION, iterative=False, scale=True, threads=1
):
    """Drop the most influential samples.

    ``ceil(fraction * s)`` rows are removed. In one pass they are the rows with the largest relative
    influence; iteratively, the single most influential row is dropped and influence recomputed on
    what remains until the count is reached.

    :param DataMatrix matrix: The complete samples.
    :param n: The component count or variance fraction.
    :param float fraction: The share of rows to remove, in ``[0, 0.5)``.
    :param bool iterative: Recompute influence after every removal.
    :return: The remaining samples and the removed row indices, most influential first.
    :rtype: tuple(DataMatrix, list)
    :raise: ``InsufficientDataError`` if fewer than ``n + 2`` rows would remain.
    """

    count = outlier_count(matrix.s, fraction)
    if count == 0:
        return matrix, []

    required = n + 2 if isinstance(n, (int, np.integer)) and not isinstance(n, bool) else 3
    if matrix.s - count < required:
        raise InsufficientDataError(
            "Removing {} of {} rows leaves fewer than {}.".format(count, matrix.s, required)
        )

    if not iterative:
        removed = [int(row) for row in influence_scores(matrix, n, scale, threads).ranking[:count]]
        logger.info("Removed rows %s.", removed)
        return matrix.drop_rows(removed), removed

    remaining = np.arange(matrix.s)
    removed = []
    for _ in range(count):
        current = matrix.take_rows(remaining)
        worst = int(influence_scores(current, n, scale, threads).ranking[0])
        removed.append(int(remaining[worst]))
        remaining = np.delete(remaining, worst)

    logger.info("Removed rows %s.", removed)
    return matrix.drop_rows(removed), removed
