import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from pcadistance.exceptions import DimensionMismatchError, InsufficientDataError

logger = logging.getLogger(__name__)

ZERO_DEVIATION = 1e-12


class ScalingMode(Enum):
    STANDARDIZE = "standardize"
    CENTER_ONLY = "center-only"


@dataclass(frozen=True)
class ScalingParams:
    """Columnwise affine scaling ``x -> (x - mean) / std``.

    Columns in center-only mode (zero deviation, or scaling switched off) are only shifted by their
    mean. Centering always happens: it moves the shifted principal subspace through the origin.
    """

    means: np.ndarray
    stds: np.ndarray
    modes: tuple

    def __post_init__(self):
        means = np.array(self.means, dtype=np.float64).ravel()
        stds = np.array(self.stds, dtype=np.float64).ravel()
        modes = tuple(ScalingMode(mode) for mode in self.modes)

        if not len(means) == len(stds) == len(modes):
            raise DimensionMismatchError(
                "Scaling needs one mean, deviation and mode per column; got {}, {} and {}.".format(
                    len(means), len(stds), len(modes)
                )
            )
        if np.any(stds < 0):
            raise DimensionMismatchError("Standard deviations must be nonnegative.")

        means.setflags(write=False)
        stds.setflags(write=False)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "stds", stds)
        object.__setattr__(self, "modes", modes)

    @classmethod
    def identity(cls, dimension):
        """Scaling that leaves ``dimension``-vectors unchanged."""

        return cls(
            np.zeros(dimension),
            np.ones(dimension),
            (ScalingMode.STANDARDIZE,) * dimension,
        )

    @property
    def dimension(self):
        return len(self.means)

    @property
    def divisors(self):
        """The per-column divisor: the deviation, or 1 in center-only mode."""

        standardized = np.array([mode is ScalingMode.STANDARDIZE for mode in self.modes])
        return np.where(standardized, self.stds, 1.0)

    def apply(self, values, columns=None):
        """Scale ``values``, a vector or a matrix with one row per sample.

        :param values: Values in data units.
        :param columns: The columns the trailing axis of ``values`` holds; all columns by default.
        :return: Values in scaled units.
        :rtype: numpy.ndarray
        """

        means, divisors = self._select(columns)
        return (np.asarray(values, dtype=np.float64) - means) / divisors

    def invert(self, values, columns=None):
        """Undo :meth:`apply`."""

        means, divisors = self._select(columns)
        return np.asarray(values, dtype=np.float64) * divisors + means

    def to_dict(self):
        return {
            "means": self.means.tolist(),
            "stds": self.stds.tolist(),
            "modes": [mode.value for mode in self.modes],
        }

    @classmethod
    def from_dict(cls, document):
        return cls(document["means"], document["stds"], tuple(document["modes"]))

    def _select(self, columns):
        if columns is None:
            return self.means, self.divisors

        columns = np.asarray(columns, dtype=np.intp)
        return self.means[columns], self.divisors[columns]


def fit_scaling(matrix, standardize=True):
    """Fit the columnwise scaling of a complete-sample matrix.

    Means are column averages; deviations use the sample divisor ``s - 1``. A column whose
    deviation is below ``1e-12`` is only centered.

    :param DataMatrix matrix: The complete samples.
    :param bool standardize: Divide by the deviation; when false every column is center-only.
    :rtype: ScalingParams
    :raise: ``InsufficientDataError`` if there are fewer than two rows.
    """

    if matrix.s < 2:
        raise InsufficientDataError(
            "Scaling needs at least 2 rows; got {}.".format(matrix.s)
        )

    means = matrix.values.mean(axis=0)
    stds = matrix.values.std(axis=0, ddof=1)

    modes = []
    for name, std in zip(matrix.column_names, stds):
        if standardize and std >= ZERO_DEVIATION:
            modes.append(ScalingMode.STANDARDIZE)
        else:
            if standardize:
                logger.debug("Column %r has zero deviation and is only centered.", name)
            modes.append(ScalingMode.CENTER_ONLY)

    return ScalingParams(means, stds, tuple(modes))
