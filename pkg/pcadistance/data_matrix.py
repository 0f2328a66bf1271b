from dataclasses import dataclass
from typing import Tuple

import numpy as np

from pcadistance.exceptions import DimensionMismatchError
from pcadistance.utils import resolve_column


def default_column_names(count):
    return tuple("c{}".format(index) for index in range(count))


@dataclass(frozen=True)
class DataMatrix:
    """An ``s x m`` matrix of complete samples, one row per sample, with column names."""

    values: np.ndarray
    column_names: Tuple[str, ...] = ()

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)

        if values.ndim != 2:
            raise DimensionMismatchError(
                "A data matrix must be two dimensional; got shape {}.".format(values.shape)
            )
        if not np.all(np.isfinite(values)):
            raise DimensionMismatchError("A data matrix holds complete, finite samples only.")

        names = tuple(self.column_names) or default_column_names(values.shape[1])
        if len(names) != values.shape[1]:
            raise DimensionMismatchError(
                "{} column names for {} columns.".format(len(names), values.shape[1])
            )

        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_names", names)

    @property
    def s(self):
        """The number of samples."""

        return int(self.values.shape[0])

    @property
    def m(self):
        """The number of variables."""

        return int(self.values.shape[1])

    def column_index(self, column):
        """Resolve a column given by name or by position.

        :param column: A column name or an integer index.
        :rtype: int
        :raise: ``UnknownColumnError`` if no such column exists.
        """

        return resolve_column(self.column_names, column)

    def take_rows(self, indices):
        """Return the samples at ``indices`` (repetitions allowed) as a new matrix."""

        return DataMatrix(self.values[np.asarray(indices, dtype=np.intp)], self.column_names)

    def drop_rows(self, indices):
        """Return the matrix without the samples at ``indices``."""

        keep = np.ones(self.s, dtype=bool)
        keep[np.asarray(indices, dtype=np.intp)] = False
        return DataMatrix(self.values[keep], self.column_names)
