import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Optional, Tuple

import numpy as np

from pcadistance.exceptions import InvalidTaskError
from pcadistance.metric import EUCLIDEAN, MetricSpec
from pcadistance.utils import resolve_column

INTERSECTION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PredictionTask:
    """One incomplete record: the known coordinates and the ordered list of missing ones.

    The known values are in data units. Known and missing indices are disjoint and together cover
    ``0..m-1``; at least one coordinate is known and at least one is missing.
    """

    known_values: Mapping[int, float]
    missing_indices: Tuple[int, ...]
    metric: MetricSpec = EUCLIDEAN

    def __post_init__(self):
        known = {int(index): float(value) for index, value in dict(self.known_values).items()}
        missing = tuple(int(index) for index in self.missing_indices)

        if not missing:
            raise InvalidTaskError("The record has no missing values; there is nothing to predict.")
        if not known:
            raise InvalidTaskError("The record has no known values; there is no prediction space.")
        if len(set(missing)) != len(missing):
            raise InvalidTaskError("Missing indices repeat: {}.".format(list(missing)))

        overlap = set(known) & set(missing)
        if overlap:
            raise InvalidTaskError(
                "Indices {} are both known and missing.".format(sorted(overlap))
            )

        dimension = len(known) + len(missing)
        if sorted(set(known) | set(missing)) != list(range(dimension)):
            raise InvalidTaskError(
                "Known and missing indices must cover 0..{} exactly.".format(dimension - 1)
            )

        infinite = [index for index, value in known.items() if not math.isfinite(value)]
        if infinite:
            raise InvalidTaskError("Known values at {} are not finite.".format(infinite))

        object.__setattr__(self, "known_values", MappingProxyType(dict(sorted(known.items()))))
        object.__setattr__(self, "missing_indices", missing)

    @classmethod
    def from_values(cls, values, metric=EUCLIDEAN):
        """Build a task from a full-length record where missing entries are ``NaN``.

        :param values: The ``m`` values of the record.
        :param MetricSpec metric: The metric to predict with.
        :rtype: PredictionTask
        """

        values = np.asarray(values, dtype=np.float64).ravel()
        missing = np.isnan(values)

        return cls(
            known_values={int(i): float(values[i]) for i in np.flatnonzero(~missing)},
            missing_indices=tuple(int(i) for i in np.flatnonzero(missing)),
            metric=metric,
        )

    @classmethod
    def from_mapping(cls, column_names, record, metric=EUCLIDEAN):
        """Build a task from a mapping of column names to values.

        Columns mapped to ``None`` or ``NaN``, and columns absent from the mapping, are missing.

        :param tuple column_names: All column names, in order.
        :param dict record: The known values by column name.
        :raise: ``UnknownColumnError`` if the mapping names a column that does not exist.
        """

        values = np.full(len(column_names), np.nan)
        for column, value in record.items():
            index = resolve_column(column_names, column)
            values[index] = np.nan if value is None else float(value)

        return cls.from_values(values, metric=metric)

    @property
    def m(self):
        return len(self.known_values) + len(self.missing_indices)

    @property
    def k(self):
        return len(self.missing_indices)

    @property
    def known_indices(self):
        return tuple(self.known_values)

    @property
    def known_vector(self):
        """The known values ``l'`` in increasing coordinate order."""

        return np.array(list(self.known_values.values()), dtype=np.float64)

    @property
    def order(self):
        """The missing-first permutation: missing indices, then known indices."""

        return np.array(self.missing_indices + self.known_indices, dtype=np.intp)

    def with_metric(self, metric):
        return PredictionTask(dict(self.known_values), self.missing_indices, metric)


@dataclass(frozen=True)
class PredictionResult:
    """The prediction for one task.

    ``t_pred`` is in scaled units and follows the task's missing-index order; ``imputed`` maps each
    missing index to its value in data units; ``point`` is the completed record in data units.
    ``distance`` is ``d(L, P)`` in scaled units.
    """

    imputed: Mapping[int, float]
    t_pred: np.ndarray
    distance: float
    unique: bool
    distance_invariant: bool
    point: Optional[np.ndarray] = None

    def __post_init__(self):
        t_pred = np.array(self.t_pred, dtype=np.float64).ravel()
        t_pred.setflags(write=False)
        object.__setattr__(self, "t_pred", t_pred)
        object.__setattr__(self, "imputed", MappingProxyType(dict(self.imputed)))
        object.__setattr__(self, "distance", max(0.0, float(self.distance)))

        if self.point is not None:
            point = np.array(self.point, dtype=np.float64)
            point.setflags(write=False)
            object.__setattr__(self, "point", point)

    @property
    def intersects(self):
        """Whether the prediction space meets the principal subspace."""

        return self.distance < INTERSECTION_TOLERANCE

    def to_dict(self, column_names=None):
        def name(index):
            return column_names[index] if column_names else str(index)

        return {
            "imputed": {name(index): value for index, value in self.imputed.items()},
            "t_pred": self.t_pred.tolist(),
            "distance": self.distance,
            "unique": self.unique,
            "distance_invariant": self.distance_invariant,
            "intersects": self.intersects,
        }
