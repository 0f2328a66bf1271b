from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import pandas as pd
import scipy.linalg

from pcadistance.exceptions import DimensionMismatchError, MetricError
from pcadistance.linalg import SYMMETRY_TOLERANCE


class MetricKind(Enum):
    EUCLIDEAN = "euclidean"
    GENERAL = "general"


@dataclass(frozen=True)
class MetricSpec:
    """The inner product ``(x, y) = x^T M y`` distances are measured with.

    The Euclidean metric carries no matrix. A general metric holds a symmetric positive-definite
    ``m x m`` matrix, checked on construction with a Cholesky factorization.
    """

    kind: MetricKind = MetricKind.EUCLIDEAN
    matrix: Optional[np.ndarray] = None

    def __post_init__(self):
        kind = MetricKind(self.kind)
        object.__setattr__(self, "kind", kind)

        if kind is MetricKind.EUCLIDEAN:
            if self.matrix is not None:
                raise MetricError("The Euclidean metric takes no matrix.")
            return

        matrix = np.array(self.matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise MetricError("A metric matrix must be square; got shape {}.".format(matrix.shape))

        scale = max(1.0, float(np.max(np.abs(matrix))))
        if float(np.max(np.abs(matrix - matrix.T))) > SYMMETRY_TOLERANCE * scale:
            raise MetricError("The metric matrix is not symmetric.")

        try:
            scipy.linalg.cholesky(matrix)
        except scipy.linalg.LinAlgError:
            raise MetricError("The metric matrix is not positive-definite.")

        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def euclidean(cls):
        return cls()

    @classmethod
    def general(cls, matrix):
        return cls(MetricKind.GENERAL, matrix)

    @classmethod
    def from_csv(cls, path, delimiter=","):
        """Read a general metric matrix from a headerless CSV file."""

        try:
            frame = pd.read_csv(path, header=None, sep=delimiter, dtype=np.float64)
        except ValueError:
            raise MetricError("Cannot read a numeric metric matrix from '{}'.".format(path))

        return cls.general(frame.to_numpy())

    @property
    def is_euclidean(self):
        return self.kind is MetricKind.EUCLIDEAN

    def check_dimension(self, dimension):
        if not self.is_euclidean and self.matrix.shape[0] != dimension:
            raise DimensionMismatchError(
                "The metric is defined on R^{} but the data lives in R^{}.".format(
                    self.matrix.shape[0], dimension
                )
            )

    def permuted(self, order):
        """The same inner product in coordinates reordered by ``order``."""

        if self.is_euclidean:
            return self

        order = np.asarray(order, dtype=np.intp)
        return MetricSpec.general(self.matrix[np.ix_(order, order)])

    def apply(self, x):
        """Return ``Mx``."""

        x = np.asarray(x, dtype=np.float64)
        if self.is_euclidean:
            return x

        return self.matrix @ x

    def to_dict(self):
        if self.is_euclidean:
            return {"kind": self.kind.value}

        return {"kind": self.kind.value, "matrix": self.matrix.tolist()}


EUCLIDEAN = MetricSpec()
