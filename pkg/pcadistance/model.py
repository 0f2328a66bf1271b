import json
import logging
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
import scipy.linalg

from pcadistance.data_matrix import default_column_names
from pcadistance.exceptions import (
    DataFormatError,
    DegenerateDataError,
    DimensionMismatchError,
    InvalidParameterError,
    OutputError,
)
from pcadistance.linalg import Basis, ResidualMap, numerical_rank, orthonormal_basis
from pcadistance.scaling import ScalingParams, fit_scaling

logger = logging.getLogger(__name__)

DEFAULT_VARIANCE_FRACTION = 0.9
FORMAT_VERSION = 1


@dataclass(frozen=True)
class PrincipalModel:
    """A fitted principal subspace.

    In scaled coordinates the shifted principal subspace is ``span(components)``: centering has
    already moved the column averages to the origin.
    """

    scaling: ScalingParams
    components: Basis
    explained_variance: np.ndarray
    column_names: Tuple[str, ...] = ()
    total_variance: float = float("nan")
    samples: int = 0
    clamped: bool = False
    _residual_map: ResidualMap = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.components.orthonormal:
            raise DimensionMismatchError("Principal components must form an orthonormal basis.")
        if self.scaling.dimension != self.components.dimension:
            raise DimensionMismatchError(
                "Scaling has {} columns but the components live in R^{}.".format(
                    self.scaling.dimension, self.components.dimension
                )
            )

        variance = np.array(self.explained_variance, dtype=np.float64).ravel()
        if len(variance) != self.components.size:
            raise DimensionMismatchError(
                "{} explained variances for {} components.".format(
                    len(variance), self.components.size
                )
            )
        variance.setflags(write=False)

        names = tuple(self.column_names) or default_column_names(self.components.dimension)
        if len(names) != self.components.dimension:
            raise DimensionMismatchError(
                "{} column names for {} columns.".format(len(names), self.components.dimension)
            )

        object.__setattr__(self, "explained_variance", variance)
        object.__setattr__(self, "column_names", names)
        object.__setattr__(self, "_residual_map", ResidualMap(self.components))

    @classmethod
    def from_components(cls, components, column_names=(), scaling=None):
        """Build a model directly from (not necessarily orthonormal) component vectors.

        The vectors are orthonormalized first; linearly dependent generators are accepted.
        Without ``scaling`` the data coordinates are taken to be the scaled coordinates.

        :param components: A ``Basis`` or a sequence of ``m``-vectors.
        :param tuple column_names: Optional column names.
        :param ScalingParams scaling: Optional scaling of the data coordinates.
        :rtype: PrincipalModel
        """

        if not isinstance(components, Basis):
            components = Basis.from_vectors(components)

        basis = orthonormal_basis(components)
        if scaling is None:
            scaling = ScalingParams.identity(basis.dimension)

        return cls(
            scaling=scaling,
            components=basis,
            explained_variance=np.ones(basis.size),
            column_names=column_names,
        )

    @property
    def n(self):
        """The number of retained components."""

        return self.components.size

    @property
    def m(self):
        return self.components.dimension

    @property
    def residual_map(self):
        return self._residual_map

    @property
    def explained_variance_ratio(self):
        if not self.total_variance > 0:
            return np.full(self.n, np.nan)

        return self.explained_variance / self.total_variance

    def project(self, values):
        """Project samples onto the shifted principal subspace.

        :param values: Samples in data units, one per row (or a single vector).
        :return: The projections, in data units.
        :rtype: numpy.ndarray
        """

        scaled = self.scaling.apply(values)
        q = self.components.columns
        return self.scaling.invert((scaled @ q) @ q.T)

    def distances(self, values):
        """Distance of each sample to the shifted principal subspace, in scaled units."""

        scaled = np.atleast_2d(self.scaling.apply(values))
        return np.linalg.norm(self._residual_map.apply(scaled.T), axis=0)

    def to_dict(self):
        return {
            "format_version": FORMAT_VERSION,
            "column_names": list(self.column_names),
            "scaling": self.scaling.to_dict(),
            "components": self.components.columns.T.tolist(),
            "explained_variance": self.explained_variance.tolist(),
            "total_variance": self.total_variance,
            "n": self.n,
            "samples": self.samples,
            "clamped": self.clamped,
        }

    @classmethod
    def from_dict(cls, document):
        if document.get("format_version") != FORMAT_VERSION:
            raise DimensionMismatchError(
                "Unsupported model format version {!r}.".format(document.get("format_version"))
            )

        return cls(
            scaling=ScalingParams.from_dict(document["scaling"]),
            components=Basis.from_vectors(document["components"], orthonormal=True),
            explained_variance=document["explained_variance"],
            column_names=tuple(document["column_names"]),
            total_variance=float(document["total_variance"]),
            samples=int(document["samples"]),
            clamped=bool(document["clamped"]),
        )

    def save(self, path):
        """Write the model as a JSON document."""

        try:
            with open(path, "w", encoding="utf-8") as handle:
                json.dump(self.to_dict(), handle, indent=2)
                handle.write("\n")
        except OSError as e:
            raise OutputError("Cannot write model to '{}': {}.".format(path, e.strerror))

    @classmethod
    def load(cls, path):
        """Read a model written by :meth:`save`.

        :raise: ``DataFormatError`` if the file is not a saved model, ``OSError`` if it can not be
            read.
        """

        with open(path, encoding="utf-8") as handle:
            try:
                return cls.from_dict(json.load(handle))
            except (ValueError, KeyError, TypeError, DimensionMismatchError):
                raise DataFormatError(path).invalid_model()


def fit_pca(matrix, n=DEFAULT_VARIANCE_FRACTION, scale=True):
    """Fit the shifted principal subspace of a complete-sample matrix.

    The components are the leading right singular vectors of the scaled matrix, each flipped so its
    largest-magnitude entry is positive.

    :param DataMatrix matrix: The complete samples.
    :param n: A component count, or a variance fraction in ``(0, 1]`` selecting the smallest count
        whose cumulative explained variance reaches it.
    :param bool scale: Standardize columns before fitting; columns are centered either way.
    :rtype: PrincipalModel
    :raise: ``DegenerateDataError`` if the scaled data has no variance at all.
    """

    scaling = fit_scaling(matrix, standardize=scale)
    scaled = scaling.apply(matrix.values)

    _, singular_values, right = scipy.linalg.svd(scaled, full_matrices=False)
    rank = min(numerical_rank(singular_values, scaled.shape), matrix.s - 1, matrix.m)
    if rank < 1:
        raise DegenerateDataError("The data has no variance; there is no principal subspace.")

    variances = singular_values**2 / (matrix.s - 1)
    count, clamped = _component_count(n, variances[:rank], float(variances.sum()))

    components = right[:count].T.copy()
    for column in components.T:
        if column[np.argmax(np.abs(column))] < 0:
            column *= -1.0

    return PrincipalModel(
        scaling=scaling,
        components=Basis(components, orthonormal=True),
        explained_variance=variances[:count],
        column_names=matrix.column_names,
        total_variance=float(variances.sum()),
        samples=matrix.s,
        clamped=clamped,
    )


def _component_count(n, variances, total):
    rank = len(variances)

    if isinstance(n, bool):
        raise InvalidParameterError("The component count must be a number, not {!r}.".format(n))

    if isinstance(n, (int, np.integer)):
        if n < 1:
            raise InvalidParameterError("At least one component is required; got {}.".format(n))
        if n > rank:
            logger.warning(
                "Requested %d components but the data has rank %d; using %d.", n, rank, rank
            )
            return rank, True
        return int(n), False

    fraction = float(n)
    if not 0.0 < fraction <= 1.0:
        raise InvalidParameterError(
            "A variance fraction must lie in (0, 1]; got {}.".format(fraction)
        )

    cumulative = np.cumsum(variances) / total
    count = int(np.searchsorted(cumulative, fraction - 1e-12)) + 1
    logger.debug("%d components reach %.4f of the variance.", min(count, rank), fraction)
    return min(count, rank), False
