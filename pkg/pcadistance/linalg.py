"""Dense kernels for orthogonal projections onto principal subspaces.

Projectors are always kept factored: a subspace is stored as an orthonormal ``m x r`` basis
``Q`` and the residual map ``W = QQ^T - E`` is applied as ``Q(Q^T x) - x``. No routine in this
module allocates an ``m x m`` matrix.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from pcadistance.exceptions import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    NotAGramMatrixError,
    NotOrthonormalError,
    ZeroSubspaceError,
)

logger = logging.getLogger(__name__)

EPS = float(np.finfo(np.float64).eps)
ORTHONORMAL_TOLERANCE = 1e-10
SYMMETRY_TOLERANCE = 1e-9
GRAM_TOLERANCE = 1e-12


def rank_tolerance(singular_values, shape):
    """Return the threshold at or below which a singular value counts as zero.

    ``max(shape) * eps * sigma_max``, the usual LAPACK-style rank cutoff.

    :param numpy.ndarray singular_values: The singular values of the matrix.
    :param tuple shape: The shape of the matrix.
    :rtype: float
    """

    if len(singular_values) == 0:
        return 0.0

    return max(shape) * EPS * float(np.max(singular_values))


def numerical_rank(singular_values, shape):
    """Count the singular values above :func:`rank_tolerance`.

    :rtype: int
    """

    tolerance = rank_tolerance(singular_values, shape)
    return int(np.count_nonzero(np.asarray(singular_values) > tolerance))


def gram_tolerance(eigenvalues):
    """Return the threshold at or below which an eigenvalue of a Gram matrix counts as zero.

    Forming ``A = W^T W`` perturbs its eigenvalues by a few ``eps * lambda_max``, so the cutoff is
    ``1e-12 * lambda_max`` rather than the singular value cutoff.
    """

    if len(eigenvalues) == 0:
        return 0.0

    return GRAM_TOLERANCE * float(np.max(np.abs(eigenvalues)))


def zero_threshold(dimension):
    """The threshold ``tau`` below which a residual column (or block) is treated as zero.

    :param int dimension: The ambient dimension ``m``.
    :return: ``1e-10 * sqrt(m)`` in scaled units.
    :rtype: float
    """

    return 1e-10 * float(np.sqrt(dimension))


@dataclass(frozen=True)
class Basis:
    """An ordered list of ``m``-dimensional column vectors, stored as an ``m x r`` array.

    When ``orthonormal`` is set the columns are checked to be orthonormal on construction.
    """

    columns: np.ndarray
    orthonormal: bool = False

    def __post_init__(self):
        columns = np.array(self.columns, dtype=np.float64)

        if columns.ndim == 1:
            columns = columns.reshape(-1, 1)
        if columns.ndim != 2 or columns.shape[0] < 1:
            raise DimensionMismatchError(
                "A basis must be an m x r array; got shape {}.".format(columns.shape)
            )
        if columns.shape[1] < 1:
            raise ZeroSubspaceError("A basis needs at least one column.")
        if columns.shape[1] > columns.shape[0]:
            raise DimensionMismatchError(
                "A basis of R^{} can not have {} columns.".format(*columns.shape)
            )

        if self.orthonormal:
            gram = columns.T @ columns
            deviation = float(np.max(np.abs(gram - np.eye(columns.shape[1]))))
            if deviation > ORTHONORMAL_TOLERANCE:
                raise NotOrthonormalError(
                    "Columns deviate from orthonormality by {:.3g}.".format(deviation)
                )

        columns.setflags(write=False)
        object.__setattr__(self, "columns", columns)

    @classmethod
    def from_vectors(cls, vectors, orthonormal=False):
        """Join a sequence of vectors into a basis.

        :param vectors: The ``m``-dimensional vectors, in order.
        :param bool orthonormal: Whether the vectors are claimed to be orthonormal.
        :rtype: Basis
        :raise: ``DimensionMismatchError`` if the vectors have different lengths.
        """

        vectors = [np.asarray(vector, dtype=np.float64).ravel() for vector in vectors]
        if not vectors:
            raise ZeroSubspaceError("A basis needs at least one column.")

        lengths = sorted({len(vector) for vector in vectors})
        if len(lengths) > 1:
            raise DimensionMismatchError(
                "Basis vectors have different dimensions: {}.".format(lengths)
            )

        return cls(np.column_stack(vectors), orthonormal=orthonormal)

    @property
    def dimension(self):
        """The ambient dimension ``m``."""

        return int(self.columns.shape[0])

    @property
    def size(self):
        """The number of columns ``r``."""

        return int(self.columns.shape[1])


def orthonormal_basis(generators):
    """Return an orthonormal basis of the span of ``generators``.

    The rank is decided from the singular values (:func:`numerical_rank`); the basis itself comes
    from a column-pivoted QR factorization, truncated to the rank, with the signs chosen so the
    triangular factor has a positive diagonal. Linearly dependent generators need no special
    treatment.

    :param Basis generators: The generating vectors ``P``.
    :return: An orthonormal ``Basis`` with ``rank(P)`` columns and the same span.
    :rtype: Basis
    :raise: ``ZeroSubspaceError`` if the generators are all zero.
    """

    matrix = generators.columns

    if not np.any(matrix):
        raise ZeroSubspaceError("zero subspace")

    rank = numerical_rank(scipy.linalg.svdvals(matrix), matrix.shape)
    if rank == 0:
        raise ZeroSubspaceError("zero subspace")

    if rank < matrix.shape[1]:
        logger.debug(
            "Generators are linearly dependent: rank %d of %d columns.", rank, matrix.shape[1]
        )

    q, r, _ = scipy.linalg.qr(matrix, mode="economic", pivoting=True)
    signs = np.sign(np.diag(r)[:rank])
    signs[signs == 0] = 1.0

    return Basis(q[:, :rank] * signs, orthonormal=True)


class ResidualMap(object):
    """
    The map ``W = QQ^T - E`` for an orthonormal basis ``Q`` of a subspace. ``||Wx||`` is the
    distance from ``x`` to the subspace. The map is applied in ``O(m r)`` from the factored form.
    """

    def __init__(self, basis):
        """
        :param Basis basis: An orthonormal basis of the subspace.
        :raise: ``NotOrthonormalError`` if the basis is not flagged orthonormal.
        """

        if not basis.orthonormal:
            raise NotOrthonormalError("A residual map needs an orthonormal basis.")

        self.basis = basis

    @property
    def dimension(self):
        return self.basis.dimension

    def apply(self, x):
        """Return ``Wx``.

        :param numpy.ndarray x: An ``m``-vector or an ``m x j`` block of column vectors.
        :rtype: numpy.ndarray
        """

        x = np.asarray(x, dtype=np.float64)
        if x.ndim not in (1, 2) or x.shape[0] != self.dimension:
            raise DimensionMismatchError(
                "Expected {} rows; got shape {}.".format(self.dimension, x.shape)
            )

        q = self.basis.columns
        return q @ (q.T @ x) - x

    def column(self, index):
        """Return ``w_j = W e_j``.

        :param int index: The coordinate ``j``.
        :rtype: numpy.ndarray
        """

        return self.columns([index])[:, 0]

    def columns(self, indices):
        """Return the block ``[w_j1 | ... | w_jk]`` for the given coordinates.

        :param indices: The coordinates, in order.
        :return: An ``m x k`` array.
        :rtype: numpy.ndarray
        """

        indices = self._check_indices(indices)
        q = self.basis.columns

        block = q @ q[indices].T
        block[indices, np.arange(len(indices))] -= 1.0
        return block

    def permuted(self, order):
        """Return the residual map in coordinates reordered by ``order``.

        Row ``i`` of the new basis is row ``order[i]`` of the current one; a row permutation of an
        orthonormal basis is again orthonormal.

        :param order: A permutation of ``0..m-1``.
        :rtype: ResidualMap
        """

        order = np.asarray(order, dtype=np.intp)
        if sorted(order.tolist()) != list(range(self.dimension)):
            raise DimensionMismatchError(
                "{} is not a permutation of 0..{}.".format(order.tolist(), self.dimension - 1)
            )

        return ResidualMap(Basis(self.basis.columns[order], orthonormal=True))

    def _check_indices(self, indices):
        indices = np.asarray(indices, dtype=np.intp).ravel()
        for index in indices:
            if not 0 <= index < self.dimension:
                raise IndexOutOfRangeError(int(index), self.dimension)

        return indices


def apply_residual(basis, x):
    """Return ``Wx = Q(Q^T x) - x`` for an orthonormal ``basis``."""

    return ResidualMap(basis).apply(x)


def residual_column(basis, index):
    """Return the column ``w_j = W e_j`` without forming ``W``."""

    return ResidualMap(basis).column(index)


def residual_columns(basis, indices):
    """Return the block ``W_k`` of residual columns for ``indices``."""

    return ResidualMap(basis).columns(indices)


def solve_spd(matrix, rhs, tolerance=None):
    """Solve ``A t = b`` for a symmetric positive semidefinite (Gram) matrix ``A``.

    A nonsingular system is solved through its Cholesky factor. A singular system is assumed to be
    consistent and is solved for the minimum-norm solution from the eigendecomposition of ``A``,
    dropping eigenvalues at or below :func:`gram_tolerance`.

    :param matrix: The ``k x k`` matrix ``A``.
    :param rhs: The ``k``-vector ``b``.
    :param float tolerance: Overrides :func:`gram_tolerance` when given.
    :return: The solution and whether it is unique.
    :rtype: tuple(numpy.ndarray, bool)
    :raise: ``NotAGramMatrixError`` if ``A`` is not symmetric within ``1e-9``.
    """

    a = np.asarray(matrix, dtype=np.float64)
    b = np.asarray(rhs, dtype=np.float64)

    if a.ndim != 2 or a.shape[0] != a.shape[1] or b.shape != (a.shape[0],):
        raise DimensionMismatchError(
            "Cannot solve a system with matrix {} and right-hand side {}.".format(a.shape, b.shape)
        )

    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if a.size and float(np.max(np.abs(a - a.T))) > SYMMETRY_TOLERANCE * scale:
        raise NotAGramMatrixError("not a Gram matrix")

    a = (a + a.T) / 2.0
    eigenvalues, eigenvectors = scipy.linalg.eigh(a)
    magnitudes = np.abs(eigenvalues)
    if tolerance is None:
        tolerance = gram_tolerance(magnitudes)

    keep = magnitudes > tolerance
    if np.all(keep):
        try:
            return scipy.linalg.cho_solve(scipy.linalg.cho_factor(a), b), True
        except scipy.linalg.LinAlgError:
            return scipy.linalg.solve(a, b, assume_a="sym"), True

    kept = eigenvectors[:, keep]
    solution = kept @ ((kept.T @ b) / eigenvalues[keep])
    return solution, False
