"""Importable data generators and reference solutions for tests.

The references here avoid the factored kernels of :mod:`pcadistance.linalg`: projectors are
formed densely and minimisers are found by search.
"""

import numpy as np
import scipy.linalg
import scipy.optimize

from pcadistance.data_matrix import DataMatrix
from pcadistance.model import PrincipalModel
from pcadistance.task import PredictionTask


def dense_projector(basis):
    """The ``m x m`` orthogonal projector onto the span of ``basis`` (a ``Basis`` or an array)."""

    columns = np.asarray(getattr(basis, "columns", basis), dtype=np.float64)
    u, singular_values, _ = np.linalg.svd(columns, full_matrices=False)
    rank = int(np.count_nonzero(singular_values > 1e-12 * singular_values[0]))
    return u[:, :rank] @ u[:, :rank].T


def random_orthonormal(rng, m, n):
    q, _ = np.linalg.qr(rng.standard_normal((m, n)))
    return q


def random_spd(rng, m):
    factor = rng.standard_normal((m, m))
    return factor @ factor.T + m * np.eye(m)


def random_instance(rng, max_dimension=8, max_components=4, max_missing=3):
    """A random model in scaled coordinates and a task to predict against it.

    :return: The model and the task.
    :rtype: tuple(PrincipalModel, PredictionTask)
    """

    m = int(rng.integers(2, max_dimension + 1))
    n = int(rng.integers(1, min(max_components, m - 1) + 1))
    k = int(rng.integers(1, min(max_missing, m - 1) + 1))

    model = PrincipalModel.from_components(random_orthonormal(rng, m, n).T)
    missing = [int(index) for index in rng.choice(m, size=k, replace=False)]
    known = {index: float(3 * rng.standard_normal()) for index in range(m) if index not in missing}

    return model, PredictionTask(known, tuple(missing))


def affine_subspace_data(rng, samples, dimension, components, noise=0.0, spread=5.0):
    """Samples on (or, with ``noise``, near) a random ``components``-dimensional affine subspace."""

    offset = rng.uniform(-10, 10, size=dimension)
    directions = rng.standard_normal((components, dimension))
    coefficients = spread * rng.standard_normal((samples, components))
    values = offset + coefficients @ directions
    if noise:
        values = values + noise * rng.standard_normal(values.shape)

    return DataMatrix(values)


def planted_outlier_data(rng, inliers=20, offset=10.0, spread=10.0):
    """Inliers near the plane ``z = 0`` with unit noise, plus one row ``offset`` above it.

    The outlier's ``x, y`` are drawn like the inliers'. It is always the last row.

    :return: The samples and the outlier's row index.
    :rtype: tuple(DataMatrix, int)
    """

    plane = spread * rng.standard_normal((inliers + 1, 2))
    height = rng.standard_normal(inliers + 1)
    height[-1] = offset

    return DataMatrix(np.column_stack([plane, height]), ("x", "y", "z")), inliers


def noisy_line_data(rng, samples=200, slope=2.0, intercept=0.0, noise=0.1):
    """``y = slope * x + intercept + N(0, noise^2)`` with ``x`` uniform on ``[0, 10]``."""

    x = rng.uniform(0, 10, size=samples)
    y = slope * x + intercept + noise * rng.standard_normal(samples)

    return DataMatrix(np.column_stack([x, y]), ("x", "y"))


def residual_function(model, task, metric_matrix=None):
    """``t -> L^T (H - E) l(t)`` in scaled coordinates, with ``M = L L^T`` (``L = E`` by default).

    The squared norm of the returned vector is the squared distance the predictor minimises.
    """

    projector = dense_projector(model.components)
    shift = projector - np.eye(model.m)
    if metric_matrix is not None:
        shift = scipy.linalg.cholesky(metric_matrix, lower=True).T @ shift

    missing = list(task.missing_indices)
    base = np.zeros(model.m)
    base[list(task.known_indices)] = model.scaling.apply(
        task.known_vector, columns=list(task.known_indices)
    )

    def residual(t):
        point = base.copy()
        point[missing] = np.atleast_1d(t)
        return shift @ point

    return residual


def _grid(k, bound, points):
    axis = np.linspace(-bound, bound, points)
    return np.array(np.meshgrid(*([axis] * k), indexing="ij")).reshape(k, -1).T


def brute_force_minimizer(residual, k, bound=10.0, points=11):
    """Minimise ``||residual(t)||`` over ``t`` in ``R^k`` by search.

    The best point of a grid over ``[-bound, bound]^k`` starts a Levenberg-Marquardt refinement.

    :return: The minimiser and the minimal distance.
    :rtype: tuple(numpy.ndarray, float)
    """

    grid = _grid(k, bound, points)
    start = grid[np.argmin([residual(t) @ residual(t) for t in grid])]

    found = scipy.optimize.least_squares(
        residual, start, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15
    )
    return found.x, float(np.linalg.norm(residual(found.x)))


def golden_section_minimizer(distance, bound=10.0, points=41):
    """Minimise a function of one variable: a grid search, then golden-section refinement.

    :return: The minimiser and the minimum.
    :rtype: tuple(float, float)
    """

    grid = _grid(1, bound, points)[:, 0]
    start = grid[np.argmin([distance(t) for t in grid])]
    step = grid[1] - grid[0]

    found = scipy.optimize.minimize_scalar(
        distance, bracket=(start - step, start + step), method="golden", tol=1e-12
    )
    return float(found.x), float(found.fun)
