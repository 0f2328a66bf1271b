import numpy as np
import pytest
from pytest import approx, raises

from pcadistance.data_matrix import DataMatrix
from pcadistance.exceptions import (
    DimensionMismatchError,
    DistanceInvariantError,
    InvalidParameterError,
    InvalidTaskError,
    LeftInverseUnavailableError,
    UnknownColumnError,
)
from pcadistance.metric import MetricSpec
from pcadistance.model import PrincipalModel, fit_pca
from pcadistance.predictor import (
    impute_record,
    impute_records,
    predict_line,
    predict_line_metric,
    predict_line_quadfit,
    predict_space,
)
from pcadistance.task import PredictionTask
from pcadistance.testing import (
    affine_subspace_data,
    brute_force_minimizer,
    golden_section_minimizer,
    random_instance,
    random_orthonormal,
    random_spd,
    residual_function,
)

DIAGONAL = np.array([1.0, 0.0, 1.0]) / np.sqrt(2)


def axis_model(m, *axes):
    return PrincipalModel.from_components([np.eye(m)[axis] for axis in axes])


def well_conditioned(model, task, floor=1e-3):
    block = model.residual_map.columns(task.missing_indices)
    return np.linalg.eigvalsh(block.T @ block).min() > floor


class TestPredictLine(object):
    def test_subspace_orthogonal_to_the_missing_axis(self):
        for a, b in [(1.0, 2.0), (-3.0, 0.5), (0.0, 0.0)]:
            result = predict_line(axis_model(3, 2), PredictionTask({1: a, 2: b}, (0,)))

            assert result.t_pred == approx([0.0])
            assert result.unique

    def test_line_parallel_to_the_subspace(self):
        result = predict_line(axis_model(3, 0, 1), PredictionTask({1: 3.0, 2: 4.0}, (0,)))

        assert result.distance_invariant
        assert not result.unique
        assert result.t_pred == approx([0.0])
        assert result.distance == approx(4.0)

    def test_diagonal_subspace(self):
        model = PrincipalModel.from_components([DIAGONAL])

        result = predict_line(model, PredictionTask({1: 1.0, 2: 1.0}, (0,)))

        assert result.t_pred == approx([1.0])
        assert result.distance == approx(1.0)
        assert dict(result.imputed) == {0: approx(1.0)}
        assert result.point == approx([1.0, 1.0, 1.0])

    def test_missing_coordinate_in_the_middle(self):
        model = PrincipalModel.from_components([DIAGONAL])

        result = predict_line(model, PredictionTask({0: 2.0, 1: 5.0}, (2,)))

        assert dict(result.imputed) == {2: approx(2.0)}
        assert result.distance == approx(5.0)

    def test_requires_one_missing_value(self):
        with raises(InvalidTaskError) as e:
            predict_line(axis_model(3, 0), PredictionTask({0: 1.0}, (1, 2)))

        assert "use predict_space" in str(e.value)

    def test_rejects_a_task_of_another_dimension(self):
        with raises(DimensionMismatchError):
            predict_line(axis_model(3, 0), PredictionTask({0: 1.0}, (1,)))

    def test_intersection_point_lies_in_the_subspace(self, rng):
        data = affine_subspace_data(rng, 30, 4, 2)
        model = fit_pca(data, 2)
        record = data.values[0]

        task = PredictionTask({1: record[1], 2: record[2], 3: record[3]}, (0,))

        result = predict_line(model, task)

        assert result.intersects
        assert result.imputed[0] == approx(record[0], abs=1e-8)
        assert model.distances(result.point)[0] < 1e-8


class TestPredictLineQuadfit(object):
    def test_diagonal_subspace(self):
        model = PrincipalModel.from_components([DIAGONAL])

        result = predict_line_quadfit(model, PredictionTask({1: 1.0, 2: 1.0}, (0,)))

        assert result.t_pred == approx([1.0])
        assert result.distance == approx(1.0)

    def test_pure_quadratic(self):
        result = predict_line_quadfit(axis_model(3, 2), PredictionTask({1: 2.0, 2: 7.0}, (0,)))

        assert result.t_pred == approx([0.0], abs=1e-12)

    def test_line_parallel_to_the_subspace(self):
        with raises(DistanceInvariantError) as e:
            predict_line_quadfit(axis_model(3, 0, 1), PredictionTask({1: 3.0, 2: 4.0}, (0,)))

        assert str(e.value) == "distance invariant along line"

    def test_agrees_with_the_closed_form(self, rng):
        checked = 0
        while checked < 200:
            model, task = random_instance(rng, max_missing=1)
            if not well_conditioned(model, task):
                continue

            closed = predict_line(model, task)
            fitted = predict_line_quadfit(model, task)

            assert fitted.t_pred == approx(closed.t_pred, rel=1e-8, abs=1e-8)
            checked += 1


class TestPredictSpace(object):
    def test_subspace_orthogonal_to_the_missing_axes(self):
        result = predict_space(axis_model(4, 2, 3), PredictionTask({2: 5.0, 3: -1.0}, (0, 1)))

        assert result.t_pred == approx([0.0, 0.0])
        assert result.unique

    def test_space_parallel_to_the_subspace(self):
        result = predict_space(axis_model(4, 0, 1), PredictionTask({2: 3.0, 3: 4.0}, (0, 1)))

        assert result.distance_invariant
        assert not result.unique
        assert result.t_pred == approx([0.0, 0.0])
        assert result.distance == approx(5.0)

    @pytest.mark.parametrize("method", ["normal-system", "left-inverse", "quadratic-fit"])
    def test_diagonal_subspace(self, method):
        model = PrincipalModel.from_components([[1.0, 0.0, 1.0, 0.0]])

        result = predict_space(model, PredictionTask({2: 1.0, 3: 1.0}, (0, 1)), method=method)

        assert result.t_pred == approx([1.0, 0.0], abs=1e-10)
        assert result.distance == approx(1.0)

    def test_rank_deficient_block_gives_a_minimum_norm_solution(self):
        model = axis_model(3, 0)

        result = predict_space(model, PredictionTask({2: 2.0}, (0, 1)))

        assert not result.unique
        assert not result.distance_invariant
        assert result.t_pred == approx([0.0, 0.0])
        assert result.distance == approx(2.0)

    def test_left_inverse_needs_full_column_rank(self):
        with raises(LeftInverseUnavailableError) as e:
            predict_space(axis_model(3, 0), PredictionTask({2: 2.0}, (0, 1)), method="left-inverse")

        assert str(e.value) == "left inverse unavailable"

    def test_left_inverse_is_euclidean_only(self):
        task = PredictionTask({2: 1.0}, (0, 1), MetricSpec.general(np.eye(3)))

        with raises(InvalidParameterError):
            predict_space(axis_model(3, 2), task, method="left-inverse")

    def test_unknown_method(self):
        with raises(InvalidParameterError):
            predict_space(axis_model(3, 2), PredictionTask({2: 1.0}, (0, 1)), method="newton")

    def test_single_missing_value_agrees_with_the_line(self, rng):
        for _ in range(200):
            model, task = random_instance(rng, max_missing=1)

            assert predict_space(model, task).t_pred == approx(
                predict_line(model, task).t_pred, rel=1e-10, abs=1e-10
            )

    def test_left_inverse_agrees_with_the_normal_system(self, rng):
        checked = 0
        while checked < 100:
            model, task = random_instance(rng)
            if not well_conditioned(model, task):
                continue
            normal = predict_space(model, task)

            left = predict_space(model, task, method="left-inverse")

            assert left.t_pred == approx(normal.t_pred, rel=1e-8, abs=1e-8)
            checked += 1

    def test_quadratic_fit_agrees_with_the_normal_system(self, rng):
        checked = 0
        while checked < 100:
            model, task = random_instance(rng)
            if not well_conditioned(model, task):
                continue
            normal = predict_space(model, task)

            fitted = predict_space(model, task, method="quadratic-fit")

            assert fitted.t_pred == approx(normal.t_pred, rel=1e-8, abs=1e-8)
            checked += 1

    def test_matches_a_brute_force_minimizer(self, rng):
        for _ in range(200):
            model, task = random_instance(rng)

            result = predict_space(model, task)
            oracle, distance = brute_force_minimizer(residual_function(model, task), task.k)

            assert result.distance <= distance + 1e-9
            if result.unique:
                assert result.t_pred == approx(oracle, rel=1e-6, abs=1e-6)

    def test_no_point_of_the_space_is_closer(self, rng):
        for _ in range(20):
            model, task = random_instance(rng)
            result = predict_space(model, task)
            residual = residual_function(model, task)

            for t in 5 * rng.standard_normal((50, task.k)):
                assert result.distance <= np.linalg.norm(residual(t)) + 1e-9

    def test_degenerate_inputs_never_fail(self, rng):
        for _ in range(50):
            m = int(rng.integers(3, 8))
            n = int(rng.integers(1, m))
            k = int(rng.integers(1, n + 1))
            q = random_orthonormal(rng, n, n)
            components = np.zeros((m, n))
            components[:n] = q
            missing = tuple(int(index) for index in rng.choice(n, size=k, replace=False))
            known = {i: float(rng.standard_normal()) for i in range(m) if i not in missing}
            model = PrincipalModel.from_components(components.T)

            result = predict_space(model, PredictionTask(known, missing))

            assert result.distance_invariant
            assert result.t_pred == approx(np.zeros(k))


class TestPredictLineMetric(object):
    def test_identity_matches_the_euclidean_line(self, rng):
        for _ in range(100):
            model, task = random_instance(rng, max_missing=1)
            metric = MetricSpec.general(np.eye(model.m))

            assert predict_line_metric(model, task, metric).t_pred == approx(
                predict_line(model, task).t_pred, rel=1e-12, abs=1e-12
            )

    def test_uniform_scaling_cancels(self):
        model = PrincipalModel.from_components([DIAGONAL])
        task = PredictionTask({1: 1.0, 2: 3.0}, (0,))

        scaled = predict_line_metric(model, task, MetricSpec.general(4 * np.eye(3)))

        assert scaled.t_pred == approx(predict_line(model, task).t_pred)

    def test_diagonal_metric_matches_the_weighted_oracle(self):
        model = PrincipalModel.from_components([DIAGONAL])
        task = PredictionTask({1: 1.0, 2: 1.0}, (0,))
        weights = np.diag([1.0, 9.0, 1.0])

        result = predict_line_metric(model, task, MetricSpec.general(weights))
        oracle, _ = brute_force_minimizer(residual_function(model, task, weights), 1)

        assert result.t_pred == approx(oracle, abs=1e-6)

    def test_random_metrics_match_the_weighted_oracle(self, rng):
        for _ in range(100):
            model, task = random_instance(rng, max_missing=1)
            weights = random_spd(rng, model.m)

            result = predict_line_metric(model, task, MetricSpec.general(weights))
            oracle, distance = brute_force_minimizer(residual_function(model, task, weights), 1)

            assert result.t_pred == approx(oracle, rel=1e-6, abs=1e-6)
            assert result.distance == approx(distance, abs=1e-9)

    def test_weighted_space_matches_the_weighted_oracle(self, rng):
        checked = 0
        while checked < 50:
            model, task = random_instance(rng)
            weights = random_spd(rng, model.m)
            result = predict_space(model, task.with_metric(MetricSpec.general(weights)))
            if not result.unique:
                continue

            oracle, _ = brute_force_minimizer(residual_function(model, task, weights), task.k)

            assert result.t_pred == approx(oracle, rel=1e-6, abs=1e-6)
            checked += 1

    def test_requires_one_missing_value(self):
        with raises(InvalidTaskError):
            predict_line_metric(
                axis_model(3, 0), PredictionTask({0: 1.0}, (1, 2)), MetricSpec.general(np.eye(3))
            )


class TestImputeRecord(object):
    def test_exact_line(self):
        data = DataMatrix([[x, 2.0 * x] for x in (1.0, 2.0, 3.0, 5.0, 6.0)], ("x", "y"))
        model = fit_pca(data, 1)

        result = impute_record(model, {"x": 4.0})

        assert result.imputed[1] == approx(8.0, abs=1e-9)
        assert result.intersects

    def test_accepts_a_record_with_nan(self):
        data = DataMatrix([[x, 2.0 * x + 1.0] for x in range(6)], ("x", "y"))

        result = impute_record(fit_pca(data, 1), [np.nan, 11.0])

        assert result.imputed[0] == approx(5.0, abs=1e-9)

    def test_record_without_missing_values(self):
        data = DataMatrix([[x, 2.0 * x] for x in range(5)], ("x", "y"))

        with raises(InvalidTaskError):
            impute_record(fit_pca(data, 1), {"x": 1.0, "y": 2.0})

    def test_unknown_column(self):
        data = DataMatrix([[x, 2.0 * x] for x in range(5)], ("x", "y"))

        with raises(UnknownColumnError):
            impute_record(fit_pca(data, 1), {"w": 1.0})

    def test_general_metric_goes_through_the_metric_line(self):
        model = PrincipalModel.from_components([DIAGONAL])
        task = PredictionTask({1: 1.0, 2: 1.0}, (0,), MetricSpec.general(np.diag([1.0, 9.0, 1.0])))

        assert impute_record(model, task).t_pred == approx(
            predict_line_metric(model, task, task.metric).t_pred
        )

    def test_several_missing_values_go_through_the_space(self):
        model = PrincipalModel.from_components([[1.0, 0.0, 1.0, 0.0]])

        result = impute_record(model, PredictionTask({2: 1.0, 3: 1.0}, (0, 1)))

        assert result.t_pred == approx([1.0, 0.0], abs=1e-10)

    def test_matches_a_golden_section_oracle(self, rng):
        normal = np.array([1.0, 0.5, -1.0, 2.0, 0.5])
        points = rng.standard_normal((20, 5)) * 3
        points -= np.outer(points @ normal, normal) / (normal @ normal)
        points += 0.05 * rng.standard_normal((20, 5))
        model = fit_pca(DataMatrix(points), 4)

        record = points[0] + rng.standard_normal(5)
        result = impute_record(model, {index: record[index] for index in range(1, 5)})

        task = PredictionTask({index: record[index] for index in range(1, 5)}, (0,))
        residual = residual_function(model, task)
        oracle, _ = golden_section_minimizer(lambda t: float(np.linalg.norm(residual([t]))))

        assert result.t_pred[0] == approx(oracle, abs=1e-6)

    def test_translation_equivariance(self, rng):
        values = affine_subspace_data(rng, 30, 4, 2, noise=0.3).values
        shifted = values + [0.0, 7.5, 0.0, 0.0]
        record = {0: 1.0, 1: 2.0, 3: -1.0}

        base = impute_record(fit_pca(DataMatrix(values), 2), record)
        moved = impute_record(fit_pca(DataMatrix(shifted), 2), {**record, 1: 9.5})

        assert moved.imputed[2] == approx(base.imputed[2], abs=1e-9)

    def test_exact_recovery_on_affine_subspaces(self, rng):
        for n in (1, 2, 3):
            data = affine_subspace_data(rng, 50, 6, n)
            model = fit_pca(data, n)

            for row in data.values[:10]:
                column = int(rng.integers(0, 6))
                record = {index: row[index] for index in range(6) if index != column}
                result = impute_record(model, record)

                if result.unique:
                    assert result.imputed[column] == approx(row[column], abs=1e-8)

    def test_impute_records_keeps_input_order(self):
        model = PrincipalModel.from_components([DIAGONAL])
        tasks = [PredictionTask({1: 0.0, 2: float(value)}, (0,)) for value in range(6)]

        results = impute_records(model, tasks, threads=3)

        assert [result.imputed[0] for result in results] == approx([0.0, 1.0, 2.0, 3.0, 4.0, 5.0])
