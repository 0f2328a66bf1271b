import numpy as np
from pytest import approx, raises

from pcadistance.exceptions import InvalidTaskError, UnknownColumnError
from pcadistance.task import PredictionResult, PredictionTask


class TestPredictionTask(object):
    def test_from_values(self):
        task = PredictionTask.from_values([1.0, np.nan, 3.0, np.nan])

        assert task.missing_indices == (1, 3)
        assert task.known_indices == (0, 2)
        assert task.known_vector == approx([1.0, 3.0])
        assert task.m == 4
        assert task.k == 2

    def test_order_puts_missing_first(self):
        task = PredictionTask({2: 1.0, 0: 5.0}, (3, 1))

        assert task.order.tolist() == [3, 1, 0, 2]

    def test_from_mapping_treats_absent_and_none_as_missing(self):
        task = PredictionTask.from_mapping(("x", "y", "z"), {"x": 4.0, "z": None})

        assert task.missing_indices == (1, 2)
        assert dict(task.known_values) == {0: 4.0}

    def test_from_mapping_rejects_unknown_columns(self):
        with raises(UnknownColumnError) as e:
            PredictionTask.from_mapping(("x", "y"), {"w": 1.0})

        assert str(e.value) == "Unknown column 'w'; expected one of: x, y."

    def test_requires_a_missing_value(self):
        with raises(InvalidTaskError):
            PredictionTask.from_values([1.0, 2.0])

    def test_requires_a_known_value(self):
        with raises(InvalidTaskError):
            PredictionTask.from_values([np.nan, np.nan])

    def test_rejects_overlap(self):
        with raises(InvalidTaskError):
            PredictionTask({0: 1.0, 1: 2.0}, (1,))

    def test_rejects_gaps(self):
        with raises(InvalidTaskError):
            PredictionTask({0: 1.0}, (2,))

    def test_rejects_repeated_missing_indices(self):
        with raises(InvalidTaskError):
            PredictionTask({0: 1.0}, (1, 1))

    def test_rejects_infinite_known_values(self):
        with raises(InvalidTaskError):
            PredictionTask({0: np.inf}, (1,))


class TestPredictionResult(object):
    def test_clips_negative_rounding_in_distance(self):
        result = PredictionResult({0: 1.0}, [0.5], -1e-18, True, False)

        assert result.distance == 0.0
        assert result.intersects

    def test_to_dict_names_columns(self):
        result = PredictionResult({1: 8.0}, [3.0], 0.5, True, False)

        assert result.to_dict(("x", "y")) == {
            "imputed": {"y": 8.0},
            "t_pred": [3.0],
            "distance": 0.5,
            "unique": True,
            "distance_invariant": False,
            "intersects": False,
        }
