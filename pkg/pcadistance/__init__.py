__version__ = "0.3.0"

from pcadistance.data_matrix import DataMatrix  # noqa
from pcadistance.dataio import Dataset, load_csv, write_imputed  # noqa
from pcadistance.influence import InfluenceReport, influence_scores, remove_outliers  # noqa
from pcadistance.linalg import (  # noqa
    Basis,
    ResidualMap,
    apply_residual,
    orthonormal_basis,
    residual_column,
    residual_columns,
    solve_spd,
)
from pcadistance.metric import MetricSpec  # noqa
from pcadistance.model import PrincipalModel, fit_pca  # noqa
from pcadistance.predictor import (  # noqa
    impute_record,
    predict_line,
    predict_line_metric,
    predict_line_quadfit,
    predict_space,
)
from pcadistance.resampling import IntervalEstimate, resample_ci  # noqa
from pcadistance.scaling import ScalingParams, fit_scaling  # noqa
from pcadistance.task import PredictionResult, PredictionTask  # noqa
from pcadistance.validation import ValidationReport, kfold_cv, loo_cv  # noqa
