"""The ``pcadistance`` command line.

Summaries are printed on standard output; tables, reports and models go to the files named by the
options. Exit status is 0 on success, 1 for invalid usage and 2 when the data can not be processed.
"""

import argparse
import logging
import sys

from pcadistance import __version__
from pcadistance.config import RunConfig, parse_component_count
from pcadistance.dataio import load_csv, write_imputed, write_json
from pcadistance.exceptions import DataFormatError, InvalidTaskError, PcaDistanceError, UsageError
from pcadistance.influence import influence_scores, outlier_count, remove_outliers
from pcadistance.metric import EUCLIDEAN, MetricSpec
from pcadistance.model import PrincipalModel, fit_pca
from pcadistance.predictor import METHODS, impute_records
from pcadistance.resampling import RESAMPLING_METHODS, resample_ci
from pcadistance.utils import format_number
from pcadistance.validation import knn_imputation_cv, kfold_cv, mean_imputation_cv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="CSV file with the samples.")
    common.add_argument(
        "--n",
        type=parse_component_count,
        help="Component count, or a variance fraction such as 0.9 (the default).",
    )
    common.add_argument(
        "--no-scaling",
        dest="scale",
        action="store_false",
        help="Only center the columns instead of standardizing them.",
    )
    common.add_argument("--delimiter", default=",", help="Field separator of the CSV files.")
    common.add_argument(
        "--missing-marker",
        dest="missing_markers",
        action="append",
        help="Cell text that marks a missing value; repeatable. Defaults to '', NA and NaN.",
    )
    common.add_argument(
        "--no-header", dest="header", action="store_false", help="The input has no header row."
    )
    common.add_argument(
        "--print-config",
        action="store_true",
        help="Print the resolved configuration as JSON and exit.",
    )
    common.add_argument(
        "-v", "--verbose", dest="verbosity", action="count", default=0, help="Log more; repeatable."
    )

    parser = ArgumentParser(
        prog="pcadistance",
        description="Predict missing values by minimal distance to the principal subspace.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    impute = commands.add_parser("impute", parents=[common], help="Fill every missing cell.")
    impute.add_argument("--output", required=True, help="CSV file for the completed table.")
    impute.add_argument("--report", help="JSON report; <output>.report.json by default.")
    impute.add_argument("--metric", help="CSV file with a symmetric positive-definite matrix.")
    impute.add_argument("--method", choices=METHODS, help="How several missing values are solved.")
    impute.add_argument("--model", help="Use a model written by 'fit' instead of fitting one.")
    _add_outlier_options(impute, "--outlier-fraction")

    outliers = commands.add_parser(
        "outliers", parents=[common], help="Score the influence of every complete row."
    )
    outliers.add_argument("--output", required=True, help="CSV file for the influence scores.")
    _add_outlier_options(outliers, "--fraction")

    validate = commands.add_parser(
        "validate", parents=[common], help="Cross-validate prediction of one column."
    )
    validate.add_argument("--target", required=True, help="The column to predict.")
    validate.add_argument("--folds", type=int, help="Number of folds; leave-one-out by default.")
    validate.add_argument("--neighbours", type=int, help="Neighbours of the k-NN baseline.")
    validate.add_argument("--seed", type=int, help="Seed of the fold assignment.")
    validate.add_argument("--output", help="CSV file for the held-out predictions.")
    validate.add_argument("--report", help="JSON file for the error summary.")

    ci = commands.add_parser("ci", parents=[common], help="Resampled intervals for missing cells.")
    ci.add_argument("--output", required=True, help="JSON file for the intervals.")
    ci.add_argument("--resampling", choices=RESAMPLING_METHODS, help="Replicate scheme.")
    ci.add_argument("--p", type=int, help="Rows left out per jackknife replicate.")
    ci.add_argument("--replicates", type=int, help="Number of replicates.")
    ci.add_argument("--level", type=float, help="Interval coverage level.")
    ci.add_argument("--seed", type=int, help="Seed of the resampling generator.")
    ci.add_argument("--row", type=int, help="Only this (1-based) data row.")

    fit = commands.add_parser("fit", parents=[common], help="Fit and save a model.")
    fit.add_argument("--output", required=True, help="JSON file for the model.")
    _add_outlier_options(fit, "--outlier-fraction")

    return parser


def _add_outlier_options(parser, flag):
    parser.add_argument(
        flag, dest="outlier_fraction", type=float, help="Share of most influential rows to drop."
    )
    parser.add_argument(
        "--iterative", action="store_true", help="Recompute influence after every removal."
    )


def parse_config(argv, environ=None):
    namespace = build_parser().parse_args(argv)
    return RunConfig.from_namespace(namespace, environ).validate()


def configure_logging(verbosity):
    logging.basicConfig(
        stream=sys.stderr,
        level=LOG_LEVELS[min(verbosity, len(LOG_LEVELS) - 1)],
        format=LOG_FORMAT,
        force=True,
    )


def _load(config):
    return load_csv(
        config.input,
        missing_markers=config.missing_markers,
        header=config.header,
        delimiter=config.delimiter,
    )


def _file_rows(dataset, indices):
    return [int(dataset.complete_rows[index]) + 1 for index in indices]


def _training_matrix(config, dataset):
    matrix = dataset.complete_matrix()
    if config.outlier_fraction == 0:
        return matrix

    matrix, removed = remove_outliers(
        matrix,
        config.n,
        fraction=config.outlier_fraction,
        iterative=config.iterative,
        scale=config.scale,
        threads=config.threads,
    )
    print("Removed outlier rows: {}".format(_file_rows(dataset, removed)))
    return matrix


def impute(config):
    dataset = _load(config)
    metric = MetricSpec.from_csv(config.metric, config.delimiter) if config.metric else EUCLIDEAN

    if config.model:
        model = PrincipalModel.load(config.model)
        if model.column_names != dataset.column_names:
            raise DataFormatError(config.model).column_mismatch(
                model.column_names, dataset.column_names
            )
    else:
        model = fit_pca(_training_matrix(config, dataset), config.n, scale=config.scale)

    tasks = dataset.tasks(metric)
    results = dict(
        zip(tasks, impute_records(model, tasks.values(), config.method, config.threads))
    )
    write_imputed(dataset, results, config.output, config.report, config.delimiter)

    cells = sum(len(result.imputed) for result in results.values())
    invariant = sum(result.distance_invariant for result in results.values())
    print(
        "Imputed {} cells in {} rows with {} components.".format(cells, len(results), model.n)
    )
    if invariant:
        print("{} rows had no unique prediction and were set to column means.".format(invariant))


def outliers(config):
    dataset = _load(config)
    matrix = dataset.complete_matrix()

    report = influence_scores(matrix, config.n, scale=config.scale, threads=config.threads)
    report.to_csv(config.output, rows=_file_rows(dataset, range(matrix.s)))

    if config.iterative:
        _, removed = remove_outliers(
            matrix,
            config.n,
            fraction=config.outlier_fraction,
            iterative=True,
            scale=config.scale,
            threads=config.threads,
        )
    else:
        removed = report.ranking[: outlier_count(matrix.s, config.outlier_fraction)]

    if report.baseline_degenerate:
        print("The data lies on its principal subspace; relative influence is reported as 0.")
    print("Outlier rows, most influential first: {}".format(_file_rows(dataset, removed)))


def validate(config):
    dataset = _load(config)
    matrix = dataset.complete_matrix()
    target = dataset.column_index(config.target)

    options = dict(folds=config.folds, seed=config.seed, threads=config.threads)
    reports = [
        kfold_cv(matrix, config.n, target, scale=config.scale, **options),
        mean_imputation_cv(matrix, target, **options),
        knn_imputation_cv(matrix, target, config.neighbours, scale=config.scale, **options),
    ]

    for report in reports:
        print(
            "{}: MSE {} (in-sample {})".format(
                report.method, format_number(report.mse), format_number(report.in_sample_mse)
            )
        )

    if config.output:
        reports[0].to_csv(config.output)
    if config.report:
        write_json([report.summary() for report in reports], config.report)


def ci(config):
    dataset = _load(config)
    matrix = dataset.complete_matrix()
    tasks = dataset.tasks()

    if config.row is not None:
        row = config.row - 1
        if row not in tasks:
            raise InvalidTaskError("Row {} has no missing values.".format(config.row))
        tasks = {row: tasks[row]}

    estimates = []
    for row, task in tasks.items():
        for column in task.missing_indices:
            estimate = resample_ci(
                matrix,
                config.n,
                task,
                method=config.resampling,
                p=config.p,
                replicates=config.replicates,
                level=config.level,
                seed=config.seed,
                scale=config.scale,
                column=column,
                threads=config.threads,
            )
            name = dataset.column_names[column]
            estimates.append(dict(estimate.to_dict(), row=row + 1, name=name))
            print(
                "Row {} {}: {} [{}, {}]".format(
                    row + 1,
                    name,
                    format_number(estimate.point),
                    format_number(estimate.lower),
                    format_number(estimate.upper),
                )
            )

    write_json(estimates, config.output)


def fit(config):
    dataset = _load(config)
    model = fit_pca(_training_matrix(config, dataset), config.n, scale=config.scale)
    model.save(config.output)

    print(
        "Fitted {} components explaining {} of the variance.".format(
            model.n, format_number(model.explained_variance_ratio.sum())
        )
    )


HANDLERS = {
    "impute": impute,
    "outliers": outliers,
    "validate": validate,
    "ci": ci,
    "fit": fit,
}


def _fail(error, code):
    print("pcadistance: error: {}".format(error), file=sys.stderr)
    return code


def run(argv, environ=None):
    """Run one command line and return its exit status.

    :param list argv: The arguments, without the program name.
    :param dict environ: The environment; ``os.environ`` by default.
    :rtype: int
    """

    try:
        config = parse_config(argv, environ)
    except UsageError as e:
        return _fail(e, EXIT_USAGE)
    except SystemExit as e:
        return e.code or EXIT_OK

    if config.print_config:
        print(config.to_json())
        return EXIT_OK

    configure_logging(config.verbosity)
    logger.info("Running %s on %s.", config.command, config.input)

    try:
        HANDLERS[config.command](config)
    except UsageError as e:
        return _fail(e, EXIT_USAGE)
    except (PcaDistanceError, OSError) as e:
        return _fail(e, EXIT_DATA)

    return EXIT_OK


def main(argv=None):
    return run(sys.argv[1:] if argv is None else argv)
