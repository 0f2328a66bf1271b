import argparse
import json
import os
from dataclasses import asdict, dataclass, fields
from typing import Optional, Tuple, Union

from pcadistance.dataio import DEFAULT_MISSING_MARKERS
from pcadistance.exceptions import UsageError
from pcadistance.influence import DEFAULT_OUTLIER_FRACTION
from pcadistance.model import DEFAULT_VARIANCE_FRACTION
from pcadistance.predictor import METHODS, NORMAL_SYSTEM
from pcadistance.resampling import (
    BOOTSTRAP,
    DEFAULT_LEVEL,
    DEFAULT_REPLICATES,
    MINIMUM_REPLICATES,
    RESAMPLING_METHODS,
)
from pcadistance.validation import DEFAULT_NEIGHBOURS

COMMANDS = ("impute", "outliers", "validate", "ci", "fit")
THREADS_VARIABLE = "PCADISTANCE_THREADS"


def parse_component_count(text):
    """Read ``--n``: an integer count, or a variance fraction when the text has a decimal point.

    :param str text: The flag value.
    :rtype: int or float
    :raise: ``argparse.ArgumentTypeError`` if the text is not a number.
    """

    try:
        if "." in text or "e" in text.lower():
            return float(text)
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("invalid component count: {!r}".format(text))


def threads_from_environment(environ=None):
    """The worker thread count from ``PCADISTANCE_THREADS``; 1 when unset."""

    environ = os.environ if environ is None else environ
    value = environ.get(THREADS_VARIABLE, "").strip()
    if not value:
        return 1

    try:
        threads = int(value)
    except ValueError:
        threads = 0

    if threads < 1:
        raise UsageError(
            "{} must be a positive integer; got {!r}.".format(THREADS_VARIABLE, value)
        )

    return threads


@dataclass(frozen=True)
class RunConfig:
    """The resolved options of one command line run."""

    command: str
    input: str
    n: Union[int, float] = DEFAULT_VARIANCE_FRACTION
    scale: bool = True
    delimiter: str = ","
    missing_markers: Tuple[str, ...] = DEFAULT_MISSING_MARKERS
    header: bool = True
    metric: Optional[str] = None
    method: str = NORMAL_SYSTEM
    model: Optional[str] = None
    outlier_fraction: float = 0.0
    iterative: bool = False
    target: Optional[str] = None
    folds: Optional[int] = None
    neighbours: int = DEFAULT_NEIGHBOURS
    resampling: str = BOOTSTRAP
    p: int = 1
    replicates: int = DEFAULT_REPLICATES
    level: float = DEFAULT_LEVEL
    seed: int = 0
    row: Optional[int] = None
    output: Optional[str] = None
    report: Optional[str] = None
    threads: int = 1
    verbosity: int = 0
    print_config: bool = False

    @classmethod
    def from_namespace(cls, namespace, environ=None):
        """Build a config from parsed arguments, filling what a subcommand lacks with defaults.

        :param argparse.Namespace namespace: The parsed command line.
        :param dict environ: The environment; ``os.environ`` by default.
        :rtype: RunConfig
        """

        options = {
            field.name: getattr(namespace, field.name)
            for field in fields(cls)
            if getattr(namespace, field.name, None) is not None
        }
        if "missing_markers" in options:
            options["missing_markers"] = tuple(options["missing_markers"])
        if options.get("command") == "outliers":
            options.setdefault("outlier_fraction", DEFAULT_OUTLIER_FRACTION)

        options["threads"] = threads_from_environment(environ)
        return cls(**options)

    def validate(self):
        """Check every option against the preconditions of the operation it feeds.

        :return: The config itself.
        :raise: ``UsageError`` naming the first offending option.
        """

        if self.command not in COMMANDS:
            raise UsageError("Unknown command {!r}.".format(self.command))

        if isinstance(self.n, bool) or not isinstance(self.n, (int, float)):
            raise UsageError("--n must be a count or a fraction; got {!r}.".format(self.n))
        if isinstance(self.n, int) and self.n < 1:
            raise UsageError("--n must be at least 1; got {}.".format(self.n))
        if isinstance(self.n, float) and not 0.0 < self.n <= 1.0:
            raise UsageError("--n as a fraction must lie in (0, 1]; got {}.".format(self.n))

        if not 0.0 <= self.outlier_fraction < 0.5:
            raise UsageError(
                "The outlier fraction must lie in [0, 0.5); got {}.".format(self.outlier_fraction)
            )
        if self.model is not None and self.outlier_fraction > 0:
            raise UsageError("--outlier-fraction can not be combined with --model.")

        if self.method not in METHODS:
            raise UsageError("Unknown method {!r}.".format(self.method))
        if self.resampling not in RESAMPLING_METHODS:
            raise UsageError("Unknown resampling method {!r}.".format(self.resampling))

        if self.folds is not None and self.folds < 2:
            raise UsageError("--folds must be at least 2; got {}.".format(self.folds))
        if self.neighbours < 1:
            raise UsageError("--neighbours must be at least 1; got {}.".format(self.neighbours))
        if self.replicates < MINIMUM_REPLICATES:
            raise UsageError(
                "--replicates must be at least {}; got {}.".format(
                    MINIMUM_REPLICATES, self.replicates
                )
            )
        if not 0.0 < self.level < 1.0:
            raise UsageError("--level must lie in (0, 1); got {}.".format(self.level))
        if self.p < 1:
            raise UsageError("--p must be at least 1; got {}.".format(self.p))
        if self.row is not None and self.row < 1:
            raise UsageError("--row counts from 1; got {}.".format(self.row))
        if self.command == "validate" and self.target is None:
            raise UsageError("validate needs --target.")

        return self

    def to_dict(self):
        document = asdict(self)
        document["missing_markers"] = list(self.missing_markers)
        return document

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
