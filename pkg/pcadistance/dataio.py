"""Reading numeric CSV tables with missing cells and writing results back."""

import json
import logging
import os
import re
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd

from pcadistance.data_matrix import DataMatrix, default_column_names
from pcadistance.exceptions import DataFormatError, InvalidParameterError, OutputError
from pcadistance.metric import EUCLIDEAN
from pcadistance.task import PredictionTask
from pcadistance.utils import SIGNIFICANT_DIGITS, resolve_column

logger = logging.getLogger(__name__)

DEFAULT_MISSING_MARKERS = ("", "NA", "NaN")
REPORT_FORMAT_VERSION = 1
FLOAT_FORMAT = "%.{}g".format(SIGNIFICANT_DIGITS)

_LINE_NUMBER = re.compile(r"line (\d+)")


@dataclass(frozen=True)
class Dataset:
    """A table of samples where some cells may be missing (``NaN`` in ``values``).

    Rows without missing cells are the complete samples a model is fitted on; the others are the
    incomplete records to predict.
    """

    column_names: Tuple[str, ...]
    values: np.ndarray
    header: bool = True

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[1] != len(self.column_names):
            raise InvalidParameterError(
                "{} column names for values of shape {}.".format(
                    len(self.column_names), values.shape
                )
            )

        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_names", tuple(self.column_names))

    @property
    def missing_mask(self):
        return np.isnan(self.values)

    @property
    def complete_rows(self):
        return np.flatnonzero(~self.missing_mask.any(axis=1))

    @property
    def incomplete_rows(self):
        return np.flatnonzero(self.missing_mask.any(axis=1))

    def complete_matrix(self):
        """The complete samples as a ``DataMatrix``, in file order."""

        return DataMatrix(self.values[self.complete_rows], self.column_names)

    def task(self, row, metric=EUCLIDEAN):
        return PredictionTask.from_values(self.values[row], metric=metric)

    def tasks(self, metric=EUCLIDEAN):
        """A prediction task for every incomplete row, keyed by row index."""

        return {int(row): self.task(row, metric) for row in self.incomplete_rows}

    def column_index(self, column):
        return resolve_column(self.column_names, column)


def load_csv(path, missing_markers=DEFAULT_MISSING_MARKERS, header=True, delimiter=","):
    """Read a numeric table.

    Every cell is either one of ``missing_markers`` (after trimming whitespace) or a finite decimal
    number. Rows are reported 1-based, not counting the header.

    :param str path: The CSV file.
    :param missing_markers: Cell texts that mark a missing value.
    :param bool header: Whether the first line holds the column names.
    :param str delimiter: The field separator.
    :rtype: Dataset
    :raise: ``DataFormatError`` for text that is not UTF-8, non-numeric cells, ragged rows, rows
        with nothing known, or a table without complete rows. ``OSError`` if the file can not be
        read.
    """

    error = DataFormatError(path)

    try:
        frame = pd.read_csv(
            path,
            sep=delimiter,
            header=0 if header else None,
            dtype=str,
            keep_default_na=False,
            encoding="utf-8",
        )
    except UnicodeDecodeError:
        raise error.encoding()
    except pd.errors.EmptyDataError:
        raise error.no_complete_rows()
    except pd.errors.ParserError as e:
        match = _LINE_NUMBER.search(str(e))
        line = int(match.group(1)) if match else 0
        raise error.ragged(line - 1 if header else line)

    if header:
        column_names = tuple(str(name).strip() for name in frame.columns)
    else:
        column_names = default_column_names(frame.shape[1])

    markers = {marker.strip() for marker in missing_markers}
    values = np.full(frame.shape, np.nan)

    for row, cells in enumerate(frame.itertuples(index=False, name=None)):
        for column, cell in enumerate(cells):
            if not isinstance(cell, str):
                raise error.ragged(row + 1)

            text = cell.strip()
            if text in markers:
                continue

            number = pd.to_numeric(text, errors="coerce")
            if not np.isfinite(number):
                raise error.non_numeric(row + 1, column_names[column], cell)
            values[row, column] = number

        if np.all(np.isnan(values[row])):
            raise error.empty_row(row + 1)

    dataset = Dataset(column_names, values, header=header)
    if len(dataset.complete_rows) == 0:
        raise error.no_complete_rows()

    logger.info(
        "Read %d rows (%d complete) and %d columns from %s.",
        values.shape[0],
        len(dataset.complete_rows),
        values.shape[1],
        path,
    )
    return dataset


def report_path_for(path):
    """The sidecar report written next to an output table: ``out.csv`` -> ``out.report.json``."""

    return os.path.splitext(path)[0] + ".report.json"


def write_table(frame, path, delimiter=",", header=True):
    """Write a ``pandas.DataFrame`` with numbers at 12 significant digits."""

    try:
        frame.to_csv(path, sep=delimiter, index=False, header=header, float_format=FLOAT_FORMAT)
    except OSError as e:
        raise OutputError("Cannot write '{}': {}.".format(path, e.strerror or e))


def write_json(document, path):
    try:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(document, handle, indent=2, sort_keys=True)
            handle.write("\n")
    except OSError as e:
        raise OutputError("Cannot write '{}': {}.".format(path, e.strerror or e))


def write_imputed(dataset, results, path, report_path=None, delimiter=","):
    """Write the table with every missing cell filled, plus a sidecar JSON report.

    Row and column order follow ``dataset``. The report holds, per imputed row (1-based), the
    imputed values by column name, the distance to the principal subspace, and the uniqueness and
    degeneracy flags of the prediction.

    :param Dataset dataset: The table as read.
    :param dict results: A ``PredictionResult`` per incomplete row index.
    :param str path: The output CSV file.
    :param str report_path: The sidecar file; ``report_path_for(path)`` by default.
    :raise: ``InvalidParameterError`` if an incomplete row has no result, ``OutputError`` if a file
        can not be written.
    """

    values = np.array(dataset.values)
    rows = []

    for row in dataset.incomplete_rows:
        row = int(row)
        if row not in results:
            raise InvalidParameterError("Incomplete row {} has no prediction.".format(row + 1))

        result = results[row]
        for index, value in result.imputed.items():
            values[row, index] = value
        rows.append(dict(row=row + 1, **result.to_dict(dataset.column_names)))

    frame = pd.DataFrame(values, columns=list(dataset.column_names))
    write_table(frame, path, delimiter=delimiter, header=dataset.header)

    write_json(
        {
            "format_version": REPORT_FORMAT_VERSION,
            "columns": list(dataset.column_names),
            "rows": rows,
        },
        report_path or report_path_for(path),
    )
