class PcaDistanceError(Exception):
    """Base class for every error raised on purpose by pcadistance."""

    pass


class DimensionMismatchError(PcaDistanceError):
    """An exception raised when vectors or matrices do not share the ambient dimension."""

    pass


class ZeroSubspaceError(PcaDistanceError):
    """An exception raised when a generating set spans only the zero vector."""

    pass


class NotAGramMatrixError(PcaDistanceError):
    """An exception raised when a system matrix is not symmetric."""

    pass


class MetricError(PcaDistanceError):
    """An exception raised when an inner product matrix is not symmetric positive-definite."""

    pass


class InvalidTaskError(PcaDistanceError):
    """An exception raised when a prediction task does not describe a valid prediction space."""

    pass


class UnknownColumnError(PcaDistanceError):
    """An exception raised when a column is referenced by a name or index that does not exist."""

    def __init__(self, column, column_names):
        """
        :param column: The offending column name or index.
        :param tuple column_names: The known column names.
        """

        self.column = column
        self.column_names = tuple(column_names)
        self.args = (column, self.column_names)

    def __str__(self):
        return "Unknown column {!r}; expected one of: {}.".format(
            self.column, ", ".join(self.column_names)
        )


class DistanceInvariantError(PcaDistanceError):
    """
    An exception raised when the distance to the principal subspace does not depend on the missing
    coordinates, so a minimiser can not be read off a quadratic fit.
    """

    pass


class LeftInverseUnavailableError(PcaDistanceError):
    """An exception raised when the residual block of the missing coordinates is rank deficient."""

    pass


class InsufficientDataError(PcaDistanceError):
    """An exception raised when there are too few rows for the requested computation."""

    pass


class DegenerateDataError(PcaDistanceError):
    """An exception raised when the data does not define a principal subspace."""

    pass


class ResamplingError(PcaDistanceError):
    """An exception raised when too many resampling replicates could not be evaluated."""

    pass


class OutputError(PcaDistanceError):
    """An exception raised when a result file can not be written."""

    pass


class UsageError(PcaDistanceError):
    """An exception raised for invalid command line usage."""

    pass


class DataFormatError(PcaDistanceError):
    """
    An exception raised when an input table can not be read as a numeric data set.
    """

    def __init__(self, path):
        """
        :param str path: The file being read.
        """

        self._path = path
        self._details = {}
        self.args = (path,)
        self.message = "Cannot read numeric data from '{path}'."

    def non_numeric(self, row, column, cell):
        self.message = "Non-numeric value {cell!r} at row {row}, column '{column}' of '{path}'."
        self._details = {"row": row, "column": column, "cell": cell}

        return self

    def ragged(self, row):
        self.message = "Row {row} of '{path}' does not have as many fields as the other rows."
        self._details = {"row": row}

        return self

    def empty_row(self, row):
        self.message = "Row {row} of '{path}' has no known values."
        self._details = {"row": row}

        return self

    def no_complete_rows(self):
        self.message = "'{path}' has no complete rows to fit a model on."

        return self

    def invalid_model(self):
        self.message = "'{path}' is not a saved model."

        return self

    def encoding(self):
        self.message = "'{path}' is not UTF-8 text."

        return self

    def column_mismatch(self, expected, found):
        self.message = (
            "The model in '{path}' was fitted on columns {expected} but the input has {found}."
        )
        self._details = {"expected": list(expected), "found": list(found)}

        return self

    def __str__(self):
        return self.message.format(path=self._path, **self._details)


class NotOrthonormalError(PcaDistanceError):
    """An exception raised when a basis flagged orthonormal is not."""

    pass


class IndexOutOfRangeError(PcaDistanceError):
    """An exception raised when a coordinate index is outside ``0..m-1``."""

    def __init__(self, index, dimension):
        """
        :param int index: The offending index.
        :param int dimension: The ambient dimension ``m``.
        """

        self.index = index
        self.dimension = dimension
        self.args = (index, dimension)

    def __str__(self):
        return "Index {} is out of range for dimension {}.".format(self.index, self.dimension)


class InvalidParameterError(PcaDistanceError):
    """An exception raised when a numeric parameter is outside its documented range."""

    pass
