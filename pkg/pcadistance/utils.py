from concurrent.futures import ThreadPoolExecutor

import numpy as np

from pcadistance.exceptions import UnknownColumnError

SIGNIFICANT_DIGITS = 12


def resolve_column(column_names, column):
    """Find a column by name, or by integer position when no column has that name.

    :param tuple column_names: The known column names.
    :param column: A column name, or an integer (or digit string) index.
    :return: The column position.
    :rtype: int
    :raise: ``UnknownColumnError`` if neither lookup succeeds.
    """

    column_names = tuple(column_names)

    if isinstance(column, str):
        if column in column_names:
            return column_names.index(column)
        if not column.isdigit():
            raise UnknownColumnError(column, column_names)
        column = int(column)

    if isinstance(column, (int, np.integer)) and not isinstance(column, bool):
        if 0 <= column < len(column_names):
            return int(column)

    raise UnknownColumnError(column, column_names)


def format_number(value):
    """Format a float in the shortest form that keeps 12 significant digits.

    :param float value: The number.
    :rtype: str
    """

    return "{:.{}g}".format(float(value), SIGNIFICANT_DIGITS)


def ordered_map(function, items, threads=1):
    """Apply ``function`` to every item, optionally on a thread pool.

    Results are returned in the order of ``items`` whatever the completion order.

    :param callable function: The function to apply.
    :param items: The inputs.
    :param int threads: The number of worker threads; ``1`` runs inline.
    :rtype: list
    """

    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [function(item) for item in items]

    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(function, items))
