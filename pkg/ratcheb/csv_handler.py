"""
ratcheb - CSV Handler Module

This module writes and reads the CSV tables of the command line tool: Green
function samples (z_re,z_im,G) and asymptotics rows
(n,z,h_n,target,error,v_n,cauchy_increment,ks_distance).

Features:
- Fixed header row followed by data rows
- Floats rendered with 17 significant digits ('.17g'), non-finite values as inf/-inf/nan
- '\\n' line terminator for byte-stable output
- Reading back with numeric conversion of every cell that parses as a float
"""

import csv
import io
import math
from typing import Any, List, Optional, Sequence, Tuple

from .errors import ArgumentError

GREEN_COLUMNS = ("z_re", "z_im", "G")


class CSVSaveOptions:
    """
    Options for saving CSV tables.

    Attributes:
        delimiter (str): Field delimiter character. Default is ','.
        encoding (str): File encoding. Default is 'utf-8'.
        quote_char (str): Character used for quoting fields. Default is '"'.
        quoting (int): Quoting behavior (csv.QUOTE_MINIMAL, csv.QUOTE_ALL, etc.). Default is QUOTE_MINIMAL.
        line_terminator (str): Line ending. Default is '\\n'.
        include_header (bool): Write the header row. Default is True.
        float_format (str): Format spec for floats. Default is '.17g'.

    Examples:
        >>> options = CSVSaveOptions()
        >>> options.delimiter = ';'
        >>> CSVHandler.save_csv_to_string(["n", "G"], [[1, 0.5]], options)
        'n;G\\n1;0.5\\n'
    """

    def __init__(self):
        self.delimiter = ','
        self.encoding = 'utf-8'
        self.quote_char = '"'
        self.quoting = csv.QUOTE_MINIMAL
        self.line_terminator = '\n'
        self.include_header = True
        self.float_format = '.17g'


class CSVHandler:
    """
    Handles CSV export and import of result tables.

    Examples:
        >>> text = CSVHandler.save_csv_to_string(["z_re", "z_im", "G"], [[2.0, 0.0, 1.3169578969248166]])
        >>> CSVHandler.load_csv_from_string(text)[1][0][2]
        1.3169578969248166
    """

    @staticmethod
    def save_csv(header: Sequence[str], rows: Sequence[Sequence[Any]], file_path: str,
                 options: Optional[CSVSaveOptions] = None) -> None:
        """
        Saves a table to a CSV file.

        Args:
            header: Column names.
            rows: Data rows, each as long as the header.
            file_path (str): Destination path.
            options (CSVSaveOptions, optional): Export options. Uses defaults if None.

        Raises:
            ArgumentError: If a row length does not match the header.
        """
        if options is None:
            options = CSVSaveOptions()
        with open(file_path, 'w', encoding=options.encoding, newline='') as f:
            CSVHandler._write(f, header, rows, options)

    @staticmethod
    def save_csv_to_string(header: Sequence[str], rows: Sequence[Sequence[Any]],
                           options: Optional[CSVSaveOptions] = None) -> str:
        if options is None:
            options = CSVSaveOptions()
        output = io.StringIO()
        CSVHandler._write(output, header, rows, options)
        return output.getvalue()

    @staticmethod
    def _write(stream, header: Sequence[str], rows: Sequence[Sequence[Any]], options: CSVSaveOptions) -> None:
        writer = csv.writer(
            stream,
            delimiter=options.delimiter,
            quotechar=options.quote_char,
            quoting=options.quoting,
            lineterminator=options.line_terminator
        )
        if options.include_header:
            writer.writerow(list(header))
        for row in rows:
            if len(row) != len(header):
                raise ArgumentError(f"row has {len(row)} cells, header has {len(header)}")
            writer.writerow([CSVHandler._format_value(v, options) for v in row])

    @staticmethod
    def _format_value(value: Any, options: CSVSaveOptions) -> str:
        """
        Formats a cell value for CSV output.
        """
        if value is None:
            return ''
        if isinstance(value, bool):
            return 'true' if value else 'false'
        if isinstance(value, int):
            return str(value)
        if isinstance(value, float) or hasattr(value, '__float__') and not isinstance(value, str):
            x = float(value)
            if math.isnan(x):
                return 'nan'
            if math.isinf(x):
                return 'inf' if x > 0 else '-inf'
            return format(x, options.float_format)
        return str(value)

    @staticmethod
    def load_csv(file_path: str, options: Optional[CSVSaveOptions] = None) -> Tuple[List[str], List[List[Any]]]:
        if options is None:
            options = CSVSaveOptions()
        with open(file_path, 'r', encoding=options.encoding, newline='') as f:
            return CSVHandler.load_csv_from_string(f.read(), options)

    @staticmethod
    def load_csv_from_string(content: str, options: Optional[CSVSaveOptions] = None) -> Tuple[List[str], List[List[Any]]]:
        """
        Parses a table written by save_csv; returns (header, rows) with numeric cells converted.

        Raises:
            ArgumentError: If the content is empty.
        """
        if options is None:
            options = CSVSaveOptions()
        reader = csv.reader(io.StringIO(content), delimiter=options.delimiter, quotechar=options.quote_char)
        lines = [line for line in reader if line]
        if not lines:
            raise ArgumentError("empty CSV table")
        header, body = lines[0], lines[1:]
        return header, [[CSVHandler._parse_value(cell) for cell in line] for line in body]

    @staticmethod
    def _parse_value(cell: str) -> Any:
        if cell == '':
            return None
        try:
            return int(cell)
        except ValueError:
            pass
        try:
            return float(cell)
        except ValueError:
            return cell


def save_table_as_csv(header: Sequence[str], rows: Sequence[Sequence[Any]], file_path: str,
                      options: Optional[CSVSaveOptions] = None) -> None:
    """
    Convenience function to save a table to a CSV file.
    """
    CSVHandler.save_csv(header, rows, file_path, options)
