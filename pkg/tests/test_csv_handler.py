import math

import pytest

from ratcheb.csv_handler import GREEN_COLUMNS, CSVHandler, CSVSaveOptions, save_table_as_csv
from ratcheb.errors import ArgumentError


def test_save_green_table():
    text = CSVHandler.save_csv_to_string(GREEN_COLUMNS, [[2.0, 0.0, 1.25], [0.0, 2.0, 0.1]])
    assert text == "z_re,z_im,G\n2,0,1.25\n0,2,0.10000000000000001\n"


def test_non_finite_and_special_cells():
    text = CSVHandler.save_csv_to_string(["a", "b", "c", "d", "e"], [[math.inf, -math.inf, math.nan, None, True]])
    assert text.splitlines()[1] == "inf,-inf,nan,,true"


def test_text_cells_are_quoted_when_needed():
    text = CSVHandler.save_csv_to_string(["z"], [["1,2"]])
    assert text.splitlines()[1] == '"1,2"'


def test_row_length_must_match_header():
    with pytest.raises(ArgumentError):
        CSVHandler.save_csv_to_string(["n", "G"], [[1]])


def test_header_can_be_left_out():
    options = CSVSaveOptions()
    options.include_header = False
    assert CSVHandler.save_csv_to_string(["n"], [[3]], options) == "3\n"


def test_load_converts_numbers():
    header, rows = CSVHandler.load_csv_from_string("n,z,error\n4,2.0i,0.5\n8,2.0,nan\n")
    assert header == ["n", "z", "error"]
    assert rows[0] == [4, "2.0i", 0.5]
    assert rows[1][0] == 8
    assert math.isnan(rows[1][2])


def test_load_rejects_empty_table():
    with pytest.raises(ArgumentError):
        CSVHandler.load_csv_from_string("")


def test_save_and_load_file(tmp_path):
    path = tmp_path / "green.csv"
    save_table_as_csv(GREEN_COLUMNS, [[3.0, 0.0, 1.7627471740390861]], str(path))
    header, rows = CSVHandler.load_csv(str(path))
    assert tuple(header) == GREEN_COLUMNS
    assert rows == [[3, 0, 1.7627471740390861]]
