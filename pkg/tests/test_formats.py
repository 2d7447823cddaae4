import random

import pytest

from helpers import random_valid_matrix
from pfkit import catalog
from pfkit.errors import ParseError, UndefinedEntry
from pfkit.formats import emit_lift_table, emit_matrix, parse_lift_table, parse_matrix
from pfkit.lift import LiftingFunction
from pfkit.matroid import m8591_matrix, wheel_matrix
from pfkit.morphism import catalog_hom


@pytest.mark.parametrize("name", ["D", "S", "GF7", "GF3xGF5", "GF4xGF5", "GF8"])
def test_matrix_round_trip(name):
    rng = random.Random(61)
    for _ in range(10):
        A = random_valid_matrix(rng, name, rng.randint(1, 3), rng.randint(1, 4))
        if A is None:
            continue
        assert parse_matrix(emit_matrix(A)) == A


@pytest.mark.parametrize("A", [m8591_matrix(), wheel_matrix(4)], ids=["M8591", "W4"])
def test_named_matrix_round_trip(A):
    B = parse_matrix(emit_matrix(A))
    assert B == A and B.field == A.field


def test_comments_and_blank_lines():
    text = "# fano\npmatrix\nfield GF2\n\nrows 1 2\ncols 3 4  # labels\nrow 1: 1 | 1\nrow 2: 0 | 1\n"
    A = parse_matrix(text)
    assert A.rows == ("1", "2") and A.cols == ("3", "4")


@pytest.mark.parametrize(
    "text",
    [
        "matrix\nfield GF2\nrows 1\ncols 2\nrow 1: 1\n",
        "pmatrix\nfield GF2\nrows 1\ncols 2 3\nrow 1: 1\n",
        "pmatrix\nfield GF2\nrows 1 2\ncols 3\nrow 1: 1\n",
        "pmatrix\nfield GF2\nrows 1\ncols 2\nrow 1 1\n",
        "pmatrix\nfield XYZ\nrows 1\ncols 2\nrow 1: 1\n",
        "pmatrix\nrows 1\ncols 2\nrow 1: 1\n",
    ],
)
def test_malformed_matrices(text):
    with pytest.raises(ParseError):
        parse_matrix(text)


def test_entry_outside_field():
    with pytest.raises(UndefinedEntry):
        parse_matrix("pmatrix\nfield D\nrows 1\ncols 2\nrow 1: 3\n")
    assert parse_matrix("pmatrix\nfield D\nrows 1\ncols 2\nrow 1: 3\n", check=False).ring_det() == 3


def test_lift_table_round_trip():
    hom = catalog_hom("G->GF4xGF5").verify()
    lf = LiftingFunction.from_hom(hom)
    again = parse_lift_table(emit_lift_table(lf), hom)
    assert again.table == lf.table
    with pytest.raises(ParseError):
        parse_lift_table("0 = 0\n", hom)
