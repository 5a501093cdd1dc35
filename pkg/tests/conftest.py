from fractions import Fraction
from pathlib import Path

import pytest

from s2cpm import JointDistribution, PairFamily, PartialFamily

DATA = Path(__file__).parent / "data"

# Reference tables: Y=1 rows, complement gives Y=2.
A_ROW = ["0.5", "0.8", "0.2", "0.7", "0.7", "0.6"]
B_ROW = ["0.5", "0.75", "0.25", "0.7", "0.65", "0.625"]
C_ROW = ["0.5", "1", "0.6", "0.8", "0.75", "0.7"]


def complement(row):
    return [None if x is None else 1 - Fraction(x) for x in row]


def two_row(s, row):
    return PairFamily.from_rows(s, [row, complement(row)])


@pytest.fixture
def fam_a():
    return two_row(4, A_ROW)


@pytest.fixture
def fam_b():
    return two_row(4, B_ROW)


@pytest.fixture
def fam_c():
    return two_row(4, C_ROW)


@pytest.fixture
def joint_b():
    # distribution table for V_B: watched 2,12,1 / not 2,4,3 over x = 2,3,4
    return JointDistribution.from_counts([[2, 12, 1], [2, 4, 3]])


@pytest.fixture
def joint_c():
    return JointDistribution.from_counts([[1, 3, 3], [1, 0, 2]])


@pytest.fixture
def partial_a_new():
    return PartialFamily.from_rows(
        4,
        [
            ["0.375", "0.4375", "0.125", None, None, None],
            ["0.125", "0.3125", "0.125", None, None, None],
            ["0.5", "0.25", "0.75", "0.3", "0.35", "0.375"],
        ],
    )


@pytest.fixture
def partial_combined():
    y1 = ["0.5", "1", "0.6", "0.25", "0.8", "0.75", None, "0.7", "0.65", "0.625"]
    return PartialFamily.from_rows(5, [y1, complement(y1)])
