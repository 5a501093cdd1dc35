"""Pair-indexed families of vectors and the S^2-rank-1 test."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Mapping, Sequence

from .exterior_det import RationalLike, Vec2, det_s2, rank_exact, rational

Pair = tuple[int, int]


class S2Error(Exception):
    """Base class for domain errors in this package."""


class OutOfBounds(S2Error, IndexError):
    pass


class TooSmall(S2Error):
    """The S^2-rank test is vacuous: there are no 2-minors to evaluate."""


class ZeroFamily(S2Error):
    pass


def canonical_pairs(s: int) -> list[Pair]:
    """All pairs 1 <= i < j <= s, ordered by (j - i) and then by i.

    >>> canonical_pairs(4)
    [(1, 2), (2, 3), (3, 4), (1, 3), (2, 4), (1, 4)]
    """
    return [(i, i + gap) for gap in range(1, s) for i in range(1, s - gap + 1)]


def triples(s: int) -> Iterator[tuple[int, int, int]]:
    return combinations(range(1, s + 1), 3)


@dataclass(frozen=True)
class PairFamily:
    """A d x s(s-1)/2 matrix whose columns are indexed by pairs (i, j)."""

    s: int
    d: int
    columns: Mapping[Pair, tuple[Fraction, ...]]

    def __post_init__(self) -> None:
        if self.s < 2 or self.d < 1:
            raise ValueError(f"need s >= 2 and d >= 1, got s={self.s}, d={self.d}")
        expected = set(canonical_pairs(self.s))
        if set(self.columns) != expected:
            missing = sorted(expected - set(self.columns))
            extra = sorted(set(self.columns) - expected)
            raise ValueError(f"pair set mismatch: missing={missing} extra={extra}")
        cols = {}
        for p in canonical_pairs(self.s):
            col = tuple(rational(x) for x in self.columns[p])
            if len(col) != self.d:
                raise ValueError(f"column {p} has length {len(col)}, expected {self.d}")
            cols[p] = col
        object.__setattr__(self, "columns", cols)

    @classmethod
    def from_rows(cls, s: int, rows: Sequence[Sequence[RationalLike]]) -> "PairFamily":
        """Build from d rows, each listing entries in canonical pair order."""
        pairs = canonical_pairs(s)
        for row in rows:
            if len(row) != len(pairs):
                raise ValueError(f"row has {len(row)} entries, expected {len(pairs)}")
        cols = {p: tuple(rational(row[n]) for row in rows) for n, p in enumerate(pairs)}
        return cls(s, len(rows), cols)

    @classmethod
    def from_columns(cls, s: int, columns: Sequence[Sequence[RationalLike]]) -> "PairFamily":
        pairs = canonical_pairs(s)
        if len(columns) != len(pairs):
            raise ValueError(f"expected {len(pairs)} columns, got {len(columns)}")
        d = len(columns[0])
        return cls(s, d, dict(zip(pairs, (tuple(c) for c in columns))))

    def __getitem__(self, pair: Pair) -> tuple[Fraction, ...]:
        return self.columns[pair]

    def pairs(self) -> list[Pair]:
        return canonical_pairs(self.s)

    def rows(self) -> list[list[Fraction]]:
        return [[self.columns[p][a] for p in self.pairs()] for a in range(self.d)]

    def is_zero(self) -> bool:
        return all(x == 0 for col in self.columns.values() for x in col)


@dataclass(frozen=True, order=True)
class MinorSelector:
    quadruple: tuple[int, int, int, int]
    coords: tuple[int, int]


@dataclass(frozen=True)
class RankViolation:
    selector: MinorSelector
    value: Fraction


def extract_minor(fam: PairFamily, sel: MinorSelector) -> tuple[Vec2, ...]:
    """Columns w_{i,j} = (v^{a1}_{x_i,x_j}, v^{a2}_{x_i,x_j}) in canonical order.

    Coordinates are 1-based, as are the quadruple entries.
    """
    x = sel.quadruple
    a1, a2 = sel.coords
    if len(x) != 4 or not all(1 <= x[n] < x[n + 1] for n in range(3)) or x[3] > fam.s:
        raise OutOfBounds(f"bad quadruple {x} for s={fam.s}")
    if not 1 <= a1 < a2 <= fam.d:
        raise OutOfBounds(f"bad coordinate pair {sel.coords} for d={fam.d}")
    out = []
    for i, j in canonical_pairs(4):
        col = fam[(x[i - 1], x[j - 1])]
        out.append(Vec2(col[a1 - 1], col[a2 - 1]))
    return tuple(out)


def selectors(s: int, d: int) -> Iterator[MinorSelector]:
    for quad in combinations(range(1, s + 1), 4):
        for coords in combinations(range(1, d + 1), 2):
            yield MinorSelector(quad, coords)


def _check_testable(fam: PairFamily) -> None:
    if fam.s < 4 or fam.d < 2:
        raise TooSmall(f"no 2-minors exist for s={fam.s}, d={fam.d}; S^2-rank test is vacuous")
    if fam.is_zero():
        raise ZeroFamily("S^2-rank is only defined for a nonzero family")


def s2_rank_is_one(fam: PairFamily) -> tuple[bool, list[RankViolation]]:
    """Evaluate det^{S^2} on every 2-minor; collect all nonzero ones.

    Raises :class:`TooSmall` when s < 4 or d < 2 and :class:`ZeroFamily`
    for the all-zero family.
    """
    _check_testable(fam)
    violations = []
    for sel in selectors(fam.s, fam.d):
        value = det_s2(extract_minor(fam, sel))
        if value != 0:
            violations.append(RankViolation(sel, value))
    return not violations, violations


def has_s2_rank_one(fam: PairFamily) -> bool:
    """Short-circuiting variant of :func:`s2_rank_is_one`."""
    _check_testable(fam)
    return all(det_s2(extract_minor(fam, sel)) == 0 for sel in selectors(fam.s, fam.d))


def triple_rank_bound(fam: PairFamily) -> dict[tuple[int, int, int], int]:
    """Rank of [v_{i,j}, v_{i,k}, v_{j,k}] for every triple i < j < k."""
    out = {}
    for i, j, k in triples(fam.s):
        cols = (fam[(i, j)], fam[(i, k)], fam[(j, k)])
        out[(i, j, k)] = rank_exact([[c[a] for c in cols] for a in range(fam.d)])
    return out
