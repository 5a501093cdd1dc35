"""Converse direction: from a candidate conditional probability matrix back
to weights, distribution vectors, an interval model of (X, Y) on (0, 1],
and the smallest integer population realising it."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Mapping

from .exterior_det import nullspace_exact, rank_exact
from .s2rank import Pair, PairFamily, S2Error, canonical_pairs, triples


class NotStochastic(S2Error):
    pass


class NoPositiveRay(S2Error):
    pass


class Underdetermined(S2Error):
    def __init__(self, dim: int, message: str | None = None):
        self.dim = dim
        super().__init__(message or f"weight system has a {dim}-dimensional solution space")


class Inconsistent(S2Error):
    pass


class CocycleViolation(S2Error):
    def __init__(self, pair: Pair):
        self.pair = pair
        super().__init__(f"lambda*v != p_j - p_i for pair {pair}")


def check_stochastic(fam: PairFamily) -> bool:
    return all(
        sum(col) == 1 and all(0 <= x <= 1 for x in col) for col in fam.columns.values()
    )


class TripleStatus(enum.Enum):
    UNIQUE_POSITIVE = "unique-positive"
    DEGENERATE_RANK1 = "degenerate-rank1"
    NO_POSITIVE_SOLUTION = "no-positive-solution"
    UNDERDETERMINED = "underdetermined"


@dataclass(frozen=True)
class TripleCoefficients:
    """a v_{i,j} - b v_{i,k} + c v_{j,k} = 0 with b normalised to 1."""

    triple: tuple[int, int, int]
    a: Fraction | None
    b: Fraction | None
    c: Fraction | None
    status: TripleStatus

    @property
    def alpha(self) -> Fraction | None:
        if self.status is not TripleStatus.UNIQUE_POSITIVE:
            return None
        return self.a / self.b


def _positive_ray(vec: list[Fraction]) -> list[Fraction] | None:
    lead = next((x for x in vec if x != 0), None)
    if lead is None:
        return None
    if lead < 0:
        vec = [-x for x in vec]
    return vec if all(x > 0 for x in vec) else None


def triple_coefficients(fam: PairFamily, i: int, j: int, k: int) -> TripleCoefficients:
    if not 1 <= i < j < k <= fam.s:
        raise ValueError(f"bad triple ({i}, {j}, {k}) for s={fam.s}")
    vij, vik, vjk = fam[(i, j)], fam[(i, k)], fam[(j, k)]
    m = [[vij[a], -vik[a], vjk[a]] for a in range(fam.d)]
    basis = nullspace_exact(m, cols=3)
    t = (i, j, k)
    if len(basis) == 1:
        ray = _positive_ray(basis[0])
        if ray is None:
            return TripleCoefficients(t, None, None, None, TripleStatus.NO_POSITIVE_SOLUTION)
        a, b, c = (x / ray[1] for x in ray)
        return TripleCoefficients(t, a, b, c, TripleStatus.UNIQUE_POSITIVE)
    if len(basis) == 0:
        return TripleCoefficients(t, None, None, None, TripleStatus.NO_POSITIVE_SOLUTION)
    if len(basis) == 2:
        return TripleCoefficients(t, None, None, None, TripleStatus.DEGENERATE_RANK1)
    return TripleCoefficients(t, None, None, None, TripleStatus.UNDERDETERMINED)


def check_pair_witness(fam: PairFamily) -> tuple[bool, list[tuple[tuple[int, ...], int]]]:
    """For each quadruple and coordinate a, look for a partner b making all
    four 2x3 triple matrices rank 2.  Returns (ok, [(quadruple, a), ...])
    listing every combination without a witness; a is 1-based."""
    if fam.s < 4:
        raise ValueError("pair-witness condition needs s >= 4")
    failures = []
    for quad in combinations(range(1, fam.s + 1), 4):
        for a in range(fam.d):
            found = False
            for b in range(fam.d):
                if b == a:
                    continue
                if all(
                    rank_exact(
                        [
                            [fam[(x, y)][a], fam[(x, z)][a], fam[(y, z)][a]],
                            [fam[(x, y)][b], fam[(x, z)][b], fam[(y, z)][b]],
                        ]
                    )
                    == 2
                    for x, y, z in combinations(quad, 3)
                ):
                    found = True
                    break
            if not found:
                failures.append((quad, a + 1))
    return not failures, failures


def weight_system(fam: PairFamily) -> list[list[Fraction]]:
    """Rows lambda_{i,j} v^a_{i,j} - lambda_{i,k} v^a_{i,k} + lambda_{j,k} v^a_{j,k} = 0
    for all triples and coordinates; unknowns in canonical pair order."""
    pairs = fam.pairs()
    index = {p: n for n, p in enumerate(pairs)}
    rows = []
    for i, j, k in triples(fam.s):
        for a in range(fam.d):
            row = [Fraction(0)] * len(pairs)
            row[index[(i, j)]] += fam[(i, j)][a]
            row[index[(i, k)]] -= fam[(i, k)][a]
            row[index[(j, k)]] += fam[(j, k)][a]
            rows.append(row)
    return rows


def solve_weights(fam: PairFamily) -> dict[Pair, Fraction]:
    """Positive weights with lambda_{1,s} = 1 solving the cocycle system."""
    if not check_stochastic(fam):
        raise NotStochastic("columns must have entries in [0, 1] summing to 1")
    pairs = fam.pairs()
    basis = nullspace_exact(weight_system(fam), cols=len(pairs))
    if not basis:
        raise Inconsistent("only the zero vector solves the weight system")
    if len(basis) > 1:
        raise Underdetermined(len(basis))
    ray = _positive_ray(basis[0])
    if ray is None:
        raise NoPositiveRay("the weight system has no strictly positive solution")
    lam = dict(zip(pairs, ray))
    top = lam[(1, fam.s)]
    return {p: v / top for p, v in lam.items()}


def normalized(w: Mapping[Pair, Fraction], s: int) -> dict[Pair, Fraction]:
    top = w[(1, s)]
    return {p: Fraction(v) / top for p, v in w.items()}


def reconstruct_points(fam: PairFamily, w: Mapping[Pair, Fraction]) -> list[tuple[Fraction, ...]]:
    """p_1 = 0 and p_j = lambda_{1,j} v_{1,j}; checks every pair."""
    pts = [tuple(Fraction(0) for _ in range(fam.d))]
    for j in range(2, fam.s + 1):
        pts.append(tuple(w[(1, j)] * x for x in fam[(1, j)]))
    for i, j in fam.pairs():
        lhs = tuple(w[(i, j)] * x for x in fam[(i, j)])
        if lhs != tuple(b - a for a, b in zip(pts[i - 1], pts[j - 1])):
            raise CocycleViolation((i, j))
    return pts


@dataclass(frozen=True)
class Segment:
    lo: Fraction
    hi: Fraction
    x: int
    y: int

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class IntervalModel:
    """A partition of (0, 1] into labelled half-open pieces (lo, hi]."""

    segments: tuple[Segment, ...]

    def X(self, t: Fraction) -> int:
        return self._find(t).x

    def Y(self, t: Fraction) -> int:
        return self._find(t).y

    def _find(self, t: Fraction) -> Segment:
        for seg in self.segments:
            if seg.lo < t <= seg.hi:
                return seg
        raise ValueError(f"{t} is outside (0, 1]")

    def measure(self, i: int, j: int, h: int | None = None) -> Fraction:
        """Lebesgue measure of {i < X <= j} (and Y = h if given)."""
        return sum(
            (seg.length for seg in self.segments if i < seg.x <= j and (h is None or seg.y == h)),
            Fraction(0),
        )


def build_interval_model(
    fam: PairFamily, w: Mapping[Pair, Fraction], pts: list[tuple[Fraction, ...]] | None = None
) -> IntervalModel:
    w = normalized(w, fam.s)
    if pts is None:
        pts = reconstruct_points(fam, w)
    segs = []
    start = Fraction(0)
    for k in range(2, fam.s + 1):
        lo = start
        for h in range(fam.d):
            step = pts[k - 1][h] - pts[k - 2][h]
            if step < 0:
                raise Inconsistent(f"negative mass at X={k}, Y={h + 1}")
            if step == 0:
                continue
            segs.append(Segment(lo, lo + step, k, h + 1))
            lo += step
        start = w[(1, k)]
        if lo != start:
            raise Inconsistent(f"block X={k} does not end at lambda_(1,{k})")
    return IntervalModel(tuple(segs))


@dataclass(frozen=True)
class PopulationTable:
    """Smallest integer population N and joint counts n(x, a)."""

    N: int
    counts: Mapping[tuple[int, int], int]
    s: int
    d: int

    def pair_counts(self) -> dict[Pair, tuple[int, ...]]:
        """Counts of {Y = a, i < X <= j}, i.e. N lambda_{i,j} v_{i,j}."""
        return {
            (i, j): tuple(
                sum(self.counts[(x, a)] for x in range(i + 1, j + 1)) for a in range(1, self.d + 1)
            )
            for i, j in canonical_pairs(self.s)
        }

    def count_rows(self) -> list[list[int]]:
        pc = self.pair_counts()
        pairs = canonical_pairs(self.s)
        return [[pc[p][a] for p in pairs] for a in range(self.d)]


def minimal_population(fam: PairFamily, w: Mapping[Pair, Fraction]) -> PopulationTable:
    w = normalized(w, fam.s)
    pts = reconstruct_points(fam, w)
    inc = {
        (x, a + 1): pts[x - 1][a] - pts[x - 2][a] for x in range(2, fam.s + 1) for a in range(fam.d)
    }
    n = lcm(*(v.denominator for v in inc.values()))
    counts = {k: int(v * n) for k, v in inc.items()}
    return PopulationTable(n, counts, fam.s, fam.d)
