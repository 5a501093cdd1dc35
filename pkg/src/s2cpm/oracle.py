"""Seeded generators and brute-force oracles used by the test suites.

Nothing here shares code with the elimination routines in
:mod:`s2cpm.exterior_det`; the oracles are deliberately naive.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .probmodel import JointDistribution


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    s_range: tuple[int, int] = (4, 6)
    d_range: tuple[int, int] = (2, 4)
    denominator: int = 12


def gen_random_joint(cfg: GeneratorConfig) -> JointDistribution:
    """Random joint with integer counts in [0, denominator] per cell,
    normalised to probabilities; every X value gets positive mass."""
    rng = random.Random(cfg.seed)
    s = rng.randint(*cfg.s_range)
    d = rng.randint(*cfg.d_range)
    counts = [[rng.randint(0, cfg.denominator) for _ in range(s - 1)] for _ in range(d)]
    for x in range(s - 1):
        if all(counts[a][x] == 0 for a in range(d)):
            counts[rng.randrange(d)][x] = rng.randint(1, max(1, cfg.denominator))
    return JointDistribution.from_counts(counts)


def random_fraction(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 9) -> list[list[Fraction]]:
    return [[random_fraction(rng, bound) for _ in range(cols)] for _ in range(rows)]


def cofactor_det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    """Laplace expansion along the first row (n <= 8)."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    if n > 8:
        raise TooLarge(f"cofactor expansion refused for n={n} > 8")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(m[0][0])
    total = Fraction(0)
    for c in range(n):
        if m[0][c] == 0:
            continue
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        sign = -1 if c % 2 else 1
        total += sign * m[0][c] * cofactor_det(minor)
    return total


def minor_rank(m: Sequence[Sequence[Fraction]]) -> int:
    """Largest k with a nonzero k x k minor, by exhaustive enumeration."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    for k in range(min(rows, cols), 0, -1):
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                if cofactor_det([[m[r][c] for c in cs] for r in rs]) != 0:
                    return k
    return 0


def cofactor_det_s2(columns: Sequence[Sequence[Fraction]]) -> Fraction:
    """det^{S^2} through the 6x6 companion matrix, evaluated by cofactors."""
    (a12, b12), (a23, b23), (a34, b34), (a13, b13), (a24, b24), (a14, b14) = columns
    z = 0
    m = [
        [a12, a23, z, -a13, z, z],
        [b12, b23, z, -b13, z, z],
        [a12, z, z, z, a24, -a14],
        [b12, z, z, z, b24, -b14],
        [z, z, a34, a13, z, -a14],
        [z, z, b34, b13, z, -b14],
    ]
    return cofactor_det([[Fraction(x) for x in row] for row in m])
