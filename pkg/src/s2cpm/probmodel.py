"""From a joint distribution of (X, Y) to its conditional probability
matrix, distribution vectors and distribution weights."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exterior_det import RationalLike, rank_exact, rational
from .s2rank import (
    Pair,
    PairFamily,
    RankViolation,
    S2Error,
    TooSmall,
    canonical_pairs,
    s2_rank_is_one,
    triples,
)


class ZeroPairMass(S2Error):
    pass


@dataclass(frozen=True)
class JointDistribution:
    """P(X = x, Y = a) for x in 2..s and a in 1..d.

    X never takes the value 1, so the mass table has s - 1 rows.
    """

    s: int
    d: int
    mass: Mapping[tuple[int, int], Fraction]

    def __post_init__(self) -> None:
        if self.s < 2 or self.d < 1:
            raise ValueError(f"need s >= 2 and d >= 1, got s={self.s}, d={self.d}")
        keys = {(x, a) for x in range(2, self.s + 1) for a in range(1, self.d + 1)}
        if set(self.mass) != keys:
            raise ValueError("mass must be given for every (x, a) with 2 <= x <= s, 1 <= a <= d")
        mass = {k: rational(self.mass[k]) for k in sorted(keys)}
        if any(v < 0 for v in mass.values()):
            raise ValueError("negative probability mass")
        if sum(mass.values()) != 1:
            raise ValueError(f"total mass is {sum(mass.values())}, not 1")
        for x in range(2, self.s + 1):
            if sum(mass[(x, a)] for a in range(1, self.d + 1)) == 0:
                raise ZeroPairMass(f"P({x - 1} < X <= {x}) = 0")
        object.__setattr__(self, "mass", mass)

    @classmethod
    def from_counts(cls, counts: Sequence[Sequence[RationalLike]]) -> "JointDistribution":
        """``counts[a][x - 2]``: one row per Y outcome, one column per x = 2..s."""
        d = len(counts)
        s = len(counts[0]) + 1
        vals = [[rational(c) for c in row] for row in counts]
        if any(len(row) != s - 1 for row in vals):
            raise ValueError("ragged count table")
        if any(c < 0 for row in vals for c in row):
            raise ValueError("negative count")
        total = sum(sum(row) for row in vals)
        if total <= 0:
            raise ValueError("count table has no mass")
        mass = {(x, a + 1): vals[a][x - 2] / total for a in range(d) for x in range(2, s + 1)}
        return cls(s, d, mass)

    def table(self) -> list[list[Fraction]]:
        """Rows indexed by Y outcome, columns by x = 2..s."""
        return [[self.mass[(x, a)] for x in range(2, self.s + 1)] for a in range(1, self.d + 1)]


def _pair_mass(joint: JointDistribution, i: int, j: int, a: int) -> Fraction:
    return sum((joint.mass[(x, a)] for x in range(i + 1, j + 1)), Fraction(0))


def distribution_vectors(joint: JointDistribution) -> list[tuple[Fraction, ...]]:
    """p_i^a = P(Y = a, X <= i) for i = 1..s (index 0 holds p_1 = 0)."""
    out = []
    running = [Fraction(0)] * joint.d
    for i in range(1, joint.s + 1):
        if i >= 2:
            running = [r + joint.mass[(i, a + 1)] for a, r in enumerate(running)]
        out.append(tuple(running))
    return out


def weights(joint: JointDistribution) -> dict[Pair, Fraction]:
    """lambda_{i,j} = P(i < X <= j), in canonical pair order."""
    p = distribution_vectors(joint)
    return {(i, j): sum(p[j - 1]) - sum(p[i - 1]) for i, j in canonical_pairs(joint.s)}


def conditional_matrix(joint: JointDistribution) -> PairFamily:
    """v_{i,j}^a = P(Y = a | i < X <= j)."""
    cols = {}
    for i, j in canonical_pairs(joint.s):
        masses = [_pair_mass(joint, i, j, a) for a in range(1, joint.d + 1)]
        total = sum(masses)
        if total == 0:
            raise ZeroPairMass(f"P({i} < X <= {j}) = 0")
        cols[(i, j)] = tuple(m / total for m in masses)
    return PairFamily(joint.s, joint.d, cols)


def joint_rank(joint: JointDistribution) -> int:
    """Rank of the joint probability matrix; 1 iff X and Y are independent."""
    return rank_exact(joint.table())


@dataclass
class ForwardReport:
    """Outcome of checking the three forward statements on one joint."""

    family: PairFamily
    weights: dict[Pair, Fraction]
    points: list[tuple[Fraction, ...]]
    pair_ok: dict[Pair, bool] = field(default_factory=dict)
    alpha: dict[tuple[int, int, int], Fraction] = field(default_factory=dict)
    triple_ok: dict[tuple[int, int, int], bool] = field(default_factory=dict)
    additivity_ok: bool = True
    rank_one: bool | None = None  # None: vacuous (s < 4 or d < 2)
    violations: list[RankViolation] = field(default_factory=list)

    @property
    def stochastic_ok(self) -> bool:
        return all(
            sum(col) == 1 and all(0 <= x <= 1 for x in col) for col in self.family.columns.values()
        )

    @property
    def passed(self) -> bool:
        return (
            self.stochastic_ok
            and all(self.pair_ok.values())
            and all(self.triple_ok.values())
            and self.additivity_ok
            and self.rank_one is not False
        )

    def as_dict(self) -> dict:
        def key(t):
            return ",".join(map(str, t))

        return {
            "passed": self.passed,
            "stochastic": self.stochastic_ok,
            "pairs": {key(p): ok for p, ok in self.pair_ok.items()},
            "triples": {
                key(t): {"alpha": str(self.alpha[t]), "ok": ok} for t, ok in self.triple_ok.items()
            },
            "additivity": self.additivity_ok,
            "s2_rank_one": "vacuous" if self.rank_one is None else self.rank_one,
        }


def verify_theorem2(joint: JointDistribution) -> ForwardReport:
    """Check lambda_{i,j} v_{i,j} = p_j - p_i, the convex triple relation
    with alpha in (0, 1), and S^2-rank one of the conditional matrix."""
    fam = conditional_matrix(joint)
    lam = weights(joint)
    p = distribution_vectors(joint)
    report = ForwardReport(fam, lam, p)
    for i, j in fam.pairs():
        lhs = tuple(lam[(i, j)] * x for x in fam[(i, j)])
        rhs = tuple(b - a for a, b in zip(p[i - 1], p[j - 1]))
        report.pair_ok[(i, j)] = lam[(i, j)] > 0 and lhs == rhs
    for i, j, k in triples(fam.s):
        if lam[(i, k)] != lam[(i, j)] + lam[(j, k)]:
            report.additivity_ok = False
        alpha = lam[(i, j)] / lam[(i, k)]
        convex = all(
            vik == alpha * vij + (1 - alpha) * vjk
            for vij, vik, vjk in zip(fam[(i, j)], fam[(i, k)], fam[(j, k)])
        )
        cocycle = all(
            lam[(i, j)] * vij - lam[(i, k)] * vik + lam[(j, k)] * vjk == 0
            for vij, vik, vjk in zip(fam[(i, j)], fam[(i, k)], fam[(j, k)])
        )
        report.alpha[(i, j, k)] = alpha
        report.triple_ok[(i, j, k)] = 0 < alpha < 1 and convex and cocycle
    try:
        report.rank_one, report.violations = s2_rank_is_one(fam)
    except TooSmall:
        report.rank_one = None
    return report
