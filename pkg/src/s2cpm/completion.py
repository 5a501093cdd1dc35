"""Filling in missing entries of conditional tables and merging tables
recorded over different (but compatible) partitions of X."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exterior_det import RationalLike, nullspace_exact, rational
from .reconstruct import Inconsistent, Underdetermined, _positive_ray
from .s2rank import Pair, PairFamily, S2Error, canonical_pairs, triples

Entry = Fraction | None


class IncompatibleTables(S2Error):
    def __init__(self, conflicts: list[tuple[Pair, tuple[Entry, ...], tuple[Entry, ...]]]):
        self.conflicts = conflicts
        pairs = ", ".join(str(p) for p, _, _ in conflicts)
        super().__init__(f"tables disagree on combined pairs {pairs}")


def _entry(x: RationalLike | None) -> Entry:
    if x is None or (isinstance(x, str) and x.strip() == "?"):
        return None
    return rational(x)


@dataclass(frozen=True)
class PartialFamily:
    """Like :class:`PairFamily`, but any entry may be ``None`` (unknown)."""

    s: int
    d: int
    columns: Mapping[Pair, tuple[Entry, ...]]

    def __post_init__(self) -> None:
        pairs = canonical_pairs(self.s)
        cols = {}
        for p in pairs:
            raw = self.columns.get(p)
            col = tuple([None] * self.d) if raw is None else tuple(_entry(x) for x in raw)
            if len(col) != self.d:
                raise ValueError(f"column {p} has length {len(col)}, expected {self.d}")
            known = [x for x in col if x is not None]
            if any(not 0 <= x <= 1 for x in known):
                raise ValueError(f"column {p} has an entry outside [0, 1]")
            if len(known) == self.d and sum(known) != 1:
                raise ValueError(f"column {p} sums to {sum(known)}, not 1")
            if sum(known) > 1:
                raise ValueError(f"known entries of column {p} exceed 1")
            cols[p] = col
        if extra := set(self.columns) - set(pairs):
            raise ValueError(f"pairs out of range for s={self.s}: {sorted(extra)}")
        if all(x is None for col in cols.values() for x in col):
            raise ValueError("partial family has no known entries")
        object.__setattr__(self, "columns", cols)

    @classmethod
    def from_family(cls, fam: PairFamily) -> "PartialFamily":
        return cls(fam.s, fam.d, dict(fam.columns))

    @classmethod
    def from_rows(cls, s: int, rows: Sequence[Sequence[RationalLike | None]]) -> "PartialFamily":
        pairs = canonical_pairs(s)
        cols = {p: tuple(row[n] for row in rows) for n, p in enumerate(pairs)}
        return cls(s, len(rows), cols)

    def __getitem__(self, pair: Pair) -> tuple[Entry, ...]:
        return self.columns[pair]

    def unknowns(self) -> list[tuple[Pair, int]]:
        """(pair, 0-based coordinate) of every unknown entry, canonical order."""
        return [(p, a) for p in canonical_pairs(self.s) for a in range(self.d) if self.columns[p][a] is None]

    def is_complete(self) -> bool:
        return not self.unknowns()

    def to_family(self) -> PairFamily:
        if not self.is_complete():
            raise ValueError("family still has unknown entries")
        return PairFamily(self.s, self.d, dict(self.columns))

    def rows(self) -> list[list[Entry]]:
        return [[self.columns[p][a] for p in canonical_pairs(self.s)] for a in range(self.d)]


@dataclass
class Completion:
    family: PairFamily
    weights: dict[Pair, Fraction]
    inferred: list[tuple[Pair, int]] = field(default_factory=list)


def complete_table(pf: PartialFamily) -> Completion:
    """Infer every unknown entry from the cocycle identities.

    The unknowns are the weights lambda_p of every pair together with the
    products lambda_p v_p^a for each missing entry; the cocycle rows and
    the column-sum rows are linear in those, so the whole table is solved
    as one exact homogeneous system.  Weights come back with
    lambda_{1,s} = 1.
    """
    pairs = canonical_pairs(pf.s)
    lam_idx = {p: n for n, p in enumerate(pairs)}
    missing = pf.unknowns()
    y_idx = {key: len(pairs) + n for n, key in enumerate(missing)}
    width = len(pairs) + len(missing)

    rows: list[list[Fraction]] = []
    for i, j, k in triples(pf.s):
        for a in range(pf.d):
            row = [Fraction(0)] * width
            for pair, sign in (((i, j), 1), ((i, k), -1), ((j, k), 1)):
                v = pf[pair][a]
                if v is None:
                    row[y_idx[(pair, a)]] += sign
                else:
                    row[lam_idx[pair]] += sign * v
            rows.append(row)
    for p in pairs:
        col = pf[p]
        if all(x is not None for x in col):
            continue
        row = [Fraction(0)] * width
        row[lam_idx[p]] = sum((x for x in col if x is not None), Fraction(0)) - 1
        for a, x in enumerate(col):
            if x is None:
                row[y_idx[(p, a)]] = Fraction(1)
        rows.append(row)

    basis = nullspace_exact(rows, cols=width)
    if not basis:
        raise Inconsistent("no nonzero solution: the known entries contradict each other")
    if len(basis) > 1:
        raise Underdetermined(len(basis), f"{len(basis)}-dimensional solution space; table cannot be completed uniquely")
    vec = basis[0]
    lam_part = _positive_ray(vec[: len(pairs)])
    if lam_part is None:
        raise Inconsistent("no solution with all weights positive")
    if vec[0] < 0:
        vec = [-x for x in vec]
    top = vec[lam_idx[(1, pf.s)]]
    vec = [x / top for x in vec]
    lam = {p: vec[lam_idx[p]] for p in pairs}

    cols = {p: list(pf[p]) for p in pairs}
    for (p, a), n in y_idx.items():
        value = vec[n] / lam[p]
        if not 0 <= value <= 1:
            raise Inconsistent(f"inferred entry {value} for pair {p}, row {a + 1} is not a probability")
        cols[p][a] = value
    fam = PairFamily(pf.s, pf.d, {p: tuple(c) for p, c in cols.items()})
    return Completion(fam, lam, missing)


@dataclass(frozen=True)
class RefinementMap:
    """One order-preserving injection per source table.

    ``maps[t][i - 1]`` is the combined index of source index ``i``.  Every
    injection sends 1 to 1; a table over a sub-population (e.g. only the
    first few classes) may stop short of the combined top index, but at
    least one injection must reach it.
    """

    maps: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        maps = tuple(tuple(int(x) for x in m) for m in self.maps)
        if not maps:
            raise ValueError("refinement map needs at least one injection")
        s = max(m[-1] for m in maps)
        for n, m in enumerate(maps):
            if len(m) < 2 or any(a >= b for a, b in zip(m, m[1:])):
                raise ValueError(f"injection {n} is not strictly increasing")
            if m[0] != 1:
                raise ValueError(f"injection {n} must send 1 to 1")
        object.__setattr__(self, "maps", maps)

    @property
    def s(self) -> int:
        return max(m[-1] for m in self.maps)


@dataclass
class MergeReport:
    sources: dict[Pair, list[int]]
    unknown: list[Pair]


def merge_many(
    tables: Sequence[PairFamily | PartialFamily], rm: RefinementMap
) -> tuple[PartialFamily, MergeReport]:
    if len(tables) != len(rm.maps):
        raise ValueError(f"{len(tables)} tables but {len(rm.maps)} injections")
    d = tables[0].d
    if any(t.d != d for t in tables):
        raise ValueError("all tables must share the same number of Y outcomes")
    for n, (t, m) in enumerate(zip(tables, rm.maps)):
        if len(m) != t.s:
            raise ValueError(f"injection {n} has {len(m)} entries but table {n} has s={t.s}")

    s = rm.s
    merged: dict[Pair, list[Entry]] = {p: [None] * d for p in canonical_pairs(s)}
    sources: dict[Pair, list[int]] = {p: [] for p in merged}
    conflicts = {}
    for n, (t, m) in enumerate(zip(tables, rm.maps)):
        for i, j in canonical_pairs(t.s):
            target = (m[i - 1], m[j - 1])
            col = t[(i, j)]
            cur = merged[target]
            for a, x in enumerate(col):
                if x is None:
                    continue
                if cur[a] is not None and cur[a] != x:
                    conflicts.setdefault(target, (tuple(cur), tuple(col)))
                elif cur[a] is None:
                    cur[a] = x
            sources[target].append(n)
    if conflicts:
        order = canonical_pairs(s)
        raise IncompatibleTables(
            [(p, *conflicts[p]) for p in order if p in conflicts]
        )
    pf = PartialFamily(s, d, {p: tuple(c) for p, c in merged.items()})
    unknown = [p for p in canonical_pairs(s) if any(x is None for x in pf[p])]
    return pf, MergeReport(sources, unknown)


def merge_tables(
    t1: PairFamily | PartialFamily, t2: PairFamily | PartialFamily, rm: RefinementMap
) -> tuple[PartialFamily, MergeReport]:
    """Place two tables on a common refined index set and check that they
    agree wherever both define a column."""
    return merge_many([t1, t2], rm)
