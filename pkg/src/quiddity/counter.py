"""Transfer-matrix dynamic program over SL2(Z/NZ).

State is a vector of arbitrary-precision counts indexed by group element.
One step per tuple position: the vector is convolved with the letter
distribution allowed at that position, each letter acting by left
multiplication.  Cost is O(size * N * |SL2(Z/NZ)|), so exact counts reach
sizes far beyond brute force while staying cross-checkable against it.
"""

from __future__ import annotations

from functools import lru_cache

from .modring import Modulus
from .oracle import ANY, Constraint, SetSpec, allowed_values
from .sl2 import Mat2, TARGET_NAMES, group_table, target_by_name


@lru_cache(maxsize=None)
def _letter_actions(modulus: Modulus) -> list[list[int]]:
    """For each letter a: the permutation g -> index of elementary(a) @ g.

    Only the N letter actions are tabulated, never the full group
    multiplication table, keeping memory at O(N * |G|).
    """
    table = group_table(modulus)
    n = modulus.n
    actions = []
    for a in range(n):
        perm = []
        for g in table._elements:
            p, q, r, s = g.a, g.b, g.c, g.d
            key = (((a * p - r) % n * n + (a * q - s) % n) * n + p) * n + q
            perm.append(table.index_of_key(key))
        actions.append(perm)
    return actions


class CountVector:
    """Counts of walks per group element; index space is the group table."""

    __slots__ = ("modulus", "counts")

    def __init__(self, modulus: Modulus, counts: list[int]):
        self.modulus = modulus
        self.counts = counts

    def __len__(self):
        return len(self.counts)

    def total(self) -> int:
        return sum(self.counts)

    def at(self, target: Mat2) -> int:
        return self.counts[group_table(self.modulus).index_of(target)]


def _normalize_constraints(modulus: Modulus, size: int, constraints) -> dict[int, Constraint]:
    out: dict[int, Constraint] = {}
    if not constraints:
        return out
    pairs = constraints.items() if isinstance(constraints, dict) else constraints
    for pos, con in pairs:
        if not 1 <= pos <= size:
            raise ValueError(f"constraint position {pos} outside 1..{size}")
        if pos in out:
            raise ValueError(f"duplicate constraint for position {pos}")
        if con.kind == "fixed":
            con = Constraint("fixed", con.value % modulus.n)
        out[pos] = con
    return out


def dp_vector_sequence(size: int, modulus: Modulus, constraints=None) -> list[CountVector]:
    """Vectors after 0, 1, ..., size steps (one DP pass, snapshots kept)."""
    table = group_table(modulus)
    actions = _letter_actions(modulus)
    cons = _normalize_constraints(modulus, size, constraints)
    counts = [0] * len(table)
    counts[0] = 1  # empty product is the identity
    snapshots = [CountVector(modulus, counts.copy())]
    for pos in range(1, size + 1):
        letters = allowed_values(modulus, cons.get(pos, ANY))
        fresh = [0] * len(table)
        for a in letters:
            perm = actions[a]
            for g, c in enumerate(counts):
                if c:
                    fresh[perm[g]] += c
        counts = fresh
        snapshots.append(CountVector(modulus, counts.copy()))
    return snapshots


def dp_vector(size: int, modulus: Modulus, constraints=None) -> CountVector:
    return dp_vector_sequence(size, modulus, constraints)[-1]


def dp_count(spec: SetSpec) -> int:
    """Exact set size by DP; equals oracle.count(spec) on every feasible spec."""
    return dp_vector(spec.size, spec.modulus, dict(spec.constraints)).at(spec.target)


def dp_count_all_targets(size: int, modulus: Modulus, constraints=None) -> dict[str, int]:
    """Counts for the six named targets (+-Id, +-S, +-T) from one DP pass."""
    vec = dp_vector(size, modulus, constraints)
    return {name: vec.at(target_by_name(name, modulus)) for name in TARGET_NAMES}
