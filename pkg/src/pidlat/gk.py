"""Multivariate Gács-Körner common information by partition join.

A variable ``Q`` with ``H(Q|G) = 0`` for every group ``G`` must be constant on
each value-class of every group.  The finest such partition of the support is
obtained by linking any two outcomes that agree on some group and taking the
connected components; its entropy is the maximum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

from .dist import JointDistribution, Outcome, entropy_of_pmf
from .errors import InputError


class _UnionFind:
    def __init__(self, count: int) -> None:
        self.parent = list(range(count))

    def find(self, k: int) -> int:
        root = k
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[k] != root:
            self.parent[k], k = root, self.parent[k]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller index wins so roots are the first outcome of each block
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True)
class PartitionJoin:
    """Blocks of the support (each a tuple of outcomes) with their exact masses.

    Blocks are labelled by position, ordered by their smallest outcome in the
    distribution's canonical outcome order.
    """

    blocks: tuple[tuple[Outcome, ...], ...]
    masses: tuple[Fraction, ...]

    @property
    def entropy(self) -> float:
        return entropy_of_pmf(self.masses)

    def label_of(self) -> dict[Outcome, int]:
        return {o: k for k, block in enumerate(self.blocks) for o in block}

    def to_json(self) -> list[list[list[str]]]:
        return [[[str(s) for s in o] for o in block] for block in self.blocks]


def _normalise_groups(dist: JointDistribution, groups: Sequence[Iterable[str] | str]) -> list[tuple[int, ...]]:
    if len(groups) < 2:
        raise InputError("Gács-Körner common information needs at least two groups")
    cols = []
    for g in groups:
        c = dist.positions(g)
        if not c:
            raise InputError("every group must name at least one variable")
        cols.append(c)
    return cols


def gk_common_info(dist: JointDistribution, groups: Sequence[Iterable[str] | str]) -> tuple[float, PartitionJoin]:
    """Entropy in bits of the maximal common variable of ``groups``, and its partition."""
    cols = _normalise_groups(dist, groups)
    support = dist.support
    uf = _UnionFind(len(support))
    for c in cols:
        first_seen: dict[Outcome, int] = {}
        for k, (outcome, _) in enumerate(support):
            key = dist.project(outcome, c)
            if key in first_seen:
                uf.union(first_seen[key], k)
            else:
                first_seen[key] = k
    members: dict[int, list[int]] = {}
    for k in range(len(support)):
        members.setdefault(uf.find(k), []).append(k)
    ordered = sorted(members.values(), key=lambda ks: ks[0])
    part = PartitionJoin(
        blocks=tuple(tuple(support[k][0] for k in ks) for ks in ordered),
        masses=tuple(sum((support[k][1] for k in ks), Fraction(0)) for ks in ordered),
    )
    return part.entropy, part


def _three(dist: JointDistribution, variables: Sequence[str] | None) -> tuple[str, str, str]:
    names = tuple(dist.variables if variables is None else variables)
    if len(names) != 3:
        raise InputError(f"a three-variable system is required, got {len(names)} variables")
    dist.positions(names)
    if len(set(names)) != 3:
        raise InputError("the three variables must be distinct")
    return names  # type: ignore[return-value]


def red3(dist: JointDistribution, variables: Sequence[str] | None = None) -> float:
    """Three-way redundancy: common information of the three single variables."""
    a, b, c = _three(dist, variables)
    return gk_common_info(dist, [[a], [b], [c]])[0]


def block_masses_under_permutations(dist: JointDistribution, variables: Sequence[str] | None = None) -> list[tuple[Fraction, ...]]:
    """Sorted block-mass multisets of the join for every ordering of the three groups.

    Used for the exact commutativity check: all entries must coincide.
    """
    names = _three(dist, variables)
    out = []
    for perm in permutations(names):
        _, part = gk_common_info(dist, [[v] for v in perm])
        out.append(tuple(sorted(part.masses)))
    return out
