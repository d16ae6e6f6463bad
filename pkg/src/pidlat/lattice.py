"""Redundancy lattice of antichains over source subsets.

Sources are numbered ``1..n`` and a source subset is a bitmask (bit ``i-1``
for source ``i``).  An antichain stores its subsets sorted by
``(popcount, mask)``; antichains are ordered lexicographically on that
sequence, which fixes a deterministic listing for every lattice.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .errors import CapabilityError, InputError

MAX_SOURCES = 5


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subset_key(mask: int) -> tuple[int, int]:
    return (popcount(mask), mask)


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        if not isinstance(i, int) or i < 1:
            raise InputError(f"source indices are positive integers, got {i!r}")
        mask |= 1 << (i - 1)
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class Antichain:
    """A nonempty family of pairwise incomparable nonempty source subsets."""

    n: int
    sets: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.sets:
            raise InputError("an antichain needs at least one element")
        full = (1 << self.n) - 1
        for m in self.sets:
            if m <= 0 or m & ~full:
                raise InputError(f"subset {indices_of(m)} is empty or outside 1..{self.n}")
        ordered = tuple(sorted(set(self.sets), key=subset_key))
        if len(ordered) != len(self.sets):
            raise InputError("repeated subset in antichain")
        for a in ordered:
            for b in ordered:
                if a != b and a & b == a:
                    raise InputError(f"{indices_of(a)} is contained in {indices_of(b)}")
        object.__setattr__(self, "sets", ordered)

    @classmethod
    def of(cls, n: int, *groups: Iterable[int]) -> "Antichain":
        """``Antichain.of(3, [1], [2, 3])`` is ``{1}{23}``."""
        return cls(n, tuple(mask_of(g) for g in groups))

    @classmethod
    def parse(cls, text: str, n: int) -> "Antichain":
        """Parse ``{1}{23}`` or ``{{1},{2,3}}`` (single-digit source indices)."""
        compact = re.sub(r"[\s,]", "", text)
        if compact.startswith("{{") and compact.endswith("}}"):
            compact = compact[1:-1]
        parts = re.findall(r"\{([0-9]+)\}", compact)
        if not parts or "".join(f"{{{p}}}" for p in parts) != compact:
            raise InputError(f"cannot parse antichain {text!r}")
        return cls.of(n, *[[int(c) for c in p] for p in parts])

    @property
    def key(self) -> tuple[tuple[int, int], ...]:
        return tuple(subset_key(m) for m in self.sets)

    def groups(self) -> list[list[int]]:
        return [list(indices_of(m)) for m in self.sets]

    def has_singleton(self) -> bool:
        return any(popcount(m) == 1 for m in self.sets)

    def __str__(self) -> str:
        return "".join("{" + "".join(str(i) for i in indices_of(m)) + "}" for m in self.sets)

    def __lt__(self, other: "Antichain") -> bool:
        return self.key < other.key


def leq(beta: Antichain, alpha: Antichain) -> bool:
    """``beta ⪯ alpha``: every member of ``alpha`` contains some member of ``beta``."""
    if beta.n != alpha.n:
        raise InputError(f"antichains over {beta.n} and {alpha.n} sources are not comparable")
    return all(any(b & a == b for b in beta.sets) for a in alpha.sets)


@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple[tuple[int, ...], ...]:
    subsets = sorted(range(1, 1 << n), key=subset_key)
    found: list[tuple[int, ...]] = []

    def extend(start: int, chosen: list[int]) -> None:
        if chosen:
            found.append(tuple(chosen))
        for k in range(start, len(subsets)):
            m = subsets[k]
            if all(c & m != c and c & m != m for c in chosen):
                chosen.append(m)
                extend(k + 1, chosen)
                chosen.pop()

    extend(0, [])
    return tuple(found)


@dataclass(frozen=True)
class Lattice:
    """All antichains over ``n`` sources in canonical order.

    With ``half=True`` only antichains containing a singleton are kept.
    """

    n: int
    half: bool
    antichains: tuple[Antichain, ...]
    _pos: dict[Antichain, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_pos", {a: k for k, a in enumerate(self.antichains)})

    def __len__(self) -> int:
        return len(self.antichains)

    def __iter__(self) -> Iterator[Antichain]:
        return iter(self.antichains)

    def __contains__(self, alpha: object) -> bool:
        return alpha in self._pos

    def index(self, alpha: Antichain) -> int:
        return self._pos[alpha]

    @property
    def bottom(self) -> Antichain:
        return Antichain(self.n, tuple(1 << i for i in range(self.n)))

    @property
    def top(self) -> Antichain:
        """``{{1..n}}`` on the full lattice; the half lattice has no single top."""
        if self.half and self.n > 1:
            raise InputError("the half lattice has no single top element")
        return Antichain(self.n, ((1 << self.n) - 1,))

    def parse(self, text: str) -> Antichain:
        alpha = Antichain.parse(text, self.n)
        if alpha not in self:
            raise InputError(f"{alpha} is not in this lattice")
        return alpha


@lru_cache(maxsize=None)
def enumerate_antichains(n_sources: int, half: bool = False) -> Lattice:
    if not isinstance(n_sources, int) or not 1 <= n_sources <= MAX_SOURCES:
        raise CapabilityError(f"number of sources must be in 1..{MAX_SOURCES}, got {n_sources}")
    chains = [Antichain(n_sources, s) for s in _enumerate(n_sources)]
    if half:
        chains = [a for a in chains if a.has_singleton()]
    return Lattice(n_sources, half, tuple(sorted(chains, key=lambda a: a.key)))


def downset(lattice: Lattice, alpha: Antichain) -> list[Antichain]:
    """Every lattice element below ``alpha`` (inclusive), in canonical order."""
    if alpha not in lattice:
        raise InputError(f"{alpha} is not an element of the lattice")
    return [b for b in lattice if leq(b, alpha)]


@dataclass(frozen=True)
class AtomTable:
    """Total map from the antichains of ``lattice`` to real values in bits."""

    lattice: Lattice
    values: Mapping[Antichain, float]

    def __post_init__(self) -> None:
        missing = [str(a) for a in self.lattice if a not in self.values]
        extra = [str(a) for a in self.values if a not in self.lattice]
        if missing or extra:
            raise InputError(f"atom table mismatch: missing {missing}, foreign {extra}")
        object.__setattr__(self, "values", {a: self.values[a] for a in self.lattice})

    @classmethod
    def zeros(cls, lattice: Lattice) -> "AtomTable":
        return cls(lattice, {a: 0.0 for a in lattice})

    @classmethod
    def from_strings(cls, lattice: Lattice, entries: Mapping[str, float], default: float = 0.0) -> "AtomTable":
        values = {a: default for a in lattice}
        for text, v in entries.items():
            values[lattice.parse(text)] = v
        return cls(lattice, values)

    def __getitem__(self, alpha: Antichain | str) -> float:
        if isinstance(alpha, str):
            alpha = self.lattice.parse(alpha)
        return self.values[alpha]

    def with_value(self, alpha: Antichain | str, value: float) -> "AtomTable":
        if isinstance(alpha, str):
            alpha = self.lattice.parse(alpha)
        values = dict(self.values)
        values[alpha] = value
        return AtomTable(self.lattice, values)

    def nonzero(self) -> dict[str, float]:
        return {str(a): v for a, v in self.values.items() if v != 0}

    def total(self) -> float:
        return math.fsum(self.values.values())

    def to_json(self) -> dict[str, float]:
        return {str(a): v for a, v in self.values.items()}


def wesp_sum(atoms: AtomTable, lattice: Lattice, b: Iterable[int]) -> float:
    """Sum of the atoms below the single-element antichain ``{B}``."""
    node = Antichain.of(lattice.n, list(b))
    if node not in lattice:
        raise InputError(f"{node} is not an element of the lattice")
    total = []
    for beta in downset(lattice, node):
        if beta not in atoms.values:
            raise InputError(f"no atom value for {beta}")
        total.append(atoms.values[beta])
    return math.fsum(total)


def render_table(lattice: Lattice) -> list[str]:
    return [str(a) for a in lattice]


def render_json(lattice: Lattice) -> list[list[list[int]]]:
    return [a.groups() for a in lattice]

