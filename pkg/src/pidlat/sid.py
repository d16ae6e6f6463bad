"""Three-variable system information decomposition.

The ten atoms live on the half lattice of three sources (antichains with at
least one singleton).  Fixing the three-way redundancy pins every other atom,
either through the closed-form expressions or by solving the nine entropy
constraints plus one pinning row; the two routes are kept separate so they
can be checked against each other.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Mapping, Sequence

import numpy as np

from .dist import BITS_TOL, JointDistribution, entropy, mutual_info
from .errors import InputError
from .gk import _three, block_masses_under_permutations, red3
from .lattice import Antichain, AtomTable, downset, enumerate_antichains

log = logging.getLogger(__name__)

HALF3 = enumerate_antichains(3, half=True)
FULL3 = enumerate_antichains(3)

_a = lambda text: Antichain.parse(text, 3)  # noqa: E731

#: Serialisation order of the ten atoms.
SID_ORDER: tuple[Antichain, ...] = tuple(
    _a(t) for t in ("{1}{2}{3}", "{1}{2}", "{1}{3}", "{2}{3}", "{1}{23}", "{2}{13}", "{3}{12}", "{1}", "{2}", "{3}")
)
REDUNDANCY = SID_ORDER[0]
PAIR_REDUNDANCY = {(1, 2): SID_ORDER[1], (1, 3): SID_ORDER[2], (2, 3): SID_ORDER[3]}
PAIR_TO_SINGLE = {1: SID_ORDER[4], 2: SID_ORDER[5], 3: SID_ORDER[6]}
SINGLE = {1: SID_ORDER[7], 2: SID_ORDER[8], 3: SID_ORDER[9]}

# Rows: H(S1), H(S2), H(S3), H(S1,S2), H(S1,S3), H(S2,S3), then H(S1,S2,S3)
# three times, each dropping a different pair-to-single atom.  Columns follow
# SID_ORDER.
AXIOM0_MATRIX = np.array(
    [
        [1, 1, 1, 0, 1, 0, 0, 1, 0, 0],
        [1, 1, 0, 1, 0, 1, 0, 0, 1, 0],
        [1, 0, 1, 1, 0, 0, 1, 0, 0, 1],
        [1, 1, 1, 1, 1, 1, 0, 1, 1, 0],
        [1, 1, 1, 1, 1, 0, 1, 1, 0, 1],
        [1, 1, 1, 1, 0, 1, 1, 0, 1, 1],
        [1, 1, 1, 1, 1, 1, 0, 1, 1, 1],
        [1, 1, 1, 1, 1, 0, 1, 1, 1, 1],
        [1, 1, 1, 1, 0, 1, 1, 1, 1, 1],
    ],
    dtype=float,
)
PIN_ROW = np.eye(10)[0]


@dataclass(frozen=True)
class EntropyProfile:
    """All seven nonempty-subset entropies of a three-variable system."""

    h1: float
    h2: float
    h3: float
    h12: float
    h13: float
    h23: float
    h123: float

    @classmethod
    def of(cls, dist: JointDistribution, variables: Sequence[str] | None = None) -> "EntropyProfile":
        a, b, c = _three(dist, variables)
        return cls(
            entropy(dist, [a]), entropy(dist, [b]), entropy(dist, [c]),
            entropy(dist, [a, b]), entropy(dist, [a, c]), entropy(dist, [b, c]),
            entropy(dist, [a, b, c]),
        )

    def single(self, i: int) -> float:
        return (self.h1, self.h2, self.h3)[i - 1]

    def pair(self, i: int, j: int) -> float:
        return {(1, 2): self.h12, (1, 3): self.h13, (2, 3): self.h23}[tuple(sorted((i, j)))]

    def as_vector(self) -> np.ndarray:
        """Right-hand side of the nine-row system."""
        return np.array([self.h1, self.h2, self.h3, self.h12, self.h13, self.h23, self.h123, self.h123, self.h123])


@dataclass(frozen=True)
class SidAtoms:
    """The ten SI-atoms of a three-variable system, keyed by half-lattice antichain."""

    values: Mapping[Antichain, float]
    red_source: str = "gacs-korner"
    variables: tuple[str, ...] = ("S1", "S2", "S3")

    def __post_init__(self) -> None:
        if set(self.values) != set(SID_ORDER):
            raise InputError("SI-atoms must cover exactly the ten half-lattice antichains")
        object.__setattr__(self, "values", {a: float(self.values[a]) for a in SID_ORDER})

    @classmethod
    def from_vector(cls, vec: Sequence[float], **kw) -> "SidAtoms":
        return cls(dict(zip(SID_ORDER, (float(v) for v in vec))), **kw)

    def __getitem__(self, alpha: Antichain | str) -> float:
        if isinstance(alpha, str):
            alpha = _a(alpha)
        return self.values[alpha]

    @property
    def red(self) -> float:
        return self.values[REDUNDANCY]

    def as_vector(self) -> np.ndarray:
        return np.array([self.values[a] for a in SID_ORDER])

    def with_value(self, alpha: Antichain | str, value: float) -> "SidAtoms":
        if isinstance(alpha, str):
            alpha = _a(alpha)
        values = dict(self.values)
        values[alpha] = value
        return SidAtoms(values, self.red_source, self.variables)

    def to_table(self) -> AtomTable:
        return AtomTable(HALF3, self.values)

    def to_json(self) -> dict:
        return {"atoms": {str(a): v for a, v in self.values.items()}, "red_source": self.red_source}

    @classmethod
    def from_json(cls, doc: Mapping) -> "SidAtoms":
        try:
            atoms = {_a(k): float(v) for k, v in doc["atoms"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("SidAtoms JSON needs an 'atoms' object of numbers") from exc
        return cls(atoms, doc.get("red_source", "user"))


def _warn_red_range(dist: JointDistribution, names: Sequence[str], red: float) -> None:
    lo, hi = 0.0, min(mutual_info(dist, [a], [b]) for a, b in combinations(names, 2))
    if not lo - BITS_TOL <= red <= hi + BITS_TOL:
        log.warning("redundancy %.9f lies outside [0, min pairwise I] = [0, %.9f]", red, hi)


def sid_closed_form(
    dist: JointDistribution, red: float, variables: Sequence[str] | None = None, warn: bool = True
) -> SidAtoms:
    """SI-atoms from the explicit expressions in terms of entropies and ``red``."""
    names = _three(dist, variables)
    if warn:
        _warn_red_range(dist, names, red)
    h = EntropyProfile.of(dist, names)
    values = {REDUNDANCY: red}
    for (i, j), alpha in PAIR_REDUNDANCY.items():
        values[alpha] = h.single(i) + h.single(j) - h.pair(i, j) - red
    synergy = -(h.h1 + h.h2 + h.h3) + (h.h12 + h.h13 + h.h23) - h.h123 + red
    for alpha in PAIR_TO_SINGLE.values():
        values[alpha] = synergy
    for i, alpha in SINGLE.items():
        j, k = (x for x in (1, 2, 3) if x != i)
        values[alpha] = h.h123 - h.pair(j, k)
    return SidAtoms(values, "user", tuple(names))


@lru_cache(maxsize=None)
def augmented_system() -> tuple[np.ndarray, int]:
    """The 10x10 coefficient matrix and its exact integer determinant.

    Raises if the determinant is zero, which would break uniqueness.
    """
    import sympy

    matrix = np.vstack([AXIOM0_MATRIX, PIN_ROW])
    det = int(sympy.Matrix(matrix.astype(int).tolist()).det())
    if det == 0:
        raise ArithmeticError("augmented SI-atom system is singular")
    return matrix, det


def sid_linear_solve(dist: JointDistribution, red: float, variables: Sequence[str] | None = None) -> SidAtoms:
    """SI-atoms by solving the nine entropy constraints with the redundancy pinned."""
    names = _three(dist, variables)
    matrix, _ = augmented_system()
    rhs = np.append(EntropyProfile.of(dist, names).as_vector(), red)
    return SidAtoms.from_vector(np.linalg.solve(matrix, rhs), red_source="user", variables=tuple(names))


def sid_decompose(dist: JointDistribution, red: float | None = None, variables: Sequence[str] | None = None) -> SidAtoms:
    """Operational decomposition; ``red`` defaults to the Gács-Körner redundancy."""
    names = _three(dist, variables)
    source = "user"
    if red is None:
        red, source = red3(dist, names), "gacs-korner"
    atoms = sid_closed_form(dist, red, names)
    return SidAtoms(atoms.values, source, tuple(names))


# ---------------------------------------------------------------------------
# verification reports


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    expected: float | None = None
    actual: float | None = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.expected is not None:
            out["expected"] = self.expected
            out["actual"] = self.actual
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class Report:
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def _close(name: str, expected: float, actual: float, tol: float = BITS_TOL) -> Check:
    return Check(name, abs(expected - actual) <= tol, expected, actual)


def _below(table: AtomTable, *singles: int) -> float:
    """Sum of atoms below ``{{i}}`` for any of the given ``i`` (union of down-sets)."""
    members: dict[Antichain, None] = {}
    for i in singles:
        for beta in downset(HALF3, Antichain.of(3, [i])):
            members[beta] = None
    return math.fsum(table.values[b] for b in members)


def check_sid_axioms(dist: JointDistribution, atoms: SidAtoms, variables: Sequence[str] | None = None) -> Report:
    """Check a set of SI-atoms against the system's entropies.

    Covers the entropy identities for single variables, pairs and the whole
    system; equality of the three pair-to-single atoms; commutativity;
    monotonicity of the redundancy; pairwise self-redundancy.  Failures are
    report entries, never exceptions.
    """
    if variables is None and set(atoms.variables) <= set(dist.variables):
        variables = atoms.variables
    names = _three(dist, variables)
    h = EntropyProfile.of(dist, names)
    table = atoms.to_table()
    checks: list[Check] = []

    for k in (1, 2, 3):
        checks.append(_close(f"entropy:H(S{k})", h.single(k), _below(table, k)))
    for i, k in ((1, 2), (1, 3), (2, 3)):
        checks.append(_close(f"entropy:H(S{i},S{k})", h.pair(i, k), _below(table, i, k)))
    total = table.total()
    for k, alpha in PAIR_TO_SINGLE.items():
        checks.append(_close(f"entropy:H(S) excluding {alpha}", h.h123, total - atoms[alpha]))

    syn = [atoms[a] for a in PAIR_TO_SINGLE.values()]
    checks.append(Check("symmetric-synergy", max(syn) - min(syn) <= BITS_TOL, detail=f"spread={max(syn) - min(syn):.3e}"))

    checks.append(_commutativity(dist, names, atoms))

    pair_mi = {(i, j): mutual_info(dist, [names[i - 1]], [names[j - 1]]) for i, j in PAIR_REDUNDANCY}
    checks.append(
        Check(
            "monotonicity",
            atoms.red <= min(pair_mi.values()) + BITS_TOL,
            min(pair_mi.values()),
            atoms.red,
            "Red(S1,S2,S3) <= min Red(Si,Sj)",
        )
    )
    for (i, j), alpha in PAIR_REDUNDANCY.items():
        checks.append(_close(f"self-redundancy:Red(S{i},S{j})", pair_mi[(i, j)], atoms.red + atoms[alpha]))
    return Report(tuple(checks))


def _commutativity(dist: JointDistribution, names: Sequence[str], atoms: SidAtoms) -> Check:
    """Relabelling the variables relabels the atoms, and the redundancy is order-free."""
    worst = 0.0
    for perm in permutations((1, 2, 3)):
        permuted = [names[p - 1] for p in perm]
        redone = sid_closed_form(dist, atoms.red, permuted, warn=False)
        for alpha in SID_ORDER:
            image = Antichain(3, tuple(_relabel(m, perm) for m in alpha.sets))
            worst = max(worst, abs(redone[alpha] - atoms[image]))
    ok = worst <= BITS_TOL
    detail = f"max relabelling residual={worst:.3e}"
    if atoms.red_source == "gacs-korner":
        masses = block_masses_under_permutations(dist, names)
        exact = all(m == masses[0] for m in masses)
        ok = ok and exact and abs(red3(dist, names) - atoms.red) <= BITS_TOL
        detail += f"; join partition identical under all orderings: {exact}"
    return Check("commutativity", ok, detail=detail)


def _relabel(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for pos, src in enumerate(perm, start=1):
        if mask >> (pos - 1) & 1:
            out |= 1 << (src - 1)
    return out


# ---------------------------------------------------------------------------
# two-source accounting and cross-scale consistency


@dataclass(frozen=True)
class TwoSourceAtoms:
    red: float
    un1: float
    un2: float
    syn: float


def pid2_structural(i1: float, i2: float, i12: float, red: float) -> TwoSourceAtoms:
    """Unique and synergistic parts implied by a redundancy value; signs are not policed."""
    un1 = i1 - red
    un2 = i2 - red
    return TwoSourceAtoms(red, un1, un2, i12 - un1 - un2 - red)


LATTICE1 = enumerate_antichains(1)
LATTICE2 = enumerate_antichains(2)

# (name, lhs entries, rhs entries); entries are (table, antichain text)
CROSS_SCALE_EQUATIONS: tuple[tuple[str, tuple[tuple[str, str], ...], tuple[tuple[str, str], ...]], ...] = (
    ("single-to-pair", (("pi1", "{1}"),), (("pi12", "{1}{2}"), ("pi12", "{1}"))),
    ("pair-redundancy-to-triple", (("pi12", "{1}{2}"),), (("pi123", "{1}{2}{3}"), ("pi123", "{1}{2}"))),
    ("pair-unique-to-triple", (("pi12", "{1}"),), (("pi123", "{1}{3}"), ("pi123", "{1}{23}"), ("pi123", "{1}"))),
)


def cross_scale_check(pi1: AtomTable, pi12: AtomTable, pi123: AtomTable) -> Report:
    """Consistency of PI-atoms decomposed from the 1-, 2- and 3-source subsystems."""
    tables = {"pi1": pi1, "pi12": pi12, "pi123": pi123}
    expected = {"pi1": LATTICE1, "pi12": LATTICE2, "pi123": FULL3}
    for key, table in tables.items():
        if table.lattice.n != expected[key].n or table.lattice.half:
            raise InputError(f"{key} must be a table on the full {expected[key].n}-source lattice")
    checks = []
    for name, lhs, rhs in CROSS_SCALE_EQUATIONS:
        left = math.fsum(tables[t][a] for t, a in lhs)
        right = math.fsum(tables[t][a] for t, a in rhs)
        checks.append(_close(name, left, right))
    return Report(tuple(checks))

