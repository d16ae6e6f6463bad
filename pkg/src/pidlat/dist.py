"""Exact finite joint distributions and the information measures built on them.

Probabilities are stored as :class:`fractions.Fraction`.  Every zero test
(``H(X|Y) = 0``, ``I(X;Y) = 0``) is decided structurally on the rational
support; only the final entropy values are reported as floats in bits.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .errors import InputError

#: Tolerance for comparing entropy values, in bits.
BITS_TOL = 1e-9

Outcome = tuple


@dataclass(frozen=True)
class JointDistribution:
    """Exact PMF over a tuple of named finite-alphabet variables.

    Only positive-mass outcomes are stored.  Alphabets may list symbols that
    never occur.  The support is kept in canonical order: lexicographic in the
    per-variable alphabet positions.
    """

    variables: tuple[str, ...]
    alphabets: tuple[tuple[Hashable, ...], ...]
    support: tuple[tuple[Outcome, Fraction], ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise InputError(f"duplicate variable names in {self.variables!r}")
        if len(self.alphabets) != len(self.variables):
            raise InputError("one alphabet per variable is required")
        positions = [{s: k for k, s in enumerate(alpha)} for alpha in self.alphabets]
        seen = set()
        total = Fraction(0)
        for outcome, p in self.support:
            if len(outcome) != len(self.variables):
                raise InputError(f"outcome {outcome!r} does not match {len(self.variables)} variables")
            for sym, pos, name in zip(outcome, positions, self.variables):
                if sym not in pos:
                    raise InputError(f"symbol {sym!r} not in alphabet of {name!r}")
            if outcome in seen:
                raise InputError(f"duplicate outcome {outcome!r}")
            if not isinstance(p, Fraction) or p <= 0:
                raise InputError(f"probability of {outcome!r} must be a positive Fraction, got {p!r}")
            seen.add(outcome)
            total += p
        if total != 1:
            raise InputError(f"probabilities sum to {total}, not exactly 1")
        ordered = tuple(
            sorted(self.support, key=lambda row: tuple(pos[s] for s, pos in zip(row[0], positions)))
        )
        object.__setattr__(self, "support", ordered)
        object.__setattr__(self, "_index", {v: k for k, v in enumerate(self.variables)})

    @classmethod
    def from_pmf(
        cls,
        variables: Sequence[str],
        pmf: Mapping[Outcome, Any] | Iterable[tuple[Outcome, Any]],
        alphabets: Sequence[Sequence[Hashable]] | None = None,
    ) -> "JointDistribution":
        """Build from ``{outcome: p}``; zero-mass rows are dropped, repeats merged."""
        items = pmf.items() if isinstance(pmf, Mapping) else pmf
        merged: dict[Outcome, Fraction] = defaultdict(Fraction)
        for outcome, p in items:
            merged[tuple(outcome)] += parse_probability(p)
        rows = tuple((o, p) for o, p in merged.items() if p != 0)
        if any(p < 0 for _, p in rows):
            raise InputError("negative probability")
        if alphabets is None:
            alphabets = [
                tuple(sorted({o[k] for o, _ in rows}, key=_symbol_key)) for k in range(len(variables))
            ]
        return cls(tuple(variables), tuple(tuple(a) for a in alphabets), rows)

    def __len__(self) -> int:
        return len(self.support)

    def pmf(self) -> dict[Outcome, Fraction]:
        return dict(self.support)

    def positions(self, names: Iterable[str]) -> tuple[int, ...]:
        """Column indices for ``names`` in distribution order; unknown names raise."""
        names = _as_names(names)
        missing = [n for n in names if n not in self._index]
        if missing:
            raise InputError(f"unknown variable(s) {missing}; have {list(self.variables)}")
        return tuple(sorted({self._index[n] for n in names}))

    def project(self, outcome: Outcome, cols: tuple[int, ...]) -> Outcome:
        return tuple(outcome[c] for c in cols)


def _symbol_key(sym: Hashable) -> tuple:
    return (type(sym).__name__, str(sym))


def _as_names(names: Iterable[str] | str) -> tuple[str, ...]:
    if isinstance(names, str):
        return (names,)
    return tuple(names)


def parse_probability(p: Any) -> Fraction:
    """Exact rational from ``"num/den"``, a decimal string, an int or a Fraction.

    Floats are rejected: their binary expansion would silently leak into the
    exact pipeline.
    """
    if isinstance(p, Fraction):
        return p
    if isinstance(p, bool):
        raise InputError(f"invalid probability {p!r}")
    if isinstance(p, int):
        return Fraction(p)
    if isinstance(p, str):
        try:
            return Fraction(p.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"invalid probability string {p!r}") from exc
    raise InputError(f"probability must be a string or exact number, got {type(p).__name__}")


# ---------------------------------------------------------------------------
# exact marginals and structural tests


def marginal_pmf(dist: JointDistribution, names: Iterable[str]) -> dict[Outcome, Fraction]:
    """Exact marginal over ``names`` (distribution order); ``{(): 1}`` when empty."""
    cols = dist.positions(names)
    out: dict[Outcome, Fraction] = defaultdict(Fraction)
    for outcome, p in dist.support:
        out[dist.project(outcome, cols)] += p
    return dict(out)


def marginalize(dist: JointDistribution, names: Iterable[str]) -> JointDistribution:
    """The exact marginal distribution on a nonempty subset of variables."""
    cols = dist.positions(names)
    if not cols:
        raise InputError("marginalize needs at least one variable")
    variables = tuple(dist.variables[c] for c in cols)
    alphabets = tuple(dist.alphabets[c] for c in cols)
    return JointDistribution.from_pmf(variables, marginal_pmf(dist, variables), alphabets)


def is_deterministic(dist: JointDistribution, target: Iterable[str], given: Iterable[str]) -> bool:
    """True iff ``target`` is a function of ``given`` on the support (H = 0 exactly)."""
    tcols = dist.positions(target)
    gcols = dist.positions(given)
    seen: dict[Outcome, Outcome] = {}
    for outcome, _ in dist.support:
        key = dist.project(outcome, gcols)
        val = dist.project(outcome, tcols)
        if seen.setdefault(key, val) != val:
            return False
    return True


def is_independent(dist: JointDistribution, a: Iterable[str], b: Iterable[str]) -> bool:
    """True iff the joint marginal on ``a`` and ``b`` factorises exactly."""
    a, b = _as_names(a), _as_names(b)
    acols, bcols = dist.positions(a), dist.positions(b)
    if set(acols) & set(bcols):
        raise InputError(f"independence test needs disjoint sets, got {a} and {b}")
    pa = marginal_pmf(dist, a)
    pb = marginal_pmf(dist, b)
    joint: dict[tuple[Outcome, Outcome], Fraction] = defaultdict(Fraction)
    for outcome, p in dist.support:
        joint[(dist.project(outcome, acols), dist.project(outcome, bcols))] += p
    # a product of positive marginals has full rectangular support
    if len(joint) != len(pa) * len(pb):
        return False
    return all(p == pa[x] * pb[y] for (x, y), p in joint.items())


def is_mutually_independent(dist: JointDistribution, names: Iterable[str]) -> bool:
    """Exact mutual independence: every sub-tuple's joint equals the product of its singles."""
    names = _as_names(names)
    singles = {n: marginal_pmf(dist, [n]) for n in names}
    for r in range(2, len(names) + 1):
        for group in combinations(names, r):
            cols = dist.positions(group)
            ordered = tuple(dist.variables[c] for c in cols)
            joint = marginal_pmf(dist, ordered)
            size = math.prod(len(singles[n]) for n in ordered)
            if len(joint) != size:
                return False
            for outcome, p in joint.items():
                if p != math.prod(singles[n][(s,)] for n, s in zip(ordered, outcome)):
                    return False
    return True


# ---------------------------------------------------------------------------
# entropies in bits


def _log2(p: Fraction) -> float:
    return math.log2(p.numerator) - math.log2(p.denominator)


def entropy_of_pmf(probs: Iterable[Fraction]) -> float:
    h = -math.fsum(float(p) * _log2(p) for p in probs if p)
    return h + 0.0  # normalise -0.0


def entropy(dist: JointDistribution, names: Iterable[str] = ()) -> float:
    """Shannon entropy in bits of the marginal on ``names``.

    The empty set has entropy 0 by convention.
    """
    return entropy_of_pmf(marginal_pmf(dist, names).values())


def conditional_entropy(dist: JointDistribution, names: Iterable[str], given: Iterable[str]) -> float:
    """H(names | given) in bits; exactly 0.0 whenever the structural test says so."""
    names, given = _as_names(names), _as_names(given)
    if is_deterministic(dist, names, given):
        return 0.0
    return entropy(dist, names + given) - entropy(dist, given)


def mutual_info(dist: JointDistribution, a: Iterable[str], b: Iterable[str]) -> float:
    """I(a;b) = H(a) + H(b) - H(a ∪ b) in bits.  Overlapping sets are allowed."""
    a, b = _as_names(a), _as_names(b)
    cols_a, cols_b = set(dist.positions(a)), set(dist.positions(b))
    if not (cols_a & cols_b) and is_independent(dist, a, b):
        return 0.0
    return entropy(dist, a) + entropy(dist, b) - entropy(dist, a + b)


def all_subset_entropies(dist: JointDistribution) -> dict[tuple[str, ...], float]:
    out = {}
    for r in range(1, len(dist.variables) + 1):
        for group in combinations(dist.variables, r):
            out[group] = entropy(dist, group)
    return out


# ---------------------------------------------------------------------------
# JSON


def format_probability(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def to_json(dist: JointDistribution) -> dict:
    return {
        "variables": list(dist.variables),
        "pmf": [{"outcome": [str(s) for s in o], "p": format_probability(p)} for o, p in dist.support],
    }


def from_json(doc: Mapping[str, Any]) -> JointDistribution:
    """Parse the ``{"variables": [...], "pmf": [{"outcome": [...], "p": "1/4"}]}`` format."""
    try:
        variables = doc["variables"]
        rows = doc["pmf"]
    except (KeyError, TypeError) as exc:
        raise InputError("distribution JSON needs 'variables' and 'pmf'") from exc
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise InputError("'variables' must be a list of strings")
    if not isinstance(rows, list):
        raise InputError("'pmf' must be a list")
    pairs = []
    for row in rows:
        if not isinstance(row, Mapping) or "outcome" not in row or "p" not in row:
            raise InputError(f"bad pmf row {row!r}")
        outcome = row["outcome"]
        if not isinstance(outcome, list) or len(outcome) != len(variables):
            raise InputError(f"outcome {outcome!r} does not match variables {variables}")
        pairs.append((tuple(str(s) for s in outcome), row["p"]))
    if len({o for o, _ in pairs}) != len(pairs):
        raise InputError("duplicate outcome rows in pmf")
    alphabets = doc.get("alphabets")
    return JointDistribution.from_pmf(variables, pairs, alphabets)


def load(path: str | Path) -> JointDistribution:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read distribution file {path}: {exc}") from exc
    return from_json(doc)


def dump(dist: JointDistribution, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_json(dist), indent=1) + "\n")
