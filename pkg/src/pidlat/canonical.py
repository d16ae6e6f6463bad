"""Antichain-realizable latent systems and their canonical atoms.

A :class:`LatentSpec` declares independent fair bits and XOR combinations of
earlier bits, then names which latents make up each source and the target.
When the system passes the three model conditions, every target latent is
classified by the antichain of its minimal recovering source groups, and the
atom of an antichain is the entropy of the latents assigned to it.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Any, Mapping, Sequence

from .dist import JointDistribution, entropy, is_deterministic, is_independent, is_mutually_independent
from .errors import CapabilityError, InputError
from .lattice import Antichain, AtomTable, enumerate_antichains, indices_of

log = logging.getLogger(__name__)

MAX_FREE_BITS = 20


@dataclass(frozen=True)
class Latent:
    name: str
    kind: str  # "free" or "xor"
    of: tuple[str, ...] = ()


@dataclass(frozen=True)
class LatentSpec:
    """GF(2) latent system with source and target index sets."""

    latents: tuple[Latent, ...]
    sources: tuple[tuple[str, tuple[str, ...]], ...]
    target: tuple[str, ...]

    def __post_init__(self) -> None:
        defined: set[str] = set()
        for lat in self.latents:
            if lat.name in defined:
                raise InputError(f"latent {lat.name!r} defined twice")
            if lat.kind == "free":
                if lat.of:
                    raise InputError(f"free latent {lat.name!r} takes no operands")
            elif lat.kind == "xor":
                if not lat.of:
                    raise InputError(f"xor latent {lat.name!r} needs operands")
                undefined = [o for o in lat.of if o not in defined]
                if undefined:
                    raise InputError(f"xor latent {lat.name!r} references undefined or later latents {undefined}")
            else:
                raise InputError(f"latent kind must be 'free' or 'xor', got {lat.kind!r}")
            defined.add(lat.name)
        if not self.sources:
            raise InputError("at least one source is required")
        source_names = [s for s, _ in self.sources]
        if len(set(source_names)) != len(source_names):
            raise InputError("duplicate source names")
        if "T" in source_names:
            raise InputError("'T' is reserved for the target")
        for name, members in (*self.sources, ("target", self.target)):
            if not members:
                raise InputError(f"index set of {name!r} is empty")
            unknown = [m for m in members if m not in defined]
            if unknown:
                raise InputError(f"{name!r} references undefined latents {unknown}")
            if len(set(members)) != len(members):
                raise InputError(f"{name!r} lists a latent twice")
        covered = {m for _, members in self.sources for m in members}
        if not set(self.target) <= covered:
            raise InputError(f"target latents {sorted(set(self.target) - covered)} belong to no source")

    @property
    def n_sources(self) -> int:
        return len(self.sources)

    @property
    def source_names(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.sources)

    @property
    def latent_names(self) -> tuple[str, ...]:
        return tuple(lat.name for lat in self.latents)

    def members(self, mask: int) -> tuple[str, ...]:
        """Latents observed by the source group ``mask`` (bit ``i-1`` = source ``i``)."""
        out: dict[str, None] = {}
        for i in indices_of(mask):
            for m in self.sources[i - 1][1]:
                out[m] = None
        return tuple(out)

    @classmethod
    def from_json(cls, doc: Mapping[str, Any]) -> "LatentSpec":
        try:
            latents = tuple(
                Latent(str(d["name"]), str(d["kind"]), tuple(str(o) for o in d.get("of", ())))
                for d in doc["latents"]
            )
            sources = tuple((str(k), tuple(str(m) for m in v)) for k, v in doc["sources"].items())
            target = tuple(str(m) for m in doc["target"])
        except (KeyError, TypeError, AttributeError) as exc:
            raise InputError(f"malformed latent spec: {exc}") from exc
        return cls(latents, sources, target)

    def to_json(self) -> dict:
        return {
            "latents": [
                {"name": lat.name, "kind": lat.kind, **({"of": list(lat.of)} if lat.of else {})}
                for lat in self.latents
            ],
            "sources": {k: list(v) for k, v in self.sources},
            "target": list(self.target),
        }


def load_spec(path: str | Path) -> LatentSpec:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read latent spec {path}: {exc}") from exc
    return LatentSpec.from_json(doc)


def latent_joint(spec: LatentSpec) -> JointDistribution:
    """Exact uniform distribution over the free bits, with every latent as a variable."""
    free = [lat.name for lat in spec.latents if lat.kind == "free"]
    if len(free) > MAX_FREE_BITS:
        raise CapabilityError(f"{len(free)} free bits exceeds the cap of {MAX_FREE_BITS}")
    mass = Fraction(1, 2 ** len(free))
    rows = []
    for bits in product((0, 1), repeat=len(free)):
        value = dict(zip(free, bits))
        for lat in spec.latents:
            if lat.kind == "xor":
                acc = 0
                for o in lat.of:
                    acc ^= value[o]
                value[lat.name] = acc
        rows.append((tuple(value[n] for n in spec.latent_names), mass))
    return JointDistribution.from_pmf(spec.latent_names, rows, [(0, 1)] * len(spec.latents))


def build_joint(spec: LatentSpec) -> JointDistribution:
    """Joint of ``(S_1, ..., S_n, T)``; each value is the bit string of its latents in listed order."""
    lat = latent_joint(spec)
    cols = {n: k for k, n in enumerate(lat.variables)}
    groups = [*(members for _, members in spec.sources), spec.target]
    rows = []
    for outcome, p in lat.support:
        rows.append((tuple("".join(str(outcome[cols[m]]) for m in g) for g in groups), p))
    return JointDistribution.from_pmf((*spec.source_names, "T"), rows)


# ---------------------------------------------------------------------------
# model conditions


@dataclass(frozen=True)
class Classification:
    latent: str
    group: tuple[int, ...]
    status: str  # recoverable | independent | violating


@dataclass(frozen=True)
class ModelReport:
    """Outcome of the three model conditions, with per-item witnesses."""

    target_closure: tuple[tuple[str, bool], ...]  # (latent, passes)
    source_independence: tuple[tuple[str, bool], ...]  # (source, mutually independent)
    classifications: tuple[Classification, ...]

    @property
    def closure_violations(self) -> list[str]:
        return [n for n, ok in self.target_closure if not ok]

    @property
    def dependent_sources(self) -> list[str]:
        return [n for n, ok in self.source_independence if not ok]

    @property
    def violating(self) -> list[Classification]:
        return [c for c in self.classifications if c.status == "violating"]

    @property
    def admitted(self) -> bool:
        return not (self.closure_violations or self.dependent_sources or self.violating)

    def to_json(self) -> dict:
        return {
            "admitted": self.admitted,
            "condition_i": {"passed": not self.closure_violations, "violations": self.closure_violations},
            "condition_ii": {n: ok for n, ok in self.source_independence},
            "condition_iii": {
                "passed": not self.violating,
                "classes": [
                    {"latent": c.latent, "group": list(c.group), "status": c.status} for c in self.classifications
                ],
            },
        }


def classify(dist: JointDistribution, component: str, observed: Sequence[str]) -> str:
    """``recoverable`` if H(component|observed)=0, ``independent`` if I=0, else ``violating``."""
    if is_deterministic(dist, [component], observed):
        return "recoverable"
    # component is not among observed here, or it would be recoverable
    if not observed or is_independent(dist, [component], observed):
        return "independent"
    return "violating"


def check_model(spec: LatentSpec) -> ModelReport:
    dist = latent_joint(spec)
    target = set(spec.target)
    closure = tuple(
        (name, name in target or not is_deterministic(dist, [name], spec.target)) for name in spec.latent_names
    )
    independence = tuple((s, is_mutually_independent(dist, members)) for s, members in spec.sources)
    classes = []
    for name in spec.target:
        for mask in range(1 << spec.n_sources):
            classes.append(Classification(name, indices_of(mask), classify(dist, name, spec.members(mask))))
    return ModelReport(closure, independence, tuple(classes))


# ---------------------------------------------------------------------------
# recovering sets and atoms


def _require_target_component(spec: LatentSpec, dist: JointDistribution, name: str) -> None:
    if name not in spec.target:
        raise InputError(f"{name!r} is not a target latent")
    if is_deterministic(dist, [name], []):
        raise InputError(f"{name!r} is constant; recovering sets need positive entropy")


def recovering_sets(spec: LatentSpec, name: str, _dist: JointDistribution | None = None) -> frozenset[int]:
    """Bitmasks of every source group that determines latent ``name``."""
    dist = _dist or latent_joint(spec)
    _require_target_component(spec, dist, name)
    return frozenset(
        mask for mask in range(1 << spec.n_sources) if is_deterministic(dist, [name], spec.members(mask))
    )


def principal_antichain(spec: LatentSpec, name: str, _dist: JointDistribution | None = None) -> Antichain:
    """Minimal recovering groups of ``name``."""
    rec = recovering_sets(spec, name, _dist)
    minimal = [b for b in rec if not any(c != b and c & b == c for c in rec)]
    return Antichain(spec.n_sources, tuple(minimal))


class ModelNotAdmitted(InputError):
    def __init__(self, report: ModelReport) -> None:
        super().__init__("latent system does not admit an antichain-realizable atom model")
        self.report = report


def canonical_atoms(spec: LatentSpec, report: ModelReport | None = None) -> AtomTable:
    """Atom of each antichain = entropy of the target latents whose principal antichain it is."""
    report = report or check_model(spec)
    if not report.admitted:
        raise ModelNotAdmitted(report)
    dist = latent_joint(spec)
    lattice = enumerate_antichains(spec.n_sources)
    assigned: dict[Antichain, list[str]] = {}
    for name in spec.target:
        if is_deterministic(dist, [name], []):
            log.warning("target latent %s is constant and carries no atom", name)
            continue
        assigned.setdefault(principal_antichain(spec, name, dist), []).append(name)
    values = {a: 0.0 for a in lattice}
    for alpha, names in assigned.items():
        values[alpha] = entropy(dist, names)
    return AtomTable(lattice, values)


def assignment(spec: LatentSpec) -> dict[str, str]:
    """Latent name -> principal antichain text, for reporting."""
    dist = latent_joint(spec)
    return {
        n: str(principal_antichain(spec, n, dist)) for n in spec.target if not is_deterministic(dist, [n], [])
    }

