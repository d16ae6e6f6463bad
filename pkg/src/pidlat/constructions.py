"""Named systems and the two headline reproduction reports.

``xor_triple`` is the three-source XOR counterexample; ``witness_hat`` and
``witness_tilde`` are the pair of nine-latent systems with identical canonical
atoms but different mutual information.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

from . import dist as dc
from .canonical import Latent, LatentSpec, build_joint, canonical_atoms, check_model
from .dist import BITS_TOL, JointDistribution
from .gk import red3
from .lattice import AtomTable, enumerate_antichains, wesp_sum
from .sid import Report, SidAtoms, check_sid_axioms, sid_decompose

FIXTURES = ("hat_table", "tilde_table", "xor_triple")


def _free(*names: str) -> list[Latent]:
    return [Latent(n, "free") for n in names]


def _xor(name: str, *of: str) -> Latent:
    return Latent(name, "xor", of)


def xor_triple() -> LatentSpec:
    """S1, S2 fair and independent, S3 = S1 xor S2, target = all three."""
    return LatentSpec(
        (*_free("x1", "x2"), _xor("x3", "x1", "x2")),
        (("S1", ("x1",)), ("S2", ("x2",)), ("S3", ("x3",))),
        ("x1", "x2", "x3"),
    )


_WITNESS_SOURCES = (("S1", ("x1", "x4", "x7")), ("S2", ("x2", "x5", "x8")), ("S3", ("x3", "x6", "x9")))
_WITNESS_TARGET = ("x1", "x5", "x9")


def witness_hat() -> LatentSpec:
    latents = (
        *_free("x1", "x2"), _xor("x3", "x1", "x2"),
        *_free("x4", "x5"), _xor("x6", "x4", "x5"),
        *_free("x7", "x8"), _xor("x9", "x7", "x8"),
    )
    return LatentSpec(latents, _WITNESS_SOURCES, _WITNESS_TARGET)


def witness_tilde() -> LatentSpec:
    # x9 = x1^x5 and x8 = x7^x1^x5, so x9 = x7^x8 still holds
    latents = (
        *_free("x1", "x2"), _xor("x3", "x1", "x2"),
        *_free("x4", "x5"), _xor("x6", "x4", "x5"),
        *_free("x7"), _xor("x8", "x7", "x1", "x5"), _xor("x9", "x1", "x5"),
    )
    return LatentSpec(latents, _WITNESS_SOURCES, _WITNESS_TARGET)


def with_independent_sources(spec: LatentSpec, extra: int = 1) -> LatentSpec:
    """Adjoin ``extra`` sources, each a fresh fair bit independent of everything else."""
    latents = list(spec.latents)
    sources = list(spec.sources)
    for k in range(extra):
        name = f"z{k + 1}"
        latents.append(Latent(name, "free"))
        sources.append((f"S{spec.n_sources + k + 1}", (name,)))
    return LatentSpec(tuple(latents), tuple(sources), spec.target)


def load_fixture(name: str) -> JointDistribution:
    """One of the vendored distribution tables (``hat_table``, ``tilde_table``, ``xor_triple``)."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURES}")
    text = resources.files("pidlat").joinpath("fixtures", f"{name}.json").read_text()
    return dc.from_json(json.loads(text))


def _io_names(joint: JointDistribution) -> tuple[list[str], list[str]]:
    return [v for v in joint.variables if v != "T"], ["T"]


@dataclass(frozen=True)
class ParadoxReport:
    mi_total: float
    downset_sum: float
    forced_atoms: AtomTable

    @property
    def violation(self) -> bool:
        return self.downset_sum > self.mi_total + BITS_TOL

    def to_json(self) -> dict:
        return {
            "mi_total": self.mi_total,
            "downset_sum": self.downset_sum,
            "forced_atoms": self.forced_atoms.nonzero(),
            "violation": self.violation,
        }


def xor_paradox_report() -> ParadoxReport:
    """Canonical atoms of the XOR triple summed over the whole lattice versus I(T;S)."""
    spec = xor_triple()
    atoms = canonical_atoms(spec)
    joint = build_joint(spec)
    sources, target = _io_names(joint)
    lattice = enumerate_antichains(spec.n_sources)
    return ParadoxReport(
        mi_total=dc.mutual_info(joint, sources, target),
        downset_sum=wesp_sum(atoms, lattice, range(1, spec.n_sources + 1)),
        forced_atoms=atoms,
    )


@dataclass(frozen=True)
class WitnessReport:
    atom_table_hat: AtomTable
    atom_table_tilde: AtomTable
    mi_hat: float
    mi_tilde: float
    admitted_hat: bool
    admitted_tilde: bool

    @property
    def atoms_equal(self) -> bool:
        return self.atom_table_hat.values == self.atom_table_tilde.values

    @property
    def mi_differs(self) -> bool:
        return abs(self.mi_hat - self.mi_tilde) > BITS_TOL

    @property
    def theorem_reproduced(self) -> bool:
        return self.admitted_hat and self.admitted_tilde and self.atoms_equal and self.mi_differs

    def to_json(self) -> dict:
        return {
            "atom_table_hat": self.atom_table_hat.to_json(),
            "atom_table_tilde": self.atom_table_tilde.to_json(),
            "mi_hat": self.mi_hat,
            "mi_tilde": self.mi_tilde,
            "atoms_equal": self.atoms_equal,
            "mi_differs": self.mi_differs,
            "theorem_reproduced": self.theorem_reproduced,
        }


def impossibility_witness(extra_sources: int = 0) -> WitnessReport:
    """Run both witness systems through the model check, canonical atoms and I(S;T)."""
    tables, mis, admitted = [], [], []
    for spec in (witness_hat(), witness_tilde()):
        if extra_sources:
            spec = with_independent_sources(spec, extra_sources)
        report = check_model(spec)
        admitted.append(report.admitted)
        lattice = enumerate_antichains(spec.n_sources)
        tables.append(canonical_atoms(spec, report) if report.admitted else AtomTable.zeros(lattice))
        joint = build_joint(spec)
        mis.append(dc.mutual_info(joint, *_io_names(joint)))
    return WitnessReport(tables[0], tables[1], mis[0], mis[1], admitted[0], admitted[1])


@dataclass(frozen=True)
class XorSidResult:
    atoms: SidAtoms
    axioms: Report
    red: float
    entropy_total: float
    reconstructed: float
    synergy_spread: float

    def to_json(self) -> dict:
        return {
            **self.atoms.to_json(),
            "red": self.red,
            "H(S)": self.entropy_total,
            "sum_minus_linked_atom": self.reconstructed,
            "synergy_spread": self.synergy_spread,
            "axioms": self.axioms.to_json(),
        }


def sid_on_xor() -> XorSidResult:
    """System decomposition of the XOR triple's sources and the H(S) reconstruction."""
    joint = build_joint(xor_triple())
    sources = dc.marginalize(joint, ["S1", "S2", "S3"])
    atoms = sid_decompose(sources)
    syn = [atoms["{1}{23}"], atoms["{2}{13}"], atoms["{3}{12}"]]
    return XorSidResult(
        atoms=atoms,
        axioms=check_sid_axioms(sources, atoms),
        red=red3(sources),
        entropy_total=dc.entropy(sources, sources.variables),
        reconstructed=math.fsum(atoms.values.values()) - atoms["{3}{12}"],
        synergy_spread=max(syn) - min(syn),
    )
