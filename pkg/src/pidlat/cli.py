"""``pidlat`` command line.

Every subcommand prints either a plain table or a JSON envelope
``{"command", "inputs", "results", "status"}``.  Exit codes: 0 when the
computation ran and its checks passed, 1 when a verification failed, 2 on bad
input or an unsupported size.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from itertools import combinations
from typing import Any, Callable, Sequence

from . import dist as dc
from .canonical import assignment, canonical_atoms, check_model, load_spec
from .constructions import build_joint, impossibility_witness, load_fixture, witness_hat, witness_tilde, xor_paradox_report
from .errors import InputError, PidlatError
from .gk import gk_common_info
from .lattice import MAX_SOURCES, enumerate_antichains, render_json
from .sid import check_sid_axioms, sid_decompose

OK, CHECK_FAILED, INPUT_ERROR = 0, 1, 2
STATUS = {OK: "ok", CHECK_FAILED: "check-failed", INPUT_ERROR: "input-error"}
DECIMALS = 9


def fixed(value: Any) -> Any:
    """Round every float in a JSON-ready structure to the fixed output precision."""
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return round(value, DECIMALS) + 0.0
    if isinstance(value, dict):
        return {k: fixed(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [fixed(v) for v in value]
    return value


def _bits(x: float) -> str:
    return f"{x:.{DECIMALS}f}"


class Outcome:
    """What a command hands back: the JSON payload, table lines and exit code."""

    def __init__(self, results: dict, lines: list[str], code: int = OK) -> None:
        self.results = results
        self.lines = lines
        self.code = code


# ---------------------------------------------------------------------------
# commands


def cmd_lattice(args: argparse.Namespace) -> Outcome:
    lattice = enumerate_antichains(args.sources, half=args.half)
    names = [str(a) for a in lattice]
    kind = "half lattice" if args.half else "lattice"
    header = f"# {len(names)} antichains, {kind} over {args.sources} sources"
    return Outcome({"count": len(names), "antichains": names, "groups": render_json(lattice)}, [header, *names])


def cmd_measures(args: argparse.Namespace) -> Outcome:
    d = dc.load(args.file)
    entropies = {",".join(k): v for k, v in dc.all_subset_entropies(d).items() if k}
    pairs = {
        f"{a};{b}": dc.mutual_info(d, [a], [b]) for a, b in combinations(d.variables, 2)
    }
    lines = [f"H({k}) = {_bits(v)}" for k, v in entropies.items()]
    lines += [f"I({k}) = {_bits(v)}" for k, v in pairs.items()]
    return Outcome({"entropy": entropies, "mutual_info": pairs}, lines)


def cmd_sid(args: argparse.Namespace) -> Outcome:
    d = dc.load(args.file)
    atoms = sid_decompose(d, red=args.red)
    report = check_sid_axioms(d, atoms)
    lines = [f"{a:<12} {_bits(v)}" for a, v in atoms.to_json()["atoms"].items()]
    lines.append(f"red source: {atoms.red_source}")
    for c in report.checks:
        lines.append(f"{'PASS' if c.passed else 'FAIL'}  {c.name}")
    results = {**atoms.to_json(), "variables": list(atoms.variables), "report": report.to_json()}
    return Outcome(results, lines, OK if report.passed else CHECK_FAILED)


def _parse_groups(raw: Sequence[str] | None) -> list[list[str]]:
    groups = [[v.strip() for v in g.split(",") if v.strip()] for g in raw or ()]
    if len(groups) < 2 or not all(groups):
        raise InputError("give at least two nonempty --group options, e.g. --group S1 --group S2,S3")
    return groups


def cmd_gk(args: argparse.Namespace) -> Outcome:
    d = dc.load(args.file)
    groups = _parse_groups(args.group)
    bits, part = gk_common_info(d, groups)
    blocks = [
        {"outcomes": block, "p": dc.format_probability(mass)} for block, mass in zip(part.to_json(), part.masses)
    ]
    lines = [f"common information = {_bits(bits)}", f"{len(blocks)} blocks"]
    for k, b in enumerate(blocks):
        lines.append(f"  block {k}: p={b['p']}  " + " ".join("(" + ",".join(o) + ")" for o in b["outcomes"]))
    return Outcome({"groups": groups, "bits": bits, "partition": blocks}, lines)


def cmd_atoms(args: argparse.Namespace) -> Outcome:
    spec = load_spec(args.spec)
    report = check_model(spec)
    results: dict[str, Any] = {"model": report.to_json()}
    lines = [f"admitted: {str(report.admitted).lower()}"]
    if not report.admitted:
        lines += [f"  target latent {n} is determined by the target but not part of it" for n in report.closure_violations]
        lines += [f"  source {n} has dependent components" for n in report.dependent_sources]
        lines += [f"  {c.latent} is partly informative about sources {list(c.group)}" for c in report.violating]
        return Outcome(results, lines, CHECK_FAILED)
    atoms = canonical_atoms(spec, report)
    results["atoms"] = atoms.to_json()
    results["assignment"] = assignment(spec)
    lines += [f"  {n} -> {a}" for n, a in results["assignment"].items()]
    lines += [f"{a:<16} {_bits(v)}" for a, v in atoms.to_json().items()]
    return Outcome(results, lines)


def _fixture_matches() -> dict[str, bool]:
    return {
        "hat_table": build_joint(witness_hat()) == load_fixture("hat_table"),
        "tilde_table": build_joint(witness_tilde()) == load_fixture("tilde_table"),
    }


def cmd_reproduce(args: argparse.Namespace) -> Outcome:
    if args.which == "xor-paradox":
        rep = xor_paradox_report()
        lines = [
            f"I(T;S)       = {_bits(rep.mi_total)}",
            f"down-set sum = {_bits(rep.downset_sum)}",
            "nonzero atoms: " + ", ".join(f"{a}={_bits(v)}" for a, v in rep.forced_atoms.nonzero().items()),
            f"violation: {str(rep.violation).lower()}",
        ]
        return Outcome(rep.to_json(), lines, OK if rep.violation else CHECK_FAILED)
    rep = impossibility_witness(args.extra_sources)
    tables = _fixture_matches()
    lines = [
        f"I(S;T) hat   = {_bits(rep.mi_hat)}",
        f"I(S;T) tilde = {_bits(rep.mi_tilde)}",
        "nonzero atoms (hat): " + ", ".join(f"{a}={_bits(v)}" for a, v in rep.atom_table_hat.nonzero().items()),
        f"atoms equal: {str(rep.atoms_equal).lower()}",
        f"mi differs: {str(rep.mi_differs).lower()}",
        f"theorem reproduced: {str(rep.theorem_reproduced).lower()}",
        *(f"construction matches {k}: {str(v).lower()}" for k, v in tables.items()),
    ]
    results = {**rep.to_json(), "fixture_match": tables}
    return Outcome(results, lines, OK if rep.theorem_reproduced else CHECK_FAILED)


# ---------------------------------------------------------------------------
# entry point


def _source_count(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pidlat", description=__doc__.splitlines()[0])
    parser.add_argument("--log-level", default="WARNING", help="logging level for diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable[[argparse.Namespace], Outcome], help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=("table", "json"), default="table")
        p.set_defaults(func=fn)
        return p

    p = add("lattice", cmd_lattice, "list the antichains over n sources")
    p.add_argument("--sources", type=_source_count, required=True, help=f"number of sources, 1..{MAX_SOURCES}")
    p.add_argument("--half", action="store_true", help="keep only antichains containing a singleton")

    p = add("measures", cmd_measures, "subset entropies and pairwise mutual information")
    p.add_argument("file")

    p = add("sid", cmd_sid, "three-variable system decomposition with axiom checks")
    p.add_argument("file")
    p.add_argument("--red", type=float, help="override the Gács-Körner redundancy (bits)")

    p = add("gk", cmd_gk, "Gács-Körner common information of variable groups")
    p.add_argument("file")
    p.add_argument("--group", action="append", help="comma-separated variable names; repeat per group")

    p = add("atoms", cmd_atoms, "model check and canonical atoms of a latent spec")
    p.add_argument("spec")

    p = add("reproduce", cmd_reproduce, "rerun a headline construction")
    p.add_argument("which", choices=("xor-paradox", "witness-pair"))
    p.add_argument("--extra-sources", type=int, default=0, help="adjoin independent sources (witness-pair)")
    return parser


def _inputs(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "command", "format", "log_level")}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        out = args.func(args)
    except PidlatError as exc:
        out = Outcome({"error": str(exc)}, [], INPUT_ERROR)
        print(f"pidlat {args.command}: {exc}", file=sys.stderr)
    if args.format == "json":
        envelope = {
            "command": args.command,
            "inputs": _inputs(args),
            "results": fixed(out.results),
            "status": STATUS[out.code],
        }
        print(json.dumps(envelope, indent=2))
    else:
        for line in out.lines:
            print(line)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
