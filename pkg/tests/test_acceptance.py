"""The eight acceptance criteria at their stated tolerances.

Each test records a one-line verdict that the terminal summary prints.
"""

from fractions import Fraction
from itertools import combinations

from conftest import ACCEPTANCE
from pidlat import dist as dc
from pidlat.canonical import build_joint
from pidlat.constructions import (
    impossibility_witness,
    load_fixture,
    sid_on_xor,
    witness_hat,
    witness_tilde,
    xor_paradox_report,
)
from pidlat.dist import JointDistribution
from pidlat.gk import gk_common_info
from pidlat.lattice import AtomTable, enumerate_antichains
from pidlat.sid import (
    CROSS_SCALE_EQUATIONS,
    FULL3,
    LATTICE1,
    LATTICE2,
    augmented_system,
    check_sid_axioms,
    cross_scale_check,
    sid_closed_form,
    sid_decompose,
    sid_linear_solve,
)

import oracles


NAMES = ["S1", "S2", "S3"]


def verdict(number: int, name: str, checks: dict[str, bool], detail: str = "") -> None:
    failed = [k for k, ok in checks.items() if not ok]
    ok = not failed
    text = detail if ok else f"failed: {', '.join(failed)}" + (f"; {detail}" if detail else "")
    ACCEPTANCE.append((number, name, ok, text))
    assert ok, text


def random_dist(r, sizes, **kw) -> JointDistribution:
    return JointDistribution.from_pmf(NAMES, oracles.random_pmf(r, sizes, **kw))


def test_criterion_1_xor_paradox():
    rep = xor_paradox_report()
    checks = {
        "I(T;S)=2": abs(rep.mi_total - 2.0) <= 1e-9,
        "atoms exact": rep.forced_atoms.nonzero() == {"{1}{23}": 1.0, "{2}{13}": 1.0, "{3}{12}": 1.0},
        "down-set sum=3": abs(rep.downset_sum - 3.0) <= 1e-9,
        "violation": rep.violation,
    }
    verdict(1, "XOR paradox", checks, f"I={rep.mi_total:.9f} sum={rep.downset_sum:.9f}")


def test_criterion_2_witness_pair():
    rep = impossibility_witness()
    hat_table, tilde_table = load_fixture("hat_table"), load_fixture("tilde_table")
    hat_joint, tilde_joint = build_joint(witness_hat()), build_joint(witness_tilde())
    checks = {
        "atoms identical on 18 antichains": len(rep.atom_table_hat.values) == 18 and rep.atoms_equal,
        "mi_hat=3": abs(rep.mi_hat - 3.0) <= 1e-9,
        "mi_tilde=2": abs(rep.mi_tilde - 2.0) <= 1e-9,
        "hat == hat_table fixture (64 x 1/64)": len(hat_table) == 64
        and {p for _, p in hat_table.support} == {Fraction(1, 64)}
        and hat_joint == hat_table,
        "tilde == tilde_table fixture (32 x 1/32)": len(tilde_table) == 32
        and {p for _, p in tilde_table.support} == {Fraction(1, 32)}
        and tilde_joint == tilde_table,
    }
    missing = len(set(tilde_table.support) - set(tilde_joint.support))
    verdict(2, "witness pair", checks, f"tilde_table rows not produced by the tilde construction: {missing}/32")


def test_criterion_3_sid_on_xor():
    res = sid_on_xor()
    vec = list(res.atoms.as_vector())
    checks = {
        "atoms": all(abs(a - b) <= 1e-9 for a, b in zip(vec, [0, 0, 0, 0, 1, 1, 1, 0, 0, 0])),
        "H(S) reconstruction=2": abs(res.reconstructed - 2.0) <= 1e-9 and abs(res.entropy_total - 2.0) <= 1e-9,
        "equal pair-to-single atoms": res.synergy_spread <= 1e-12,
    }
    verdict(3, "SID on XOR", checks, f"atoms={[round(float(v), 9) for v in vec]}")


def test_criterion_4_linear_solve_uniqueness():
    r = oracles.rng(4)
    _, det = augmented_system()
    worst = 0.0
    for k in range(1000):
        d = random_dist(r, [2, 2, 2] if k % 2 == 0 else [3, 2, 2])
        top = min(dc.mutual_info(d, [a], [b]) for a, b in combinations(NAMES, 2))
        red = r.uniform(0.0, max(top, 0.0))
        closed = sid_closed_form(d, red).as_vector()
        solved = sid_linear_solve(d, red).as_vector()
        worst = max(worst, float(max(abs(closed - solved))))
    checks = {"nonsingular": det != 0, "solve == closed form": worst <= 1e-9}
    verdict(4, "uniqueness", checks, f"det={det} max residual={worst:.2e} over 1000")


def test_criterion_5_axiom_suite():
    r = oracles.rng(5)
    failures: dict[str, int] = {}
    for _ in range(500):
        d = random_dist(r, [r.randint(2, 3) for _ in range(3)])
        report = check_sid_axioms(d, sid_decompose(d))
        for name in report.failed():
            failures[name] = failures.get(name, 0) + 1
    checks = {"zero failures": not failures}
    verdict(5, "axiom property suite", checks, f"failures={failures or 0} over 500")


def test_criterion_6_gk_oracle():
    r = oracles.rng(6)
    shapes = [[(0,), (1,), (2,)], [(0,), (1,)], [(0, 1), (2,)], [(0,), (1, 2)]]
    mismatches = 0
    for _ in range(200):
        d = random_dist(r, [r.randint(2, 3) for _ in range(3)], max_support=8)
        cols = r.choice(shapes)
        bits, part = gk_common_info(d, [[NAMES[c] for c in g] for g in cols])
        _, ref = oracles.gk_brute(d.pmf(), cols)
        same_partition = frozenset(frozenset(b) for b in part.blocks) == ref
        ref_masses = sorted(sum((d.pmf()[o] for o in b), Fraction(0)) for b in ref)
        same_value = sorted(part.masses) == ref_masses and bits == dc.entropy_of_pmf(ref_masses)
        mismatches += not (same_partition and same_value)
    verdict(6, "Gacs-Korner oracle", {"exact agreement": mismatches == 0}, f"mismatches={mismatches} over 200")


def test_criterion_7_lattice_counts():
    checks = {}
    for n, count in ((1, 1), (2, 4), (3, 18), (4, 166)):
        got = {frozenset(frozenset(g) for g in a.groups()) for a in enumerate_antichains(n)}
        checks[f"n={n}"] = len(got) == count and got == oracles.antichains(n)
    half = enumerate_antichains(3, half=True)
    checks["n=3 half"] = len(half) == 10
    verdict(7, "lattice counts", checks, "1, 4, 18, 166; half 10")


def test_criterion_8_cross_scale():
    tables = {
        "pi1": AtomTable.from_strings(LATTICE1, {"{1}": 1.0}),
        "pi12": AtomTable.from_strings(LATTICE2, {"{1}": 1.0, "{2}": 1.0}),
        "pi123": AtomTable.from_strings(FULL3, {"{1}{23}": 1.0, "{2}{13}": 1.0, "{3}{12}": 1.0}),
    }
    checks = {"forced assignment": cross_scale_check(**tables).passed}
    incidence = {
        (t, a): {name for name, lhs, rhs in CROSS_SCALE_EQUATIONS if (t, a) in lhs + rhs}
        for name, lhs, rhs in CROSS_SCALE_EQUATIONS
        for t, a in lhs + rhs
    }
    wrong = []
    count = 0
    for key, table in tables.items():
        for alpha in table.lattice:
            for delta in (0.5, -0.5):
                count += 1
                bumped = dict(tables, **{key: table.with_value(alpha, table[alpha] + delta)})
                failed = set(cross_scale_check(**bumped).failed())
                if failed != incidence.get((key, str(alpha)), set()):
                    wrong.append(f"{key}{alpha}{delta:+}")
    checks["perturbations fail exactly their equations"] = not wrong
    verdict(8, "cross-scale regression", checks, f"{count} perturbations, {len(wrong)} wrong")
