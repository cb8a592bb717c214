"""Reports as plain dictionaries with every rational written as a string."""

from __future__ import annotations

import json
from contextlib import nullcontext
from fractions import Fraction

from . import oracles
from .faithful import (
    Divisor,
    FaithfulnessReport,
    TropicalCurve,
    Tropicalization,
    divisor_is_tropically_principal,
    lift_values,
    place_marked_points,
    solve_slope_field,
    tropicalize,
)
from .instance import Instance, instance_to_dict
from .moebius import VerificationReport, log_q, normalize, verify_good_domain
from .skeleton import build_skeleton, check_mu_cycle_isometry, mu, two_summand_decomposition, vadd, vscale
from .valued_field import working_precision


class VerificationFailure(RuntimeError):
    def __init__(self, report: VerificationReport, message: str):
        super().__init__(message)
        self.report = report


def q(x) -> str:
    return str(Fraction(x))


def qv(xs) -> list[str]:
    return [q(x) for x in xs]


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _checks(rep: VerificationReport) -> list[dict]:
    return [{"name": n, "passed": p, "detail": d} for n, p, d in rep.checks]


def _precision(inst: Instance):
    p = inst.precision
    return nullcontext() if p is None else working_precision(p)


def _classify(inst: Instance):
    S = inst.schottky
    rep = verify_good_domain(S)
    if not rep.ok:
        raise VerificationFailure(
            rep, "not a good fundamental domain: "
            + "; ".join(f"{n} ({d})" if d else n for n, _, d in rep.failures()))
    S = normalize(S)
    Q = log_q(S)
    return S, Q, build_skeleton(S, Q)


def _classification(skel) -> dict:
    return {"kind": skel.kind.value, "L1": q(skel.L1), "L2": q(skel.L2), "ell": q(skel.ell)}


def _period(Q) -> list[list[str]]:
    return [[q(Q[i, j]) for j in (1, 2)] for i in (1, 2)]


def classify_report(inst: Instance) -> dict:
    with _precision(inst):
        S, Q, skel = _classify(inst)
    return {
        "command": "classify",
        "instance": instance_to_dict(inst),
        "classification": _classification(skel),
        "period_matrix": _period(Q),
    }


def curve_dict(tc: TropicalCurve) -> dict:
    return {
        "dim": tc.dim,
        "vertices": {k: qv(v) for k, v in sorted(tc.vertices.items())},
        "segments": [{"name": s.name, "tail": s.tail, "head": s.head, "kind": s.kind,
                      "slope": list(s.slope), "length": q(s.length)} for s in tc.segments],
        "rays": [{"label": r.label, "base": r.base, "direction": list(r.direction)}
                 for r in tc.rays],
    }


def faithfulness_dict(rep: FaithfulnessReport) -> dict:
    return {
        "verdict": rep.verdict,
        "skeleton_faithful": rep.skeleton_faithful,
        "extended_faithful": rep.extended_faithful,
        "expansion_factors": dict(sorted(rep.expansion.items())),
        "crossings": [{"pieces": [c.first, c.second], "kind": c.kind,
                       "witness": qv(c.witness)} for c in rep.crossings],
        "rays_primitive": dict(sorted(rep.ray_primitive.items())),
        "balanced": not rep.unbalanced,
    }


def tropicalize_report(inst: Instance, dim: int = 2) -> tuple[dict, Tropicalization]:
    with _precision(inst):
        res = tropicalize(inst.schottky, inst.join_edges)
    skel, msk = res.skeleton, res.marked
    marks = []
    for label, p in msk.marks:
        arc = next((a for a in (skel.cycle_arc(i, p) for i in (1, 2)) if a is not None), None)
        marks.append({"label": label, "position": str(p),
                      "arc": None if arc is None else q(arc),
                      "mu": qv(mu(skel, p).rep)})
    coords = "fgh"[:dim]
    curve = res.curve2 if dim == 2 else res.curve3
    faith = res.report2 if dim == 2 else res.report3
    out = {
        "command": "tropicalize",
        "instance": instance_to_dict(inst),
        "classification": _classification(skel),
        "period_matrix": _period(res.period_matrix),
        "marked_points": marks,
        "divisors": {k: str(res.divisors[k]) for k in coords},
        "slopes": {k: {n: q(m) for n, m in res.solutions[k].as_dict().items()} for k in coords},
        "curve": curve_dict(curve),
        "faithfulness": faithfulness_dict(faith),
        "warnings": res.warnings,
    }
    if dim == 3:
        out["crossings_2d"] = [
            {"pieces": [c.first, c.second], "witness": qv(c.witness),
             "third_coordinates": qv(lift_values(res.curve3, c))}
            for c in res.report2.crossings]
    return out, res


def verify_report(inst: Instance, words: int | None = None, grid=None) -> dict:
    """Run every oracle; failures are report content, not exceptions."""
    words = inst.words if words is None else int(words)
    step = inst.grid if grid is None else Fraction(grid)
    S = inst.schottky
    checks = VerificationReport()
    with _precision(inst):
        dom = verify_good_domain(S)
        for c in dom.checks:
            checks.add(f"domain: {c[0]}", c[1], c[2])
        try:
            # the corrupted case cannot be normalized; check it as given
            Sn = normalize(S) if dom.ok else S
            Q = log_q(Sn)
            for c in oracles.period_tree_consistency(Sn, Q).checks:
                checks.add(f"period/tree: {c[0]}", c[1], c[2])
        except Exception as exc:  # report, never raise
            checks.add("period/tree", False, f"{type(exc).__name__}: {exc}")
        if dom.ok:
            try:
                for c in oracles.u_truncation_agreement(S, words).checks:
                    checks.add(c[0], c[1], c[2])
            except Exception as exc:
                checks.add("u truncation", False, f"{type(exc).__name__}: {exc}")
            try:
                _laws(inst, S, step, checks)
            except Exception as exc:
                checks.add("pipeline", False, f"{type(exc).__name__}: {exc}")
    return {
        "command": "verify",
        "instance": instance_to_dict(inst),
        "options": {"words": words, "grid": q(step)},
        "checks": _checks(checks),
        "passed": checks.ok,
    }


def _laws(inst: Instance, S, step, checks: VerificationReport) -> None:
    Sn = normalize(S)
    Q = log_q(Sn)
    skel = build_skeleton(Sn, Q)
    for c in check_mu_cycle_isometry(skel, step).checks:
        checks.add(f"mu: {c[0]}", c[1], c[2])
    # two-summand uniqueness at a grid-aligned interior target
    a = (skel.private_length(1) / 3 // step) * step or step
    b = (skel.private_length(2) / 3 // step) * step or step
    target = vadd(vscale(2, skel.v), (a, b))
    want = tuple(sorted(two_summand_decomposition(skel.lattice, skel, skel.lattice.reduce(target))))
    hits = oracles.twoadd_grid_search(skel, target, step)
    checks.add("two-summand uniqueness", hits == [want],
               f"target 2v + ({a}, {b}): {len(hits)} grid pair(s)")
    res = tropicalize(S, inst.join_edges)
    for k, sol in sorted(res.solutions.items()):
        for c in oracles.slope_field_laws(sol).checks:
            checks.add(f"{k}: {c[0]}", c[1], c[2])
        checks.add(f"{k}: integral slopes", sol.integral, str(res.divisors[k]))
    for name, tc in (("2d", res.curve2), ("3d", res.curve3)):
        bad = tc.unbalanced()
        checks.add(f"balancing {name}", not bad, f"{bad[0]}" if bad else "")
    msk = place_marked_points(skel)
    d = Divisor.from_labels(msk, {"P1": 1, "P2": -1})
    sol = solve_slope_field(msk, d)
    checks.add("integrality matches principality",
               sol.integral == divisor_is_tropically_principal(msk, d),
               f"{d}: integral {sol.integral}")

