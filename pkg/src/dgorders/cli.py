"""Command line interface.

Exit codes: 0 pass, 1 parse/verification failure (the failing axiom is
named), 2 usage error, 3 resource cap exceeded.  Every command has a --json
switch emitting a stable machine schema with the keys degrees,
invariant_factors, generators and caveats (plus command specific data);
reports are deterministic across runs.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from fractions import Fraction

from .algebra import CharTwo, NotSplit, verify_dg_algebra
from .catalog import CATALOG, UnknownExample, build
from .classgroups import (
    ConductorNotComputed,
    UnsupportedCycleOrder,
    class_group_conductor_square,
    dg_idele_class_group,
    mv_exactness_check,
)
from .dgmodules import DgModule, verify_dg_module
from .fileformat import AlgebraFileError, detect_blocks, parse_algebra_file, write_algebra_file
from .finitering import TooLarge
from .homology import homology_ring, order_homology_ring, UnsupportedRing
from .orders import dg_maximal_hull, is_dg_order
from .radicals import DimensionTooLarge, dg_maximal_left_ideals, dg_radicals
from .rings import PrimeField, RingError
from . import report as report_mod

CAP_ERRORS = (DimensionTooLarge, TooLarge)
FAIL_ERRORS = (
    AlgebraFileError,
    RingError,
    UnsupportedRing,
    UnknownExample,
    UnsupportedCycleOrder,
    ConductorNotComputed,
    NotSplit,
    CharTwo,
    ValueError,
)


def _emit(args, human_lines, payload):
    if getattr(args, "json", False):
        base = {"degrees": {}, "invariant_factors": [], "generators": [], "caveats": []}
        base.update(payload)
        print(json.dumps(base, indent=2, sort_keys=True, default=str))
    else:
        for line in human_lines:
            print(line)


def _load(path):
    with open(path) as fh:
        return parse_algebra_file(fh.read())


def cmd_verify(args):
    parsed = _load(args.file)
    rep = verify_dg_algebra(parsed.algebra, parsed.differential)
    lines = ["algebra:"] + ["  " + l for l in rep.lines()]
    ok = rep.ok
    module_reports = {}
    for name, M in sorted(parsed.modules.items()):
        mrep = verify_dg_module(M)
        module_reports[name] = mrep
        lines.append(f"module {name}:")
        lines += ["  " + l for l in mrep.lines()]
        ok = ok and mrep.ok
    order_rep = None
    if parsed.order is not None:
        order = is_dg_order(parsed.order, parsed.algebra, parsed.differential)
        order_rep = order.report
        lines.append("order:")
        lines += ["  " + l for l in order.report.lines()]
        if order.ok:
            lines.append(f"  proper (torsion-free homology): {order.proper}")
        ok = ok and order.ok
    failures = rep.failure_names()
    for name, mrep in module_reports.items():
        failures += [f"{name}:{x}" for x in mrep.failure_names()]
    if order_rep is not None:
        failures += [f"order:{x}" for x in order_rep.failure_names()]
    payload = {
        "ok": ok,
        "failures": failures,
        "caveats": [],
    }
    _emit(args, lines + [f"verdict: {'pass' if ok else 'FAIL'}"], payload)
    return 0 if ok else 1


def cmd_homology(args):
    parsed = _load(args.file)
    A, D = parsed.algebra, parsed.differential
    caveats = []
    if args.ring == "Z":
        if parsed.order is not None:
            HR = order_homology_ring(A, D, parsed.order)
        elif repr(parsed.ring) == "Z":
            from .lattice import ZLattice

            HR = order_homology_ring(A, D, ZLattice.standard(A.n))
        else:
            raise RingError("--ring Z needs an order block or an integral algebra")
    else:
        if not parsed.ring.is_field:
            raise RingError("--ring Q needs field coefficients in the file")
        HR = homology_ring(A, D)
    pres = HR.presentation
    lines = []
    degrees_payload = {}
    for g in pres.degrees():
        comp = pres.component(g)
        tor = ", ".join(f"Z/{t}" for t in comp.torsion)
        free = f"free rank {comp.free_rank}" if comp.free_rank else ""
        desc = "; ".join(x for x in ([free] if free else []) + ([tor] if tor else []))
        lines.append(f"degree {g}: {desc if desc else '0'}")
        degrees_payload[str(g)] = {
            "free_rank": comp.free_rank,
            "torsion": comp.torsion,
        }
    if not pres.degrees():
        lines.append("homology is zero")
    gens = [
        {"degree": g, "order": o, "vector": [str(x) for x in v]}
        for (g, o, v) in HR.generators
    ]
    payload = {
        "degrees": degrees_payload,
        "generators": gens,
        "invariant_factors": [
            [g, o] for (g, o, v) in HR.generators
        ],
        "caveats": caveats,
    }
    _emit(args, lines, payload)
    return 0


def cmd_radicals(args):
    parsed = _load(args.file)
    if not isinstance(parsed.ring, PrimeField):
        raise RingError("radicals need a finite prime field input (ring F p)")
    rads = dg_radicals(parsed.algebra, parsed.differential)
    names = parsed.algebra.names

    def basis_lines(sub):
        if sub.rank == 0:
            return ["  0"]
        return ["  " + _fmt_vec(v, names) for v in sub.basis()]

    lines = ["dgrad_l:"] + basis_lines(rads.dgrad_l)
    lines += ["dgrad_r:"] + basis_lines(rads.dgrad_r)
    lines += ["dgrad_2:"] + basis_lines(rads.dgrad_2)
    payload = {
        "generators": {
            "dgrad_l": [[str(x) for x in v] for v in rads.dgrad_l.basis()],
            "dgrad_r": [[str(x) for x in v] for v in rads.dgrad_r.basis()],
            "dgrad_2": [[str(x) for x in v] for v in rads.dgrad_2.basis()],
        },
        "caveats": [],
    }
    _emit(args, lines, payload)
    return 0


def _fmt_vec(vec, names):
    terms = []
    for c, nm in zip(vec, names):
        if c == 0:
            continue
        terms.append(f"{c}*{nm}" if str(c) != "1" else nm)
    return " + ".join(terms) if terms else "0"


def cmd_simples(args):
    parsed = _load(args.file)
    if not isinstance(parsed.ring, PrimeField):
        raise RingError("dg-simple enumeration needs a prime field (ring F p)")
    A, D = parsed.algebra, parsed.differential
    from .dgmodules import quotient_dg_module, shift
    from .radicals import is_dg_simple

    Reg = DgModule.regular(A, D)
    maxl = dg_maximal_left_ideals(A, D)
    simples = []
    for I in maxl:
        Q, _ = quotient_dg_module(Reg, I.basis())
        verdict = is_dg_simple(Q)
        simples.append((I, Q, verdict))
    # dedupe up to shift by normalized graded dimension signature + iso test
    kept = []
    for I, Q, verdict in simples:
        sig = _normalized_signature(Q)
        duplicate = False
        for _, Q2, _, sig2 in kept:
            if sig == sig2 and _iso_up_to_shift(Q, Q2):
                duplicate = True
                break
        if not duplicate:
            kept.append((I, Q, verdict, sig))
    lines = [f"{len(kept)} dg-simple module(s) up to shift:"]
    payload_list = []
    for t, (I, Q, verdict, sig) in enumerate(kept):
        dims = dict(sig)
        lines.append(
            f"  S{t}: graded dimensions {dims}, from maximal ideal of rank {I.rank}"
            f" (simplicity: {verdict.status})"
        )
        payload_list.append({"dims": {str(k): v for k, v in dims.items()},
                             "ideal_rank": I.rank, "status": verdict.status})
    payload = {"generators": payload_list, "caveats": []}
    _emit(args, lines, payload)
    return 0


def _normalized_signature(M):
    dims = {}
    for g in M.degrees:
        dims[g] = dims.get(g, 0) + 1
    if not dims:
        return ()
    low = min(dims)
    return tuple(sorted((g - low, d) for g, d in dims.items()))


def _iso_up_to_shift(M, N, cap=20_000):
    from .dgmodules import shift

    if _normalized_signature(M) != _normalized_signature(N):
        return False
    k = min(N.degrees) - min(M.degrees)
    return _dg_module_iso_exists(shift(M, -k), N, cap)


def _dg_module_iso_exists(M, N, cap=20_000):
    from .linalg import Matrix

    R = M.ring
    if sorted(M.degrees) != sorted(N.degrees):
        return False
    slots = [
        (j, i) for j in range(N.m) for i in range(M.m) if N.degrees[j] == M.degrees[i]
    ]
    pos = {s: t for t, s in enumerate(slots)}
    rows = []
    mats_M = M.action + [M.delta]
    mats_N = N.action + [N.delta]
    for AM, AN in zip(mats_M, mats_N):
        for j in range(N.m):
            for i in range(M.m):
                row = [R.zero()] * len(slots)
                for t in range(M.m):
                    if (j, t) in pos and not R.is_zero(AM.rows[t][i]):
                        row[pos[(j, t)]] = R.add(row[pos[(j, t)]], AM.rows[t][i])
                for s in range(N.m):
                    if (s, i) in pos and not R.is_zero(AN.rows[j][s]):
                        row[pos[(s, i)]] = R.sub(row[pos[(s, i)]], AN.rows[j][s])
                if any(not R.is_zero(x) for x in row):
                    rows.append(row)
    kern = Matrix(R, rows).kernel() if rows else [
        [R.one() if t == s else R.zero() for t in range(len(slots))]
        for s in range(len(slots))
    ]
    if not kern:
        return False
    p = R.p
    if p ** len(kern) > cap:
        kern = kern[:5]
    for coeffs in itertools.product(range(p), repeat=len(kern)):
        if not any(coeffs):
            continue
        F = Matrix.zeros(R, N.m, M.m)
        for c, kv in zip(coeffs, kern):
            if c:
                for (j, i), t in pos.items():
                    F.rows[j][i] = R.add(F.rows[j][i], R.mul(R.coerce(c), kv[t]))
        if not R.is_zero(F.det()):
            return True
    return False


def cmd_hull(args):
    parsed = _load(args.file)
    if parsed.order is None:
        raise RingError("hull needs an order block")
    order = is_dg_order(parsed.order, parsed.algebra, parsed.differential)
    if not order.ok:
        _emit(args, [f"not a dg-order: {order.report.failure_names()}"],
              {"ok": False, "failures": order.report.failure_names(), "caveats": []})
        return 1
    result = dg_maximal_hull(order)
    lines = ["hull order basis:"]
    for v in result.order.lattice.vectors():
        lines.append("  " + " ".join(str(x) for x in v))
    lines.append(f"moves: {result.trace if result.trace else 'none (already maximal under move set)'}")
    lines.append(f"classical-maximality comparison: "
                 f"{'classically maximal' if result.classically_maximal else 'undetermined'}"
                 f" (index in classical hull: {result.classical_hull_index})")
    payload = {
        "generators": [[str(x) for x in v] for v in result.order.lattice.vectors()],
        "moves": result.trace,
        "classically_maximal": result.classically_maximal,
        "caveats": ["certified maximal under the implemented move set only"],
    }
    _emit(args, lines, payload)
    return 0


def cmd_classgroup(args):
    parsed = _load(args.file)
    A, D = parsed.algebra, parsed.differential
    caveats = []
    if args.mode == "classical":
        if parsed.order is None:
            raise RingError("classical class group needs an order block")
        blocks = detect_blocks(A)
        if blocks is None:
            raise ConductorNotComputed(
                "no matrix-unit realization detected; classical class groups "
                "need a matrix-unit basis"
            )
        grp, _ = class_group_conductor_square(A, D, parsed.order, blocks=blocks)
        lines = [f"Cl(Lambda) = {grp!r}"]
        payload = {"invariant_factors": grp.invariants, "caveats": grp.caveats}
        for c in grp.caveats:
            lines.append(f"caveat: {c}")
        _emit(args, lines, payload)
        return 0
    if args.mode == "dg":
        if parsed.order is None:
            raise RingError("dg class group needs an order block")
        grp = dg_idele_class_group(A, D, parsed.order)
        lines = [f"dg idele class group (upper bound for Cl(Lambda, d)) = {grp!r}"]
        for c in grp.caveats:
            lines.append(f"caveat: {c}")
        payload = {"invariant_factors": grp.invariants, "caveats": grp.caveats}
        _emit(args, lines, payload)
        return 0
    # mv
    if parsed.order is None:
        raise RingError("Mayer-Vietoris checks need an order block")
    from .algebra import primitive_central_idempotents

    prims = primitive_central_idempotents(A, D)
    if len(prims) < 2:
        lines = ["no nontrivial central idempotent: Mayer-Vietoris is vacuous"]
        _emit(args, lines, {"caveats": ["vacuous: simple algebra"]})
        return 0
    lines = []
    reports = []
    for t, e in enumerate(prims):
        rep = mv_exactness_check(A, D, parsed.order, e)
        lines.append(
            f"idempotent {t}: {rep.units_checked} glue unit(s); "
            f"composites vanish: {rep.composite_vanishes}; "
            f"ker = im at the unit spot: {rep.kernel_equals_image}"
        )
        reports.append({
            "idempotent": t,
            "units_checked": rep.units_checked,
            "composite_vanishes": rep.composite_vanishes,
            "kernel_equals_image": rep.kernel_equals_image,
        })
    ok = all(r["composite_vanishes"] and r["kernel_equals_image"] for r in reports)
    lines.append(f"Mayer-Vietoris exactness: {'verified' if ok else 'FAILED'}")
    payload = {"mv": reports, "ok": ok,
               "caveats": ["Eichler condition asserted by the caller"]}
    _emit(args, lines, payload)
    return 0 if ok else 1


def cmd_example(args):
    params = {}
    for item in args.params:
        if "=" not in item:
            raise UnknownExample(f"parameters are key=value, got {item!r}")
        key, val = item.split("=", 1)
        try:
            fv = Fraction(val)
            params[key] = int(fv) if fv.denominator == 1 else fv
        except ValueError:
            params[key] = val
    ex = build(args.name, **params)
    text = write_algebra_file(
        ex.algebra, ex.differential, ex.order, ex.modules,
        header=f"catalog example {args.name} {params}"
    )
    out = args.output or f"{args.name}.dga"
    with open(out, "w") as fh:
        fh.write(text)
    _emit(args, [f"wrote {out}"], {"written": out, "caveats": []})
    return 0


def cmd_report(args):
    parsed = _load(args.file)
    A, D = parsed.algebra, parsed.differential
    os.makedirs(args.out, exist_ok=True)
    summary = {"file": args.file, "caveats": []}
    rep = verify_dg_algebra(A, D)
    summary["verified"] = rep.ok
    written = []
    if parsed.ring.is_field:
        HR = homology_ring(A, D)
        rows = report_mod.homology_rows(HR.presentation)
        csv_path = os.path.join(args.out, "homology_field.csv")
        fig_path = os.path.join(args.out, "homology_field.png")
        report_mod.write_homology_csv(csv_path, rows)
        report_mod.render_homology_figure(fig_path, rows, title="homology over the base field")
        written += [csv_path, fig_path]
        summary["homology_field"] = {str(g): {"free": f, "torsion": t} for g, f, t in rows}
    if parsed.order is not None:
        HZ = order_homology_ring(A, D, parsed.order)
        rows = report_mod.homology_rows(HZ.presentation)
        csv_path = os.path.join(args.out, "homology_integral.csv")
        fig_path = os.path.join(args.out, "homology_integral.png")
        report_mod.write_homology_csv(csv_path, rows)
        report_mod.render_homology_figure(fig_path, rows, title="integral homology of the order")
        written += [csv_path, fig_path]
        summary["homology_integral"] = {str(g): {"free": f, "torsion": t} for g, f, t in rows}
        groups = []
        blocks = detect_blocks(A)
        if blocks is not None:
            try:
                grp, _ = class_group_conductor_square(A, D, parsed.order, blocks=blocks)
                groups.append(("classical", grp.invariants))
                summary["classical_class_group"] = grp.invariants
                summary["caveats"] += grp.caveats
            except Exception as exc:  # report files should still be written
                summary["caveats"].append(f"classical class group skipped: {exc}")
        try:
            dgrp = dg_idele_class_group(A, D, parsed.order)
            groups.append(("dg (upper bound)", dgrp.invariants))
            summary["dg_class_group_upper_bound"] = dgrp.invariants
            summary["caveats"] += dgrp.caveats
        except Exception as exc:
            summary["caveats"].append(f"dg class group skipped: {exc}")
        if groups:
            fig_path = os.path.join(args.out, "classgroups.png")
            report_mod.render_classgroup_figure(fig_path, groups)
            written.append(fig_path)
    summary_path = os.path.join(args.out, "summary.json")
    report_mod.write_summary_json(summary_path, summary)
    written.append(summary_path)
    _emit(args, [f"wrote {p}" for p in written],
          {"written": written, "caveats": summary["caveats"]})
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="dgorders",
        description="exact computations with differential graded orders",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(func=fn)
        sp.add_argument("--json", action="store_true", help="machine readable output")
        return sp

    sp = add("verify", cmd_verify, help="verify the dg-algebra axioms of a file")
    sp.add_argument("file")
    sp = add("homology", cmd_homology, help="per-degree homology table")
    sp.add_argument("file")
    sp.add_argument("--ring", choices=["Q", "Z"], default="Q")
    sp = add("radicals", cmd_radicals, help="dg-radicals over a prime field")
    sp.add_argument("file")
    sp = add("simples", cmd_simples, help="dg-simple modules up to shift")
    sp.add_argument("file")
    sp = add("hull", cmd_hull, help="maximal dg-order hull search")
    sp.add_argument("file")
    sp = add("classgroup", cmd_classgroup, help="class group computations")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=["classical", "dg", "mv"], default="classical")
    sp = add("example", cmd_example, help="materialize a catalog example")
    sp.add_argument("name")
    sp.add_argument("params", nargs="*", help="key=value parameters")
    sp.add_argument("-o", "--output")
    sp = add("report", cmd_report, help="write CSV tables and figures")
    sp.add_argument("file")
    sp.add_argument("--out", required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CAP_ERRORS as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except FAIL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
