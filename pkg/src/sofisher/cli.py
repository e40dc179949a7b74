"""Command-line driver.

Exit codes: 0 success, 1 failed check, 2 resource budget exhausted,
3 usage error.  ``--json`` prints a machine-readable report.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import dgb, numint, polycore, songen, weylcore

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3

DEFAULTS = {
    "budget": None,
    "tol": 1e-6,
    "nsigma": 5.0,
    "resolution": numint.DEFAULT_RESOLUTION,
    "hgm_tol": 1e-5,
    "eps": 1e-8,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_config(path):
    """Parse a ``key=value`` file; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = None if value.lower() == "none" else float(value)
    for k in ("budget", "resolution"):
        if out.get(k) is not None:
            out[k] = int(out[k])
    return out


def _floats(text):
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"cannot read numbers from {text!r}")


def _count(text):
    try:
        return int(float(text))
    except ValueError:
        raise UsageError(f"bad count {text!r}")


def _settings(args):
    s = dict(DEFAULTS)
    if getattr(args, "config", None):
        s.update(read_config(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            s[key] = val
    return s


def _family(args):
    fam = args.family.replace("-", "_")
    n = args.n
    if fam == "so3_mixed":
        n = 3
    return songen.generator_set(fam, n)


def _method(args):
    s = _settings(args)
    if args.method == "quad":
        return numint.Quadrature(s["resolution"])
    if args.method == "bessel":
        return numint.Bessel()
    if args.seed is None:
        raise UsageError("--seed is required with --method mc")
    return numint.MonteCarlo(_count(args.samples), args.seed, args.partitions)


# ---------------------------------------------------------------------------
# commands


def cmd_gens(args):
    gs = _family(args)
    lines = [f"{lab}: {op}" if lab else str(op)
             for lab, op in zip(gs.labels or [""] * len(gs), gs.operators)]
    return EXIT_OK, gs.to_json() | {"count": len(gs)}, lines


def _weyl_ideal(args):
    fam = args.family.replace("-", "_")
    if fam == "unit":
        x = polycore.var("x", 1)
        pos, der = weylcore.WeylOperator.generators((x,))
        return dgb.WeylIdealPresentation((pos[0], der[0])), 1
    gs = _family(args)
    if fam.startswith("char"):
        raise UsageError(f"{args.family} is a commutative family")
    return dgb.WeylIdealPresentation(gs.operators), gs.n


def _budget(args, n):
    s = _settings(args)
    if n is not None and n >= 3 and s["budget"] is None:
        raise UsageError("n >= 3 requires an explicit --budget")
    return s["budget"]


def cmd_gb(args):
    fam = args.family.replace("-", "_")
    if fam.startswith("char"):
        gs = _family(args)
        gb = polycore.groebner(gs.operators, polycore.GREVLEX, max_pairs=_budget(args, gs.n))
        order = str(gb.order)
    else:
        ideal, n = _weyl_ideal(args)
        gb = dgb.weyl_groebner(ideal, max_pairs=_budget(args, n))
        order = str(gb.order)
    lines = [str(g) for g in gb.generators]
    payload = {"order": order, "basis_size": len(gb), "basis": lines,
               "pairs_processed": gb.pairs_processed}
    return EXIT_OK, payload, lines


def cmd_char_ideal(args):
    ideal, n = _weyl_ideal(args)
    gb = dgb.weyl_groebner(ideal, max_pairs=_budget(args, n))
    syms = dgb.characteristic_ideal(ideal, gb=gb)
    lines = [str(p) for p in syms]
    return EXIT_OK, {"generators": lines, "basis_size": len(gb)}, lines


def cmd_holonomic(args):
    ideal, n = _weyl_ideal(args)
    budget = _budget(args, n)
    try:
        rep = dgb.is_holonomic(ideal, max_pairs=budget)
    except dgb.EmptyCharacteristicVariety as exc:
        return EXIT_FAIL, {"error": str(exc)}, [f"error: {exc}"]
    payload = rep.to_json()
    ok = rep.dimension == rep.nvars
    lines = [f"holonomic: {rep.holonomic}", f"dimension: {rep.dimension} (positions {rep.nvars})",
             f"basis_size: {rep.basis_size}"]
    return (EXIT_OK if ok else EXIT_FAIL), payload, lines


def _default_point(fam, n):
    if fam in ("diagonal", "so3_mixed"):
        return [0.4, 0.9, 1.5][:n] if n <= 3 else [0.3 + 0.4 * i for i in range(n)]
    return [0.1 * (i + 2 * j) - 0.3 for i in range(n) for j in range(n)]


def cmd_verify(args):
    fam = args.family.replace("-", "_")
    s = _settings(args)
    if fam == "identities":
        res = songen.phi_psi_residuals(args.n)
        rows = [{"label": lab, "residual": str(r), "zero": r.is_zero()} for lab, r in res]
        ok = all(r["zero"] for r in rows)
        lines = [f"{r['label']}: {'0' if r['zero'] else r['residual']}" for r in rows]
        return (EXIT_OK if ok else EXIT_FAIL), {"residuals": rows, "passed": ok}, lines
    gs = _family(args)
    n = gs.n
    method = _method(args)
    point = _floats(args.x) if args.x else _default_point(fam, n)
    rows, lines, ok = [], [], True
    for lab, op in zip(gs.labels, gs.operators):
        if fam in ("haar", "haar_row_form", "haar_row"):
            r = numint.distribution_residual(op, numint.as_matrix(point, n), method)
        else:
            r = numint.annihilation_residual(op, point, method)
        good = r.within(s["tol"], s["nsigma"])
        ok &= good
        rows.append({"label": lab, **r.to_json(), "passed": good})
        extra = f" +- {r.normalized_stderr:.2e}" if r.method == "mc" else ""
        lines.append(f"{lab}: {r.normalized:.3e}{extra} {'ok' if good else 'FAIL'}")
    return (EXIT_OK if ok else EXIT_FAIL), {"point": point, "residuals": rows, "passed": ok}, lines


def cmd_hgm(args):
    s = _settings(args)
    a, b = _floats(args.from_), _floats(args.to)
    try:
        traj = numint.hgm_evaluate(a, b, steps=args.steps, resolution=s["resolution"], eps=s["eps"])
    except songen.SingularLocusError as exc:
        return EXIT_FAIL, {"error": str(exc), "t": exc.t, "pair": exc.pair}, [f"error: {exc}"]
    F = traj.final
    ref = numint.fisher_value(np.diag(b), numint.Quadrature(s["resolution"])).value
    rel = abs(F[0] - ref) / abs(ref)
    ok = rel <= s["hgm_tol"]
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(traj.to_csv())
    payload = {"target": b, "F": F.tolist(), "quadrature": ref, "relative_error": rel, "passed": ok}
    lines = [f"F(target) = {F.tolist()}", f"quadrature f = {ref!r}", f"relative error = {rel:.3e}"]
    return (EXIT_OK if ok else EXIT_FAIL), payload, lines


def cmd_oracle(args):
    if args.bessel is not None:
        v = numint.bessel_i0(args.bessel)
        return EXIT_OK, {"value": v, "error_estimate": 0.0, "method": "bessel"}, [repr(v)]
    if not args.x:
        raise UsageError("oracle needs --x or --bessel")
    method = _method(args)
    est = numint.fisher_value(numint.as_matrix(_floats(args.x), args.n), method)
    return EXIT_OK, est.to_json(), [f"{est.value!r} +- {est.error:.2e}"]


# ---------------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="sofisher", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="print a JSON report")
        sp.add_argument("--config", help="key=value file with default budgets and tolerances")

    def fam(sp, choices, default_n=2):
        sp.add_argument("--family", required=True, choices=choices)
        sp.add_argument("--n", type=int, default=default_n)

    weyl_families = ["haar", "haar-row", "fisher", "diagonal", "so3-mixed", "unit"]
    sp = sub.add_parser("gens", help="list generators")
    common(sp)
    fam(sp, ["haar", "haar-row", "fisher", "char-J", "char-Jprime", "diagonal", "so3-mixed"])
    sp.set_defaults(func=cmd_gens)

    for name, func, choices in (
        ("gb", cmd_gb, weyl_families + ["char-J", "char-Jprime"]),
        ("char-ideal", cmd_char_ideal, weyl_families),
        ("holonomic", cmd_holonomic, weyl_families),
    ):
        sp = sub.add_parser(name)
        common(sp)
        fam(sp, choices)
        sp.add_argument("--budget", type=int, help="maximum number of S-pairs")
        sp.set_defaults(func=func)

    def numeric(sp):
        sp.add_argument("--method", choices=["quad", "mc", "bessel"], default="quad")
        sp.add_argument("--samples", default="1e6")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--partitions", type=int, default=1)
        sp.add_argument("--resolution", type=int)
        sp.add_argument("--x", help="row-major matrix or diagonal, comma separated")

    sp = sub.add_parser("verify")
    common(sp)
    fam(sp, ["haar", "haar-row", "fisher", "diagonal", "so3-mixed", "identities"])
    numeric(sp)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--nsigma", type=float)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("hgm")
    common(sp)
    sp.add_argument("--from", dest="from_", default="0.1,0.2,0.3")
    sp.add_argument("--to", required=True)
    sp.add_argument("--steps", type=int, default=1000)
    sp.add_argument("--resolution", type=int)
    sp.add_argument("--hgm-tol", dest="hgm_tol", type=float)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--csv", help="write the trajectory as CSV")
    sp.set_defaults(func=cmd_hgm)

    sp = sub.add_parser("oracle")
    common(sp)
    sp.add_argument("--n", type=int, default=3)
    numeric(sp)
    sp.add_argument("--bessel", type=float, help="evaluate I0 at this argument")
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        status, payload, lines = args.func(args)
    except UsageError as exc:
        print(f"sofisher: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"sofisher: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except polycore.BudgetExhausted as exc:
        status = EXIT_BUDGET
        payload = {"holonomic": None, "dimension": None,
                   "basis_size": exc.progress.get("basis_size"), "budget_exhausted": True,
                   "error": str(exc), "progress": exc.progress}
        lines = [f"budget exhausted: {exc}", json.dumps(exc.progress)]
    params = {k: v for k, v in vars(args).items() if k not in ("func", "json")}
    if args.json:
        report = {
            "command": args.command,
            "parameters": params,
            "results": payload,
            "wall_time": time.perf_counter() - t0,
            "exit_status": status,
        }
        print(json.dumps(report, indent=2, default=str))
    else:
        print("\n".join(lines))
    return status


if __name__ == "__main__":
    sys.exit(main())
