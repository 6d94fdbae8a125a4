"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
Numeric console output uses 12 significant digits.  The default verification
tolerance is 1e-10, overridable by the MUBSIC_TOL environment variable and,
per invocation, by --tol.  All subcommands are deterministic: the same argv
(and seed) produces byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import frames, linalg, plane, siclab, weyl

DEFAULT_TOL = 1e-10


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _tol(args) -> float:
    if getattr(args, "tol", None) is not None:
        return float(args.tol)
    env = os.environ.get("MUBSIC_TOL")
    if env is not None:
        try:
            return float(env)
        except ValueError as exc:
            raise ValueError(f"MUBSIC_TOL is not a number: {env!r}") from exc
    return DEFAULT_TOL


def _write_text(path, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _write_json(path, obj: dict) -> None:
    _write_text(path, json.dumps(obj) + "\n")


def _read_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


# --- handlers ----------------------------------------------------------------


def _cmd_mub_build(args) -> int:
    fam = weyl.build_mub(args.d)
    dev = weyl.verify_mub(fam)
    _write_json(args.out, fam.to_json_dict())
    print(f"built {fam.n_bases} bases for d={fam.d}, deviation {_fmt(dev)}")
    return 0


def _cmd_mub_verify(args) -> int:
    dev = weyl.verify_mub(weyl.build_mub(args.d))
    tol = _tol(args)
    ok = dev <= tol
    print(f"d={args.d} deviation {_fmt(dev)} ({'pass' if ok else 'fail'} at {_fmt(tol)})")
    return 0 if ok else 1


def _cmd_plane_build(args) -> int:
    if args.kind == "dapg":
        geom = plane.build_dapg(args.d)
        text = plane.export_incidence(geom, args.export)
        n_points, n_lines = len(geom.points), len(geom.lines)
    else:
        apg = plane.build_apg(args.d)
        text = plane.export_apg(apg, args.export)
        n_points, n_lines = len(apg.points), len(apg.lines)
    _write_text(args.out, text)
    print(f"{args.kind} d={args.d}: {n_points} points, {n_lines} lines")
    return 0


def _cmd_plane_verify(args) -> int:
    if args.kind == "dapg":
        report = plane.verify_incidence(plane.build_dapg(args.d))
        print(report.summary())
        for v in report.violations:
            print(f"  violation: {v}")
        return 0 if report.ok else 1
    apg = plane.build_apg(args.d)
    violations = plane.verify_apg(apg)
    status = "all axioms pass" if not violations else f"{len(violations)} violations"
    print(f"{len(apg.points)} points, {len(apg.lines)} lines, {status}")
    for v in violations:
        print(f"  violation: {v}")
    return 0 if not violations else 1


def _cmd_frame_from_mub(args) -> int:
    pf = frames.point_frame_from_mub(weyl.build_mub(args.d))
    dev = frames.verify_point_table(pf)
    _write_json(args.out, frames.point_frame_to_json_dict(pf))
    print(f"point frame d={pf.d} beta={_fmt(pf.beta)}, table deviation {_fmt(dev)}")
    return 0


def _cmd_frame_from_hg(args) -> int:
    basis = weyl.build_hg_basis(weyl.build_weyl_pair(args.d))
    pf = frames.point_frame_from_hg(basis)
    dev = frames.verify_point_table(pf)
    _write_json(args.out, frames.point_frame_to_json_dict(pf))
    print(f"point frame d={pf.d} beta={_fmt(pf.beta)}, table deviation {_fmt(dev)}")
    return 0


def _cmd_frame_bridge(args) -> int:
    pf = frames.point_frame_from_json_dict(_read_json(args.points))
    lf = frames.line_ops_from_points(pf, plane.build_dapg(pf.d))
    _write_json(args.out, frames.line_frame_to_json_dict(lf))
    print(f"line frame d={lf.d} alpha={_fmt(lf.alpha)}")
    return 0


def _cmd_frame_verify(args) -> int:
    tol = _tol(args)
    pf = frames.point_frame_from_json_dict(_read_json(args.points))
    worst = frames.verify_point_table(pf)
    print(f"point table deviation {_fmt(worst)} (beta={_fmt(pf.beta)})")
    if args.lines is not None:
        lf = frames.line_frame_from_json_dict(_read_json(args.lines))
        line_dev = frames.verify_line_table(lf)
        report = frames.verify_point_line_products(pf, lf, plane.build_dapg(pf.d))
        print(f"line table deviation {_fmt(line_dev)} (alpha={_fmt(lf.alpha)})")
        print(
            "point-line products deviation "
            f"{_fmt(report.max_dev_traceless)} (traceless), "
            f"{_fmt(report.max_dev_trace_one)} (trace-one)"
        )
        worst = max(worst, line_dev, report.max_dev)
    ok = worst <= tol
    print(f"max deviation {_fmt(worst)} ({'pass' if ok else 'fail'} at {_fmt(tol)})")
    return 0 if ok else 1


def _load_cli_fiducial(args) -> siclab.Fiducial:
    if args.builtin is not None:
        return {"qubit": siclab.qubit_fiducial, "qutrit": siclab.qutrit_fiducial}[
            args.builtin
        ]()
    obj = _read_json(args.fiducial)
    d = int(obj.get("d", 0))
    return siclab.ingest_fiducial(args.fiducial, d)


def _cmd_sic_generate(args) -> int:
    fid = _load_cli_fiducial(args)
    fam = siclab.generate_hw_sic(fid)
    dev = siclab.verify_sic(fam)
    _write_json(args.out, fam.to_json_dict())
    tol = _tol(args)
    ok = dev <= tol
    print(
        f"d={fam.d} family from {fid.source} fiducial: deviation {_fmt(dev)} "
        f"({'pass' if ok else 'fail'} at {_fmt(tol)})"
    )
    return 0 if ok else 1


def _cmd_sic_verify(args) -> int:
    fam = siclab.SicFamily.from_json_dict(_read_json(args.infile))
    dev = siclab.verify_sic(fam)
    tol = _tol(args)
    ok = dev <= tol
    print(f"d={fam.d} deviation {_fmt(dev)} ({'pass' if ok else 'fail'} at {_fmt(tol)})")
    return 0 if ok else 1


def _cmd_sic_spectra(args) -> int:
    fam = siclab.SicFamily.from_json_dict(_read_json(args.infile))
    mpf = siclab.extract_mu_pom(fam)
    table = siclab.spectra_table(mpf)
    _write_text(args.out, siclab.spectra_to_csv(table))
    report = siclab.assert_column_constant(table, tol=_tol(args))
    print(
        f"d={fam.d} spectra: max within-column spread {_fmt(report.max_spread)}"
    )
    return 0


def _cmd_sic_group(args) -> int:
    with open(args.infile) as fh:
        table = siclab.spectra_from_csv(fh.read())
    tol = float(args.tol)
    report = siclab.assert_column_constant(table, tol=tol)
    grouping = siclab.group_columns_by_spectrum(table, tol=tol)
    _write_json(args.out, grouping.to_json_dict())
    print(f"max within-column spread {_fmt(report.max_spread)}")
    print(f"groups: {grouping.groups}")
    if not report.ok:
        print(f"columns are not constant at tol {_fmt(tol)}", file=sys.stderr)
        return 1
    return 0


def _cmd_sic_solve_prob(args) -> int:
    res = siclab.solve_cyclic_probability(args.d, seed=args.seed, restarts=args.restarts)
    for sol, resid in zip(res.solutions, res.residuals):
        vals = ", ".join(_fmt(x) for x in sol)
        print(f"p = ({vals})  residual {_fmt(resid)}")
    if res.family is not None:
        lo, hi = res.family_bounds
        print(
            "family: p0 = (1 - p1 + sqrt(2 p1 - 3 p1^2))/2, "
            f"p1 in [{_fmt(lo)}, {_fmt(hi)}]"
        )
    return 0


def _cmd_sic_search(args) -> int:
    cfg = siclab.SearchConfig(
        seed=args.seed,
        restarts=args.restarts,
        max_iters=args.max_iters,
        objective_tol=float(args.tol) if args.tol is not None else 1e-14,
    )
    result = siclab.search_fiducial(args.d, cfg)
    if args.out is not None:
        siclab.write_fiducial_json(args.out, result.fiducial)
    status = "converged" if result.converged else "budget exhausted"
    print(
        f"d={args.d} objective {_fmt(result.objective)} after "
        f"{result.restarts_used} restarts ({status})"
    )
    return 0 if result.converged else 1


def _cmd_quasiprob(args) -> int:
    rho = linalg.read_operator_json(args.rho)
    pf = frames.point_frame_from_json_dict(_read_json(args.points))
    q = frames.quasi_distribution(rho, pf)
    geom = plane.build_dapg(pf.d)
    p = frames.line_probabilities(q, geom)
    obj = {
        "d": pf.d,
        "points": [[m, j, q[(m, j)]] for (m, j) in pf.keys()],
        "lines": [[a, b, p[(a, b)]] for (a, b) in sorted(p)],
    }
    _write_json(args.out, obj)
    total = sum(p.values())
    print(f"wrote {len(q)} point values, {len(p)} line sums (total {_fmt(total)})")
    return 0


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mubsic",
        description="Unbiased operator frames and equal-overlap families in prime dimensions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(p, *names_defaults):
        for name, kwargs in names_defaults:
            p.add_argument(name, **kwargs)

    d_arg = ("--d", {"type": int, "required": True, "help": "prime dimension"})
    tol_arg = ("--tol", {"type": float, "default": None, "help": "tolerance override"})
    out_arg = ("--out", {"default": None, "help": "output path (default stdout)"})

    mub = sub.add_parser("mub", help="mutually unbiased bases").add_subparsers(
        dest="sub", required=True
    )
    p = mub.add_parser("build", help="construct the d+1 bases")
    add(p, d_arg, out_arg)
    p.set_defaults(handler=_cmd_mub_build)
    p = mub.add_parser("verify", help="check the overlap pattern")
    add(p, d_arg, tol_arg)
    p.set_defaults(handler=_cmd_mub_verify)

    pl = sub.add_parser("plane", help="finite plane geometry").add_subparsers(
        dest="sub", required=True
    )
    p = pl.add_parser("build", help="construct and export a plane")
    add(p, d_arg, out_arg)
    p.add_argument("--kind", choices=["apg", "dapg"], default="dapg")
    p.add_argument("--export", choices=["json", "dot"], default="json")
    p.set_defaults(handler=_cmd_plane_build)
    p = pl.add_parser("verify", help="check the incidence axioms")
    add(p, d_arg)
    p.add_argument("--kind", choices=["apg", "dapg"], default="dapg")
    p.set_defaults(handler=_cmd_plane_verify)

    fr = sub.add_parser("frame", help="operator frames").add_subparsers(
        dest="sub", required=True
    )
    p = fr.add_parser("from-mub", help="point frame from unbiased bases")
    add(p, d_arg, out_arg)
    p.set_defaults(handler=_cmd_frame_from_mub)
    p = fr.add_parser("from-hg", help="point frame from the rotation basis")
    add(p, d_arg, out_arg)
    p.set_defaults(handler=_cmd_frame_from_hg)
    p = fr.add_parser("bridge", help="line frame from a point frame")
    p.add_argument("--points", required=True, help="point-frame JSON path")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_frame_bridge)
    p = fr.add_parser("verify", help="check frame product tables")
    p.add_argument("--points", required=True, help="point-frame JSON path")
    p.add_argument("--lines", default=None, help="line-frame JSON path")
    add(p, tol_arg)
    p.set_defaults(handler=_cmd_frame_verify)

    sic = sub.add_parser("sic", help="equal-overlap families").add_subparsers(
        dest="sub", required=True
    )
    p = sic.add_parser("generate", help="covariant family from a fiducial")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--fiducial", help="fiducial JSON path")
    group.add_argument("--builtin", choices=["qubit", "qutrit"])
    add(p, out_arg, tol_arg)
    p.set_defaults(handler=_cmd_sic_generate)
    p = sic.add_parser("verify", help="check the overlap pattern")
    p.add_argument("--in", dest="infile", required=True, help="family JSON path")
    add(p, tol_arg)
    p.set_defaults(handler=_cmd_sic_verify)
    p = sic.add_parser("spectra", help="measurement-column spectra CSV")
    p.add_argument("--in", dest="infile", required=True, help="family JSON path")
    p.add_argument("--geom", choices=["auto"], default="auto")
    add(p, out_arg, tol_arg)
    p.set_defaults(handler=_cmd_sic_spectra)
    p = sic.add_parser("group", help="group columns by spectrum")
    p.add_argument("--in", dest="infile", required=True, help="spectra CSV path")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_sic_group)
    p = sic.add_parser("solve-prob", help="cyclic probability conditions")
    add(p, d_arg)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=64)
    p.set_defaults(handler=_cmd_sic_solve_prob)
    p = sic.add_parser("search", help="numerical fiducial search")
    add(p, d_arg, out_arg)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=24)
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--tol", type=float, default=None, help="objective tolerance")
    p.set_defaults(handler=_cmd_sic_search)

    p = sub.add_parser("quasiprob", help="quasi-probabilities of a state")
    p.add_argument("--rho", required=True, help="density operator JSON path")
    p.add_argument("--points", required=True, help="point-frame JSON path")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_quasiprob)

    return parser


def run(argv) -> int:
    """Parse and dispatch; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0
    try:
        return args.handler(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else list(argv))


if __name__ == "__main__":
    sys.exit(main())
