"""Command line entry point: ``clforge construct|verify|oracle``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from clforge import oracle as orc
from clforge import quadric as qd
from clforge.construction import build_construction, build_M
from clforge.errors import CLForgeError, TooLarge
from clforge.field import DEFAULT_MAX_SIZE, FieldCtx, create_field_ctx
from clforge.kernels import BACKEND, default_threads
from clforge.verification import GENERATOR_MAX_Q, Report, run_checks

CHECKS = ("construction", "tight", "charsum", "spreads", "section5", "prelims", "generators", "oracle")
LINE_COLUMNS = list(qd.PLUCKER_NAMES) + [f"pt1_{i}" for i in range(4)] + [f"pt2_{i}" for i in range(4)]


def _sample(text: str) -> int | str:
    if text == "exhaustive":
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--sample takes a positive integer or 'exhaustive'")
    if value < 1:
        raise argparse.ArgumentTypeError("--sample must be >= 1")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _checks(text: str) -> list[str]:
    names = [c.strip() for c in text.split(",") if c.strip()]
    if "all" in names:
        return list(CHECKS)
    bad = [c for c in names if c not in CHECKS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"unknown checks {bad}; choose from {', '.join(CHECKS)}, all")
    return names


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="characteristic")
    common.add_argument("--n", type=int, default=1, help="q = p^n")
    common.add_argument("--poly", default=None, help="F_{q^3} polynomial over F_p, little endian, e.g. 1,1,0,1")
    common.add_argument("--base-poly", default=None, help="F_q polynomial over F_p, little endian")
    common.add_argument("--max-field-size", type=int, default=DEFAULT_MAX_SIZE)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=_positive, default=None, help="default: $CLFORGE_THREADS or 1")
    common.add_argument("--output", "-o", default=None)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--deterministic", action="store_true", help="write elapsed_ms as 0")

    parser = argparse.ArgumentParser(prog="clforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("construct", parents=[common], help="build E, L_x, M and export the line class")

    v = sub.add_parser("verify", parents=[common], help="run exact verification checks")
    v.add_argument("--checks", type=_checks, default=["tight"])
    v.add_argument("--sample", type=_sample, default=None)
    v.add_argument("--n-random-spreads", type=int, default=100)
    v.add_argument("--force", action="store_true", help="lift the oracle and generator size guards")

    o = sub.add_parser("oracle", parents=[common], help="floating-point Gauss sum cross-checks")
    o.add_argument("--sample", type=_sample, default=None)
    o.add_argument("--force", action="store_true")
    return parser


def _ctx(args) -> FieldCtx:
    return create_field_ctx(args.p, args.n, poly=args.poly, base_poly=args.base_poly, max_size=args.max_field_size)


def _config(args, ctx: FieldCtx) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("output",)}
    cfg["q"] = ctx.q
    cfg["field"] = ctx.describe()
    cfg["backend"] = BACKEND
    cfg["threads"] = args.threads or default_threads()
    return cfg


# --- construct -----------------------------------------------------------------------


def construction_tables(lc) -> dict:
    cm = lc.construction
    ctx = cm.ctx
    fq = ctx.small

    def elem(log: int) -> dict:
        return {"log": int(log), "coeffs": ctx.coeffs(int(log))}

    return {
        "field": ctx.describe(),
        "x": cm.x_param,
        "beta_log": cm.beta,
        "gamma_log": cm.gamma,
        "E": [elem(e) for e in cm.E.tolist()],
        "L0": [elem(x) for x in cm.L0.tolist()],
        "Lx": [
            {"x": elem(x), "Lx": [elem(a) for a in La], "Lx_labels": [fq.label(a) for a in La]}
            for x, La in sorted(cm.Lx.items())
        ],
    }


def point_tables(lc) -> dict:
    cm = lc.construction
    ctx = cm.ctx
    return {
        "field": ctx.describe(),
        "canonical_form": "xi log reduced mod N (or eta mod N when xi = 0); zero is log q^3-1",
        "orbit_representatives": [{"xi": 0, "eta": int(z)} for z in cm.E.tolist()],
        "points": [[int(a), int(b)] for a, b in zip(lc.xi.tolist(), lc.eta.tolist())],
    }


def line_rows(lc) -> list[list[int]]:
    ctx = lc.ctx
    fq = ctx.small
    pl = qd.line_class_plucker(lc)
    rows = []
    for v in pl:
        x, y = qd.plucker_to_line(fq, v)
        rows.append([int(c) for c in v] + list(x) + list(y))
    rows.sort()
    return rows


def line_header(ctx: FieldCtx) -> list[str]:
    b, dual = ctx.basis
    return [
        f"p={ctx.p} n={ctx.n} q={ctx.q}",
        f"poly={','.join(map(str, ctx.poly))} (F_q^3 over F_p, little endian)",
        f"base_poly={','.join(map(str, ctx.base_poly))} (F_q over F_p, little endian)",
        f"w={','.join(map(str, ctx.w))}",
        "F_q labels: base-p digits of the coefficient vector over the F_q root",
        f"isometry: (p01,p02,p03) = coords of xi in basis w^{b}; (p23,p31,p12) = coords of eta in the trace-dual basis (logs {dual})",
    ]


def write_lines(lc, path: Path, fmt: str) -> None:
    rows = line_rows(lc)
    header = line_header(lc.ctx)
    if fmt == "csv":
        buf = io.StringIO()
        for h in header:
            buf.write(f"# {h}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(LINE_COLUMNS)
        writer.writerows(rows)
        path.write_text(buf.getvalue())
    else:
        payload = {"header": header, "columns": LINE_COLUMNS, "rows": rows}
        path.write_text(json.dumps(payload) + "\n")


def cmd_construct(args) -> int:
    ctx = _ctx(args)
    lc = build_M(ctx, build_construction(ctx))
    out = Path(args.output or f"clforge_q{ctx.q}")
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "construction.json").write_text(json.dumps(construction_tables(lc), indent=1) + "\n")
        (out / "points.json").write_text(json.dumps(point_tables(lc)) + "\n")
        write_lines(lc, out / f"lines.{args.format}", args.format)
    except OSError as exc:
        print(f"clforge: cannot write {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 2
    print(f"q={ctx.q} x={lc.x_param} |E|={len(lc.construction.E)} |M|={len(lc)} lines={len(lc)} -> {out}")
    return 0


# --- verify / oracle ---------------------------------------------------------------------


def _emit(args, ctx: FieldCtx, reports: list[Report]) -> int:
    ok = all(r.passed for r in reports)
    for r in reports:
        print(r.summary())
    print("PASS" if ok else "FAIL")
    if args.output:
        dicts = [r.to_dict(deterministic=args.deterministic) for r in reports]
        path = Path(args.output)
        try:
            if args.format == "csv":
                buf = io.StringIO()
                writer = csv.writer(buf, lineterminator="\n")
                writer.writerow(["check", "q", "p", "n", "pass", "violations", "elapsed_ms"])
                for d in dicts:
                    writer.writerow([d[k] for k in ("check", "q", "p", "n", "pass", "violations", "elapsed_ms")])
                path.write_text(buf.getvalue())
            else:
                bundle = {"config": _config(args, ctx), "pass": ok, "reports": dicts}
                path.write_text(json.dumps(bundle, indent=1, sort_keys=True) + "\n")
        except OSError as exc:
            print(f"clforge: cannot write {exc.filename}: {exc.strerror}", file=sys.stderr)
            return 2
    return 0 if ok else 1


def cmd_verify(args) -> int:
    ctx = _ctx(args)
    lc = build_M(ctx)
    everything = args.checks == list(CHECKS)
    checks = list(args.checks)
    guards = {"generators": GENERATOR_MAX_Q, "oracle": orc.DEFAULT_MAX_Q}
    for name, limit in guards.items():
        if name in checks and ctx.q > limit and not args.force:
            if not everything:
                raise TooLarge(f"{name} is guarded at q <= {limit}; pass --force")
            checks.remove(name)
    reports: list[Report] = []
    if "oracle" in checks:
        checks.remove("oracle")
        reports_oracle = orc.run_oracle(lc, sample=args.sample, seed=args.seed, force=True, threads=args.threads)
    else:
        reports_oracle = []
    reports += run_checks(
        lc,
        checks,
        sample=args.sample,
        seed=args.seed,
        threads=args.threads,
        n_random_spreads=args.n_random_spreads,
        max_gen_q=max(ctx.q, GENERATOR_MAX_Q) if args.force else GENERATOR_MAX_Q,
    )
    return _emit(args, ctx, reports + reports_oracle)


def cmd_oracle(args) -> int:
    ctx = _ctx(args)
    if ctx.q > orc.DEFAULT_MAX_Q and not args.force:
        raise TooLarge(f"oracle refused for q = {ctx.q} > {orc.DEFAULT_MAX_Q} without --force")
    lc = build_M(ctx)
    reports = orc.run_oracle(lc, sample=args.sample, seed=args.seed, force=args.force, threads=args.threads)
    return _emit(args, ctx, reports)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"construct": cmd_construct, "verify": cmd_verify, "oracle": cmd_oracle}[args.command]
    try:
        return handler(args)
    except CLForgeError as exc:
        print(f"clforge: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())


__all__ = ["main", "build_parser", "line_rows", "construction_tables", "point_tables"]
