"""Command-line entry point.

Exit status: 0 success, 1 conjecture counterexample, 2 inadmissible
parameters, 64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import analysis, conjecture, gc, protocol
from .coding import CodeSpec
from .errors import QsigError

SCHEMA_VERSION = 1
EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_PARAMS, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if v != 0.0 and abs(v) < 1e-3:
            return f"{v:.10e}"
        return repr(round(v, 12))
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _flatten(doc, prefix=""):
    for k, v in doc.items():
        if isinstance(v, dict):
            yield from _flatten(v, f"{prefix}{k}.")
        elif isinstance(v, list):
            yield f"{prefix}{k}", ";".join(fmt(x) for x in v)
        else:
            yield f"{prefix}{k}", v


def render_document(doc: dict, fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps(_jsonable(doc), indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["field", "value"])
    for k, v in _flatten(doc):
        w.writerow([k, fmt(v)])
    return buf.getvalue()


def render_table(columns, rows, fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps(_jsonable({"schema_version": SCHEMA_VERSION,
                                     "rows": [dict(zip(columns, r)) for r in rows]}),
                          indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def _emit(text: str, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)


# -- parameter documents ----------------------------------------------------

def _params_from_args(args) -> protocol.SchemeParams:
    manual = [args.N, args.theta, args.z_acc, args.z_rej]
    if any(v is not None for v in manual):
        if any(v is None for v in manual):
            raise UsageError("--N, --theta, --z-acc and --z-rej must be given together")
        S = round(1 / args.alpha)
        K = args.K if args.K is not None else analysis.asymptotic_message_length(args.N, args.theta)
        code = CodeSpec(S, K, args.N, args.theta)
        from .fingerprint import alphabet_size
        alphabet_size(args.alpha)
        return protocol.SchemeParams(d=args.d, S=S, T=args.T, code=code,
                                     z_acc=args.z_acc, z_rej=args.z_rej,
                                     eps_c=args.eps_c, eps_f=args.eps_f, nu=args.nu)
    return analysis.set_parameters(args.alpha, args.d, args.T, args.nu,
                                   args.eps_c, args.eps_f,
                                   correction=not args.no_correction)


def params_document(p: protocol.SchemeParams) -> dict:
    fom = analysis.figures_of_merit(p)
    exact, asym = analysis.qubits_per_bit(p)
    try:
        reject = analysis.forgery_reject_probability(p)
    except QsigError:
        reject = None
    return {
        "schema_version": SCHEMA_VERSION,
        "params": {
            "d": p.d, "S": p.S, "ell": p.ell, "alpha": p.alpha, "T": p.T,
            "theta": p.theta, "nu": p.nu, "N": p.N, "K": p.K,
            "z_acc": p.z_acc, "z_rej": p.z_rej,
            "eps_c": p.eps_c, "eps_f": p.eps_f, "phi": p.phi,
        },
        "figures": {
            "G": fom.G, "J": fom.J, "gap": fom.gap, "p1": fom.p1,
            "qubits_per_bit": exact, "qubits_per_bit_asymptotic": asym,
            "repudiation_bound": fom.repudiation_bound,
            "forgery_reject_bound": reject,
            "genuine_accept_probability":
                analysis.genuine_accept_probability(p.N, p.alpha, p.z_acc),
        },
        "notes": ["repudiation_bound omits the unspecified [1 + O(alpha)] factor"],
    }


def cmd_params(args) -> int:
    p = _params_from_args(args)
    _emit(render_document(params_document(p), args.format), args.output)
    return EXIT_OK


MODES = {"genuine": "genuine", "forge": "forgery", "repudiate": "repudiation"}


def cmd_simulate(args) -> int:
    p = _params_from_args(args)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    s = protocol.run_trials(MODES[args.mode], p, args.trials, seed=args.seed)
    Q = s.Q
    predicted = analysis.repudiation_probability(
        analysis.OutcomeDistribution(Q[0], Q[1], 1.0 - Q[0] - Q[1]), p.T).exact
    doc = {
        "schema_version": SCHEMA_VERSION,
        "mode": args.mode,
        "trials": args.trials,
        "seed": args.seed,
        "T": p.T, "N": p.N, "z_acc": p.z_acc, "z_rej": p.z_rej,
        "per_qudit_error_rate": s.error_rate,
        "modified_positions": s.modified_positions,
        "mean_tally": s.mean_tally,
        "Q_R": Q[0], "Q_0": Q[1], "Q_1": Q[2],
        "Q_R_stderr": s.Q_stderr[0], "Q_0_stderr": s.Q_stderr[1],
        "Q_1_stderr": s.Q_stderr[2],
        "verdict_counts": {v.value: s.verdict_counts[v] for v in protocol.Verdict},
        "repudiation_rate": s.repudiation_rate,
        "repudiation_stderr": s.repudiation_stderr,
        "repudiation_from_Q": predicted,
    }
    if p.nu is not None:
        doc["repudiation_bound"] = analysis.repudiation_bound_scheme(p)
    _emit(render_document(doc, args.format), args.output)
    if args.histogram:
        rows = [(z, int(c)) for z, c in enumerate(s.histogram) if c]
        _emit(render_table(("z", "count"), rows, "csv"), args.histogram)
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        alphas = [float(a) for a in args.alpha_list.split(",") if a.strip()]
    except ValueError:
        raise UsageError(f"bad --alpha-list {args.alpha_list!r}")
    if not alphas:
        raise UsageError("--alpha-list is empty")
    rows = analysis.sweep(args.T, alphas, args.d_min, args.d_max, args.points,
                          args.nu, args.eps_c, args.eps_f, args.x_axis,
                          correction=not args.no_correction)
    table = [r.as_tuple() for r in rows]
    _emit(render_table(analysis.SWEEP_COLUMNS, table, args.format), args.output)
    return EXIT_OK


def cmd_conjecture(args) -> int:
    rep = conjecture.check_range(args.x_max, method=args.method)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "x_max": args.x_max,
        "method": args.method,
        "largest_x_checked": rep.largest_checked,
        "steps_checked": rep.steps_checked,
        "exact_fallbacks": rep.exact_fallbacks,
        "holds": rep.holds,
    }
    if rep.holds:
        doc["report"] = f"holds up to x-max = {args.x_max}"
    else:
        x, r, fr, fr1 = rep.counterexample
        doc["counterexample"] = {"x": x, "r": r, "f_r": str(fr), "f_r_plus_1": str(fr1)}
        doc["report"] = f"counterexample at x={x}, r={r}"
    _emit(render_document(doc, args.format), args.output)
    # wall-clock goes to stderr so the output file stays byte-reproducible
    print(f"{doc['report']}; largest x checked {rep.largest_checked}; "
          f"wall-clock {rep.seconds:.2f} s", file=sys.stderr)
    return EXIT_OK if rep.holds else EXIT_COUNTEREXAMPLE


def cmd_gc(args) -> int:
    p = gc.GCParams(d=args.d, gamma=args.gamma, beta=args.beta, T=args.T,
                    reuse=args.reuse, qr_target=args.qr_target)
    doc = {"schema_version": SCHEMA_VERSION,
           "inputs": {"d": p.d, "gamma": p.gamma, "beta": p.beta, "T": p.T,
                      "reuse": p.reuse, "qr_target": p.qr_target}}
    doc.update(gc.gc_summary(p))
    _emit(render_document(doc, args.format), args.output)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------

def _common(sp):
    sp.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--seed", type=int, default=0)


def _scheme_flags(sp):
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--T", type=int, required=True)
    sp.add_argument("--nu", type=float, default=0.2)
    sp.add_argument("--eps-c", type=float, default=1e-9)
    sp.add_argument("--eps-f", type=float, default=1e-12)
    sp.add_argument("--no-correction", action="store_true",
                    help="drop the sqrt(d-ell)/ell term from p1")
    g = sp.add_argument_group("explicit scheme (bypasses the automatic settings)")
    g.add_argument("--N", type=int)
    g.add_argument("--K", type=int)
    g.add_argument("--theta", type=float)
    g.add_argument("--z-acc", type=int)
    g.add_argument("--z-rej", type=int)


def _float_int(s: str) -> int:
    return int(round(float(s)))


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qsig", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("params", help="derive scheme parameters")
    _scheme_flags(sp)
    _common(sp)
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("simulate", help="simulate verification runs")
    _scheme_flags(sp)
    sp.add_argument("--mode", choices=tuple(MODES), required=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--histogram", default=None, help="write (z, count) CSV here")
    _common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sweep", help="figure data: cost vs gap over d")
    sp.add_argument("--T", type=int, required=True)
    sp.add_argument("--alpha-list", required=True)
    sp.add_argument("--d-min", type=float, required=True)
    sp.add_argument("--d-max", type=float, required=True)
    sp.add_argument("--points", type=int, required=True)
    sp.add_argument("--x-axis", choices=("gap", "codelength"), default="gap")
    sp.add_argument("--nu", type=float, default=0.2)
    sp.add_argument("--eps-c", type=float, default=1e-9)
    sp.add_argument("--eps-f", type=float, default=1e-12)
    sp.add_argument("--no-correction", action="store_true")
    _common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("conjecture", help="check monotonicity of f(x, r)")
    sp.add_argument("--x-max", type=_float_int, default=2**14)
    sp.add_argument("--method", choices=("certified", "exact"), default="certified")
    _common(sp)
    sp.set_defaults(func=cmd_conjecture)

    sp = sub.add_parser("gc", help="Gottesman-Chuang baseline figures")
    sp.add_argument("--d", type=_float_int, required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--T", type=int, required=True)
    sp.add_argument("--reuse", action="store_true")
    sp.add_argument("--qr-target", type=float, default=1 - 1e-12)
    _common(sp)
    sp.set_defaults(func=cmd_gc)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qsig {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QsigError as exc:
        print(f"qsig {args.command}: inadmissible parameters: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
