"""Batch front end: every operation as a subcommand with CSV/JSON reports,
optional rendered figures next to the delimited output, deterministic
seeding, and thread-count-independent results.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np

from . import (circle, gowers, padic, rotation, signals, variation,
               weights)
from .phases import set_thread_count, thread_count_from_env
from .polynomials import parse_family, parse_polynomial

SUBCOMMANDS = ("weights", "unorm", "expsum", "symbol", "arcscan", "gauss",
               "average", "dual", "variation", "rmcheck", "padic-eig",
               "padic-count", "rotation", "converge", "farey", "project",
               "iwconst")

_PLOTTABLE = {"weights", "arcscan", "variation", "padic-eig", "converge"}


class CLIUsageError(Exception):
    def __init__(self, message: str, usage: str = ""):
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIUsageError(message, self.format_usage())


@dataclass
class RunConfig:
    subcommand: str
    flags: Dict[str, object]
    seed: int = 0
    out: Optional[str] = None
    format: str = "csv"
    threads: int = 1
    plot: Optional[str] = None


@dataclass
class CliReport:
    columns: List[str]
    rows: List[tuple]
    meta: Dict[str, object] = field(default_factory=dict)
    plot: Optional[Callable[[str], None]] = None
    stdout_lines: List[str] = field(default_factory=list)
    rows_to_stdout: bool = True


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".16e")
    return str(v)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt_cell(v) for v in row])
    return buf.getvalue()


def _json_text(report: CliReport, config: RunConfig) -> str:
    def clean(v):
        if isinstance(v, (np.integer,)):
            return int(v)
        if isinstance(v, (np.floating,)):
            return float(v)
        if isinstance(v, (np.bool_,)):
            return bool(v)
        return v

    payload = {
        "subcommand": config.subcommand,
        "columns": report.columns,
        "rows": [[clean(v) for v in row] for row in report.rows],
        "meta": {k: clean(v) for k, v in sorted(report.meta.items())},
    }
    return json.dumps(payload, sort_keys=True, indent=1) + "\n"


# ---------------------------------------------------------------------------
# small argument parsers

def _floats(text: str) -> List[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _complexes(text: str) -> List[complex]:
    return [complex(t.replace(" ", "")) for t in text.split(",") if t.strip()]


def _fraction(text: str) -> circle.RationalFrequency:
    t = text.strip()
    if "/" in t:
        b, q = t.split("/")
        return circle.RationalFrequency.make(int(b), int(q))
    f = Fraction(t)
    return circle.RationalFrequency.make(f.numerator, f.denominator)


def _alpha(text: str) -> float:
    t = text.strip()
    if t.startswith("sqrt:"):
        return math.sqrt(float(t[5:]))
    return float(t)


def _scales(text: str) -> variation.LacunarySet:
    t = text.strip()
    if t.startswith("pow2:"):
        lo, hi = t[5:].split(":")
        return variation.dyadic_scales(int(lo), int(hi))
    vals = tuple(float(v) for v in t.split(",") if v.strip())
    lam = min(b / a for a, b in zip(vals, vals[1:])) if len(vals) > 1 else 2.0
    return variation.LacunarySet(vals, lam=lam)


def _signal_from_spec(spec: str) -> signals.SignalZ:
    s = spec.strip()
    if s.startswith("delta:"):
        return signals.SignalZ.delta(int(s[6:]))
    if s.startswith("csv:"):
        return signals.SignalZ.from_csv(s[4:])
    raise ValueError(f"signal spec must be delta:X or csv:PATH, got {spec!r}")


def _read_csv_columns(path: str, re_col: str, im_col: Optional[str]):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        if re_col not in names:
            raise ValueError(f"{path}: no column {re_col!r} (has {names})")
        if im_col is not None and im_col not in names:
            raise ValueError(f"{path}: no column {im_col!r} (has {names})")
        out = []
        for row in reader:
            if row[re_col] == "" or (im_col and row[im_col] == ""):
                continue
            re_v = float(row[re_col])
            im_v = float(row[im_col]) if im_col else 0.0
            out.append(complex(re_v, im_v))
    return out


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_weights(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    w = weights.parse_weight(fl["weight"])
    if fl.get("minus"):
        w = weights.DifferenceWeight(w, weights.parse_weight(fl["minus"]))
    st = weights.weight_statistics(w, fl["N"], modulus=fl.get("modulus"),
                                   residue=fl.get("residue"),
                                   moment=fl.get("moment"))
    cols = ["weight", "N", "mean", "residue_mean", "residue_target",
            "modulus", "residue", "moment_k", "moment_value", "moment_bound"]
    row = (w.name, st.N, st.mean, st.residue_mean, st.residue_target,
           st.modulus, st.residue, st.moment_k, st.moment_value,
           st.moment_bound)

    def plot(path):
        from . import figures
        m = min(fl["N"], 512)
        vals = w.at_scale(max(fl["N"], 2)).table(1, m)
        figures.render_stems(path, np.arange(1, m + 1), vals,
                             f"weight values: {w.name}", "n", "w(n)",
                             hline=st.mean)

    return CliReport(cols, [row], meta={"weight": w.name}, plot=plot)


def _cmd_unorm(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    w1 = weights.parse_weight(fl["weight"])
    w2 = weights.parse_weight(fl["minus"])
    est = gowers.weight_unorm_gap(w1, w2, fl["N"], fl["degree"],
                                  steps=_floats(fl["steps"]) if fl.get("steps") else None)
    cols = ["N", "degree", "lower_bound", "additive_error", "upper_bound",
            "witness"]
    wit = ";".join(format(c, ".16e") for c in est.witness)
    return CliReport(cols, [(fl["N"], fl["degree"], est.lower_bound,
                             est.additive_error, est.upper_bound, wit)])


def _cmd_expsum(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    w = weights.parse_weight(fl["weight"])
    fam = parse_family(fl["family"])
    xi = _floats(fl["xi"])
    val = circle.exp_sum_m(w, fam, fl["N"], xi)
    cols = [f"xi_{i + 1}" for i in range(fam.k)] + ["re", "im", "abs"]
    return CliReport(cols, [tuple(xi) + (val.real, val.imag, abs(val))])


def _cmd_symbol(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    fam = parse_family(fl["family"])
    zeta = _floats(fl["zeta"])
    val = circle.continuous_symbol(fam, fl["N"], zeta,
                                   rel_tol=fl.get("rel_tol") or 1e-9)
    cols = [f"zeta_{i + 1}" for i in range(fam.k)] + ["re", "im", "abs"]
    return CliReport(cols, [tuple(zeta) + (val.real, val.imag, abs(val))])


def _cmd_arcscan(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    w = weights.parse_weight(fl["weight"])
    fam = parse_family(fl["family"])
    theta = [_fraction(t) for t in fl["theta"].split(",") if t.strip()]
    radii = _floats(fl["radii"])
    rep = circle.major_arc_scan(w, fam, fl["N"], theta, radii,
                                grid=fl.get("grid") or 3)
    cols = [f"xi_{i + 1}" for i in range(fam.k)] + ["re", "im", "abs", "err"]
    meta = {"max_error": rep.max_error,
            "comparison_scale": rep.comparison_scale,
            "gauss_re": rep.gauss.real, "gauss_im": rep.gauss.imag,
            "joint_q": rep.joint_q}
    lines = [f"max_error={rep.max_error:.16e}",
             f"comparison_scale={rep.comparison_scale:.16e}"]

    def plot(path):
        from . import figures
        errs = [r[-1] for r in rep.rows]
        figures.render_lines(path, np.arange(len(errs)), {"error": errs},
                             "major-arc approximation error over the grid",
                             "grid point", "|m - G m~|", logy=True)

    return CliReport(cols, list(rep.rows), meta=meta, plot=plot,
                     stdout_lines=lines)


def _cmd_gauss(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    fam = parse_family(fl["family"])
    a = [int(x) for x in fl["a"].split(",") if x.strip()]
    val = circle.gauss_sum(fam, a, fl["q"])
    cols = ["a", "q", "re", "im", "abs"]
    return CliReport(cols, [(";".join(map(str, a)), fl["q"], val.real,
                             val.imag, abs(val))])


def _signal_report(sig: signals.SignalZ) -> CliReport:
    cols = ["x", "re", "im"]
    rows = [(sig.offset + i, v.real, v.imag)
            for i, v in enumerate(sig.values)]
    return CliReport(cols, rows, meta={"offset": sig.offset,
                                       "length": len(sig.values)})


def _cmd_average(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    w = weights.parse_weight(fl["weight"])
    fam = parse_family(fl["family"])
    sigs = [_signal_from_spec(s) for s in fl["input"]]
    out = signals.multi_average(w, fam, sigs, fl["N"],
                                truncated=not fl.get("full"))
    return _signal_report(out)


def _cmd_dual(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    w = weights.parse_weight(fl["weight"])
    fam = parse_family(fl["family"])
    sigs = [_signal_from_spec(s) for s in fl["input"]]
    out = signals.dual_average(fl["j"], w, fam, sigs, fl["N"],
                               truncated=not fl.get("full"))
    return _signal_report(out)


def _cmd_variation(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    if fl.get("from_csv"):
        seq = _read_csv_columns(fl["from_csv"], fl.get("re_col") or "re",
                                fl.get("im_col"))
    elif fl.get("seq"):
        seq = _complexes(fl["seq"])
    else:
        raise ValueError("variation needs --seq or --from-csv")
    exps = [math.inf if t.strip() in ("inf", "oo") else float(t)
            for t in fl["exponents"].split(",") if t.strip()]
    prof = variation.variation_profile(seq, exps)
    cols = ["r", "seminorm", "norm"]
    rows = [(("inf" if math.isinf(r) else r), v, bv)
            for r, v, bv in zip(prof.exponents, prof.seminorms, prof.norms)]

    def plot(path):
        from . import figures
        figures.render_lines(path, np.arange(len(seq)),
                             {"|a_t|": np.abs(np.asarray(seq))},
                             "sequence magnitude", "t", "|a_t|")

    return CliReport(cols, rows, meta={"length": len(seq)}, plot=plot)


def _cmd_rmcheck(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    fam = parse_family(fl["family"])
    rep = variation.rm_check(fam, fl["K"], fl["q"], seed=cfg.seed,
                             modulus=fl.get("modulus") or 64,
                             scale=fl.get("scale"))
    cols = ["k", "K", "q", "seed", "modulus", "scale", "lhs", "sign_max",
            "log_factor", "rhs", "ratio"]
    return CliReport(cols, [(rep.k, rep.K, rep.q, rep.seed, rep.modulus,
                             rep.scale, rep.lhs, rep.sign_max,
                             rep.log_factor, rep.rhs, rep.ratio)])


def _cmd_padic_eig(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    coeffs = parse_polynomial(fl["poly"])
    p, j = fl["p"], fl["j"]
    eig = padic.char_eigenvalues(p, j, coeffs)
    bound = 1.5 / math.sqrt(p)
    cols = ["p", "j", "xi", "re", "im", "abs", "bound"]
    rows = [(p, j, xi, v.real, v.imag, abs(v), bound)
            for xi, v in enumerate(eig)]
    gap = max(abs(v) for v in eig[1:]) if len(eig) > 1 else 0.0
    meta = {"max_nonzero_abs": gap, "bound": bound}

    def plot(path):
        from . import figures
        figures.render_stems(path, np.arange(1, len(eig)),
                             np.abs(eig[1:]),
                             f"eigenvalues p={p} j={j}", "xi", "|eigenvalue|",
                             hline=bound)

    return CliReport(cols, rows, meta=meta, plot=plot,
                     stdout_lines=[f"max_nonzero_abs={gap:.16e}"])


def _cmd_padic_count(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    coeffs = parse_polynomial(fl["poly"])
    p, j, s = fl["p"], fl["j"], fl["s"]
    norm = padic.fiber_count_norm(p, j, coeffs, s)
    total = int(padic.fiber_profile(p, j, coeffs).sum())
    cols = ["p", "j", "s", "norm", "total"]
    row = [p, j, s, norm, total]
    meta = {}
    if fl.get("probe_trials"):
        probe = padic.operator_norm_probe(p, j, coeffs, s,
                                          trials=fl["probe_trials"],
                                          seed=cfg.seed)
        cols += ["probe_trials", "probe_lower"]
        row += [probe.trials, probe.lower_bound]
        meta["probe_lower"] = probe.lower_bound
    return CliReport(cols, [tuple(row)], meta=meta)


def _cmd_rotation(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    sysm = rotation.RotationSystem(_alpha(fl["alpha"]))
    w = weights.parse_weight(fl["weight"])
    fam = parse_family(fl["family"])
    funcs = [rotation.parse_trig(t) for t in fl["funcs"].split(",")]
    val = rotation.rotation_average(sysm, w, fam, funcs, fl["N"], fl["x"])
    cols = ["alpha", "N", "x", "re", "im", "abs"]
    return CliReport(cols, [(sysm.alpha, fl["N"], fl["x"], val.real,
                             val.imag, abs(val))])


def _cmd_converge(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    sysm = rotation.RotationSystem(_alpha(fl["alpha"]))
    w = weights.parse_weight(fl["weight"])
    fam = parse_family(fl["family"])
    funcs = [rotation.parse_trig(t) for t in fl["funcs"].split(",")]
    rep = rotation.convergence_series(sysm, w, fam, funcs,
                                      _scales(fl["scales"]), fl["x"])
    cols = ["N", "re", "im", "deviation", "v2_so_far"]
    rows = [(r.N, r.value.real, r.value.imag, r.deviation, r.v2_so_far)
            for r in rep.rows]
    meta = {"limit_re": rep.limit.real, "limit_im": rep.limit.imag,
            "rational_warning": rep.rational_warning}
    lines = []
    if rep.rational_warning:
        lines.append("warning: rotation angle is rational with small "
                     "denominator; the limit formula is invalid")

    def plot(path):
        from . import figures
        figures.render_lines(path, [r.N for r in rep.rows],
                             {"deviation": [r.deviation for r in rep.rows]},
                             "deviation from the product limit", "N",
                             "|value - limit|", logx=True, logy=True)

    return CliReport(cols, rows, meta=meta, plot=plot, stdout_lines=lines)


def _cmd_farey(cfg: RunConfig) -> CliReport:
    fset = circle.farey_set(cfg.flags["level"])
    cols = ["b", "q", "value", "height"]
    rows = [(m.b, m.q, float(m), m.height) for m in fset.members]
    return CliReport(cols, rows, meta={"size": fset.size})


def _cmd_project(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    Q = fl["modulus"]
    if fl.get("from_csv"):
        vals = _read_csv_columns(fl["from_csv"], fl.get("re_col") or "re",
                                 fl.get("im_col") or "im")
        if len(vals) != Q:
            raise ValueError(f"expected {Q} rows for Z/{Q}, got {len(vals)}")
        sig = padic.CyclicSignal(Q, np.asarray(vals))
    else:
        sig = padic.CyclicSignal.tone(Q, fl.get("tone") or 0)
    out = circle.projection_pi(sig, fl["level"], fl["k_scale"])
    cols = ["n", "re", "im"]
    rows = [(n, v.real, v.imag) for n, v in enumerate(out.values)]
    return CliReport(cols, rows, meta={"modulus": Q})


def _cmd_iwconst(cfg: RunConfig) -> CliReport:
    fl = cfg.flags
    val = circle.iw_constant(fl["C"], fl["N"])
    cols = ["C", "N", "value"]
    return CliReport(cols, [(fl["C"], fl["N"], val)],
                     stdout_lines=[format(val, ".17g")],
                     rows_to_stdout=False)


_HANDLERS = {
    "weights": _cmd_weights,
    "unorm": _cmd_unorm,
    "expsum": _cmd_expsum,
    "symbol": _cmd_symbol,
    "arcscan": _cmd_arcscan,
    "gauss": _cmd_gauss,
    "average": _cmd_average,
    "dual": _cmd_dual,
    "variation": _cmd_variation,
    "rmcheck": _cmd_rmcheck,
    "padic-eig": _cmd_padic_eig,
    "padic-count": _cmd_padic_count,
    "rotation": _cmd_rotation,
    "converge": _cmd_converge,
    "farey": _cmd_farey,
    "project": _cmd_project,
    "iwconst": _cmd_iwconst,
}


# ---------------------------------------------------------------------------
# argument wiring

def _build_parser() -> _Parser:
    parser = _Parser(prog="ergolab", description=__doc__)
    subs = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")

    def add(name, **kwargs):
        sp = subs.add_parser(name, **kwargs)
        sp.add_argument("--out", help="output file path")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--config", help="key=value defaults file")
        if name in _PLOTTABLE:
            sp.add_argument("--plot", nargs="?", const="",
                            help="render a figure (default: OUT with .png)")
        return sp

    sp = add("weights", help="weight statistics over an initial interval")
    sp.add_argument("--weight", required=True)
    sp.add_argument("--minus")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--modulus", type=int)
    sp.add_argument("--residue", type=int)
    sp.add_argument("--moment", type=int)

    sp = add("unorm", help="certified correlation-norm estimate of a weight difference")
    sp.add_argument("--weight", required=True)
    sp.add_argument("--minus", required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--steps")

    sp = add("expsum", help="discrete symbol at one frequency vector")
    sp.add_argument("--weight", required=True)
    sp.add_argument("--family", required=True)
    sp.add_argument("--N", type=float, required=True)
    sp.add_argument("--xi", required=True)

    sp = add("symbol", help="continuous symbol at one frequency vector")
    sp.add_argument("--family", required=True)
    sp.add_argument("--N", type=float, required=True)
    sp.add_argument("--zeta", required=True)
    sp.add_argument("--rel-tol", dest="rel_tol", type=float)

    sp = add("arcscan", help="major-arc approximation error over a grid")
    sp.add_argument("--weight", required=True)
    sp.add_argument("--family", required=True)
    sp.add_argument("--N", type=float, required=True)
    sp.add_argument("--theta", required=True)
    sp.add_argument("--radii", required=True)
    sp.add_argument("--grid", type=int, default=3)

    sp = add("gauss", help="unit-residue exponential sum")
    sp.add_argument("--family", required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--q", type=int, required=True)

    sp = add("average", help="multilinear average of integer signals")
    sp.add_argument("--weight", required=True)
    sp.add_argument("--family", required=True)
    sp.add_argument("--N", type=float, required=True)
    sp.add_argument("--input", action="append", required=True,
                    help="delta:X or csv:PATH, one per slot")
    sp.add_argument("--full", action="store_true",
                    help="average over [1, N] instead of (N/2, N]")

    sp = add("dual", help="adjoint multilinear average in one slot")
    sp.add_argument("--weight", required=True)
    sp.add_argument("--family", required=True)
    sp.add_argument("--N", type=float, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--input", action="append", required=True)
    sp.add_argument("--full", action="store_true")

    sp = add("variation", help="variation seminorms and norms of a sequence")
    sp.add_argument("--seq")
    sp.add_argument("--from-csv", dest="from_csv")
    sp.add_argument("--re-col", dest="re_col")
    sp.add_argument("--im-col", dest="im_col")
    sp.add_argument("--exponents", default="1,2,4,inf")

    sp = add("rmcheck", help="variation-vs-signed-sums ratio harness")
    sp.add_argument("--family", required=True)
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--modulus", type=int)
    sp.add_argument("--scale", type=int)

    sp = add("padic-eig", help="character eigenvalues on a prime-power modulus")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--poly", required=True)

    sp = add("padic-count", help="fiber-counting norm of a polynomial map")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--poly", required=True)
    sp.add_argument("--s", type=float, default=1.5)
    sp.add_argument("--probe-trials", dest="probe_trials", type=int)

    sp = add("rotation", help="weighted orbit average on the circle")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--weight", required=True)
    sp.add_argument("--family", required=True)
    sp.add_argument("--funcs", required=True)
    sp.add_argument("--N", type=float, required=True)
    sp.add_argument("--x", type=float, default=0.0)

    sp = add("converge", help="orbit averages along lacunary scales")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--weight", required=True)
    sp.add_argument("--family", required=True)
    sp.add_argument("--funcs", required=True)
    sp.add_argument("--scales", required=True)
    sp.add_argument("--x", type=float, default=0.0)

    sp = add("farey", help="enumerate the dyadic-level frequency set")
    sp.add_argument("--level", type=int, required=True)

    sp = add("project", help="arc projection of a cyclic signal")
    sp.add_argument("--modulus", type=int, required=True)
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--k-scale", dest="k_scale", type=int, required=True)
    sp.add_argument("--tone", type=int)
    sp.add_argument("--from-csv", dest="from_csv")
    sp.add_argument("--re-col", dest="re_col")
    sp.add_argument("--im-col", dest="im_col")

    sp = add("iwconst", help="multiplier-theorem exponent")
    sp.add_argument("--C", type=float, required=True)
    sp.add_argument("--N", type=int, required=True)

    return parser


_COMMON = {"out", "format", "seed", "threads", "config", "plot",
           "subcommand"}


def _load_config_defaults(argv: List[str]) -> List[str]:
    """Expand --config key=value files into leading flag tokens, so explicit
    command-line flags still win."""
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return argv
    try:
        lines = open(path).read().splitlines()
    except OSError as exc:
        raise CLIUsageError(f"cannot read config file {path}: {exc}")
    extra: List[str] = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise CLIUsageError(f"config line without '=': {line!r}")
        extra += [f"--{key.strip()}", value.strip()]
    # insert defaults right after the subcommand token
    return argv[:1] + extra + argv[1:]


def parse_args(argv: List[str]) -> RunConfig:
    parser = _build_parser()
    if not argv:
        raise CLIUsageError("missing subcommand", parser.format_usage())
    argv = _load_config_defaults(list(argv))
    ns = parser.parse_args(argv)
    if ns.subcommand is None:
        raise CLIUsageError("missing subcommand", parser.format_usage())
    flags = {k: v for k, v in vars(ns).items() if k not in _COMMON}
    threads = ns.threads if ns.threads is not None else thread_count_from_env()
    return RunConfig(subcommand=ns.subcommand, flags=flags, seed=ns.seed,
                     out=ns.out, format=ns.format, threads=threads,
                     plot=getattr(ns, "plot", None))


def dispatch(config: RunConfig) -> int:
    """Run one configured subcommand; 0 on success, 1 on validation
    failure, 2 on internal numeric failure."""
    try:
        handler = _HANDLERS.get(config.subcommand)
        if handler is None:
            raise ValueError(f"unknown subcommand {config.subcommand!r}")
        set_thread_count(config.threads)
        report = handler(config)

        for line in report.stdout_lines:
            print(line)
        if config.out:
            text = (_csv_text(report.columns, report.rows)
                    if config.format == "csv"
                    else _json_text(report, config))
            with open(config.out, "w", newline="") as fh:
                fh.write(text)
        elif report.rows_to_stdout:
            sys.stdout.write(_csv_text(report.columns, report.rows))

        if config.plot is not None:
            if report.plot is None:
                raise ValueError(
                    f"subcommand {config.subcommand} has no figure")
            path = config.plot
            if not path:
                if not config.out:
                    raise ValueError("--plot without a path needs --out")
                path = os.path.splitext(config.out)[0] + ".png"
            report.plot(path)
        return 0
    except circle.NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = parse_args(argv)
    except CLIUsageError as exc:
        if exc.usage:
            print(exc.usage, file=sys.stderr, end="")
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return dispatch(config)


if __name__ == "__main__":
    sys.exit(main())
