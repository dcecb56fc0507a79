"""Batch command-line front end.

Every output embeds the artifact version and an echo of the run
configuration.  Exact integers are written as decimal strings.  The thread
count is deliberately left out of the echo: it never changes the output.

Exit codes: 0 ok, 1 verification failure, 2 inapplicable, 3 tolerance,
4 capacity, 5 fit diagnostics.
"""
from __future__ import annotations

import argparse
import io
import json
import random
import sys
import time
from typing import Sequence

from . import __version__
from .asymptotics import (
    delta_measure, fit_main_term, reference_exponents, three_term_abelian_report,
)
from .dirichlet import (
    DivisorSignature, convolution_identity_check, corrupt, v_from_formula, v_from_series,
)
from .errors import ArtifactError, IllConditionedFit
from .euler import euler_product, euler_product_direct
from .partitions import partition_bound_check, partition_table, partition_table_dp
from .profiles import REGISTRY_NAMES, detect_params, eval_multiplicative, registry
from .sieve import (MAX_SUMMATORY, CheckpointSeries, geometric_checkpoints, sieve_values, summatory,
                    thread_count)
from .zeta import a_constants

DEFAULT_SUITE = [("abelian", 1), ("abelian", 2), ("abelian", 3), ("exp_divisor", 2), ("exp_totient", 1)]


def _int(text: str) -> int:
    """Accept 10**8, 1e8 and 100_000_000 style integers."""
    text = text.strip()
    if "**" in text:
        b, e = text.split("**")
        return int(b) ** int(e)
    if "e" in text.lower() and not text.lower().startswith("0x"):
        m, e = text.lower().split("e")
        return int(m) * 10 ** int(e)
    return int(text.replace("_", ""))


def _int_list(text: str) -> list[int]:
    return [_int(t) for t in text.split(",") if t.strip()]


# -- output ---------------------------------------------------------------

def _echo(args: argparse.Namespace) -> dict:
    skip = {"handler", "threads", "output", "format"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return {"subcommand": args.command, **{k: v for k, v in cfg.items() if k != "command"}}


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_doc(args, body: dict) -> str:
    doc = {"artifact": "abelmoments", "version": __version__, "config": _echo(args), **body}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _csv_doc(args, header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write(f"# abelmoments {__version__}\n")
    buf.write("# config: " + json.dumps(_echo(args), sort_keys=True) + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(str(v) for v in row) + "\n")
    return buf.getvalue()


def _profile(args):
    values = _int_list(args.values) if getattr(args, "values", None) else None
    return registry(args.function, args.r, values=values)


def _checkpoints(args) -> list[int]:
    if args.checkpoints:
        return _int_list(args.checkpoints)
    return geometric_checkpoints(args.x_min, args.x_max, args.count)


# -- subcommands ------------------------------------------------------------

def cmd_constants(args) -> int:
    rows = []
    if args.aj:
        for c in a_constants(args.tol):
            rows.append({**c.as_dict(), "direct_value": None, "direct_tail_bound": None, "delta": None})
    else:
        prof = _profile(args)
        acc = euler_product(prof, None, args.prime_limit, args.series_order, args.tol)
        direct = euler_product_direct(prof, None, args.direct_prime_limit)
        rows.append({
            **acc.as_dict(),
            "direct_value": repr(direct.value),
            "direct_tail_bound": repr(direct.tail_bound),
            "delta": repr(abs(acc.value - direct.value)),
        })
    if args.format == "json":
        _emit(args, _json_doc(args, {"constants": rows}))
    else:
        header = ["name", "value", "prime_limit", "series_order", "tail_bound", "method",
                  "direct_value", "direct_tail_bound", "delta"]
        _emit(args, _csv_doc(args, header, ([("" if r[h] is None else r[h]) for h in header] for r in rows)))
    return 0


def cmd_sieve(args) -> int:
    prof = _profile(args)
    cps = _checkpoints(args)
    t0 = time.perf_counter()
    series = summatory(prof, cps, segment=args.segment, threads=args.threads, capacity=args.capacity)
    elapsed = (time.perf_counter() - t0) * 1000
    if args.format == "json":
        body = {"function": prof.name, "rows": [{"x": x, "S": str(s)} for x, s in zip(series.xs, series.sums)]}
        if args.timing:
            body["runtime_ms"] = round(elapsed, 3)
        _emit(args, _json_doc(args, body))
        return 0
    header = ["x", "S"] + (["runtime_ms"] if args.timing else [])
    rows = ([x, s] + ([f"{elapsed:.3f}"] if args.timing else []) for x, s in zip(series.xs, series.sums))
    _emit(args, _csv_doc(args, header, rows))
    return 0


def _verify_profile(prof, args, lines: list[str]) -> bool:
    ok = True
    params = detect_params(prof)
    order = args.order
    vf = v_from_formula(prof, params, order)
    vs = v_from_series(prof, params, order)
    zero = all(vf[nu] == 0 for nu in range(1, params.ell + 1))
    agree = vf.values == vs.values
    tag = f"[{prof.name} l={params.ell} k={params.k}]"
    lines.append(f"{'PASS' if zero else 'FAIL'} {tag} v(p^nu) = 0 for 1 <= nu <= {params.ell}")
    if agree:
        lines.append(f"PASS {tag} v formula == v series for nu <= {order}")
    else:
        nu = next(i for i, (a, b) in enumerate(zip(vf.values, vs.values)) if a != b)
        lines.append(f"FAIL {tag} v formula != v series at nu={nu}: {vf[nu]} vs {vs[nu]}")
    ok &= zero and agree

    vc = corrupt(vf, args.inject_fault) if args.inject_fault is not None else None
    rep = convolution_identity_check(prof, params, args.x_max, vc)
    lines.append(f"{'PASS' if rep.ok else 'FAIL'} {tag} " + rep.line().split(" ", 1)[1])
    ok &= rep.ok

    table = sieve_values(prof, args.spot_max)
    rng = random.Random(args.seed)
    sample = list(range(1, min(args.spot_max, 2000) + 1)) + [rng.randint(1, args.spot_max) for _ in range(500)]
    bad = next((n for n in sample if int(table[n]) != eval_multiplicative(prof, n)), None)
    if bad is None:
        lines.append(f"PASS {tag} sieve vs direct factorization on {len(sample)} spot checks <= {args.spot_max}")
    else:
        lines.append(f"FAIL {tag} sieve vs direct at n={bad}: {int(table[bad])} vs {eval_multiplicative(prof, bad)}")
        ok = False
    return ok


def cmd_verify(args) -> int:
    lines: list[str] = []
    ok = True
    pt = partition_table(args.partition_max)
    same = pt == partition_table_dp(args.partition_max)
    lines.append(f"{'PASS' if same else 'FAIL'} partition recurrence == coin-count oracle for nu <= {args.partition_max}")
    bound = partition_bound_check(args.partition_max)
    lines.append(f"{'PASS' if bound else 'FAIL'} P(nu) < exp(pi sqrt(2 nu/3)) for 1 <= nu <= {args.partition_max}")
    ok &= same and bound
    suite = [(args.function, args.r)] if args.function else DEFAULT_SUITE
    for name, r in suite:
        ok &= _verify_profile(registry(name, r), args, lines)
    lines.append("ALL PASS" if ok else "VERIFICATION FAILED")
    if args.format == "json":
        _emit(args, _json_doc(args, {"ok": ok, "checks": lines}))
    else:
        _emit(args, f"# abelmoments {__version__}\n# config: {json.dumps(_echo(args), sort_keys=True)}\n"
              + "\n".join(lines) + "\n")
    return 0 if ok else 1


def _read_checkpoint_csv(path: str) -> CheckpointSeries:
    xs, sums = [], []
    with open(path) as fh:
        header_seen = False
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if not header_seen:
                header_seen = True
                continue
            cols = line.split(",")
            xs.append(int(cols[0]))
            sums.append(int(cols[1]))
    return CheckpointSeries(xs, sums)


def cmd_fit(args) -> int:
    prof = _profile(args)
    params = detect_params(prof)
    if args.from_csv:
        series = _read_checkpoint_csv(args.from_csv)
    else:
        series = summatory(prof, _checkpoints(args), threads=args.threads)
    C = euler_product(prof, params, args.prime_limit, args.series_order, args.tol)
    degree = params.k - 2 if args.degree is None else args.degree
    model, report = fit_main_term(series, C.value, params.ell, degree)
    body = {
        "function": prof.name,
        "params": {"ell": params.ell, "k": params.k},
        "constant": C.as_dict(),
        "model": model.as_dict(),
        "fit": report.as_dict(),
        "checkpoints": [{"x": x, "S": str(s)} for x, s in zip(series.xs, series.sums)],
    }
    r = _moment_r(prof.name, params)
    refs = reference_exponents(r=r) if r else []
    refs += reference_exponents(k=params.k, ell=params.ell)
    body["reference_exponents"] = [e.as_dict() for e in refs]
    if args.function == "abelian" and args.r == 1:
        tt = three_term_abelian_report(series)
        body["three_term"] = {
            "exponent": tt.exponent,
            "max_ratio": repr(tt.max_ratio),
            "last_decade_max": repr(tt.last_decade_max),
            "earlier_max": repr(tt.earlier_max),
            "no_upward_trend": tt.no_upward_trend,
            "A": [c.as_dict() for c in tt.constants],
            "rows": [{"x": x, "R": repr(R), "ratio": repr(q)} for x, _, R, q in tt.rows()],
        }
    _emit(args, _json_doc(args, body))
    return 0


def _moment_r(name: str, params) -> int | None:
    if not name.startswith("abelian") or params.ell != 2:
        return None
    k, r = params.k, 0
    while k > 1 and k % 2 == 0:
        k //= 2
        r += 1
    return r if k == 1 else None


def cmd_divisor(args) -> int:
    sig = DivisorSignature.parse(args.signature)
    rep = delta_measure(sig, _checkpoints(args))
    if args.format == "json":
        body = {
            "signature": str(sig),
            "model": rep.model.as_dict(),
            "fit": rep.fit.as_dict() if rep.fit else None,
            "leading_constant_check": repr(rep.leading_check),
            "reference_exponents": [e.as_dict() for e in rep.reference],
            "rows": [{"x": x, "sum": str(s), "main_term": repr(float(h)), "delta": repr(d)}
                     for x, s, h, d in rep.rows()],
        }
        _emit(args, _json_doc(args, body))
        return 0
    rows = [(x, s, repr(float(h)), repr(d)) for x, s, h, d in rep.rows()]
    text = _csv_doc(args, ["x", "sum", "main_term", "delta"], rows)
    est = rep.fit.exponent if rep.fit else None
    if est is not None:
        text += f"# exponent_estimate: {est.slope!r} [{est.lower!r}, {est.upper!r}]\n"
    for e in rep.reference:
        text += f"# reference {e.key}: {e.value} ({float(e.value):.6f}) log_power={e.log_power}\n"
    _emit(args, text)
    return 0


def cmd_exponents(args) -> int:
    entries = reference_exponents(r=args.r_moment, k=args.k, ell=args.ell)
    _emit(args, _json_doc(args, {"exponents": [e.as_dict() for e in entries]}))
    return 0


def cmd_partitions(args) -> int:
    table = partition_table(args.n_max)
    _emit(args, _csv_doc(args, ["nu", "P"], enumerate(table)))
    return 0


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="abelmoments", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"abelmoments {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt="csv"):
        sp.add_argument("--format", choices=["csv", "json"], default=fmt)
        sp.add_argument("--output", "-o", default=None)
        sp.add_argument("--threads", type=int, default=None,
                        help="worker threads (env ABELMOMENTS_THREADS); never changes output")

    def function(sp, default="abelian"):
        sp.add_argument("--function", choices=REGISTRY_NAMES, default=default)
        sp.add_argument("--r", type=int, default=1)
        sp.add_argument("--values", default=None, help="comma-separated g(0..) for --function custom")

    def checkpoints(sp):
        sp.add_argument("--checkpoints", default=None, help="comma-separated x values")
        sp.add_argument("--x-min", type=_int, default=10**4)
        sp.add_argument("--x-max", type=_int, default=10**8)
        sp.add_argument("--count", type=int, default=40)

    def precision(sp):
        sp.add_argument("--prime-limit", type=_int, default=1000)
        sp.add_argument("--series-order", type=int, default=12)
        sp.add_argument("--tol", type=float, default=1e-10)

    sp = sub.add_parser("constants", help="Euler-product constants C_f and A_1, A_2, A_3")
    function(sp)
    precision(sp)
    sp.add_argument("--direct-prime-limit", type=_int, default=10**5)
    sp.add_argument("--aj", action="store_true", help="report A_1, A_2, A_3 instead")
    common(sp)
    sp.set_defaults(handler=cmd_constants)

    sp = sub.add_parser("sieve", help="exact partial sums at checkpoints")
    function(sp)
    checkpoints(sp)
    sp.add_argument("--segment", type=_int, default=1 << 22)
    sp.add_argument("--capacity", type=_int, default=MAX_SUMMATORY,
                    help="refuse checkpoints above this x")
    sp.add_argument("--timing", action="store_true", help="add a runtime_ms column (not reproducible)")
    common(sp)
    sp.set_defaults(handler=cmd_sieve)

    sp = sub.add_parser("verify", help="exact identity and oracle checks")
    sp.add_argument("--function", choices=REGISTRY_NAMES, default=None)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--x-max", type=_int, default=10**4)
    sp.add_argument("--spot-max", type=_int, default=10**5)
    sp.add_argument("--partition-max", type=_int, default=1000)
    sp.add_argument("--order", type=int, default=64)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--inject-fault", type=int, default=None, metavar="NU",
                    help="shift v(p^NU) by one before the convolution check")
    common(sp)
    sp.set_defaults(handler=cmd_verify)

    sp = sub.add_parser("fit", help="fit the main term and estimate the remainder exponent")
    function(sp)
    checkpoints(sp)
    precision(sp)
    sp.add_argument("--degree", type=int, default=None, help="polynomial degree (default k - 2)")
    sp.add_argument("--from-csv", default=None, help="checkpoint CSV written by `sieve`")
    common(sp, "json")
    sp.set_defaults(handler=cmd_fit)

    sp = sub.add_parser("divisor", help="generalized divisor sums and Delta(j; x)")
    sp.add_argument("--signature", default="1,2,2,2")
    checkpoints(sp)
    common(sp)
    sp.set_defaults(handler=cmd_divisor)

    sp = sub.add_parser("exponents", help="reference remainder exponents")
    sp.add_argument("--r", dest="r_moment", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--ell", type=int, default=None)
    common(sp, "json")
    sp.set_defaults(handler=cmd_exponents)

    sp = sub.add_parser("partitions", help="table of P(0..n)")
    sp.add_argument("--n-max", type=_int, default=100)
    common(sp)
    sp.set_defaults(handler=cmd_partitions)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", None) is not None:
        args.threads = thread_count(args.threads)
    try:
        return args.handler(args)
    except IllConditionedFit as exc:
        print(f"error: fit diagnostics: {exc}", file=sys.stderr)
        return exc.exit_code
    except ArtifactError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
