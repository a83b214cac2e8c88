"""Unified command-line front end.

Subcommands: primes, symbol, lfun, rh-check, moments, charsums,
circle-moment, verify.  Exit codes: 0 success, 1 check failure (an exact
inequality or frozen baseline broke), 2 configuration error (bad flags,
budget refusal).  A JSON config file may supply any flag; explicit CLI
flags win, and FFM_THREADS overrides the default worker count.

Floating output is printed with 17 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from .baselines import BaselineStore, charsum_key, circle_key, moment_key
from .charsums import CharSumSpec, CircleMomentReport, circle_integral_moment, s_m_moment
from .errors import BudgetError, ConfigurationError, DomainError, FFMError, VerificationError
from .galois import Poly, field
from .lfunction import LPolynomial, rh_deviation
from .moments import MomentSpec, moment_report, ratio_growth_warnings
from .primes import build_prime_table, prime_table
from .sweep import family_lcoeffs, resolve_threads
from .verifier import (
    charavg_plain,
    charavg_weighted,
    mertens_cos,
    mertens_log,
    prop31_grid,
    prop32_residual,
    tail_vanishing_check,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2


def fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _parse_poly(text: str, fs) -> Poly:
    return Poly.from_text(text, fs)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=int, default=None, help="worker count (FFM_THREADS overrides the default)")
    p.add_argument("--shards", type=int, default=None, help="shard count for accumulation grouping (default: threads)")
    p.add_argument("--cache-dir", default=None, help="directory for prime-table and L-coefficient caches")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=["json", "csv"], default=None, help="output format (default json)")
    p.add_argument("--budget", type=int, default=None, help="max family size before refusal (default 1e7)")
    p.add_argument("--config", default=None, help="JSON config file supplying any flag; CLI flags win")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ffm", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("primes", help="build a prime table, print counts, optionally write the cache file")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--max-deg", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("symbol", help="quadratic residue symbol (c/d) with the reciprocity-route trace")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--c", required=True, help="polynomial, e.g. 'q3:0,1' or '0,1'")
    p.add_argument("--d", required=True)
    _add_common(p)

    p = sub.add_parser("lfun", help="exact L-polynomial coefficients for one or all discriminants")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", default=None)
    p.add_argument("--all", action="store_true")
    _add_common(p)

    p = sub.add_parser("rh-check", help="max root-modulus deviation from q^(-1/2) over the family")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    _add_common(p)

    p = sub.add_parser("moments", help="empirical shifted moment and both bound variants")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, default=None)
    p.add_argument("--g-range", default=None, help="inclusive range lo:hi for a ratio sweep")
    p.add_argument("--a", required=True, help="comma-separated positive exponents, e.g. 1,1")
    p.add_argument("--theta", default=None, help="comma-separated angles theta = t ln q")
    p.add_argument("--t", default=None, help="comma-separated shifts t (converted to angles)")
    p.add_argument("--variant", choices=["zeta", "min", "both"], default="both")
    p.add_argument("--checkpoint", default=None, help="resumable sweep state file")
    p.add_argument("--update-baselines", action="store_true")
    p.add_argument("--baseline-file", default=None)
    _add_common(p)

    p = sub.add_parser("charsums", help="2m-th moment of the prefix character sums")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--logq-y", type=int, required=True)
    p.add_argument("--update-baselines", action="store_true")
    p.add_argument("--baseline-file", default=None)
    _add_common(p)

    p = sub.add_parser("circle-moment", help="2m-th moment of the circle integral of |L|")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--points", type=int, default=256)
    p.add_argument("--update-baselines", action="store_true")
    p.add_argument("--baseline-file", default=None)
    _add_common(p)

    p = sub.add_parser("verify", help="run a verification suite against frozen baselines")
    p.add_argument("--suite", required=True, choices=["mertens", "charavg", "prop31", "prop32", "tail"])
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, default=None)
    p.add_argument("--update-baselines", action="store_true")
    p.add_argument("--baseline-file", default=None)
    _add_common(p)

    return ap


def _apply_config(args: argparse.Namespace) -> None:
    if getattr(args, "config", None) is None:
        return
    path = Path(args.config)
    if not path.exists():
        raise ConfigurationError(f"config file {path} not found")
    data = json.loads(path.read_text())
    if not isinstance(data, dict):
        raise ConfigurationError("config file must hold a JSON object")
    for key, value in data.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) in (None, False):
            setattr(args, attr, value)


def _emit(args, payload, csv_rows=None, csv_header=None) -> None:
    """Write JSON (default) or CSV when rows are available."""
    use_csv = args.format == "csv" and csv_rows is not None
    if args.out:
        out = open(args.out, "w", newline="")
    else:
        out = sys.stdout
    try:
        if use_csv:
            w = csv.writer(out)
            w.writerow(csv_header)
            for row in csv_rows:
                w.writerow([fmt(v) for v in row])
        else:
            json.dump(payload, out, indent=2)
            out.write("\n")
    finally:
        if args.out:
            out.close()


def _cmd_primes(args) -> int:
    fs = field(args.q)
    table = build_prime_table(fs, args.max_deg)
    residuals = table.necklace_residuals()
    for d, count in enumerate(table.counts, start=1):
        print(f"pi_{args.q}({d}) = {count}")
    bad = [d for d, r in enumerate(residuals, start=1) if r != 0]
    if args.out:
        table.write_cache(args.out)
        print(f"wrote table to {args.out}")
    if bad:
        print(f"necklace identity FAILED at degrees {bad}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    print(f"necklace identity exact through degree {args.max_deg}")
    return EXIT_OK


def _cmd_symbol(args) -> int:
    from .characters import jacobi_trace

    fs = field(args.q)
    c = _parse_poly(args.c, fs)
    d = _parse_poly(args.d, fs)
    value, steps = jacobi_trace(c, d)
    print(value)
    for s in steps:
        print(f"# {s}")
    return EXIT_OK


def _lfun_rows(fs, g, args):
    encs, coeffs = family_lcoeffs(
        fs, g, threads=args.threads, cache_dir=args.cache_dir, budget=args.budget
    )
    for enc, row in zip(encs, coeffs):
        yield Poly.decode(fs, int(enc)), [int(c) for c in row]


def _cmd_lfun(args) -> int:
    fs = field(args.q)
    g = args.g
    header = ["D"] + [f"c_{n}" for n in range(2 * g + 1)]
    if args.d and args.all:
        raise ConfigurationError("--d and --all are mutually exclusive")
    if args.d:
        from .lfunction import lpoly_euler

        lp = lpoly_euler(_parse_poly(args.d, fs), prime_table(fs, max(1, 2 * g)))
        rows = [[lp.d.to_text()] + list(lp.coeffs)]
    elif args.all:
        rows = [[d.to_text()] + row for d, row in _lfun_rows(fs, g, args)]
    else:
        raise ConfigurationError("need --d POLY or --all")
    payload = {
        "schema_version": 1,
        "q": args.q,
        "g": g,
        "rows": [dict(zip(header, r)) for r in rows],
    }
    if args.format is None:
        args.format = "csv" if args.out else "json"
    _emit(args, payload, csv_rows=rows, csv_header=header)
    return EXIT_OK


def _cmd_rh_check(args) -> int:
    fs = field(args.q)
    g = args.g
    worst = 0.0
    worst_d = None
    for d_poly, row in _lfun_rows(fs, g, args):
        dev = rh_deviation(LPolynomial(args.q, g, d_poly, row))
        if dev > worst:
            worst, worst_d = dev, d_poly
    print(f"max deviation | |u| sqrt(q) - 1 | = {fmt(worst)}"
          + (f" at D = {worst_d.to_text()}" if worst_d else ""))
    if worst >= args.tol:
        print(f"FAIL: deviation exceeds tol {fmt(args.tol)}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _moment_spec(args, g) -> MomentSpec:
    a = _float_list(args.a)
    if (args.theta is None) == (args.t is None):
        raise ConfigurationError("exactly one of --theta or --t is required")
    if args.theta is not None:
        theta = _float_list(args.theta)
        return MomentSpec(args.q, g, a, theta)
    return MomentSpec.from_t(args.q, g, a, _float_list(args.t))


def _cmd_moments(args) -> int:
    if (args.g is None) == (args.g_range is None):
        raise ConfigurationError("exactly one of --g or --g-range is required")
    if args.g_range:
        lo, _, hi = args.g_range.partition(":")
        g_values = list(range(int(lo), int(hi) + 1))
    else:
        g_values = [args.g]
    reports = []
    for g in g_values:
        spec = _moment_spec(args, g)
        reports.append(
            moment_report(
                spec,
                threads=args.threads,
                shard_count=args.shards,
                cache_dir=args.cache_dir,
                budget=args.budget,
                checkpoint=args.checkpoint,
            )
        )
    for w in ratio_growth_warnings(reports):
        print(f"warning: {w}", file=sys.stderr)
    rc = EXIT_OK
    if args.update_baselines or args.baseline_file:
        store = BaselineStore(args.baseline_file)
        for rep in reports:
            key = moment_key(rep.spec.q, rep.spec.g, rep.spec.a, rep.spec.theta)
            if args.update_baselines:
                store.record(key, rep.ratio_zeta)
            else:
                ok, frozen = store.check(key, rep.ratio_zeta)
                if not ok:
                    print(f"baseline drift at {key}: {fmt(rep.ratio_zeta)} vs {fmt(frozen)}",
                          file=sys.stderr)
                    rc = EXIT_CHECK_FAILED
        if args.update_baselines:
            store.save()
    payload = [r.to_dict() for r in reports]
    header = ["q", "g", "a", "theta", "empirical", "bound_zeta", "bound_min",
              "ratio_zeta", "ratio_min", "family_size", "zeros_detected"]
    rows = [
        [r.spec.q, r.spec.g, " ".join(map(fmt, r.spec.a)), " ".join(map(fmt, r.spec.theta)),
         r.empirical, r.bound_zeta, r.bound_min, r.ratio_zeta, r.ratio_min,
         r.family_size, r.zeros_detected]
        for r in reports
    ]
    _emit(args, payload[0] if len(payload) == 1 else payload, csv_rows=rows, csv_header=header)
    return rc


def _cmd_charsums(args) -> int:
    spec = CharSumSpec(args.q, args.g, args.m, args.logq_y)
    rep = s_m_moment(
        spec,
        threads=args.threads,
        shard_count=args.shards,
        cache_dir=args.cache_dir,
        budget=args.budget,
    )
    rc = EXIT_OK
    if args.update_baselines or args.baseline_file:
        store = BaselineStore(args.baseline_file)
        key = charsum_key(args.q, args.g, args.m, args.logq_y)
        if args.update_baselines:
            store.record(key, rep.ratio)
            store.save()
        else:
            ok, frozen = store.check(key, rep.ratio)
            if not ok:
                print(f"baseline drift at {key}: {fmt(rep.ratio)} vs {fmt(frozen)}", file=sys.stderr)
                rc = EXIT_CHECK_FAILED
    if args.format == "csv":
        # per-discriminant detail: D, prefix sum, |prefix|^(2m) contribution
        fs = field(args.q)
        encs, coeffs = family_lcoeffs(fs, args.g, threads=args.threads,
                                      cache_dir=args.cache_dir, budget=args.budget)
        upto = min(args.logq_y, 2 * args.g) + 1
        rows = []
        for enc, row in zip(encs, coeffs):
            pref = int(row[:upto].sum())
            rows.append([Poly.decode(fs, int(enc)).to_text(), pref, abs(pref) ** (2 * args.m)])
        _emit(args, rep.to_dict(), csv_rows=rows,
              csv_header=["D", f"prefix_sum({args.logq_y})", "contribution"])
    else:
        _emit(args, rep.to_dict())
    return rc


def _cmd_circle(args) -> int:
    rep = circle_integral_moment(
        args.q, args.g, args.m, args.points,
        threads=args.threads, shard_count=args.shards,
        cache_dir=args.cache_dir, budget=args.budget,
    )
    rc = EXIT_OK
    if args.update_baselines or args.baseline_file:
        store = BaselineStore(args.baseline_file)
        key = circle_key(args.q, args.g, args.m)
        if args.update_baselines:
            store.record(key, rep.ratio)
            store.save()
        else:
            ok, frozen = store.check(key, rep.ratio)
            if not ok:
                print(f"baseline drift at {key}: {fmt(rep.ratio)} vs {fmt(frozen)}", file=sys.stderr)
                rc = EXIT_CHECK_FAILED
    _emit(args, rep.to_dict())
    return rc


def _verify_mertens(args, store: BaselineStore, update: bool) -> int:
    q = args.q
    table = prime_table(field(q), 8)
    residuals = [mertens_log(q, n, table).residual_log for n in range(1, 9)]
    c1 = max(abs(r) for r in residuals)
    lnq = math.log(q)
    alphas = [0.1 * i for i in range(int(2 * math.pi / lnq / 0.1) + 1)]
    c2 = max(abs(mertens_cos(q, 8, a, table).residual_zeta) for a in alphas)
    rc = EXIT_OK
    for key, value in ((f"mertens_log/q{q}", c1), (f"mertens_cos/q{q}", c2)):
        if update:
            store.record(key, value)
            print(f"FROZEN {key} = {fmt(value)}")
        else:
            ok, frozen = store.check(key, value)
            print(f"{'PASS' if ok else 'FAIL'} {key}: {fmt(value)} (frozen {fmt(frozen)})")
            if not ok:
                rc = EXIT_CHECK_FAILED
    return rc


def _verify_charavg(args, store: BaselineStore, update: bool) -> int:
    from .galois import enumerate_monic

    q, g = args.q, args.g
    if g is None:
        raise ConfigurationError("charavg suite needs --g")
    fs = field(q)
    worst = 0.0
    for deg in range(0, 5):
        for f in enumerate_monic(fs, deg):
            rep = charavg_plain(fs, g, f)
            worst = max(worst, rep.normalized_residual)
    key = f"charavg/q{q}/g{g}"
    if update:
        store.record(key, worst)
        print(f"FROZEN {key} = {fmt(worst)}")
        return EXIT_OK
    ok, frozen = store.check(key, worst)
    print(f"{'PASS' if ok else 'FAIL'} {key}: max normalized residual {fmt(worst)} (frozen {fmt(frozen)})")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _verify_prop31(args) -> int:
    q, g = args.q, args.g
    if g is None:
        raise ConfigurationError("prop31 suite needs --g")
    fs = field(q)
    m = 2 * g + 1
    thetas = [k * math.pi / 4 for k in range(8)]
    rep = prop31_grid(fs, g, list(range(1, m + 1)), thetas, strict=False)
    status = "PASS" if rep.all_pass else "FAIL"
    print(f"{status} prop31 q={q} g={g}: {rep.checks} checks, min slack {fmt(rep.min_slack)}, "
          f"{rep.zero_hits} central zeros")
    return EXIT_OK if rep.all_pass else EXIT_CHECK_FAILED


def _verify_prop32(args, store: BaselineStore, update: bool) -> int:
    q, g = args.q, args.g
    if g is None:
        raise ConfigurationError("prop32 suite needs --g")
    fs = field(q)
    rep = prop32_residual(fs, g, min(3, 2 * g + 1), (1.0,), (0.0,))
    key = f"prop32/q{q}/g{g}"
    if update:
        store.record(key, rep.max_delta)
        print(f"FROZEN {key} = {fmt(rep.max_delta)}")
        return EXIT_OK
    ok, frozen = store.check(key, rep.max_delta)
    print(f"{'PASS' if ok else 'FAIL'} {key}: max residual {fmt(rep.max_delta)} (frozen {fmt(frozen)})")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _verify_tail(args) -> int:
    q, g = args.q, args.g
    if g is None:
        raise ConfigurationError("tail suite needs --g")
    checked = tail_vanishing_check(field(q), g)
    print(f"PASS tail q={q} g={g}: {checked} degree sums vanish exactly")
    return EXIT_OK


def _cmd_verify(args) -> int:
    update = args.update_baselines
    store = BaselineStore(args.baseline_file)
    if args.suite == "mertens":
        rc = _verify_mertens(args, store, update)
    elif args.suite == "charavg":
        rc = _verify_charavg(args, store, update)
    elif args.suite == "prop31":
        return _verify_prop31(args)
    elif args.suite == "prop32":
        rc = _verify_prop32(args, store, update)
    else:
        return _verify_tail(args)
    if update:
        store.save()
    return rc


_HANDLERS = {
    "primes": _cmd_primes,
    "symbol": _cmd_symbol,
    "lfun": _cmd_lfun,
    "rh-check": _cmd_rh_check,
    "moments": _cmd_moments,
    "charsums": _cmd_charsums,
    "circle-moment": _cmd_circle,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        _apply_config(args)
        return _HANDLERS[args.command](args)
    except (ConfigurationError, DomainError, BudgetError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except VerificationError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
