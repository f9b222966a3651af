"""Command-line front end.

One subcommand per experiment family; every command emits structured rows
(CSV with a header, or JSON objects one per line) on stdout and a runtime
note on stderr, so identical invocations with the same seed produce
byte-identical stdout.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
or cache error.

Configuration precedence: command-line flags, then environment
(REVPRIME_CACHE_DIR, REVPRIME_THREADS), then a key=value config file
(--config), then defaults.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import circle, representations, schnirelmann, sieve, verify
from .digits import Base
from .errors import CacheError, ResourceLimitError
from .progressions import weighted_count_up_to, weighted_count_window
from .sieve import cache_load, cache_store, enumerate_reversed_primes

# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    base: int = 10
    cache_dir: str | None = None
    threads: int = 0  # 0 = auto
    format: str = "csv"
    seed: int = 0
    fixtures_path: str | None = None

    @property
    def worker_count(self) -> int:
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)


def _read_config_file(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        file_vals = _read_config_file(args.config)
        if "base" in file_vals:
            cfg.base = int(file_vals["base"])
        if "cache_dir" in file_vals:
            cfg.cache_dir = file_vals["cache_dir"]
        if "threads" in file_vals:
            cfg.threads = int(file_vals["threads"])
        if "format" in file_vals:
            cfg.format = file_vals["format"]
        if "seed" in file_vals:
            cfg.seed = int(file_vals["seed"])
        if "fixtures" in file_vals:
            cfg.fixtures_path = file_vals["fixtures"]
    if os.environ.get("REVPRIME_CACHE_DIR"):
        cfg.cache_dir = os.environ["REVPRIME_CACHE_DIR"]
    if os.environ.get("REVPRIME_THREADS"):
        cfg.threads = int(os.environ["REVPRIME_THREADS"])
    if getattr(args, "base", None) is not None:
        cfg.base = args.base
    if getattr(args, "cache_dir", None):
        cfg.cache_dir = args.cache_dir
    if getattr(args, "threads", None) is not None:
        cfg.threads = args.threads
    if getattr(args, "format", None):
        cfg.format = args.format
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "fixtures", None):
        cfg.fixtures_path = args.fixtures
    if cfg.base < 2:
        raise ValueError(f"base must be >= 2, got {cfg.base}")
    return cfg


def prepare_cache(cfg: RunConfig, limit: int) -> None:
    """Load (or build and store) a prime table big enough for `limit`."""
    if not cfg.cache_dir:
        return
    os.makedirs(cfg.cache_dir, exist_ok=True)
    path = os.path.join(cfg.cache_dir, "prime_table.bin")
    if os.path.exists(path):
        table = cache_load(path)
        if table.limit >= limit:
            sieve._table_cache = table
            return
    table = sieve.get_prime_table(limit, threads=cfg.worker_count)
    cache_store(path, table)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def emit_rows(cfg: RunConfig, fieldnames: list[str], rows: list[dict], out=None) -> None:
    out = out if out is not None else sys.stdout
    if cfg.format == "json":
        for row in rows:
            obj = {k: (_fmt(v) if isinstance(v, float) else v) for k, v in row.items()}
            out.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        writer = csv.DictWriter(out, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(v) for k, v in row.items()})


def _params_str(params: dict) -> str:
    return ";".join(f"{k}={_fmt(v)}" for k, v in sorted(params.items()))


def report_rows(command: str, entries: list[tuple[dict, float, float, str]]) -> list[dict]:
    """Rows in the standard report schema (observed, predicted, ratio)."""
    rows = []
    for params, observed, predicted, provenance in entries:
        ratio = observed / predicted if predicted > 0 else float("nan")
        rows.append(
            {
                "command": command,
                "params": _params_str(params),
                "observed": observed,
                "predicted": predicted,
                "ratio": ratio,
                "provenance": provenance,
            }
        )
    return rows


REPORT_FIELDS = ["command", "params", "observed", "predicted", "ratio", "provenance"]


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def int_list(text: str) -> list[int]:
    """Parse '600', '1..30', or '1e4,1e5,1e6' into a list of ints."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, _, hi = part.partition("..")
            out.extend(range(int(float(lo)), int(float(hi)) + 1))
        else:
            out.append(int(float(part)))
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cache_for_bound(cfg: RunConfig, x: int, base: Base) -> None:
    if cfg.cache_dir:
        L = sieve._max_block_length(x, base)
        prepare_cache(cfg, max(2, base.b**L - 1))


def cmd_enumerate(args, cfg: RunConfig) -> int:
    base = Base(cfg.base)
    _cache_for_bound(cfg, args.limit, base)
    rows = [
        {"n": rec.n, "p": rec.p, "weight": rec.weight, "coprime": int(rec.coprime_flag)}
        for rec in enumerate_reversed_primes(args.limit, base, require_coprime=args.coprime)
    ]
    emit_rows(cfg, ["n", "p", "weight", "coprime"], rows)
    return 0


def cmd_count_ap(args, cfg: RunConfig) -> int:
    base = Base(cfg.base)
    _cache_for_bound(cfg, max(int_list(args.x)), base)
    entries = []
    for x in int_list(args.x):
        for q in int_list(args.q):
            for a in int_list(args.a):
                res = weighted_count_up_to(x, a, q, base)
                entries.append(
                    (
                        {"base": cfg.base, "x": x, "a": a, "q": q},
                        res.observed,
                        res.main_term,
                        "exact",
                    )
                )
    emit_rows(cfg, REPORT_FIELDS, report_rows("count-ap", entries))
    return 0


def cmd_partition(args, cfg: RunConfig) -> int:
    base = Base(cfg.base)
    res = weighted_count_window(args.digits, args.eta, args.r, args.a, args.q, base)
    entries = [
        (
            {
                "base": cfg.base,
                "L": args.digits,
                "eta": args.eta,
                "r": args.r,
                "a": args.a,
                "q": args.q,
            },
            res.observed,
            res.main_term,
            "exact",
        )
    ]
    emit_rows(cfg, REPORT_FIELDS, report_rows("partition", entries))
    return 0


def cmd_represent(args, cfg: RunConfig) -> int:
    base = Base(cfg.base)
    values = int_list(args.n)
    _cache_for_bound(cfg, max(values), base)
    if args.exceptions:
        x = max(values)
        count = representations.count_exceptional_evens(x, base)
        entries = [({"base": cfg.base, "x": x, "family": "r11"}, float(count), 0.0, "exact")]
        emit_rows(cfg, REPORT_FIELDS, report_rows("exceptions", entries))
        return 0
    entries = []
    for N in values:
        profile = representations.representation_count(N, args.family, base, k=args.k)
        params = {"base": cfg.base, "n": N, "family": args.family}
        if args.family == "r0k":
            params["k"] = args.k
        entries.append((params, profile.exact, profile.predicted, profile.provenance))
    emit_rows(cfg, REPORT_FIELDS, report_rows("represent", entries))
    return 0


def cmd_circle(args, cfg: RunConfig) -> int:
    base = Base(cfg.base)
    if args.op == "arcs":
        part = circle.build_arcs(args.N, args.B)
        rows = [
            {"a": arc.a, "q": arc.q, "lo": arc.lo, "hi": arc.hi}
            for arc in part.arcs
        ]
        emit_rows(cfg, ["a", "q", "lo", "hi"], rows)
        print(f"# total_measure={_fmt(part.total_measure)} Q={_fmt(part.Q)}", file=sys.stderr)
        return 0
    if args.op == "expsum":
        z = circle.exp_sum(args.alpha, args.N, args.kind, base)
        rows = [{"alpha": args.alpha, "kind": args.kind, "re": z.real, "im": z.imag, "abs": abs(z)}]
        emit_rows(cfg, ["alpha", "kind", "re", "im", "abs"], rows)
        return 0
    if args.op == "residual":
        value = circle.major_arc_residual(args.alpha, args.N, base, which=args.which, B=args.B)
        entries = [({"alpha": args.alpha, "N": args.N, "which": args.which}, value, 0.0, "exact")]
        emit_rows(cfg, REPORT_FIELDS, report_rows("residual", entries))
        return 0
    if args.op == "weyl":
        value = circle.weyl_ratio(args.beta, args.N, base, kind=args.kind)
        entries = [({"beta": args.beta, "N": args.N, "kind": args.kind}, value, 0.0, "exact")]
        emit_rows(cfg, REPORT_FIELDS, report_rows("weyl", entries))
        return 0
    if args.op == "parseval":
        res = circle.parseval_check(args.N, base)
        rows = [{"N": args.N, "lhs": res.lhs, "rhs": res.rhs, "scaled": res.scaled}]
        emit_rows(cfg, ["N", "lhs", "rhs", "scaled"], rows)
        return 0
    if args.op == "probe":
        probe = circle.minor_arc_probe(args.N, args.B, base, args.samples, seed=cfg.seed)
        rows = [
            {"A": A, "scaled_max": v, "max_abs_prime": probe.max_abs_prime,
             "samples": probe.samples, "seed": probe.seed}
            for A, v in sorted(probe.scaled.items())
        ]
        emit_rows(cfg, ["A", "scaled_max", "max_abs_prime", "samples", "seed"], rows)
        return 0
    if args.op == "curve":
        xs = np.linspace(0.0, 1.0, args.samples, endpoint=False)
        rows = []
        for alpha in xs:
            s = abs(circle.exp_sum(float(alpha), args.N, "prime"))
            rs = abs(circle.exp_sum(float(alpha), args.N, "reversed_prime_coprime", base))
            rows.append({"alpha": float(alpha), "abs_S": s, "abs_revS": rs})
        emit_rows(cfg, ["alpha", "abs_S", "abs_revS"], rows)
        return 0
    if args.op == "gamma":
        seed = circle.congruence_reversal_seed(base, args.h, args.q, args.digits, k=args.k, d=args.d)
        gammas, sigma = circle.gamma_sigma(seed, args.lam)
        rows = [{"i": i, "gamma": g} for i, g in enumerate(gammas)]
        rows.append({"i": "sigma", "gamma": sigma})
        emit_rows(cfg, ["i", "gamma"], rows)
        return 0
    raise ValueError(f"unknown circle op {args.op!r}")


def cmd_schnirelmann(args, cfg: RunConfig) -> int:
    base = Base(cfg.base)
    if args.op == "gap":
        report = schnirelmann.verify_gap(args.i, args.digits)
        rows = [
            {
                "base": report.base.b,
                "L": report.L,
                "lo": report.lo,
                "hi": report.hi,
                "count": report.reversed_prime_count,
                "forced_k": str(report.forced_k),
            }
        ]
        emit_rows(cfg, ["base", "L", "lo", "hi", "count", "forced_k"], rows)
        return 0
    if args.op == "mink":
        res = schnirelmann.min_k_representation(args.n, base, args.kmax)
        rows = [
            {
                "n": res.N,
                "k": res.k if res.k is not None else "none",
                "witness": "+".join(str(w) for w in res.witness),
                "single": int(res.single),
            }
        ]
        emit_rows(cfg, ["n", "k", "witness", "single"], rows)
        return 0
    if args.op == "scan":
        res = schnirelmann.scan_min_k(args.lo, args.hi, base, args.kmax)
        rows = [{"k": k, "count": c} for k, c in sorted(res.counts.items())]
        rows.append({"k": "failures", "count": len(res.failures)})
        emit_rows(cfg, ["k", "count"], rows)
        if res.failures:
            print("# failures: " + ",".join(map(str, res.failures)), file=sys.stderr)
        return 0
    raise ValueError(f"unknown schnirelmann op {args.op!r}")


def _parse_budget(text: str) -> float:
    if text.endswith("ms"):
        return float(text[:-2]) / 1000
    if text.endswith("s"):
        return float(text[:-1])
    if text.endswith("m"):
        return float(text[:-1]) * 60
    if text.endswith("h"):
        return float(text[:-1]) * 3600
    return float(text)


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.suite not in verify.SUITES:
        print(
            f"unknown suite {args.suite!r}; available: {', '.join(sorted(verify.SUITES))}",
            file=sys.stderr,
        )
        return 2
    fixtures = None
    if verify.suite_needs_fixtures(args.suite):
        path = cfg.fixtures_path or verify.default_fixtures_path()
        if not os.path.exists(path):
            print(
                f"suite {args.suite!r} needs the oracle fixtures file, not found at {path}; "
                "regenerate it with scripts/build_fixtures.py",
                file=sys.stderr,
            )
            return 2
        fixtures = verify.load_fixtures(path)
    budget = _parse_budget(args.budget) if args.budget else None
    results = verify.run_suite(args.suite, fixtures=fixtures, budget_seconds=budget)
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        if res.detail.startswith("skipped"):
            status = "SKIP"
        print(f"{status} {res.name}: {res.detail}")
        if not res.passed:
            failed += 1
        print(f"# {res.name} runtime_ms={res.runtime_ms}", file=sys.stderr)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted both before and after the subcommand; the
    # SUPPRESS default keeps subparser defaults from clobbering earlier values
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", type=int, default=argparse.SUPPRESS,
                        help="radix b >= 2 (default 10)")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    common.add_argument("--cache-dir", default=argparse.SUPPRESS,
                        help="prime-table cache directory")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="0 = auto")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for sampled probes")
    common.add_argument("--config", default=argparse.SUPPRESS, help="key=value config file")
    common.add_argument("--fixtures", default=argparse.SUPPRESS, help="oracle fixtures file")

    parser = argparse.ArgumentParser(
        prog="revprime",
        description="Reversed primes: progressions, representation counts, circle-method probes.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list reversed primes up to a bound", parents=[common])
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--coprime", action="store_true", help="keep only gcd(n, b^3-b) = 1")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("count-ap", help="progression counts vs. main term (grid)", parents=[common])
    p.add_argument("--x", required=True, help="bound(s): 1e4,1e5 or 10..20")
    p.add_argument("--a", default="0", help="residue(s)")
    p.add_argument("--q", default="1", help="modulus/moduli")
    p.set_defaults(func=cmd_count_ap)

    p = sub.add_parser("partition", help="leading-digit window count vs. main term", parents=[common])
    p.add_argument("--digits", type=int, required=True, help="digit length L")
    p.add_argument("--eta", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--q", type=int, default=1)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("represent", help="representation counts vs. predictions", parents=[common])
    p.add_argument("--family", choices=representations.FAMILIES, required=True)
    p.add_argument("--k", type=int, default=None, help="summand count for r0k")
    p.add_argument("--n", required=True, help="target(s): 600 or 4..100")
    p.add_argument(
        "--exceptions",
        action="store_true",
        help="count even N <= max(n) with no r11 representation",
    )
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("circle", help="exponential sums, arcs, residuals, probes", parents=[common])
    p.add_argument("--op", required=True,
                   choices=("arcs", "expsum", "residual", "weyl", "parseval", "probe", "curve", "gamma"))
    p.add_argument("--N", type=int, default=10**4)
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--kind", default="all")
    p.add_argument("--which", choices=("S", "revS"), default="revS")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--digits", type=int, default=10)
    p.add_argument("--lam", type=int, default=10)
    p.set_defaults(func=cmd_circle)

    p = sub.add_parser("schnirelmann", help="pure sums of reversed primes", parents=[common])
    p.add_argument("--op", required=True, choices=("gap", "mink", "scan"))
    p.add_argument("--i", type=int, default=2, help="primorial index")
    p.add_argument("--digits", type=int, default=2, help="digit length L")
    p.add_argument("--n", type=int, default=600)
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--lo", type=int, default=100)
    p.add_argument("--hi", type=int, default=200)
    p.set_defaults(func=cmd_schnirelmann)

    p = sub.add_parser("verify", help="run an acceptance suite", parents=[common])
    p.add_argument("--suite", default="all")
    p.add_argument("--budget", default=None, help="e.g. 30s, 10m")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        cfg = resolve_config(args)
        code = args.func(args, cfg)
    except (ResourceLimitError, CacheError) as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    print(f"# runtime_ms={int(1000 * (time.perf_counter() - start))}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
