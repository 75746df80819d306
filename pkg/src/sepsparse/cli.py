"""Command line front end.

Subcommands: project, bench, selftest, gen, recover. Exit codes: 0 success,
1 selftest failure, 2 infeasible parameters, 3 malformed input, 4 benchmark
value mismatch.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from .core import (
    Infeasible,
    InvalidInput,
    InvalidParams,
    ProjectionInstance,
    QuantizationConfig,
    quantize_signal,
)

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_INFEASIBLE = 2
EXIT_MALFORMED = 3
EXIT_MISMATCH = 4

ALGOS = ("lassp", "recover", "dp", "dp-fast", "approx2")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# io helpers

def read_signal(path: str) -> np.ndarray:
    """Single-column CSV of reals; a non-numeric first line is taken as a header."""
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_MALFORMED, f"cannot read {path}: {exc}") from exc
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(f.strip() for f in r)]
    values = []
    for n, row in enumerate(rows):
        if len(row) != 1:
            raise CliError(EXIT_MALFORMED, f"line {n + 1}: expected one column, got {len(row)}")
        try:
            values.append(float(row[0]))
        except ValueError:
            if n == 0:
                continue
            raise CliError(EXIT_MALFORMED, f"line {n + 1}: not a number: {row[0]!r}") from None
    if not values:
        raise CliError(EXIT_MALFORMED, "no values in input")
    arr = np.asarray(values)
    if not np.all(np.isfinite(arr)):
        raise CliError(EXIT_MALFORMED, "non-finite value in input")
    return arr


def write_signal(path: str | None, x: np.ndarray) -> None:
    text = "".join(f"{v!r}\n" for v in map(float, x))
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def read_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise CliError(EXIT_MALFORMED, f"cannot read config {path}: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(EXIT_MALFORMED, f"{path}:{n}: expected key = value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _ints(s: str) -> list[int]:
    return [int(float(v)) for v in s.split(",") if v.strip()]


def _names(s: str) -> list[str]:
    return [v.strip() for v in s.split(",") if v.strip()]


# ---------------------------------------------------------------------------
# projection dispatch

def run_algo(algo: str, costs, delta: int, k: int, rng) -> dict:
    from .approx import head_approx_2
    from .deterministic import recover
    from .dp import dp_folklore, dp_improved
    from .lagrangian import lassp

    inst = ProjectionInstance(costs, k, delta)
    if algo != "approx2":
        inst.require_feasible()
    out: dict = {}
    if algo == "lassp":
        res = lassp(inst, rng)
        sup, val = res.support, res.value
        out["iterations"] = res.iterations
    elif algo == "recover":
        sup, val = recover(inst, delta, k)
    elif algo == "dp":
        sup, val = dp_folklore(inst, delta, k)
    elif algo == "dp-fast":
        sup, val = dp_improved(inst, delta, k)
    elif algo == "approx2":
        sup, val = head_approx_2(inst, delta, k)
        out["short_support"] = len(sup) < k
    else:
        raise CliError(EXIT_MALFORMED, f"unknown algorithm {algo!r}")
    out["support"] = list(sup.indices)
    out["value"] = val
    return out


def cmd_project(args) -> int:
    x = read_signal(args.input)
    if args.costs:
        if np.any(x != np.round(x)):
            raise CliError(EXIT_MALFORMED, "--costs expects integer values")
        costs = [int(v) for v in x]
    else:
        costs = quantize_signal(x, QuantizationConfig(args.gamma))
    rng = np.random.default_rng(args.seed)
    t0 = time.perf_counter()
    res = run_algo(args.algo, costs, args.delta, args.k, rng)
    res["wall_time_s"] = time.perf_counter() - t0
    res.update({"d": len(costs), "k": args.k, "delta": args.delta, "algo": args.algo, "gamma": args.gamma})
    print(json.dumps(res, sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench

BENCH_COLUMNS = ["d", "k", "delta", "algo", "time_mean", "time_std", "time_median", "value_checksum"]


def _warm_up(algos):
    # compile the kernels outside of any timed region
    from .recovery import GeneratorParams, generate_signal

    x, _, k, delta = generate_signal(GeneratorParams(d=200, seed=0))
    c = quantize_signal(x)
    for a in algos:
        run_algo(a, c, delta, k, np.random.default_rng(0))


def bench_rows(cfg: dict[str, str], log=None) -> tuple[list[dict], list[str]]:
    """Timing rows and a list of mismatch descriptions."""
    from .recovery import GeneratorParams, derive_k_delta, generate_signal

    ds = _ints(cfg.get("d", "1000,10000"))
    algos = _names(cfg.get("algos", "dp,lassp"))
    for a in algos:
        if a not in ALGOS or a == "approx2":
            raise CliError(EXIT_MALFORMED, f"cannot benchmark algorithm {a!r}")
    trials = int(cfg.get("trials", "10"))
    seed = int(cfg.get("seed", "0"))
    alpha = float(cfg.get("alpha", "50"))
    beta = float(cfg.get("beta", "5"))
    sigma = float(cfg.get("sigma", "0.1"))
    gamma = int(cfg.get("gamma", "32"))
    fixed_k = int(cfg["k"]) if "k" in cfg else None
    fixed_delta = int(cfg["delta"]) if "delta" in cfg else None

    _warm_up(algos)
    rows, mismatches = [], []
    for d in ds:
        try:
            k, delta = derive_k_delta(d, alpha, beta, fixed_k)
        except InvalidParams as exc:
            raise CliError(EXIT_INFEASIBLE, str(exc)) from exc
        if fixed_delta is not None:
            delta = fixed_delta
        params = GeneratorParams(d=d, alpha=alpha, beta=beta, sigma=sigma, k=k, delta=delta)
        costs = []
        for t in range(trials):
            x, _, _, _ = generate_signal(GeneratorParams(**{**params.__dict__, "seed": seed + t}))
            costs.append(quantize_signal(x, QuantizationConfig(gamma)))
        per_algo = {}
        for a in algos:
            times, values = [], []
            rng = np.random.default_rng(seed)
            for c in costs:
                t0 = time.perf_counter()
                res = run_algo(a, c, delta, k, rng)
                times.append(time.perf_counter() - t0)
                values.append(res["value"])
            per_algo[a] = (times, values)
            if log:
                log(f"d={d} algo={a} mean={statistics.fmean(times):.4g}s")
        reference = per_algo[algos[0]][1]
        bad = [a for a in algos if per_algo[a][1] != reference]
        if bad:
            mismatches.append(f"d={d}: values of {bad} differ from {algos[0]}")
            continue
        for a in algos:
            times, values = per_algo[a]
            rows.append({
                "d": d,
                "k": k,
                "delta": delta,
                "algo": a,
                "time_mean": statistics.fmean(times),
                "time_std": statistics.pstdev(times),
                "time_median": statistics.median(times),
                "value_checksum": sum(values),
            })
    return rows, mismatches


def write_csv(rows: list[dict], columns: list[str], out: str | None) -> None:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    if out is None or out == "-":
        sys.stdout.write(buf.getvalue())
    else:
        Path(out).write_text(buf.getvalue())


def cmd_bench(args) -> int:
    cfg = read_config(args.config) if args.config else {}
    rows, mismatches = bench_rows(cfg, log=lambda m: print(m, file=sys.stderr))
    write_csv(rows, BENCH_COLUMNS, args.out)
    for m in mismatches:
        print(f"value mismatch: {m}", file=sys.stderr)
    return EXIT_MISMATCH if mismatches else EXIT_OK


# ---------------------------------------------------------------------------
# selftest

def cmd_selftest(args) -> int:
    from .selftest import dual_invariants, oracle_suite

    if args.max_d > 24:
        raise CliError(EXIT_MALFORMED, "max-d must be at most 24")
    t0 = time.perf_counter()
    rep = oracle_suite(args.max_d, args.max_delta, args.trials, args.seed, stop_at_first=True)
    print(f"oracle: {rep.instances} instances, {rep.checks} checks, {len(rep.failures)} failures")
    if not rep.ok:
        print("first counterexample: " + rep.first_failure_json())
        return EXIT_SELFTEST
    inv = dual_invariants(instances=max(20, args.trials // 2), seed=args.seed)
    print(f"dual invariants: {inv.instances} instances, {len(inv.failures)} failures")
    if not inv.ok:
        print("first counterexample: " + inv.first_failure_json())
        return EXIT_SELFTEST
    print(f"selftest passed in {time.perf_counter() - t0:.1f}s")
    return EXIT_OK


# ---------------------------------------------------------------------------
# gen / recover

def cmd_gen(args) -> int:
    from .recovery import GeneratorParams, generate_signal

    p = GeneratorParams(d=args.d, alpha=args.alpha, beta=args.beta, sigma=args.sigma,
                        seed=args.seed, k=args.k, delta=args.delta)
    try:
        x, sup, k, delta = generate_signal(p)
    except (InvalidParams, Infeasible) as exc:
        raise CliError(EXIT_INFEASIBLE, str(exc)) from exc
    write_signal(args.out, x)
    meta = {"d": args.d, "k": k, "delta": delta, "seed": args.seed, "sigma": args.sigma,
            "support": list(sup.indices)}
    text = json.dumps(meta, sort_keys=True)
    if args.out and args.out != "-":
        Path(args.out + ".support.json").write_text(text + "\n")
        print(text)
    else:
        print(text, file=sys.stderr)
    return EXIT_OK


RECOVER_COLUMNS = ["n", "hard_threshold", "separated", "trials", "d", "k", "delta"]


def cmd_recover(args) -> int:
    from .recovery import GeneratorParams, HardThreshold, SeparatedProjection, success_rate

    cfg = read_config(args.config) if args.config else {}
    d = int(cfg.get("d", "512"))
    k = int(cfg["k"]) if "k" in cfg else args.k
    p = GeneratorParams(d=d, alpha=float(cfg.get("alpha", "50")), beta=float(cfg.get("beta", "5")),
                        sigma=0.0, seed=int(cfg.get("seed", args.seed)), k=k,
                        delta=int(cfg["delta"]) if "delta" in cfg else args.delta)
    try:
        k, delta = p.resolved()
    except InvalidParams as exc:
        raise CliError(EXIT_INFEASIBLE, str(exc)) from exc
    ns = _ints(cfg.get("n", "45"))
    trials = int(cfg.get("trials", "20"))
    noise = float(cfg.get("sigma", "0"))
    engine = cfg.get("engine", args.algo or "lassp")
    merge = cfg.get("merge", "union")
    gamma = int(cfg.get("gamma", args.gamma))
    rows = []
    for n in ns:
        ht = success_rate(n, trials, p, lambda prob: HardThreshold(), noise_sigma=noise, merge=merge)
        sp = success_rate(n, trials, p, lambda prob: SeparatedProjection(delta, engine, gamma),
                          noise_sigma=noise, merge=merge)
        rows.append({"n": n, "hard_threshold": ht, "separated": sp, "trials": trials,
                     "d": d, "k": k, "delta": delta})
    write_csv(rows, RECOVER_COLUMNS, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sepsparse", description="Exact separated sparsity projection")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", help="project a signal read from a CSV file")
    p.add_argument("input")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--algo", choices=ALGOS, default="lassp")
    p.add_argument("--gamma", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--costs", action="store_true",
                   help="treat the column as integer costs instead of a signal to quantize")
    p.set_defaults(func=cmd_project)

    b = sub.add_parser("bench", help="timing sweep written as CSV")
    b.add_argument("--config")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    s = sub.add_parser("selftest", help="compare all algorithms with brute force")
    s.add_argument("--max-d", type=int, default=12)
    s.add_argument("--max-delta", type=int, default=4)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)

    g = sub.add_parser("gen", help="write a random separated spike signal")
    g.add_argument("--d", type=int, default=1000)
    g.add_argument("--alpha", type=float, default=50)
    g.add_argument("--beta", type=float, default=5)
    g.add_argument("--sigma", type=float, default=0.1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--k", type=int)
    g.add_argument("--delta", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("recover", help="CoSaMP success rates, hard thresholding vs separated")
    r.add_argument("--config")
    r.add_argument("--k", type=int, default=10)
    r.add_argument("--delta", type=int)
    r.add_argument("--algo", choices=("lassp", "recover", "dp", "dp-fast"))
    r.add_argument("--gamma", type=int, default=32)
    r.add_argument("--seed", type=int, default=1000)
    r.add_argument("--out")
    r.set_defaults(func=cmd_recover)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InvalidInput, InvalidParams) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
