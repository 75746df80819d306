"""Sweep the number of measurements and compare CoSaMP projection steps.

Prints one row per n: success rate of hard thresholding and of the
separated projection over seeded noiseless trials. Used to pick the n that
the recovery test freezes.
"""
import argparse
import time

from sepsparse.recovery import GeneratorParams, HardThreshold, SeparatedProjection, success_rate


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, default=512)
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--beta", type=float, default=5)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=1000)
    ap.add_argument("--n", type=int, nargs="+", default=list(range(20, 101, 5)))
    ap.add_argument("--engine", default="lassp")
    ap.add_argument("--merge", default="union", choices=["union", "budget"])
    args = ap.parse_args()

    params = GeneratorParams(d=args.d, k=args.k, beta=args.beta, sigma=0.0, seed=args.seed)
    k, delta = params.resolved()
    print(f"d={args.d} k={k} delta={delta} trials={args.trials}")
    print("n,hard_threshold,separated,seconds")
    for n in args.n:
        t0 = time.perf_counter()
        ht = success_rate(n, args.trials, params, lambda prob: HardThreshold(), merge=args.merge)
        sp = success_rate(n, args.trials, params, lambda prob: SeparatedProjection(delta, args.engine), merge=args.merge)
        print(f"{n},{ht:.2f},{sp:.2f},{time.perf_counter() - t0:.1f}", flush=True)


if __name__ == "__main__":
    main()
