"""BB84 baseline: zero crossing of 1 - 2h(q), and an intercept-resend sweep
whose sifted QBER (f/4) walks through it."""
import argparse

from twoway_qkd.analysis import bb84_rate, bb84_threshold
from twoway_qkd.config import RunConfig
from twoway_qkd.simulate import sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rounds", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()

    q = bb84_threshold()
    print(f"threshold qber = {q:.6f}   rate there = {bb84_rate(q):.2e}")
    grid = [0.0, 0.1, 0.2, 0.3, 0.4, 0.42, 0.44, 0.46, 0.48, 0.5, 0.6, 0.8, 1.0]
    tpl = RunConfig(protocol="bb84", attack="ir", rounds=args.rounds, master_seed=args.seed)
    print(f"{'f':>5} {'qber':>8} {'R':>8}")
    for p in sweep(tpl, grid):
        s = p.result.statistics
        mark = "  <- above threshold" if s.qber_mm.rate > q else ""
        print(f"{p.fraction:5.2f} {s.qber_mm.rate:8.4f} {s.key_rate:8.4f}{mark}")


if __name__ == "__main__":
    main()
