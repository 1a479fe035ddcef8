"""Sweep the QMM attack fraction on LM05 and compare R with 1 - f.

    python3 scripts/key_rate_law.py --rounds 100000 --out key_rate.csv
"""
import argparse

from twoway_qkd.config import RunConfig
from twoway_qkd.emit import emit
from twoway_qkd.simulate import sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--protocol", default="lm05", choices=["lm05", "pingpong"])
    ap.add_argument("--rounds", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--steps", type=int, default=11)
    ap.add_argument("--out", help="also write the full sweep as CSV")
    args = ap.parse_args()

    grid = [i / (args.steps - 1) for i in range(args.steps)]
    tpl = RunConfig(protocol=args.protocol, attack="qmm", rounds=args.rounds,
                    master_seed=args.seed)
    points = sweep(tpl, grid, with_oracle=True)
    print(f"{'f':>5} {'e_cm':>8} {'qber':>8} {'R':>8} {'+-':>7} {'1-f':>6}")
    for p in points:
        if p.result is None:
            print(f"{p.fraction:5.2f}  failed: {p.error}")
            continue
        s = p.result.statistics
        print(f"{p.fraction:5.2f} {s.e_cm.rate:8.4f} {s.qber_mm.rate:8.4f} "
              f"{s.key_rate:8.4f} {s.key_rate_half_width:7.4f} {1 - p.fraction:6.2f}")
    if args.out:
        emit(points, "csv", args.out, template=tpl)


if __name__ == "__main__":
    main()
