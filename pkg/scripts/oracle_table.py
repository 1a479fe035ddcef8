"""Print the exact per-round statistics for every protocol and attack."""
import itertools

from twoway_qkd.config import RunConfig
from twoway_qkd.oracle import as_fraction, exact_round_distribution

VARIANTS = [{}, {"ir_both_paths": True}, {"pingpong_probe": "plus"},
            {"cm_backward_check": True}]


def fmt(x):
    return "-" if x is None else as_fraction(x)


def main():
    print(f"{'protocol':9} {'attack':6} {'variant':22} {'e_cm':>6} {'qber':>6} {'eve acc':>8}")
    for proto, attack in itertools.product(("lm05", "pingpong", "bb84"), ("none", "ir", "qmm")):
        for extra in VARIANTS:
            if "ir_both_paths" in extra and attack != "ir":
                continue
            if "pingpong_probe" in extra and (proto, attack) != ("pingpong", "qmm"):
                continue
            if "cm_backward_check" in extra and (proto, attack) != ("lm05", "qmm"):
                continue
            d = exact_round_distribution(RunConfig(protocol=proto, attack=attack,
                                                   attack_fraction=1.0, **extra))
            tag = ",".join(f"{k}={v}" for k, v in extra.items()) or "default"
            e_cm = None if proto == "bb84" else d.e_cm_exact
            print(f"{proto:9} {attack:6} {tag:22} {fmt(e_cm):>6} {fmt(d.qber_mm_exact):>6} "
                  f"{fmt(d.eve_accuracy_exact):>8}")


if __name__ == "__main__":
    main()
