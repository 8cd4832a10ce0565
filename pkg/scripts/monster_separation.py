"""Mutual non-definability of the monster relations R^Lambda_m for a range of m."""
import argparse

from strongclones.definability import qfpp_definable, revalidate
from strongclones.families import r_lambda


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--min-m", type=int, default=3)
    ap.add_argument("--max-m", type=int, default=5)
    ap.add_argument("--budget", type=int, default=10**8, help="index tuple budget per call")
    args = ap.parse_args()
    ms = range(args.min_m, args.max_m + 1)
    for a in ms:
        for b in ms:
            if a == b:
                continue
            v = qfpp_definable(r_lambda(a), [r_lambda(b)], budget=args.budget)
            status = "definable" if v.definable else "not definable"
            print(f"R_{a} from R_{b}: {status} (revalidated: {revalidate(v)})"
                  + ("" if v.definable else f"; {v.defect()}"))


if __name__ == "__main__":
    main()
