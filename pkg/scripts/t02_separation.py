"""Definability between R^{0,2}_n for small n, with defects."""
import argparse
import time

from strongclones.definability import qfpp_definable, revalidate
from strongclones.families import r02


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("ns", nargs="*", type=int, default=[3, 5])
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    for a in args.ns:
        for b in args.ns:
            if a == b:
                continue
            t = time.perf_counter()
            v = qfpp_definable(r02(a), [r02(b)], workers=args.threads)
            print(f"R_{a} from R_{b}: definable={v.definable} revalidated={revalidate(v)} "
                  f"({time.perf_counter() - t:.2f} s)")
            if not v.definable:
                print(f"  {v.defect()}")


if __name__ == "__main__":
    main()
