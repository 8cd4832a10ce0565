"""Check xi_j against rho_C and rho_1 on the column-multiset path."""
import argparse
import time

from strongclones.families import rho_1, rho_c, xi
from strongclones.preserve import multiset_count, preserves_symmetric


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-j", type=int, default=2)
    ap.add_argument("--budget", type=int, default=10**7, help="multiset budget per relation")
    args = ap.parse_args()
    for j in range(1, args.max_j + 1):
        f = xi(j)
        for name, rho in (("rho_C", rho_c()), ("rho_1", rho_1())):
            t = time.perf_counter()
            ok = preserves_symmetric(f, rho, args.budget)
            print(f"xi_{j} (arity {f.arity}) vs {name}: {multiset_count(f.arity, rho)} multisets, "
                  f"preserved={ok} ({time.perf_counter() - t:.2f} s)")


if __name__ == "__main__":
    main()
