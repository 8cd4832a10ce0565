"""Print interval sizes above and at each catalog clone for a basis family."""
import argparse
import time
from pathlib import Path

from strongclones.checks import INTERVAL_TARGETS
from strongclones.intervals import count_exact, export_dot, interval_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", help="override the basis family for every clone (e.g. all)")
    ap.add_argument("--dot-dir", help="write one DOT file per clone here")
    args = ap.parse_args()
    print(f"{'clone':<10} {'family':<7} {'up':>4} {'exact':>6} {'expected':>10} {'secs':>6}")
    for clone, family, up, exact in INTERVAL_TARGETS:
        family = args.family or family
        t = time.perf_counter()
        rep = interval_report(clone, family)
        secs = time.perf_counter() - t
        want = f"{up}/{exact if exact is not None else '-'}"
        print(f"{clone:<10} {family:<7} {len(rep):>4} {count_exact(rep, clone):>6} {want:>10} {secs:>6.2f}")
        for note in rep.notes:
            print(f"  note: {note}")
        if args.dot_dir:
            path = Path(args.dot_dir) / f"{clone.replace('∩', '_')}.dot"
            path.write_text(export_dot(rep, clone))


if __name__ == "__main__":
    main()
