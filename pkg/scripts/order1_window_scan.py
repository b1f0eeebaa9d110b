"""Scan the order-1 character search over windows and precisions.

Prints, for each curve and each (degree bound, k'), the log_p-size of the
nontrivial part of the kernel, of its t'-part, and the least valuation of a
t'-coefficient (0 means a character t - u t' + ... with u a unit).  A nonzero t'-part that
persists as the window grows is a character of the formal disk, not a
truncation artifact.

    python3 scripts/order1_window_scan.py --extra 2
"""
import argparse

from pjet.characters import order1_additivity, order1_character_search
from pjet.elliptic import WeierstrassCurve, count_points_fp

CURVES = [(7, 0, 1), (7, 2, 3), (5, 0, 1), (11, 1, 3), (13, 2, 5)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--extra", type=int, default=2, help="scan degree bounds p .. p + extra")
    ap.add_argument("--kprimes", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--trials", type=int, default=20)
    args = ap.parse_args()
    print(f"{'curve':>14} {'a_p':>4} {'D':>3} {'kp':>3} {'nontriv':>8} {'tprime':>7} {'v(tp)':>6} {'additive':>9}")
    for p, a4, a6 in CURVES:
        try:
            E = WeierstrassCurve.from_ints(p, a4, a6, max(args.kprimes) + 1)
        except ValueError as exc:
            print(f"skip {(p, a4, a6)}: {exc}")
            continue
        a_p = count_points_fp(E)
        # below t-degree p the window misses the Witt term of F1 and t' alone looks additive
        for D in range(max(p, max(args.kprimes) + 1), p + args.extra + 1):
            for kp in args.kprimes:
                res = order1_character_search(E, D, D, kp)
                add = order1_additivity(E, res, args.trials, 0)["ok"] if res.nonzero else "-"
                print(f"{str((p, a4, a6)):>14} {a_p:>4} {D:>3} {kp:>3} {res.nontrivial_log_size:>8}"
                      f" {res.tprime_log_size:>7} {res.tprime_valuation:>6} {str(add):>9}")


if __name__ == "__main__":
    main()
