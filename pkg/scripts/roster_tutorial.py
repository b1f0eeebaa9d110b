"""Worked tour of the three roster curves.

For each curve: a_p by point counting, the low-degree part of psi_2, the
additivity check and the order-1 search, followed by the curve-report
verdict.  Run with

    python3 scripts/roster_tutorial.py [--k 6]
"""
import argparse

from pjet.characters import curve_report, psi2_build
from pjet.elliptic import ROSTER, WeierstrassCurve, count_points_fp


def show_psi(psi, limit=8):
    items = sorted(psi.poly.items(), key=lambda kv: (len(kv[0]), kv[0]))[:limit]
    for mono, c in items:
        print(f"      {mono:>14}: {c.lift()}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=6)
    args = ap.parse_args()
    for entry in ROSTER:
        E = WeierstrassCurve.from_ints(entry["p"], entry["a4"], entry["a6"], args.k)
        a_p = count_points_fp(E)
        print(f"{entry['name']}: {E.label()}  ({entry['note']})")
        print(f"  #E(F_p) = {E.p + 1 - a_p}, a_p = {a_p}, {'ordinary' if a_p % E.p else 'supersingular'}")
        psi = psi2_build(E)
        print(f"  psi_2 to t-degree {psi.degree}, built at internal precision {psi.internal_prec}:")
        print(f"    coefficient of t'' = {psi.t2_coefficient.lift()}, of t' = {psi.tprime_coefficient.lift()}"
              f" (expected p and -a_p), shape ok: {psi.shape_ok()}")
        show_psi(psi)
        rep = curve_report(E)
        add = rep.additivity
        o1 = rep.order1_search
        print(f"  additivity: {add['passed']}/{add['trials']} trials at k_eff = {add['k_eff']}"
              f" (observed min digits {add['min_digits']})")
        print(f"  order-1 search: {o1['unknowns']} unknowns, {o1['equations']} equations,"
              f" nontrivial log-size {o1['nontrivial_log_size']}, with t' part {o1['tprime_log_size']},"
              f" least t' valuation {o1['tprime_valuation']}")
        if o1["best_character"]:
            print(f"    sample character: {o1['best_character']}")
        print(f"  verdict: {rep.frobenius_lift_verdict.value}\n")


if __name__ == "__main__":
    main()
