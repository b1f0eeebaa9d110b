"""Command-line front end.

    pjet verify-core  --p 3 --k 4 --degree 6 --seed 1
    pjet curve-report --p 7 --a4 0 --a6 1 --k 6
    pjet l11delta     --p 7 --a4 0 --a6 1 --n 100 --seed 1

Reports are key-sorted UTF-8 JSON on stdout.  Exit codes: 0 all checks pass,
1 some check failed, 2 usage error, 3 domain precondition (bad reduction).
Set PJET_THREADS to run independent pieces in worker processes; the output
does not depend on it.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Sequence

from . import __version__
from .padic import RingError, RingParams, default_modulus, ring_new
from .trace import operation

SCHEMA_VERSION = "1.0"

__operations__ = ["cmd_verify_core", "cmd_curve_report", "cmd_l11delta"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    p: int
    k: int
    d: int = 1
    degree: int | None = None
    kprime: int | None = None
    a4: int | None = None
    a6: int | None = None
    trials: int | None = None
    seed: int = 0
    extra: dict[str, Any] = field(default_factory=dict)

    def validate(self) -> None:
        try:
            ring_new(RingParams(self.p, max(self.k, 2)))
        except RingError as exc:
            raise UsageError(str(exc)) from None
        if self.k < 2:
            raise UsageError("k must be >= 2")
        if self.d < 1:
            raise UsageError("d must be >= 1")
        if self.degree is not None and self.degree < 1:
            raise UsageError("degree must be >= 1")
        if self.trials is not None and self.trials < 0:
            raise UsageError("trials must be >= 0")

    def echo(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if v is not None and k != "extra"}
        for key in ("a4", "a6"):
            if key in out:
                out[key] = str(out[key])
        out.update(self.extra)
        return out


def threads() -> int:
    raw = os.environ.get("PJET_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"PJET_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("PJET_THREADS must be >= 1")
    return n


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Ordered map; uses worker processes when PJET_THREADS > 1."""
    n = min(threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _check(name: str, ok: bool, witness: Any = None) -> dict:
    return {"name": name, "status": "pass" if ok else "fail", "witness": witness}


def _report(cfg: RunConfig, checks: list[dict], payload: dict, precision: dict, warnings=(), timing=None) -> dict:
    rep = {
        "schema_version": SCHEMA_VERSION,
        "tool": "pjet",
        "version": __version__,
        "command": cfg.command,
        "config": cfg.echo(),
        "checks": checks,
        "status": "pass" if all(c["status"] == "pass" for c in checks) else "fail",
        "payload": payload,
        "precision": precision,
        "warnings": list(warnings),
    }
    if timing is not None:
        rep["timing_seconds"] = round(timing, 3)
    return rep


# ---------------------------------------------------------------------------------
# verify-core


def _derivation_suite(args: tuple) -> dict:
    from .witt import is_p_derivation

    p, k, d, samples, seed = args
    modulus = default_modulus(p, d)
    ring = ring_new(RingParams(p, k, d, modulus))
    rng = random.Random(f"{seed}:{p}:{k}:{d}")
    elts = [ring.random(rng) for _ in range(2 * samples)]
    pairs = list(zip(elts[0::2], elts[1::2]))
    res = is_p_derivation(lambda a: a.delta(), elts[:4], p, pairs=pairs)
    witness = None
    if not res.ok:
        witness = {"law": res.law, "args": [a.to_json() for a in res.counterexample]}
    return {"name": f"p_derivation_d{d}", "ok": res.ok, "witness": witness,
            "modulus": [str(c) for c in modulus], "pairs": len(pairs)}


def _ghost_suite(p: int) -> tuple[bool, Any]:
    import sympy

    from .witt import WittPair, ghost, witt_add, witt_mul

    a0, a1, b0, b1 = sympy.symbols("a0 a1 b0 b1")
    x, y = WittPair(a0, a1, p), WittPair(b0, b1, p)
    gx, gy = ghost(x), ghost(y)
    gs, gm = ghost(witt_add(x, y)), ghost(witt_mul(x, y))
    for i in range(2):
        if sympy.expand(gs[i] - (gx[i] + gy[i])) != 0:
            return False, {"law": "add", "component": i}
        if sympy.expand(gm[i] - gx[i] * gy[i]) != 0:
            return False, {"law": "mul", "component": i}
    return True, None


@operation(
    anchor="verify-core: Witt and delta axioms, ghost homomorphism, jet-space square for two p-derivations",
    tests=("test_cli.py::test_verify_core_all_pass", "test_cli.py::test_usage_errors"),
    precision="delta at k-1; diagram exact at the given precision",
)
def cmd_verify_core(cfg: RunConfig) -> tuple[dict, int]:
    from .djet import verify_jet_square

    start = time.perf_counter()
    samples = cfg.trials if cfg.trials is not None else 200
    degree = cfg.degree if cfg.degree is not None else 6
    dims = sorted({1, 2, cfg.d})
    suites = parallel_map(_derivation_suite, [(cfg.p, cfg.k, d, samples, cfg.seed) for d in dims])
    checks = [_check(s["name"], s["ok"], s["witness"]) for s in suites]
    ok, wit = _ghost_suite(cfg.p)
    checks.append(_check("ghost_homomorphism", ok, wit))
    diag = verify_jet_square(degree, cfg.p, cfg.k, seed=cfg.seed)
    checks.append(_check("diagram_commutes", diag.commutes, diag.mismatches or None))
    checks.append(_check("diagram_cartesian", diag.cartesian, diag.mismatches or None))
    checks.append(_check("diagram_prolongation", diag.prolongation_compatible, diag.mismatches or None))
    payload = {
        "derivation_suites": [{k: v for k, v in s.items() if k != "witness"} for s in suites],
        "diagram": diag.to_json(),
    }
    precision = {"delta_output_prec": cfg.k - 1, "diagram_prec": diag.k}
    elapsed = time.perf_counter() - start if cfg.extra.get("timing") else None
    rep = _report(cfg, checks, payload, precision, timing=elapsed)
    return rep, EXIT_OK if rep["status"] == "pass" else EXIT_FAIL


# ---------------------------------------------------------------------------------
# curve-report and l11delta


def _curve(cfg: RunConfig):
    from .elliptic import WeierstrassCurve

    return WeierstrassCurve.from_ints(cfg.p, cfg.a4, cfg.a6, cfg.k)


@operation(
    anchor="curve-report: a_p, psi_2 shape and additivity, order-1 search and verdict",
    tests=("test_cli.py::test_golden_reports", "test_cli.py::test_singular_curve_exit_3"),
    precision="see the report's precision field",
)
def cmd_curve_report(cfg: RunConfig) -> tuple[dict, int]:
    from .characters import curve_report

    start = time.perf_counter()
    E = _curve(cfg)
    rep = curve_report(
        E,
        degree=cfg.degree,
        kprime=cfg.kprime if cfg.kprime is not None else 4,
        degree_t=cfg.extra.get("degree_t", 8),
        degree_tp=cfg.extra.get("degree_tprime", 8),
        trials=cfg.trials if cfg.trials is not None else 10,
        seed=cfg.seed,
        order1_trials=cfg.extra.get("order1_trials", 30),
    )
    payload = rep.to_json()
    checks = [
        _check("a_p_hasse", rep.a_p**2 <= 4 * rep.p, {"a_p": rep.a_p}),
        _check("psi2_integral", rep.psi2_checks["integral"]),
        _check("psi2_t2_divisible", rep.psi2_checks["t2_divisible_by_p"]),
        _check("psi2_shape", rep.psi2_checks["shape_ok"]),
        _check("psi2_additive", rep.additivity["ok"], rep.additivity["failures"] or None),
    ]
    if rep.order1_additivity is not None:
        checks.append(_check("order1_additive", rep.order1_additivity["ok"]))
    precision = {"psi2_prec": rep.k, "k_eff": rep.bounds["k_eff"], "kprime": rep.bounds["kprime"],
                 "trivial_threshold_valuation": rep.bounds["kprime"] - 1}
    elapsed = time.perf_counter() - start if cfg.extra.get("timing") else None
    out = _report(cfg, checks, payload, precision, timing=elapsed)
    return out, EXIT_OK if out["status"] == "pass" else EXIT_FAIL


def _l11_batch(args: tuple) -> list[dict]:
    from .characters import l11delta_eval, prolonged_group_law
    from .elliptic import WeierstrassCurve

    p, a4, a6, k, degree, seeds, perturb = args
    E = WeierstrassCurve.from_ints(p, a4, a6, k)
    law = prolonged_group_law(E, degree, order=1)
    out = []
    for seed in seeds:
        rng = random.Random(seed)
        t = E.ring(p * rng.randrange(p ** (k - 1)))
        tp = t.delta()
        tpp = tp.delta()
        genuine = l11delta_eval(law, t, tp, tp, tpp)
        t1 = tp + perturb
        perturbed = l11delta_eval(law, t, tp, t1, tpp)
        out.append({"t": str(t.lift()), "genuine": genuine.to_json(), "perturbed": perturbed.to_json(),
                    "genuine_zero": genuine.is_zero(), "perturbed_zero": perturbed.is_zero()})
    return out


@operation(
    anchor="l11delta: logarithmic derivative on genuine second jets (zero) and perturbed points (nonzero)",
    tests=("test_cli.py::test_l11delta_counts_and_empty", "test_acceptance.py::test_criterion_7_l11delta"),
    precision="k-1",
)
def cmd_l11delta(cfg: RunConfig) -> tuple[dict, int]:
    start = time.perf_counter()
    E = _curve(cfg)  # validates reduction
    n = cfg.trials if cfg.trials is not None else 100
    degree = cfg.degree if cfg.degree is not None else max(cfg.k, 8)
    perturb = cfg.extra.get("perturb", 1)
    seeds = [f"{cfg.seed}:{i}" for i in range(n)]
    chunks = [seeds[i:i + 25] for i in range(0, n, 25)]
    results = [r for chunk in parallel_map(
        _l11_batch, [(E.p, E.a4_int, E.a6_int, E.k, degree, c, perturb) for c in chunks]) for r in chunk]
    zeros = sum(r["genuine_zero"] for r in results)
    nonzeros = sum(not r["perturbed_zero"] for r in results)
    warnings = ["empty batch: checks pass vacuously"] if n == 0 else []
    checks = [
        _check("genuine_jets_map_to_zero", zeros == n,
               [r["t"] for r in results if not r["genuine_zero"]][:5] or None),
        _check("perturbed_points_map_to_nonzero", nonzeros == n,
               [r["t"] for r in results if r["perturbed_zero"]][:5] or None),
    ]
    payload = {"n": n, "zeros": zeros, "nonzeros": nonzeros, "perturbation": str(perturb),
               "degree": degree, "samples": results[: min(n, 5)]}
    precision = {"output_prec": E.k - 1}
    elapsed = time.perf_counter() - start if cfg.extra.get("timing") else None
    rep = _report(cfg, checks, payload, precision, warnings, timing=elapsed)
    return rep, EXIT_OK if rep["status"] == "pass" else EXIT_FAIL


# ---------------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pjet", description="p-jet spaces of elliptic curves: verification suites")
    parser.add_argument("--version", action="version", version=f"pjet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, k_default):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--k", type=int, default=k_default)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--degree", type=int, default=None)
        sp.add_argument("--pretty", action="store_true", help="human-readable summary instead of JSON")
        sp.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identity)")
        sp.add_argument("--output", default=None, help="write the JSON report to this file")

    vc = sub.add_parser("verify-core", help="Witt/delta axioms, ghost map, jet-space square")
    common(vc, 4)
    vc.add_argument("--d", type=int, default=1)
    vc.add_argument("--samples", type=int, default=200)

    cr = sub.add_parser("curve-report", help="a_p, psi_2 checks and the order-1 search for one curve")
    common(cr, 6)
    cr.add_argument("--a4", type=int, required=True)
    cr.add_argument("--a6", type=int, required=True)
    cr.add_argument("--kprime", type=int, default=4)
    cr.add_argument("--degree-t", type=int, default=8)
    cr.add_argument("--degree-tprime", type=int, default=8)
    cr.add_argument("--trials", type=int, default=10)
    cr.add_argument("--order1-trials", type=int, default=30)

    ld = sub.add_parser("l11delta", help="logarithmic derivative on genuine and perturbed points")
    common(ld, 6)
    ld.add_argument("--a4", type=int, required=True)
    ld.add_argument("--a6", type=int, required=True)
    ld.add_argument("--n", type=int, default=100)
    ld.add_argument("--perturb", type=int, default=1)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command, p=ns.p, k=ns.k, seed=ns.seed, degree=ns.degree)
    if ns.timing:
        cfg.extra["timing"] = True
    if ns.command == "verify-core":
        cfg.d = ns.d
        cfg.trials = ns.samples
    elif ns.command == "curve-report":
        cfg.a4, cfg.a6 = ns.a4, ns.a6
        cfg.kprime, cfg.trials = ns.kprime, ns.trials
        cfg.extra.update(degree_t=ns.degree_t, degree_tprime=ns.degree_tprime, order1_trials=ns.order1_trials)
        if ns.kprime < 2:
            raise UsageError("kprime must be >= 2")
        if ns.degree_t < ns.kprime + 1:
            raise UsageError("degree-t must be >= kprime + 1")
    elif ns.command == "l11delta":
        cfg.a4, cfg.a6 = ns.a4, ns.a6
        cfg.trials = ns.n
        cfg.extra["perturb"] = ns.perturb
        if ns.k < 3:
            raise UsageError("l11delta needs k >= 3")
    cfg.validate()
    return cfg


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_pretty(report: dict) -> str:
    lines = [f"pjet {report['command']}  status={report['status']}"]
    for c in report["checks"]:
        lines.append(f"  [{c['status']:>4}] {c['name']}")
    if report["command"] == "curve-report":
        pl = report["payload"]
        lines.append(f"  a_p={pl['a_p']} ordinary={pl['is_ordinary']} verdict={pl['verdict']}")
    for w in report["warnings"]:
        lines.append(f"  warning: {w}")
    return "\n".join(lines) + "\n"


COMMANDS = {"verify-core": cmd_verify_core, "curve-report": cmd_curve_report, "l11delta": cmd_l11delta}


def main(argv: Sequence[str] | None = None) -> int:
    from .elliptic import SingularReductionError

    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        threads()
    except UsageError as exc:
        print(f"pjet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report, code = COMMANDS[cfg.command](cfg)
    except SingularReductionError as exc:
        report = _report(cfg, [_check("good_reduction", False, {k: str(v) for k, v in exc.witness.items()})],
                         {"error": str(exc)}, {})
        code = EXIT_DOMAIN
    text = render_pretty(report) if ns.pretty else dumps(report)
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(report))
    sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
