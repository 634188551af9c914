"""Command-line front end: ``scan``, ``sudden-death``, ``resonance`` and ``oracle``."""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from .bogoliubov import effective_squeezing
from .config import (
    ConfigError,
    RunConfig,
    hbar_over_kB_K_from_natural,
    kelvin_from_natural,
    load_config,
)
from .entanglement import eof_from_nu, nats_to_bits, sudden_death_from_occupation
from .errors import SingleModeSqueezingError, TruncationLeakageError
from .fock_oracle import agreement_suite
from .gaussian_core import ppt_nu_minus, thermal_cm, apply_symplectic
from .output import TOOL_VERSION, render_csv, render_json
from .quench import QuenchSpec, make_k_grid, quench_frequencies, scan_spectrum
from .resonance import (
    accumulate,
    analytic_family,
    double_quench_from_frequencies,
    resonance_residual,
    solve_transcendent,
    trivial_times,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTATION = 3
EXIT_DISAGREEMENT = 4
EXIT_LEAKAGE = 5

RESONANCE_TOL = 1e-9


def _spec(cfg: RunConfig) -> QuenchSpec:
    return QuenchSpec(cfg.c_in_m_per_s, cfg.c_out_m_per_s, cfg.epsilon2_m4_per_s2, cfg.dispersion_sign, cfg.t0_s)


def _eof(value: float, bits: bool) -> float:
    return nats_to_bits(value) if bits else value


def _verdict(temperature: float, t_sd: float) -> str:
    if not t_sd > 0:
        return "no entanglement possible"
    return "entangled" if temperature < t_sd else "separable"


def _scan_points(cfg, jobs):
    g = cfg.k_grid
    ks = make_k_grid(g.k_min_per_m, g.k_max_per_m, g.count, g.scale)
    return scan_spectrum(ks, _spec(cfg), cfg.temperature, jobs=jobs)


def cmd_scan(cfg: RunConfig, jobs: int = 1, bits: bool = False):
    points = _scan_points(cfg, jobs)
    rows = []
    for p in points:
        rows.append(
            {
                "k": p.k,
                "omega_in": p.omega_in,
                "omega_out": p.omega_out,
                "beta_sq": p.beta_sq,
                "n_initial": p.n_avg_initial,
                "n_final": p.n_avg_final,
                "nu_minus": p.nu_minus,
                "eof": _eof(p.eof_nats, bits),
                "t_e": p.t_entanglement,
                "t_sd": p.t_sudden_death,
                "error": p.error,
            }
        )
    valid = [r for r in rows if r["error"] is None]
    best = max(valid, key=lambda r: r["eof"], default=None)
    summary = {
        "points": len(rows),
        "errors": len(rows) - len(valid),
        "eof_units": "bits" if bits else "nats",
        "max_eof": best["eof"] if best else None,
        "k_at_max_eof": best["k"] if best else None,
    }
    return rows, summary, EXIT_OK


def cmd_sudden_death(cfg: RunConfig, jobs: int = 1, bits: bool = False):
    temperature = cfg.temperature
    rows = []
    for p in _scan_points(cfg, jobs):
        rows.append(
            {
                "source": "scan",
                "k": p.k,
                "omega_in": p.omega_in,
                "omega_out": p.omega_out,
                "beta_sq": p.beta_sq,
                "t_e": p.t_entanglement,
                "t_sd": p.t_sudden_death,
                "t_sd_hbar_over_kB_K": hbar_over_kB_K_from_natural(p.t_sudden_death),
                "t_sd_kelvin": kelvin_from_natural(p.t_sudden_death),
                "temperature": temperature,
                "entangled": None if p.error else bool(temperature < p.t_sudden_death),
                "verdict": None if p.error else _verdict(temperature, p.t_sudden_death),
                "error": p.error,
            }
        )
    if cfg.measured is not None:
        m = cfg.measured
        inf = sudden_death_from_occupation(m.n_avg, m.omega_in_rad_per_s, m.omega_out_rad_per_s, temperature)
        rows.append(
            {
                "source": "measured",
                "k": None,
                "omega_in": m.omega_in_rad_per_s,
                "omega_out": m.omega_out_rad_per_s,
                "beta_sq": inf.beta_sq,
                "t_e": inf.t_entanglement,
                "t_sd": inf.t_sudden_death,
                "t_sd_hbar_over_kB_K": hbar_over_kB_K_from_natural(inf.t_sudden_death),
                "t_sd_kelvin": kelvin_from_natural(inf.t_sudden_death),
                "temperature": temperature,
                "entangled": inf.entangled,
                "verdict": inf.verdict,
                "error": None,
            }
        )
    summary = {
        "temperature_natural": temperature,
        "temperature_hbar_over_kB_K": hbar_over_kB_K_from_natural(temperature),
        "temperature_kelvin": kelvin_from_natural(temperature),
        "entangled_points": sum(1 for r in rows if r["entangled"]),
    }
    return rows, summary, EXIT_OK


def _resonance_row(section, index, t_minus, kind, s, m=None, n=None):
    residual = resonance_residual(s)
    scale = max(1.0, float(np.max(np.abs(s))) ** 2)
    try:
        r = effective_squeezing(s) if residual <= RESONANCE_TOL * scale else None
    except SingleModeSqueezingError:
        r = None
    return {
        "section": section,
        "index": index,
        "t_minus": t_minus,
        "kind": kind,
        "m": m,
        "n": n,
        "residual": residual,
        "r_per_shot": r,
    }


def cmd_resonance(cfg: RunConfig, jobs: int = 1, bits: bool = False):
    res = cfg.resonance
    w_in, w_out = quench_frequencies(res.k_per_m, _spec(cfg))
    t1 = cfg.t1_s
    lo, hi = res.t_minus_window_s

    def composite(t_minus):
        return double_quench_from_frequencies(w_in, w_out, t1, t1 + t_minus)

    rows = []
    for i, t in enumerate(trivial_times(w_out, (lo, hi))):
        rows.append(_resonance_row("trivial", i, t, "trivial", composite(t)))
    numeric = [s for s in solve_transcendent(w_in, w_out, (lo, hi)) if s.kind == "numeric_root"]
    for i, sol in enumerate(numeric):
        rows.append(_resonance_row("resonant", i, sol.t_minus, sol.kind, composite(sol.t_minus)))
    n_max = max(1, int(hi * abs(w_in - w_out) / math.pi))
    analytic = [a for a in analytic_family(w_in, w_out, n_max=n_max) if lo <= a.t_minus <= hi]
    for i, sol in enumerate(analytic):
        rows.append(_resonance_row("analytic", i, sol.t_minus, sol.kind, composite(sol.t_minus), sol.m, sol.n))

    candidates = [r for r in rows if r["section"] != "trivial" and r["r_per_shot"] is not None]
    best = max(candidates, key=lambda r: (r["r_per_shot"], -r["t_minus"]), default=None)
    initial = thermal_cm(w_in, cfg.temperature)
    if best is not None:
        reports = accumulate(composite(best["t_minus"]), res.repetitions, initial, omega=w_in)
        for n, rep in enumerate(reports, start=1):
            rows.append(
                {
                    "section": "accumulation",
                    "index": n,
                    "t_minus": best["t_minus"],
                    "kind": best["kind"],
                    "nu_minus": rep.nu_minus,
                    "eof": _eof(rep.eof_nats, bits),
                    "n_avg": rep.avg_particle_number,
                    "t_e": rep.t_entanglement,
                    "t_sd": rep.t_sudden_death,
                }
            )

    configured = {"t1": t1, "t2": cfg.t2_s}
    if cfg.t2_s != t1:
        s_cfg = double_quench_from_frequencies(w_in, w_out, t1, cfg.t2_s)
        nu = ppt_nu_minus(apply_symplectic(s_cfg, initial))
        configured.update(residual=resonance_residual(s_cfg), nu_minus=nu, eof=_eof(eof_from_nu(nu), bits))
    summary = {
        "k": res.k_per_m,
        "omega_in": w_in,
        "omega_out": w_out,
        "trivial_count": sum(1 for r in rows if r["section"] == "trivial"),
        "resonant_count": len(numeric),
        "analytic_count": len(analytic),
        "best_t_minus": best["t_minus"] if best else None,
        "best_r_per_shot": best["r_per_shot"] if best else None,
        "configured_double_quench": configured,
        "eof_units": "bits" if bits else "nats",
    }
    return rows, summary, EXIT_OK


def cmd_oracle(cfg: RunConfig, jobs: int = 1, bits: bool = False):
    o = cfg.oracle
    report = agreement_suite(o.r_values, o.nbar_values, o.cutoff, o.leakage_bound, o.deviation_tol)
    rows = [
        {
            "r": p.r,
            "nbar": p.nbar,
            "cutoff": p.cutoff,
            "cm_deviation": p.cm_deviation,
            "leakage": p.leakage,
            "leakage_ok": p.leakage_ok,
            "nu_minus": p.nu_minus,
            "min_pt_eigenvalue": p.min_pt_eigenvalue,
            "gaussian_entangled": p.gaussian_entangled,
            "fock_entangled": p.fock_entangled,
            "agree": p.agree,
        }
        for p in report.points
    ]
    summary = {
        "points": len(rows),
        "max_deviation": report.max_deviation,
        "deviation_tol": o.deviation_tol,
        "verdict_agreement": sum(1 for p in report.points if p.agree),
        "leakage_failures": len(report.leakage_failures),
        "disagreements": len(report.disagreements),
        "passed": report.passed,
    }
    if report.leakage_failures:
        code = EXIT_LEAKAGE
    elif report.disagreements:
        code = EXIT_DISAGREEMENT
    else:
        code = EXIT_OK
    return rows, summary, code


COMMANDS = {
    "scan": cmd_scan,
    "sudden-death": cmd_sudden_death,
    "resonance": cmd_resonance,
    "oracle": cmd_oracle,
}


def _print_oracle_table(rows, summary, stream):
    print(f"{'r':>6} {'nbar':>6} {'cutoff':>6} {'cm_dev':>10} {'leakage':>10} {'gauss':>6} {'fock':>6}  agree", file=stream)
    for r in rows:
        print(
            f"{r['r']:6.3f} {r['nbar']:6.3f} {r['cutoff']:6d} {r['cm_deviation']:10.3e} {r['leakage']:10.3e} "
            f"{str(r['gaussian_entangled']):>6} {str(r['fock_entangled']):>6}  {r['agree']}",
            file=stream,
        )
    print(
        f"max CM deviation {summary['max_deviation']:.3e} (tol {summary['deviation_tol']:.1e}); "
        f"verdict agreement {summary['verdict_agreement']}/{summary['points']}; "
        f"leakage failures {summary['leakage_failures']}; {'PASS' if summary['passed'] else 'FAIL'}",
        file=stream,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration (defaults apply when omitted)")
    common.add_argument("--output", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default: config 'output')")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes for k scans")
    common.add_argument("--bits", action="store_true", help="report entanglement of formation in bits")

    parser = argparse.ArgumentParser(
        prog="analogue-entanglement",
        description="Entanglement generated by quenches of the speed of sound.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("scan", parents=[common], help="per-k particle numbers and entanglement")
    sub.add_parser("sudden-death", parents=[common], help="sudden-death temperatures and verdicts")
    sub.add_parser("resonance", parents=[common], help="double-quench resonances and accumulation")
    sub.add_parser("oracle", parents=[common], help="Gaussian vs truncated-Fock agreement suite")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.jobs < 1:
            raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    bits = args.bits or cfg.eof_units == "bits"
    fmt = args.format or cfg.output
    try:
        rows, summary, code = COMMANDS[args.command](cfg, jobs=args.jobs, bits=bits)
    except TruncationLeakageError as exc:
        print(f"truncation leakage: {exc}", file=sys.stderr)
        return EXIT_LEAKAGE
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION

    echo = cfg.echo()
    if fmt == "json":
        text = render_json(args.command, echo, rows, summary)
    else:
        text = render_csv(args.command, echo, rows)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.command == "oracle":
        _print_oracle_table(rows, summary, sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
