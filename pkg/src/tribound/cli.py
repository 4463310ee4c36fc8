"""Command-line front end.

Subcommands: spectrum | potential | wavefunction | plateau | check-quadrature.
Exit codes: 0 success, 2 configuration error, 3 numerical failure.  All
numeric output uses decimal notation with 10 significant digits; identical
configurations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import ParameterError, SolverError
from .oracle import direct_matrix
from .potential import PotentialParams, classify_shape, max_basis_index, potential_value
from .recursion import BasisParams, auto_nu
from .solver import (
    plateau_scan,
    quadrature_matrix,
    quadrature_rule,
    solve_bound_states,
)
from .wavefunction import default_r_grid, sample_wavefunction

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_KERNELS = (
    ("x", lambda x: x),
    ("1/(1-x)", lambda x: 1.0 / (1.0 - x)),
    ("1/(1+x)", lambda x: 1.0 / (1.0 + x)),
    ("1/(x^2-1)", lambda x: 1.0 / (x * x - 1.0)),
)


def fmt(v: float) -> str:
    """Decimal, 10 significant digits, locale independent."""
    return f"{float(v):.10g}"


def _round10(v: float):
    return float(fmt(v))


def _write_out(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _json_dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_config(path: str) -> dict[str, str]:
    """Flat key-value file; keys identical to flag names, '#' comments."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, val = line.partition("=")
        else:
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise ParameterError(f"{path}:{lineno}: expected 'key = value'")
            key, val = parts
        values[key.strip().lstrip("-")] = val.strip()
    return values


_COMMON_DEFAULTS = {
    "A": None, "B": None, "C": None, "lam": 1.0,
    "basis_degree": 100, "mu": 1.5, "nu": "auto",
    "format": "csv", "out": None,
}


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--A", type=float, default=None, help="strength of the 1/r term")
    p.add_argument("--B", type=float, default=None, help="strength of the 1/r^2 term (enters with a minus sign)")
    p.add_argument("--C", type=float, default=None, help="strength of the 1/r^3 term")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="range scale (default 1.0)")
    p.add_argument("--basis-degree", type=int, default=None,
                   help="number of basis functions (matrix dimension, default 100)")
    p.add_argument("--mu", type=float, default=None, help="computational basis parameter (default 1.5)")
    p.add_argument("--nu", default=None,
                   help="computational basis parameter; 'auto' means -2*basis_degree - mu - 2")
    p.add_argument("--format", choices=("csv", "json"), default=None, help="output format (default csv)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--config", default=None, help="flat key-value config file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tribound",
                                 description="Bound states of the 1/r, 1/r^2, 1/r^3 "
                                             "singular short-range potential.")
    sub = ap.add_subparsers(dest="command", required=True)

    consistent_help = ("assemble the Hamiltonian consistently with the potential as "
                       "evaluated (default follows the tabulated reference convention, "
                       "which halves the coth strength A; see README)")

    sp = sub.add_parser("spectrum", help="compute the bound-state spectrum")
    _add_common(sp)
    sp.add_argument("--consistent-potential", action="store_true", default=None,
                    help=consistent_help)

    pp = sub.add_parser("potential", help="sample the potential and classify its shape")
    _add_common(pp)
    pp.add_argument("--r-min", type=float, default=None)
    pp.add_argument("--r-max", type=float, default=None)
    pp.add_argument("--samples", type=int, default=None)

    wp = sub.add_parser("wavefunction", help="sample one bound-state wavefunction")
    _add_common(wp)
    wp.add_argument("--consistent-potential", action="store_true", default=None,
                    help=consistent_help)
    wp.add_argument("--state", type=int, default=None, help="bound-state index k (default 0)")
    wp.add_argument("--r-min", type=float, default=None)
    wp.add_argument("--r-max", type=float, default=None)
    wp.add_argument("--samples", type=int, default=None)

    lp = sub.add_parser("plateau", help="scan mu for the stability plateau")
    _add_common(lp)
    lp.add_argument("--consistent-potential", action="store_true", default=None,
                    help=consistent_help)
    lp.add_argument("--mu-min", type=float, default=None)
    lp.add_argument("--mu-max", type=float, default=None)
    lp.add_argument("--mu-steps", type=int, default=None, help="number of grid points")

    cq = sub.add_parser("check-quadrature",
                        help="compare quadrature matrices against direct integration")
    _add_common(cq)
    cq.add_argument("--max-degree", type=int, default=None,
                    help="largest basis size checked, 2..8 (default 5)")
    return ap


def _resolve(args: argparse.Namespace, extra_defaults: dict | None = None) -> dict:
    """Merge hard defaults, config-file values and explicit flags."""
    merged: dict = dict(_COMMON_DEFAULTS)
    if extra_defaults:
        merged.update(extra_defaults)
    if getattr(args, "config", None):
        file_vals = _load_config(args.config)
        for key, raw in file_vals.items():
            dest = {"lambda": "lam"}.get(key, key.replace("-", "_"))
            if dest not in merged:
                raise ParameterError(f"unknown config key {key!r}")
            merged[dest] = raw
    for dest in merged:
        val = getattr(args, dest, None)
        if val is not None:
            merged[dest] = val
    for key in ("A", "B", "C"):
        if merged[key] is None:
            raise ParameterError(f"--{key} is required (flag or config file)")
        merged[key] = float(merged[key])
    merged["lam"] = float(merged["lam"])
    merged["basis_degree"] = int(merged["basis_degree"])
    merged["mu"] = float(merged["mu"])
    return merged


def _resolve_nu(cfg: dict) -> float:
    nu = cfg["nu"]
    if isinstance(nu, str):
        if nu.strip().lower() == "auto":
            return auto_nu(cfg["mu"], cfg["basis_degree"])
        return float(nu)
    return float(nu)


def _as_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str):
        low = value.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ParameterError(f"expected a boolean, got {value!r}")
    return bool(value)


def _validate_basis(mu: float, nu: float, size: int):
    if not mu > -1.0:
        raise ParameterError(f"mu must exceed -1, got {mu}")
    if not (mu + nu < -2.0 * size - 1.0):
        raise ParameterError(
            f"mu + nu = {fmt(mu + nu)} violates mu + nu < -2*{size} - 1")


def _params_block(cfg: dict, nu: float) -> dict:
    return {
        "A": _round10(cfg["A"]), "B": _round10(cfg["B"]), "C": _round10(cfg["C"]),
        "lambda": _round10(cfg["lam"]), "basis_size": cfg["basis_degree"],
        "mu": _round10(cfg["mu"]), "nu": _round10(nu),
    }


def _cmd_spectrum(args) -> int:
    cfg = _resolve(args, {"consistent_potential": False})
    nu = _resolve_nu(cfg)
    _validate_basis(cfg["mu"], nu, cfg["basis_degree"])
    consistent = _as_bool(cfg["consistent_potential"])
    p = PotentialParams(A=cfg["A"], B=cfg["B"], C=cfg["C"], lam=cfg["lam"])
    spectrum = solve_bound_states(p, cfg["basis_degree"], mu=cfg["mu"], nu=nu,
                                  consistent_potential=consistent)
    note = None
    if cfg["A"] > -0.5:
        note = f"A = {fmt(cfg['A'])} > -1/2 admits no bound states"
    n_max = max_basis_index(cfg["A"])
    if cfg["format"] == "json":
        params = _params_block(cfg, nu)
        params["consistent_potential"] = consistent
        doc = {
            "command": "spectrum",
            "params": params,
            "states": [
                {"n": i, "minus_epsilon": _round10(-e),
                 "E_over_half_lambda_sq": _round10(e)}
                for i, e in enumerate(spectrum.epsilons)
            ],
            "diagnostics": {
                "discarded_count": spectrum.discarded_count,
                "max_residual": _round10(spectrum.max_residual),
                "bound_state_limit": None if n_max is None else n_max + 1,
                "note": note,
            },
        }
        _write_out(_json_dump(doc), cfg["out"])
    else:
        lines = ["n,minus_epsilon,E_over_half_lambda_sq"]
        for i, e in enumerate(spectrum.epsilons):
            lines.append(f"{i},{fmt(-e)},{fmt(e)}")
        _write_out("\n".join(lines) + "\n", cfg["out"])
        if note:
            print(note, file=sys.stderr)
    return EXIT_OK


def _shape_doc(p: PotentialParams) -> dict:
    report = classify_shape(p)
    return {
        "crossings": [{"x": _round10(c.x), "r": _round10(c.r)} for c in report.crossings],
        "extrema": [{"x": _round10(e.x), "r": _round10(e.r), "value": _round10(e.value)}
                    for e in report.extrema],
        "admits_bound_states": report.admits_bound_states,
        "satisfies_B_ge_C": report.satisfies_B_ge_C,
    }


def _cmd_potential(args) -> int:
    cfg = _resolve(args, {"r_min": 0.05, "r_max": 10.0, "samples": 400})
    r_min, r_max = float(cfg["r_min"]), float(cfg["r_max"])
    samples = int(cfg["samples"])
    if not (0.0 < r_min < r_max):
        raise ParameterError(f"need 0 < r_min < r_max, got {r_min}, {r_max}")
    if samples < 2:
        raise ParameterError(f"need at least 2 samples, got {samples}")
    p = PotentialParams(A=cfg["A"], B=cfg["B"], C=cfg["C"], lam=cfg["lam"])
    if p.C == 0.0:
        raise ParameterError("potential command needs C != 0 (figure units are lambda^2 C / 2)")
    r = np.geomspace(r_min, r_max, samples)
    # V in units lambda^2 C / 2
    v = potential_value(p, r) / (0.5 * p.lam**2 * p.C)
    shape = _shape_doc(p)
    if cfg["format"] == "json":
        doc = {
            "command": "potential",
            "params": {"A": _round10(p.A), "B": _round10(p.B), "C": _round10(p.C),
                       "lambda": _round10(p.lam), "gamma": _round10(p.gamma),
                       "xi": _round10(p.xi)},
            "shape": shape,
            "samples": [{"r": _round10(ri), "V_over_half_lambda_sq_C": _round10(vi)}
                        for ri, vi in zip(r, v)],
        }
        _write_out(_json_dump(doc), cfg["out"])
    else:
        lines = ["r,V_over_half_lambda_sq_C"]
        lines += [f"{fmt(ri)},{fmt(vi)}" for ri, vi in zip(r, v)]
        _write_out("\n".join(lines) + "\n", cfg["out"])
        print(json.dumps(shape), file=sys.stderr)
    return EXIT_OK


def _cmd_wavefunction(args) -> int:
    cfg = _resolve(args, {"state": 0, "r_min": None, "r_max": None, "samples": 2000,
                          "consistent_potential": False})
    nu = _resolve_nu(cfg)
    _validate_basis(cfg["mu"], nu, cfg["basis_degree"])
    k = int(cfg["state"])
    consistent = _as_bool(cfg["consistent_potential"])
    p = PotentialParams(A=cfg["A"], B=cfg["B"], C=cfg["C"], lam=cfg["lam"])
    spectrum = solve_bound_states(p, cfg["basis_degree"], mu=cfg["mu"], nu=nu,
                                  consistent_potential=consistent)
    if not 0 <= k < len(spectrum):
        raise ParameterError(
            f"state {k} out of range: {len(spectrum)} bound state(s) available")
    samples = int(cfg["samples"])
    if cfg["r_min"] is None and cfg["r_max"] is None:
        grid = default_r_grid(p.lam, samples)
    else:
        r_min = float(cfg["r_min"]) if cfg["r_min"] is not None else 1e-3 / p.lam
        r_max = float(cfg["r_max"]) if cfg["r_max"] is not None else 15.0 / p.lam
        if not (0.0 < r_min < r_max):
            raise ParameterError(f"need 0 < r_min < r_max, got {r_min}, {r_max}")
        grid = np.geomspace(r_min, r_max, samples)
    table = sample_wavefunction(k, float(spectrum.epsilons[k]), p, grid)
    meta = {
        "state": k,
        "epsilon": _round10(table.epsilon),
        "minus_epsilon": _round10(-table.epsilon),
        "mu_k": _round10(table.mu_k),
        "nu_k": _round10(table.nu_k),
        "terms_used": table.terms_used,
        "clamped_count": table.clamped_count,
    }
    if cfg["format"] == "json":
        params = _params_block(cfg, nu)
        params["consistent_potential"] = consistent
        doc = {
            "command": "wavefunction",
            "params": params,
            "state": meta,
            "samples": [{"r": _round10(ri), "psi": _round10(pi)}
                        for ri, pi in zip(table.r_grid, table.psi)],
        }
        _write_out(_json_dump(doc), cfg["out"])
    else:
        lines = ["r,psi"]
        lines += [f"{fmt(ri)},{fmt(pi)}" for ri, pi in zip(table.r_grid, table.psi)]
        _write_out("\n".join(lines) + "\n", cfg["out"])
        print(json.dumps(meta), file=sys.stderr)
    return EXIT_OK


def _cmd_plateau(args) -> int:
    cfg = _resolve(args, {"mu_min": 1.0, "mu_max": 2.0, "mu_steps": 11,
                          "consistent_potential": False})
    mu_min, mu_max = float(cfg["mu_min"]), float(cfg["mu_max"])
    steps = int(cfg["mu_steps"])
    if steps < 1 or (steps == 1 and mu_min != mu_max) or mu_min > mu_max:
        raise ParameterError("invalid mu grid specification")
    grid = np.linspace(mu_min, mu_max, steps)
    size = cfg["basis_degree"]
    for m in grid:
        nu_m = auto_nu(float(m), size)
        if not (float(m) > -1.0 and float(m) + nu_m < -2.0 * size - 1.0):
            raise ParameterError(f"grid point mu = {fmt(m)} violates the basis constraints")
    p = PotentialParams(A=cfg["A"], B=cfg["B"], C=cfg["C"], lam=cfg["lam"])
    scan = plateau_scan(p, size, grid,
                        consistent_potential=_as_bool(cfg["consistent_potential"]))
    k = scan.state_count
    table = scan.table()
    stats = [
        {"state": s.state,
         "delta": None if s.delta is None else _round10(s.delta),
         "mu_lo": _round10(s.mu_lo), "mu_hi": _round10(s.mu_hi),
         "points": s.points}
        for s in scan.stats
    ]
    if cfg["format"] == "json":
        doc = {
            "command": "plateau",
            "params": {"A": _round10(p.A), "B": _round10(p.B), "C": _round10(p.C),
                       "lambda": _round10(p.lam), "basis_size": size,
                       "consistent_potential": _as_bool(cfg["consistent_potential"])},
            "grid": [
                {"mu": _round10(m),
                 "minus_epsilons": [_round10(v) for v in table[i, :]]}
                for i, m in enumerate(grid)
            ],
            "plateaus": stats,
        }
        _write_out(_json_dump(doc), cfg["out"])
    else:
        header = "mu," + ",".join(f"minus_eps_{j}" for j in range(k))
        lines = [header]
        for i, m in enumerate(grid):
            lines.append(",".join([fmt(m)] + [fmt(v) for v in table[i, :]]))
        _write_out("\n".join(lines) + "\n", cfg["out"])
        print(json.dumps(stats), file=sys.stderr)
    return EXIT_OK


def _cmd_check_quadrature(args) -> int:
    cfg = _resolve(args, {"max_degree": 5})
    max_degree = int(cfg["max_degree"])
    if max_degree > 8:
        raise ParameterError(f"max degree is capped at 8, got {max_degree}")
    if max_degree < 2:
        raise ParameterError(f"need max degree >= 2, got {max_degree}")
    mu = cfg["mu"]
    rows = []
    for size in range(2, max_degree + 1):
        basis = BasisParams.from_size(mu, auto_nu(mu, size), size)
        rule = quadrature_rule(basis)
        for name, w in _KERNELS:
            approx = quadrature_matrix(rule, w)
            exact = direct_matrix(basis, w)
            diff = np.abs(approx - exact)
            rows.append({
                "size": size,
                "kernel": name,
                "max_abs_diff": _round10(diff.max()),
                "low_block_abs_diff": _round10(diff[:2, :2].max()),
            })
    if cfg["format"] == "json":
        doc = {"command": "check_quadrature",
               "params": {"mu": _round10(mu), "max_degree": max_degree},
               "rows": rows}
        _write_out(_json_dump(doc), cfg["out"])
    else:
        lines = ["size,kernel,max_abs_diff,low_block_abs_diff"]
        for r in rows:
            lines.append(f"{r['size']},{r['kernel']},{fmt(r['max_abs_diff'])},"
                         f"{fmt(r['low_block_abs_diff'])}")
        _write_out("\n".join(lines) + "\n", cfg["out"])
    return EXIT_OK


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "potential": _cmd_potential,
    "wavefunction": _cmd_wavefunction,
    "plateau": _cmd_plateau,
    "check-quadrature": _cmd_check_quadrature,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
