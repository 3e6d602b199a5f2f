"""Command-line front end: solve, sweep, verify, profile.

Outputs are deterministic: fixed float formatting (17 significant digits),
fixed row order, no timestamps, so repeated runs with the same config are
byte-identical.

Exit codes: 0 ok, 1 verification failure, 2 invalid config, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import __version__
from .core import SampledFunction, constant, inner_slice, make_grid, sample
from .models import (
    GupOscillatorParams,
    SwansonParams,
    gup_oscillator_sl,
    mass_profile_gup,
    mass_profile_swanson,
    effective_potential_gup,
    effective_potential_swanson,
    gup_oscillator_raw,
    raw_residual_values,
    sl_residual_values,
    swanson_sl,
)
from .solver import (
    BracketError,
    SolverError,
    richardson,
    shooting_eigenvalue,
    solve_sl,
)


class ConfigError(ValueError):
    pass


EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3

MODELS = ("gup-oscillator", "swanson")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass(frozen=True)
class RunConfig:
    model: str = "gup-oscillator"
    omega: float = 1.0
    tau: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    pmax: float | None = None       # default 12/sqrt(omega)
    n: int = 1201
    k: int = 6
    format: str = "csv"
    out: str | None = None
    plot: bool = False
    jobs: int = 1

    def resolved_pmax(self) -> float:
        if self.pmax is not None:
            return self.pmax
        return 12.0 / math.sqrt(abs(self.omega)) if self.omega != 0 else 12.0

    def params(self):
        try:
            if self.model == "gup-oscillator":
                return GupOscillatorParams(omega=self.omega, tau=self.tau)
            if self.model == "swanson":
                return SwansonParams(
                    omega=self.omega, alpha=self.alpha, beta=self.beta, tau=self.tau
                )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        raise ConfigError(f"unknown model {self.model!r}")

    def build_sl(self, grid):
        params = self.params()
        if self.model == "gup-oscillator":
            return gup_oscillator_sl(params, grid)
        return swanson_sl(params, grid)

    def validate(self) -> "RunConfig":
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.n < 5:
            raise ConfigError(f"need n >= 5 grid points, got {self.n}")
        if self.k < 1:
            raise ConfigError(f"need k >= 1 eigenvalues, got {self.k}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.jobs < 1:
            raise ConfigError(f"need jobs >= 1, got {self.jobs}")
        self.params()
        return self

    def echo(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["pmax"] = self.resolved_pmax()
        return d


def emit_config(cfg: RunConfig) -> str:
    """Flat key = value rendering; parse_config_text round-trips it."""
    lines = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if v is None:
            continue
        if isinstance(v, bool):
            v = "true" if v else "false"
        elif isinstance(v, float):
            v = _fmt(v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


def parse_config_text(text: str) -> dict:
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key = value")
        key, _, raw = line.partition("=")
        values[key.strip()] = raw.strip()
    return values


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def config_from_sources(file_values: dict, cli_overrides: dict) -> RunConfig:
    """Build a RunConfig from config-file values with CLI flags winning."""
    merged = dict(file_values)
    merged.update({k: v for k, v in cli_overrides.items() if v is not None})
    kwargs = {}
    for key, raw in merged.items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(raw, str):
            kwargs[key] = _parse_value(key, raw)
        else:
            kwargs[key] = raw
    return RunConfig(**kwargs).validate()


def _parse_value(key: str, raw: str):
    if key in ("model", "format", "out"):
        return raw
    if key == "plot":
        if raw.lower() in ("true", "on", "1", "yes"):
            return True
        if raw.lower() in ("false", "off", "0", "no"):
            return False
        raise ConfigError(f"cannot parse boolean {key} = {raw!r}")
    try:
        if key in ("n", "k", "jobs"):
            return int(raw)
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"cannot parse {key} = {raw!r}") from exc


# ---------------------------------------------------------------- output


def write_table(header: list[str], rows: list[list], cfg: RunConfig, dest) -> None:
    if cfg.format == "csv":
        dest.write(",".join(header) + "\n")
        for row in rows:
            dest.write(
                ",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row)
                + "\n"
            )
    else:
        payload = {
            "meta": {"config": cfg.echo(), "version": __version__},
            "rows": [dict(zip(header, row)) for row in rows],
        }
        json.dump(payload, dest, indent=2, default=float)
        dest.write("\n")


def _open_dest(cfg: RunConfig):
    if cfg.out is None or cfg.out == "-":
        return sys.stdout, False
    return open(cfg.out, "w"), True


def svg_polyline(xs, ys, title: str) -> str:
    """Minimal static SVG 1.1: one polyline, a frame, and tick labels."""
    width, height, pad = 640, 420, 50
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    sx = (width - 2 * pad) / (x1 - x0)
    sy = (height - 2 * pad) / (y1 - y0)
    pts = " ".join(
        f"{pad + (x - x0) * sx:.2f},{height - pad - (y - y0) * sy:.2f}"
        for x, y in zip(xs, ys)
    )
    ticks = []
    for i in range(5):
        fx = x0 + (x1 - x0) * i / 4
        px = pad + (fx - x0) * sx
        ticks.append(
            f'<line x1="{px:.2f}" y1="{height - pad}" x2="{px:.2f}" '
            f'y2="{height - pad + 5}" stroke="black"/>'
            f'<text x="{px:.2f}" y="{height - pad + 18}" font-size="10" '
            f'text-anchor="middle">{fx:.3g}</text>'
        )
        fy = y0 + (y1 - y0) * i / 4
        py = height - pad - (fy - y0) * sy
        ticks.append(
            f'<line x1="{pad - 5}" y1="{py:.2f}" x2="{pad}" y2="{py:.2f}" '
            f'stroke="black"/>'
            f'<text x="{pad - 8}" y="{py + 3:.2f}" font-size="10" '
            f'text-anchor="end">{fy:.3g}</text>'
        )
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}">\n'
        f'<title>{title}</title>\n'
        f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" '
        f'height="{height - 2 * pad}" fill="none" stroke="black"/>\n'
        + "\n".join(ticks)
        + f'\n<polyline points="{pts}" fill="none" stroke="blue" '
        'stroke-width="1.2"/>\n</svg>\n'
    )


# ---------------------------------------------------------------- commands


def _solve_rows(cfg: RunConfig):
    pmax = cfg.resolved_pmax()
    params = cfg.params()
    g1 = make_grid(-pmax, pmax, cfg.n)
    g2 = g1.refined()
    spec1 = solve_sl(cfg.build_sl(g1), cfg.k)
    slp2 = cfg.build_sl(g2)
    spec2 = solve_sl(slp2, cfg.k)
    rows = []
    for idx in range(cfg.k):
        lam = richardson(float(spec1.eigenvalues[idx]), float(spec2.eigenvalues[idx]))
        energy = params.energy_from_eigenvalue(lam)
        rep = shooting_eigenvalue(slp2, idx)
        e_shoot = params.energy_from_eigenvalue(rep.eigenvalue)
        rows.append([idx, lam, energy, e_shoot, abs(energy - e_shoot)])
    return rows, spec2


def cmd_solve(cfg: RunConfig) -> int:
    rows, spec = _solve_rows(cfg)
    dest, close = _open_dest(cfg)
    try:
        write_table(
            ["index", "lambda", "energy", "energy_shooting", "abs_delta"],
            rows,
            cfg,
            dest,
        )
    finally:
        if close:
            dest.close()
    if cfg.plot and cfg.out not in (None, "-"):
        stem = cfg.out.rsplit(".", 1)[0]
        grid = spec.eigenfunctions[0].grid
        with open(stem + ".svg", "w") as fh:
            fh.write(
                svg_polyline(
                    grid.points, spec.eigenfunctions[0].values, "ground state"
                )
            )
        with open(stem + "_eigenfunctions.csv", "w") as fh:
            fh.write(
                "p," + ",".join(f"phi{j}" for j in range(len(spec.eigenfunctions)))
                + "\n"
            )
            for i, p in enumerate(grid.points):
                fh.write(
                    ",".join(
                        [_fmt(float(p))]
                        + [_fmt(float(f.values[i])) for f in spec.eigenfunctions]
                    )
                    + "\n"
                )
    return EXIT_OK


SWEEPABLE = ("tau", "omega", "alpha", "beta")


def cmd_sweep(cfg: RunConfig, param: str, start: float, stop: float, count: int) -> int:
    if param not in SWEEPABLE:
        raise ConfigError(f"sweep parameter must be one of {SWEEPABLE}, got {param!r}")
    if count < 2:
        raise ConfigError(f"sweep needs at least 2 points, got {count}")
    values = np.linspace(start, stop, count)
    for v in values:
        replace(cfg, **{param: float(v)}).validate()

    def solve_point(v: float):
        point_cfg = replace(cfg, **{param: float(v)})
        try:
            rows, _ = _solve_rows(point_cfg)
            return [(float(v), r[0], r[1], r[2], r[3], r[4], "") for r in rows]
        except (SolverError, BracketError, ValueError) as exc:
            nan = float("nan")
            return [
                (float(v), idx, nan, nan, nan, nan, str(exc))
                for idx in range(point_cfg.k)
            ]

    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        results = list(pool.map(solve_point, values))
    rows = [list(row) for point in results for row in point]
    dest, close = _open_dest(cfg)
    try:
        write_table(
            [param, "index", "lambda", "energy", "energy_shooting", "abs_delta",
             "error"],
            rows,
            cfg,
            dest,
        )
    finally:
        if close:
            dest.close()
    return EXIT_OK


def cmd_profile(cfg: RunConfig, which: str, energy: float | None) -> int:
    pmax = cfg.resolved_pmax()
    grid = make_grid(-pmax, pmax, cfg.n)
    params = cfg.params()
    try:
        if which == "mass":
            prof = (
                mass_profile_gup(params, grid)
                if cfg.model == "gup-oscillator"
                else mass_profile_swanson(params, grid)
            )
        elif which == "veff":
            if energy is None:
                raise ConfigError("veff profile requires --energy")
            prof = (
                effective_potential_gup(params, energy, grid)
                if cfg.model == "gup-oscillator"
                else effective_potential_swanson(params, energy, grid)
            )
        else:
            raise ConfigError(f"unknown profile {which!r}")
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = [[float(p), float(v)] for p, v in zip(grid.points, prof.values)]
    dest, close = _open_dest(cfg)
    try:
        write_table(["p", "value"], rows, cfg, dest)
    finally:
        if close:
            dest.close()
    if cfg.plot and cfg.out not in (None, "-"):
        stem = cfg.out.rsplit(".", 1)[0]
        with open(stem + ".svg", "w") as fh:
            fh.write(svg_polyline(grid.points, prof.values, f"{which} profile"))
    return EXIT_OK


# ---------------------------------------------------------------- verify


def _check(name: str, measured: float, tolerance: float) -> dict:
    return {
        "name": name,
        "measured": float(measured),
        "tolerance": float(tolerance),
        "passed": bool(measured <= tolerance),
    }


def _interval_check(name: str, measured: float, lo: float, hi: float) -> dict:
    return {
        "name": name,
        "measured": float(measured),
        "tolerance": [float(lo), float(hi)],
        "passed": bool(lo <= measured <= hi),
    }


def verify_vonroos() -> list[dict]:
    from .vonroos import (
        AmbiguityParams,
        MassFunction,
        effective_potential_vonroos,
        reduced_form_apply,
        vonroos_apply,
    )

    tau = 0.1
    checks = []
    for a, b in ((0.0, -1.0), (-0.5, 0.0), (0.0, 0.0), (-1.0, 0.0)):
        amb = AmbiguityParams(a, b)
        devs = []
        for n in (401, 801, 1601):
            grid = make_grid(-6.0, 6.0, n)
            mass = MassFunction.from_profile(
                sample(grid, lambda p: 1.0 / (1.0 + tau * p * p))
            )
            V = sample(grid, lambda p: p * p)
            phi = sample(grid, lambda p: np.exp(-0.5 * p * p))
            lhs = vonroos_apply(mass, amb, phi) + V * phi
            rhs = reduced_form_apply(mass, amb, V, phi)
            sl = inner_slice(n)
            devs.append(float(np.max(np.abs(lhs.values[sl] - rhs.values[sl]))))
        for i in range(len(devs) - 1):
            name = f"identity_convergence a={a} b={b} refine {i}"
            if devs[i + 1] < 1e-11:
                # Orderings where both application paths coincide leave only
                # rounding noise; no h^2 trend to measure.
                checks.append(_check(name + " (rounding floor)", devs[i + 1], 1e-11))
            else:
                checks.append(
                    _interval_check(name, devs[i] / devs[i + 1], 3.6, 4.4)
                )
    return checks


def verify_reduction() -> list[dict]:
    tau, omega = 0.1, 1.0
    grid = make_grid(-8.0, 8.0, 801)
    params = GupOscillatorParams(omega=omega, tau=tau)
    raw = gup_oscillator_raw(params, grid)
    slp = gup_oscillator_sl(params, grid)
    u = sample(grid, lambda p: 1.0 + tau * p * p)
    checks = []
    for j, (amp, width, shift) in enumerate(
        [(1.0, 1.0, 0.0), (0.7, 1.3, 0.5), (1.2, 0.8, -0.4), (0.5, 2.0, 1.0),
         (1.0, 0.6, -1.2)]
    ):
        phi = sample(
            grid, lambda p: amp * np.exp(-0.5 * ((p - shift) / width) ** 2)
        )
        lam = 1.0 + 0.1 * j
        lhs = u * raw_residual_values(raw, phi, lam)
        rhs = sl_residual_values(slp, phi, lam)
        defect = float(np.max(np.abs(lhs.values - rhs.values)))
        checks.append(_check(f"integrating_factor_identity gaussian {j}", defect, 1e-12))
    return checks


def verify_susy() -> list[dict]:
    from .susy import partner_check

    checks = []
    for tau, pmax in ((0.0, 8.0), (0.05, 14.0)):
        pc = partner_check(tau, pmax, 3001, k=5)
        checks.append(
            _check(
                f"partner_shift tau={tau}", float(np.max(pc.shift_defects)), 1e-4
            )
        )
        checks.append(
            _check(
                f"mapped_residual tau={tau}",
                float(np.max(pc.mapped_residuals)),
                1e-3,
            )
        )
    return checks


def verify_hermitize() -> list[dict]:
    from .algebra import (
        LadderRep,
        hermitized_problem,
        similarity_weight,
        swanson_coefficients,
        untransformed_residual,
        coefficient_match_report,
    )

    params = SwansonParams(omega=2.0, alpha=0.3, beta=0.1, tau=0.0)
    grid = make_grid(-10.0, 10.0, 8001)
    rep = LadderRep(r=constant(grid, 1.0), s=sample(grid, lambda p: p))
    coeffs = swanson_coefficients(rep, params)
    rho = similarity_weight(coeffs)
    spec = solve_sl(hermitized_problem(coeffs), 5)
    checks = []
    for n in range(5):
        res = untransformed_residual(
            coeffs, rho, spec.eigenfunctions[n], float(spec.eigenvalues[n])
        )
        checks.append(_check(f"rho_mapped_residual n={n}", res, 1e-4))
    herm = SwansonParams(omega=2.0, alpha=0.2, beta=0.2, tau=0.0)
    coeffs_h = swanson_coefficients(rep, herm)
    rho_h = similarity_weight(coeffs_h)
    checks.append(
        _check(
            "hermitian_case_rho_identity",
            float(np.max(np.abs(rho_h.values - 1.0))),
            0.0,
        )
    )
    report = coefficient_match_report(rep, params)
    checks.append(
        {
            "name": "coefficient_match_report",
            "measured": report["leading_coefficient_mismatch"],
            "tolerance": None,
            "passed": True,
            "info": report,
        }
    )
    return checks


VERIFY_SUITES = {
    "vonroos": verify_vonroos,
    "susy": verify_susy,
    "hermitize": verify_hermitize,
    "reduction": verify_reduction,
}


def cmd_verify(suite: str, out: str | None) -> int:
    checks = VERIFY_SUITES[suite]()
    passed = all(c["passed"] for c in checks)
    payload = {"suite": suite, "passed": passed, "checks": checks}
    text = json.dumps(payload, indent=2, default=float) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------- parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gupmdm",
        description="Deformed-oscillator / Swanson eigenproblems as "
        "momentum-dependent-mass Sturm-Liouville problems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--model", choices=MODELS)
        p.add_argument("--omega", type=float)
        p.add_argument("--tau", type=float)
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--pmax", type=float)
        p.add_argument("--n", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--out")
        p.add_argument("--plot", action="store_const", const=True)
        p.add_argument("--jobs", type=int)
        p.add_argument("--config", help="flat key = value config file")

    p_solve = sub.add_parser("solve", help="solve one eigenproblem")
    add_common(p_solve)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter linearly")
    add_common(p_sweep)
    p_sweep.add_argument("--param", required=True, choices=SWEEPABLE)
    p_sweep.add_argument("--start", type=float, required=True)
    p_sweep.add_argument("--stop", type=float, required=True)
    p_sweep.add_argument("--count", type=int, required=True)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=sorted(VERIFY_SUITES))
    p_verify.add_argument("--out")

    p_profile = sub.add_parser("profile", help="mass / effective-potential profile")
    add_common(p_profile)
    p_profile.add_argument("which", choices=("mass", "veff"))
    p_profile.add_argument("--energy", type=float)

    return parser


def _config_from_args(args) -> RunConfig:
    file_values: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_values = parse_config_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
    overrides = {
        name: getattr(args, name)
        for name in _FIELD_TYPES
        if hasattr(args, name)
    }
    return config_from_sources(file_values, overrides)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.suite, args.out)
        cfg = _config_from_args(args)
        if args.command == "solve":
            return cmd_solve(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg, args.param, args.start, args.stop, args.count)
        if args.command == "profile":
            return cmd_profile(cfg, args.which, args.energy)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, BracketError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
