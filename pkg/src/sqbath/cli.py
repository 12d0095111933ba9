"""
Batch front end: scenario configs, sweeps, figure-data reproduction.

Scenarios
---------
constant_squeeze   massless bath in a squeezed thermal state (fixed eta, theta)
parametric         bath squeezed by a mass ramp m_i -> m_f; the squeeze
                   spectrum is computed from the mode equation and fed to
                   the detector dynamics
finite_coupling    plain thermal bath; the oscillator acquires squeezing
                   through the finite coupling, tracked by the extracted
                   (Xi, eta, theta) trajectory

Configs are YAML (comment friendly, nested sections); every default is
materialized into the run manifest so outputs are reproducible from the
manifest alone.  CSV bodies are deterministic: re-running an identical
config reproduces them byte for byte.

Exit codes: 0 success, 2 configuration error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import copy
import hashlib
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .bath_kernels import BathSpec, SqueezeSpectrum, save_spectrum_csv
from .energy_fdr import fdr_oscillator, power_in, power_out
from .errors import ConfigurationError, ConvergenceError, SqbathError
from .gaussian_state import CovarianceState, SqueezeParam, extract_squeeze
from .oscillator_dynamics import (
    OscillatorSpec,
    QuadratureConfig,
    chi_hadamard,
    chi_hadamard_components,
    covariance_evolution,
    effective_response,
    ns_st_split,
)
from .parametric_mode import MassProfile, ProfileShape, squeeze_spectrum

SCENARIOS = ("constant_squeeze", "parametric", "finite_coupling")
PRODUCTS = (
    "covariances",
    "fluxes",
    "fdr",
    "hadamard_surface",
    "squeeze_trajectory",
    "ns_split",
)
FIGURES = ("4", "5", "6", "7", "grn3d", "tan2eta", "tanphi")

_FLOAT_FMT = "{:.16e}"  # 17 significant digits


# ---------------------------------------------------------------------------
# config parsing


def _as_float(value, where: str) -> float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", ".inf", "+inf", "infinity"):
            return math.inf
        try:
            return float(value)
        except ValueError:
            raise ConfigurationError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    raise ConfigurationError(f"{where}: expected a number, got {value!r}")


def _grid(section, where: str, default=None) -> np.ndarray:
    if section is None:
        if default is not None:
            return default
        raise ConfigurationError(f"{where}: missing grid section")
    start = _as_float(section.get("start", section.get("min")), f"{where}.start")
    stop = _as_float(section.get("stop", section.get("max")), f"{where}.stop")
    points = int(section.get("points", 0))
    if points < 2 or not stop > start:
        raise ConfigurationError(f"{where}: need stop > start and points >= 2")
    if section.get("spacing", "linear") == "log":
        if start <= 0:
            raise ConfigurationError(f"{where}: log spacing requires start > 0")
        return np.geomspace(start, stop, points)
    return np.linspace(start, stop, points)


@dataclass
class RunConfig:
    """Validated run configuration with all defaults materialized."""

    scenario: str
    oscillator: OscillatorSpec
    quad: QuadratureConfig
    outputs: tuple[str, ...]
    time_grid: np.ndarray
    init: CovarianceState
    bath_beta: float
    bath_eta: float = 0.0
    bath_theta: float = 0.0
    profile: MassProfile | None = None
    k_grid: np.ndarray | None = None
    fdr_grid: np.ndarray | None = None
    hadamard_grid: np.ndarray | None = None
    ns_thetas: tuple[float, ...] = ()
    hadamard_factored: bool = False
    sweep: dict | None = None
    frequency_convention: str = "omega_r"
    raw: dict = field(default_factory=dict)


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigurationError("config root must be a mapping")
    scenario = data.get("scenario")
    if scenario not in SCENARIOS:
        raise ConfigurationError(
            f"scenario must be one of {SCENARIOS}, got {scenario!r}"
        )

    osc = data.get("oscillator", {})
    m = _as_float(osc.get("m", 1.0), "oscillator.m")
    gamma = _as_float(osc.get("gamma", 0.1), "oscillator.gamma")
    convention = "omega_r"
    try:
        if "Omega" in osc:
            if "omega_r" in osc:
                raise ConfigurationError(
                    "oscillator: give either omega_r or Omega, not both"
                )
            spec = OscillatorSpec.from_resonance(
                m, _as_float(osc["Omega"], "oscillator.Omega"), gamma
            )
            convention = "Omega"
        else:
            spec = OscillatorSpec(
                m, _as_float(osc.get("omega_r", 1.0), "oscillator.omega_r"), gamma
            )
    except SqbathError as exc:
        raise ConfigurationError(f"oscillator: {exc}") from exc

    bath = data.get("bath", {})
    beta = _as_float(bath.get("beta", 1.0), "bath.beta")
    eta = _as_float(bath.get("eta", 0.0), "bath.eta")
    theta = _as_float(bath.get("theta", 0.0), "bath.theta")
    if scenario != "constant_squeeze" and eta != 0.0:
        raise ConfigurationError(
            f"bath.eta is only meaningful for constant_squeeze (scenario {scenario})"
        )

    profile = None
    k_grid = None
    if scenario == "parametric":
        prof = data.get("profile")
        if prof is None:
            raise ConfigurationError("parametric scenario requires a profile section")
        try:
            profile = MassProfile(
                mass_i=_as_float(prof.get("mass_i", 0.0), "profile.mass_i"),
                mass_f=_as_float(prof.get("mass_f", 0.0), "profile.mass_f"),
                t_i=_as_float(prof.get("t_i", 0.0), "profile.t_i"),
                t_f=_as_float(prof.get("t_f", 1.0), "profile.t_f"),
                shape=ProfileShape(prof.get("shape", "tanh")),
                smoothstep_order=int(prof.get("smoothstep_order", 2)),
            )
        except (ValueError, SqbathError) as exc:
            raise ConfigurationError(f"profile: {exc}") from exc
        kg = data.get("k_grid")
        if kg is None:
            raise ConfigurationError("parametric scenario requires a k_grid section")
        kg = dict(kg)
        kg.setdefault("spacing", "log")
        k_grid = _grid(kg, "k_grid")
    elif data.get("profile") is not None:
        raise ConfigurationError(f"scenario {scenario} forbids a profile section")

    quad_sec = data.get("quadrature", {})
    cutoff = quad_sec.get("cutoff", 1000.0 * spec.omega_r)
    try:
        quad = QuadratureConfig(
            cutoff=None if cutoff is None else _as_float(cutoff, "quadrature.cutoff"),
            epsilon=_as_float(quad_sec.get("epsilon", 0.0), "quadrature.epsilon"),
            rel_tol=_as_float(quad_sec.get("rel_tol", 1e-8), "quadrature.rel_tol"),
            abs_tol=_as_float(quad_sec.get("abs_tol", 1e-12), "quadrature.abs_tol"),
            max_subdivisions=int(quad_sec.get("max_subdivisions", 2000)),
        )
    except SqbathError as exc:
        raise ConfigurationError(f"quadrature: {exc}") from exc

    init_sec = data.get("initial_state")
    if init_sec is None:
        # oscillator ground state
        init = CovarianceState(
            xx=1.0 / (2.0 * spec.m * spec.omega_r), pp=0.5 * spec.m * spec.omega_r
        )
    else:
        try:
            init = CovarianceState(
                xx=_as_float(init_sec.get("xx"), "initial_state.xx"),
                pp=_as_float(init_sec.get("pp"), "initial_state.pp"),
                xp=_as_float(init_sec.get("xp", 0.0), "initial_state.xp"),
            )
        except SqbathError as exc:
            raise ConfigurationError(f"initial_state: {exc}") from exc

    outputs = tuple(data.get("outputs", ["covariances"]))
    for product in outputs:
        if product not in PRODUCTS:
            raise ConfigurationError(
                f"unknown output product {product!r}; known: {PRODUCTS}"
            )

    time_grid = _grid(
        data.get("time_grid"),
        "time_grid",
        default=np.linspace(1.0, 30.0 / max(spec.gamma, 1e-3), 40),
    )
    fdr_grid = None
    if "fdr" in outputs:
        fdr_grid = _grid(
            data.get("fdr_grid"),
            "fdr_grid",
            default=np.linspace(-10.0 * spec.omega_r, 10.0 * spec.omega_r, 1001),
        )
    hadamard_grid = None
    if "hadamard_surface" in outputs:
        hadamard_grid = _grid(
            data.get("hadamard_grid"),
            "hadamard_grid",
            default=np.linspace(20.0, 40.0, 9),
        )
    ns_thetas = tuple(
        _as_float(v, "ns_thetas") for v in data.get("ns_thetas", [theta])
    )

    sweep = data.get("sweep")
    if sweep is not None:
        if "path" not in sweep:
            raise ConfigurationError("sweep: missing parameter path")
        values = _sweep_values(sweep)
        if len(values) == 0:
            raise ConfigurationError("sweep: empty value range")

    return RunConfig(
        scenario=scenario,
        oscillator=spec,
        quad=quad,
        outputs=outputs,
        time_grid=time_grid,
        init=init,
        bath_beta=beta,
        bath_eta=eta,
        bath_theta=theta,
        profile=profile,
        k_grid=k_grid,
        fdr_grid=fdr_grid,
        hadamard_grid=hadamard_grid,
        ns_thetas=ns_thetas,
        hadamard_factored=bool(data.get("hadamard_factored", False)),
        sweep=sweep,
        frequency_convention=convention,
        raw=copy.deepcopy(data),
    )


def _sweep_values(sweep: dict) -> list[float]:
    if "values" in sweep:
        return [_as_float(v, "sweep.values") for v in sweep["values"]]
    start = _as_float(sweep.get("start"), "sweep.start")
    stop = _as_float(sweep.get("stop"), "sweep.stop")
    steps = int(sweep.get("steps", 0))
    if steps < 1:
        raise ConfigurationError("sweep: steps must be >= 1")
    if sweep.get("spacing", "linear") == "log":
        return list(np.geomspace(start, stop, steps))
    return list(np.linspace(start, stop, steps))


# ---------------------------------------------------------------------------
# manifest-friendly resolved view of a config


def resolved_config(cfg: RunConfig) -> dict:
    out = {
        "scenario": cfg.scenario,
        "oscillator": {
            "m": cfg.oscillator.m,
            "omega_r": cfg.oscillator.omega_r,
            "Omega": cfg.oscillator.Omega,
            "gamma": cfg.oscillator.gamma,
            "frequency_convention": cfg.frequency_convention,
        },
        "bath": {
            "beta": cfg.bath_beta,
            "eta": cfg.bath_eta,
            "theta": cfg.bath_theta,
        },
        "quadrature": {
            "cutoff": cfg.quad.cutoff,
            "epsilon": cfg.quad.epsilon,
            "rel_tol": cfg.quad.rel_tol,
            "abs_tol": cfg.quad.abs_tol,
            "max_subdivisions": cfg.quad.max_subdivisions,
        },
        "initial_state": {"xx": cfg.init.xx, "pp": cfg.init.pp, "xp": cfg.init.xp},
        "time_grid": [float(t) for t in cfg.time_grid],
        "outputs": list(cfg.outputs),
        "units": "hbar = c = k_B = 1; frequencies in units of the "
        "configured oscillator frequency",
    }
    if cfg.profile is not None:
        out["profile"] = {
            "mass_i": cfg.profile.mass_i,
            "mass_f": cfg.profile.mass_f,
            "t_i": cfg.profile.t_i,
            "t_f": cfg.profile.t_f,
            "shape": cfg.profile.shape.value,
            "smoothstep_order": cfg.profile.smoothstep_order,
            "ramp": "tanh acts on m^2(t), centered mid-ramp, width "
            "(t_f - t_i)/6, clipped to the constants outside",
        }
        out["k_grid"] = [float(k) for k in cfg.k_grid]
    if cfg.fdr_grid is not None:
        out["fdr_grid"] = [float(w) for w in cfg.fdr_grid]
    if cfg.hadamard_grid is not None:
        out["hadamard_grid"] = [float(t) for t in cfg.hadamard_grid]
        out["hadamard_factored"] = cfg.hadamard_factored
    if cfg.ns_thetas:
        out["ns_thetas"] = list(cfg.ns_thetas)
    if cfg.sweep is not None:
        out["sweep"] = cfg.sweep
    return out


# ---------------------------------------------------------------------------
# products


def _build_bath(cfg: RunConfig) -> tuple[BathSpec, SqueezeSpectrum | None]:
    if cfg.scenario == "parametric":
        spectrum = squeeze_spectrum(cfg.profile, cfg.k_grid)
        bath = BathSpec(
            beta=cfg.bath_beta,
            squeeze=spectrum,
            mass_i=cfg.profile.mass_i,
            mass_f=cfg.profile.mass_f,
        )
        return bath, spectrum
    if cfg.scenario == "constant_squeeze":
        squeeze = (
            SqueezeParam(cfg.bath_eta, cfg.bath_theta) if cfg.bath_eta > 0 else None
        )
        return BathSpec(beta=cfg.bath_beta, squeeze=squeeze), None
    return BathSpec(beta=cfg.bath_beta), None


def _product_covariances(cfg, bath):
    rows = []
    for t in cfg.time_grid:
        cov = covariance_evolution(cfg.oscillator, bath, cfg.init, float(t), cfg.quad)
        rows.append((t, cov.xx, cov.pp, cov.xp))
    return ("t", "xx", "pp", "xp"), rows, {}


def _product_fluxes(cfg, bath):
    rows = []
    for t in cfg.time_grid:
        p_in = power_in(cfg.oscillator, bath, float(t), cfg.quad)
        p_out = power_out(cfg.oscillator, bath, float(t), cfg.quad, init=cfg.init)
        rows.append((t, p_in, p_out))
    _, gamma_damp = effective_response(cfg.oscillator, bath)
    t_end = float(cfg.time_grid[-1])
    residual = (
        abs(rows[-1][1] + rows[-1][2]) / abs(rows[-1][2]) if rows[-1][2] else math.inf
    )
    meta = {
        "balance_residual": residual,
        "late_time_ok": bool(gamma_damp > 0 and t_end >= 30.0 / gamma_damp),
        "damping_rate": gamma_damp,
    }
    return ("t", "p_xi", "p_gamma"), rows, meta


def _product_fdr(cfg, bath):
    report = fdr_oscillator(cfg.oscillator, bath, cfg.fdr_grid)
    rows = list(
        zip(report.omegas, report.hadamard_side, report.dissipation_side)
    )
    return (
        ("omega", "hadamard_side", "dissipation_side"),
        rows,
        {"max_rel_deviation": report.max_rel_deviation},
    )


def _product_hadamard_surface(cfg, bath):
    rows = []
    for t in cfg.hadamard_grid:
        for tp in cfg.hadamard_grid:
            if cfg.hadamard_factored:
                stat, nonstat = chi_hadamard_components(
                    cfg.oscillator,
                    cfg.bath_beta,
                    cfg.bath_theta,
                    float(t),
                    float(tp),
                    cfg.quad,
                )
            else:
                kv = chi_hadamard(cfg.oscillator, bath, float(t), float(tp), cfg.quad)
                stat, nonstat = kv.stationary, kv.nonstationary
            rows.append((t, tp, stat, nonstat))
    return (
        ("t", "t_prime", "stationary", "nonstationary"),
        rows,
        {"factored_out": cfg.hadamard_factored},
    )


def _product_squeeze_trajectory(cfg, bath):
    rows = []
    for t in cfg.time_grid:
        cov = covariance_evolution(cfg.oscillator, bath, cfg.init, float(t), cfg.quad)
        dec = extract_squeeze(cov, cfg.oscillator.m, cfg.oscillator.omega_r)
        eta = dec.squeeze.eta
        theta = dec.squeeze.theta
        rows.append(
            (t, dec.xi, eta, theta, math.sinh(2 * eta) ** 2, math.sin(theta))
        )
    return ("t", "xi", "eta", "theta", "sinh_sq_2eta", "sin_theta"), rows, {}


def _product_ns_split(cfg, bath):
    ins_rows, ist_rows = [], []
    for theta in cfg.ns_thetas:
        bath_theta = BathSpec(
            beta=cfg.bath_beta, squeeze=SqueezeParam(max(cfg.bath_eta, 1.0), theta)
        )
        for t in cfg.time_grid:
            i_ns, i_st = ns_st_split(cfg.oscillator, bath_theta, float(t), cfg.quad)
            ins_rows.append((t, theta, i_ns))
            ist_rows.append((t, theta, i_st))
    return ins_rows, ist_rows


_PRODUCT_BUILDERS = {
    "covariances": _product_covariances,
    "fluxes": _product_fluxes,
    "fdr": _product_fdr,
    "hadamard_surface": _product_hadamard_surface,
    "squeeze_trajectory": _product_squeeze_trajectory,
}


# ---------------------------------------------------------------------------
# output plumbing


def _write_csv(path: Path, header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_FLOAT_FMT.format(float(v)) for v in row))
    body = "\n".join(lines) + "\n"
    path.write_text(body)
    return hashlib.sha256(body.encode()).hexdigest()


def config_hash(resolved: dict) -> str:
    canonical = json.dumps(resolved, sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass
class RunManifest:
    config_hash: str
    tool_version: str
    regulator: dict
    wall_time_s: float
    products: list
    resolved_config: dict

    def to_dict(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "tool_version": self.tool_version,
            "regulator": self.regulator,
            "wall_time_s": self.wall_time_s,
            "products": self.products,
            "resolved_config": self.resolved_config,
        }


def run(cfg: RunConfig, out_dir) -> RunManifest:
    """Execute all requested products of a config into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    resolved = resolved_config(cfg)
    products = []

    bath, spectrum = _build_bath(cfg)
    if spectrum is not None:
        path = out / "squeeze_spectrum.csv"
        save_spectrum_csv(spectrum, path)
        products.append(
            {
                "name": "squeeze_spectrum",
                "file": path.name,
                "sha256": hashlib.sha256(path.read_bytes()).hexdigest(),
                "params": {"k_points": int(spectrum.k.size)},
            }
        )

    for name in cfg.outputs:
        if name == "ns_split":
            ins_rows, ist_rows = _product_ns_split(cfg, bath)
            for fname, rows in (("ins_vs_t.csv", ins_rows), ("ist_vs_t.csv", ist_rows)):
                path = out / fname
                column = "I_NS" if fname.startswith("ins") else "I_ST"
                digest = _write_csv(path, ("t", "theta", column), rows)
                products.append(
                    {
                        "name": "ns_split",
                        "file": fname,
                        "sha256": digest,
                        "params": {"thetas": list(cfg.ns_thetas)},
                    }
                )
            continue
        header, rows, meta = _PRODUCT_BUILDERS[name](cfg, bath)
        path = out / f"{name}.csv"
        digest = _write_csv(path, header, rows)
        products.append(
            {"name": name, "file": path.name, "sha256": digest, "params": meta}
        )

    manifest = RunManifest(
        config_hash=config_hash(resolved),
        tool_version=__version__,
        regulator=resolved["quadrature"],
        wall_time_s=time.perf_counter() - started,
        products=products,
        resolved_config=resolved,
    )
    (out / "run_manifest.json").write_text(
        json.dumps(manifest.to_dict(), indent=2, default=str) + "\n"
    )
    return manifest


# ---------------------------------------------------------------------------
# sweeps


def _set_path(data: dict, path: str, value) -> None:
    keys = path.split(".")
    node = data
    for key in keys[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigurationError(f"sweep path {path!r} does not address a mapping")
    node[keys[-1]] = value


def _sweep_point(args):
    raw, path, value, products = args
    data = copy.deepcopy(raw)
    data.pop("sweep", None)
    _set_path(data, path, value)
    cfg = parse_config(data)
    bath, _ = _build_bath(cfg)
    result = {}
    for name in products:
        if name == "ns_split":
            continue
        header, rows, meta = _PRODUCT_BUILDERS[name](cfg, bath)
        result[name] = (header, rows, meta)
    return result


def run_sweep(cfg: RunConfig, out_dir, threads: int = 1) -> RunManifest:
    """Run every sweep point and collect long-format CSVs.

    Points are independent; failures are recorded and the remaining
    points still run.  Row groups follow the declared value order.
    """
    if cfg.sweep is None:
        raise ConfigurationError("config has no sweep section")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    path = cfg.sweep["path"]
    values = _sweep_values(cfg.sweep)
    resolved = resolved_config(cfg)

    jobs = [(cfg.raw, path, value, cfg.outputs) for value in values]
    results: list = [None] * len(values)
    failures = []
    if threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            futures = {pool.submit(_sweep_point, job): i for i, job in enumerate(jobs)}
            for future in concurrent.futures.as_completed(futures):
                i = futures[future]
                try:
                    results[i] = future.result()
                except SqbathError as exc:
                    failures.append({"value": values[i], "error": str(exc)})
    else:
        for i, job in enumerate(jobs):
            try:
                results[i] = _sweep_point(job)
            except SqbathError as exc:
                failures.append({"value": values[i], "error": str(exc)})

    products = []
    for name in cfg.outputs:
        if name == "ns_split":
            continue
        header = None
        rows = []
        metas = {}
        for value, result in zip(values, results):
            if result is None or name not in result:
                continue
            hdr, point_rows, meta = result[name]
            header = (path, *hdr)
            rows.extend((value, *row) for row in point_rows)
            metas[repr(value)] = meta
        if header is None:
            continue
        fname = f"sweep_{name}.csv"
        digest = _write_csv(out / fname, header, rows)
        products.append(
            {"name": name, "file": fname, "sha256": digest, "params": metas}
        )

    manifest = RunManifest(
        config_hash=config_hash(resolved),
        tool_version=__version__,
        regulator=resolved["quadrature"],
        wall_time_s=time.perf_counter() - started,
        products=products,
        resolved_config=resolved,
    )
    payload = manifest.to_dict()
    payload["sweep_failures"] = failures
    (out / "run_manifest.json").write_text(
        json.dumps(payload, indent=2, default=str) + "\n"
    )
    if failures:
        raise ConvergenceError(
            f"{len(failures)} of {len(values)} sweep points failed",
            diagnostics={"failures": failures},
        )
    return manifest


# ---------------------------------------------------------------------------
# figure presets; each records which frequency normalization it uses

PI = math.pi


def figure_preset(name: str) -> dict:
    if name in ("4", "5"):
        return {
            "scenario": "constant_squeeze",
            "oscillator": {"m": 1.0, "Omega": 1.0, "gamma": 0.1},
            "bath": {"beta": 0.3, "eta": 1.0, "theta": 0.0},
            "quadrature": {"cutoff": 1000.0},
            "time_grid": {"start": 0.5, "stop": 200.0, "points": 80},
            "ns_thetas": [0.0, PI / 6.0, PI / 2.0],
            "outputs": ["ns_split"],
        }
    if name == "6":
        return {
            "scenario": "constant_squeeze",
            "oscillator": {"m": 1.0, "omega_r": 1.0, "gamma": 0.3},
            "bath": {"beta": 10.0, "eta": 1.0, "theta": 0.0},
            "quadrature": {"cutoff": 1000.0},
            "time_grid": {"start": 0.25, "stop": 25.0, "points": 100},
            "outputs": ["covariances"],
            "sweep": {"path": "bath.theta", "values": [0.0, PI / 6.0, PI / 2.0]},
        }
    if name == "7":
        return {
            "scenario": "constant_squeeze",
            "oscillator": {"m": 1.0, "omega_r": 1.0, "gamma": 0.3},
            "bath": {"beta": 10.0, "eta": 2.0, "theta": 0.0},
            "quadrature": {"cutoff": 1000.0},
            "time_grid": {"start": 0.25, "stop": 25.0, "points": 100},
            "outputs": ["covariances"],
            "sweep": {"path": "bath.beta", "values": [100.0, 10.0, 1.0, 0.1]},
        }
    if name == "grn3d":
        return {
            "scenario": "constant_squeeze",
            "oscillator": {"m": 1.0, "omega_r": 1.0, "gamma": 0.1},
            "bath": {"beta": "inf", "eta": 1.0, "theta": 0.0},
            "quadrature": {"cutoff": 1000.0},
            "time_grid": {"start": 1.0, "stop": 40.0, "points": 2},
            "hadamard_grid": {"start": 20.0, "stop": 40.0, "points": 9},
            "hadamard_factored": True,
            "outputs": ["hadamard_surface"],
        }
    if name in ("tan2eta", "tanphi"):
        return {
            "scenario": "finite_coupling",
            "oscillator": {"m": 1.0, "Omega": 1.0, "gamma": 0.3},
            "bath": {"beta": 10.0},
            "quadrature": {"cutoff": 1000.0},
            "initial_state": {"xx": 2.0, "pp": 1.0, "xp": 0.0},
            "time_grid": {"start": 0.5, "stop": 160.0, "points": 36},
            "outputs": ["squeeze_trajectory"],
            "sweep": {"path": "oscillator.gamma", "values": [0.3, 0.1, 0.03]},
        }
    raise ConfigurationError(f"unknown figure preset {name!r}; known: {FIGURES}")


# ---------------------------------------------------------------------------
# entry point


def _load_yaml(path: str) -> dict:
    try:
        with open(path, "r") as handle:
            return yaml.safe_load(handle)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"config file not found: {path}") from exc
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"malformed YAML in {path}: {exc}") from exc


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sqbath",
        description="Quantum Brownian oscillator in squeezed thermal baths",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute one scenario config")
    run_p.add_argument("--config", help="YAML config path")
    run_p.add_argument("--out", required=True, help="output directory")
    run_p.add_argument("--threads", type=int, default=1)
    run_p.add_argument("--figure", choices=FIGURES, help="built-in figure preset")

    sweep_p = sub.add_parser("sweep", help="execute the sweep block of a config")
    sweep_p.add_argument("--config", help="YAML config path")
    sweep_p.add_argument("--out", required=True, help="output directory")
    sweep_p.add_argument("--threads", type=int, default=1)
    sweep_p.add_argument("--figure", choices=FIGURES, help="built-in figure preset")

    args = parser.parse_args(argv)

    try:
        if args.figure and args.config:
            raise ConfigurationError("give either --config or --figure, not both")
        if args.figure:
            data = figure_preset(args.figure)
        elif args.config:
            data = _load_yaml(args.config)
        else:
            raise ConfigurationError("one of --config or --figure is required")
        cfg = parse_config(data)

        if args.command == "sweep" or (cfg.sweep is not None and args.figure):
            if cfg.sweep is None:
                raise ConfigurationError("config has no sweep section")
            manifest = run_sweep(cfg, args.out, threads=args.threads)
        else:
            manifest = run(cfg, args.out)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SqbathError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3

    print(f"wrote {len(manifest.products)} product(s); config {manifest.config_hash[:12]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
