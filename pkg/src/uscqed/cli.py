"""Scenario runner.

Subcommands:
    run            execute a scenario from a config file, writing CSVs + manifest
    validate       dry-run a config: check fields, report dimensions and a
                   rough runtime estimate, compute nothing
    list-scenarios print the scenario catalogue

Config files are INI-style with sections [scenario], [params], [grid],
[dynamics], [output].  Parsing is strict: unknown sections or keys are
rejected (with a suggestion), and every resolved default is echoed into the
run manifest so results are reproducible byte for byte.  Data CSVs carry no
timestamps; the manifest does.
"""

from __future__ import annotations

import argparse
import csv
import difflib
import json
import os
import sys
import time
from configparser import ConfigParser
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, correlations, dynamics, engine, models, spectrum
from .errors import ConfigError, SimulationError
from .models import SystemParams

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

FLOAT_FORMAT = "%.12g"

_PARAM_KEYS = {
    "omega_c": float,
    "delta": float,
    "epsilon": float,
    "lambda": float,
    "diamagnetic": bool,
    "n_max": int,
    "kappa": float,
    "gamma": float,
    "drive_amplitude": float,
    "drive_frequency": float,
}
_GRID_KEYS = {"start": float, "stop": float, "step": float}
_DYNAMICS_KEYS = {
    "n_levels": int,
    "spectral_weight": str,
    "drive_mode": str,
    "resonance_cut": float,
    "qubit_coupling": str,
}
_SCENARIO_KEYS = {"name": str, "axis": str}
_OUTPUT_KEYS = {"dir": str}
_SECTIONS = {
    "scenario": _SCENARIO_KEYS,
    "params": _PARAM_KEYS,
    "grid": _GRID_KEYS,
    "dynamics": _DYNAMICS_KEYS,
    "output": _OUTPUT_KEYS,
}

SCENARIOS = {
    "fig2a_spectrum": "resonant spectra vs coupling, bare and diamagnetic models",
    "fig2b_rabi": "g2(0) vs coupling for the transverse dipole and its derivatives",
    "fig2c_diamagnetic": "same sweep with the diamagnetic term included",
    "fig3a_spectrum": "biased-qubit spectrum vs flux offset",
    "fig3b_sweep": "driven stationary g2(0) and target population vs flux offset",
    "fig3c_tau": "delayed stationary g2(tau) at zero and peak flux offset",
    "custom": "free-form sweep over lambda (static) or epsilon (driven)",
}

_SCENARIO_DEFAULTS = {
    "fig2a_spectrum": dict(
        params=dict(delta=1.0, epsilon=0.0, n_max=20),
        grid=(0.01, 1.0, 0.005),
    ),
    "fig2b_rabi": dict(
        params=dict(delta=1.0, epsilon=0.0, n_max=20),
        grid=(0.01, 1.0, 0.01),
    ),
    "fig2c_diamagnetic": dict(
        params=dict(delta=1.0, epsilon=0.0, n_max=20, diamagnetic=True),
        grid=(0.01, 1.0, 0.01),
    ),
    "fig3a_spectrum": dict(
        params=dict(delta=0.5, epsilon=0.0, **{"lambda": 0.2}, n_max=20),
        grid=(0.0, 0.5, 0.005),
    ),
    "fig3b_sweep": dict(
        params=dict(
            delta=0.5,
            epsilon=0.0,
            **{"lambda": 0.2},
            n_max=16,
            kappa=5e-4,
            gamma=5e-4,
            drive_amplitude=1.25e-4,
        ),
        grid=(0.0, 0.5, 0.01),
    ),
    "fig3c_tau": dict(
        params=dict(
            delta=0.5,
            epsilon=0.0,
            **{"lambda": 0.2},
            n_max=16,
            kappa=5e-4,
            gamma=5e-4,
            drive_amplitude=1.25e-4,
        ),
        grid=(0.0, 16.0, 0.05),  # delay in units of 1/gamma
    ),
    "custom": dict(
        params=dict(delta=1.0, epsilon=0.0, **{"lambda": 0.2}, n_max=20),
        grid=(0.01, 0.5, 0.01),
    ),
}

FIG3C_BIASES = (0.0, 0.35)
INTEGRATOR_TOL = 1e-9
N_TRACKED = 8
SPECTRUM_LEVELS = 9  # state indices exported by the spectrum scenarios


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    params: SystemParams
    grid: tuple  # (start, stop, step)
    axis: str | None
    output_dir: str
    n_levels: int
    spectral_weight: str
    drive_mode: str
    resonance_cut: float
    qubit_coupling: str
    threads: int


def _suggest(key: str, candidates) -> str:
    close = difflib.get_close_matches(key, list(candidates), n=1)
    return f" (did you mean {close[0]!r}?)" if close else ""


def _parse_bool(raw: str, key: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"field {key!r}: expected a boolean, got {raw!r}")


def _convert(raw: str, typ, key: str):
    if typ is bool:
        return _parse_bool(raw, key)
    try:
        return typ(raw)
    except ValueError:
        raise ConfigError(f"field {key!r}: cannot parse {raw!r} as {typ.__name__}")


def load_config(path: str, overrides: dict | None = None) -> ScenarioConfig:
    """Parse and validate a scenario config file; CLI overrides win."""
    parser = ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file {path!r} not found or unreadable")

    data: dict = {section: {} for section in _SECTIONS}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(
                f"unknown section [{section}]{_suggest(section, _SECTIONS)}"
            )
        allowed = _SECTIONS[section]
        for key, raw in parser.items(section):
            if key not in allowed:
                raise ConfigError(
                    f"unknown field {key!r} in [{section}]{_suggest(key, allowed)}"
                )
            data[section][key] = _convert(raw, allowed[key], key)

    name = data["scenario"].get("name")
    if name is None:
        raise ConfigError("missing required field 'name' in [scenario]")
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}{_suggest(name, SCENARIOS)}")

    defaults = _SCENARIO_DEFAULTS[name]
    param_values = dict(defaults["params"])
    param_values.update(data["params"])
    overrides = overrides or {}
    if "n_max" in overrides:
        param_values["n_max"] = overrides["n_max"]

    grid_defaults = defaults["grid"]
    grid = (
        data["grid"].get("start", grid_defaults[0]),
        data["grid"].get("stop", grid_defaults[1]),
        data["grid"].get("step", grid_defaults[2]),
    )
    if grid[2] <= 0:
        raise ConfigError("grid step must be > 0")
    if grid[1] < grid[0]:
        raise ConfigError("grid stop must be >= start")

    axis = data["scenario"].get("axis")
    if name == "custom":
        if axis not in ("lambda", "epsilon"):
            raise ConfigError(
                "custom scenario needs axis = lambda or epsilon in [scenario]"
            )
    elif axis is not None:
        raise ConfigError("field 'axis' is only valid for the custom scenario")

    kwargs = {("lam" if k == "lambda" else k): v for k, v in param_values.items()}
    try:
        params = SystemParams(**kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid params: {exc}")

    dyn = data["dynamics"]
    config = ScenarioConfig(
        scenario=name,
        params=params,
        grid=grid,
        axis=axis,
        output_dir=overrides.get("out", data["output"].get("dir", "out")),
        n_levels=overrides.get("n_levels", dyn.get("n_levels", dynamics.DEFAULT_N_LEVELS)),
        spectral_weight=overrides.get(
            "spectral_weight", dyn.get("spectral_weight", "ohmic")
        ),
        drive_mode=overrides.get("drive_mode", dyn.get("drive_mode", "dressed_rwa")),
        resonance_cut=dyn.get("resonance_cut", dynamics.DEFAULT_RESONANCE_CUT),
        qubit_coupling=dyn.get("qubit_coupling", "i_theta"),
        threads=overrides.get("threads", os.cpu_count() or 1),
    )
    _validate_choices(config)
    return config


def _validate_choices(config: ScenarioConfig):
    if config.spectral_weight not in ("ohmic", "flat"):
        raise ConfigError("spectral_weight must be 'ohmic' or 'flat'")
    if config.drive_mode not in ("dressed_rwa", "full_time"):
        raise ConfigError("drive_mode must be 'dressed_rwa' or 'full_time'")
    if config.qubit_coupling not in ("i_theta", "sigma_x"):
        raise ConfigError("qubit_coupling must be 'i_theta' or 'sigma_x'")
    if config.n_levels < 2:
        raise ConfigError("n_levels must be >= 2")
    if config.threads < 1:
        raise ConfigError("threads must be >= 1")
    if config.scenario in ("fig3b_sweep", "fig3c_tau", "custom") and (
        config.drive_mode == "full_time"
    ):
        raise ConfigError(
            "drive_mode=full_time is a validation mode for the library oracles; "
            "stationary-correlation scenarios require dressed_rwa"
        )


def grid_points(grid) -> np.ndarray:
    start, stop, step = grid
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def _format_cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def write_csv(path: str, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(v) for v in row])


def _spectrum_csv_rows(bases, grid_values):
    rows = spectrum.spectrum_rows(bases, grid_values)
    return [r for r in rows if r[1] < SPECTRUM_LEVELS]


def _run_fig2a(config: ScenarioConfig, outputs: dict):
    grid = grid_points(config.grid)
    header = ("sweep_value", "state_index", "label", "energy", "parity")
    for tag, diamagnetic in (("rabi", False), ("diamagnetic", True)):
        template = config.params.with_(diamagnetic=diamagnetic)
        bases = spectrum.continuation_sweep(template, "lam", grid, n_tracked=N_TRACKED)
        outputs[f"fig2a_{tag}.csv"] = (header, _spectrum_csv_rows(bases, grid))


def _run_static_g2(config: ScenarioConfig, outputs: dict, filename: str):
    grid = grid_points(config.grid)
    columns, rows = correlations.sweep_g2_zero(
        config.params, grid, initial_label="2-", n_tracked=N_TRACKED
    )
    outputs[filename] = (columns, rows.tolist())


def _run_fig3a(config: ScenarioConfig, outputs: dict):
    grid = grid_points(config.grid)
    bases = spectrum.continuation_sweep(
        config.params, "epsilon", grid, n_tracked=N_TRACKED
    )
    header = ("sweep_value", "state_index", "label", "energy", "parity")
    outputs["fig3a.csv"] = (header, _spectrum_csv_rows(bases, grid))


def _run_fig3b(config: ScenarioConfig, outputs: dict, filename: str = "fig3b.csv"):
    grid = grid_points(config.grid)
    columns, rows = dynamics.sweep_g2_drive(
        config.params,
        grid,
        n_levels=config.n_levels,
        spectral_weight=config.spectral_weight,
        resonance_cut=config.resonance_cut,
        qubit_coupling=config.qubit_coupling,
        n_tracked=N_TRACKED,
        max_workers=config.threads,
    )
    outputs[filename] = (columns, rows.tolist())


def _run_fig3c(config: ScenarioConfig, outputs: dict):
    tau_gamma = grid_points(config.grid)
    if config.params.gamma <= 0:
        raise ConfigError("fig3c_tau requires gamma > 0 to set the delay unit")
    taus = tau_gamma / config.params.gamma
    series = []
    for eps in FIG3C_BIASES:
        p = config.params.with_(epsilon=eps)
        basis = spectrum.diagonalize_labeled(p, n_tracked=N_TRACKED)
        idx = basis.label_index("1+")
        omega_d = float(basis.energies[idx] - basis.energies[0])
        p = p.with_(drive_frequency=omega_d)
        oplus = spectrum.positive_frequency(
            models.build_emission_operator(p, "i_theta"), basis, derivative_order=1
        )
        gen = dynamics.build_liouvillian(
            basis,
            p,
            drive_mode="dressed_rwa",
            n_levels=config.n_levels,
            spectral_weight=config.spectral_weight,
            resonance_cut=config.resonance_cut,
            qubit_coupling=config.qubit_coupling,
        )
        rho = dynamics.steady_state(gen)
        series.append(dynamics.g2_tau(gen, rho, oplus, taus, tol=INTEGRATOR_TOL))
    rows = [
        (tg, series[0].values[i], series[1].values[i])
        for i, tg in enumerate(tau_gamma)
    ]
    outputs["fig3c.csv"] = (("tau_gamma", "g2_eps0", "g2_eps035"), rows)


def _run_custom(config: ScenarioConfig, outputs: dict):
    if config.axis == "lambda":
        _run_static_g2(config, outputs, "custom.csv")
    else:
        _run_fig3b(config, outputs, "custom.csv")


_RUNNERS = {
    "fig2a_spectrum": _run_fig2a,
    "fig2b_rabi": lambda c, o: _run_static_g2(c, o, "fig2b.csv"),
    "fig2c_diamagnetic": lambda c, o: _run_static_g2(c, o, "fig2c.csv"),
    "fig3a_spectrum": _run_fig3a,
    "fig3b_sweep": lambda c, o: _run_fig3b(c, o),
    "fig3c_tau": _run_fig3c,
    "custom": _run_custom,
}


def _manifest(config: ScenarioConfig, filenames) -> dict:
    params = asdict(config.params)
    params["lambda"] = params.pop("lam")
    return {
        "package": "uscqed",
        "version": __version__,
        "backend": engine.BACKEND,
        "generated_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "scenario": config.scenario,
        "axis": config.axis,
        "params": params,
        "grid": {"start": config.grid[0], "stop": config.grid[1], "step": config.grid[2]},
        "dynamics": {
            "n_levels": config.n_levels,
            "spectral_weight": config.spectral_weight,
            "drive_mode": config.drive_mode,
            "resonance_cut": config.resonance_cut,
            "qubit_coupling": config.qubit_coupling,
        },
        "resolved_defaults": {
            "n_tracked": N_TRACKED,
            "continuation_step": spectrum.CONTINUATION_STEP,
            "lambda_seed": spectrum.LAMBDA_SEED,
            "degeneracy_cut": spectrum.DEGENERACY_CUT,
            "integrator_tol": INTEGRATOR_TOL,
            "spectrum_levels_exported": SPECTRUM_LEVELS,
            "fig3c_biases": list(FIG3C_BIASES),
            "csv_float_format": FLOAT_FORMAT,
        },
        "threads": config.threads,
        "outputs": sorted(filenames),
    }


def run_scenario(config: ScenarioConfig) -> list:
    """Execute a scenario; returns the list of files written."""
    outputs: dict = {}
    _RUNNERS[config.scenario](config, outputs)
    os.makedirs(config.output_dir, exist_ok=True)
    written = []
    for filename, (header, rows) in sorted(outputs.items()):
        path = os.path.join(config.output_dir, filename)
        write_csv(path, header, rows)
        written.append(path)
    manifest_path = os.path.join(config.output_dir, "run_manifest.json")
    with open(manifest_path, "w") as fh:
        json.dump(_manifest(config, list(outputs)), fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(manifest_path)
    return written


def validate_report(config: ScenarioConfig) -> str:
    """Dry-run report: dimensions and a coarse runtime estimate, no computation."""
    grid = grid_points(config.grid)
    n_points = len(grid)
    dim = config.params.dim
    lines = [
        f"scenario: {config.scenario}",
        f"grid points: {n_points}",
        f"composite Hilbert dimension: {dim} (n_max={config.params.n_max})",
    ]
    eigh_cost = 2e-10 * dim**3
    substeps = max(1, int(np.ceil(config.grid[2] / spectrum.CONTINUATION_STEP)))
    if config.scenario in ("fig2a_spectrum", "fig2b_rabi", "fig2c_diamagnetic") or (
        config.scenario == "custom" and config.axis == "lambda"
    ):
        models_count = 2 if config.scenario == "fig2a_spectrum" else 1
        est = models_count * n_points * substeps * eigh_cost * 4 + 0.5
    elif config.scenario in ("fig3a_spectrum",):
        est = n_points * substeps * eigh_cost * 4 + 0.5
    else:
        sup = config.n_levels**2
        lines.append(f"superoperator dim: {sup}^2 entries ({sup} x {sup} matrix)")
        solve_cost = 2e-10 * sup**3
        if config.scenario == "fig3c_tau":
            # cost per simulated time unit, calibrated on the BLAS kernel
            span = config.grid[1] / max(config.params.gamma, 1e-12)
            est = 2 * span * 5e-4 * (sup / 144.0) ** 2 + 5.0
        else:
            est = n_points * (substeps * eigh_cost * 4 + solve_cost * 3) + 1.0
    scale = "seconds-scale" if est < 120 else "minutes-scale"
    lines.append(f"estimated runtime: ~{est:.0f} s ({scale})")
    lines.append("config OK")
    return "\n".join(lines)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uscqed",
        description="Photon-statistics scenarios for a qubit-resonator system "
        "in the ultrastrong coupling regime",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="scenario config file (INI)")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--threads", type=int, help="worker threads for sweeps")
        p.add_argument("--drive-mode", choices=("dressed_rwa", "full_time"))
        p.add_argument("--spectral-weight", choices=("ohmic", "flat"))
        p.add_argument("--nmax", type=int, help="Fock truncation override")
        p.add_argument("--nlevels", type=int, help="retained dressed levels override")

    add_common(sub.add_parser("run", help="execute a scenario"))
    add_common(sub.add_parser("validate", help="check a config without computing"))
    sub.add_parser("list-scenarios", help="print the scenario catalogue")
    return parser


def _overrides_from_args(args) -> dict:
    overrides = {}
    if args.out is not None:
        overrides["out"] = args.out
    if args.threads is not None:
        overrides["threads"] = args.threads
    if args.drive_mode is not None:
        overrides["drive_mode"] = args.drive_mode
    if args.spectral_weight is not None:
        overrides["spectral_weight"] = args.spectral_weight
    if args.nmax is not None:
        overrides["n_max"] = args.nmax
    if args.nlevels is not None:
        overrides["n_levels"] = args.nlevels
    return overrides


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list-scenarios":
        width = max(len(k) for k in SCENARIOS)
        for name, blurb in SCENARIOS.items():
            print(f"{name:<{width}}  {blurb}")
        return EXIT_OK
    try:
        config = load_config(args.config, _overrides_from_args(args))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "validate":
        print(validate_report(config))
        return EXIT_OK
    try:
        written = run_scenario(config)
    except (SimulationError, ValueError, KeyError) as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
