"""Command-line front end: parameter files in, delimited grids out.

Each subcommand resolves its parameters from (in order) built-in
defaults, an optional named preset, an optional JSON config file, and
explicit flags, then writes its results plus a ``meta.json`` sidecar
echoing the fully resolved configuration, so any run can be repeated
exactly from its output directory.  Delimited outputs are byte-stable
for a fixed configuration and seed.

Exit codes: 0 on success, 2 for configuration problems (including
unknown flags or presets and unreadable config files), 3 for typed
numerical failures such as non-convergence or an infeasible target.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, eh_network, field_map, pls, report
from . import presets as derived
from .errors import ConvergenceError, InfeasibleTargetError, SingularHarmonicError
from .sweep import SweepSpec, find_maxima, sweep as compute_sweep
from .mode_matching import PowerMetric
from .scene import (
    Scene,
    equivalent_slab_permittivity,
    scene_from_dict,
    scene_to_dict,
    slab_equivalent_admittance,
)


class ConfigError(ValueError):
    """Unusable command line, preset, or parameter file."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved parameters of one CLI invocation."""

    command: str
    params: dict
    out_dir: str
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.workers < 1:
            raise ConfigError("worker count must be at least 1")

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "out_dir": self.out_dir,
            "seed": self.seed,
            "workers": self.workers,
        }

    @staticmethod
    def from_dict(doc: dict) -> "RunConfig":
        return RunConfig(
            command=doc["command"],
            params=doc["params"],
            out_dir=doc["out_dir"],
            seed=int(doc["seed"]),
            workers=int(doc["workers"]),
        )


def _default_sweep_params(polarization: str = "TM") -> dict:
    return {
        "scene": scene_to_dict(Scene(polarization=polarization)),
        "spec": {
            "re_min": -4.0, "re_max": 4.0, "re_points": 481,
            "im_min": -12.0, "im_max": 12.0, "im_points": 721,
            "metric": "area",
        },
        "top_k": 10,
        "refine_factor": 10,
        "figures": True,
    }


def _default_fieldmap_params(admittance: complex = 0j) -> dict:
    return {
        "scene": scene_to_dict(Scene(admittance=admittance)),
        "region": [-3.0, 3.0, -3.0, 3.0],
        "resolution": [601, 601],
        "floor_db": field_map.EXPORT_FLOOR_DB,
        "figures": True,
        "pgm": False,
    }


def _default_gain_pattern_params() -> dict:
    scene = Scene(admittance=derived.OPTIMAL_2)
    return {
        "scene": scene_to_dict(scene),
        "feed_r_m": 0.5 * scene.radius,
        "feed_phi_rad": 0.0,
        "n_angles": 360,
        "figures": True,
    }


def _default_sop_curve_params() -> dict:
    return {
        "sop_target": 1e-4,
        "secrecy_rate": 0.0,
        "path_loss_exponent": pls.DEFAULT_PATH_LOSS_EXPONENT,
        "reference_snr": pls.DEFAULT_REFERENCE_SNR,
        "gain_db_start": 0.0,
        "gain_db_stop": 60.0,
        "gain_db_step": 1.0,
        "figures": True,
    }


def _default_sop_map_params() -> dict:
    scene = Scene(admittance=derived.OPTIMAL_2, source_angle=-math.pi / 2)
    return {
        "scene": scene_to_dict(scene),
        "tx_position": [0.0, -1.0],
        "region": list(pls.DEFAULT_SOP_REGION),
        "resolution": list(pls.DEFAULT_SOP_RESOLUTION),
        "secrecy_rate": 0.0,
        "orientation": "steered",
        "bob_rx_power_dbm": pls.DEFAULT_BOB_RX_DBM,
        "noise_dbm": pls.DEFAULT_NOISE_DBM,
        "path_loss_exponent": pls.DEFAULT_PATH_LOSS_EXPONENT,
        "pattern_angles": 360,
        "figures": True,
        "pgm": False,
    }


def _default_slab_params() -> dict:
    return {
        "direction": "to_permittivity",
        "admittance_re": derived.OPTIMAL_2.real,
        "admittance_im": derived.OPTIMAL_2.imag,
        "epsilon_re": None,
        "epsilon_im": None,
        "thickness_m": 0.001,
        "wavelength_m": 0.1,
    }


PRESETS = {
    "paper-fig4-tm": ("sweep", lambda: _default_sweep_params("TM")),
    "paper-fig4-te": ("sweep", lambda: _default_sweep_params("TE")),
    "paper-fig5a": ("fieldmap", lambda: _default_fieldmap_params(0j)),
    "paper-fig5b": ("fieldmap",
                    lambda: _default_fieldmap_params(derived.OPTIMAL_1)),
    "paper-fig5c": ("fieldmap",
                    lambda: _default_fieldmap_params(derived.OPTIMAL_2)),
    "paper-fig7a": ("sop-curve", _default_sop_curve_params),
    "paper-fig7b": ("sop-map", _default_sop_map_params),
}

_DEFAULTS = {
    "sweep": _default_sweep_params,
    "fieldmap": _default_fieldmap_params,
    "resonances": _default_sweep_params,
    "gain-pattern": _default_gain_pattern_params,
    "sop-curve": _default_sop_curve_params,
    "sop-map": _default_sop_map_params,
    "eh-chain": lambda: {"chain": None, "figures": True},
    "slab-eq": _default_slab_params,
}


def _deep_update(base: dict, override: dict) -> dict:
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _deep_update(base[key], value)
        else:
            base[key] = value
    return base


def _load_json(path: str) -> dict:
    file_path = Path(path)
    if not file_path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = json.loads(file_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return doc


def _base_params(command: str, args) -> dict:
    params = _DEFAULTS[command]()
    preset = getattr(args, "preset", None)
    if preset is not None:
        if preset not in PRESETS:
            known = ", ".join(sorted(PRESETS))
            raise ConfigError(f"unknown preset '{preset}' (known: {known})")
        preset_command, builder = PRESETS[preset]
        if preset_command != command:
            raise ConfigError(
                f"preset '{preset}' belongs to the '{preset_command}' command")
        params = builder()
    config = getattr(args, "config", None)
    if config is not None:
        if command == "eh-chain":
            params["chain"] = _load_json(config)
        else:
            _deep_update(params, _load_json(config))
    return params


def _parse_span(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError("gain span must look like start:stop:step (dB)")
    try:
        start, stop, step = (float(v) for v in parts)
    except ValueError:
        raise ConfigError(f"gain span '{text}' has non-numeric parts")
    if step <= 0.0 or stop < start:
        raise ConfigError("gain span needs step > 0 and stop >= start")
    return start, stop, step


def _apply_overrides(command: str, params: dict, args) -> None:
    if command == "slab-eq":
        _apply_slab_overrides(params, args)
        return
    scene_overrides = {}
    for flag in ("admittance_re", "admittance_im", "polarization"):
        value = getattr(args, flag, None)
        if value is not None:
            scene_overrides[flag] = value
    if scene_overrides:
        params["scene"].update(scene_overrides)
    if getattr(args, "metric", None) is not None:
        params["spec"]["metric"] = args.metric
    if getattr(args, "top_k", None) is not None:
        params["top_k"] = args.top_k
    if getattr(args, "n_angles", None) is not None:
        params["n_angles"] = args.n_angles
    if getattr(args, "feed_r", None) is not None:
        params["feed_r_m"] = args.feed_r
    if getattr(args, "feed_phi", None) is not None:
        params["feed_phi_rad"] = args.feed_phi
    if getattr(args, "rs", None) is not None:
        params["secrecy_rate"] = args.rs
    if getattr(args, "sop", None) is not None:
        params["sop_target"] = args.sop
    if getattr(args, "alpha", None) is not None:
        params["path_loss_exponent"] = args.alpha
    if getattr(args, "reference_snr", None) is not None:
        params["reference_snr"] = args.reference_snr
    if getattr(args, "gains", None) is not None:
        start, stop, step = _parse_span(args.gains)
        params["gain_db_start"] = start
        params["gain_db_stop"] = stop
        params["gain_db_step"] = step
    if getattr(args, "orientation", None) is not None:
        params["orientation"] = args.orientation
    for name, key, invert in (("no_figures", "figures", True),
                              ("pgm", "pgm", False)):
        if getattr(args, name, False):
            params[key] = not invert


def _apply_slab_overrides(params: dict, args) -> None:
    for flag, key in (("epsilon_re", "epsilon_re"), ("epsilon_im", "epsilon_im"),
                      ("admittance_re", "admittance_re"),
                      ("admittance_im", "admittance_im"),
                      ("thickness", "thickness_m"),
                      ("wavelength", "wavelength_m")):
        value = getattr(args, flag, None)
        if value is not None:
            params[key] = value
    if args.epsilon_re is not None or args.epsilon_im is not None:
        params["direction"] = "to_admittance"
    if args.admittance_re is not None or args.admittance_im is not None:
        params["direction"] = "to_permittivity"


def resolve_config(args) -> RunConfig:
    command = args.command
    params = _base_params(command, args)
    _apply_overrides(command, params, args)
    return RunConfig(command=command, params=params, out_dir=args.out,
                     seed=args.seed, workers=args.workers)


def _write_meta(cfg: RunConfig, out: Path, outputs: list, results: dict) -> None:
    report.write_json(out / "meta.json", {
        "config": cfg.to_dict(),
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "outputs": sorted(outputs),
        "results": results,
    })


def _sweep_objects(cfg: RunConfig):
    scene = scene_from_dict(cfg.params["scene"])
    doc = cfg.params["spec"]
    spec = SweepSpec(
        re_min=float(doc["re_min"]), re_max=float(doc["re_max"]),
        re_points=int(doc["re_points"]),
        im_min=float(doc["im_min"]), im_max=float(doc["im_max"]),
        im_points=int(doc["im_points"]),
        metric=PowerMetric(doc["metric"]),
    )
    grid = compute_sweep(scene, spec, workers=cfg.workers)
    tops = find_maxima(grid, k=int(cfg.params["top_k"]),
                       refine_factor=int(cfg.params["refine_factor"]))
    return scene, spec, grid, tops


def _sweep_results(grid, tops) -> dict:
    _, coarse = grid.peak()
    refined = tops[0].enhancement if tops else coarse
    return {
        "coarse_max_enhancement": coarse,
        "coarse_max_db": 10.0 * math.log10(coarse),
        "refined_max_enhancement": refined,
        "refined_max_db": 10.0 * math.log10(refined),
        "resonances": [res.to_dict() for res in tops],
        "failed_points": len(grid.failures),
    }


def _run_sweep(cfg: RunConfig, out: Path) -> tuple:
    _, spec, grid, tops = _sweep_objects(cfg)
    report.write_text(out / "grid.csv", report.sweep_csv(grid))
    outputs = ["grid.csv"]
    if cfg.params.get("figures", True):
        shown = np.log10(np.maximum(grid.values, 1e-12))
        shown[~np.isfinite(shown)] = np.nan
        report.render_heatmap(out / "grid.png", spec.re_axis, spec.im_axis,
                              shown, "Re y", "Im y", "log10 enhancement")
        outputs.append("grid.png")
    return outputs, _sweep_results(grid, tops)


def _run_resonances(cfg: RunConfig, out: Path) -> tuple:
    _, _, grid, tops = _sweep_objects(cfg)
    report.write_text(out / "resonances.csv", report.resonances_csv(tops))
    return ["resonances.csv"], _sweep_results(grid, tops)


def _run_fieldmap(cfg: RunConfig, out: Path) -> tuple:
    scene = scene_from_dict(cfg.params["scene"])
    fm = field_map.intensity_map(scene, tuple(cfg.params["region"]),
                                 tuple(cfg.params["resolution"]))
    floor = float(cfg.params.get("floor_db", field_map.EXPORT_FLOOR_DB))
    clamped = fm.clamped(floor)
    report.write_text(out / "map.csv",
                      report.matrix_csv(fm.x_axis, fm.y_axis, clamped))
    outputs = ["map.csv"]
    if cfg.params.get("pgm", False):
        report.write_text(out / "map.pgm",
                          report.pgm_text(clamped, floor=floor))
        outputs.append("map.pgm")
    if cfg.params.get("figures", True):
        report.render_heatmap(out / "map.png", fm.x_axis, fm.y_axis, clamped,
                              "x (m)", "y (m)", "intensity (dB)")
        outputs.append("map.png")
    return outputs, {"interior_mean_ratio": fm.interior_mean_ratio,
                     "floor_db": floor}


def _run_gain_pattern(cfg: RunConfig, out: Path) -> tuple:
    scene = scene_from_dict(cfg.params["scene"])
    pattern = pls.coating_gain_pattern(
        scene,
        feed_point=(float(cfg.params["feed_r_m"]),
                    float(cfg.params["feed_phi_rad"])),
        n_angles=int(cfg.params["n_angles"]))
    report.write_text(out / "pattern.csv", report.pattern_csv(pattern))
    outputs = ["pattern.csv"]
    if cfg.params.get("figures", True):
        report.render_polar(out / "pattern.png", pattern.angles, pattern.gains)
        outputs.append("pattern.png")
    lobes = field_map.count_circular_maxima(pattern.gains)
    return outputs, {"max_gain": pattern.max_gain, "lobes": lobes}


def _run_sop_curve(cfg: RunConfig, out: Path) -> tuple:
    start = float(cfg.params["gain_db_start"])
    stop = float(cfg.params["gain_db_stop"])
    step = float(cfg.params["gain_db_step"])
    if step <= 0.0 or stop < start:
        raise ConfigError("gain span needs step > 0 and stop >= start")
    gains_db = np.arange(start, stop + 0.5 * step, step)
    ratios = []
    for gain_db in gains_db:
        model = pls.LinkModel(
            gain_ratio=pls.db_to_linear(float(gain_db)),
            path_loss_exponent=float(cfg.params["path_loss_exponent"]),
            reference_snr=float(cfg.params["reference_snr"]))
        ratios.append(pls.max_distance_ratio(
            model, float(cfg.params["sop_target"]),
            float(cfg.params["secrecy_rate"])))
    report.write_text(out / "curve.csv", report.curve_csv(gains_db, ratios))
    outputs = ["curve.csv"]
    if cfg.params.get("figures", True):
        report.render_curve(out / "curve.png", gains_db, ratios,
                            "gain ratio (dB)", "max distance ratio", logy=True)
        outputs.append("curve.png")
    return outputs, {"first_ratio": ratios[0], "last_ratio": ratios[-1]}


def _run_sop_map(cfg: RunConfig, out: Path) -> tuple:
    scene = scene_from_dict(cfg.params["scene"])
    pattern = pls.coating_gain_pattern(
        scene, n_angles=int(cfg.params["pattern_angles"]))
    sop_map = pls.sop_spatial_map(
        scene, pattern,
        tx_position=tuple(cfg.params["tx_position"]),
        bob_rx_power_dbm=float(cfg.params["bob_rx_power_dbm"]),
        noise_dbm=float(cfg.params["noise_dbm"]),
        region=tuple(cfg.params["region"]),
        resolution=tuple(cfg.params["resolution"]),
        secrecy_rate=float(cfg.params["secrecy_rate"]),
        path_loss_exponent=float(cfg.params["path_loss_exponent"]),
        orientation=str(cfg.params["orientation"]))
    report.write_text(out / "map.csv", report.matrix_csv(
        sop_map.x_axis, sop_map.y_axis, sop_map.values))
    outputs = ["map.csv"]
    if cfg.params.get("pgm", False):
        # log10 SOP in [-8, 0] maps onto the dB greyscale window
        report.write_text(out / "map.pgm",
                          report.pgm_text(10.0 * sop_map.values))
        outputs.append("map.pgm")
    if cfg.params.get("figures", True):
        report.render_heatmap(out / "map.png", sop_map.x_axis, sop_map.y_axis,
                              sop_map.values, "x (m)", "y (m)", "log10 SOP")
        outputs.append("map.png")
    finite = sop_map.values[np.isfinite(sop_map.values)]
    return outputs, {
        "gamma_bob": sop_map.gamma_bob,
        "gain_bob": sop_map.gain_bob,
        "flagged_points": len(sop_map.flagged),
        "min_log10_sop": float(finite.min()),
    }


def _run_eh_chain(cfg: RunConfig, out: Path) -> tuple:
    scenario = cfg.params.get("chain")
    if not scenario:
        raise ConfigError("eh-chain needs --config pointing at a chain "
                          "scenario JSON file")
    nodes, area = eh_network.chain_from_dict(scenario)
    budget = eh_network.chain_energy_budget(nodes, capture_area=area)
    report.write_json(out / "report.json", budget.to_dict())
    outputs = ["report.json"]
    if cfg.params.get("figures", True):
        report.render_bars(out / "report.png",
                           [entry.node_id for entry in budget.nodes],
                           [entry.harvested for entry in budget.nodes],
                           "harvested power (W)")
        outputs.append("report.png")
    return outputs, {"total_harvested_w": budget.total_harvested,
                     "total_transmitted_w": budget.total_transmitted,
                     "normalized_sources": list(budget.normalized_sources)}


def _run_slab_eq(cfg: RunConfig, out: Path) -> tuple:
    thickness = float(cfg.params["thickness_m"])
    wavelength = float(cfg.params["wavelength_m"])
    if cfg.params["direction"] == "to_admittance":
        if cfg.params.get("epsilon_re") is None:
            raise ConfigError("to_admittance conversion needs epsilon values")
        eps = complex(float(cfg.params["epsilon_re"]),
                      float(cfg.params.get("epsilon_im") or 0.0))
        y = slab_equivalent_admittance(eps, thickness, wavelength)
        result = {"direction": "to_admittance",
                  "epsilon_re": eps.real, "epsilon_im": eps.imag,
                  "admittance_re": y.real, "admittance_im": y.imag}
    else:
        y = complex(float(cfg.params["admittance_re"]),
                    float(cfg.params["admittance_im"]))
        eps = equivalent_slab_permittivity(y, thickness, wavelength)
        result = {"direction": "to_permittivity",
                  "admittance_re": y.real, "admittance_im": y.imag,
                  "epsilon_re": eps.real, "epsilon_im": eps.imag}
    result.update({"thickness_m": thickness, "wavelength_m": wavelength})
    report.write_json(out / "result.json", result)
    return ["result.json"], result


_RUNNERS = {
    "sweep": _run_sweep,
    "fieldmap": _run_fieldmap,
    "resonances": _run_resonances,
    "gain-pattern": _run_gain_pattern,
    "sop-curve": _run_sop_curve,
    "sop-map": _run_sop_map,
    "eh-chain": _run_eh_chain,
    "slab-eq": _run_slab_eq,
}


def _add_common(sub, pgm: bool = False) -> None:
    sub.add_argument("--out", required=True,
                     help="output directory (created if missing)")
    sub.add_argument("--preset", help="named parameter preset")
    sub.add_argument("--config", help="JSON parameter file")
    sub.add_argument("--seed", type=int, default=0,
                     help="random seed recorded with the run")
    sub.add_argument("--workers", type=int, default=1,
                     help="threads for grid evaluation")
    sub.add_argument("--no-figures", action="store_true",
                     help="skip PNG rendering")
    if pgm:
        sub.add_argument("--pgm", action="store_true",
                         help="also write a plain PGM greyscale")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metaclad",
        description="Admittance-plane analysis of metasurface-coated "
                    "circular receivers")
    parser.add_argument("--version", action="version",
                        version=f"metaclad {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sp = commands.add_parser("sweep", help="enhancement over the admittance plane")
    _add_common(sp)
    sp.add_argument("--polarization", choices=("TM", "TE"))
    sp.add_argument("--metric", choices=("area", "boundary"))
    sp.add_argument("--top-k", type=int, dest="top_k")

    sp = commands.add_parser("fieldmap", help="normalized intensity map")
    _add_common(sp, pgm=True)
    sp.add_argument("--admittance-re", type=float, dest="admittance_re")
    sp.add_argument("--admittance-im", type=float, dest="admittance_im")

    sp = commands.add_parser("resonances", help="top-k refined sweep maxima")
    _add_common(sp)
    sp.add_argument("--polarization", choices=("TM", "TE"))
    sp.add_argument("--metric", choices=("area", "boundary"))
    sp.add_argument("--top-k", type=int, dest="top_k")

    sp = commands.add_parser("gain-pattern",
                             help="feed-point gain versus illumination angle")
    _add_common(sp)
    sp.add_argument("--admittance-re", type=float, dest="admittance_re")
    sp.add_argument("--admittance-im", type=float, dest="admittance_im")
    sp.add_argument("--n-angles", type=int, dest="n_angles")
    sp.add_argument("--feed-r", type=float, dest="feed_r",
                    help="feed radius in meters")
    sp.add_argument("--feed-phi", type=float, dest="feed_phi",
                    help="feed azimuth in radians")

    sp = commands.add_parser("sop-curve",
                             help="safe-distance ratio versus gain advantage")
    _add_common(sp)
    sp.add_argument("--rs", type=float, help="secrecy rate, bits")
    sp.add_argument("--sop", type=float, help="outage target")
    sp.add_argument("--alpha", type=float, help="path loss exponent")
    sp.add_argument("--reference-snr", type=float, dest="reference_snr")
    sp.add_argument("--gains", help="gain span start:stop:step in dB")

    sp = commands.add_parser("sop-map", help="outage probability around the receiver")
    _add_common(sp, pgm=True)
    sp.add_argument("--rs", type=float, help="secrecy rate, bits")
    sp.add_argument("--orientation", choices=("steered", "fixed"))

    sp = commands.add_parser("eh-chain", help="harvesting chain budget")
    _add_common(sp)

    sp = commands.add_parser("slab-eq",
                             help="sheet admittance vs thin-slab permittivity")
    _add_common(sp)
    sp.add_argument("--admittance-re", type=float, dest="admittance_re")
    sp.add_argument("--admittance-im", type=float, dest="admittance_im")
    sp.add_argument("--epsilon-re", type=float, dest="epsilon_re")
    sp.add_argument("--epsilon-im", type=float, dest="epsilon_im")
    sp.add_argument("--thickness", type=float, help="slab thickness, meters")
    sp.add_argument("--wavelength", type=float, help="wavelength, meters")

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        outputs, results = _RUNNERS[cfg.command](cfg, out)
        _write_meta(cfg, out, outputs + ["meta.json"], results)
    except (ConvergenceError, SingularHarmonicError, InfeasibleTargetError,
            FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError, KeyError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
