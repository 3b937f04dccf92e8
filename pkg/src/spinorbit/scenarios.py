"""Scenario configuration, frame rendering and scalar metrics.

Rendered frames, CSV profiles and every azimuth-based metric use the view
from the beam source: screen-right is -x, screen-up is +y, and the profile
azimuth is measured anticlockwise from screen-right.  In that frame the
field-frame azimuth of ``fields`` is ``pi - phi_view``.  Gamma and the
reported rotation angles are anticlockwise in the same view.
"""
from __future__ import annotations

import configparser
import dataclasses
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import output
from .biphoton import sweep_probabilities
from .errors import ConfigError, InvalidParameterError
from .fields import FieldGrid, GridSpec, field_from_amplitudes, gaussian_profile
from .interferometer import PortPair, propagate
from .modes import PoincareAngles, SpinOrbitAmplitudes, product_amplitudes
from .polarization import apply_polarizer, apply_retarder

log = logging.getLogger(__name__)

SCENARIOS = ("balanced-vector", "lg-input", "dual-input", "custom", "biphoton-sweep")
SWEEP_PARAMS = ("gamma", "beta", "alpha", "delta")
FORMATS = ("pgm", "png", "csv", "json")
PROFILE_SAMPLES = 720

# Angles pre-filled by the named scenarios; unspecified ones default to 0.
PRESETS = {
    "balanced-vector": {"theta": math.pi / 2, "phi": math.pi, "alpha": math.pi / 2},
    "lg-input": {"theta": math.pi / 2, "phi": -math.pi / 2},
}
DEFAULT_INPUTS = {"dual-input": "ab"}

_ANGLE_RE = re.compile(
    r"""^\s*(?P<num>[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)\s*(?P<unit>deg|rad)\s*$"""
)
_PI_RE = re.compile(r"^\s*(?P<sign>[+-]?)\s*(?P<mul>(\d+(\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(/\s*(?P<den>\d+(\.\d*)?))?\s*$")


def parse_angle(text: str) -> float:
    """Angle with explicit unit: '45deg', '0.785rad', 'pi/2', '-3pi/4', '0.5pi'."""
    if isinstance(text, (int, float)):
        raise ConfigError(f"angle {text!r} needs an explicit unit (deg, rad or a multiple of pi)")
    m = _ANGLE_RE.match(text)
    if m:
        v = float(m["num"])
        return math.radians(v) if m["unit"] == "deg" else v
    m = _PI_RE.match(text)
    if m:
        v = float(m["mul"]) if m["mul"] else 1.0
        if m["den"]:
            v /= float(m["den"])
        return -v * math.pi if m["sign"] == "-" else v * math.pi
    raise ConfigError(f"cannot parse angle {text!r}; use e.g. '45deg', '1.2rad' or 'pi/2'")


@dataclass(frozen=True)
class Sweep:
    parameter: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMS:
            raise ConfigError(f"sweep parameter must be one of {SWEEP_PARAMS}, got {self.parameter!r}")
        if self.steps < 2:
            raise ConfigError("sweep needs at least 2 steps")

    @classmethod
    def parse(cls, text: str) -> "Sweep":
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigError(f"sweep must look like param:start:stop:steps, got {text!r}")
        try:
            steps = int(parts[3])
        except ValueError:
            raise ConfigError(f"sweep steps must be an integer, got {parts[3]!r}") from None
        return cls(parts[0].strip(), parse_angle(parts[1]), parse_angle(parts[2]), steps)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "balanced-vector"
    angles: PoincareAngles = PoincareAngles(math.pi / 2, math.pi, math.pi / 2, 0.0)
    amplitude: float = 1.0
    delta: float = math.pi / 2
    gamma: float | None = None
    retarder: float | None = None
    inputs: str = "a"
    grid: GridSpec = GridSpec()
    sweep: Sweep | None = None
    output_dir: Path = Path("out")
    formats: tuple[str, ...] = ("pgm", "csv", "json")

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {SCENARIOS}")
        if self.inputs not in ("a", "b", "ab"):
            raise ConfigError(f"inputs must be 'a', 'b' or 'ab', got {self.inputs!r}")
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise ConfigError(f"unknown output formats {sorted(bad)}")
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise ConfigError("amplitude must be finite and >= 0")

    def with_value(self, parameter: str, value: float) -> "ScenarioConfig":
        if parameter in ("alpha", "beta"):
            return dataclasses.replace(self, angles=dataclasses.replace(self.angles, **{parameter: value}))
        return dataclasses.replace(self, **{parameter: value})


def build_config(values: dict) -> ScenarioConfig:
    """ScenarioConfig from string-valued settings (config file merged with flags)."""
    v = {k.replace("-", "_"): val for k, val in values.items() if val is not None}
    scenario = v.get("scenario", "balanced-vector")
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; choose from {SCENARIOS}")
    ang = {"theta": 0.0, "phi": 0.0, "alpha": 0.0, "beta": 0.0}
    ang.update(PRESETS.get(scenario, {}))
    for name in ang:
        if name in v:
            ang[name] = parse_angle(v[name])
    try:
        grid = GridSpec(
            half_extent=float(v.get("half_extent", 4.0)),
            samples=int(v.get("grid_size", 256)),
            waist=float(v.get("waist", 1.0)),
        )
        amplitude = float(v.get("amplitude", 1.0))
    except (ValueError, InvalidParameterError) as exc:
        raise ConfigError(str(exc)) from None
    fmts = v.get("format", "pgm,csv,json")
    if isinstance(fmts, str):
        fmts = [f.strip() for f in fmts.split(",") if f.strip()]
    return ScenarioConfig(
        scenario=scenario,
        angles=PoincareAngles(**ang),
        amplitude=amplitude,
        delta=parse_angle(v["delta"]) if "delta" in v else math.pi / 2,
        gamma=parse_angle(v["gamma"]) if "gamma" in v else None,
        retarder=parse_angle(v["retarder"]) if "retarder" in v else None,
        inputs=v.get("inputs", DEFAULT_INPUTS.get(scenario, "a")),
        grid=grid,
        sweep=Sweep.parse(v["sweep"]) if "sweep" in v else None,
        output_dir=Path(v.get("out", "out")),
        formats=tuple(fmts),
    )


def read_config_file(path: Path) -> dict:
    """key = value file, optionally under a [scenario] header; '#' comments."""
    text = Path(path).read_text(encoding="utf-8")
    if not re.search(r"^\s*\[", text, re.M):
        text = "[scenario]\n" + text
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if "scenario" not in cp:
        raise ConfigError(f"{path}: expected a [scenario] section")
    return dict(cp["scenario"])


# -- field construction ------------------------------------------------------


def output_amplitudes(cfg: ScenarioConfig) -> PortPair:
    """(c, d) basis amplitudes for the configured inputs at the configured delta."""
    amps = product_amplitudes(cfg.angles, cfg.amplitude)
    zero = SpinOrbitAmplitudes(0j, 0j, 0j, 0j, cfg.amplitude)
    a = amps if "a" in cfg.inputs else zero
    b = amps if "b" in cfg.inputs else zero
    return propagate(PortPair(a, b), cfg.delta)


def view_to_field_azimuth(phi_view):
    return np.pi - np.asarray(phi_view)


def field_to_view_azimuth(phi_field):
    return np.mod(np.pi - np.asarray(phi_field), 2 * np.pi)


def port_field_fn(cfg: ScenarioConfig, port: str) -> Callable:
    """``f(r, phi_field, w0) -> (..., 2)``: analyzed field at output ``port``."""
    pair = output_amplitudes(cfg)
    vec = (pair.first if port == "c" else pair.second).vector

    def f(r, phi, w0):
        fld = field_from_amplitudes(vec, r, phi, w0)
        if cfg.retarder is not None:
            fld = apply_retarder(fld, cfg.retarder)
        if cfg.gamma is not None:
            fld = apply_polarizer(fld, cfg.gamma)
        return fld

    return f


def port_power(cfg: ScenarioConfig, port: str, r, phi_view) -> np.ndarray:
    f = port_field_fn(cfg, port)
    fld = f(np.asarray(r, dtype=float), view_to_field_azimuth(phi_view), cfg.grid.waist)
    return np.abs(fld[..., 0]) ** 2 + np.abs(fld[..., 1]) ** 2


def render_port(cfg: ScenarioConfig, port: str) -> tuple[FieldGrid, np.ndarray]:
    """Analyzed field on the grid and its power image as viewed from the source."""
    spec = cfg.grid
    r, phi = spec.polar()
    fld = FieldGrid(spec, np.asarray(port_field_fn(cfg, port)(r, phi, spec.waist), dtype=complex))
    # grid is [iy, ix] with x, y ascending; screen rows run top-down, columns along -x
    image = fld.power()[::-1, ::-1]
    return fld, image


def image_coordinates(spec: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """(r/w0, phi_view) of every image pixel."""
    u = spec.axis()
    xs, ys = np.meshgrid(u, u[::-1], indexing="xy")
    return np.hypot(xs, ys) / spec.waist, np.mod(np.arctan2(ys, xs), 2 * np.pi)


# -- metrics -----------------------------------------------------------------


def azimuthal_profile(cfg: ScenarioConfig, port: str, samples: int = PROFILE_SAMPLES, r_over_w0: float = 1.0):
    phi_view = np.arange(samples) * (2 * np.pi / samples)
    r = np.full(samples, r_over_w0 * cfg.grid.waist)
    return phi_view, port_power(cfg, port, r, phi_view)


def modulation_depth(profile: np.ndarray) -> float:
    hi, lo = float(np.max(profile)), float(np.min(profile))
    return 0.0 if hi + lo <= 0 else (hi - lo) / (hi + lo)


@dataclass(frozen=True)
class HarmonicFit:
    """Least-squares fit p(phi) = c0 + c1 sin(2 phi + chi), c1 >= 0."""

    c0: float
    c1: float
    chi: float
    residual: float  # max |p - fit| / max |p|

    @property
    def lobe_angle(self) -> float:
        """Azimuth of the intensity maximum in [0, pi)."""
        return float(np.mod(np.pi / 4 - self.chi / 2, np.pi))


def fit_two_fold(phi: np.ndarray, p: np.ndarray) -> HarmonicFit:
    A = np.column_stack([np.ones_like(phi), np.sin(2 * phi), np.cos(2 * phi)])
    (c0, a, b), *_ = np.linalg.lstsq(A, p, rcond=None)
    scale = float(np.max(np.abs(p))) or 1.0
    resid = float(np.max(np.abs(A @ np.array([c0, a, b]) - p))) / scale
    return HarmonicFit(float(c0), float(math.hypot(a, b)), float(math.atan2(b, a)), resid)


def template_residual(p: np.ndarray, template: np.ndarray) -> float:
    """Max misfit of p to k*template (least-squares k), relative to max |p|."""
    k = float(np.dot(template, p) / np.dot(template, template))
    scale = float(np.max(np.abs(p))) or 1.0
    return float(np.max(np.abs(p - k * template))) / scale


def rotations(chis) -> np.ndarray:
    """Anticlockwise lobe displacement of each frame relative to the first."""
    c = np.unwrap(np.asarray(chis, dtype=float))
    return -(c - c[0]) / 2


# -- runs --------------------------------------------------------------------


@dataclass
class RunReport:
    config: ScenarioConfig
    frames: list[dict] = field(default_factory=list)
    files: list[Path] = field(default_factory=list)
    metrics: dict = field(default_factory=dict)


def _config_summary(cfg: ScenarioConfig) -> dict:
    a = cfg.angles
    return {
        "scenario": cfg.scenario,
        "angles_rad": {"theta": a.theta, "phi": a.phi, "alpha": a.alpha, "beta": a.beta},
        "amplitude": cfg.amplitude,
        "delta_rad": cfg.delta,
        "gamma_rad": cfg.gamma,
        "retarder_rad": cfg.retarder,
        "inputs": cfg.inputs,
        "grid": {"half_extent": cfg.grid.half_extent, "samples": cfg.grid.samples, "waist": cfg.grid.waist},
        "sweep": dataclasses.asdict(cfg.sweep) if cfg.sweep else None,
    }


def _frame_configs(cfg: ScenarioConfig) -> list[tuple[float | None, ScenarioConfig]]:
    if cfg.sweep is None:
        return [(None, cfg)]
    return [(float(v), cfg.with_value(cfg.sweep.parameter, float(v))) for v in cfg.sweep.values()]


def _ensure_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {path}: {exc}") from exc
    return path


def run_scenario(cfg: ScenarioConfig, write: bool = True) -> RunReport:
    """Render every frame of ``cfg`` (one per sweep value) for ports c and d."""
    if cfg.scenario == "biphoton-sweep":
        return run_biphoton_scenario(cfg, write=write)
    out_dir = _ensure_dir(cfg.output_dir) if write else cfg.output_dir
    report = RunReport(cfg)
    stem = cfg.scenario
    chis = {"c": [], "d": []}
    for n, (value, fcfg) in enumerate(_frame_configs(cfg)):
        tag = f"{stem}_{n:03d}" if cfg.sweep else stem
        for port in ("c", "d"):
            fld, image = render_port(fcfg, port)
            pixels, p_max = output.quantize(image)
            phi_v, prof = azimuthal_profile(fcfg, port)
            fit = fit_two_fold(phi_v, prof)
            chis[port].append(fit.chi)
            frame = {
                "index": n,
                "port": port,
                "sweep_value_rad": value,
                "p_max": p_max,
                "total_power": fld.total_power(),
                "modulation_depth": modulation_depth(prof),
                "fit": {"c0": fit.c0, "c1": fit.c1, "chi_rad": fit.chi, "residual": fit.residual},
                "lobe_angle_deg": math.degrees(fit.lobe_angle),
            }
            if write:
                base = out_dir / f"{tag}_port{port}"
                if "pgm" in cfg.formats:
                    report.files.append(base.with_suffix(".pgm"))
                    output.write_pgm(report.files[-1], pixels)
                if "png" in cfg.formats:
                    report.files.append(base.with_suffix(".png"))
                    output.write_png(report.files[-1], pixels)
                if "csv" in cfg.formats:
                    p_az = Path(f"{base}_azimuthal.csv")
                    output.write_profile_csv(p_az, phi_v, 1.0, prof)
                    r_img, phi_img = image_coordinates(cfg.grid)
                    mid = cfg.grid.samples // 2
                    p_rad = Path(f"{base}_radial.csv")
                    output.write_profile_csv(p_rad, phi_img[mid], r_img[mid], image[mid])
                    report.files += [p_az, p_rad]
                frame["image"] = f"{tag}_port{port}"
            report.frames.append(frame)
    for port in ("c", "d"):
        rot = rotations(chis[port])
        for frame, r in zip((f for f in report.frames if f["port"] == port), rot):
            frame["rotation_deg"] = math.degrees(r)
    report.metrics = {
        "total_power": {p: [f["total_power"] for f in report.frames if f["port"] == p] for p in ("c", "d")},
        "modulation_depth": {p: [f["modulation_depth"] for f in report.frames if f["port"] == p] for p in ("c", "d")},
        "rotation_deg": {p: [f["rotation_deg"] for f in report.frames if f["port"] == p] for p in ("c", "d")},
    }
    if write and "json" in cfg.formats:
        path = out_dir / f"{stem}_report.json"
        output.write_json(path, {"config": _config_summary(cfg), "frames": report.frames, "metrics": report.metrics})
        report.files.append(path)
    log.info("rendered %d frames into %s", len(report.frames), out_dir)
    return report


def run_biphoton_sweep(amps: SpinOrbitAmplitudes, delta_grid) -> list[tuple[float, float, float]]:
    """(delta, coincidence, bunching) for each delta."""
    deltas = list(delta_grid)
    if not deltas:
        raise InvalidParameterError("delta grid must not be empty")
    return sweep_probabilities(amps, deltas)


def run_biphoton_scenario(cfg: ScenarioConfig, write: bool = True) -> RunReport:
    amps = product_amplitudes(cfg.angles, 1.0)
    if cfg.sweep is not None and cfg.sweep.parameter != "delta":
        raise ConfigError("biphoton-sweep only sweeps delta")
    grid = cfg.sweep.values() if cfg.sweep else np.linspace(-math.pi, math.pi, 65)
    rows = run_biphoton_sweep(amps, grid)
    report = RunReport(cfg)
    report.metrics = {
        "coincidence_probability": [r[1] for r in rows],
        "bunching_probability": [r[2] for r in rows],
        "delta_rad": [r[0] for r in rows],
    }
    if write:
        out_dir = _ensure_dir(cfg.output_dir)
        if "csv" in cfg.formats:
            path = out_dir / "biphoton_sweep.csv"
            output.write_rows_csv(path, ["delta_rad", "coincidence", "bunching"], rows)
            report.files.append(path)
        if "json" in cfg.formats:
            path = out_dir / "biphoton-sweep_report.json"
            output.write_json(path, {"config": _config_summary(cfg), "metrics": report.metrics})
            report.files.append(path)
    return report
