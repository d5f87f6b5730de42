"""Scenario configuration: YAML with explicit units on every physical quantity.

Quantities are strings like ``"633nm"``, ``"1.5 mm"``, ``"2urad"`` or
``"5z_R"`` (lengths relative to the beam's Rayleigh range); bare numbers are
taken as SI.  Unit bugs are the dominant failure mode in this domain, so
resolution happens once, at parse time, and everything downstream is SI.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import yaml

from .beam import BeamParams
from .polarization import PolarizationState

PLANCK = 6.62607015e-34  # J s
LIGHT_SPEED = 299792458.0  # m/s

SCHEMES = ("position", "quadrant", "polarization", "joint")

UNIT_SCALES = {
    "m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9, "pm": 1e-12,
    "rad": 1.0, "mrad": 1e-3, "urad": 1e-6, "µrad": 1e-6, "nrad": 1e-9,
    "deg": math.pi / 180.0,
    "J": 1.0, "mJ": 1e-3, "uJ": 1e-6, "µJ": 1e-6, "nJ": 1e-9, "pJ": 1e-12,
    "fJ": 1e-15, "aJ": 1e-18,
}

_QUANTITY_RE = re.compile(
    r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([A-Za-zµ_]*)\s*$"
)


class ConfigError(ValueError):
    """Invalid scenario configuration; the message names the offending field."""


def parse_quantity(value, *, rayleigh: Optional[float] = None, where: str = "value") -> float:
    """Resolve a number-with-unit into SI."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a quantity, got boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{where}: expected a number or quantity string, got {value!r}")
    match = _QUANTITY_RE.match(value)
    if not match:
        raise ConfigError(f"{where}: cannot parse quantity {value!r}")
    number, unit = float(match.group(1)), match.group(2)
    if unit == "":
        return number
    if unit == "z_R" or unit == "zR":
        if rayleigh is None:
            raise ConfigError(f"{where}: {value!r} needs a beam to resolve z_R units")
        return number * rayleigh
    if unit in UNIT_SCALES:
        return number * UNIT_SCALES[unit]
    raise ConfigError(f"{where}: unknown unit {unit!r} in {value!r}")


def parse_grid(spec, *, rayleigh: Optional[float] = None, where: str = "grid") -> np.ndarray:
    """A grid is either an explicit list of quantities or {start, stop, count}."""
    if isinstance(spec, dict):
        unknown = set(spec) - {"start", "stop", "count"}
        if unknown:
            raise ConfigError(f"{where}: unknown grid keys {sorted(unknown)}")
        try:
            start = parse_quantity(spec["start"], rayleigh=rayleigh, where=f"{where}.start")
            stop = parse_quantity(spec["stop"], rayleigh=rayleigh, where=f"{where}.stop")
            count = int(spec["count"])
        except KeyError as missing:
            raise ConfigError(f"{where}: grid needs start/stop/count, missing {missing}")
        if count < 1:
            raise ConfigError(f"{where}: count must be >= 1")
        values = np.linspace(start, stop, count)
    elif isinstance(spec, list):
        values = np.array(
            [parse_quantity(v, rayleigh=rayleigh, where=f"{where}[{i}]") for i, v in enumerate(spec)]
        )
    else:
        values = np.array([parse_quantity(spec, rayleigh=rayleigh, where=where)])
    if values.size == 0:
        raise ConfigError(f"{where}: grid must be nonempty")
    if values.size > 1 and not np.all(np.diff(values) > 0.0):
        raise ConfigError(f"{where}: grid must be strictly increasing")
    return values


def _parse_beam(section, where="beam") -> BeamParams:
    if not isinstance(section, dict):
        raise ConfigError(f"{where}: expected a mapping")
    unknown = set(section) - {"wavelength", "k", "w0", "z_R", "xi"}
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    if "k" in section:
        k = parse_quantity(section["k"], where=f"{where}.k")
        if k <= 0.0:
            raise ConfigError(f"{where}.k: wavenumber must be positive, got {k}")
        wavelength = 2.0 * math.pi / k
    elif "wavelength" in section:
        wavelength = parse_quantity(section["wavelength"], where=f"{where}.wavelength")
        if wavelength <= 0.0:
            raise ConfigError(f"{where}.wavelength: must be positive, got {wavelength}")
    else:
        raise ConfigError(f"{where}: needs wavelength or k")
    xi = parse_quantity(section.get("xi", 0.0), where=f"{where}.xi")
    if "w0" in section and "z_R" in section:
        raise ConfigError(f"{where}: give w0 or z_R, not both")
    try:
        if "z_R" in section:
            z_r = parse_quantity(section["z_R"], where=f"{where}.z_R")
            beam = BeamParams.from_rayleigh_range(z_r, wavelength, xi)
        elif "w0" in section:
            w0 = parse_quantity(section["w0"], where=f"{where}.w0")
            beam = BeamParams.from_wavelength(wavelength, w0, xi)
        else:
            raise ConfigError(f"{where}: needs w0 or z_R")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}")
    return beam


def _parse_polarization(section, where="polarization") -> PolarizationState:
    if section is None:
        return PolarizationState.diagonal()
    if isinstance(section, str):
        presets = {
            "diagonal": PolarizationState.diagonal,
            "plus": PolarizationState.diagonal,
            "horizontal": PolarizationState.horizontal,
            "vertical": PolarizationState.vertical,
            "circular": PolarizationState.circular,
        }
        if section not in presets:
            raise ConfigError(f"{where}: unknown preset {section!r}")
        return presets[section]()
    if not isinstance(section, dict):
        raise ConfigError(f"{where}: expected a mapping or preset name")
    unknown = set(section) - {"polar", "azimuth"}
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    polar = parse_quantity(section.get("polar", math.pi / 2), where=f"{where}.polar")
    azimuth = parse_quantity(section.get("azimuth", 0.0), where=f"{where}.azimuth")
    try:
        return PolarizationState.from_bloch(polar, azimuth)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}")


@dataclass(frozen=True)
class RunBlock:
    """One scheme with its evaluation grids."""

    scheme: str
    theta: np.ndarray
    z: Optional[np.ndarray] = None
    split: Optional[float] = None


@dataclass(frozen=True)
class MonteCarloBlock:
    theta: float
    nu: int
    trials: int
    seed: int
    interval: Optional[tuple[float, float]] = None


@dataclass(frozen=True)
class ScenarioConfig:
    beam: BeamParams
    polarization: PolarizationState
    runs: tuple[RunBlock, ...]
    montecarlo: Optional[MonteCarloBlock]
    raw_text: str


def _parse_run(block, beam, index) -> RunBlock:
    where = f"run[{index}]"
    if not isinstance(block, dict):
        raise ConfigError(f"{where}: expected a mapping")
    unknown = set(block) - {"scheme", "theta", "z", "split"}
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    scheme = block.get("scheme")
    if scheme not in SCHEMES:
        raise ConfigError(f"{where}.scheme: must be one of {SCHEMES}, got {scheme!r}")
    if "theta" not in block:
        raise ConfigError(f"{where}: needs a theta value or grid")
    theta = parse_grid(block["theta"], rayleigh=beam.rayleigh_range, where=f"{where}.theta")
    needs_z = scheme in ("position", "quadrant", "joint")
    z = None
    if needs_z:
        if "z" not in block:
            raise ConfigError(f"{where}: scheme {scheme!r} needs a z value or grid")
        z = parse_grid(block["z"], rayleigh=beam.rayleigh_range, where=f"{where}.z")
        if np.any(z < 0.0):
            raise ConfigError(f"{where}.z: detector positions must be >= 0")
    elif "z" in block:
        raise ConfigError(f"{where}.z: scheme 'polarization' is independent of z")
    split = None
    if "split" in block:
        if scheme != "quadrant":
            raise ConfigError(f"{where}.split: only the quadrant scheme has a split line")
        split = parse_quantity(block["split"], rayleigh=beam.rayleigh_range, where=f"{where}.split")
    return RunBlock(scheme=scheme, theta=theta, z=z, split=split)


def _parse_montecarlo(section, beam, wavelength) -> MonteCarloBlock:
    where = "montecarlo"
    if not isinstance(section, dict):
        raise ConfigError(f"{where}: expected a mapping")
    unknown = set(section) - {"theta", "nu", "energy", "trials", "seed", "interval"}
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    if "theta" not in section:
        raise ConfigError(f"{where}: needs theta")
    theta = parse_quantity(section["theta"], where=f"{where}.theta")
    if "nu" in section and "energy" in section:
        raise ConfigError(f"{where}: give nu or energy, not both")
    if "nu" in section:
        nu = int(section["nu"])
    elif "energy" in section:
        # one detected photon per quantum hbar*omega = h c / lambda
        energy = parse_quantity(section["energy"], where=f"{where}.energy")
        nu = int(energy * wavelength / (PLANCK * LIGHT_SPEED))
    else:
        raise ConfigError(f"{where}: needs nu (photon count) or energy")
    if nu < 1:
        raise ConfigError(f"{where}: nu must be >= 1, got {nu}")
    trials = int(section.get("trials", 200))
    if trials < 1:
        raise ConfigError(f"{where}: trials must be >= 1")
    seed = int(section.get("seed", 0))
    interval = None
    if "interval" in section:
        pair = section["interval"]
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ConfigError(f"{where}.interval: expected [low, high]")
        lo = parse_quantity(pair[0], where=f"{where}.interval[0]")
        hi = parse_quantity(pair[1], where=f"{where}.interval[1]")
        if not lo < hi:
            raise ConfigError(f"{where}.interval: low must be < high")
        interval = (lo, hi)
    return MonteCarloBlock(theta=theta, nu=nu, trials=trials, seed=seed, interval=interval)


def parse_config_text(text: str) -> ScenarioConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"not valid YAML: {exc}")
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("top level must be a mapping")
    unknown = set(data) - {"beam", "polarization", "run", "montecarlo"}
    if unknown:
        raise ConfigError(f"unknown top-level keys {sorted(unknown)}")
    if "beam" not in data:
        raise ConfigError("missing 'beam' section")
    beam = _parse_beam(data["beam"])
    pol = _parse_polarization(data.get("polarization"))

    run_section = data.get("run", [])
    if isinstance(run_section, dict):
        run_section = [run_section]
    if not isinstance(run_section, list):
        raise ConfigError("run: expected a block or list of blocks")
    runs = tuple(_parse_run(block, beam, i) for i, block in enumerate(run_section))

    mc = None
    if "montecarlo" in data:
        mc = _parse_montecarlo(data["montecarlo"], beam, beam.wavelength)
    return ScenarioConfig(beam=beam, polarization=pol, runs=runs, montecarlo=mc, raw_text=text)


def load_config(path) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    return parse_config_text(text)
