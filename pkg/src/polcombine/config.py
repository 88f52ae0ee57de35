"""Scenario configuration: a single JSON document with documented defaults."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, DomainError
from .fields import GroundParams
from .geometry import TABLE1_RX, TABLE1_TX, Attitude, GeodeticPosition

SCHEMES = ("ML_VH", "ML_RL", "RHCP", "LHCP", "EGC")
NORMALIZATIONS = ("common", "per_scheme")

FIELD_NOTES = {
    "tx": "transmitter position: latitude_deg, longitude_deg (decimal, W/S negative), altitude_m AMSL (Table 1 default)",
    "rx": "receiver position (Table 1 default)",
    "rx_height_m": "receiver feed height above the reflecting plane [m]",
    "aircraft_height_m": "extra transmitter height added on top of the AMSL difference [m]",
    "tx_height_m": "override for the transmitter height above the plane [m]; null derives it from altitudes",
    "attitude": "aircraft yaw/pitch/roll in degrees, applied as Rz(yaw) Rx(pitch) Ry(roll)",
    "carrier_hz": "RF carrier [Hz]",
    "symbol_rate_hz": "symbol rate Rs [symbols/s]",
    "rolloff": "SRRC excess bandwidth",
    "ground": "Fresnel ground: relative_permittivity, conductivity [S/m], mode fresnel|none, reflection_scale",
    "gamma": "16-APSK outer/inner radius ratio",
    "phi": "16-APSK outer ring phase [rad]",
    "schemes": f"subset of {list(SCHEMES)}",
    "ebn0_grid_db": "ascending Eb/N0 points [dB]; Eb counts energy summed over both feed dipoles",
    "min_errors": "stop a point after this many bit errors",
    "max_bits": "stop a point after this many bits",
    "block_symbols": "symbols per random block (fixed per-block seeding)",
    "seed": "master seed",
    "workers": "parallel worker processes (results do not depend on it)",
    "n_freq": "points in the RF frequency grid",
    "fold_symbols": "DFT length in symbols for the frequency-domain fold",
    "lag_tolerance": "drop folded lags below this fraction of G(0)",
    "equalizer_taps": "MMSE length; null uses max(31, L + 1)",
    "decision_delay": "MMSE decision delay; null picks the minimum-MSE delay",
    "normalization": "common: all schemes share the ML_VH energy reference; per_scheme: each scheme unit energy",
    "cophase_hz": "equal-gain co-phasing frequency offset from the carrier [Hz]",
}


@dataclass
class ScenarioConfig:
    tx: GeodeticPosition = TABLE1_TX
    rx: GeodeticPosition = TABLE1_RX
    rx_height_m: float = 10.0
    aircraft_height_m: float = 0.0
    tx_height_m: float | None = None
    attitude: Attitude = field(default_factory=lambda: Attitude(5.0, 15.0, 10.0))
    carrier_hz: float = 1.8e9
    symbol_rate_hz: float = 10e6
    rolloff: float = 0.5
    ground: GroundParams = field(default_factory=GroundParams)
    gamma: float = 2.46
    phi: float = math.pi / 12
    schemes: list[str] = field(default_factory=lambda: list(SCHEMES))
    ebn0_grid_db: list[float] = field(default_factory=lambda: [float(x) for x in range(2, 22, 2)])
    min_errors: int = 200
    max_bits: int = 20_000_000
    block_symbols: int = 32768
    seed: int = 20181015
    workers: int = 1
    n_freq: int = 1024
    fold_symbols: int = 1024
    lag_tolerance: float = 1e-8
    equalizer_taps: int | None = None
    decision_delay: int | None = None
    normalization: str = "common"
    cophase_hz: float = 0.0

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not self.schemes:
            raise ConfigError("scheme list is empty")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad:
            raise ConfigError(f"unknown schemes {bad}; choose from {list(SCHEMES)}")
        if len(set(self.schemes)) != len(self.schemes):
            raise ConfigError("duplicate schemes")
        grid = list(self.ebn0_grid_db)
        if not grid:
            raise ConfigError("Eb/N0 grid is empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("Eb/N0 grid must be strictly ascending")
        if self.min_errors < 1 or self.max_bits < 4:
            raise ConfigError("stop rule needs min_errors >= 1 and max_bits >= 4")
        if self.block_symbols < 1 or self.workers < 1:
            raise ConfigError("block_symbols and workers must be positive")
        if self.normalization not in NORMALIZATIONS:
            raise ConfigError(f"normalization must be one of {NORMALIZATIONS}")
        if not self.symbol_rate_hz > 0 or not self.carrier_hz > 0:
            raise ConfigError("carrier and symbol rate must be positive")
        if not 0 < self.rolloff <= 1:
            raise ConfigError("rolloff must lie in (0, 1]")
        if self.n_freq < 16 or self.fold_symbols < 16:
            raise ConfigError("n_freq and fold_symbols must be at least 16")
        if abs(self.cophase_hz) > (1 + self.rolloff) * self.symbol_rate_hz / 2:
            raise ConfigError("co-phasing frequency lies outside the signal band")

    def heights_above_ground(self) -> tuple[float, float]:
        """``(h_T, h_R)`` above the reflecting plane, which lies ``rx_height_m`` below the feed."""
        h_r = self.rx_height_m
        if self.tx_height_m is not None:
            return self.tx_height_m, h_r
        return self.tx.altitude_m - self.rx.altitude_m + h_r + self.aircraft_height_m, h_r

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        data = {k: v for k, v in data.items() if not k.startswith("_")}
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            for key, typ in (("tx", GeodeticPosition), ("rx", GeodeticPosition), ("attitude", Attitude), ("ground", GroundParams)):
                if key in data and isinstance(data[key], dict):
                    data[key] = typ(**data[key])
            return cls(**data)
        except (TypeError, DomainError) as exc:
            raise ConfigError(str(exc)) from exc

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)


def load_config(path) -> ScenarioConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return ScenarioConfig.from_dict(data)


def example_config_dict() -> dict:
    out = {"_notes": FIELD_NOTES}
    out.update(ScenarioConfig().to_dict())
    return out
