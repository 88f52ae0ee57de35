"""End-to-end pipeline: scenario -> five Forney channels -> MMSE BER sweep."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from .config import ScenarioConfig
from .discretize import DiscreteChannel, FoldedAutocorrelation, fom_output, ml_fold, spectral_factorize, spectral_fold
from .equalizer import EqualizerCoeffs, EqualizerConfig, default_num_taps, equalize, mmse_coefficients
from .errors import DomainError, NumericalDomainError
from .fields import FieldResponse, all_branches, frequency_grid, receiver_field
from .geometry import PathGeometry, two_ray_geometry
from .modem import ApskConstellation, build_16apsk, demap_hard, ebn0_to_n0, map_bits

CSV_COLUMNS = ("scheme", "ebn0_db", "bits", "bit_errors", "ber", "converged")


@dataclass(frozen=True)
class BerPoint:
    scheme: str
    ebn0_db: float
    bits: int
    bit_errors: int
    ber: float
    converged: bool

    @property
    def sigma(self) -> float:
        """Binomial standard error of ``ber``."""
        return binomial_sigma(self.ber, self.bits)


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / n) if n else math.inf


def not_worse(a: BerPoint, b: BerPoint, n_sigma: float = 2.0) -> bool:
    """``ber(a) <= ber(b)`` up to ``n_sigma`` combined binomial standard errors."""
    return a.ber - b.ber <= n_sigma * math.hypot(a.sigma, b.sigma)


@dataclass
class SchemeSet:
    geometry: PathGeometry
    field: FieldResponse
    branches: dict
    folds: dict
    channels: dict
    reference_energy: float


def scenario_field(cfg: ScenarioConfig) -> tuple[PathGeometry, FieldResponse]:
    geom = two_ray_geometry(cfg)
    grid = frequency_grid(cfg.carrier_hz, cfg.symbol_rate_hz, cfg.rolloff, cfg.n_freq)
    return geom, receiver_field(geom, cfg.attitude, cfg.ground, grid, cfg.carrier_hz)


def build_scheme_set(cfg: ScenarioConfig) -> SchemeSet:
    """Geometry, fields, branches, folds and factorized channels for ``cfg``."""
    geom, fr = scenario_field(cfg)
    branches = all_branches(fr, cfg.carrier_hz + cfg.cophase_hz)
    raw = {
        name: spectral_fold(branches[name], cfg.rolloff, cfg.symbol_rate_hz, cfg.fold_symbols, tol=None)
        for name in ("Y", "Z", "RHCP", "LHCP", "EGC")
    }
    folds: dict[str, FoldedAutocorrelation] = {
        "ML_VH": ml_fold(raw["Y"], raw["Z"]),
        "ML_RL": ml_fold(raw["RHCP"], raw["LHCP"]),
        "RHCP": raw["RHCP"],
        "LHCP": raw["LHCP"],
        "EGC": raw["EGC"],
    }
    reference = folds["ML_VH"].g0
    if not reference > 0:
        raise NumericalDomainError("received field is zero at the feed")
    channels = {}
    for name in cfg.schemes:
        g = folds[name]
        scale = reference if cfg.normalization == "common" else g.g0
        if not g.g0 > 0:
            raise NumericalDomainError(f"{name}: branch carries no signal energy")
        try:
            channels[name] = spectral_factorize(g.scaled(1.0 / scale).truncated(cfg.lag_tolerance), name)
        except (NumericalDomainError, DomainError) as exc:
            raise type(exc)(f"{name}: {exc}") from exc
    return SchemeSet(geom, fr, branches, folds, channels, reference)


def build_schemes(cfg: ScenarioConfig) -> dict[str, DiscreteChannel]:
    """Scheme name -> minimum-phase Forney channel.

    With ``normalization="common"`` every channel is divided by the ML_VH
    energy, so the ML schemes have unit energy and the single-output schemes
    keep their power deficit relative to optimal combining.
    """
    return build_scheme_set(cfg).channels


def equalizer_for(ch: DiscreteChannel, n0: float, cfg: ScenarioConfig, const: ApskConstellation) -> EqualizerCoeffs:
    n_taps = cfg.equalizer_taps or default_num_taps(ch)
    rho = 2.0 * n0 / const.symbol_energy
    return mmse_coefficients(ch, EqualizerConfig(n_taps, rho, cfg.decision_delay))


def block_rng(seed: int, point_index: int, block_index: int) -> np.random.Generator:
    """Counter-based stream for one block; shared by all schemes at a sweep point."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(point_index, block_index))))


def simulate_block(
    ch: DiscreteChannel,
    eq: EqualizerCoeffs,
    const: ApskConstellation,
    n0: float,
    n_symbols: int,
    rng: np.random.Generator,
) -> tuple[int, int]:
    """Send ``n_symbols`` counted symbols through FOM + MMSE; return ``(bits, errors)``."""
    L, n_taps, delay = ch.memory, eq.c.size, eq.decision_delay
    total = n_symbols + n_taps + L - 1
    bits = rng.integers(0, 2, size=4 * total, dtype=np.uint8)
    u = fom_output(ch, map_bits(bits, const), n0, rng)
    y = equalize(u, eq) / eq.bias
    start = max(0, n_taps - 1 + L - delay)
    decided = demap_hard(y[start:start + n_symbols], const)
    sent = bits[4 * start:4 * (start + n_symbols)]
    return sent.size, int(np.count_nonzero(decided != sent))


def simulate_point(args) -> BerPoint:
    cfg, scheme, point_index, ch = args
    const = build_16apsk(cfg.gamma, cfg.phi)
    ebn0 = cfg.ebn0_grid_db[point_index]
    n0 = ebn0_to_n0(ebn0, const, 1.0)
    eq = equalizer_for(ch, n0, cfg, const)
    bits = errors = block = 0
    while errors < cfg.min_errors and bits < cfg.max_bits:
        b, e = simulate_block(ch, eq, const, n0, cfg.block_symbols, block_rng(cfg.seed, point_index, block))
        bits += b
        errors += e
        block += 1
    return BerPoint(scheme, float(ebn0), bits, errors, errors / bits, errors >= cfg.min_errors)


def run_ber(cfg: ScenarioConfig, workers: int | None = None, channels: dict | None = None) -> list[BerPoint]:
    """Monte-Carlo BER for every (scheme, Eb/N0) pair, ordered scheme-major.

    Each point draws block ``b`` from the stream keyed by ``(seed, point, b)``,
    so the result does not depend on the number of workers.
    """
    channels = channels or build_schemes(cfg)
    tasks = [(cfg, s, i, channels[s]) for s in cfg.schemes for i in range(len(cfg.ebn0_grid_db))]
    workers = workers or cfg.workers
    if workers <= 1:
        return [simulate_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(simulate_point, tasks))


def results_table(points) -> list[dict]:
    return [asdict(p) for p in points]


def write_csv(points, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for p in points:
            writer.writerow([p.scheme, repr(p.ebn0_db), p.bits, p.bit_errors, repr(p.ber), int(p.converged)])
    return path


def read_csv(path) -> list[BerPoint]:
    with Path(path).open(newline="") as fh:
        return [
            BerPoint(r["scheme"], float(r["ebn0_db"]), int(r["bits"]), int(r["bit_errors"]), float(r["ber"]), r["converged"] == "1")
            for r in csv.DictReader(fh)
        ]


def write_json(points, cfg: ScenarioConfig, path) -> Path:
    path = Path(path)
    doc = {"config": cfg.to_dict(), "results": results_table(points)}
    path.write_text(json.dumps(doc, indent=2))
    return path


def emit_results(points, cfg: ScenarioConfig, out_prefix, formats=("csv", "json")) -> list[Path]:
    """Write ``<prefix>.csv`` and/or ``<prefix>.json``; the JSON echoes the full config."""
    points = list(points)
    if not points:
        raise DomainError("no results to write")
    prefix = Path(out_prefix)
    written = []
    if "csv" in formats:
        written.append(write_csv(points, prefix.with_suffix(".csv")))
    if "json" in formats:
        written.append(write_json(points, cfg, prefix.with_suffix(".json")))
    return written
