"""Receiver-feed electric field of the two-ray channel and the branch channels
synthesized from the feed's two dipoles.

All frequency responses are referenced to the line-of-sight arrival: the
common spreading loss and bulk delay of the direct path are removed, so a
channel without a ground bounce is flat in magnitude and phase across the
band. Fields are complex phasors under the ``exp(+j 2 pi f t)`` convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import SPEED_OF_LIGHT, Attitude, PathGeometry, attitude_matrix

EPS0 = 8.8541878128e-12
BRANCH_LABELS = ("Y", "Z", "RHCP", "LHCP", "EGC")
GROUND_MODES = ("fresnel", "none")


@dataclass(frozen=True)
class GroundParams:
    """Reflecting-plane electrical parameters.

    ``mode="fresnel"`` applies separate vertical/horizontal Fresnel
    coefficients; ``mode="none"`` removes the ground bounce. The reflected
    field is multiplied by ``reflection_scale`` (1 for a physical ground).
    """

    relative_permittivity: float = 15.0
    conductivity: float = 0.012
    mode: str = "fresnel"
    reflection_scale: float = 1.0

    def __post_init__(self):
        if not self.relative_permittivity >= 1.0:
            raise DomainError("relative permittivity must be >= 1")
        if not self.conductivity >= 0.0:
            raise DomainError("conductivity must be >= 0")
        if self.mode not in GROUND_MODES:
            raise DomainError(f"ground mode must be one of {GROUND_MODES}, got {self.mode!r}")
        if not math.isfinite(self.reflection_scale):
            raise DomainError("reflection_scale must be finite")


@dataclass(frozen=True)
class FieldResponse:
    freq_grid_hz: np.ndarray
    e_xp: np.ndarray
    e_yp: np.ndarray
    e_zp: np.ndarray
    carrier_hz: float

    def __post_init__(self):
        f = np.asarray(self.freq_grid_hz, dtype=float)
        if f.ndim != 1 or f.size == 0:
            raise DomainError("frequency grid must be a nonempty 1-D sequence")
        if f.size > 1 and np.any(np.diff(f) <= 0):
            raise DomainError("frequency grid must be strictly ascending")
        comps = [np.asarray(getattr(self, n), dtype=complex) for n in ("e_xp", "e_yp", "e_zp")]
        if any(c.shape != f.shape for c in comps):
            raise DomainError("field components must match the frequency grid")
        if not all(np.all(np.isfinite(c)) for c in comps):
            raise DomainError("field components must be finite")
        object.__setattr__(self, "freq_grid_hz", f)
        for name, c in zip(("e_xp", "e_yp", "e_zp"), comps):
            object.__setattr__(self, name, c)

    @property
    def baseband_hz(self) -> np.ndarray:
        return self.freq_grid_hz - self.carrier_hz


@dataclass(frozen=True)
class BranchChannel:
    label: str
    freq_grid_hz: np.ndarray
    c_of_f: np.ndarray
    carrier_hz: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.c_of_f, dtype=complex)
        f = np.asarray(self.freq_grid_hz, dtype=float)
        if c.shape != f.shape:
            raise DomainError("branch response must match its frequency grid")
        if not np.all(np.isfinite(c)):
            raise DomainError("branch response must be finite")
        object.__setattr__(self, "c_of_f", c)
        object.__setattr__(self, "freq_grid_hz", f)

    @property
    def baseband_hz(self) -> np.ndarray:
        return self.freq_grid_hz - self.carrier_hz


def frequency_grid(carrier_hz: float, symbol_rate_hz: float, rolloff: float, n_points: int = 1024) -> np.ndarray:
    """RF grid covering the occupied bandwidth ``+-(1 + rolloff) Rs / 2``."""
    half = (1.0 + rolloff) * symbol_rate_hz / 2.0
    return carrier_hz + np.linspace(-half, half, n_points)


def reflection_coefficient(grazing: float, ground: GroundParams, f: float, pol: str = "vertical") -> complex:
    """Fresnel reflection coefficient of a lossy half-space.

    Uses the grazing-angle form with complex permittivity
    ``eps_r - j sigma / (2 pi f eps0)``. Both polarizations tend to -1 at
    grazing incidence; for a perfect conductor the vertical coefficient is +1
    (the reflected vertical field adds at the surface).
    """
    if not 0.0 < grazing <= math.pi / 2:
        raise DomainError(f"grazing angle must lie in (0, pi/2], got {grazing}")
    if pol not in ("vertical", "horizontal"):
        raise DomainError(f"polarization must be 'vertical' or 'horizontal', got {pol!r}")
    if math.isinf(ground.conductivity):
        return 1.0 + 0j if pol == "vertical" else -1.0 + 0j
    eps = ground.relative_permittivity - 1j * ground.conductivity / (2 * math.pi * f * EPS0)
    s = math.sin(grazing)
    root = np.sqrt(eps - math.cos(grazing) ** 2)
    if pol == "vertical":
        return complex((eps * s - root) / (eps * s + root))
    return complex((s - root) / (s + root))


def _dipole_polarization(dipole: np.ndarray, k: np.ndarray) -> np.ndarray:
    # far-field E of a short dipole along `dipole` seen in direction k; norm = sin(angle)
    return dipole - (dipole @ k) * k


def _reflection_coeffs(geom: PathGeometry, ground: GroundParams, freqs: np.ndarray):
    if ground.mode == "none" or geom.h_r == 0.0:
        zero = np.zeros(freqs.shape, dtype=complex)
        return zero, zero
    gv = np.array([reflection_coefficient(geom.grazing_angle, ground, f, "vertical") for f in freqs])
    gh = np.array([reflection_coefficient(geom.grazing_angle, ground, f, "horizontal") for f in freqs])
    return gv * ground.reflection_scale, gh * ground.reflection_scale


def path_fields(geom: PathGeometry, att: Attitude, ground: GroundParams, grid) -> tuple[np.ndarray, np.ndarray]:
    """Ground-frame field vectors ``(los, refl)`` of shape ``(n, 3)`` on ``grid``."""
    freqs = np.asarray(grid, dtype=float)
    dipole = attitude_matrix(att) @ np.array([0.0, 0.0, 1.0])

    a_los = _dipole_polarization(dipole, geom.los_departure)
    los = np.broadcast_to(a_los, (freqs.size, 3)).astype(complex)

    k_in, k_out = geom.refl_departure, geom.refl_arrival
    a_inc = _dipole_polarization(dipole, k_in)
    h_hat = np.cross(k_in, [0.0, 0.0, 1.0])
    h_hat /= np.linalg.norm(h_hat)
    p_in = np.cross(h_hat, k_in)
    p_out = np.cross(h_hat, k_out)
    gv, gh = _reflection_coeffs(geom, ground, freqs)
    a_refl = (gh * (a_inc @ h_hat))[:, None] * h_hat + (gv * (a_inc @ p_in))[:, None] * p_out

    delta = geom.refl_length - geom.los_length
    phasor = (geom.los_length / geom.refl_length) * np.exp(-2j * np.pi * freqs * delta / SPEED_OF_LIGHT)
    return los, phasor[:, None] * a_refl


def receiver_field(geom: PathGeometry, att: Attitude, ground: GroundParams, grid, carrier_hz: float | None = None) -> FieldResponse:
    """Field components along x', y', z' at the receiver feed over ``grid`` (Hz, RF)."""
    freqs = np.asarray(grid, dtype=float)
    if freqs.size == 0:
        raise DomainError("frequency grid is empty")
    los, refl = path_fields(geom, att, ground, freqs)
    e_rx = (los + refl) @ geom.rx_frame
    if carrier_hz is None:
        carrier_hz = 0.5 * (freqs[0] + freqs[-1])
    return FieldResponse(freqs, e_rx[:, 0], e_rx[:, 1], e_rx[:, 2], carrier_hz)


def branch_y(fr: FieldResponse) -> BranchChannel:
    return BranchChannel("Y", fr.freq_grid_hz, fr.e_yp, fr.carrier_hz)


def branch_z(fr: FieldResponse) -> BranchChannel:
    return BranchChannel("Z", fr.freq_grid_hz, fr.e_zp, fr.carrier_hz)


def synthesize_rhcp(fr: FieldResponse) -> BranchChannel:
    """90-degree hybrid output ``(C_y' - j C_z') / sqrt(2)``."""
    return BranchChannel("RHCP", fr.freq_grid_hz, (fr.e_yp - 1j * fr.e_zp) / math.sqrt(2), fr.carrier_hz)


def synthesize_lhcp(fr: FieldResponse) -> BranchChannel:
    """90-degree hybrid output ``(C_y' + j C_z') / sqrt(2)``."""
    return BranchChannel("LHCP", fr.freq_grid_hz, (fr.e_yp + 1j * fr.e_zp) / math.sqrt(2), fr.carrier_hz)


def _interp_complex(x0: float, x: np.ndarray, y: np.ndarray) -> complex:
    return complex(np.interp(x0, x, y.real) + 1j * np.interp(x0, x, y.imag))


def equal_gain_combine(fr: FieldResponse, cophase_at: float | None = None) -> BranchChannel:
    """Co-phase the y' and z' outputs at ``cophase_at`` (RF Hz) and add them.

    Defaults to the band center. The sum is scaled by 1/sqrt(2) so the
    combiner passes white noise at unit gain, like the hybrid.
    """
    f = fr.freq_grid_hz
    if cophase_at is None:
        cophase_at = fr.carrier_hz
    if not f[0] <= cophase_at <= f[-1]:
        raise DomainError(f"co-phasing frequency {cophase_at} Hz is outside the grid")
    alpha = np.angle(_interp_complex(cophase_at, f, fr.e_yp))
    beta = np.angle(_interp_complex(cophase_at, f, fr.e_zp))
    c = (np.exp(-1j * alpha) * fr.e_yp + np.exp(-1j * beta) * fr.e_zp) / math.sqrt(2)
    return BranchChannel("EGC", f, c, fr.carrier_hz)


def all_branches(fr: FieldResponse, cophase_at: float | None = None) -> dict[str, BranchChannel]:
    return {
        "Y": branch_y(fr),
        "Z": branch_z(fr),
        "RHCP": synthesize_rhcp(fr),
        "LHCP": synthesize_lhcp(fr),
        "EGC": equal_gain_combine(fr, cophase_at),
    }
