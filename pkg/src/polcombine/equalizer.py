"""MMSE linear equalizer for a Forney discrete-time channel.

The equalizer output is ``y_k = sum_n c_n u_{k-n}``, an estimate of
``I_{k-D}``. The coefficients solve ``(G_f + rho I) c = xi`` where
``G_f[m, n] = G_f(m - n)``, ``rho`` is the noise variance per FOM sample over
the symbol energy, and ``xi[m] = conj(f_{D-m})``. With ``D = L`` this is
``[f_L, ..., f_0]^*``; the conjugate is what the Wiener normal equations
require and only matters for complex taps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .discretize import DiscreteChannel
from .errors import DomainError, NumericalDomainError

RHO_FLOOR = 1e-12
DEFAULT_TAPS = 31


@dataclass(frozen=True)
class EqualizerConfig:
    """``decision_delay=None`` picks the delay with the smallest MSE."""

    num_taps: int = DEFAULT_TAPS
    noise_ratio: float = 0.0
    decision_delay: int | None = None

    def __post_init__(self):
        if self.num_taps < 1:
            raise DomainError("equalizer needs at least one tap")
        if self.noise_ratio < 0:
            raise DomainError("noise ratio must be non-negative")


@dataclass(frozen=True)
class EqualizerCoeffs:
    c: np.ndarray
    decision_delay: int
    achieved_mse: float
    noise_ratio: float

    @property
    def bias(self) -> float:
        """Gain applied to the wanted symbol, ``sum_n c_n f_{D-n}``."""
        return 1.0 - self.achieved_mse


def default_num_taps(ch: DiscreteChannel, minimum: int = DEFAULT_TAPS) -> int:
    return max(minimum, ch.memory + 1)


def gf_autocorrelation(ch: DiscreteChannel, max_lag: int) -> np.ndarray:
    """``G_f(0) ... G_f(max_lag)``, zero beyond the channel memory."""
    r = ch.autocorrelation()[ch.memory:]
    out = np.zeros(max_lag + 1, dtype=complex)
    n = min(max_lag + 1, r.size)
    out[:n] = r[:n]
    return out


def gf_matrix(ch: DiscreteChannel, n: int) -> np.ndarray:
    if n < 1:
        raise DomainError("matrix size must be positive")
    col = gf_autocorrelation(ch, n - 1)
    return sla.toeplitz(col, np.conj(col))


def xi_vector(ch: DiscreteChannel, n: int, delay: int) -> np.ndarray:
    L = ch.memory
    if n < L + 1:
        raise DomainError(f"equalizer length {n} is shorter than the channel ({L + 1} taps)")
    if not 0 <= delay <= n + L - 1:
        raise DomainError(f"decision delay {delay} outside [0, {n + L - 1}]")
    xi = np.zeros(n, dtype=complex)
    for m in range(max(0, delay - L), min(n, delay + 1)):
        xi[m] = np.conj(ch.taps[delay - m])
    return xi


def _factor(ch: DiscreteChannel, n: int, rho: float):
    if not np.any(ch.taps):
        raise NumericalDomainError("channel taps are all zero; G_f is singular")
    a = gf_matrix(ch, n) + max(rho, RHO_FLOOR) * np.eye(n)
    try:
        return a, sla.cho_factor(a, lower=True, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalDomainError(f"G_f + rho I is not positive definite: {exc}") from exc


def _solve(a, chol, xi):
    c = sla.cho_solve(chol, xi)
    # one step of iterative refinement keeps the residual near machine precision
    return c + sla.cho_solve(chol, xi - a @ c)


def mmse_coefficients(ch: DiscreteChannel, cfg: EqualizerConfig) -> EqualizerCoeffs:
    n = cfg.num_taps
    L = ch.memory
    if n < L + 1:
        raise DomainError(f"equalizer length {n} is shorter than the channel ({L + 1} taps)")
    a, chol = _factor(ch, n, cfg.noise_ratio)
    if cfg.decision_delay is None:
        delays = np.arange(n + L)
        xis = np.stack([xi_vector(ch, n, d) for d in delays], axis=1)
        cs = sla.cho_solve(chol, xis)
        mse = 1.0 - np.einsum("ij,ij->j", np.conj(xis), cs).real
        delay = int(delays[np.argmin(mse)])
    else:
        delay = int(cfg.decision_delay)
    xi = xi_vector(ch, n, delay)
    c = _solve(a, chol, xi)
    mse = float(1.0 - np.vdot(xi, c).real)
    return EqualizerCoeffs(c, delay, mse, cfg.noise_ratio)


def solve_residual(ch: DiscreteChannel, eq: EqualizerCoeffs) -> float:
    """Relative residual ``||(G_f + rho I) c - xi|| / ||xi||``."""
    n = eq.c.size
    a = gf_matrix(ch, n) + max(eq.noise_ratio, RHO_FLOOR) * np.eye(n)
    xi = xi_vector(ch, n, eq.decision_delay)
    return float(np.linalg.norm(a @ eq.c - xi) / np.linalg.norm(xi))


def equalize(u, eq: EqualizerCoeffs, delay: int | None = None) -> np.ndarray:
    """Filter ``u`` and realign by the decision delay.

    Returns ``len(u) - D`` samples; entry ``j`` estimates ``I_j``. Entries
    near either end see the zero state outside ``u``.
    """
    u = np.asarray(u, dtype=complex)
    delay = eq.decision_delay if delay is None else delay
    if u.size < eq.c.size:
        raise DomainError("input shorter than the equalizer")
    y = np.convolve(u, eq.c)
    return y[delay:u.size]
