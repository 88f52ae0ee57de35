"""Equivalent discrete-time (Forney) channels.

Time inside a :class:`Pulse` is measured in samples, so a symbol lasts
``samples_per_symbol`` samples and unit energy means ``sum(taps**2) == 1``.
Folded autocorrelations use the lag convention

    G(k) = sum_t h(t) h*(t - k T),

which is also the autocorrelation of the minimum-phase taps returned by
:func:`spectral_factorize`: ``G(k) = sum_j f_j f*_{j-k}``.

Two routes produce a folded autocorrelation from a branch channel:

* :func:`composite_h` + :func:`folded_autocorrelation` work in the time
  domain with the truncated SRRC taps.
* :func:`spectral_fold` folds ``|C(f)|^2`` times the raised-cosine spectrum on
  a symbol-aligned DFT grid. The fold is exactly Nyquist, so a flat channel
  gives ``G = {1}`` to rounding error. The end-to-end pipeline uses it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.signal import lfilter

from .errors import DomainError, NumericalDomainError
from .fields import BranchChannel

LAG_TOLERANCE = 1e-8
UNIT_CIRCLE_TOLERANCE = 1e-7
PSD_TOLERANCE = 1e-9


# ---------------------------------------------------------------------------
# pulse shaping
# ---------------------------------------------------------------------------

def _srrc_value(t: np.ndarray, alpha: float) -> np.ndarray:
    """SRRC impulse response for ``t`` in symbol periods (T = 1)."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    at0 = np.isclose(t, 0.0, atol=1e-12)
    sing = np.isclose(np.abs(4 * alpha * t), 1.0, atol=1e-12)
    reg = ~(at0 | sing)
    tr = t[reg]
    out[reg] = (np.sin(np.pi * tr * (1 - alpha)) + 4 * alpha * tr * np.cos(np.pi * tr * (1 + alpha))) / (
        np.pi * tr * (1 - (4 * alpha * tr) ** 2)
    )
    out[at0] = 1 - alpha + 4 * alpha / np.pi
    out[sing] = alpha / math.sqrt(2) * (
        (1 + 2 / np.pi) * math.sin(np.pi / (4 * alpha)) + (1 - 2 / np.pi) * math.cos(np.pi / (4 * alpha))
    )
    return out


def raised_cosine_spectrum(nu, rolloff: float) -> np.ndarray:
    """Raised-cosine spectrum at normalized frequency ``nu = f T``.

    Scaled so that its folded sum over ``nu + m`` equals 1.
    """
    a = abs(np.asarray(nu, dtype=float))
    out = np.zeros_like(a)
    lo, hi = (1 - rolloff) / 2, (1 + rolloff) / 2
    out[a <= lo] = 1.0
    band = (a > lo) & (a <= hi)
    out[band] = 0.5 * (1 + np.cos(np.pi / rolloff * (a[band] - lo)))
    return out


@dataclass(frozen=True)
class Pulse:
    rolloff: float
    span_symbols: int
    samples_per_symbol: int
    taps: np.ndarray

    @property
    def center(self) -> int:
        return (len(self.taps) - 1) // 2

    @property
    def energy(self) -> float:
        return float(np.sum(self.taps ** 2))

    def bandwidth(self, symbol_rate_hz: float) -> float:
        """One-sided occupied bandwidth ``(1 + rolloff) Rs / 2`` in Hz."""
        return (1 + self.rolloff) * symbol_rate_hz / 2


def srrc_pulse(rolloff: float = 0.5, span_symbols: int = 16, samples_per_symbol: int = 16) -> Pulse:
    """Unit-energy square-root raised-cosine taps spanning ``span_symbols``."""
    if not 0 < rolloff <= 1:
        raise DomainError(f"rolloff must lie in (0, 1], got {rolloff}")
    if span_symbols < 8:
        raise DomainError("span must be at least 8 symbols")
    if samples_per_symbol < 4:
        raise DomainError("need at least 4 samples per symbol")
    half = span_symbols * samples_per_symbol // 2
    t = np.arange(-half, half + 1) / samples_per_symbol
    taps = _srrc_value(t, rolloff) / math.sqrt(samples_per_symbol)
    taps /= math.sqrt(np.sum(taps ** 2))
    return Pulse(rolloff, span_symbols, samples_per_symbol, taps)


# ---------------------------------------------------------------------------
# folded autocorrelation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FoldedAutocorrelation:
    """Symbol-spaced lags ``G(-K) ... G(K)`` stored centered."""

    g_lags: np.ndarray

    def __post_init__(self):
        g = np.atleast_1d(np.asarray(self.g_lags, dtype=complex))
        if g.ndim != 1 or g.size % 2 != 1:
            raise DomainError("folded autocorrelation needs an odd number of lags")
        object.__setattr__(self, "g_lags", g)

    @property
    def max_lag(self) -> int:
        return (self.g_lags.size - 1) // 2

    @property
    def g0(self) -> float:
        return float(self.g_lags[self.max_lag].real)

    def at(self, k: int) -> complex:
        return complex(self.g_lags[self.max_lag + k]) if abs(k) <= self.max_lag else 0j

    def padded(self, max_lag: int) -> np.ndarray:
        extra = max_lag - self.max_lag
        if extra < 0:
            raise DomainError("cannot pad to a shorter lag range")
        return np.pad(self.g_lags, extra)

    def scaled(self, factor: float) -> "FoldedAutocorrelation":
        return FoldedAutocorrelation(self.g_lags * factor)

    def truncated(self, tol: float = LAG_TOLERANCE) -> "FoldedAutocorrelation":
        """Drop outer lags; keep through the last lag with ``|G(k)| >= tol * G(0)``."""
        K = self.max_lag
        keep = np.nonzero(np.abs(self.g_lags[K:]) >= tol * abs(self.g0))[0]
        k_max = int(keep.max()) if keep.size else 0
        return FoldedAutocorrelation(self.g_lags[K - k_max:K + k_max + 1])

    def hermitian_error(self) -> float:
        g = self.g_lags
        return float(np.max(np.abs(g - np.conj(g[::-1]))))

    def spectrum(self, n_points: int | None = None) -> np.ndarray:
        """Real folded spectrum ``sum_k G(k) exp(-j w k)`` on a uniform grid over [0, 2 pi)."""
        K = self.max_lag
        n = n_points or max(64, 1 << int(math.ceil(math.log2(16 * (2 * K + 1)))))
        buf = np.zeros(n, dtype=complex)
        buf[:K + 1] = self.g_lags[K:]
        if K:
            buf[-K:] = self.g_lags[:K]
        return np.fft.fft(buf).real

    def min_spectrum(self) -> float:
        return float(self.spectrum().min())


def folded_autocorrelation(h, samples_per_symbol: int, tol: float = LAG_TOLERANCE) -> FoldedAutocorrelation:
    """Symbol-spaced autocorrelation of an oversampled composite response."""
    h = np.asarray(h, dtype=complex)
    if h.size == 0 or not np.any(h):
        raise DomainError("composite response is all zero")
    full = np.correlate(h, h, mode="full")  # full[n - 1 + k] = sum_t h(t + k) h*(t)
    mid = h.size - 1
    k_max = mid // samples_per_symbol
    lags = full[mid - k_max * samples_per_symbol: mid + k_max * samples_per_symbol + 1: samples_per_symbol]
    lags[k_max] = lags[k_max].real
    return FoldedAutocorrelation(lags).truncated(tol)


def _sample_branch(branch: BranchChannel, f_hz: np.ndarray, extend: bool) -> np.ndarray:
    x = branch.baseband_hz
    c = branch.c_of_f
    if x.size < 4:
        raise DomainError("branch grid needs at least 4 points")
    re = CubicSpline(x, c.real)
    im = CubicSpline(x, c.imag)
    fc = np.clip(f_hz, x[0], x[-1]) if extend else f_hz
    return re(fc) + 1j * im(fc)


def _check_coverage(branch: BranchChannel, half_band: float) -> None:
    x = branch.baseband_hz
    slack = 1e-9 * half_band
    if x[0] > -half_band + slack or x[-1] < half_band - slack:
        raise DomainError(
            f"branch grid [{x[0]:.6g}, {x[-1]:.6g}] Hz does not cover the pulse band +-{half_band:.6g} Hz"
        )


def composite_h(
    branch: BranchChannel, pulse: Pulse, symbol_rate_hz: float, nfft: int | None = None, trim: bool = True
) -> np.ndarray:
    """Oversampled ``h = g * c`` computed as ``IFFT(C(f) G(f))``.

    ``C`` is spline-interpolated onto the DFT bins; outside the branch grid it
    is held at the edge value. Sample 0 of the result lines up with the first
    pulse tap. With ``trim`` the samples below ``1e-6 max|h|`` are removed
    from both ends.
    """
    _check_coverage(branch, pulse.bandwidth(symbol_rate_hz))
    sps = pulse.samples_per_symbol
    if nfft is None:
        nfft = 1 << int(math.ceil(math.log2(4 * len(pulse.taps))))
    f_hz = np.fft.fftfreq(nfft, d=1.0 / (sps * symbol_rate_hz))
    g_f = np.fft.fft(pulse.taps, nfft)
    h = np.fft.ifft(g_f * _sample_branch(branch, f_hz, extend=True))
    if not trim:
        return h
    keep = np.nonzero(np.abs(h) >= 1e-6 * np.abs(h).max())[0]
    return h[keep[0]:keep[-1] + 1]


def spectral_fold(
    branch: BranchChannel,
    rolloff: float,
    symbol_rate_hz: float,
    fold_symbols: int = 1024,
    tol: float | None = LAG_TOLERANCE,
) -> FoldedAutocorrelation:
    """Folded autocorrelation of SRRC-shaped ``branch`` via the frequency domain.

    Evaluates ``G(k) = (1/M) sum_n |C(n Rs/M)|^2 P(n/M) exp(j 2 pi n k / M)``
    where ``P`` is the raised-cosine spectrum and ``M = fold_symbols``. Lags
    with ``|k| < M/2`` are returned (then truncated at ``tol`` unless None).
    """
    _check_coverage(branch, (1 + rolloff) * symbol_rate_hz / 2)
    M = int(fold_symbols)
    n_max = int(math.floor((1 + rolloff) / 2 * M))
    n = np.arange(-n_max, n_max + 1)
    weights = np.abs(_sample_branch(branch, n * symbol_rate_hz / M, extend=True)) ** 2
    weights *= raised_cosine_spectrum(n / M, rolloff)
    folded = np.zeros(M)
    np.add.at(folded, n % M, weights)
    g = np.fft.ifft(folded)  # g[k] = (1/M) sum_r folded[r] exp(+j 2 pi r k / M)
    K = M // 2 - 1
    lags = np.concatenate([g[-K:], g[:K + 1]])
    lags = 0.5 * (lags + np.conj(lags[::-1]))
    out = FoldedAutocorrelation(lags)
    return out.truncated(tol) if tol is not None else out


def ml_fold(ga: FoldedAutocorrelation, gb: FoldedAutocorrelation) -> FoldedAutocorrelation:
    """Sum statistic of a two-branch matched-filter bank."""
    K = max(ga.max_lag, gb.max_lag)
    return FoldedAutocorrelation(ga.padded(K) + gb.padded(K))


# ---------------------------------------------------------------------------
# spectral factorization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscreteChannel:
    taps: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "taps", np.atleast_1d(np.asarray(self.taps, dtype=complex)))

    @property
    def memory(self) -> int:
        """Channel memory ``L`` (number of taps minus one)."""
        return self.taps.size - 1

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.taps) ** 2))

    def autocorrelation(self) -> np.ndarray:
        """``G(-L) ... G(L)`` of the taps."""
        return tap_autocorrelation(self.taps)

    def zeros(self) -> np.ndarray:
        return np.roots(self.taps) if self.taps.size > 1 else np.array([], dtype=complex)


def tap_autocorrelation(f) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    return np.correlate(f, f, mode="full")


def _polynomial_from_roots(roots: np.ndarray, degree: int) -> np.ndarray:
    # prod (1 - r z^-1) evaluated on the unit circle, then inverse FFT; avoids the
    # coefficient blow-up of sequential multiplication for high degree
    if degree == 0:
        return np.ones(1, dtype=complex)
    nfft = 1 << int(math.ceil(math.log2(2 * (degree + 1))))
    zinv = np.exp(-2j * np.pi * np.arange(nfft) / nfft)
    vals = np.prod(1.0 - np.outer(zinv, roots), axis=1)
    return np.fft.ifft(vals)[:degree + 1]


def _select_minimum_phase_roots(roots: np.ndarray, K: int, unit_tol: float) -> np.ndarray:
    mag = np.abs(roots)
    inside = roots[mag < 1 - unit_tol]
    on = roots[np.abs(mag - 1) <= unit_tol]
    if on.size % 2 == 0 and inside.size + on.size // 2 == K:
        # unit-circle roots are double; keep one of each angularly adjacent pair
        on = on[np.argsort(np.angle(on))]
        pairs = 0.5 * (on[0::2] / np.abs(on[0::2]) + on[1::2] / np.abs(on[1::2]))
        return np.concatenate([inside, pairs / np.abs(pairs)]) if pairs.size else inside
    return roots[np.argsort(mag)][:K]


def spectral_factorize(
    g: FoldedAutocorrelation, label: str = "", unit_tol: float = UNIT_CIRCLE_TOLERANCE
) -> DiscreteChannel:
    """Minimum-phase ``f`` with ``sum_j f_j f*_{j-k} = G(k)`` and ``f_0 > 0``.

    Roots the Laurent polynomial ``sum_k G(k) z^-k`` and keeps the roots
    inside the unit circle.
    """
    g0 = g.g0
    if not g0 > 0:
        raise NumericalDomainError(f"G(0) must be positive, got {g0}")
    s_min = g.min_spectrum()
    if s_min < -PSD_TOLERANCE * g0:
        raise NumericalDomainError(
            f"folded spectrum is not positive semidefinite: minimum {s_min:.3e} (G(0) = {g0:.3e})"
        )
    K = g.max_lag
    if K == 0:
        return DiscreteChannel(np.array([math.sqrt(g0)]), label)
    # z^K * sum_k G(k) z^-k has descending coefficients G(-K) ... G(K)
    roots = np.roots(g.g_lags)
    if roots.size != 2 * K:
        raise NumericalDomainError("outermost lag vanished; truncate before factorizing")
    q = _polynomial_from_roots(_select_minimum_phase_roots(roots, K, unit_tol), K)
    q /= q[0]
    rq = tap_autocorrelation(q)
    scale2 = np.vdot(rq, g.g_lags).real / np.vdot(rq, rq).real
    if not scale2 > 0:
        raise NumericalDomainError("factor scaling is not positive")
    return DiscreteChannel(math.sqrt(scale2) * q, label)


# ---------------------------------------------------------------------------
# Forney observation model output
# ---------------------------------------------------------------------------

def fom_output(ch: DiscreteChannel, symbols, n0: float, rng=None) -> np.ndarray:
    """``u_k = sum_n f_n I_{k-n} + eta_k`` with ``E|eta|^2 = 2 N0``.

    ``rng`` is a seed or a ``numpy.random.Generator``; the channel starts
    from a zero state.
    """
    symbols = np.asarray(symbols, dtype=complex)
    if symbols.size == 0:
        raise DomainError("symbol sequence is empty")
    if n0 < 0:
        raise DomainError(f"N0 must be non-negative, got {n0}")
    u = lfilter(ch.taps, [1.0], symbols)
    if n0 > 0:
        rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        u = u + math.sqrt(n0) * (rng.standard_normal(symbols.size) + 1j * rng.standard_normal(symbols.size))
    return u
