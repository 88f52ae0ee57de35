"""DVB-S2 style 16-APSK: constellation, Gray bit mapping and hard demapping."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

BITS_PER_SYMBOL = 4
DEFAULT_GAMMA = 2.46
DEFAULT_PHI = math.pi / 12
TIE_RTOL = 1e-12
TIE_ATOL = 1e-24

# DVB-S2 (EN 302 307) 16APSK labels, MSB first. Inner ring point k sits at
# pi/4 + k pi/2; outer ring point k at phi + k pi/6. With phi = pi/12 the outer
# angles are 15, 45, ..., 345 degrees as in the standard's figure.
_INNER_LABELS = (0b1100, 0b1110, 0b1111, 0b1101)
_OUTER_LABELS = (
    0b0100, 0b0000, 0b1000, 0b1010, 0b0010, 0b0110,
    0b0111, 0b0011, 0b1011, 0b1001, 0b0001, 0b0101,
)


@dataclass(frozen=True)
class ApskConstellation:
    gamma: float
    phi: float
    r1: float
    r2: float
    points: np.ndarray      # inner ring first, then outer ring
    bit_labels: np.ndarray  # bit_labels[i] is the 4-bit label of points[i]

    @property
    def by_label(self) -> np.ndarray:
        """Points indexed by their label."""
        out = np.empty(16, dtype=complex)
        out[self.bit_labels] = self.points
        return out

    @property
    def symbol_energy(self) -> float:
        return float(np.mean(np.abs(self.points) ** 2))


def build_16apsk(gamma: float = DEFAULT_GAMMA, phi: float = DEFAULT_PHI) -> ApskConstellation:
    """4+12 APSK with radius ratio ``gamma`` and unit average energy."""
    if not gamma > 1:
        raise DomainError(f"radius ratio must exceed 1, got {gamma}")
    r1 = math.sqrt(16.0 / (4.0 + 12.0 * gamma ** 2))
    r2 = gamma * r1
    inner = r1 * np.exp(1j * (np.pi / 4 + np.arange(4) * np.pi / 2))
    outer = r2 * np.exp(1j * (phi + np.arange(12) * np.pi / 6))
    labels = np.array(_INNER_LABELS + _OUTER_LABELS)
    return ApskConstellation(gamma, phi, r1, r2, np.concatenate([inner, outer]), labels)


def bits_to_labels(bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.int64)
    if bits.size % BITS_PER_SYMBOL:
        raise DomainError("bit count must be a multiple of 4")
    return bits.reshape(-1, BITS_PER_SYMBOL) @ np.array([8, 4, 2, 1])


def labels_to_bits(labels) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    return ((labels[:, None] >> np.array([3, 2, 1, 0])) & 1).astype(np.uint8).ravel()


def map_bits(bits, const: ApskConstellation) -> np.ndarray:
    return const.by_label[bits_to_labels(bits)]


def nearest_point(symbols, const: ApskConstellation) -> np.ndarray:
    """Index into ``const.points`` of the closest point; ties go to the lower index."""
    symbols = np.asarray(symbols, dtype=complex)
    out = np.empty(symbols.shape, dtype=np.int64)
    step = 1 << 16
    for start in range(0, symbols.size, step):
        chunk = symbols[start:start + step]
        d2 = np.abs(chunk[:, None] - const.points[None, :]) ** 2
        # distances equal up to rounding count as ties
        near = d2 <= d2.min(axis=1, keepdims=True) * (1 + TIE_RTOL) + TIE_ATOL
        out[start:start + step] = np.argmax(near, axis=1)
    return out


def demap_hard(symbols, const: ApskConstellation) -> np.ndarray:
    return labels_to_bits(const.bit_labels[nearest_point(symbols, const)])


def ebn0_to_n0(ebn0_db: float, const: ApskConstellation, channel_energy: float = 1.0) -> float:
    """Noise level ``N0`` for a target Eb/N0 (dB).

    The FOM noise has variance ``2 N0`` per complex sample, and
    ``Eb = channel_energy * Es / 4``.
    """
    if not channel_energy > 0:
        raise DomainError("channel energy must be positive")
    return channel_energy * const.symbol_energy / (BITS_PER_SYMBOL * 10.0 ** (ebn0_db / 10.0))
