"""Helmholtz Green kernel and wave parameters."""

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
INV_4PI = 1.0 / (4.0 * np.pi)


@dataclass(frozen=True)
class WaveContext:
    """Free-space wavenumber ``k = 2 pi f / c`` (rad/m) and frequency ``f`` (Hz)."""

    wavenumber: float
    frequency: float

    def __post_init__(self):
        if not self.wavenumber > 0:
            raise ValueError("wavenumber must be positive")

    @classmethod
    def from_frequency(cls, frequency_hz):
        return cls(2 * np.pi * frequency_hz / SPEED_OF_LIGHT, float(frequency_hz))

    @classmethod
    def from_mhz(cls, frequency_mhz):
        return cls.from_frequency(frequency_mhz * 1e6)

    @classmethod
    def from_wavenumber(cls, k):
        return cls(float(k), float(k) * SPEED_OF_LIGHT / (2 * np.pi))

    @property
    def k(self):
        return self.wavenumber

    @property
    def wavelength(self):
        return 2 * np.pi / self.wavenumber


def green_kernel(x, y, k):
    """``g(x, y) = -exp(ik|x-y|) / (4 pi |x-y|)``, broadcasting over leading axes.

    ``k`` may be a float or a :class:`WaveContext`; ``k = 0`` gives the static kernel.
    """
    k = getattr(k, "wavenumber", k)
    r = np.linalg.norm(np.asarray(x, dtype=float) - np.asarray(y, dtype=float), axis=-1)
    if np.any(r == 0):
        raise ValueError("green_kernel: coincident points")
    return -INV_4PI * np.exp(1j * k * r) / r


def green_gradient(x, y, k):
    """Gradient of :func:`green_kernel` with respect to ``x``."""
    k = getattr(k, "wavenumber", k)
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    r = np.linalg.norm(d, axis=-1)
    if np.any(r == 0):
        raise ValueError("green_gradient: coincident points")
    h = -INV_4PI * np.exp(1j * k * r) * (1j * k * r - 1) / r**3
    return h[..., None] * d
