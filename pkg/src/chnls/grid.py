"""Periodic Fourier grid, spectral differentiation, and the Helmholtz operator.

All spatial operations in the package run through a :class:`GridSpec`: a uniform
grid on the periodic interval [-L, L) together with its FFT-ordered wavenumber
table k_j = pi*j/L.  The Helmholtz operator 1 - a^2*d_xx is diagonal in Fourier
space with symbol 1 + a^2 k^2, so both its application and its inverse are exact
per-mode multiplications.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class GridError(ValueError):
    """Invalid grid construction parameters."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [-L, L) with FFT-ordered wavenumbers."""

    half_length: float
    n_points: int
    dx: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False)
    wavenumbers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        L, n = self.half_length, self.n_points
        if L <= 0:
            raise GridError(f"half_length must be positive, got {L}")
        if not _is_power_of_two(n) or n < 8:
            raise GridError(f"n_points must be a power of two >= 8, got {n}")
        dx = 2.0 * L / n
        x = -L + dx * np.arange(n)
        k = np.fft.fftfreq(n, d=dx) * 2.0 * np.pi
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "wavenumbers", k)
        self.x.setflags(write=False)
        self.wavenumbers.setflags(write=False)

    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask: True on retained (low) modes."""
        k_max = np.abs(self.wavenumbers).max()
        return np.abs(self.wavenumbers) <= (2.0 / 3.0) * k_max


def make_grid(half_length: float, n_points: int) -> GridSpec:
    """Build a periodic grid; raises GridError on bad parameters."""
    return GridSpec(half_length, n_points)


@dataclass
class SpectralField:
    """Complex samples of a field on a grid (physical space)."""

    values: np.ndarray
    grid: GridSpec

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.n_points,):
            raise GridError(
                f"field length {self.values.shape} does not match grid "
                f"n_points {self.grid.n_points}"
            )


def spectral_derivative(f: SpectralField, order: int) -> SpectralField:
    """d^n f / dx^n by per-mode multiplication with (ik)^n."""
    if order < 1:
        raise ValueError(f"order must be a positive integer, got {order}")
    k = f.grid.wavenumbers
    fhat = np.fft.fft(f.values)
    dhat = (1j * k) ** order * fhat
    return SpectralField(np.fft.ifft(dhat), f.grid)


def helmholtz_symbol(grid: GridSpec, a: float) -> np.ndarray:
    """Fourier symbol 1 + a^2 k^2 of the operator 1 - a^2 d_xx."""
    if a < 0:
        raise ValueError(f"Helmholtz length a must be >= 0, got {a}")
    return 1.0 + a**2 * grid.wavenumbers**2


def helmholtz_apply(f: SpectralField, a: float) -> SpectralField:
    """(1 - a^2 d_xx) f."""
    sym = helmholtz_symbol(f.grid, a)
    return SpectralField(np.fft.ifft(sym * np.fft.fft(f.values)), f.grid)


def helmholtz_invert(f: SpectralField, a: float) -> SpectralField:
    """(1 - a^2 d_xx)^-1 f; always well posed since 1 + a^2 k^2 >= 1."""
    sym = helmholtz_symbol(f.grid, a)
    return SpectralField(np.fft.ifft(np.fft.fft(f.values) / sym), f.grid)
