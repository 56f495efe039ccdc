"""The CH-NLS model: parameters, linear dispersion, soliton classification,
and the split right-hand side of the rotated-frame evolution equation.

The evolution is written for psi, the field with the background phase removed,
so the uniform state psi == 1 is a fixed point.  The linear generator is the
diagonal Fourier symbol -i k^2 / (1 + a^2 k^2); everything else, including the
background coupling, sits in the nonlinear term.  Note the symbol is bounded
for a > 0 (|symbol| -> 1/a^2 as k -> inf), so the stepper is not
stiffness-limited the way plain NLS is.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .grid import GridSpec, SpectralField, helmholtz_symbol


class RegimeError(ValueError):
    """Operation requested outside its supported (sigma, p) regime."""


class SingularParameterError(ValueError):
    """q is undefined at p = a^2 C^2 = 2."""


class SolitonClass(Enum):
    DARK = "dark"
    ANTIDARK = "antidark"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of one run: Helmholtz length a, nonlinearity sign
    sigma, and cw background amplitude u0 (taken real positive; its phase is
    absorbed into psi)."""

    a: float
    sigma: int
    u0: float

    def __post_init__(self):
        if self.sigma not in (-1, 1):
            raise ValueError(f"sigma must be -1 or +1, got {self.sigma}")
        if self.u0 <= 0:
            raise ValueError(f"u0 must be positive, got {self.u0}")
        if self.a < 0:
            raise ValueError(f"a must be >= 0, got {self.a}")

    @property
    def sound_speed(self) -> float:
        """Right-going speed of sound C = 2*u0 (left-going is -C)."""
        return 2.0 * self.u0

    @property
    def p(self) -> float:
        """p = a^2 C^2, the quantity whose range decides dark vs antidark."""
        return self.a**2 * self.sound_speed**2

    @property
    def q(self) -> float:
        return q_parameter(self.a, self.sound_speed)


def sound_speed(params: ModelParams) -> float:
    return params.sound_speed


def q_parameter(a_eff: float, C: float) -> float:
    """q = (1 - 2 a^2 C^2) / (2 - a^2 C^2); singular at p = a^2 C^2 = 2."""
    p = a_eff**2 * C**2
    if abs(p - 2.0) < 1e-14:
        raise SingularParameterError(f"q undefined at p = a^2 C^2 = 2 (a={a_eff}, C={C})")
    return (1.0 - 2.0 * p) / (2.0 - p)


def classify_soliton(params: ModelParams) -> SolitonClass:
    """Antidark for 1/2 < p < 2 (q < 0), dark otherwise; degenerate at the
    boundaries.  Defocusing only."""
    if params.sigma != -1:
        raise RegimeError("soliton classification requires defocusing sigma = -1")
    p = params.p
    if abs(p - 0.5) < 1e-12 or abs(p - 2.0) < 1e-12:
        return SolitonClass.DEGENERATE
    if 0.5 < p < 2.0:
        return SolitonClass.ANTIDARK
    return SolitonClass.DARK


def dispersion_omega_squared(params: ModelParams, k) -> float:
    """omega^2(k) = k^2 (-4 sigma |u0|^2 + k^2) / (1 + a^2 k^2)^2.

    Negative values (focusing, k^2 < 4 u0^2) signal modulational instability.
    """
    k = np.asarray(k, dtype=float)
    num = k**2 * (-4.0 * params.sigma * params.u0**2 + k**2)
    den = (1.0 + params.a**2 * k**2) ** 2
    out = num / den
    return out.item() if out.ndim == 0 else out


def mi_growth_rate(params: ModelParams, k) -> float:
    """Exponential growth rate sqrt(max(0, -omega^2)); zero for stable modes."""
    w2 = np.asarray(dispersion_omega_squared(params, k))
    rate = np.sqrt(np.maximum(0.0, -w2))
    return rate.item() if rate.ndim == 0 else rate


def linear_symbol(params: ModelParams, k) -> complex:
    """Per-mode linear generator -i k^2 / (1 + a^2 k^2) of the rotated flow."""
    k = np.asarray(k, dtype=float)
    sym = np.asarray(-1j * k**2 / (1.0 + params.a**2 * k**2))
    return sym.item() if sym.ndim == 0 else sym


def nonlinear_term_spectral(
    psi_hat: np.ndarray, grid: GridSpec, params: ModelParams, dealias: bool = True
) -> np.ndarray:
    """Fourier transform of the nonlinear term of the rotated equation.

    N_hat = [2i sigma u0^2 / (1 + a^2 k^2)] * F[(psi - a^2 psi_xx)
            * (|psi|^2 - a^2 |psi_x|^2 - 1)], optionally 2/3-rule dealiased.
    """
    k = grid.wavenumbers
    helm = helmholtz_symbol(grid, params.a)
    psi = np.fft.ifft(psi_hat)
    psi_x = np.fft.ifft(1j * k * psi_hat)
    m = np.fft.ifft(helm * psi_hat)
    local = np.abs(psi) ** 2 - params.a**2 * np.abs(psi_x) ** 2 - 1.0
    n_hat = (2j * params.sigma * params.u0**2 / helm) * np.fft.fft(m * local)
    if dealias:
        n_hat = np.where(grid.dealias_mask(), n_hat, 0.0)
    return n_hat


def make_nonlinear_hat(grid: GridSpec, params: ModelParams, dealias: bool = True):
    """Precomputed-closure version of nonlinear_term_spectral for the stepper.

    Hoists the Helmholtz symbol, ik table, dealias mask, and the constant
    prefactor out of the per-step path.
    """
    ik = 1j * grid.wavenumbers
    helm = helmholtz_symbol(grid, params.a)
    prefactor = (2j * params.sigma * params.u0**2) / helm
    if dealias:
        prefactor = prefactor * grid.dealias_mask()
    a2 = params.a**2
    fft, ifft = np.fft.fft, np.fft.ifft

    def nl(psi_hat: np.ndarray) -> np.ndarray:
        psi = ifft(psi_hat)
        psi_x = ifft(ik * psi_hat)
        m = ifft(helm * psi_hat)
        local = psi.real**2 + psi.imag**2 - a2 * (psi_x.real**2 + psi_x.imag**2) - 1.0
        return prefactor * fft(m * local)

    return nl


def nonlinear_term(psi: SpectralField, params: ModelParams, dealias: bool = True) -> SpectralField:
    """Physical-space nonlinear term; psi_hat_t = symbol*psi_hat + F[this]."""
    n_hat = nonlinear_term_spectral(np.fft.fft(psi.values), psi.grid, params, dealias)
    return SpectralField(np.fft.ifft(n_hat), psi.grid)


def q_functional(psi: SpectralField, params: ModelParams) -> float:
    """Diagnostic integral (|psi|^2 + a^2 |psi_x|^2) dx over the domain.

    Not claimed to be an exact invariant of CH-NLS; its drift across a run is
    used as a scheme-accuracy diagnostic.
    """
    k = psi.grid.wavenumbers
    psi_hat = np.fft.fft(psi.values)
    psi_x = np.fft.ifft(1j * k * psi_hat)
    density = np.abs(psi.values) ** 2 + params.a**2 * np.abs(psi_x) ** 2
    return float(np.sum(density) * psi.grid.dx)
