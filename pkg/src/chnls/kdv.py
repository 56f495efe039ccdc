"""KdV side of the reduction chain: standard-form solver, analytic soliton,
scale maps back to CH-NLS density perturbations, and a Boussinesq residual
checker.

Standard form: U_That - 6 U U_chi + U_chichichi = 0.  The left-going member of
the KdV pair is the same equation under (chi, C) -> (-chi, -C), which the
signed sound speed in ReductionScales implements; it is never coded separately.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .etdrk4 import FieldState, Trajectory, evolve
from .grid import GridSpec
from .model import ModelParams, q_parameter


@dataclass(frozen=True)
class ReductionScales:
    """Maps between physical (x, t) and KdV (chi, That) variables.

    chi  = sqrt(eps) (x - C t)
    Tcal = eps^{3/2} t
    That = ((1 - 2 a^2 C^2) / (2C)) Tcal
    rho1 = (2 q / C^2) U,   |psi| = 1 + eps * rho1,   density = (1 + eps*rho1)^2
    """

    epsilon: float
    a: float
    c: float

    @property
    def q(self) -> float:
        return q_parameter(self.a, self.c)

    @property
    def that_per_tcal(self) -> float:
        return (1.0 - 2.0 * self.a**2 * self.c**2) / (2.0 * self.c)

    def chi_of(self, x, t: float):
        return np.sqrt(self.epsilon) * (np.asarray(x) - self.c * t)

    def t_hat_of(self, t_physical: float) -> float:
        return self.that_per_tcal * self.epsilon**1.5 * t_physical


def time_rescale(t_physical: float, scales: ReductionScales) -> float:
    """Physical time to KdV time That."""
    return scales.t_hat_of(t_physical)


def kdv_soliton(beta: float, chi0: float, chi: np.ndarray, t_hat: float) -> np.ndarray:
    """U = -(beta/2) sech^2[(sqrt(beta)/2)(chi - beta*That + chi0)]."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    arg = 0.5 * np.sqrt(beta) * (np.asarray(chi) - beta * t_hat + chi0)
    return -(beta / 2.0) / np.cosh(arg) ** 2


def kdv_to_density(U: np.ndarray, scales: ReductionScales) -> np.ndarray:
    """rho1 samples: the field magnitude is 1 + eps*rho1, so the full density
    (magnitude squared) is (1 + eps*rho1)^2 = 1 + 2 eps rho1 + O(eps^2)."""
    return (2.0 * scales.q / scales.c**2) * np.asarray(U)


@dataclass
class KdvState:
    """Real field on a periodic chi-grid at KdV time That."""

    u_values: np.ndarray
    grid: GridSpec
    t_hat: float


def kdv_nonlinear_hat(grid: GridSpec, dealias: bool = True):
    """Spectral nonlinear term 3 d_chi(U^2) (the -6UU_chi term moved right)."""
    ik = 1j * grid.wavenumbers
    mask = grid.dealias_mask()

    def nl(u_hat: np.ndarray) -> np.ndarray:
        u = np.fft.ifft(u_hat)
        n_hat = 3.0 * ik * np.fft.fft(u * u)
        if dealias:
            n_hat = np.where(mask, n_hat, 0.0)
        return n_hat

    return nl


def kdv_linear_symbol(grid: GridSpec) -> np.ndarray:
    """Symbol of -U_chichichi moved to the right-hand side: +i k^3."""
    return 1j * grid.wavenumbers**3


def kdv_evolve(
    initial: KdvState, t_end: float, dt: float, cadence: float, dealias: bool = True
) -> Trajectory:
    """Evolve the standard-form KdV with the shared ETDRK4 stepper."""
    state = FieldState(initial.u_values.astype(complex), initial.grid, initial.t_hat)
    return evolve(
        state,
        t_end,
        dt,
        cadence,
        symbol=kdv_linear_symbol(initial.grid),
        nonlinear_hat=kdv_nonlinear_hat(initial.grid, dealias),
    )


def phi_from_kdv_soliton(
    beta: float, chi0: float, scales: ReductionScales, X: np.ndarray, T: np.ndarray
) -> np.ndarray:
    """Velocity potential of the right-going KdV soliton on a (T, X) grid.

    Phi_chi = C rho1 = (2q/C) U integrates to -(2 q sqrt(beta)/C) tanh(arg).
    """
    c, q = scales.c, scales.q
    Tg, Xg = np.meshgrid(T, X, indexing="ij")
    chi = Xg - c * Tg
    t_hat = scales.that_per_tcal * scales.epsilon * Tg
    arg = 0.5 * np.sqrt(beta) * (chi - beta * t_hat + chi0)
    return -(2.0 * q * np.sqrt(beta) / c) * np.tanh(arg)


def boussinesq_residual(
    phi: np.ndarray,
    dx: float,
    dt: float,
    epsilon: float,
    params: ModelParams,
    feature_width: float | None = None,
) -> float:
    """Discrete L2 norm of the Boussinesq-form residual of Phi(T, X).

    Residual operator:
      Phi_TT - C^2 Phi_XX
      + eps * [2 a^2 Phi_XXTT - 4 Phi_X Phi_XT (1 - 3 a^2 u0^2)
               - 2 Phi_T Phi_XX - Phi_XXXX]
    evaluated with 2nd-order centred differences on the interior.  phi is
    indexed [t, x] on a uniform grid.
    """
    if feature_width is not None and feature_width / dx < 9:
        raise ValueError(
            f"grid too coarse: {feature_width / dx:.1f} points per soliton width (< 9)"
        )
    a, C, u0 = params.a, params.sound_speed, params.u0
    phi = np.asarray(phi, dtype=float)

    def d_x(f):
        out = np.full_like(f, np.nan)
        out[:, 1:-1] = (f[:, 2:] - f[:, :-2]) / (2 * dx)
        return out

    def d_xx(f):
        out = np.full_like(f, np.nan)
        out[:, 1:-1] = (f[:, 2:] - 2 * f[:, 1:-1] + f[:, :-2]) / dx**2
        return out

    def d_t(f):
        out = np.full_like(f, np.nan)
        out[1:-1, :] = (f[2:, :] - f[:-2, :]) / (2 * dt)
        return out

    def d_tt(f):
        out = np.full_like(f, np.nan)
        out[1:-1, :] = (f[2:, :] - 2 * f[1:-1, :] + f[:-2, :]) / dt**2
        return out

    def d_xxxx(f):
        out = np.full_like(f, np.nan)
        out[:, 2:-2] = (
            f[:, 4:] - 4 * f[:, 3:-1] + 6 * f[:, 2:-2] - 4 * f[:, 1:-3] + f[:, :-4]
        ) / dx**4
        return out

    phi_t = d_t(phi)
    phi_x = d_x(phi)
    phi_tt = d_tt(phi)
    phi_xx = d_xx(phi)
    phi_xt = d_t(phi_x)
    phi_xxtt = d_tt(d_xx(phi))
    phi_xxxx = d_xxxx(phi)

    res = (
        phi_tt
        - C**2 * phi_xx
        + epsilon
        * (
            2 * a**2 * phi_xxtt
            - 4 * phi_x * phi_xt * (1.0 - 3.0 * a**2 * u0**2)
            - 2 * phi_t * phi_xx
            - phi_xxxx
        )
    )
    interior = res[2:-2, 2:-2]
    return float(np.sqrt(np.sum(interior**2) * dx * dt))
