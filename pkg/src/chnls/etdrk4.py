"""ETDRK4 time stepping for a diagonal linear symbol plus a nonlinear term.

Scheme of Cox & Matthews with the quadrature-weight evaluation of Kassam &
Trefethen: each phi-function combination is averaged over a complex circle
centred at h*lambda_j, which removes the catastrophic cancellation near
lambda = 0.  The stepper works on Fourier coefficients; the nonlinear callback
maps coefficients to coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .grid import GridSpec, SpectralField


class DivergenceError(RuntimeError):
    """Non-finite values appeared during time stepping."""

    def __init__(self, t: float, trajectory: "Trajectory | None" = None):
        super().__init__(f"non-finite field detected at t = {t:g}")
        self.t = t
        self.trajectory = trajectory


@dataclass(frozen=True)
class EtdCoefficients:
    """Precomputed per-mode ETDRK4 tables for one (symbol, dt) pair.

    w2 multiplies the sum of the two midpoint nonlinear evaluations, so the
    zero-mode limits recover the classical RK4 weights h/6, h/3, h/6.
    """

    e_full: np.ndarray
    e_half: np.ndarray
    q: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    w3: np.ndarray
    dt: float


def precompute_coefficients(
    symbol: np.ndarray, dt: float, contour_points: int = 32, contour_radius: float = 1.0
) -> EtdCoefficients:
    """Evaluate the ETDRK4 weights by contour averaging around h*lambda."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if contour_points < 16:
        raise ValueError(f"contour_points must be >= 16, got {contour_points}")
    z = dt * np.asarray(symbol, dtype=complex)
    m = contour_points
    r = contour_radius * np.exp(2j * np.pi * (np.arange(m) + 0.5) / m)
    lr = z[:, None] + r[None, :]
    elr = np.exp(lr)
    q = dt * np.mean((np.exp(lr / 2.0) - 1.0) / lr, axis=1)
    w1 = dt * np.mean((-4.0 - lr + elr * (4.0 - 3.0 * lr + lr**2)) / lr**3, axis=1)
    w2 = 2.0 * dt * np.mean((2.0 + lr + elr * (lr - 2.0)) / lr**3, axis=1)
    w3 = dt * np.mean((-4.0 - 3.0 * lr - lr**2 + elr * (4.0 - lr)) / lr**3, axis=1)
    coeffs = EtdCoefficients(
        e_full=np.exp(z), e_half=np.exp(z / 2.0), q=q, w1=w1, w2=w2, w3=w3, dt=dt
    )
    for arr in (coeffs.e_full, coeffs.e_half, coeffs.q, coeffs.w1, coeffs.w2, coeffs.w3):
        if not np.all(np.isfinite(arr)):
            raise FloatingPointError("non-finite ETDRK4 coefficient")
    return coeffs


NonlinearHat = Callable[[np.ndarray], np.ndarray]


def step_hat(v: np.ndarray, coeffs: EtdCoefficients, nonlinear_hat: NonlinearHat) -> np.ndarray:
    """One ETDRK4 update of the Fourier coefficient vector v."""
    n0 = nonlinear_hat(v)
    a = coeffs.e_half * v + coeffs.q * n0
    na = nonlinear_hat(a)
    b = coeffs.e_half * v + coeffs.q * na
    nb = nonlinear_hat(b)
    c = coeffs.e_half * a + coeffs.q * (2.0 * nb - n0)
    nc = nonlinear_hat(c)
    return coeffs.e_full * v + coeffs.w1 * n0 + coeffs.w2 * (na + nb) + coeffs.w3 * nc


@dataclass
class FieldState:
    """Physical-space field samples at one instant."""

    psi: np.ndarray
    grid: GridSpec
    t: float

    def as_field(self) -> SpectralField:
        return SpectralField(self.psi, self.grid)


def step(state: FieldState, coeffs: EtdCoefficients, nonlinear_hat: NonlinearHat) -> FieldState:
    """Advance a physical-space state by one dt."""
    v = step_hat(np.fft.fft(state.psi), coeffs, nonlinear_hat)
    if not np.all(np.isfinite(v)):
        raise DivergenceError(state.t + coeffs.dt)
    return FieldState(np.fft.ifft(v), state.grid, state.t + coeffs.dt)


@dataclass
class Trajectory:
    """Snapshots of an evolution at a fixed cadence."""

    times: list[float] = field(default_factory=list)
    snapshots: list[np.ndarray] = field(default_factory=list)
    grid: GridSpec | None = None

    def append(self, t: float, psi: np.ndarray):
        if self.times and t <= self.times[-1]:
            raise ValueError("snapshot times must be strictly increasing")
        self.times.append(t)
        self.snapshots.append(psi)


Observer = Callable[[FieldState], None]


def evolve(
    initial: FieldState,
    t_end: float,
    dt: float,
    cadence: float,
    symbol: np.ndarray,
    nonlinear_hat: NonlinearHat,
    observers: Sequence[Observer] = (),
    contour_points: int = 32,
) -> Trajectory:
    """Step from initial.t to t_end, recording a snapshot every cadence.

    Observers fire at snapshot times (including t = initial.t).  On divergence
    the partial trajectory is attached to the raised DivergenceError.
    """
    if t_end < initial.t:
        raise ValueError("t_end must be >= initial time")
    steps_per_snap = int(round(cadence / dt))
    if steps_per_snap < 1 or abs(cadence - steps_per_snap * dt) > 1e-9:
        raise ValueError(f"cadence {cadence} is not an integer multiple of dt {dt}")
    n_snaps = int(round((t_end - initial.t) / cadence))
    if abs((t_end - initial.t) - n_snaps * cadence) > 1e-9:
        raise ValueError(f"t_end - t0 is not an integer multiple of cadence {cadence}")

    traj = Trajectory(grid=initial.grid)
    state = FieldState(np.asarray(initial.psi, dtype=complex), initial.grid, initial.t)
    traj.append(state.t, state.psi.copy())
    for obs in observers:
        obs(state)

    coeffs = precompute_coefficients(symbol, dt, contour_points)
    v = np.fft.fft(state.psi)
    for i_snap in range(n_snaps):
        for _ in range(steps_per_snap):
            v = step_hat(v, coeffs, nonlinear_hat)
        t = initial.t + (i_snap + 1) * cadence
        if not np.all(np.isfinite(v)):
            raise DivergenceError(t, traj)
        psi = np.fft.ifft(v)
        state = FieldState(psi, initial.grid, t)
        traj.append(t, psi)
        for obs in observers:
            obs(state)
    return traj
