"""Numerical cross-check of approximate conservation.

Integrates a perturbed evolution equation pseudo-spectrally (FFT derivatives,
classical RK4 in time, periodic domain) with eps substituted by a concrete
number, then monitors functional values along the trajectory.  Approximate
conservation shows up as functional drift that shrinks with eps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import Diverged, Unsupported
from .jets import DiffPoly, EvolutionSystem, Functional

MAX_RHS_JET_ORDER = 6
MAX_DENSITY_JET_ORDER = 4


@dataclass
class GridSpec:
    """Periodic spatial grid and time-stepping parameters."""

    length: float = 40.0
    points: int = 256
    dt: float = 1e-4
    t_end: float = 1.0
    epsilon: float = 0.0

    def __post_init__(self):
        if self.points < 16 or self.points & (self.points - 1):
            raise ValueError("points must be a power of two, at least 16")
        if self.dt <= 0 or self.length <= 0 or self.t_end <= 0:
            raise ValueError("length, dt and t_end must be positive")

    @property
    def dx(self) -> float:
        return self.length / self.points

    def x_grid(self) -> np.ndarray:
        return np.arange(self.points) * self.dx

    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.points, d=self.dx)


@dataclass
class Trajectory:
    times: np.ndarray   # (nsave,)
    profiles: np.ndarray  # (nsave, points)
    grid: GridSpec


def _compile_terms(poly: DiffPoly, eps_value: float):
    """Flatten a differential polynomial into evaluatable terms."""
    terms = []
    for mon, coeff in poly.terms.items():
        value = 0.0
        for i, c in enumerate(coeff.coeffs):
            value += float(c) * eps_value ** i
        if value == 0.0:
            continue
        jets = []
        for (comp, order), e in mon.jets:
            if comp != 0:
                raise Unsupported("numeric evaluation is scalar in u")
            jets.append((order, e))
        terms.append((value, mon.x, mon.t, tuple(jets)))
    return terms


def _max_order(poly: DiffPoly) -> int:
    return max(poly.max_jet_order(), 0)


def _derivatives(u: np.ndarray, k: np.ndarray, max_order: int):
    """Spectral x-derivatives 0..max_order of a periodic sample."""
    derivs = [u]
    if max_order == 0:
        return derivs
    u_hat = np.fft.fft(u)
    n = u.size
    for m in range(1, max_order + 1):
        factor = (1j * k) ** m
        d_hat = factor * u_hat
        if m % 2 == 1:
            d_hat[n // 2] = 0.0  # keep odd derivatives real and skew
        derivs.append(np.fft.ifft(d_hat).real)
    return derivs


def _evaluate_terms(terms, derivs, x: np.ndarray, t: float) -> np.ndarray:
    total = np.zeros_like(x)
    for value, x_exp, t_exp, jets in terms:
        acc = np.full_like(x, value)
        if x_exp:
            acc = acc * x ** x_exp
        if t_exp:
            acc = acc * t ** t_exp
        for order, e in jets:
            acc = acc * derivs[order] ** e
        total = total + acc
    return total


def integrate_pde(sys: EvolutionSystem, grid: GridSpec, ic: np.ndarray,
                  save_every: Optional[int] = None) -> Trajectory:
    """March u_t = K[u, eps] with RK4 and spectral space derivatives.

    Raises Diverged (with the offending step) as soon as a non-finite value
    appears, which is how CFL violations surface.
    """
    rhs_poly = sys.rhs[0]
    order = _max_order(rhs_poly)
    if order > MAX_RHS_JET_ORDER:
        raise Unsupported(f"right-hand side jet order {order} exceeds "
                          f"{MAX_RHS_JET_ORDER}")
    ic = np.asarray(ic, dtype=float)
    if ic.shape != (grid.points,):
        raise ValueError("initial profile length must match the grid")
    terms = _compile_terms(rhs_poly, grid.epsilon)
    x = grid.x_grid()
    k = grid.wavenumbers()
    nsteps = int(round(grid.t_end / grid.dt))
    if save_every is None:
        save_every = max(1, nsteps // 200)

    def rhs(u, t):
        derivs = _derivatives(u, k, order)
        return _evaluate_terms(terms, derivs, x, t)

    u = ic.copy()
    times = [0.0]
    profiles = [u.copy()]
    t = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, nsteps + 1):
            dt = grid.dt
            k1 = rhs(u, t)
            k2 = rhs(u + 0.5 * dt * k1, t + 0.5 * dt)
            k3 = rhs(u + 0.5 * dt * k2, t + 0.5 * dt)
            k4 = rhs(u + dt * k3, t + dt)
            u = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t = step * grid.dt
            if not np.all(np.isfinite(u)):
                raise Diverged(f"non-finite value at step {step} (t={t:.6g})", step)
            if step % save_every == 0 or step == nsteps:
                times.append(t)
                profiles.append(u.copy())
    return Trajectory(np.array(times), np.array(profiles), grid)


def monitor_functional(traj: Trajectory, T: Functional,
                       eps_value: Optional[float] = None) -> List[dict]:
    """Evaluate int T dx along the trajectory; rows {t, value, drift}.

    Drift is relative to the initial value with a unit floor, so exactly
    conserved functionals report at the discretization noise level.
    """
    density = T.density
    order = _max_order(density)
    if order > MAX_DENSITY_JET_ORDER:
        raise Unsupported(f"density jet order {order} exceeds "
                          f"{MAX_DENSITY_JET_ORDER}")
    if eps_value is None:
        eps_value = traj.grid.epsilon
    terms = _compile_terms(density, eps_value)
    x = traj.grid.x_grid()
    k = traj.grid.wavenumbers()
    dx = traj.grid.dx
    rows = []
    initial = None
    for t, u in zip(traj.times, traj.profiles):
        derivs = _derivatives(u, k, order)
        value = float(np.sum(_evaluate_terms(terms, derivs, x, float(t)))) * dx
        if initial is None:
            initial = value
        drift = abs(value - initial) / max(1.0, abs(initial))
        rows.append({"t": float(t), "value": value, "drift": drift})
    return rows


def max_drift(rows: List[dict]) -> float:
    return max(row["drift"] for row in rows)


def sech_squared_profile(grid: GridSpec, amplitude: float = 2.0,
                         width: float = 1.0,
                         center: Optional[float] = None) -> np.ndarray:
    """A KdV-type solitary pulse, the default numeric initial condition."""
    if center is None:
        center = grid.length / 2.0
    x = grid.x_grid()
    return amplitude / np.cosh((x - center) / width) ** 2
