"""Relative (thermostatic) equilibria of the thermostated radial system.

At fixed angular momentum p_theta = mu != 0, the reduced system has a
critical point (r*, p_r = 0, s = s0, S = 0) determined by

    T = r* v'(r*),      tau^2 = r*^3 v'(r*),      s0 = |mu| / tau.

Under the hypotheses v' > 0 and r v'' + v' > 0 the map r -> r v'(r) is
strictly increasing on J, so r* is unique and bracketing bisection followed
by Newton polishing is guaranteed to converge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import PhaseState, PotentialSpec, ThermostatSpec, equations_of_motion

__all__ = [
    "NoSolutionError",
    "EquilibriumPoint",
    "temperature_range",
    "solve_equilibrium",
    "lift_to_phase",
    "perturbed_start",
    "homogeneous_s0",
    "equilibrium_record",
]

_NEWTON_TOL = 1e-13


class NoSolutionError(ValueError):
    """Requested temperature lies outside the admissible range T(J)."""

    def __init__(self, T: float, trange: tuple[float, float]):
        # display rounding only: endpoint values below 1e-6 come from the
        # numerical safety margin on J and stand for the limit 0
        lo, hi = (0.0 if abs(b) < 1e-6 else b for b in trange)
        super().__init__(f"temperature T={T:g} outside admissible range ({lo:g}, {hi:g})")
        self.T = T
        self.temperature_range = trange


@dataclass(frozen=True)
class EquilibriumPoint:
    """Solved relative equilibrium (r*, tau, s0) at temperature T, momentum mu."""

    r_star: float
    tau: float
    s0: float
    mu: float
    T: float


def _temperature_of_r(pot: PotentialSpec, r: float) -> float:
    return r * pot.dv(r)


def temperature_range(pot: PotentialSpec) -> tuple[float, float]:
    """Image of r -> r v'(r) over the closure of J (monotone under H1/H2)."""
    lo, hi = pot.domain
    t_lo = _temperature_of_r(pot, lo) if lo > 0.0 else 0.0
    if math.isinf(hi):
        t_hi = math.inf
    else:
        t_hi = _temperature_of_r(pot, hi)
    return (t_lo, t_hi)


def solve_equilibrium(pot: PotentialSpec, T: float, mu: float) -> EquilibriumPoint:
    """Solve T = r v'(r) on J and assemble the equilibrium point.

    Parameters
    ----------
    pot : PotentialSpec
        Radial potential; H1/H2 must hold on its domain J.
    T : float
        Target temperature; must lie in the image T(J).
    mu : float
        Angular momentum p_theta; must be nonzero (the reduction requires it).

    Raises
    ------
    NoSolutionError
        If T lies outside T(J) (the computed range is attached).
    ValueError
        If mu == 0.
    """
    if mu == 0.0:
        raise ValueError("mu = 0 is rejected: the symplectic reduction needs p_theta != 0")
    if T <= 0.0:
        raise NoSolutionError(T, temperature_range(pot))

    lo, hi = pot.domain
    f = lambda r: _temperature_of_r(pot, r) - T

    # Auto-bracket on a geometric grid.  Under H1/H2 T(r) is increasing on J
    # and the first sign change is the only one; any sign change is accepted
    # so that hypothesis-violating domains still reach the Hessian check.
    grid_lo = max(lo, 1e-9)
    grid_hi = hi
    if math.isinf(grid_hi):
        grid_hi = max(10.0, 4.0 * grid_lo)
        while f(grid_hi) < 0.0 and grid_hi < 1e12:
            grid_hi *= 4.0
    grid = np.geomspace(grid_lo, grid_hi, 256)
    values = np.array([f(r) for r in grid])
    sign_change = np.nonzero(values[:-1] * values[1:] <= 0.0)[0]
    if len(sign_change) == 0:
        raise NoSolutionError(T, temperature_range(pot))
    a, b = float(grid[sign_change[0]]), float(grid[sign_change[0] + 1])

    # Bisection to a coarse interval, then Newton polish to |T - r v'| < 1e-13.
    fa = f(a)
    for _ in range(80):
        m = 0.5 * (a + b)
        fm = f(m)
        if fa * fm <= 0.0:
            b = m
        else:
            a, fa = m, fm
        if b - a < 1e-8 * max(1.0, abs(m)):
            break
    r = 0.5 * (a + b)
    for _ in range(60):
        res = f(r)
        if abs(res) < _NEWTON_TOL * max(1.0, T):
            break
        slope = pot.dv(r) + r * pot.d2v(r)
        step = res / slope
        r_new = r - step
        if not (a - (b - a) <= r_new <= b + (b - a)):  # Newton escaping the bracket
            r_new = 0.5 * (a + b)
        r = r_new

    tau = math.sqrt(r ** 3 * pot.dv(r))
    s0 = abs(mu) / tau
    return EquilibriumPoint(r_star=r, tau=tau, s0=s0, mu=mu, T=T)


def lift_to_phase(eq: EquilibriumPoint) -> PhaseState:
    """Embed the reduced equilibrium in the full phase space.

    The vector field at the lift has every component except theta' equal to
    zero (up to the solver residual).
    """
    return PhaseState(r=eq.r_star, p_r=0.0, theta=0.0, p_theta=eq.mu,
                      s=eq.s0, S=0.0)


def perturbed_start(eq: EquilibriumPoint, delta: float,
                    direction: str = "both") -> PhaseState:
    """Displace the lift by delta along the reduced coordinates.

    The reduced chart is (rho, u) with r = r*(1 + rho) and s = s0/(1 - u).
    ``direction`` selects "radial" (rho = delta), "thermostat" (u = delta) or
    "both" (equal weight rho = u = delta).  The energy of the perturbed state
    differs from the equilibrium energy at second order in delta.
    """
    if delta < 0.0:
        raise ValueError("delta must be non-negative")
    rho = delta if direction in ("both", "radial") else 0.0
    u = delta if direction in ("both", "thermostat") else 0.0
    if direction not in ("both", "radial", "thermostat"):
        raise ValueError(f"unknown direction {direction!r}")
    return PhaseState(r=eq.r_star * (1.0 + rho), p_r=0.0, theta=0.0,
                      p_theta=eq.mu, s=eq.s0 / (1.0 - u), S=0.0)


def homogeneous_s0(spec, actions, T: float) -> float:
    """Equilibrium rescaling s0(I) = (lambda G(I) / T)^(1/lambda).

    G(I) = sum I_i^lambda for the weighted-homogeneous family; s0 is
    homogeneous of degree 1 in the actions.
    """
    I = np.atleast_1d(np.asarray(actions, dtype=float))
    if np.any(I < 0.0):
        raise ValueError("actions must be non-negative")
    G = spec.G(I)
    if G <= 0.0:
        raise ValueError("G(I) must be positive")
    lam = spec.lam
    return (lam * G / T) ** (1.0 / lam)


def equilibrium_record(pot: PotentialSpec, eq: EquilibriumPoint) -> dict:
    """JSON-ready record with residual diagnostics.

    The stationarity residual uses the unit-mass constant controller; at
    S = 0 every order-2 controller produces the same value.
    """
    th = ThermostatSpec.nose(a=1.0, T=eq.T)
    field = equations_of_motion(pot, th, lift_to_phase(eq))
    nontheta = np.delete(field, 2)
    return {
        "potential": pot.kind,
        "metric": pot.metric,
        "T": eq.T,
        "mu": eq.mu,
        "r_star": eq.r_star,
        "tau": eq.tau,
        "s0": eq.s0,
        "residuals": {
            "temperature": abs(eq.T - eq.r_star * pot.dv(eq.r_star)),
            "stationarity": float(np.max(np.abs(nontheta))),
        },
    }
