"""Normal modes of the reduced equilibrium and closed-form frequency predictions.

The linearized Hamiltonian vector field at the reduced critical point, in the
chart (rho, u, p_rho, U), is X' = A_mat X with

            [ 0   0   A   B ]
    A_mat = [ 0   0   B   E ]
            [-C   0   0   0 ]
            [ 0  -D   0   0 ]

whose characteristic polynomial is x^4 + (DE + AC) x^2 + CD (AE - B^2).  With
a positive-definite reduced Hessian all four eigenvalues are purely imaginary,
+-i omega_1, +-i omega_2, and eta = omega_1/omega_2 <= 1 is the frequency
ratio of the thermostat-dominated and internal modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .equilibria import EquilibriumPoint, solve_equilibrium
from .model import HomogeneousSpec, PotentialSpec, ThermostatSpec

__all__ = [
    "HessianIndefiniteError",
    "LinearModel",
    "SweepPoint",
    "linearize",
    "assemble_linearized_matrix",
    "eta_of_mu",
    "eta_of_T",
    "nose_frequency_approx",
    "paper_thermostat_frequency",
    "homogeneous_internal_frequency",
    "homogeneous_G22",
]


class HessianIndefiniteError(ArithmeticError):
    """The biquadratic has a non-positive or complex root (no elliptic modes)."""


@dataclass(frozen=True)
class LinearModel:
    """Linearization coefficients and the resulting normal-mode frequencies."""

    A: float
    B: float
    C: float
    D: float
    E: float
    omega1: float
    omega2: float
    eta: float
    hessian_posdef: bool
    degenerate: bool  # omega1 == omega2 within roundoff (eta = 1 resonance)


def _solve_biquadratic(p: float, q: float) -> tuple[float, float, bool]:
    """Positive roots (omega1^2 <= omega2^2) of y^2 - p y + q with y = omega^2.

    Here p = DE + AC and q = CD(AE - B^2); the characteristic polynomial in
    x = i omega reads omega^4 - p omega^2 + q = 0.  Uses the sign-matched
    quadratic root to avoid cancellation.
    """
    disc = p * p - 4.0 * q
    if q <= 0.0 or p <= 0.0 or disc < 0.0:
        raise HessianIndefiniteError(
            f"no pair of elliptic modes: p={p:.6g}, q={q:.6g}, disc={disc:.6g}")
    sqrt_disc = math.sqrt(disc)
    y_big = 0.5 * (p + sqrt_disc)
    y_small = q / y_big
    degenerate = disc <= 1e-12 * p * p
    return y_small, y_big, degenerate


def linearize(pot: PotentialSpec, th: ThermostatSpec,
              eq: EquilibriumPoint) -> LinearModel:
    """Linearize the reduced thermostated system at the equilibrium.

    With r = r*, W = r v'' + 3 v' and Omega_2 evaluated at s0:

        C = r W
        D = 2 r v' (W - 2 v') / W
        A = (c(r)/(r s0))^2 + 4 a Omega_2 v'^2 / (s0^2 W^2)
        B = -2 a Omega_2 v' / (s0^2 W)
        E = a Omega_2 / s0^2

    Raises :class:`HessianIndefiniteError` when the biquadratic for omega^2
    has a non-positive or complex root (H1/H2 violated at r*, or a <= 0).
    """
    r, s0 = eq.r_star, eq.s0
    a = th.coupling_a
    v1 = pot.dv(r)
    W = r * pot.d2v(r) + 3.0 * v1
    om2 = th.omega2(s0)
    c = pot.c(r)

    C = r * W
    D = 2.0 * r * v1 * (W - 2.0 * v1) / W
    A = (c / (r * s0)) ** 2 + 4.0 * a * om2 * v1 * v1 / (s0 * s0 * W * W)
    B = -2.0 * a * om2 * v1 / (s0 * s0 * W)
    E = a * om2 / (s0 * s0)

    p = D * E + A * C
    q = C * D * (A * E - B * B)
    y1, y2, degenerate = _solve_biquadratic(p, q)
    omega1, omega2 = math.sqrt(y1), math.sqrt(y2)
    return LinearModel(A=A, B=B, C=C, D=D, E=E, omega1=omega1, omega2=omega2,
                       eta=omega1 / omega2, hessian_posdef=True,
                       degenerate=degenerate)


def assemble_linearized_matrix(model: LinearModel) -> np.ndarray:
    """The explicit 4x4 vector-field matrix in the (rho, u, p_rho, U) chart."""
    A, B, C, D, E = model.A, model.B, model.C, model.D, model.E
    return np.array([
        [0.0, 0.0, A, B],
        [0.0, 0.0, B, E],
        [-C, 0.0, 0.0, 0.0],
        [0.0, -D, 0.0, 0.0],
    ])


@dataclass(frozen=True)
class SweepPoint:
    """One grid point of a frequency-ratio sweep; error text instead of a model on failure."""

    x: float
    model: LinearModel | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.model is not None


def _sweep(pot, th, xs, make_args) -> list[SweepPoint]:
    points = []
    for x in xs:
        try:
            T, mu, a = make_args(x)
            th_x = replace(th, coupling_a=a, temperature_T=T)
            eq = solve_equilibrium(pot, T, mu)
            points.append(SweepPoint(x=float(x), model=linearize(pot, th_x, eq)))
        except Exception as exc:  # per-point failures are data, not fatal
            points.append(SweepPoint(x=float(x), model=None,
                                     error=f"{type(exc).__name__}: {exc}"))
    return points


def eta_of_mu(pot: PotentialSpec, th: ThermostatSpec, T: float,
              mus, a: float) -> list[SweepPoint]:
    """Frequency data over an angular-momentum grid at fixed (T, a)."""
    return _sweep(pot, th, mus, lambda mu: (T, mu, a))


def eta_of_T(pot: PotentialSpec, th: ThermostatSpec, Ts,
             mu: float, a: float) -> list[SweepPoint]:
    """Frequency data over a temperature grid at fixed (mu, a)."""
    return _sweep(pot, th, Ts, lambda T: (T, mu, a))


def eta_of_a(pot: PotentialSpec, th: ThermostatSpec, a_values,
             T: float, mu: float) -> list[SweepPoint]:
    """Frequency data over a coupling grid at fixed (T, mu)."""
    return _sweep(pot, th, a_values, lambda a: (T, mu, a))


def nose_frequency_approx(n: int, T: float, s0: float, a: float) -> float:
    """Heuristic thermostat frequency sqrt(a) * sqrt(2 n T / ((n+1) s0^2)).

    Exact only when the action Hamiltonian is homogeneous of degree
    2 - 2/(n+1); for n = 1 that is the harmonic case.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    return math.sqrt(a) * math.sqrt(2.0 * n * T / ((n + 1) * s0 * s0))


def paper_thermostat_frequency(G22: float, s0: float, T: float,
                               Omega2_at_s0: float, a: float) -> float:
    """Normal-oscillation frequency sqrt(a) sqrt(Omega_2(s0) (G22 + s0^2 T)) / s0^2.

    G22 is the second action derivative of the rescaled action Hamiltonian
    along the equilibrium set; for the weighted-homogeneous family it equals
    (lambda - 1) T s0^2 (see :func:`homogeneous_G22`).
    """
    if G22 + s0 * s0 * T <= 0.0:
        raise ValueError("G22 + s0^2 T must be positive")
    return math.sqrt(a) * math.sqrt(Omega2_at_s0 * (G22 + s0 * s0 * T)) / (s0 * s0)


def homogeneous_G22(spec: HomogeneousSpec, T: float, s0: float = 1.0) -> float:
    """Closed form G22 = (lambda - 1) T s0^2 for the homogeneous family."""
    return (spec.lam - 1.0) * T * s0 * s0


def homogeneous_internal_frequency(spec: HomogeneousSpec, T: float) -> float:
    """Internal frequency dG/dI at the equilibrium energy G = T/lambda.

    The action there is I = (T/lambda)^(1/lambda), so the frequency is
    lambda * I^(lambda - 1).
    """
    if spec.n != 1:
        raise ValueError("internal frequency is defined for n = 1")
    lam = spec.lam
    I = (T / lam) ** (1.0 / lam)
    return lam * I ** (lam - 1.0)
