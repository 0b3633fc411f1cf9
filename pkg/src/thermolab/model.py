"""Potentials, thermostats and the thermostated Hamiltonian.

The physical system is a rotationally invariant mechanical Hamiltonian on a
surface of revolution, written in symplectic polar coordinates,

    H_phys = (1/2) * ((c(r) p_r)**2 + (p_theta / r)**2) + v(r),

coupled to a single auxiliary degree of freedom (s, S) through momentum
rescaling p -> p/s.  The full Hamiltonian is

    H = (1/2) * ((c(r) p_r)**2 + (p_theta / r)**2) / s**2 + v(r)
        + F(s, a*S)/a + T*log(s),

where F is an order-2 controller (F(s, 0) = F_S(s, 0) = 0, F_SS(s, 0) =
Omega_2(s) > 0), a = 1/Q is the reciprocal thermostat mass and T the target
temperature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.integrate import quad
from scipy.special import betaln

__all__ = [
    "DomainError",
    "HypothesisError",
    "QuadratureError",
    "PotentialSpec",
    "ThermostatSpec",
    "PhaseState",
    "HomogeneousSpec",
    "hamiltonian_energy",
    "equations_of_motion",
    "instantaneous_temperature",
    "homogeneous_normalization",
    "homogeneous_action_check",
    "homogeneous_hamiltonian_energy",
    "homogeneous_instantaneous_temperature",
    "check_hypotheses",
    "hypotheses_hold",
]


class DomainError(ValueError):
    """State outside the admissible domain (r not in J, or s <= 0)."""


class HypothesisError(ValueError):
    """The monotonicity hypotheses v' > 0 / r v'' + v' > 0 fail on J."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual estimate {residual:.3e})")
        self.residual = residual


# ---------------------------------------------------------------------------
# Potentials
# ---------------------------------------------------------------------------

def _laurent_eval(coeffs: Mapping[int, float], r: float, order: int) -> float:
    """Evaluate the `order`-th derivative of sum(c_k r^k) at r."""
    total = 0.0
    for k, ck in coeffs.items():
        fac = 1.0
        for j in range(order):
            fac *= k - j
        if fac != 0.0:
            total += ck * fac * r ** (k - order)
    return total


@dataclass(frozen=True)
class PotentialSpec:
    """A 1-D radial potential v(r) together with the kinetic metric factor c(r).

    Parameters
    ----------
    kind : str
        One of ``"quartic"``, ``"lennard_jones_12_6"``, ``"spherical_pendulum"``,
        ``"custom"``.  The polynomial kinds carry a Laurent coefficient table
        ``{k: c_k}`` for v(r) = sum c_k r^k (k may be negative); the pendulum
        uses the closed forms v(r) = -sqrt(1 - r^2), c(r) = sqrt(1 - r^2).
    metric : str
        ``"identity"`` (the plane, c == 1) or ``"sphere"``
        (c(r) = sqrt(1 - r^2) on 0 < r < 1).
    domain : (float, float)
        Open interval J on which the hypotheses v' > 0 and r v'' + v' > 0 are
        asserted; validated by dense sampling (see :func:`check_hypotheses`).
    """

    kind: str
    coeffs: Mapping[int, float] | None = None
    metric: str = "identity"
    domain: tuple[float, float] = (0.0, math.inf)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def quartic() -> "PotentialSpec":
        """v(r) = r^2 + r^4 on J = (0, inf)."""
        return PotentialSpec(kind="quartic", coeffs={2: 1.0, 4: 1.0})

    @staticmethod
    def lennard_jones() -> "PotentialSpec":
        """v(r) = r^-12 - r^-6 on the interval where both hypotheses hold.

        v' > 0 requires r > 2^(1/6); r v'' + v' > 0 (equivalently, r v'(r)
        increasing) requires r < 4^(1/6).  The induced admissible temperature
        range is (0, 3/4).
        """
        lo = 2.0 ** (1.0 / 6.0) * (1.0 + 1e-9)
        hi = 4.0 ** (1.0 / 6.0) * (1.0 - 1e-9)
        return PotentialSpec(kind="lennard_jones_12_6",
                             coeffs={-12: 1.0, -6: -1.0}, domain=(lo, hi))

    @staticmethod
    def spherical_pendulum() -> "PotentialSpec":
        """v = -cos(phi) with r = sin(phi) on the upper chart 0 < r < 1."""
        return PotentialSpec(kind="spherical_pendulum", metric="sphere",
                             domain=(1e-12, 1.0 - 1e-12))

    @staticmethod
    def from_coeffs(coeffs: Mapping[int, float],
                    domain: tuple[float, float],
                    metric: str = "identity") -> "PotentialSpec":
        return PotentialSpec(kind="custom", coeffs=dict(coeffs),
                             metric=metric, domain=domain)

    # -- evaluation ---------------------------------------------------------

    def v(self, r: float) -> float:
        if self.kind == "spherical_pendulum":
            return -math.sqrt(1.0 - r * r)
        return _laurent_eval(self.coeffs, r, 0)

    def dv(self, r: float) -> float:
        if self.kind == "spherical_pendulum":
            return r / math.sqrt(1.0 - r * r)
        return _laurent_eval(self.coeffs, r, 1)

    def d2v(self, r: float) -> float:
        if self.kind == "spherical_pendulum":
            return (1.0 - r * r) ** -1.5
        return _laurent_eval(self.coeffs, r, 2)

    def c(self, r: float) -> float:
        if self.metric == "identity":
            return 1.0
        if self.metric == "sphere":
            return math.sqrt(1.0 - r * r)
        raise ValueError(f"unknown metric {self.metric!r}")

    def dc(self, r: float) -> float:
        if self.metric == "identity":
            return 0.0
        if self.metric == "sphere":
            return -r / math.sqrt(1.0 - r * r)
        raise ValueError(f"unknown metric {self.metric!r}")

    def contains(self, r: float) -> bool:
        lo, hi = self.domain
        return lo <= r <= hi


def _domain_samples(pot: PotentialSpec, n: int) -> np.ndarray:
    """Log grid over J, truncating infinite endpoints."""
    lo, hi = pot.domain
    lo = max(lo, 1e-6)
    hi = min(hi, 1e3)
    return np.geomspace(lo, hi, n)


def hypotheses_hold(pot: PotentialSpec, samples: int = 10_000) -> bool:
    """Sample v' > 0 and r v'' + v' > 0 on J (no symbolic proof)."""
    for r in _domain_samples(pot, samples):
        if pot.dv(r) <= 0.0 or r * pot.d2v(r) + pot.dv(r) <= 0.0:
            return False
    return True


def check_hypotheses(pot: PotentialSpec, samples: int = 10_000) -> None:
    """Raise :class:`HypothesisError` naming the first sample point that fails."""
    for r in _domain_samples(pot, samples):
        if pot.dv(r) <= 0.0:
            raise HypothesisError(f"v'(r) <= 0 at r = {r:.6g} inside J = {pot.domain}")
        if r * pot.d2v(r) + pot.dv(r) <= 0.0:
            raise HypothesisError(
                f"r v''(r) + v'(r) <= 0 at r = {r:.6g} inside J = {pot.domain}")


# ---------------------------------------------------------------------------
# Thermostats
# ---------------------------------------------------------------------------

def _lncosh(x: float) -> float:
    # log(cosh(x)) without overflow for large |x|
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


@dataclass(frozen=True)
class ThermostatSpec:
    """A generalized variable-mass order-2 controller N_T(s, S).

    The controller enters the Hamiltonian as F(s, a*S)/a + T*log(s) where
    F(s, S) = sum_{k>=2} Omega_k(s) S^k / k!.  Supported kinds:

    * ``"nose"`` -- F(s, S) = S^2/2 (constant unit mass).
    * ``"winkler"`` -- F(s, S) = (e s^(1-1/e) S)^2 / 2 for exponent e > 0,
      the s^-e momentum coupling rewritten with the standard coupling.
      Reduces to ``"nose"`` at e = 1.
    * ``"tanh_logistic"`` -- F(S) = d^2 log cosh(S/d): a saturating
      tanh-friction stand-in with scale d > 0 (Omega_2 = 1, |F'| <= d).
    * ``"order2"`` -- finite table {k: {j: c_j}} of Laurent-polynomial
      coefficient functions Omega_k(s) = sum c_j s^j, k >= 2.
    """

    kind: str
    coupling_a: float
    temperature_T: float
    exponent_e: float = 1.0
    saturation_d: float = 1.0
    omega: Mapping[int, Mapping[int, float]] | None = None

    def __post_init__(self):
        if self.coupling_a <= 0.0:
            raise ValueError("coupling_a must be positive")
        if self.temperature_T <= 0.0:
            raise ValueError("temperature_T must be positive")
        if self.kind == "order2":
            if not self.omega or min(self.omega) < 2:
                raise ValueError("order2 thermostat needs coefficient functions for k >= 2")
            if 2 not in self.omega:
                raise ValueError("order2 thermostat needs Omega_2")
            for sval in np.geomspace(1e-2, 1e2, 200):
                if _laurent_eval(self.omega[2], float(sval), 0) <= 0.0:
                    raise ValueError(f"Omega_2(s) <= 0 at s = {sval:.3g}")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def nose(a: float, T: float) -> "ThermostatSpec":
        return ThermostatSpec(kind="nose", coupling_a=a, temperature_T=T)

    @staticmethod
    def winkler(a: float, T: float, e: float) -> "ThermostatSpec":
        if e <= 0.0:
            raise ValueError("winkler exponent must be positive")
        return ThermostatSpec(kind="winkler", coupling_a=a, temperature_T=T,
                              exponent_e=e)

    @staticmethod
    def tanh_logistic(a: float, T: float, d: float = 1.0) -> "ThermostatSpec":
        if d <= 0.0:
            raise ValueError("saturation scale must be positive")
        return ThermostatSpec(kind="tanh_logistic", coupling_a=a,
                              temperature_T=T, saturation_d=d)

    @staticmethod
    def order2(a: float, T: float,
               omega: Mapping[int, Mapping[int, float]]) -> "ThermostatSpec":
        return ThermostatSpec(kind="order2", coupling_a=a, temperature_T=T,
                              omega={int(k): dict(v) for k, v in omega.items()})

    # -- controller ---------------------------------------------------------

    def F(self, s: float, S: float) -> float:
        """The controller F(s, S) = sum Omega_k(s) S^k / k!."""
        if self.kind == "nose":
            return 0.5 * S * S
        if self.kind == "winkler":
            e = self.exponent_e
            w = e * s ** (1.0 - 1.0 / e) * S
            return 0.5 * w * w
        if self.kind == "tanh_logistic":
            d = self.saturation_d
            return d * d * _lncosh(S / d)
        total = 0.0
        for k, table in self.omega.items():
            total += _laurent_eval(table, s, 0) * S ** k / math.factorial(k)
        return total

    def F_S(self, s: float, S: float) -> float:
        """Partial derivative of F with respect to S."""
        if self.kind == "nose":
            return S
        if self.kind == "winkler":
            e = self.exponent_e
            return e * e * s ** (2.0 - 2.0 / e) * S
        if self.kind == "tanh_logistic":
            d = self.saturation_d
            return d * math.tanh(S / d)
        total = 0.0
        for k, table in self.omega.items():
            total += _laurent_eval(table, s, 0) * S ** (k - 1) / math.factorial(k - 1)
        return total

    def F_s(self, s: float, S: float) -> float:
        """Partial derivative of F with respect to s."""
        if self.kind in ("nose", "tanh_logistic"):
            return 0.0
        if self.kind == "winkler":
            e = self.exponent_e
            return (1.0 - 1.0 / e) * e * e * s ** (1.0 - 2.0 / e) * S * S
        total = 0.0
        for k, table in self.omega.items():
            total += _laurent_eval(table, s, 1) * S ** k / math.factorial(k)
        return total

    def omega2(self, s: float) -> float:
        """The variable mass function Omega_2(s) = F_SS(s, 0)."""
        if self.kind in ("nose", "tanh_logistic"):
            return 1.0
        if self.kind == "winkler":
            e = self.exponent_e
            return e * e * s ** (2.0 - 2.0 / e)
        return _laurent_eval(self.omega[2], s, 0)

    def is_elementary(self) -> bool:
        """True when F does not depend on s (constant-mass controller)."""
        if self.kind in ("nose", "tanh_logistic"):
            return True
        if self.kind == "winkler":
            return self.exponent_e == 1.0
        return all(set(table) <= {0} for table in self.omega.values())

    # -- terms of the full Hamiltonian --------------------------------------

    def energy_term(self, s: float, S: float) -> float:
        """F(s, a S)/a + T log(s)."""
        a = self.coupling_a
        return self.F(s, a * S) / a + self.temperature_T * math.log(s)

    def s_dot(self, s: float, S: float) -> float:
        """dH/dS = F_S(s, a S), the velocity of the thermostat coordinate."""
        return self.F_S(s, self.coupling_a * S)

    def dterm_ds(self, s: float, S: float) -> float:
        """d/ds of F(s, a S)/a (the log term handled by the caller)."""
        a = self.coupling_a
        return self.F_s(s, a * S) / a


# ---------------------------------------------------------------------------
# Phase states
# ---------------------------------------------------------------------------

#: Column order used throughout for the thermostated radial system.
STATE_COLUMNS = ("r", "p_r", "theta", "p_theta", "s", "S")


@dataclass(frozen=True)
class PhaseState:
    """Full phase point (r, p_r, theta, p_theta, s, S); s must be positive."""

    r: float
    p_r: float
    theta: float
    p_theta: float
    s: float
    S: float

    def __post_init__(self):
        if not self.s > 0.0:
            raise DomainError(f"thermostat coordinate s = {self.s} must be positive")

    def as_array(self) -> np.ndarray:
        return np.array([self.r, self.p_r, self.theta, self.p_theta, self.s, self.S])

    @staticmethod
    def from_array(y) -> "PhaseState":
        r, p_r, theta, p_theta, s, S = (float(x) for x in y)
        return PhaseState(r, p_r, theta, p_theta, s, S)


def _require_domain(pot: PotentialSpec, x: PhaseState) -> None:
    if not x.s > 0.0:
        raise DomainError(f"s = {x.s} must be positive")
    if not pot.contains(x.r):
        raise DomainError(f"r = {x.r} outside the domain J = {pot.domain}")


# ---------------------------------------------------------------------------
# Operations on the radial system
# ---------------------------------------------------------------------------

def hamiltonian_energy(pot: PotentialSpec, th: ThermostatSpec, x: PhaseState) -> float:
    """Total energy of the thermostated system at the phase point x.

    Returns (1/2) ((c(r) p_r)^2 + (p_theta/r)^2)/s^2 + v(r) + F(s, aS)/a
    + T log(s).  Raises :class:`DomainError` if r lies outside J or s <= 0.
    """
    _require_domain(pot, x)
    cpr = pot.c(x.r) * x.p_r
    kin = 0.5 * (cpr * cpr + (x.p_theta / x.r) ** 2) / (x.s * x.s)
    return kin + pot.v(x.r) + th.energy_term(x.s, x.S)


def equations_of_motion(pot: PotentialSpec, th: ThermostatSpec,
                        x: PhaseState) -> np.ndarray:
    """Canonical vector field (r', p_r', theta', p_theta', s', S').

    p_theta' vanishes identically (theta is cyclic).  Returned in the column
    order of :data:`STATE_COLUMNS`.
    """
    _require_domain(pot, x)
    r, p_r, p_theta, s, S = x.r, x.p_r, x.p_theta, x.s, x.S
    c = pot.c(r)
    dc = pot.dc(r)
    s2 = s * s
    kin2 = (c * p_r) ** 2 + (p_theta / r) ** 2  # twice the kinetic term times s^2
    r_dot = c * c * p_r / s2
    theta_dot = p_theta / (r * r * s2)
    pr_dot = -(c * dc * p_r * p_r - p_theta * p_theta / r ** 3) / s2 - pot.dv(r)
    s_dot = th.F_S(s, th.coupling_a * S)
    S_dot = kin2 / (s2 * s) - th.temperature_T / s - th.dterm_ds(s, S)
    return np.array([r_dot, pr_dot, theta_dot, 0.0, s_dot, S_dot])


def instantaneous_temperature(pot: PotentialSpec, x: PhaseState) -> float:
    """<p, dH/dp> of the momentum-rescaled physical Hamiltonian.

    For the metric kinetic energy this is ((c(r) p_r)^2 + (p_theta/r)^2)/s^2,
    twice the kinetic term of the full Hamiltonian.
    """
    if not x.s > 0.0:
        raise DomainError(f"s = {x.s} must be positive")
    cpr = pot.c(x.r) * x.p_r
    return (cpr * cpr + (x.p_theta / x.r) ** 2) / (x.s * x.s)


# ---------------------------------------------------------------------------
# The weighted-homogeneous separable family
# ---------------------------------------------------------------------------

def homogeneous_normalization(xi: int, eta: int) -> float:
    """Normalization constant c for h(x, p) = (p^xi + x^eta)/c.

    c = (pi eta / (2 B(1 + 1/xi, 1/eta)))^lambda with 1/lambda = 1/xi + 1/eta,
    evaluated through log-Gamma so that the action of the level curve h = E is
    exactly E^(1/lambda).
    """
    lam = 1.0 / (1.0 / xi + 1.0 / eta)
    log_b = betaln(1.0 + 1.0 / xi, 1.0 / eta)
    return math.exp(lam * (math.log(math.pi) + math.log(eta) - math.log(2.0) - log_b))


@dataclass(frozen=True)
class HomogeneousSpec:
    """Separable system H = sum h(q_i, p_i), h(x, p) = (p^xi + x^eta)/c.

    In action-angle form H = I_1^lambda + ... + I_n^lambda where
    1/lambda = 1/xi + 1/eta; xi and eta must be positive even integers.
    """

    xi: int
    eta: int
    n: int = 1

    def __post_init__(self):
        for name, val in (("xi", self.xi), ("eta", self.eta)):
            if val <= 0 or val % 2 != 0:
                raise ValueError(f"{name} must be a positive even integer, got {val}")
        if self.n < 1:
            raise ValueError("n must be at least 1")

    @property
    def lam(self) -> float:
        return 1.0 / (1.0 / self.xi + 1.0 / self.eta)

    @property
    def c(self) -> float:
        return homogeneous_normalization(self.xi, self.eta)

    def G(self, actions) -> float:
        """G(I) = sum I_i^lambda."""
        return float(np.sum(np.asarray(actions, dtype=float) ** self.lam))


def homogeneous_action_check(spec: HomogeneousSpec, E: float,
                             tol: float = 1e-10) -> float:
    """Numerical action I(E) = (1/2pi) oint p dx of the level curve h = E.

    Contract: I(E) = E^(1/lambda) within the quadrature tolerance.  Only the
    one-degree-of-freedom case is covered.  Raises :class:`QuadratureError`
    when the adaptive quadrature reports an error estimate above ``tol``.
    """
    if spec.n != 1:
        raise ValueError("action check is defined for n = 1")
    if E <= 0.0:
        raise ValueError("E must be positive")
    c, xi, eta = spec.c, spec.xi, spec.eta
    x_max = (c * E) ** (1.0 / eta)

    # Quarter curve p = (cE - x^eta)^(1/xi); eta even lets the endpoint
    # singularity factor exactly: cE - x^eta = (x_max - x) * sum_i x^i x_max^(eta-1-i),
    # so the smooth remainder integrates against the algebraic weight
    # (x_max - x)^(1/xi).
    def smooth(x: float) -> float:
        poly = sum(x ** i * x_max ** (eta - 1 - i) for i in range(eta))
        return poly ** (1.0 / xi)

    val, err = quad(smooth, 0.0, x_max, weight="alg", wvar=(0.0, 1.0 / xi),
                    limit=200)
    if err > tol * max(1.0, abs(val)):
        raise QuadratureError("action quadrature failed to converge", err)
    # quarter-curve area times 4, divided by 2 pi
    return 2.0 * val / math.pi


def homogeneous_hamiltonian_energy(spec: HomogeneousSpec,
                                   th: ThermostatSpec | None,
                                   x: float, p: float, s: float = 1.0,
                                   S: float = 0.0) -> float:
    """Energy of the (optionally thermostated) 1-dof homogeneous system."""
    if not s > 0.0:
        raise DomainError(f"s = {s} must be positive")
    base = ((p / s) ** spec.xi + x ** spec.eta) / spec.c
    if th is None:
        return base
    return base + th.energy_term(s, S)


def homogeneous_instantaneous_temperature(spec: HomogeneousSpec, x: float,
                                          p: float, s: float = 1.0) -> float:
    """<p, dh/dp> at rescaled momentum: xi (p/s)^xi / c."""
    return spec.xi * (p / s) ** spec.xi / spec.c
