"""Fixed-step integration of the thermostated systems.

The elementary-controller case splits as H = H1 + H2 with

    H1 = (1/2)(p_x^2 + p_y^2)/s^2 + T log(s)   (momenta only: p_x, p_y, s)
    H2 = v(r) + F(a S)/a                        (configurations only: x, y, S)

after passing to the Cartesian chart, where the kinetic energy is euclidean
and s plays the role of a momentum conjugate (up to orientation) to S.  Both
flows are exact:

    drift:  x += h p_x/s^2,  y += h p_y/s^2,  S += h ((p_x^2+p_y^2)/s^3 - T/s)
    kick :  p_x -= h v'(r) x/r,  p_y -= h v'(r) y/r,  s += h F_S(a S)

The sum of the two split vector fields equals the canonical equations of the
unsplit Hamiltonian; this equivalence is asserted by the test suite, which is
what fixes the signs of the s and S updates.  The 4th-order
Candy-Rozmus-Forest-Ruth composition of these exact flows is symplectic and
time-reversible.  Thermostats whose controller couples s and S jointly (and
non-euclidean metrics) fall back to classical RK4 on the canonical equations,
with conservation monitored downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .model import (
    DomainError,
    HomogeneousSpec,
    PhaseState,
    PotentialSpec,
    STATE_COLUMNS,
    ThermostatSpec,
    hamiltonian_energy,
    homogeneous_hamiltonian_energy,
    homogeneous_instantaneous_temperature,
    instantaneous_temperature,
)

__all__ = [
    "CRFR4_C",
    "CRFR4_D",
    "IntegratorSpec",
    "Trajectory",
    "Unsplittable",
    "ConfigurationError",
    "IntegrationDomainError",
    "split_flows",
    "split_flows_homogeneous",
    "step",
    "step_homogeneous",
    "integrate",
    "integrate_homogeneous",
]

_CBRT2 = 2.0 ** (1.0 / 3.0)
_C1 = 1.0 / (2.0 * (2.0 - _CBRT2))

#: Candy-Rozmus-Forest-Ruth composition coefficients (4 drifts, 3 kicks).
CRFR4_C = (_C1, (1.0 - _CBRT2) * _C1, (1.0 - _CBRT2) * _C1, _C1)
CRFR4_D = (2.0 * _C1, -(2.0 ** (4.0 / 3.0)) * _C1, 2.0 * _C1, 0.0)

HOMOGENEOUS_COLUMNS = ("x", "p_x", "s", "S")


class ConfigurationError(ValueError):
    """Requested scheme is incompatible with the system (e.g. unsplittable)."""


class IntegrationDomainError(DomainError):
    """Trajectory left the admissible domain; carries the failing step index."""

    def __init__(self, message: str, step_index: int):
        super().__init__(f"{message} at step {step_index}")
        self.step_index = step_index


@dataclass(frozen=True)
class Unsplittable:
    """Returned (not raised) when no exact two-term splitting is available."""

    reason: str


@dataclass(frozen=True)
class IntegratorSpec:
    """Scheme ("crfr4" or "rk4"), fixed step and step count.

    Trajectory runs require step_h > 0 (enforced by :func:`integrate`); the
    one-step maps also take h = 0 (identity) and h < 0 (backward step), which
    the reversibility contract relies on.
    """

    scheme: str
    step_h: float
    n_steps: int

    def __post_init__(self):
        if self.scheme not in ("crfr4", "rk4"):
            raise ConfigurationError(f"unknown scheme {self.scheme!r}")
        if not math.isfinite(self.step_h):
            raise ConfigurationError("step_h must be finite")
        if self.n_steps < 1:
            raise ConfigurationError("n_steps must be at least 1")


@dataclass
class Trajectory:
    """Uniformly sampled trajectory with derived observable series."""

    times: np.ndarray
    columns: tuple[str, ...]
    states: np.ndarray
    observables: dict[str, np.ndarray] = field(default_factory=dict)
    step_h: float = 0.0
    sample_stride: int = 1

    def __len__(self) -> int:
        return len(self.times)

    def series(self, name: str) -> np.ndarray:
        """State column or observable series by name."""
        if name in self.columns:
            return self.states[:, self.columns.index(name)]
        if name in self.observables:
            return self.observables[name]
        raise KeyError(f"no series named {name!r}; have {self.columns} "
                       f"and {sorted(self.observables)}")

    @property
    def sample_spacing(self) -> float:
        return self.step_h * self.sample_stride

    def to_csv(self, path) -> None:
        """One row per sample: t, state columns, then observables (sorted)."""
        names = ["t", *self.columns, *sorted(self.observables)]
        data = np.column_stack([self.times, self.states]
                               + [self.observables[k] for k in sorted(self.observables)])
        np.savetxt(path, data, delimiter=",", header=",".join(names), comments="")

    def to_npz(self, path) -> None:
        """Compact binary dump for large runs."""
        np.savez_compressed(
            path, times=self.times, states=self.states,
            columns=np.array(self.columns), step_h=self.step_h,
            sample_stride=self.sample_stride,
            **{f"obs_{k}": v for k, v in self.observables.items()})

    @staticmethod
    def from_npz(path) -> "Trajectory":
        with np.load(path) as data:
            obs = {k[4:]: data[k] for k in data.files if k.startswith("obs_")}
            return Trajectory(times=data["times"], states=data["states"],
                              columns=tuple(str(c) for c in data["columns"]),
                              observables=obs, step_h=float(data["step_h"]),
                              sample_stride=int(data["sample_stride"]))


# ---------------------------------------------------------------------------
# Coordinate conversions (cotangent lift of polar <-> Cartesian)
# ---------------------------------------------------------------------------

def _polar_to_cart(y):
    r, p_r, theta, p_theta, s, S = y
    ct, st = math.cos(theta), math.sin(theta)
    x, yy = r * ct, r * st
    px = p_r * ct - (p_theta / r) * st
    py = p_r * st + (p_theta / r) * ct
    return [x, yy, px, py, s, S]


def _cart_to_polar(z):
    x, y, px, py, s, S = z
    r = math.hypot(x, y)
    theta = math.atan2(y, x) % (2.0 * math.pi)
    p_r = (x * px + y * py) / r
    p_theta = x * py - y * px
    return [r, p_r, theta, p_theta, s, S]


# ---------------------------------------------------------------------------
# Exact split flows (radial system, elementary controller, euclidean metric)
# ---------------------------------------------------------------------------

def _drift_cart(z, h, T):
    x, y, px, py, s, S = z
    inv_s2 = 1.0 / (s * s)
    z[5] = S + h * ((px * px + py * py) * inv_s2 / s - T / s)
    z[0] = x + h * px * inv_s2
    z[1] = y + h * py * inv_s2
    return z


def _kick_cart(z, h, pot, th):
    x, y, px, py, s, S = z
    r = math.hypot(x, y)
    g = pot.dv(r) / r
    z[2] = px - h * g * x
    z[3] = py - h * g * y
    z[4] = s + h * th.F_S(s, th.coupling_a * S)
    return z


def split_flows(pot: PotentialSpec, th: ThermostatSpec):
    """Exact flows (flowA, flowB) of the two-term splitting, or Unsplittable.

    flowA is the time-h flow of the kinetic-plus-log term (advances r, theta
    and S; exact free motion in the euclidean chart); flowB is the time-h flow
    of the potential-plus-controller term (kicks p_r and advances s; positions
    fixed).  Available when the controller depends on S only and the metric is
    euclidean; otherwise the value :class:`Unsplittable` is returned with the
    reason.
    """
    if not th.is_elementary():
        return Unsplittable("controller F(s, aS) depends jointly on (s, S)")
    if pot.metric != "identity":
        return Unsplittable(
            f"kinetic energy is not euclidean in the radial chart (metric {pot.metric!r})")

    T = th.temperature_T

    def flow_a(x: PhaseState, h: float) -> PhaseState:
        z = _drift_cart(_polar_to_cart(x.as_array()), h, T)
        return PhaseState.from_array(_cart_to_polar(z))

    def flow_b(x: PhaseState, h: float) -> PhaseState:
        # central-force kick is diagonal in the polar chart
        return PhaseState(r=x.r, p_r=x.p_r - h * pot.dv(x.r), theta=x.theta,
                          p_theta=x.p_theta, s=x.s + h * th.s_dot(x.s, x.S),
                          S=x.S)

    return flow_a, flow_b


# ---------------------------------------------------------------------------
# Canonical right-hand sides (RK4 fallback)
# ---------------------------------------------------------------------------

def _rhs_radial(pot, th, y):
    r, p_r, theta, p_theta, s, S = y
    c = pot.c(r)
    dc = pot.dc(r)
    s2 = s * s
    a = th.coupling_a
    kin2 = (c * p_r) ** 2 + (p_theta / r) ** 2
    return (
        c * c * p_r / s2,
        -(c * dc * p_r * p_r - p_theta * p_theta / r ** 3) / s2 - pot.dv(r),
        p_theta / (r * r * s2),
        0.0,
        th.F_S(s, a * S),
        kin2 / (s2 * s) - th.temperature_T / s - th.F_s(s, a * S) / a,
    )


def _rhs_homogeneous(spec, th, y):
    x, p, s, S = y
    xi, eta, c = spec.xi, spec.eta, spec.c
    x_dot = xi * p ** (xi - 1) / (c * s ** xi)
    p_dot = -eta * x ** (eta - 1) / c
    if th is None:
        return (x_dot, p_dot, 0.0, 0.0)
    a = th.coupling_a
    return (
        x_dot,
        p_dot,
        th.F_S(s, a * S),
        xi * p ** xi / (c * s ** (xi + 1)) - th.temperature_T / s - th.F_s(s, a * S) / a,
    )


def _rk4(rhs, y, h):
    n = len(y)
    k1 = rhs(y)
    y2 = [y[i] + 0.5 * h * k1[i] for i in range(n)]
    k2 = rhs(y2)
    y3 = [y[i] + 0.5 * h * k2[i] for i in range(n)]
    k3 = rhs(y3)
    y4 = [y[i] + h * k3[i] for i in range(n)]
    k4 = rhs(y4)
    return [y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            for i in range(n)]


# ---------------------------------------------------------------------------
# One-step maps
# ---------------------------------------------------------------------------

def _require_splittable(pot, th, scheme):
    flows = split_flows(pot, th)
    if isinstance(flows, Unsplittable):
        raise ConfigurationError(
            f"crfr4 requested but the {th.kind!r} thermostat configuration has no exact "
            f"splitting: {flows.reason}; use rk4")
    return flows


def _crfr4_cart(z, h, pot, th):
    T = th.temperature_T
    for c, d in zip(CRFR4_C, CRFR4_D):
        z = _drift_cart(z, c * h, T)
        if d != 0.0:
            z = _kick_cart(z, d * h, pot, th)
    return z


def step(pot: PotentialSpec, th: ThermostatSpec, integ: IntegratorSpec,
         x: PhaseState) -> PhaseState:
    """Advance one step of size ``integ.step_h`` (zero step is the identity)."""
    h = integ.step_h
    if h == 0.0:
        return x
    if integ.scheme == "rk4":
        y = _rk4(lambda yy: _rhs_radial(pot, th, yy), list(x.as_array()), h)
        return PhaseState.from_array(y)
    _require_splittable(pot, th, integ.scheme)
    z = _crfr4_cart(_polar_to_cart(x.as_array()), h, pot, th)
    return PhaseState.from_array(_cart_to_polar(z))


def step_homogeneous(spec: HomogeneousSpec, th: ThermostatSpec | None,
                     integ: IntegratorSpec, y) -> tuple:
    """One step of the (optionally thermostated) 1-dof homogeneous system."""
    h = integ.step_h
    if h == 0.0:
        return tuple(y)
    if integ.scheme == "rk4":
        return tuple(_rk4(lambda yy: _rhs_homogeneous(spec, th, yy), list(y), h))
    flows = split_flows_homogeneous(spec, th)
    if isinstance(flows, Unsplittable):
        raise ConfigurationError(
            f"crfr4 requested but no exact splitting: {flows.reason}; use rk4")
    drift, kick = flows
    z = list(y)
    for c, d in zip(CRFR4_C, CRFR4_D):
        z = drift(z, c * h)
        if d != 0.0:
            z = kick(z, d * h)
    return tuple(z)


def split_flows_homogeneous(spec: HomogeneousSpec, th: ThermostatSpec | None):
    """Exact drift/kick flows of the homogeneous system on (x, p, s, S) lists.

    H1 = p^xi/(c s^xi) + T log(s) advances x and S; H2 = x^eta/c + F(aS)/a
    kicks p and advances s.  A frozen thermostat (``th=None``) pins (s, S).
    """
    if th is not None and not th.is_elementary():
        return Unsplittable("controller F(s, aS) depends jointly on (s, S)")
    xi, eta, c = spec.xi, spec.eta, spec.c

    if th is None:
        def drift(z, h):
            x, p, s, S = z
            z[0] = x + h * xi * p ** (xi - 1) / (c * s ** xi)
            return z

        def kick(z, h):
            z[1] = z[1] - h * eta * z[0] ** (eta - 1) / c
            return z
    else:
        T = th.temperature_T
        a = th.coupling_a

        def drift(z, h):
            x, p, s, S = z
            z[3] = S + h * (xi * p ** xi / (c * s ** (xi + 1)) - T / s)
            z[0] = x + h * xi * p ** (xi - 1) / (c * s ** xi)
            return z

        def kick(z, h):
            x, p, s, S = z
            z[1] = p - h * eta * x ** (eta - 1) / c
            z[2] = s + h * th.F_S(s, a * S)
            return z

    return drift, kick


# ---------------------------------------------------------------------------
# Trajectory integration
# ---------------------------------------------------------------------------

def integrate(pot: PotentialSpec, th: ThermostatSpec, integ: IntegratorSpec,
              x0: PhaseState, sample_stride: int = 1,
              observer: Mapping[str, Callable[[PhaseState], float]] | None = None,
              ) -> Trajectory:
    """Advance ``integ.n_steps`` steps, recording every ``sample_stride``-th state.

    The energy ``H`` and the instantaneous temperature ``T_inst`` are always
    recorded; ``observer`` maps extra series names to callables of the sampled
    state.  Domain violations (r leaving J, s <= 0) raise
    :class:`IntegrationDomainError` carrying the step index.
    """
    if sample_stride < 1:
        raise ValueError("sample_stride must be at least 1")
    h = integ.step_h
    if h <= 0.0:
        raise ConfigurationError("trajectory integration requires step_h > 0")
    n_steps = integ.n_steps
    use_crfr = integ.scheme == "crfr4"
    if use_crfr:
        _require_splittable(pot, th, integ.scheme)

    lo, hi = pot.domain
    extra = dict(observer or {})
    names = ["H", "T_inst", *extra]
    n_samples = n_steps // sample_stride + 1
    states = np.empty((n_samples, 6))
    obs = {name: np.empty(n_samples) for name in names}

    def record(idx, state: PhaseState):
        states[idx] = state.as_array()
        obs["H"][idx] = hamiltonian_energy(pot, th, state)
        obs["T_inst"][idx] = instantaneous_temperature(pot, state)
        for name, fn in extra.items():
            obs[name][idx] = fn(state)

    record(0, x0)
    if use_crfr:
        z = _polar_to_cart(x0.as_array())
    else:
        y = list(x0.as_array())

    idx = 1
    for i in range(1, n_steps + 1):
        if use_crfr:
            z = _crfr4_cart(z, h, pot, th)
            r = math.hypot(z[0], z[1])
            s = z[4]
        else:
            y = _rk4(lambda yy: _rhs_radial(pot, th, yy), y, h)
            r = y[0]
            s = y[4]
        if not s > 0.0:
            raise IntegrationDomainError(f"s = {s} left (0, inf)", i)
        if not lo <= r <= hi:
            raise IntegrationDomainError(f"r = {r} left J = {pot.domain}", i)
        if i % sample_stride == 0:
            state = PhaseState.from_array(_cart_to_polar(z) if use_crfr else y)
            record(idx, state)
            idx += 1

    times = h * sample_stride * np.arange(n_samples)
    return Trajectory(times=times, columns=STATE_COLUMNS, states=states,
                      observables=obs, step_h=h, sample_stride=sample_stride)


def integrate_homogeneous(spec: HomogeneousSpec, th: ThermostatSpec | None,
                          integ: IntegratorSpec, y0, sample_stride: int = 1,
                          observer: Mapping[str, Callable[[tuple], float]] | None = None,
                          ) -> Trajectory:
    """Like :func:`integrate` for the 1-dof homogeneous family.

    ``y0`` is (x, p_x, s, S); ``th=None`` freezes the thermostat pair.
    """
    if sample_stride < 1:
        raise ValueError("sample_stride must be at least 1")
    h = integ.step_h
    if h <= 0.0:
        raise ConfigurationError("trajectory integration requires step_h > 0")
    n_steps = integ.n_steps
    use_crfr = integ.scheme == "crfr4"
    flows = None
    if use_crfr:
        flows = split_flows_homogeneous(spec, th)
        if isinstance(flows, Unsplittable):
            raise ConfigurationError(
                f"crfr4 requested but no exact splitting: {flows.reason}; use rk4")

    extra = dict(observer or {})
    names = ["H", "T_inst", *extra]
    n_samples = n_steps // sample_stride + 1
    states = np.empty((n_samples, 4))
    obs = {name: np.empty(n_samples) for name in names}

    def record(idx, z):
        states[idx] = z
        obs["H"][idx] = homogeneous_hamiltonian_energy(spec, th, *z)
        obs["T_inst"][idx] = homogeneous_instantaneous_temperature(spec, z[0], z[1], z[2])
        for name, fn in extra.items():
            obs[name][idx] = fn(tuple(z))

    z = [float(v) for v in y0]
    if len(z) != 4:
        raise ValueError("y0 must be (x, p_x, s, S)")
    record(0, z)

    idx = 1
    for i in range(1, n_steps + 1):
        if use_crfr:
            drift, kick = flows
            for c, d in zip(CRFR4_C, CRFR4_D):
                z = drift(z, c * h)
                if d != 0.0:
                    z = kick(z, d * h)
        else:
            z = _rk4(lambda yy: _rhs_homogeneous(spec, th, yy), z, h)
        if not z[2] > 0.0:
            raise IntegrationDomainError(f"s = {z[2]} left (0, inf)", i)
        if i % sample_stride == 0:
            record(idx, z)
            idx += 1

    times = h * sample_stride * np.arange(n_samples)
    return Trajectory(times=times, columns=HOMOGENEOUS_COLUMNS, states=states,
                      observables=obs, step_h=h, sample_stride=sample_stride)
