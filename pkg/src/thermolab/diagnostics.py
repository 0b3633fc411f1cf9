"""Conservation and averaging diagnostics over trajectories."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import trapezoid

from .integrators import IntegratorSpec, Trajectory, integrate_homogeneous
from .model import (
    HomogeneousSpec,
    PhaseState,
    PotentialSpec,
    ThermostatSpec,
    hamiltonian_energy,
    homogeneous_hamiltonian_energy,
)

__all__ = [
    "DriftReport",
    "drift_report",
    "birkhoff_average",
    "TemperatureIdentity",
    "mean_temperature_identity_check",
]


@dataclass(frozen=True)
class DriftReport:
    """Suprema and per-sample series of |H(t) - H(0)| and |p_theta(t) - p_theta(0)|."""

    max_abs_energy_drift: float
    max_abs_ptheta_drift: float
    times: np.ndarray
    energy_drift: np.ndarray
    ptheta_drift: np.ndarray

    def to_csv(self, path) -> None:
        data = np.column_stack([self.times, self.energy_drift, self.ptheta_drift])
        np.savetxt(path, data, delimiter=",", header="t,dH,dp_theta", comments="")


def drift_report(pot: PotentialSpec | HomogeneousSpec,
                 th: ThermostatSpec | None, traj: Trajectory) -> DriftReport:
    """Recompute H (and p_theta, when present) at every sample and report drift.

    Accepts trajectories of the radial system (pot is a
    :class:`PotentialSpec`) and of the homogeneous family (pot is a
    :class:`HomogeneousSpec`); the latter has no angular momentum column and
    reports zero for it.
    """
    if len(traj) == 0:
        raise ValueError("trajectory is empty")
    if isinstance(pot, HomogeneousSpec):
        H = np.array([homogeneous_hamiltonian_energy(pot, th, *row)
                      for row in traj.states])
        dpth = np.zeros(len(traj))
    else:
        H = np.array([hamiltonian_energy(pot, th, PhaseState.from_array(row))
                      for row in traj.states])
        pth = traj.series("p_theta")
        dpth = pth - pth[0]
    dH = H - H[0]
    return DriftReport(max_abs_energy_drift=float(np.max(np.abs(dH))),
                       max_abs_ptheta_drift=float(np.max(np.abs(dpth))),
                       times=traj.times, energy_drift=dH, ptheta_drift=dpth)


def birkhoff_average(traj: Trajectory,
                     observable: str | Callable[[np.ndarray], np.ndarray]) -> float:
    """Trapezoid time average of an observable over the recorded window.

    ``observable`` is a recorded series name or a callable applied to the
    state array.  The window is the forward interval [t0, t0 + B]; for the
    autonomous reversible flows here this agrees with the centred average.
    """
    if len(traj) < 2:
        if len(traj) == 1:
            series = traj.series(observable) if isinstance(observable, str) \
                else np.asarray(observable(traj.states))
            return float(series[0])
        raise ValueError("trajectory is empty")
    if isinstance(observable, str):
        series = traj.series(observable)
    else:
        series = np.asarray(observable(traj.states))
    span = traj.times[-1] - traj.times[0]
    return float(trapezoid(series, traj.times) / span)


class TemperatureIdentity(NamedTuple):
    time_average: float
    kappa_formula: float
    difference: float


def mean_temperature_identity_check(spec: HomogeneousSpec, I0: float,
                                    B: float = 2.0 ** 10,
                                    h: float = 2.0 ** -5,
                                    scheme: str = "crfr4") -> TemperatureIdentity:
    """Compare the orbit mean temperature with <I, dG(I)> = lambda G(I0).

    Integrates the unthermostated (frozen s = 1, S = 0) one-degree-of-freedom
    homogeneous system started on the action-I0 level curve (x = 0, p from
    the energy G(I0) = I0^lambda), time-averages the instantaneous
    temperature, and returns both values together with their difference.
    """
    if spec.n != 1:
        raise ValueError("identity check is defined for n = 1")
    if I0 <= 0.0:
        raise ValueError("I0 must be positive")
    lam = spec.lam
    E = I0 ** lam
    p0 = (spec.c * E) ** (1.0 / spec.xi)
    integ = IntegratorSpec(scheme, h, int(round(B / h)))
    traj = integrate_homogeneous(spec, None, integ, (0.0, p0, 1.0, 0.0))
    avg = birkhoff_average(traj, "T_inst")
    kappa = lam * E
    return TemperatureIdentity(time_average=avg, kappa_formula=kappa,
                               difference=avg - kappa)
