import math

import numpy as np
import pytest

from thermolab.equilibria import (
    NoSolutionError,
    equilibrium_record,
    homogeneous_s0,
    lift_to_phase,
    perturbed_start,
    solve_equilibrium,
    temperature_range,
)
from thermolab.model import (
    HomogeneousSpec,
    PhaseState,
    PotentialSpec,
    ThermostatSpec,
    equations_of_motion,
    hamiltonian_energy,
    instantaneous_temperature,
)

QUARTIC = PotentialSpec.quartic()
LJ = PotentialSpec.lennard_jones()
PENDULUM = PotentialSpec.spherical_pendulum()


# ---------------------------------------------------------------------------
# closed-form oracles
# ---------------------------------------------------------------------------

def test_quartic_t1_closed_form():
    # 2 r^2 + 4 r^4 = 1 is quadratic in r^2
    eq = solve_equilibrium(QUARTIC, 1.0, 1.0)
    r_closed = math.sqrt((-1.0 + math.sqrt(5.0)) / 4.0)
    assert eq.r_star == pytest.approx(r_closed, abs=1e-14)
    assert abs(1.0 - eq.r_star * QUARTIC.dv(eq.r_star)) < 1e-12
    assert eq.tau == pytest.approx(math.sqrt(eq.r_star ** 3 * QUARTIC.dv(eq.r_star)), rel=1e-15)
    assert eq.s0 == abs(eq.mu) / eq.tau


def test_lj_t_half_closed_form():
    # -12 u^2 + 6 u = 1/2 with u = r^-6; the branch with r v'' + v' > 0
    # (equivalently u > 1/4) is u = (6 + sqrt(12))/24
    eq = solve_equilibrium(LJ, 0.5, 1.0)
    u = (6.0 + math.sqrt(12.0)) / 24.0
    assert eq.r_star == pytest.approx(u ** (-1.0 / 6.0), abs=1e-13)
    assert abs(0.5 - eq.r_star * LJ.dv(eq.r_star)) < 1e-12


def test_lj_admissible_temperatures():
    # dT/dr = 0 at r = 4^(1/6), where T = 3/4: the admissible range is (0, 3/4)
    lo, hi = temperature_range(LJ)
    assert lo == pytest.approx(0.0, abs=1e-6)
    assert hi == pytest.approx(0.75, abs=1e-8)
    with pytest.raises(NoSolutionError, match=r"\(0, 0.75\)"):
        solve_equilibrium(LJ, 0.8, 1.0)


def test_pendulum_t1_closed_form():
    # T(r) = r^2/sqrt(1-r^2) = 1 gives r^2 = (sqrt(5)-1)/2
    eq = solve_equilibrium(PENDULUM, 1.0, 1.0)
    assert eq.r_star == pytest.approx(math.sqrt((math.sqrt(5.0) - 1.0) / 2.0), abs=1e-13)


def test_mu_zero_rejected():
    with pytest.raises(ValueError, match="mu"):
        solve_equilibrium(QUARTIC, 1.0, 0.0)


def test_monotone_temperature_map_gives_unique_root():
    # same answer from a grid of temperatures regardless of bracket seeding
    for pot in (QUARTIC, LJ, PENDULUM):
        lo, hi = temperature_range(pot)
        hi = min(hi, 2.0)
        for T in np.linspace(lo + 0.05, hi - 0.05, 7):
            eq = solve_equilibrium(pot, float(T), 1.0)
            assert abs(T - eq.r_star * pot.dv(eq.r_star)) < 1e-12
            grid = np.linspace(pot.domain[0] + 1e-6, min(pot.domain[1], 50.0), 400)
            tvals = [r * pot.dv(r) for r in grid]
            assert all(t2 > t1 for t1, t2 in zip(tvals, tvals[1:]))


# ---------------------------------------------------------------------------
# lifts and perturbations
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("pot,T", [(QUARTIC, 1.0), (QUARTIC, 0.3), (LJ, 0.5),
                                   (LJ, 0.2), (PENDULUM, 1.0), (PENDULUM, 2.5)])
def test_lift_is_stationary(pot, T):
    th = ThermostatSpec.nose(a=0.01, T=T)
    for mu in (0.5, 1.0, -2.0):
        eq = solve_equilibrium(pot, T, mu)
        x = lift_to_phase(eq)
        field = equations_of_motion(pot, th, x)
        assert np.max(np.abs(np.delete(field, 2))) < 1e-12
        # theta advances with the sign of mu
        assert field[2] == pytest.approx(mu / (eq.r_star ** 2 * eq.s0 ** 2), rel=1e-14)
        assert instantaneous_temperature(pot, x) == pytest.approx(T, abs=1e-12)


def test_perturbed_start_energy_is_second_order():
    th = ThermostatSpec.nose(a=0.01, T=1.0)
    eq = solve_equilibrium(QUARTIC, 1.0, 1.0)
    e0 = hamiltonian_energy(QUARTIC, th, lift_to_phase(eq))
    assert perturbed_start(eq, 0.0).as_array() == pytest.approx(
        lift_to_phase(eq).as_array())
    e1 = hamiltonian_energy(QUARTIC, th, perturbed_start(eq, 1e-6))
    assert abs(e1 - e0) < 1e-10
    # directions select the displaced coordinates
    x_rad = perturbed_start(eq, 1e-2, "radial")
    assert x_rad.r != eq.r_star and x_rad.s == eq.s0
    x_th = perturbed_start(eq, 1e-2, "thermostat")
    assert x_th.r == eq.r_star and x_th.s != eq.s0


def test_s0_scales_linearly_in_mu():
    eq1 = solve_equilibrium(QUARTIC, 1.0, 1.0)
    eq2 = solve_equilibrium(QUARTIC, 1.0, 2.0)
    eqm = solve_equilibrium(QUARTIC, 1.0, -1.0)
    assert eq2.s0 == pytest.approx(2.0 * eq1.s0, rel=1e-15)
    assert eqm.s0 == eq1.s0


def test_equilibrium_record_schema():
    eq = solve_equilibrium(QUARTIC, 1.0, 1.0)
    rec = equilibrium_record(QUARTIC, eq)
    assert set(rec) == {"potential", "metric", "T", "mu", "r_star", "tau", "s0",
                        "residuals"}
    assert rec["residuals"]["temperature"] < 1e-12
    assert rec["residuals"]["stationarity"] < 1e-12


# ---------------------------------------------------------------------------
# homogeneous equilibrium rescaling
# ---------------------------------------------------------------------------

def test_homogeneous_s0_unit_on_equilibrium_set():
    # G(I) = T/lambda sits exactly at s0 = 1 (the fig2 start s = 1)
    for xi, eta in [(2, 2), (4, 6), (10, 10)]:
        spec = HomogeneousSpec(xi, eta)
        T = 1.3
        I = (T / spec.lam) ** (1.0 / spec.lam)
        assert homogeneous_s0(spec, [I], T) == pytest.approx(1.0, rel=1e-14)


def test_homogeneous_s0_direct_and_scaling():
    spec = HomogeneousSpec(2, 2)  # lambda = 1
    assert homogeneous_s0(spec, [2.0 * 0.7], 0.7) == pytest.approx(2.0, rel=1e-14)
    rng = np.random.default_rng(11)
    spec2 = HomogeneousSpec(4, 6, n=3)
    for _ in range(20):
        I = rng.uniform(0.1, 2.0, size=3)
        c = rng.uniform(0.2, 5.0)
        assert homogeneous_s0(spec2, c * I, 1.0) == pytest.approx(
            c * homogeneous_s0(spec2, I, 1.0), rel=1e-12)
    with pytest.raises(ValueError):
        homogeneous_s0(spec, [-1.0], 1.0)
