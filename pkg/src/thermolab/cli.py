"""Command-line front end: experiment configs, analyses and figure recipes.

Subcommands: ``equilibrium``, ``linearize``, ``run``, ``sweep-eta``,
``spectrum``, ``reproduce``.  Experiments are driven either by flags or by a
single JSON config file; every artifact directory receives a manifest with
the full parameter set and its hash, so runs are reproducible bit for bit
(the pipeline contains no randomness).  Exit codes: 0 success, 2 config
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import diagnostics, equilibria, integrators, linear_analysis, model, spectral
from .model import HomogeneousSpec, PhaseState, PotentialSpec, ThermostatSpec

__all__ = [
    "ExperimentConfig",
    "ConfigError",
    "cmd_equilibrium",
    "cmd_linearize",
    "cmd_sweep_eta",
    "cmd_run",
    "cmd_spectrum",
    "cmd_reproduce",
    "main",
]

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig2-logistic", "fig3-logistic")

#: fraction of the internal-mode bin below which the thermostat peak is
#: searched when the orbit is driven hard enough to bury it under the
#: internal second harmonic (the equilibrium-set starts of the fig2 recipe)
SLOW_PEAK_SEARCH_FRACTION = 0.75


class ConfigError(ValueError):
    """Malformed or inconsistent experiment configuration."""


# ---------------------------------------------------------------------------
# Config handling
# ---------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    """Declarative description of one experiment (see README for the schema)."""

    system: dict
    integrator: dict
    start: dict = field(default_factory=lambda: {"kind": "equilibrium"})
    analyses: list = field(default_factory=list)
    output: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    @staticmethod
    def from_json(text: str) -> "ExperimentConfig":
        data = json.loads(text)
        unknown = set(data) - {"system", "integrator", "start", "analyses", "output"}
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        try:
            return ExperimentConfig(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def sha256(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()


_POTENTIALS = {
    "quartic": PotentialSpec.quartic,
    "lennard_jones_12_6": PotentialSpec.lennard_jones,
    "spherical_pendulum": PotentialSpec.spherical_pendulum,
}


def _build_potential(spec) -> PotentialSpec:
    if isinstance(spec, str):
        if spec not in _POTENTIALS:
            raise ConfigError(f"unknown potential {spec!r}; "
                              f"choose from {sorted(_POTENTIALS)} or give a table")
        return _POTENTIALS[spec]()
    if isinstance(spec, dict):
        try:
            coeffs = {int(k): float(v) for k, v in spec["coeffs"].items()}
            domain = tuple(float(b) for b in spec["domain"])
        except KeyError as exc:
            raise ConfigError(f"custom potential needs {exc}") from exc
        return PotentialSpec.from_coeffs(coeffs, domain,
                                         metric=spec.get("metric", "identity"))
    raise ConfigError(f"bad potential spec {spec!r}")


def _build_thermostat(spec, a: float, T: float) -> ThermostatSpec:
    if isinstance(spec, str):
        spec = {"kind": spec}
    kind = spec.get("kind")
    if kind == "nose":
        return ThermostatSpec.nose(a, T)
    if kind == "winkler":
        return ThermostatSpec.winkler(a, T, float(spec.get("e", 1.0)))
    if kind == "tanh_logistic":
        return ThermostatSpec.tanh_logistic(a, T, float(spec.get("d", 1.0)))
    if kind == "order2":
        try:
            omega = {int(k): {int(j): float(c) for j, c in tab.items()}
                     for k, tab in spec["omega"].items()}
        except KeyError as exc:
            raise ConfigError(f"order2 thermostat needs {exc}") from exc
        return ThermostatSpec.order2(a, T, omega)
    raise ConfigError(f"unknown thermostat kind {kind!r}")


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"missing {key!r} in {where} (no hidden defaults for "
                          "physical parameters)")
    return section[key]


def _build_system(cfg: ExperimentConfig):
    sys_cfg = cfg.system
    kind = sys_cfg.get("kind", "radial")
    T = float(_require(sys_cfg, "T", "system"))
    a = float(_require(sys_cfg, "a", "system"))
    th = _build_thermostat(sys_cfg.get("thermostat", "nose"), a, T)
    if kind == "radial":
        pot = _build_potential(_require(sys_cfg, "potential", "system"))
        mu = float(_require(sys_cfg, "mu", "system"))
        return "radial", pot, th, mu
    if kind == "homogeneous":
        spec = HomogeneousSpec(int(_require(sys_cfg, "xi", "system")),
                               int(_require(sys_cfg, "eta", "system")))
        return "homogeneous", spec, th, None
    raise ConfigError(f"unknown system kind {kind!r}")


def _build_integrator(cfg: ExperimentConfig) -> integrators.IntegratorSpec:
    icfg = cfg.integrator
    h = float(_require(icfg, "h", "integrator"))
    B = float(_require(icfg, "B", "integrator"))
    scheme = icfg.get("scheme", "crfr4")
    n_steps = int(round(B / h))
    try:
        return integrators.IntegratorSpec(scheme, h, n_steps)
    except integrators.ConfigurationError as exc:
        raise ConfigError(str(exc)) from exc


def _start_state(cfg: ExperimentConfig, kind, pot_or_spec, th, mu):
    start = cfg.start
    skind = start.get("kind", "equilibrium")
    if kind == "radial":
        if skind == "explicit":
            return PhaseState.from_array(_require(start, "state", "start"))
        eq = equilibria.solve_equilibrium(pot_or_spec, th.temperature_T, mu)
        if skind == "equilibrium":
            return equilibria.lift_to_phase(eq)
        if skind == "perturbed":
            return equilibria.perturbed_start(eq, float(_require(start, "delta", "start")),
                                              start.get("direction", "both"))
        raise ConfigError(f"unknown start kind {skind!r}")
    # homogeneous: the equilibrium-set start is x = 0, S = 0, s = 1 and p_x
    # fixed by the energy condition H = T/lambda
    if skind == "explicit":
        state = _require(start, "state", "start")
        if len(state) != 4:
            raise ConfigError("homogeneous explicit state must be [x, p_x, s, S]")
        return tuple(float(v) for v in state)
    if skind == "equilibrium":
        T, lam = th.temperature_T, pot_or_spec.lam
        p0 = (pot_or_spec.c * T / lam) ** (1.0 / pot_or_spec.xi)
        return (0.0, p0, 1.0, 0.0)
    raise ConfigError(f"unknown start kind {skind!r} for a homogeneous system")


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def _workers() -> int:
    try:
        return max(1, int(os.environ.get("THERMOLAB_WORKERS", "1")))
    except ValueError:
        return 1


def _parallel_map(fn, items):
    n = _workers()
    if n == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _write_manifest(outdir: Path, name: str, parameters: dict) -> None:
    payload = json.dumps(parameters, sort_keys=True, indent=2)
    manifest = {
        "recipe": name,
        "parameters": parameters,
        "parameters_sha256": hashlib.sha256(payload.encode()).hexdigest(),
        "package": "thermolab 0.1.0",
        "deterministic": True,
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2))


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def cmd_equilibrium(pot_name: str, T: float, mu: float) -> dict:
    pot = _build_potential(pot_name)
    eq = equilibria.solve_equilibrium(pot, T, mu)
    return equilibria.equilibrium_record(pot, eq)


def cmd_linearize(pot_name: str, thermostat, T: float, mu: float, a: float) -> dict:
    pot = _build_potential(pot_name)
    th = _build_thermostat(thermostat, a, T)
    eq = equilibria.solve_equilibrium(pot, T, mu)
    m = linear_analysis.linearize(pot, th, eq)
    rec = equilibria.equilibrium_record(pot, eq)
    rec.update({"a": a, "thermostat": th.kind, "A": m.A, "B": m.B, "C": m.C,
                "D": m.D, "E": m.E, "omega1": m.omega1, "omega2": m.omega2,
                "eta": m.eta, "hessian_posdef": m.hessian_posdef,
                "degenerate": m.degenerate})
    return rec


def cmd_sweep_eta(cfg: ExperimentConfig, var: str, values, outdir: Path) -> Path:
    """Grid sweep of the frequency ratio over T, mu or a; plot-ready CSV."""
    kind, pot, th, mu = _build_system(cfg)
    if kind != "radial":
        raise ConfigError("sweep-eta applies to the radial system")
    T, a = th.temperature_T, th.coupling_a
    if var == "T":
        points = linear_analysis.eta_of_T(pot, th, values, mu, a)
    elif var == "mu":
        points = linear_analysis.eta_of_mu(pot, th, T, values, a)
    elif var == "a":
        points = linear_analysis.eta_of_a(pot, th, values, T, mu)
    else:
        raise ConfigError(f"sweep variable must be T, mu or a, not {var!r}")
    outdir.mkdir(parents=True, exist_ok=True)
    rows = []
    for p in points:
        if p.ok:
            m = p.model
            rows.append([p.x, m.omega1, m.omega2, m.eta,
                         "degenerate" if m.degenerate else "ok"])
        else:
            rows.append([p.x, math.nan, math.nan, math.nan, p.error])
    path = outdir / f"sweep_eta_{var}.csv"
    _write_csv(path, [var, "omega1", "omega2", "eta", "status"], rows)
    _write_manifest(outdir, f"sweep-eta-{var}",
                    {"config": asdict(cfg), "var": var, "values": list(map(float, values))})
    return path


def cmd_run(cfg: ExperimentConfig, outdir: Path) -> dict:
    """Integrate one configured experiment and run its analyses."""
    kind, pot_or_spec, th, mu = _build_system(cfg)
    integ = _build_integrator(cfg)
    x0 = _start_state(cfg, kind, pot_or_spec, th, mu)
    outdir.mkdir(parents=True, exist_ok=True)

    if kind == "radial":
        traj = integrators.integrate(pot_or_spec, th, integ, x0)
        fast_col = "r"
    else:
        traj = integrators.integrate_homogeneous(pot_or_spec, th, integ, x0)
        fast_col = "x"
    traj.to_csv(outdir / "trajectory.csv")
    if "npz" in cfg.output.get("formats", []):
        traj.to_npz(outdir / "trajectory.npz")

    results: dict = {"n_samples": len(traj), "columns": list(traj.columns)}
    n_fft = integ.n_steps  # power-of-two sample count (drops the t=B sample)

    for analysis in cfg.analyses:
        if analysis == "drift":
            rep = diagnostics.drift_report(pot_or_spec, th, traj)
            rep.to_csv(outdir / "drift.csv")
            results["drift"] = {"max_abs_energy_drift": rep.max_abs_energy_drift,
                                "max_abs_ptheta_drift": rep.max_abs_ptheta_drift}
        elif analysis == "spectrum":
            for col in (fast_col, "s"):
                spec = spectral.amplitude_spectrum(traj.series(col)[:n_fft],
                                                   traj.sample_spacing, demean=True)
                _write_csv(outdir / f"spectrum_{col}.csv",
                           ["k", "frequency", "amplitude"],
                           [[k, spec.bin_frequencies[k], spec.amplitudes[k]]
                            for k in range(len(spec))])
        elif analysis == "ratio":
            est = spectral.measure_frequency_ratio(traj, slow_series="s",
                                                   fast_series=fast_col, n_fft=n_fft)
            results["ratio"] = {"k1": est.k1, "k2": est.k2, "eta_hat": est.eta_hat,
                                "uncertainty": est.uncertainty,
                                "omega1": est.omega1, "omega2": est.omega2}
            if kind == "radial":
                eq = equilibria.solve_equilibrium(pot_or_spec, th.temperature_T, mu)
                results["ratio"]["eta_theory"] = \
                    linear_analysis.linearize(pot_or_spec, th, eq).eta
        elif analysis == "orbit3d":
            # projection onto the s-S-x 3-space (x = r cos theta)
            x = traj.series("r") * np.cos(traj.series("theta")) if kind == "radial" \
                else traj.series("x")
            _write_csv(outdir / "orbit3d.csv", ["t", "s", "S", "x"],
                       np.column_stack([traj.times, traj.series("s"),
                                        traj.series("S"), x]).tolist())
        else:
            raise ConfigError(f"unknown analysis {analysis!r}")

    (outdir / "results.json").write_text(json.dumps(results, indent=2, sort_keys=True))
    _write_manifest(outdir, "run", {"config": asdict(cfg)})
    return results


def cmd_spectrum(input_csv: Path, column: str, demean: bool, outdir: Path) -> Path:
    """Amplitude spectrum of one column of a trajectory CSV."""
    with open(input_csv) as fh:
        header = fh.readline().strip().split(",")
    if column not in header or "t" not in header:
        raise ConfigError(f"column {column!r} (and 't') must be present in {input_csv}")
    data = np.loadtxt(input_csv, delimiter=",", skiprows=1)
    t = data[:, header.index("t")]
    series = data[:, header.index(column)]
    if len(t) < 4:
        raise ConfigError("need at least 4 samples")
    h = float(t[1] - t[0])
    n = len(series)
    if n % 2 == 1 and ((n - 1) & (n - 2)) == 0:
        series = series[:-1]  # 2^m + 1 samples: drop the endpoint
    spec = spectral.amplitude_spectrum(series, h, demean=demean)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"spectrum_{column}.csv"
    _write_csv(path, ["k", "frequency", "amplitude"],
               [[k, spec.bin_frequencies[k], spec.amplitudes[k]]
                for k in range(len(spec))])
    return path


# ---------------------------------------------------------------------------
# Figure recipes
# ---------------------------------------------------------------------------

def _measure_homogeneous_cell(args):
    xi, eta, th, h, B = args
    spec = HomogeneousSpec(xi, eta)
    T, a = th.temperature_T, th.coupling_a
    lam = spec.lam
    n = int(round(B / h))
    p0 = (spec.c * T / lam) ** (1.0 / xi)
    traj = integrators.integrate_homogeneous(
        spec, th, integrators.IntegratorSpec("crfr4", h, n), (0.0, p0, 1.0, 0.0))
    xspec = spectral.amplitude_spectrum(traj.series("x")[:n], h, demean=True)
    k2, _ = spectral.dominant_peak(xspec)
    # the s series is driven at twice the internal frequency by the orbit
    # itself; the thermostat normal mode is the dominant low-frequency line
    mask = [(int(SLOW_PEAK_SEARCH_FRACTION * k2), n // 2)]
    est = spectral.measure_frequency_ratio(traj, slow_series="s", fast_series="x",
                                           exclude_slow=mask, n_fft=n)
    w_int = linear_analysis.homogeneous_internal_frequency(spec, T)
    g22 = linear_analysis.homogeneous_G22(spec, T)
    ratio_theory = linear_analysis.paper_thermostat_frequency(g22, 1.0, T, 1.0, a) / w_int
    ratio_nose = linear_analysis.nose_frequency_approx(1, T, 1.0, a) / w_int
    return [xi, eta, lam, est.k1, est.k2, est.eta_hat, est.uncertainty,
            ratio_theory, ratio_nose]


def _fig2(outdir: Path, thermostat: str) -> None:
    T, a, h, B = 1.0, 1e-2, 2.0 ** -5, 2.0 ** 10
    th = _build_thermostat(thermostat, a, T)
    cells = [(xi, eta, th, h, B)
             for xi, eta in itertools.product((2, 4, 6, 8, 10), repeat=2)]
    rows = _parallel_map(_measure_homogeneous_cell, cells)
    _write_csv(outdir / "dots.csv",
               ["xi", "eta", "lambda", "k1", "k2", "ratio_measured",
                "uncertainty", "ratio_theory", "ratio_nose"], rows)
    lam_grid = np.linspace(1.0, 5.0, 201)
    theory = []
    for lam in lam_grid:
        w_int = lam * (T / lam) ** ((lam - 1.0) / lam)
        up = math.sqrt(a) * math.sqrt(lam * T) / w_int
        lo = math.sqrt(a) * math.sqrt(T) / w_int
        theory.append([lam, up, lo])
    _write_csv(outdir / "theory.csv",
               ["lambda", "ratio_predicted", "ratio_nose"], theory)
    _write_manifest(outdir, "fig2", {"T": T, "a": a, "h": h, "B": B,
                                     "thermostat": thermostat,
                                     "exponents": "even 2..10",
                                     "start": "x=0, S=0, s=1, p_x from H=T/lambda",
                                     "slow_peak_search_fraction": SLOW_PEAK_SEARCH_FRACTION})


def _measure_ratio_point(args):
    pot, th, eq, delta, h, B = args
    n = int(round(B / h))
    x0 = equilibria.perturbed_start(eq, delta)
    traj = integrators.integrate(pot, th, integrators.IntegratorSpec("crfr4", h, n), x0)
    return spectral.measure_frequency_ratio(traj, slow_series="s", fast_series="r",
                                            n_fft=n)


def _fig3(outdir: Path, thermostat: str) -> None:
    T, mu, delta, h = 0.5, 1.0, 1e-6, 2.0 ** -4
    pot = PotentialSpec.lennard_jones()
    eq = equilibria.solve_equilibrium(pot, T, mu)
    a_grid = [2.0 ** k for k in np.linspace(-4.0, 1.0, 8)]

    fine = np.geomspace(a_grid[0], a_grid[-1], 101)
    theory_rows = []
    for a in fine:
        th = _build_thermostat(thermostat, a, T)
        theory_rows.append([a, linear_analysis.linearize(pot, th, eq).eta])
    _write_csv(outdir / "theory.csv", ["a", "eta"], theory_rows)

    tasks, meta = [], []
    for B in (2.0 ** 8, 2.0 ** 10):
        for a in a_grid:
            th = _build_thermostat(thermostat, a, T)
            tasks.append((pot, th, eq, delta, h, B))
            meta.append((B, a, linear_analysis.linearize(pot, th, eq).eta))
    ests = _parallel_map(_measure_ratio_point, tasks)
    rows = [[B, a, est.k1, est.k2, est.eta_hat, est.uncertainty, eta_th]
            for (B, a, eta_th), est in zip(meta, ests)]
    _write_csv(outdir / "dots.csv",
               ["B", "a", "k1", "k2", "eta_hat", "uncertainty", "eta_theory"], rows)
    _write_manifest(outdir, "fig3", {"potential": "lennard_jones_12_6", "T": T,
                                     "mu": mu, "delta": delta, "h": h,
                                     "B": [2 ** 8, 2 ** 10], "a_grid": a_grid,
                                     "thermostat": thermostat})


def _fig1(outdir: Path) -> None:
    pot_name, mu = "quartic", 1.0
    lnT = np.linspace(-2.0, 2.0, 81)
    rows = []
    for a in (1e-2, 1e-1, 1.0):
        cfg = ExperimentConfig(
            system={"kind": "radial", "potential": pot_name, "thermostat": "nose",
                    "T": 1.0, "a": a, "mu": mu},
            integrator={"scheme": "crfr4", "h": 2.0 ** -5, "B": 1.0})
        kind, pot, th, _ = _build_system(cfg)
        pts = linear_analysis.eta_of_T(pot, th, np.exp(lnT), mu, a)
        for x, p in zip(lnT, pts):
            if p.ok:
                rows.append([a, x, math.exp(x), p.model.omega1, p.model.omega2,
                             p.model.eta, "ok"])
            else:
                rows.append([a, x, math.exp(x), math.nan, math.nan, math.nan, p.error])
    _write_csv(outdir / "curves.csv",
               ["a", "lnT", "T", "omega1", "omega2", "eta", "status"], rows)
    _write_manifest(outdir, "fig1", {"potential": pot_name, "thermostat": "nose",
                                     "mu": mu, "a": [1e-2, 1e-1, 1.0],
                                     "lnT_range": [-2.0, 2.0], "points": 81})


def _fig4(outdir: Path) -> None:
    cfg = ExperimentConfig(
        system={"kind": "radial", "potential": "lennard_jones_12_6",
                "thermostat": "nose", "T": 0.5, "a": 1.0, "mu": 1.0},
        integrator={"scheme": "crfr4", "h": 2.0 ** -4, "B": 2.0 ** 10},
        start={"kind": "perturbed", "delta": 1e-6, "direction": "both"},
        analyses=["drift", "orbit3d"])
    cmd_run(cfg, outdir)
    _write_manifest(outdir, "fig4", {"config": asdict(cfg)})


def cmd_reproduce(figure_id: str, outdir: Path) -> Path:
    """Emit the theory curves, measured dots and error bars behind one figure."""
    if figure_id not in FIGURE_IDS:
        raise ConfigError(f"unknown figure id {figure_id!r}; choose from {FIGURE_IDS}")
    outdir.mkdir(parents=True, exist_ok=True)
    if figure_id == "fig1":
        _fig1(outdir)
    elif figure_id == "fig2":
        _fig2(outdir, "nose")
    elif figure_id == "fig2-logistic":
        _fig2(outdir, "tanh_logistic")
    elif figure_id == "fig3":
        _fig3(outdir, "nose")
    elif figure_id == "fig3-logistic":
        _fig3(outdir, "tanh_logistic")
    elif figure_id == "fig4":
        _fig4(outdir)
    return outdir


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermolab",
        description="Thermostated integrable-Hamiltonian laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eq = sub.add_parser("equilibrium", help="solve the relative equilibrium")
    p_eq.add_argument("--potential", required=True)
    p_eq.add_argument("--T", type=float, required=True)
    p_eq.add_argument("--mu", type=float, required=True)

    p_lin = sub.add_parser("linearize", help="normal-mode frequencies at the equilibrium")
    p_lin.add_argument("--potential", required=True)
    p_lin.add_argument("--thermostat", default="nose")
    p_lin.add_argument("--T", type=float, required=True)
    p_lin.add_argument("--mu", type=float, required=True)
    p_lin.add_argument("--a", type=float, required=True)

    p_run = sub.add_parser("run", help="integrate a configured experiment")
    p_run.add_argument("--config", required=True, type=Path)
    p_run.add_argument("--out", type=Path, default=None)

    p_sweep = sub.add_parser("sweep-eta", help="frequency-ratio sweep over T, mu or a")
    p_sweep.add_argument("--config", required=True, type=Path)
    p_sweep.add_argument("--var", required=True, choices=["T", "mu", "a"])
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated grid values")
    p_sweep.add_argument("--out", type=Path, default=Path("out"))

    p_spec = sub.add_parser("spectrum", help="amplitude spectrum of a trajectory column")
    p_spec.add_argument("--input", required=True, type=Path)
    p_spec.add_argument("--column", required=True)
    p_spec.add_argument("--demean", action="store_true")
    p_spec.add_argument("--out", type=Path, default=Path("out"))

    p_rep = sub.add_parser("reproduce", help="rebuild the dataset behind a figure")
    p_rep.add_argument("figure_id", choices=FIGURE_IDS)
    p_rep.add_argument("--out", type=Path, default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "equilibrium":
            print(json.dumps(cmd_equilibrium(args.potential, args.T, args.mu),
                             indent=2, sort_keys=True))
        elif args.command == "linearize":
            print(json.dumps(cmd_linearize(args.potential, args.thermostat,
                                           args.T, args.mu, args.a),
                             indent=2, sort_keys=True))
        elif args.command == "run":
            cfg = ExperimentConfig.from_json(args.config.read_text())
            outdir = args.out or Path(cfg.output.get("directory", "out"))
            results = cmd_run(cfg, outdir)
            print(json.dumps(results, indent=2, sort_keys=True))
        elif args.command == "sweep-eta":
            cfg = ExperimentConfig.from_json(args.config.read_text())
            values = [float(v) for v in args.values.split(",") if v]
            path = cmd_sweep_eta(cfg, args.var, values, args.out)
            print(path)
        elif args.command == "spectrum":
            print(cmd_spectrum(args.input, args.column, args.demean, args.out))
        elif args.command == "reproduce":
            outdir = args.out or Path(f"out-{args.figure_id}")
            print(cmd_reproduce(args.figure_id, outdir))
    except (ConfigError, json.JSONDecodeError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (equilibria.NoSolutionError, linear_analysis.HessianIndefiniteError,
            model.DomainError, model.QuadratureError,
            integrators.ConfigurationError, spectral.EmptyAfterExclusionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
