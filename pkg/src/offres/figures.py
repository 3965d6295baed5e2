"""Data tables behind the five figures."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as sp_integrate

from . import fisher, geodesic, robustness, schemes
from .config import FIGURE_DEFAULTS, RunConfig
from .errors import SingularityError
from .schemes import Detuning, DrivingKind

__all__ = ["Table", "fig1", "fig2", "fig3", "fig4", "fig5", "numeric_initial_speed"]


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


@dataclass
class Table:
    """Header, rows and optional '#' comment lines written before the header."""

    name: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        for note in self.notes:
            buf.write(f"# {note}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(x) for x in row])
        return buf.getvalue()

    def to_json(self) -> dict:
        def clean(x):
            if isinstance(x, (float, np.floating)):
                return None if math.isnan(x) else float(x)
            return x
        return {"name": self.name, "notes": self.notes, "columns": self.columns,
                "rows": [[clean(x) for x in r] for r in self.rows]}

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows])


def fig1(cfg: RunConfig) -> Table:
    """Success probability of the constant drive versus θ for each β₀."""
    betas = cfg.betas(FIGURE_DEFAULTS["fig1_beta0"])
    theta = np.linspace(0.0, FIGURE_DEFAULTS["fig1_theta_max"], cfg.points(FIGURE_DEFAULTS["fig1_points"]))
    scheme = cfg.scheme(DrivingKind.CONSTANT)
    cols = [np.asarray(schemes.success_probability(scheme, Detuning(b), theta)) for b in betas]
    table = Table("fig1", ["theta"] + [f"p0_beta0={b:g}" for b in betas])
    for i, t in enumerate(theta):
        table.rows.append([float(t)] + [float(c[i]) for c in cols])
    return table


def fig2(cfg: RunConfig) -> Table:
    """Geodesics θ(ξ) for every scheme in each β₀ panel, long format."""
    betas = cfg.betas(FIGURE_DEFAULTS["fig2_beta0"])
    n = cfg.points(301)
    xi = np.linspace(cfg.xi_span[0], cfg.xi_span[1], n)
    table = Table("fig2", ["beta0", "scheme", "xi", "theta", "theta_dot", "speed", "status"])
    table.notes.append("status 'truncated' marks the last sample before a singularity of the geodesic equation")
    for b in betas:
        for kind in cfg.schemes:
            traj = geodesic.integrate_geodesic(
                cfg.scheme(kind), Detuning(b), cfg.theta0, cfg.theta_dot0, cfg.xi_span,
                (cfg.tol, cfg.tol), xi_eval=xi, on_singularity="truncate",
            )
            last = len(traj) - 1
            for i in range(len(traj)):
                status = "truncated" if traj.truncated and i == last else "ok"
                table.rows.append([b, kind.value, float(traj.xi[i]), float(traj.theta[i]),
                                   float(traj.theta_dot[i]), float(traj.speed[i]), status])
    return table


def numeric_initial_speed(scheme, det: Detuning, theta0: float, theta_dot0: float = 1.0, tol: float = 1e-10,
                          window: float = 0.25, min_window: float = 1e-8) -> float:
    """Speed at ξ₀ read off an integrated geodesic rather than a closed form.

    The arc length ½∫√F dθ between θ(0) and θ(w), with F from the generic
    two-outcome formula, is divided by w; since geodesics keep their speed
    this equals v(ξ₀) up to integration error. The window shrinks when the
    path meets a singularity. Returns NaN when even the smallest window fails.
    """
    if theta_dot0 == 0:
        return 0.0
    w = window
    while w >= min_window:
        try:
            traj = geodesic.integrate_geodesic(scheme, det, theta0, theta_dot0, (0.0, w), (tol, tol),
                                               xi_eval=np.array([0.0, w]))
            break
        except SingularityError:
            w *= 0.25
    else:
        return math.nan

    def root_f(x):
        return math.sqrt(max(float(fisher.fisher_generic(scheme, det, max(x, 0.0))), 0.0))

    length, _ = sp_integrate.quad(root_f, theta0, float(traj.theta[-1]), epsabs=1e-14, epsrel=1e-13, limit=200)
    return 0.5 * abs(length) / w


def fig3(cfg: RunConfig) -> Table:
    """Analytic against ODE-derived off-resonance initial speed over θ₀."""
    b = cfg.betas(FIGURE_DEFAULTS["fig3_beta0"])[0]
    det = Detuning(b)
    kinds = cfg.schemes if len(cfg.schemes) < len(DrivingKind) else (DrivingKind.CONSTANT,)
    theta0 = np.linspace(0.0, FIGURE_DEFAULTS["fig3_theta0_max"], cfg.points(FIGURE_DEFAULTS["fig3_points"]))
    table = Table("fig3", ["scheme", "beta0", "theta0", "v_off_analytic", "v_off_numeric"])
    for kind in kinds:
        scheme = cfg.scheme(kind)
        for t in theta0:
            t = float(t)
            table.rows.append([kind.value, b, t, float(robustness.v_off(scheme, det, t, cfg.theta_dot0)),
                               numeric_initial_speed(scheme, det, t, cfg.theta_dot0, cfg.tol)])
    return table


def fig4(cfg: RunConfig) -> list[Table]:
    """v_on, v_off and r for the four schemes over θ₀."""
    b = cfg.betas(FIGURE_DEFAULTS["fig4_beta0"])[0]
    det = Detuning(b)
    theta0 = np.linspace(0.0, FIGURE_DEFAULTS["fig4_theta0_max"], cfg.points(FIGURE_DEFAULTS["fig4_points"]))
    kinds = cfg.schemes
    on = Table("fig4_v_on", ["theta0"] + [f"v_on_{k.value}" for k in kinds])
    off = Table("fig4_v_off", ["theta0"] + [f"v_off_{k.value}" for k in kinds], notes=[f"beta0={b:g}"])
    r = Table("fig4_r", ["theta0"] + [f"r_{k.value}" for k in kinds], notes=[
        f"beta0={b:g}",
        "r depends on the initial condition theta0 and is tabulated against theta0, not xi",
        "nan marks an undefined ratio (vanishing on-resonance speed)",
    ])
    series = {k: (robustness.v_on(cfg.scheme(k), theta0, cfg.theta_dot0),
                  robustness.v_off(cfg.scheme(k), det, theta0, cfg.theta_dot0),
                  robustness.robustness_coefficient(cfg.scheme(k), det, theta0)) for k in kinds}
    for i, t in enumerate(theta0):
        on.rows.append([float(t)] + [float(series[k][0][i]) for k in kinds])
        off.rows.append([float(t)] + [float(series[k][1][i]) for k in kinds])
        r.rows.append([float(t)] + [float(series[k][2][i]) for k in kinds])
    return [on, off, r]


def fig5(cfg: RunConfig) -> robustness.RegionGrid:
    beta_range = FIGURE_DEFAULTS["fig5_beta0_range"]
    if cfg.beta0 is not None and len(cfg.beta0) == 2:
        beta_range = cfg.beta0
    return robustness.scan_outperformance_region(
        beta_range, FIGURE_DEFAULTS["fig5_theta0_range"], cfg.points(FIGURE_DEFAULTS["fig5_points"]),
        cfg.p_min, cfg.gamma_rate, cfg.lam, cfg.theta_dot0,
    )
