"""Self-check suites behind ``offres validate``.

Each check compares two independent computations and records the worst
deviation against its threshold. Named mutations corrupt one formula at a
time so the suites can be shown to catch regressions.
"""
from __future__ import annotations

import contextlib
import math
import time
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from . import fisher, geodesic, oracle, robustness, schemes
from .config import FIGURE_DEFAULTS, RunConfig
from .errors import NumericalError
from .figures import numeric_initial_speed
from .schemes import Detuning, DomainWarning, DrivingKind

__all__ = ["Check", "run_validation", "MUTATIONS", "GEODESIC_CASES", "fisher_grid"]

ORACLE_BETAS = (0.0, 0.25, 0.5, 1.0)
FISHER_BETAS = (0.0, 0.5)
FISHER_POINTS = 1000
# (β₀, θ₀) pairs; crossed with the four schemes gives 20 trajectories
GEODESIC_CASES = ((0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (0.5, 0.7), (1.0, 1.3))


@dataclass
class Check:
    suite: str
    name: str
    max_deviation: float
    threshold: float
    cases: int
    failing_case: dict | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failing_case is None and math.isfinite(self.max_deviation) and self.max_deviation <= self.threshold

    @property
    def margin(self) -> float:
        """threshold / max_deviation (inf when the deviation is exactly zero)."""
        return math.inf if self.max_deviation == 0 else self.threshold / self.max_deviation

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        d["margin"] = None if math.isinf(self.margin) else self.margin
        return d


class _Tracker:
    def __init__(self, suite: str, name: str, threshold: float):
        self.check = Check(suite, name, 0.0, threshold, 0)
        self._t0 = time.perf_counter()

    def record(self, deviation: float, **case) -> None:
        c = self.check
        c.cases += 1
        deviation = float(deviation)
        if not math.isfinite(deviation) or deviation > c.max_deviation:
            c.max_deviation = deviation if math.isfinite(deviation) else math.inf
            if (not math.isfinite(deviation) or deviation > c.threshold) and c.failing_case is None:
                c.failing_case = {k: _plain(v) for k, v in case.items()} | {"deviation": _plain(deviation)}

    def fail(self, error: Exception, **case) -> None:
        self.check.cases += 1
        self.check.max_deviation = math.inf
        if self.check.failing_case is None:
            self.check.failing_case = {k: _plain(v) for k, v in case.items()} | {"error": repr(error)}

    def done(self) -> Check:
        self.check.seconds = time.perf_counter() - self._t0
        return self.check


def _plain(v):
    if isinstance(v, (np.floating, float)):
        return float(v) if math.isfinite(v) else str(float(v))
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, DrivingKind):
        return v.value
    return v


def fisher_grid(scheme, det: Detuning, n: int = FISHER_POINTS, span: float = 2.0 * math.pi) -> np.ndarray:
    """``n`` well-conditioned θ points on (0, span], spread evenly."""
    m = n
    while True:
        cand = span * (np.arange(m) + 0.5) / m
        good = cand[fisher.fd_admissible(scheme, det, cand)]
        if good.size >= n:
            return good[np.linspace(0, good.size - 1, n).round().astype(int)]
        m = int(m * 1.5) + 1


def _oracle_suite(cfg: RunConfig) -> list[Check]:
    theta = np.linspace(0.0, 2.0 * math.pi, 200)
    eq = _Tracker("oracle", "closed form vs integrated amplitudes (rotating frame)", 1e-6)
    frames = _Tracker("oracle", "rotating vs lab frame", 1e-6)
    for kind in DrivingKind:
        scheme = cfg.scheme(kind)
        for b in ORACLE_BETAS:
            det = Detuning(b)
            case = {"scheme": kind, "beta0": b}
            try:
                rot = oracle.transition_probability_numeric(scheme, det, theta, "rotating", cfg.tol)
                lab = oracle.transition_probability_numeric(scheme, det, theta, "lab", cfg.tol, cfg.omega0)
            except NumericalError as exc:
                eq.fail(exc, **case)
                continue
            closed = np.asarray(schemes.success_probability(scheme, det, theta))
            dev = np.abs(rot - closed)
            i = int(np.argmax(dev))
            eq.record(dev[i], theta=theta[i], closed=closed[i], numeric=rot[i], **case)
            dev = np.abs(rot - lab)
            i = int(np.argmax(dev))
            frames.record(dev[i], theta=theta[i], rotating=rot[i], lab=lab[i], **case)
    return [eq.done(), frames.done()]


def _fisher_suite(cfg: RunConfig) -> list[Check]:
    fd = _Tracker("fisher", "closed form vs finite differences (relative)", 1e-6)
    gen = _Tracker("fisher", "closed form vs generic formula (relative)", 1e-8)
    onres = _Tracker("fisher", "on-resonance reduction (absolute)", 0.0)
    for kind in DrivingKind:
        scheme = cfg.scheme(kind)
        for b in FISHER_BETAS:
            det = Detuning(b)
            theta = fisher_grid(scheme, det)
            closed = np.asarray(fisher.fisher_closed(scheme, det, theta))
            numeric = np.asarray(fisher.fisher_finite_difference(scheme, det, theta))
            rel = np.abs(numeric - closed) / np.abs(closed)
            i = int(np.argmax(rel))
            fd.record(rel[i], scheme=kind, beta0=b, theta=theta[i], closed=closed[i], numeric=numeric[i])
        for b in ORACLE_BETAS:
            det = Detuning(b)
            theta = fisher_grid(scheme, det)
            closed = np.asarray(fisher.fisher_closed(scheme, det, theta))
            generic = np.asarray(fisher.fisher_generic(scheme, det, theta))
            rel = np.abs(generic - closed) / np.abs(closed)
            i = int(np.argmax(rel))
            gen.record(rel[i], scheme=kind, beta0=b, theta=theta[i], closed=closed[i], generic=generic[i])
        theta = np.linspace(0.0, 2.0 * math.pi, FISHER_POINTS)
        dev = np.abs(np.asarray(fisher.fisher_closed(scheme, Detuning(0.0), theta))
                     - np.asarray(fisher.fisher_on_resonance(scheme, theta)))
        i = int(np.argmax(dev))
        onres.record(dev[i], scheme=kind, theta=theta[i])
    const = fisher.fisher_closed(cfg.scheme(DrivingKind.CONSTANT), Detuning(0.0), 1.0)
    onres.record(abs(const - 4.0 * cfg.gamma_rate ** 2), scheme=DrivingKind.CONSTANT, note="constant value 4")
    return [fd.done(), gen.done(), onres.done()]


def _geodesic_suite(cfg: RunConfig) -> list[Check]:
    rtol = cfg.tol
    drift = _Tracker("geodesic", "relative speed drift", 10.0 * rtol)
    constraint = _Tracker("geodesic", "arc-length constraint residual / (|a0| xi-span)", 10.0 * rtol)
    straight = _Tracker("geodesic", "on-resonance constant drive is a straight line", 1e-9)
    for kind in DrivingKind:
        scheme = cfg.scheme(kind)
        for b, th0 in GEODESIC_CASES:
            det = Detuning(b)
            case = {"scheme": kind, "beta0": b, "theta0": th0}
            try:
                traj = geodesic.integrate_geodesic(scheme, det, th0, cfg.theta_dot0, cfg.xi_span,
                                                   (cfg.tol, rtol), on_singularity="truncate")
            except NumericalError as exc:
                drift.fail(exc, **case)
                continue
            span = float(traj.xi[-1] - traj.xi[0])
            case["xi_end"] = float(traj.xi[-1])
            drift.record(traj.speed_drift(), **case)
            scale = abs(traj.a0) * span
            constraint.record(geodesic.constraint_residual(traj) / scale if scale else 0.0, **case)
    traj = geodesic.integrate_geodesic(cfg.scheme(DrivingKind.CONSTANT), Detuning(0.0), cfg.theta0,
                                       cfg.theta_dot0, cfg.xi_span, (cfg.tol, rtol))
    dev = np.abs(traj.theta - (cfg.theta0 + cfg.theta_dot0 * (traj.xi - traj.xi[0])))
    i = int(np.argmax(dev))
    straight.record(dev[i], xi=traj.xi[i], theta=traj.theta[i])
    return [drift.done(), constraint.done(), straight.done()]


def _speed_suite(cfg: RunConfig) -> list[Check]:
    fig3 = _Tracker("speed", "analytic vs ODE-derived initial speed, fig-3 grid", 1e-8)
    ident = _Tracker("speed", "v_off vs line-element speed (ulp)", 2.0)
    b = FIGURE_DEFAULTS["fig3_beta0"]
    det = Detuning(b)
    scheme = cfg.scheme(DrivingKind.CONSTANT)
    for t in np.linspace(0.0, 2.0 * math.pi, FIGURE_DEFAULTS["fig3_points"]):
        t = float(t)
        a = float(robustness.v_off(scheme, det, t, cfg.theta_dot0))
        n = numeric_initial_speed(scheme, det, t, cfg.theta_dot0, cfg.tol)
        fig3.record(abs(a - n), scheme=DrivingKind.CONSTANT, beta0=b, theta0=t, analytic=a, numeric=n)
    fig3.record(abs(float(robustness.v_off(scheme, det, 0.0, 1.0)) - 1.0), note="v_off at theta0=0")
    rng = np.random.default_rng(20240601)
    for kind in DrivingKind:
        s = cfg.scheme(kind)
        for bb in rng.uniform(0.0, 1.0, 25):
            d = Detuning(float(bb))
            th = rng.uniform(0.0, 2.0 * math.pi, 200)
            td = rng.uniform(-3.0, 3.0, 200)
            v1 = np.array([robustness.v_off(s, d, float(x), float(y)) for x, y in zip(th, td)])
            v2 = np.asarray(geodesic.geodesic_speed(s, d, th, td))
            ulp = np.abs(v1 - v2) / np.spacing(np.maximum(np.maximum(v1, v2), np.finfo(float).tiny))
            i = int(np.argmax(ulp))
            ident.record(ulp[i], scheme=kind, beta0=float(bb), theta0=th[i], theta_dot0=td[i])
    return [fig3.done(), ident.done()]


def _region_suite(cfg: RunConfig) -> list[Check]:
    nest = _Tracker("region", "nesting pld within exp within osc (violating cells)", 0.0)
    order = _Tracker("region", "ordering r_pld >= r_exp >= r_osc (violating cells)", 0.0)
    grid = robustness.scan_outperformance_region(
        FIGURE_DEFAULTS["fig5_beta0_range"], FIGURE_DEFAULTS["fig5_theta0_range"],
        FIGURE_DEFAULTS["fig5_points"], cfg.p_min, cfg.gamma_rate, cfg.lam, cfg.theta_dot0)
    K = DrivingKind
    live = ~grid.excluded
    bad_nest = live & ((grid.dominates[K.POWER_LAW] & ~grid.dominates[K.EXPONENTIAL])
                       | (grid.dominates[K.EXPONENTIAL] & ~grid.dominates[K.OSCILLATORY]))
    bad_order = live & ~((grid.r[K.POWER_LAW] >= grid.r[K.EXPONENTIAL])
                         & (grid.r[K.EXPONENTIAL] >= grid.r[K.OSCILLATORY]))
    for tracker, bad in ((nest, bad_nest), (order, bad_order)):
        idx = np.argwhere(bad)
        case = {}
        if idx.size:
            i, j = idx[0]
            case = {"beta0": grid.beta0_axis[i], "theta0": grid.theta0_axis[j],
                    **{f"r_{k.value}": grid.r[k][i, j] for k in K}}
        tracker.record(float(bad.sum()), cells=int(live.sum()), **case)
    return [nest.done(), order.done()]


SUITES = {
    "oracle": _oracle_suite,
    "fisher": _fisher_suite,
    "geodesic": _geodesic_suite,
    "speed": _speed_suite,
    "region": _region_suite,
}


def _scale(factor):
    def wrap(f):
        def g(*args, **kwargs):
            return f(*args, **kwargs) * factor
        return g
    return wrap


def _exp_ratio_boost(f):
    def g(scheme, det, theta):
        r = f(scheme, det, theta)
        return np.sqrt(r) if scheme.kind is DrivingKind.EXPONENTIAL else r
    return g


# name -> (module, attribute, wrapper); each corrupts one formula
MUTATIONS = {
    "success_probability": (schemes, "success_probability", _scale(1.0 + 1e-3)),
    "fisher_closed": (fisher, "fisher_closed", _scale(1.0 + 1e-4)),
    "geodesic_coefficient": (geodesic, "_coefficient", _scale(1.01)),
    "v_off": (robustness, "v_off", _scale(1.0 + 1e-6)),
    "robustness_ratio": (robustness, "_ratio", _exp_ratio_boost),
}


@contextlib.contextmanager
def _mutated(name: str | None):
    if name is None:
        yield
        return
    if name not in MUTATIONS:
        raise KeyError(f"unknown mutation {name!r}; available: {', '.join(MUTATIONS)}")
    module, attr, wrapper = MUTATIONS[name]
    original = getattr(module, attr)
    setattr(module, attr, wrapper(original))
    try:
        yield
    finally:
        setattr(module, attr, original)


def run_validation(cfg: RunConfig | None = None, mutation: str | None = None,
                   suites: list[str] | None = None) -> dict:
    """Run the suites and return a JSON-ready report; ``report['passed']`` is the verdict."""
    cfg = cfg or RunConfig()
    names = list(SUITES) if suites is None else suites
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s) {unknown}; available: {', '.join(SUITES)}")
    checks: list[Check] = []
    with _mutated(mutation), warnings.catch_warnings():
        # the oscillatory envelope is deliberately sampled past its quarter period
        warnings.simplefilter("ignore", DomainWarning)
        for name in names:
            checks.extend(SUITES[name](cfg))
    report = {
        "passed": all(c.passed for c in checks),
        "tol": cfg.tol,
        "mutation": mutation,
        "suites": {},
    }
    for c in checks:
        suite = report["suites"].setdefault(c.suite, {"passed": True, "max_deviation": 0.0, "checks": []})
        suite["checks"].append(c.to_dict())
        suite["passed"] = suite["passed"] and c.passed
        suite["max_deviation"] = max(suite["max_deviation"], _plain(c.max_deviation)
                                     if math.isfinite(c.max_deviation) else math.inf)
    for suite in report["suites"].values():
        if math.isinf(suite["max_deviation"]):
            suite["max_deviation"] = "inf"
    return report
