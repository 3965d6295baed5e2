"""Command-line front end: figure data, self-validation and single-value probes.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical singularity.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import figures, fisher, geodesic, oracle, resonance, robustness, schemes
from .config import RunConfig, load_config
from .errors import InvalidArgumentError, NoResonanceError, NumericalError, SingularityError
from .schemes import Detuning, DrivingKind, DrivingScheme
from .validation import MUTATIONS, SUITES, run_validation

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_SINGULAR = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- probes

REQUIRED = object()


@dataclass(frozen=True)
class Param:
    name: str
    kind: str = "float"          # float | scheme | str
    default: object = REQUIRED   # None: taken from the run configuration


@dataclass(frozen=True)
class Probe:
    params: tuple[Param, ...]
    fn: Callable[..., object]
    help: str = ""


def _scheme(cfg: RunConfig, name) -> DrivingScheme:
    return cfg.scheme(DrivingKind.parse(str(name)))


def _peak_omega(a):
    return resonance.TwoLevelStatic(a["E1"], a["E2"], a["coupling"], a["hbar"]).omega21


S = Param("scheme", "scheme", "constant")
B = Param("beta0", "float", 0.0)
TH = Param("theta", "float", 0.0)
TH0 = Param("theta0", "float", 0.0)
TD = Param("theta_dot", "float", 1.0)
TD0 = Param("theta_dot0", "float", 1.0)

PROBES: dict[str, Probe] = {
    "amplitude_factor": Probe((Param("beta0"),), lambda c, a: schemes.amplitude_factor(a["beta0"]), "1/(1+beta0^2)"),
    "rabi_rate": Probe((Param("beta0"), Param("gamma_rate", default=None)),
                       lambda c, a: schemes.rabi_rate(a["beta0"], c.gamma_rate if a["gamma_rate"] is None else a["gamma_rate"])),
    "detuning_beta0": Probe((Param("phi_dot"), Param("Omega"), Param("omega_H"), Param("hbar", default=1.0)),
                            lambda c, a: schemes.detuning_beta0(a["phi_dot"], a["Omega"], a["omega_H"], a["hbar"])),
    "pulse_area": Probe((S, TH), lambda c, a: schemes.pulse_area(_scheme(c, a["scheme"]), a["theta"])),
    "sigma": Probe((S, B, TH), lambda c, a: schemes.sigma(_scheme(c, a["scheme"]), Detuning(a["beta0"]), a["theta"])),
    "success_probability": Probe((S, B, TH), lambda c, a: schemes.success_probability(
        _scheme(c, a["scheme"]), Detuning(a["beta0"]), a["theta"])),
    "dsigma_dtheta": Probe((S, B, TH), lambda c, a: fisher.dsigma_dtheta(
        _scheme(c, a["scheme"]), Detuning(a["beta0"]), a["theta"])),
    "fisher_generic": Probe((S, B, TH), lambda c, a: fisher.fisher_generic(
        _scheme(c, a["scheme"]), Detuning(a["beta0"]), a["theta"])),
    "fisher_closed": Probe((S, B, TH), lambda c, a: fisher.fisher_closed(
        _scheme(c, a["scheme"]), Detuning(a["beta0"]), a["theta"])),
    "fisher_on_resonance": Probe((S, TH), lambda c, a: fisher.fisher_on_resonance(_scheme(c, a["scheme"]), a["theta"])),
    "geodesic_acceleration": Probe((S, B, TH, TD), lambda c, a: geodesic.geodesic_acceleration(
        _scheme(c, a["scheme"]), Detuning(a["beta0"]), geodesic.GeodesicState(0.0, a["theta"], a["theta_dot"]))),
    "geodesic_speed": Probe((S, B, TH, TD), lambda c, a: geodesic.geodesic_speed(
        _scheme(c, a["scheme"]), Detuning(a["beta0"]), a["theta"], a["theta_dot"])),
    "v_on": Probe((S, TH0, TD0), lambda c, a: robustness.v_on(_scheme(c, a["scheme"]), a["theta0"], a["theta_dot0"])),
    "v_off": Probe((S, B, TH0, TD0), lambda c, a: robustness.v_off(
        _scheme(c, a["scheme"]), Detuning(a["beta0"]), a["theta0"], a["theta_dot0"])),
    "robustness_coefficient": Probe((S, B, TH0), lambda c, a: robustness.robustness_coefficient(
        _scheme(c, a["scheme"]), Detuning(a["beta0"]), a["theta0"])),
    "beta0_bound_for_fidelity": Probe((Param("p_min", default=25.0 / 26.0),),
                                      lambda c, a: robustness.beta0_bound_for_fidelity(a["p_min"])),
    "transition_probability_numeric": Probe(
        (S, B, Param("t", default=0.0), Param("frame", "str", "rotating")),
        lambda c, a: oracle.transition_probability_numeric(
            _scheme(c, a["scheme"]), Detuning(a["beta0"]), a["t"], a["frame"], c.tol, c.omega0)),
    "classical_resonance_curve": Probe(
        (Param("gamma_freq"), Param("m", default=1.0), Param("damping", default=1.0), Param("k", default=1.0)),
        lambda c, a: resonance.classical_resonance_curve(
            resonance.ClassicalOscillator(a["m"], a["damping"], a["k"]), a["gamma_freq"])),
    "classical_resonant_frequency": Probe(
        (Param("m", default=1.0), Param("damping", default=1.0), Param("k", default=1.0)),
        lambda c, a: resonance.classical_resonant_frequency(resonance.ClassicalOscillator(a["m"], a["damping"], a["k"]))),
    "quantum_resonance_curve": Probe(
        (Param("omega", default="peak"), Param("E1", default=0.0), Param("E2", default=1.0),
         Param("coupling", default=1.0), Param("hbar", default=1.0)),
        lambda c, a: resonance.quantum_resonance_curve(
            resonance.TwoLevelStatic(a["E1"], a["E2"], a["coupling"], a["hbar"]),
            _peak_omega(a) if a["omega"] == "peak" else a["omega"])),
    "quantum_resonant_frequency": Probe(
        (Param("E1", default=0.0), Param("E2", default=1.0), Param("hbar", default=1.0)),
        lambda c, a: resonance.quantum_resonant_frequency(resonance.TwoLevelStatic(a["E1"], a["E2"], 1.0, a["hbar"]))),
    "static_beta0": Probe(
        (Param("m"), Param("c"), Param("e_abs"), Param("B_perp"), Param("B_par"), Param("omega")),
        lambda c, a: resonance.static_beta0(a["m"], a["c"], a["e_abs"], a["B_perp"], a["B_par"], a["omega"])),
}


def _parse_value(p: Param, raw: str):
    if raw == "default":
        if p.default is REQUIRED:
            raise UsageError(f"parameter {p.name!r} has no default")
        return p.default
    if p.kind in ("scheme", "str"):
        return raw
    if p.name == "omega" and raw == "peak":
        return raw
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"parameter {p.name!r} expects a number, got {raw!r}") from None


def _bind(probe: Probe, args: list[str]) -> dict:
    values: dict = {}
    positional = [a for a in args if "=" not in a]
    keyed = [a.split("=", 1) for a in args if "=" in a]
    if len(positional) > len(probe.params):
        raise UsageError(f"too many arguments; expected at most {len(probe.params)}")
    for p, raw in zip(probe.params, positional):
        values[p.name] = _parse_value(p, raw)
    by_name = {p.name: p for p in probe.params}
    for key, raw in keyed:
        if key not in by_name:
            raise UsageError(f"unknown parameter {key!r}; expected one of {', '.join(by_name)}")
        values[key] = _parse_value(by_name[key], raw)
    for p in probe.params:
        if p.name not in values:
            if p.default is REQUIRED:
                raise UsageError(f"missing parameter {p.name!r}")
            values[p.name] = p.default
    return values


def _probe_usage() -> str:
    lines = ["available operations:"]
    for name, probe in PROBES.items():
        sig = " ".join(p.name if p.default is REQUIRED else f"[{p.name}={p.default}]" for p in probe.params)
        lines.append(f"  {name} {sig}")
    return "\n".join(lines)


def cmd_probe(cfg: RunConfig, operation: str, params: list[str]):
    if operation not in PROBES:
        raise UsageError(f"unknown operation {operation!r}\n{_probe_usage()}")
    probe = PROBES[operation]
    args = _bind(probe, params)
    return args, probe.fn(cfg, args)


# ---------------------------------------------------------------- output

def _number(x) -> str:
    x = float(x)
    return f"{x:.17g}"


def _json_number(x):
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _write(text: str, out: str | None, suffix: str = "") -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if suffix:
        path = path.with_name(f"{path.stem}_{suffix}{path.suffix or '.csv'}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


GNUPLOT_STUBS = {
    "fig1": "set datafile separator ','\nset xlabel 'theta'\nset ylabel 'p'\n"
            "plot for [i=2:{ncol}] '{data}' using 1:i with lines title columnhead(i)\n",
    "fig2": "set datafile separator ','\nset xlabel 'xi'\nset ylabel 'theta'\n"
            "plot '{data}' using 3:4 with lines notitle\n",
    "fig3": "set datafile separator ','\nset xlabel 'theta0'\nset ylabel 'v_off'\n"
            "plot '{data}' using 3:4 with lines title 'analytic', '' using 3:5 with points pt 7 title 'numeric'\n",
    "fig4": "set datafile separator ','\nset xlabel 'theta0'\n"
            "plot for [i=2:{ncol}] '{data}' using 1:i with lines title columnhead(i)\n",
    "fig5": "set datafile separator ','\nset xlabel 'theta0'\nset ylabel 'beta0'\n"
            "plot '{data}' using 2:($13==1?$1:1/0) with points pt 5 title 'oscillatory', "
            "'' using 2:($14==1?$1:1/0) with points pt 5 title 'exponential', "
            "'' using 2:($15==1?$1:1/0) with points pt 5 title 'power-law'\n",
}


def _gnuplot(name: str, data: str | None, ncol: int, path: str) -> None:
    text = GNUPLOT_STUBS[name].format(data=data or "data.csv", ncol=ncol)
    _write(text, path)


# ---------------------------------------------------------------- commands

def _emit_tables(tables: list, cfg: RunConfig) -> None:
    if cfg.json:
        payload = [t.to_json() for t in tables]
        _write(json.dumps(payload if len(payload) > 1 else payload[0]) + "\n", cfg.out)
        return
    if cfg.out is not None and len(tables) > 1:
        for t in tables:
            _write(t.to_csv(), cfg.out, suffix=t.name.split("_", 1)[-1])
        return
    _write("\n".join(t.to_csv() for t in tables), cfg.out)


def run_figure(name: str, cfg: RunConfig, gnuplot: str | None = None) -> int:
    if name == "fig5":
        grid = figures.fig5(cfg)
        _write(grid.to_json() + "\n" if cfg.json else grid.to_csv(), cfg.out)
        if gnuplot:
            _gnuplot(name, cfg.out, len(grid.columns()), gnuplot)
        return EXIT_OK
    result = getattr(figures, name)(cfg)
    tables = result if isinstance(result, list) else [result]
    _emit_tables(tables, cfg)
    if gnuplot:
        data = cfg.out
        if data and len(tables) > 1:
            p = Path(data)
            data = str(p.with_name(f"{p.stem}_{tables[-1].name.split('_', 1)[-1]}{p.suffix or '.csv'}"))
        _gnuplot(name, data, len(tables[-1].columns), gnuplot)
    return EXIT_OK


def run_validate(cfg: RunConfig, mutation: str | None, suites: list[str] | None) -> int:
    report = run_validation(cfg, mutation=mutation, suites=suites)
    _write(json.dumps(report, indent=2, default=str) + "\n", cfg.out)
    if not report["passed"]:
        for suite in report["suites"].values():
            for check in suite["checks"]:
                if not check["passed"]:
                    print(f"FAIL {check['suite']}: {check['name']}: {json.dumps(check['failing_case'], default=str)}",
                          file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def run_probe(cfg: RunConfig, operation: str, params: list[str]) -> int:
    args, value = cmd_probe(cfg, operation, params)
    arr = np.asarray(value, dtype=float)
    if cfg.json:
        payload = {"operation": operation, "params": args,
                   "value": _json_number(arr) if arr.ndim == 0 else [_json_number(v) for v in arr.ravel()]}
        _write(json.dumps(payload) + "\n", cfg.out)
    elif arr.ndim == 0:
        _write(_number(arr) + "\n", cfg.out)
    else:
        _write("\n".join(_number(v) for v in arr.ravel()) + "\n", cfg.out)
    return EXIT_OK


# ---------------------------------------------------------------- parsing

def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _scheme_list(text: str) -> list[str]:
    if text.strip().lower() == "all":
        return [k.value for k in DrivingKind]
    names = [x for x in text.split(",") if x.strip()]
    try:
        return [DrivingKind.parse(x).value for x in names]
    except InvalidArgumentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--beta0", type=_float_list, action="extend", help="detuning values, comma-separated")
    g.add_argument("--scheme", type=_scheme_list, action="extend", dest="schemes",
                   help="driving schemes, comma-separated, or 'all'")
    g.add_argument("--gamma-rate", type=float, help="Gamma/hbar (default 1)")
    g.add_argument("--lambda", type=float, dest="lam", help="envelope rate (default 2/pi)")
    g.add_argument("--theta0", type=float)
    g.add_argument("--theta-dot0", type=float)
    g.add_argument("--tol", type=float, help="integrator tolerance, absolute and relative (default 1e-10)")
    g.add_argument("--grid", type=int, help="grid resolution override")
    g.add_argument("--out", help="output path (stdout when omitted)")
    g.add_argument("--json", action="store_true", default=None, help="machine-readable output")
    g.add_argument("--config", help="flat JSON file of configuration keys")

    parser = argparse.ArgumentParser(prog="offres", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("fig1", "success probability versus theta, constant drive"),
                       ("fig2", "geodesic paths theta(xi)"),
                       ("fig3", "analytic and ODE-derived off-resonance initial speed"),
                       ("fig4", "v_on, v_off and robustness coefficient versus theta0"),
                       ("fig5", "region where each scheme beats the constant drive")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--gnuplot", metavar="PATH", help="also write a gnuplot script stub")
    p = sub.add_parser("validate", parents=[common], help="run the self-check suites")
    p.add_argument("--mutate", choices=sorted(MUTATIONS), help="corrupt one formula (negative control)")
    p.add_argument("--suite", action="append", choices=list(SUITES), dest="suites")
    p = sub.add_parser("probe", parents=[common], help="evaluate one operation",
                       epilog=_probe_usage(), formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("operation")
    p.add_argument("params", nargs="*", help="positional values or name=value")
    return parser


def make_config(ns: argparse.Namespace) -> RunConfig:
    base = load_config(ns.config) if ns.config else {}
    overrides = {
        "schemes": tuple(ns.schemes) if ns.schemes else None,
        "beta0": tuple(ns.beta0) if ns.beta0 else None,
        "gamma_rate": ns.gamma_rate,
        "lam": ns.lam,
        "theta0": ns.theta0,
        "theta_dot0": ns.theta_dot0,
        "tol": ns.tol,
        "grid": ns.grid,
        "out": ns.out,
        "json": ns.json,
    }
    return RunConfig(**base).with_overrides(**overrides)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = make_config(ns)
        if ns.command.startswith("fig"):
            return run_figure(ns.command, cfg, ns.gnuplot)
        if ns.command == "validate":
            return run_validate(cfg, ns.mutate, ns.suites)
        return run_probe(cfg, ns.operation, ns.params)
    except SingularityError as exc:
        print(f"offres: singularity: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (UsageError, InvalidArgumentError, NoResonanceError, ZeroDivisionError) as exc:
        print(f"offres {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"offres: numerical failure: {exc}", file=sys.stderr)
        return EXIT_SINGULAR


if __name__ == "__main__":
    sys.exit(main())
