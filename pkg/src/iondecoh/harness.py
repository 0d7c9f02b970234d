"""Scenario runner, parameter sweeps, file products, and the CLI.

Rates are always reported in units of the uncontrolled decoherence rate
and frequencies in units of the reference transition frequency; the raw
calibrated (v0, beta) appear in the CSV metadata for reproducibility.
"""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional
from xml.etree import ElementTree

import numpy as np

from . import __version__, averaging, dynamics, numerics, rates, spectral

BANG_SWEEP_RANGE = (0.1, 200.0)
ZENO_SWEEP_RANGE = (0.1, 1e7)
SWEEP_POINTS = 200


@dataclass
class ScenarioConfig:
    gamma_d_target: float = 1.0
    gamma_ratio: float = 1000.0
    omega_c: float = 10.0
    delta_rabi: float = 100.0
    control: rates.ControlScheme = field(default_factory=rates.NoControl)
    horizon: float = 4.0
    threshold: float = 0.9
    step: Optional[float] = None
    error_check: bool = False
    csv_path: Optional[str] = None
    svg_path: Optional[str] = None

    def form_params(self) -> spectral.FormFactorParams:
        return spectral.calibrate(self.gamma_d_target, self.gamma_ratio,
                                  self.omega_c)


@dataclass(frozen=True)
class SweepCurve:
    label: str
    grid: np.ndarray
    values: np.ndarray
    peak_location: float
    peak_value: float
    crossover: Optional[float]

    def __post_init__(self):
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("sweep grid must be strictly increasing")
        if np.any(self.values < 0):
            raise ValueError("sweep values must be nonnegative")


def bang_scheme_for(omega_minus_abs: float) -> rates.Bang:
    """The figure-axis parameterization: sweep |omega_-| at fixed detuning
    ratio xi = 24 Omega / 5, which pins omega_- = -5 Omega."""
    omega_rabi = omega_minus_abs / 5.0
    return rates.Bang(omega_rabi=omega_rabi, xi=24.0 * omega_rabi / 5.0)


def zeno_scheme_for(control_freq: float, omega3p: float = 1.0) -> rates.Zeno:
    """Control frequency axis 2 pi / (t_c omega3p) to measurement period."""
    if control_freq <= 0:
        raise ValueError("control frequency must be positive")
    return rates.Zeno(t_c=2.0 * np.pi / (control_freq * omega3p))


def scenario_description(cfg: ScenarioConfig) -> str:
    c = cfg.control
    if isinstance(c, rates.NoControl):
        return "none"
    if isinstance(c, rates.Bang):
        om_plus, om_minus = rates.dressed_frequencies(c.omega_rabi, c.xi)
        return "bang omega_rabi=%.15g xi=%.15g |omega_-|=%.15g" % (
            c.omega_rabi, c.xi, abs(om_minus))
    return "zeno t_c=%.15g control_freq=%.15g" % (
        c.t_c, 2.0 * np.pi / c.t_c)


def run_purity_scenario(cfg: ScenarioConfig) -> dynamics.Trajectory:
    """Calibrate, pick the regime rates, integrate, optionally serialize."""
    params = cfg.form_params()
    rate_set = rates.rates_for(params, cfg.control)
    initial = dynamics.initial_ground_state(rate_set.regime)
    step = cfg.step or dynamics.default_step(rate_set, cfg.delta_rabi)
    ode = numerics.OdeSpec(step=step, error_check=cfg.error_check)
    traj = dynamics.evolve(initial, rate_set, cfg.delta_rabi, cfg.horizon,
                           ode=ode)
    if cfg.csv_path:
        emit_csv(traj, cfg.csv_path, metadata=_scenario_metadata(cfg, params))
    if cfg.svg_path:
        emit_svg(traj, cfg.svg_path)
    return traj


def _scenario_metadata(cfg, params):
    return {
        "generator": "iondecoh %s" % __version__,
        "units": "time in 1/gamma_d, rates in gamma_d, frequencies in omega3p",
        "gamma_ratio": "%.15g" % cfg.gamma_ratio,
        "omega_c": "%.15g" % cfg.omega_c,
        "delta_rabi": "%.15g" % cfg.delta_rabi,
        "control": scenario_description(cfg),
        "horizon": "%.15g" % cfg.horizon,
        "threshold": "%.15g" % cfg.threshold,
        "v0": "%.15g" % params.v0,
        "beta": "%.15g" % params.beta,
    }


def _sweep(cfg: ScenarioConfig, grid, scheme_of, label, workers=0):
    grid = np.asarray(grid, dtype=float)
    params = cfg.form_params()
    gamma_d_ref = rates.rates_uncontrolled(params).gamma_d

    def one(x):
        return rates.rates_for(params, scheme_of(x)).gamma_d / gamma_d_ref

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = np.fromiter(pool.map(one, grid), dtype=float,
                                 count=grid.size)
    else:
        values = np.fromiter((one(x) for x in grid), dtype=float,
                             count=grid.size)
    i_peak = int(np.argmax(values))
    curve = SweepCurve(label=label, grid=grid, values=values,
                       peak_location=float(grid[i_peak]),
                       peak_value=float(values[i_peak]),
                       crossover=None)
    crossover = find_crossover(curve, 1.0)
    return SweepCurve(label=label, grid=grid, values=values,
                      peak_location=float(grid[i_peak]),
                      peak_value=float(values[i_peak]),
                      crossover=crossover)


def default_grid(lo, hi, points, log=True):
    if points < 2 or hi <= lo:
        raise ValueError("need at least two points and max above min")
    if log:
        if lo <= 0:
            raise ValueError("log grid requires a positive lower bound")
        return np.geomspace(lo, hi, points)
    return np.linspace(lo, hi, points)


def sweep_bang(cfg: ScenarioConfig, grid=None, workers=0) -> SweepCurve:
    if grid is None:
        grid = default_grid(*BANG_SWEEP_RANGE, SWEEP_POINTS)
    return _sweep(cfg, grid, bang_scheme_for, "abs_omega_minus_over_omega3p",
                  workers=workers)


def sweep_zeno(cfg: ScenarioConfig, grid=None, workers=0) -> SweepCurve:
    if grid is None:
        grid = default_grid(*ZENO_SWEEP_RANGE, SWEEP_POINTS)
    return _sweep(cfg, grid, zeno_scheme_for, "control_freq_over_omega3p",
                  workers=workers)


def find_crossover(curve: SweepCurve, reference: float) -> Optional[float]:
    """Largest location where the curve crosses the reference from above,
    linearly interpolated between grid points; None if it never does."""
    v = curve.values
    x = curve.grid
    if v.size == 0:
        raise ValueError("empty sweep curve")
    for i in range(v.size - 1, 0, -1):
        if v[i - 1] > reference >= v[i]:
            frac = (v[i - 1] - reference) / (v[i - 1] - v[i])
            return float(x[i - 1] + frac * (x[i] - x[i - 1]))
    return None


def _format_row(values):
    return ",".join("%.15g" % v for v in values)


def emit_csv(data, path, metadata=None):
    """Serialize a Trajectory or SweepCurve.

    Trajectories use the column order tau,s11,s22,s12_re,s12_im,
    <excited...>,eta; sweeps use x,rate. All values carry 15 significant
    digits; metadata goes into leading '#' lines.
    """
    lines = []
    for key, value in (metadata or {}).items():
        lines.append("# %s = %s" % (key, value))
    if isinstance(data, dynamics.Trajectory):
        excited = dynamics.excited_labels(data.regime)
        lines.append(",".join(("tau", "s11", "s22", "s12_re", "s12_im")
                              + excited + ("eta",)))
        for i in range(data.times.size):
            s = data.states[i]
            row = [data.times[i], s[0], s[3], s[1], s[2], *s[4:],
                   data.purity[i]]
            lines.append(_format_row(row))
    elif isinstance(data, SweepCurve):
        lines.append("x,rate")
        for x, v in zip(data.grid, data.values):
            lines.append(_format_row((x, v)))
    else:
        raise TypeError("emit_csv handles Trajectory and SweepCurve only")
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError("cannot write %s: %s" % (path, exc)) from exc


def _svg_points(xs, ys, box, xlog=False, ylog=False):
    left, top, width, height = box
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = np.isfinite(xs) & np.isfinite(ys)
    if xlog:
        keep &= xs > 0
    if ylog:
        keep &= ys > 0
    xs, ys = xs[keep], ys[keep]
    if xs.size == 0:
        return ""
    tx = np.log10(xs) if xlog else xs
    ty = np.log10(ys) if ylog else ys
    x0, x1 = float(tx.min()), float(tx.max())
    y0, y1 = float(ty.min()), float(ty.max())
    xs_px = left + (tx - x0) / max(x1 - x0, 1e-300) * width
    ys_px = top + height - (ty - y0) / max(y1 - y0, 1e-300) * height
    return " ".join("%.2f,%.2f" % (px, py) for px, py in zip(xs_px, ys_px))


def emit_svg(data, path):
    """Minimal line plot: one polyline per series, log axes for sweeps."""
    width, height = 640, 480
    box = (70, 20, width - 90, height - 70)
    root = ElementTree.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "width": str(width), "height": str(height),
        "viewBox": "0 0 %d %d" % (width, height),
    })
    ElementTree.SubElement(root, "rect", {
        "x": str(box[0]), "y": str(box[1]), "width": str(box[2]),
        "height": str(box[3]), "fill": "none", "stroke": "black",
    })
    if isinstance(data, dynamics.Trajectory):
        series = [("eta", data.times, data.purity, False, False)]
        xlabel, ylabel = "tau (1/gamma_d)", "purity eta"
    elif isinstance(data, SweepCurve):
        series = [("rate", data.grid, data.values, True, True)]
        xlabel, ylabel = data.label + " (log)", "rate / gamma_d (log)"
    else:
        raise TypeError("emit_svg handles Trajectory and SweepCurve only")
    for name, xs, ys, xlog, ylog in series:
        points = _svg_points(xs, ys, box, xlog=xlog, ylog=ylog)
        if points:
            ElementTree.SubElement(root, "polyline", {
                "points": points, "fill": "none", "stroke": "steelblue",
                "data-series": name,
            })
    label_x = ElementTree.SubElement(root, "text", {
        "x": str(width // 2), "y": str(height - 15)})
    label_x.text = xlabel
    label_y = ElementTree.SubElement(root, "text", {
        "x": "15", "y": str(height // 2), "transform":
        "rotate(-90 15 %d)" % (height // 2)})
    label_y.text = ylabel
    try:
        ElementTree.ElementTree(root).write(path, xml_declaration=True,
                                            encoding="unicode")
    except OSError as exc:
        raise OSError("cannot write %s: %s" % (path, exc)) from exc


# ---------------------------------------------------------------------------
# command line interface


def _add_common(p):
    p.add_argument("--config", help="flat JSON file; flags override its keys")
    p.add_argument("--gamma-ratio", type=float, dest="gamma_ratio")
    p.add_argument("--omega-c", type=float, dest="omega_c")
    p.add_argument("--delta", type=float, dest="delta")
    p.add_argument("--out", dest="out", help="CSV output path")
    p.add_argument("--svg", dest="svg", help="SVG output path")


def _add_control(p):
    p.add_argument("--control", choices=("none", "bang", "zeno"))
    p.add_argument("--omega-rabi", type=float, dest="omega_rabi")
    p.add_argument("--xi", type=float)
    p.add_argument("--omega4", type=float)
    p.add_argument("--omega-minus", type=float, dest="omega_minus",
                   help="|omega_-| under the fixed-ratio constraint xi = 24 Omega/5")
    p.add_argument("--t-c", type=float, dest="t_c")
    p.add_argument("--zeno-freq", type=float, dest="zeno_freq",
                   help="control frequency 2 pi/(t_c omega3p)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="iondecoh",
        description="Thermal-decoherence rates and purity dynamics for a "
                    "driven three-level ion under kick or measurement control")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rates", help="print the rate set for a control scheme")
    _add_common(p)
    _add_control(p)

    p = sub.add_parser("evolve", help="integrate a purity scenario")
    _add_common(p)
    _add_control(p)
    p.add_argument("--horizon", type=float)
    p.add_argument("--threshold", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--error-check", action="store_true", dest="error_check",
                   default=None)

    for name, hint in (("sweep-bang", "|omega_-|/omega3p"),
                       ("sweep-zeno", "2 pi/(t_c omega3p)")):
        p = sub.add_parser(name, help="rate sweep over %s" % hint)
        _add_common(p)
        p.add_argument("--min", type=float, dest="lo")
        p.add_argument("--max", type=float, dest="hi")
        p.add_argument("--points", type=int)
        p.add_argument("--linear", action="store_true", default=None)
        p.add_argument("--workers", type=int)

    p = sub.add_parser("equivalence",
                       help="averaging residual report for (Omega, xi)")
    _add_common(p)
    p.add_argument("--omega", type=float)
    p.add_argument("--xi", type=float)

    p = sub.add_parser("shifts", help="print the two principal-value shifts")
    _add_common(p)
    return parser


def _load_config(path):
    if not path:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a flat JSON object")
    return data


class _Usage(Exception):
    pass


def _resolve(args, config, key, default=None):
    value = getattr(args, key, None)
    if value is None:
        value = config.get(key, default)
    return value


def _control_from(args, config):
    kind = _resolve(args, config, "control", "none")
    if kind == "none":
        return rates.NoControl()
    if kind == "bang":
        omega_minus = _resolve(args, config, "omega_minus")
        omega_rabi = _resolve(args, config, "omega_rabi")
        xi = _resolve(args, config, "xi")
        if omega_minus is not None and (omega_rabi is not None or xi is not None):
            raise _Usage("--omega-minus excludes --omega-rabi/--xi")
        if omega_minus is not None:
            return bang_scheme_for(float(omega_minus))
        if omega_rabi is None or xi is None:
            raise _Usage("bang control needs --omega-minus or both "
                         "--omega-rabi and --xi")
        omega4 = _resolve(args, config, "omega4", 0.0)
        return rates.Bang(omega_rabi=float(omega_rabi), xi=float(xi),
                          omega4=float(omega4))
    if kind == "zeno":
        t_c = _resolve(args, config, "t_c")
        freq = _resolve(args, config, "zeno_freq")
        if (t_c is None) == (freq is None):
            raise _Usage("zeno control needs exactly one of --t-c and --zeno-freq")
        if t_c is not None:
            return rates.Zeno(t_c=float(t_c))
        return zeno_scheme_for(float(freq))
    raise _Usage("unknown control %r" % kind)


def _scenario_from(args, config):
    cfg = ScenarioConfig(
        gamma_ratio=float(_resolve(args, config, "gamma_ratio", 1000.0)),
        omega_c=float(_resolve(args, config, "omega_c", 10.0)),
        delta_rabi=float(_resolve(args, config, "delta", 100.0)),
        control=_control_from(args, config),
        horizon=float(_resolve(args, config, "horizon", 4.0)),
        threshold=float(_resolve(args, config, "threshold", 0.9)),
        error_check=bool(_resolve(args, config, "error_check", False)),
        csv_path=_resolve(args, config, "out"),
        svg_path=_resolve(args, config, "svg"),
    )
    step = _resolve(args, config, "step")
    if step is not None:
        cfg.step = float(step)
    return cfg


def _cmd_rates(args, config):
    cfg = _scenario_from(args, config)
    params = cfg.form_params()
    ref = rates.rates_uncontrolled(params).gamma_d
    rate_set = rates.rates_for(params, cfg.control)
    print("control = %s" % scenario_description(cfg))
    print("units: rates in gamma_d, frequencies in omega3p")
    print("gamma_d = %.15g" % (rate_set.gamma_d / ref))
    print("gamma_e = %.15g" % (rate_set.gamma_e / ref))
    if rate_set.regime == "bang":
        for name in ("gamma_d_plus", "gamma_d_minus",
                     "gamma_e_plus", "gamma_e_minus"):
            print("%s = %.15g" % (name, getattr(rate_set, name) / ref))
    return 0


def _cmd_evolve(args, config):
    cfg = _scenario_from(args, config)
    traj = run_purity_scenario(cfg)
    t_dec = dynamics.decoherence_time(traj, cfg.threshold)
    print("control = %s" % scenario_description(cfg))
    print("samples = %d" % traj.times.size)
    print("final_eta = %.15g" % traj.purity[-1])
    if t_dec is None:
        print("decoherence_time(threshold=%g) = never" % cfg.threshold)
    else:
        print("decoherence_time(threshold=%g) = %.15g" % (cfg.threshold, t_dec))
    return 0


def _cmd_sweep(args, config, which):
    cfg = _scenario_from(args, config)
    lo_default, hi_default = (BANG_SWEEP_RANGE if which == "bang"
                              else ZENO_SWEEP_RANGE)
    lo = float(_resolve(args, config, "lo", lo_default))
    hi = float(_resolve(args, config, "hi", hi_default))
    points = int(_resolve(args, config, "points", SWEEP_POINTS))
    linear = bool(_resolve(args, config, "linear", False))
    workers = int(_resolve(args, config, "workers", 0) or 0)
    grid = default_grid(lo, hi, points, log=not linear)
    runner = sweep_bang if which == "bang" else sweep_zeno
    curve = runner(cfg, grid=grid, workers=workers)
    params = cfg.form_params()
    if cfg.csv_path:
        meta = {
            "generator": "iondecoh %s" % __version__,
            "units": "rates in gamma_d, frequencies in omega3p",
            "axis": curve.label,
            "gamma_ratio": "%.15g" % cfg.gamma_ratio,
            "omega_c": "%.15g" % cfg.omega_c,
            "v0": "%.15g" % params.v0,
            "beta": "%.15g" % params.beta,
            "peak_location": "%.15g" % curve.peak_location,
            "peak_value": "%.15g" % curve.peak_value,
            "crossover": ("%.15g" % curve.crossover
                          if curve.crossover is not None else "none"),
        }
        emit_csv(curve, cfg.csv_path, metadata=meta)
    if cfg.svg_path:
        emit_svg(curve, cfg.svg_path)
    print("axis = %s" % curve.label)
    print("peak: rate %.15g at %.15g" % (curve.peak_value, curve.peak_location))
    if curve.crossover is None:
        print("crossover at reference 1: none")
    else:
        print("crossover at reference 1: %.15g" % curve.crossover)
    return 0


def _cmd_equivalence(args, config):
    omega = float(_resolve(args, config, "omega", 1.0))
    xi = float(_resolve(args, config, "xi", 4.8))
    delta = float(_resolve(args, config, "delta", 100.0))
    report = averaging.equivalence_report(omega, xi, delta_rabi=delta)
    print("omega_rabi = %.15g, xi = %.15g" % (omega, xi))
    for key, value in report.items():
        print("%s residual = %.3e" % (key, value))
    worst = max(report.values())
    print("max residual = %.3e (%s)" %
          (worst, "ok" if worst <= averaging.MATRIX_TOL else "FAILED"))
    return 0 if worst <= averaging.MATRIX_TOL else 1


def _cmd_shifts(args, config):
    cfg = _scenario_from(args, config)
    params = cfg.form_params()
    delta = spectral.lamb_shift_delta(params)
    delta_prime = spectral.lamb_shift_delta_prime(params)
    print("units: rates in gamma_d")
    print("delta = %.15g" % delta)
    print("delta_prime = %.15g" % delta_prime)
    return 0


def cli_main(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _load_config(getattr(args, "config", None))
        if args.command == "rates":
            return _cmd_rates(args, config)
        if args.command == "evolve":
            return _cmd_evolve(args, config)
        if args.command == "sweep-bang":
            return _cmd_sweep(args, config, "bang")
        if args.command == "sweep-zeno":
            return _cmd_sweep(args, config, "zeno")
        if args.command == "equivalence":
            return _cmd_equivalence(args, config)
        if args.command == "shifts":
            return _cmd_shifts(args, config)
        print("unknown command %r" % args.command, file=sys.stderr)
        return 2
    except _Usage as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 2
    except (numerics.QuadratureError, numerics.AccuracyError,
            averaging.ConsistencyError, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


def main():
    sys.exit(cli_main(sys.argv[1:]))
