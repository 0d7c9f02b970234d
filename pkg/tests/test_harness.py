import json
from xml.etree import ElementTree

import numpy as np
import pytest

from iondecoh import dynamics
from iondecoh.harness import (ScenarioConfig, SweepCurve, bang_scheme_for,
                              cli_main, default_grid, emit_csv, emit_svg,
                              find_crossover, run_purity_scenario, sweep_bang,
                              sweep_zeno, zeno_scheme_for)
from iondecoh.rates import (NoControl, Zeno, dressed_frequencies,
                            rates_uncontrolled)
from iondecoh.spectral import calibrate


def read_csv(path):
    meta, header, rows = {}, None, []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                meta[key.strip()] = value.strip()
            elif header is None:
                header = line.split(",")
            else:
                rows.append([float(tok) for tok in line.split(",")])
    return meta, header, np.asarray(rows)


# -- scheme helpers ------------------------------------------------------------


def test_bang_scheme_pins_omega_minus():
    scheme = bang_scheme_for(10.0)
    assert scheme.omega_rabi == pytest.approx(2.0)
    assert scheme.xi == pytest.approx(9.6)
    _, om_minus = dressed_frequencies(scheme.omega_rabi, scheme.xi)
    assert abs(om_minus) == pytest.approx(10.0, rel=1e-14)


def test_zeno_scheme_inverts_frequency():
    scheme = zeno_scheme_for(0.5)
    assert scheme.t_c == pytest.approx(4.0 * np.pi)
    with pytest.raises(ValueError):
        zeno_scheme_for(0.0)


def test_default_grid():
    g = default_grid(0.1, 200.0, 50)
    assert g.size == 50 and g[0] == pytest.approx(0.1)
    assert np.allclose(np.diff(np.log(g)), np.diff(np.log(g))[0])
    lin = default_grid(1.0, 2.0, 11, log=False)
    assert np.allclose(np.diff(lin), 0.1)
    with pytest.raises(ValueError):
        default_grid(2.0, 1.0, 10)
    with pytest.raises(ValueError):
        default_grid(0.0, 1.0, 10)


# -- sweeps and crossover --------------------------------------------------------


def test_sweep_curve_validation():
    with pytest.raises(ValueError):
        SweepCurve(label="x", grid=np.array([1.0, 1.0]),
                   values=np.array([1.0, 2.0]), peak_location=1.0,
                   peak_value=2.0, crossover=None)
    with pytest.raises(ValueError):
        SweepCurve(label="x", grid=np.array([1.0, 2.0]),
                   values=np.array([-1.0, 2.0]), peak_location=2.0,
                   peak_value=2.0, crossover=None)


def test_find_crossover_cases():
    grid = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    curve = SweepCurve(label="x", grid=grid,
                       values=np.array([2.0, 1.5, 0.5, 2.0, 0.5]),
                       peak_location=1.0, peak_value=2.0, crossover=None)
    # two crossings from above; the later one wins
    assert find_crossover(curve, 1.0) == pytest.approx(4.0 + 2.0 / 3.0)

    flat_high = SweepCurve(label="x", grid=grid, values=np.full(5, 3.0),
                           peak_location=1.0, peak_value=3.0, crossover=None)
    assert find_crossover(flat_high, 1.0) is None

    flat_low = SweepCurve(label="x", grid=grid, values=np.full(5, 0.5),
                          peak_location=1.0, peak_value=0.5, crossover=None)
    assert find_crossover(flat_low, 1.0) is None


def test_find_crossover_matches_approximant_root():
    grid = np.geomspace(0.1, 200.0, 400)
    values = 1000.0 / 26.0 * grid * np.exp(-grid / 10.0)
    curve = SweepCurve(label="x", grid=grid, values=values,
                       peak_location=10.0, peak_value=values.max(),
                       crossover=None)
    assert find_crossover(curve, 1.0) == pytest.approx(80.4, abs=1.0)


def test_sweep_bang_small_grid():
    cfg = ScenarioConfig()
    grid = np.geomspace(5.0, 15.0, 9)
    curve = sweep_bang(cfg, grid=grid)
    assert curve.label == "abs_omega_minus_over_omega3p"
    assert curve.peak_value == np.max(curve.values)
    assert curve.grid[np.argmax(curve.values)] == curve.peak_location
    assert curve.crossover is None
    assert np.all(curve.values > 1.0)


def test_sweep_zeno_small_grid():
    cfg = ScenarioConfig()
    curve = sweep_zeno(cfg, grid=np.geomspace(0.5, 100.0, 7))
    assert curve.label == "control_freq_over_omega3p"
    assert np.all(curve.values > 0.0)


def test_parallel_sweep_matches_serial():
    cfg = ScenarioConfig()
    grid = np.geomspace(0.5, 50.0, 12)
    serial = sweep_zeno(cfg, grid=grid)
    parallel = sweep_zeno(cfg, grid=grid, workers=3)
    assert np.array_equal(serial.values, parallel.values)
    b_serial = sweep_bang(cfg, grid=grid)
    b_parallel = sweep_bang(cfg, grid=grid, workers=3)
    assert np.array_equal(b_serial.values, b_parallel.values)


# -- scenario runner --------------------------------------------------------------


def test_run_purity_scenario_defaults(tmp_path):
    csv_path = tmp_path / "traj.csv"
    svg_path = tmp_path / "traj.svg"
    cfg = ScenarioConfig(horizon=1.0, csv_path=str(csv_path),
                         svg_path=str(svg_path))
    traj = run_purity_scenario(cfg)
    assert traj.regime == "none"
    assert traj.times[-1] == pytest.approx(1.0)
    assert traj.purity[-1] == pytest.approx(0.7961698548728288, rel=1e-9)
    meta, header, rows = read_csv(csv_path)
    assert header == ["tau", "s11", "s22", "s12_re", "s12_im", "s33", "eta"]
    assert rows.shape == (traj.times.size, 7)
    assert "v0" in meta and "beta" in meta and "generator" in meta
    assert float(meta["beta"]) == pytest.approx(np.log(1000.0), rel=1e-12)
    ElementTree.parse(svg_path)


def test_scenario_bang_has_two_excited_columns(tmp_path):
    csv_path = tmp_path / "bang.csv"
    cfg = ScenarioConfig(control=bang_scheme_for(150.0), horizon=0.1,
                         csv_path=str(csv_path))
    run_purity_scenario(cfg)
    _, header, rows = read_csv(csv_path)
    assert header == ["tau", "s11", "s22", "s12_re", "s12_im", "s_pp",
                      "s_mm", "eta"]


# -- serialization -----------------------------------------------------------------


def test_emit_csv_trajectory_round_trip(tmp_path):
    cfg = ScenarioConfig(horizon=0.5)
    traj = run_purity_scenario(cfg)
    path = tmp_path / "round.csv"
    emit_csv(traj, str(path))
    _, header, rows = read_csv(path)
    assert np.allclose(rows[:, 0], traj.times, rtol=1e-14, atol=1e-300)
    assert np.allclose(rows[:, 1], traj.states[:, 0], rtol=1e-14,
                       atol=1e-300)
    assert np.allclose(rows[:, 6], traj.purity, rtol=1e-14, atol=1e-300)


def test_emit_csv_empty_trajectory(tmp_path):
    empty = dynamics.Trajectory(regime="none", times=np.zeros(0),
                                states=np.zeros((0, 5)), purity=np.zeros(0))
    path = tmp_path / "empty.csv"
    emit_csv(empty, str(path))
    meta, header, rows = read_csv(path)
    assert header == ["tau", "s11", "s22", "s12_re", "s12_im", "s33", "eta"]
    assert rows.size == 0


def test_emit_csv_sweep_format(tmp_path):
    curve = SweepCurve(label="x", grid=np.array([1.0, 2.0]),
                       values=np.array([3.0, 4.0]), peak_location=2.0,
                       peak_value=4.0, crossover=None)
    path = tmp_path / "sweep.csv"
    emit_csv(curve, str(path), metadata={"axis": "x"})
    meta, header, rows = read_csv(path)
    assert header == ["x", "rate"]
    assert meta["axis"] == "x"
    assert rows.tolist() == [[1.0, 3.0], [2.0, 4.0]]


def test_emit_csv_rejects_unknown_payload(tmp_path):
    with pytest.raises(TypeError):
        emit_csv({"not": "supported"}, str(tmp_path / "x.csv"))


def test_emit_csv_bad_path_has_context():
    with pytest.raises(OSError) as err:
        emit_csv(SweepCurve(label="x", grid=np.array([1.0]),
                            values=np.array([1.0]), peak_location=1.0,
                            peak_value=1.0, crossover=None),
                 "/nonexistent-dir/x.csv")
    assert "/nonexistent-dir/x.csv" in str(err.value)


def test_emit_svg_structure(tmp_path):
    curve = SweepCurve(label="f", grid=np.geomspace(0.1, 10.0, 20),
                       values=np.linspace(1.0, 5.0, 20), peak_location=10.0,
                       peak_value=5.0, crossover=None)
    path = tmp_path / "curve.svg"
    emit_svg(curve, str(path))
    root = ElementTree.parse(path).getroot()
    assert root.tag.endswith("svg")
    ns = "{http://www.w3.org/2000/svg}"
    polylines = root.findall(ns + "polyline")
    assert len(polylines) == 1
    assert polylines[0].get("points")


def test_csv_determinism(tmp_path):
    cfg1 = ScenarioConfig(horizon=0.2, csv_path=str(tmp_path / "a.csv"))
    cfg2 = ScenarioConfig(horizon=0.2, csv_path=str(tmp_path / "b.csv"))
    run_purity_scenario(cfg1)
    run_purity_scenario(cfg2)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


# -- command line interface ---------------------------------------------------------


def test_cli_rates_default(capsys):
    assert cli_main(["rates"]) == 0
    out = capsys.readouterr().out
    assert "gamma_d = 1" in out
    assert "gamma_e = 1000" in out


def test_cli_rates_zeno(capsys):
    assert cli_main(["rates", "--control", "zeno", "--zeno-freq", "0.5"]) == 0
    out = capsys.readouterr().out
    value = float([l for l in out.splitlines()
                   if l.startswith("gamma_d =")][0].split("=")[1])
    assert value == pytest.approx(37.496544225354135, rel=1e-9)


def test_cli_usage_errors(capsys):
    assert cli_main([]) == 2
    assert cli_main(["rates", "--control", "bang"]) == 2
    assert cli_main(["rates", "--no-such-flag"]) == 2
    assert cli_main(["rates", "--control", "zeno"]) == 2
    assert cli_main(["rates", "--control", "zeno", "--t-c", "1.0",
                     "--zeno-freq", "2.0"]) == 2
    capsys.readouterr()


def test_cli_help_exits_zero(capsys):
    assert cli_main(["--help"]) == 0
    capsys.readouterr()


def test_cli_numeric_failure(capsys):
    assert cli_main(["rates", "--gamma-ratio", "0.5"]) == 1
    err = capsys.readouterr().err
    assert "error" in err


def test_cli_bad_output_path(capsys):
    rc = cli_main(["evolve", "--horizon", "0.02", "--out",
                   "/nonexistent-dir/x.csv"])
    assert rc == 1
    capsys.readouterr()


def test_cli_config_file_and_override(tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"control": "zeno", "zeno_freq": 2.0}))
    assert cli_main(["rates", "--config", str(config)]) == 0
    out = capsys.readouterr().out
    gd = float([l for l in out.splitlines()
                if l.startswith("gamma_d =")][0].split("=")[1])
    assert gd == pytest.approx(147.16526292448535, rel=1e-9)

    # a flag overrides the config value for the same key
    assert cli_main(["rates", "--config", str(config),
                     "--zeno-freq", "0.5"]) == 0
    out = capsys.readouterr().out
    gd = float([l for l in out.splitlines()
                if l.startswith("gamma_d =")][0].split("=")[1])
    assert gd == pytest.approx(37.496544225354135, rel=1e-9)


def test_cli_bad_config_is_numeric_failure(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("not json")
    assert cli_main(["rates", "--config", str(bad)]) == 1
    listy = tmp_path / "list.json"
    listy.write_text("[1, 2]")
    assert cli_main(["rates", "--config", str(listy)]) == 1
    capsys.readouterr()


def test_cli_sweep_writes_rows(tmp_path, capsys):
    out_csv = tmp_path / "curve.csv"
    rc = cli_main(["sweep-bang", "--min", "5", "--max", "15", "--points",
                   "10", "--out", str(out_csv)])
    assert rc == 0
    meta, header, rows = read_csv(out_csv)
    assert header == ["x", "rate"]
    assert rows.shape == (10, 2)
    assert "peak_location" in meta
    capsys.readouterr()


def test_cli_evolve_reports_threshold_crossing(tmp_path, capsys):
    rc = cli_main(["evolve", "--horizon", "1", "--threshold", "0.9"])
    assert rc == 0
    out = capsys.readouterr().out
    line = [l for l in out.splitlines() if "decoherence_time" in l][0]
    assert float(line.split("=")[-1]) == pytest.approx(0.4254, abs=1e-3)


def test_cli_equivalence(capsys):
    assert cli_main(["equivalence", "--omega", "1", "--xi", "4.8"]) == 0
    out = capsys.readouterr().out
    assert "max residual" in out and "ok" in out


def test_cli_shifts(capsys):
    assert cli_main(["shifts"]) == 0
    out = capsys.readouterr().out
    delta = float([l for l in out.splitlines()
                   if l.startswith("delta =")][0].split("=")[1])
    assert delta == pytest.approx(-1416.368640344262, rel=1e-6)
