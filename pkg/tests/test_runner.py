import numpy as np
import pytest
import simplejson as json
import yaml

from susykink import KinkSimulator, NumericalError, cli
from susykink.model import pinned_ground_state
from susykink.modules.operators import build_observable
from susykink.runner import (
    FIGURES,
    OUTPUT_DIR_ENV,
    ResultBundle,
    RunConfig,
    RunTracker,
    Table,
    build_run_config,
    parse_overrides,
    parse_quantity,
    run,
    table_to_csv,
    write_bundle,
)


@pytest.fixture(autouse=True)
def no_output_env(monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)


def test_parse_quantity():
    assert parse_quantity("10MHz") == pytest.approx(1e7)
    assert parse_quantity("2.5 kHz") == pytest.approx(2.5e3)
    assert parse_quantity("645GHz") == pytest.approx(6.45e11)
    assert parse_quantity(3.0) == 3.0
    with pytest.raises(ValueError):
        parse_quantity("ten")


def test_parse_overrides_routes_keys_to_sections():
    out = parse_overrides(["l=4", "lambda=0.5", "model.boundary=periodic", "t_max=12", "Omega=10MHz"])
    assert out["model"] == {"l": 4, "lam": 0.5, "boundary": "periodic"}
    assert out["dynamics"] == {"t_max": 12}
    assert out["rydberg"] == {"Omega": "10MHz"}
    with pytest.raises(ValueError):
        parse_overrides(["nonsense=1"])
    with pytest.raises(ValueError):
        parse_overrides(["l4"])
    with pytest.raises(ValueError):
        parse_overrides(["physics.l=4"])


def test_overrides_win_over_yaml(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump({"command": "quench", "model": {"l": 3, "lambda": 0.5}, "dynamics": {"t_max": 8}}))
    config = build_run_config("quench", path, ["lambda=0.9"])
    assert config.model.l == 3
    assert config.model.lam == 0.9
    assert config.dynamics.t_max == 8
    assert config.rydberg.Omega == 10e6


def test_config_echo_round_trip():
    config = build_run_config("rydberg-quench", overrides=["Omega=5MHz", "atoms=4"])
    assert config.rydberg.Omega == pytest.approx(5e6)
    assert RunConfig.model_validate(config.echo()) == config


@pytest.mark.parametrize(
    "command, overrides",
    [
        ("quench", ["lambda=1.5"]),
        ("kink-profile", ["l=3", "j=6"]),
        ("rydberg-quench", ["sites=13"]),
        ("quench", ["t_max=-1"]),
        ("quench", ["method=rk4"]),
    ],
)
def test_invalid_configurations(command, overrides):
    with pytest.raises(ValueError):
        build_run_config(command, overrides=overrides)


def test_csv_layout():
    table = Table("demo", ["t", "label", "value"], ["1/J", "-", "-"])
    table.add_row(0.1, "a", np.float64(1 / 3))
    text = table_to_csv(table, "quench")
    lines = text.splitlines()
    assert lines[:4] == ["# command: quench", "# table: demo", "# units: 1/J,-,-", "t,label,value"]
    assert lines[4] == "0.10000000000000001,a,0.33333333333333331"
    with pytest.raises(ValueError):
        table.add_row(1.0)


def test_write_bundle(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "env"))
    config = build_run_config("budget", overrides=["stem=demo"])
    bundle = ResultBundle("budget")
    bundle.add(Table("rows", ["x"], ["-"])).add_row(1.5)
    bundle.metadata["note"] = np.array([1.0, float("nan")])
    written = write_bundle(bundle, config)
    assert written["tables"] == [tmp_path / "env" / "demo_rows.csv"]
    meta = json.loads((tmp_path / "env" / "demo.json").read_text())
    assert meta["note"] == [1.0, None]
    assert meta["config"]["command"] == "budget"
    assert meta["tables"]["rows"]["rows"] == 1


def test_budget_run_end_to_end(tmp_path):
    config = build_run_config("budget", overrides=["delta_ratios=[5, 10]"])
    config.output.directory = str(tmp_path)
    bundle = run(config, RunTracker(quiet=True))
    table = bundle.tables["budget"]
    assert len(table.rows) == 6
    assert bundle.metadata["reference_L_max"] == pytest.approx(200.0, rel=0.2)
    assert bundle.metadata["warnings"] == []


def test_quench_run_tables():
    config = build_run_config("quench", overrides=["l=2", "lambda=1", "t_max=5", "n_times=11"])
    bundle = run(config, RunTracker(quiet=True))
    table = next(iter(bundle.tables.values()))
    assert len(table.rows) == 11
    sq = table.column("overlap_sq")
    np.testing.assert_allclose(sq, table.column("overlap_sq_propagated"), atol=1e-10)
    assert bundle.metadata["residuals"]["norm_drift"] < 1e-9


def test_cli_writes_spectrum(tmp_path, capsys):
    code = cli.main(["spectrum", "L=7", "lambda=1", "--output-dir", str(tmp_path), "--quiet"])
    assert code == cli.EXIT_OK
    assert (tmp_path / "spectrum_spectrum.csv").exists()
    assert (tmp_path / "spectrum_pairing.csv").exists()
    meta = json.loads((tmp_path / "spectrum.json").read_text())
    assert meta["residuals"]["nilpotency"] < 1e-12
    assert capsys.readouterr().out == ""


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "L=7", "lambda=2"],
        ["spectrum", "colour=red"],
        ["quench", "--config", "missing.yaml"],
    ],
)
def test_cli_configuration_errors(argv, tmp_path, capsys):
    code = cli.main(argv + ["--output-dir", str(tmp_path), "-q"])
    assert code == cli.EXIT_CONFIG
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["exit_code"] == cli.EXIT_CONFIG
    assert record["command"] == argv[0]


def test_cli_numerical_failure(tmp_path, monkeypatch, capsys):
    def failing(config, tracker):
        raise NumericalError("Lanczos did not converge", residuals=[1e-3])

    monkeypatch.setattr(cli, "run", failing)
    code = cli.main(["budget", "--output-dir", str(tmp_path), "-q"])
    assert code == cli.EXIT_NUMERIC
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["error"] == "NumericalError"


def test_cli_rejects_unknown_command():
    with pytest.raises(SystemExit):
        cli.main(["train"])


def test_coefficients_run_tables():
    config = build_run_config("coefficients", overrides=["ls=[3]", "lambda=1"])
    bundle = run(config, RunTracker(quiet=True))
    table = bundle.tables["coefficients"]
    assert [row[1] for row in table.rows] == ["dn", "dn3", "dnbar"]
    alpha, beta = table.rows[0][2:]
    assert alpha == pytest.approx(1.08, abs=0.02)
    assert beta == pytest.approx(1.09, abs=0.02)


def test_tail_fidelity_run_tables():
    config = build_run_config("tail-fidelity", overrides=["ls=[2]", "lams=[0.5, 0.75, 1.0]"])
    bundle = run(config, RunTracker(quiet=True))
    fidelity = bundle.tables["fidelity"]
    assert len(fidelity.rows) == 6
    assert np.all((fidelity.column("fidelity") > 0) & (fidelity.column("fidelity") <= 1 + 1e-12))
    assert [row[0] for row in bundle.tables["max_slope"].rows] == ["single", "double"]
    errors = bundle.tables["error_at_criticality"].column("one_minus_fidelity")
    np.testing.assert_allclose(errors, 1.0 - fidelity.column("fidelity")[[2, 5]])


def test_supplementary_figures_are_registered():
    assert {"S1", "S2", "S4"} <= set(FIGURES)
    config = build_run_config("figures", overrides=["fig=S1"])
    bundle = run(config, RunTracker(quiet=True))
    assert sorted(bundle.tables) == [f"figS1_{i}_profile" for i in range(6)]


@pytest.mark.parametrize("start", ["pinned", "exact"])
def test_rydberg_quench_initial_state(start):
    overrides = [
        "sites=7",
        "atoms=2",
        "variants=[hq_reference]",
        "rydberg_t_max=2",
        "rydberg_n_times=5",
        f"rydberg_init={start}",
    ]
    bundle = run(build_run_config("rydberg-quench", overrides=overrides), RunTracker(quiet=True))
    assert bundle.metadata["initial_state"] == f"{start}-kink"
    dn = bundle.tables["rydberg"].column("hq_reference_dn")
    sim = KinkSimulator(2, 1.0)
    if start == "exact":
        assert dn[0] == pytest.approx(0.0, abs=1e-9)
    else:
        pinned = pinned_ground_state(2, 1.0, "kink", 1, basis=sim.basis).vector
        coeffs = sim.observable_coeffs("dn")
        expected = build_observable("dn", sim.space(), coeffs).expectation(pinned)
        assert dn[0] == pytest.approx(expected, abs=1e-9)
