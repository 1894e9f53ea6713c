"""
CLI Tests
Run configuration, file formats and the click commands on a small grid.
"""

from pathlib import Path

import numpy as np
import orjson
import pandas as pd
import pytest
from click.testing import CliRunner
from pydantic import ValidationError

from src.cli.commands import cli
from src.cli.io import (dumps_report, read_boundary_csv, read_field_csv, write_field_csv, write_table,
                        write_trace_csv)
from src.cli.run_config import CoefficientSpec, RunConfig, apply_override
from src.grid.circle import BoundarySpectrum, CircleGrid
from src.grid.fields import DiskField
from src.grid.radial import RadialRule
from src.utils.errors import ConfigurationError

SMALL = ("--set", "grid.n_theta=32", "--set", "grid.radial_panels=2", "--set", "grid.nodes_per_panel=6")


def _invoke(tmp_path, *args):
    return CliRunner().invoke(cli, [*SMALL, "--output-dir", str(tmp_path), *args])


def _json(output: str) -> dict:
    return orjson.loads(output[output.index("{"):])


# ==================== RUN CONFIG ====================

def test_apply_override_nested_keys():
    data = apply_override({}, "grid.n_theta=64")
    apply_override(data, "coefficient.expression=0.1*x")
    apply_override(data, "oracle=true")

    assert data == {"grid": {"n_theta": 64}, "coefficient": {"expression": "0.1*x"}, "oracle": True}
    with pytest.raises(ConfigurationError):
        apply_override(data, "grid.n_theta")
    with pytest.raises(ConfigurationError):
        apply_override(data, "grid.n_theta.value=3")


def test_run_config_json_round_trip():
    run = RunConfig.load(overrides=["grid.n_theta=64", "coefficient.kind=\"radial\"",
                                    "coefficient.expression=\"1 + r**2/2\"", "solver.p=3.0"])

    assert RunConfig.from_json(run.to_json()) == run
    assert run.solver.q == pytest.approx(1.5)


def test_run_config_validation():
    with pytest.raises(ValidationError):
        RunConfig.load(overrides=["grid.n_theta=48"])
    with pytest.raises(ValidationError):
        RunConfig.load(overrides=["unknown=1"])
    with pytest.raises(ValidationError):
        CoefficientSpec(kind="expression")


def test_run_config_missing_file(tmp_path):
    with pytest.raises(ConfigurationError):
        RunConfig.load(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigurationError):
        RunConfig.load(bad)


# ==================== FILE FORMATS ====================

def test_boundary_csv_real_and_complex(tmp_path):
    grid = CircleGrid(16)
    write_table(pd.DataFrame({"theta": grid.theta, "value": np.cos(grid.theta)}), tmp_path / "real.csv")
    write_trace_csv(BoundarySpectrum.from_samples(grid.points, grid), tmp_path / "complex.csv")

    real = read_boundary_csv(tmp_path / "real.csv", grid)
    assert real.is_real_valued
    assert real.coeff(1) == pytest.approx(0.5)
    complex_ = read_boundary_csv(tmp_path / "complex.csv", grid)
    assert complex_.coeff(1) == pytest.approx(1.0)
    with pytest.raises(ConfigurationError):
        read_boundary_csv(tmp_path / "real.csv", CircleGrid(32))


def test_field_csv_layout(tmp_path):
    grid, rule = CircleGrid(16), RadialRule(2, 4)
    f = DiskField.from_callable(lambda z: z + 1j, grid, rule)
    path = write_field_csv(f, tmp_path / "field.csv")
    table = pd.read_csv(path)

    assert list(table.columns) == ["r", "theta", "re", "im"]
    assert len(table) == (rule.n_radial + 1) * grid.n_theta
    assert (table["r"].iloc[-grid.n_theta:] == 1.0).all()
    back = read_field_csv(path, grid, rule)
    np.testing.assert_allclose(back.synthesize(), f.synthesize(), atol=1e-14)
    with pytest.raises(ConfigurationError):
        read_field_csv(path, grid, RadialRule(2, 5))


def test_dumps_report_plain_types():
    payload = orjson.loads(dumps_report({"z": 1 + 2j, "x": np.float64(1.5), "path": Path("out"),
                                         "flags": np.array([True, False])}))

    assert payload == {"z": {"re": 1.0, "im": 2.0}, "x": 1.5, "path": "out", "flags": [True, False]}


# ==================== COMMANDS ====================

def test_solve_writes_outputs(tmp_path):
    result = _invoke(tmp_path, "solve")

    assert result.exit_code == 0, result.output
    for name in ("field.csv", "trace.csv", "report.json"):
        assert (tmp_path / name).exists()
    report = orjson.loads((tmp_path / "report.json").read_bytes())
    assert "dirichlet" in report["stages"]
    trace = pd.read_csv(tmp_path / "trace.csv")
    np.testing.assert_allclose(trace["re"], np.cos(trace["theta"]), atol=1e-10)


def test_solve_with_radial_oracle(tmp_path):
    result = _invoke(tmp_path, "--set", "coefficient.kind=radial", "--set", "coefficient.expression=1 + r**2/2",
                     "--set", "oracle=true", "solve")

    assert result.exit_code == 0, result.output
    report = orjson.loads((tmp_path / "report.json").read_bytes())
    assert "radial_ode" in report["oracle"]


def test_solve_on_quadratic_domain(tmp_path):
    result = _invoke(tmp_path, "--set", "map.kind=quadratic", "--set", "map.eps=0.3",
                     "--set", "coefficient.kind=expression", "--set", "coefficient.expression=0.1*x",
                     "--set", "data.expression=x", "solve")

    assert result.exit_code == 0, result.output
    # phi = Re psi on the circle for psi(z) = z + 0.3 z^2
    trace = pd.read_csv(tmp_path / "trace.csv")
    np.testing.assert_allclose(trace["re"], np.cos(trace["theta"]) + 0.3 * np.cos(2 * trace["theta"]), atol=1e-10)
    cloud = pd.read_csv(tmp_path / "omega.csv")
    assert list(cloud.columns) == ["x", "y", "re", "im"]
    boundary = cloud.iloc[-32:]
    np.testing.assert_allclose(boundary["re"], boundary["x"], atol=1e-10)
    report = orjson.loads((tmp_path / "report.json").read_bytes())
    assert report["diagnostics"]["map"]["spec"]["kind"] == "quadratic"
    assert np.isfinite(report["diagnostics"]["map"]["pde_residual"]["relative"])


def test_solve_on_mapped_domain_rejects_radial_conductivity(tmp_path):
    result = _invoke(tmp_path, "--set", "map.kind=quadratic", "--set", "coefficient.kind=radial",
                     "--set", "coefficient.expression=1 + r**2/2", "solve")

    assert result.exit_code == 2
    assert not (tmp_path / "omega.csv").exists()


def test_hilbert_command(tmp_path):
    result = _invoke(tmp_path, "hilbert")

    assert result.exit_code == 0, result.output
    table = pd.read_csv(tmp_path / "hilbert.csv")
    np.testing.assert_allclose(table["value"], np.sin(table["theta"]), atol=1e-10)


def test_neumann_incompatible_data_exits_3(tmp_path):
    result = _invoke(tmp_path, "--set", "data.expression=\"1\"", "neumann")

    assert result.exit_code == 3


def test_bad_config_exits_2(tmp_path):
    missing = CliRunner().invoke(cli, ["--config", str(tmp_path / "missing.json"), "solve"])
    invalid = _invoke(tmp_path, "--set", "grid.n_theta=48", "solve")

    assert missing.exit_code == 2
    assert invalid.exit_code == 2


def test_verify_single_check(tmp_path):
    result = _invoke(tmp_path, "verify", "--only", "classical")

    assert result.exit_code == 0, result.output
    payload = _json(result.output)
    assert payload["passed"] is True
    assert list(payload["checks"]) == ["classical"]
    assert (tmp_path / "verify.json").exists()


def test_verify_operators_records_oracle_bound(tmp_path):
    result = _invoke(tmp_path, "--set", "seed=11", "verify", "--only", "operators")

    assert result.exit_code == 0, result.output
    check = _json(result.output)["checks"]["operators"]
    assert check["trials"] == 3
    assert check["oracle_singular_cell_bound"] > 0
    assert check["dbar_identity"] <= 1e-8


def test_op_conjugation_from_csv(tmp_path):
    grid = CircleGrid(32)
    source = write_table(pd.DataFrame({"theta": grid.theta, "value": np.cos(2 * grid.theta)}),
                         tmp_path / "phi.csv")
    result = _invoke(tmp_path, "op", "--name", "conjugation_h0", "--input", str(source))

    assert result.exit_code == 0, result.output
    table = pd.read_csv(tmp_path / "op.csv")
    np.testing.assert_allclose(table["re"], np.sin(2 * table["theta"]), atol=1e-12)


def test_op_area_operator_needs_field_input(tmp_path):
    result = _invoke(tmp_path, "op", "--name", "beurling")

    assert result.exit_code == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
