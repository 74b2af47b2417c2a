"""End-to-end tests of the command-line interface."""
import json
import pathlib
import re

import jsonschema
import pytest

from isingmaps.cli import main, parse_rational, polynomial_string

SCHEMA_PATH = pathlib.Path(__file__).resolve().parent.parent / "schemas" / "output.schema.json"
SCHEMA = json.loads(SCHEMA_PATH.read_text())


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    payload = json.loads(out)
    jsonschema.validate(payload, SCHEMA)
    return code, payload


class TestParsing:
    def test_rational_forms(self):
        from fractions import Fraction
        assert parse_rational("2/405") == Fraction(2, 405)
        assert parse_rational("1.05") == Fraction(21, 20)
        assert parse_rational("4") == 4

    def test_rejects_garbage(self):
        import argparse
        with pytest.raises(argparse.ArgumentTypeError):
            parse_rational("4.0.5")

    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["radius", "--bogus"])
        assert exc.value.code == 2


class TestCoeffs:
    def test_symbolic_printed_expansion(self, capsys):
        code, payload = run_json(capsys, "coeffs", "--symbolic", "--n-max", "3")
        assert code == 0
        rows = payload["result"]["coefficients"]
        assert rows[0]["value"] == "2*nu^2*c"
        assert rows[1]["value"] == "9*nu^4*c^2 + 8*nu^2 + 1"
        assert rows[2]["n"] == 3

    def test_exact_point_evaluation(self, capsys):
        code, payload = run_json(capsys, "coeffs", "--nu", "2", "--c", "1",
                                 "--n-max", "5")
        assert code == 0
        rows = payload["result"]["coefficients"]
        assert rows[1]["value"] == "177"

    def test_numeric_mode_refuses_nu_one(self, capsys):
        code, payload = run_json(capsys, "coeffs", "--nu", "1", "--c", "1",
                                 "--numeric")
        assert code == 1
        assert payload["error"]["type"] == "NumericModeAtNuOne"

    def test_csv_sequence(self, capsys):
        code, out = run_cli(capsys, "coeffs", "--nu", "2", "--c", "1",
                            "--n-max", "3", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,value"
        assert lines[1] == "1,8"
        assert lines[2] == "2,177"


class TestEnumerate:
    def test_single_vertex(self, capsys):
        code, payload = run_json(capsys, "enumerate", "--n", "1")
        assert code == 0
        result = payload["result"]
        assert result["partition_polynomial"] == "2*nu^2*c"
        assert result["maps"] == 2

    def test_matches_series_solver(self, capsys):
        code, payload = run_json(capsys, "enumerate", "--n", "3")
        brute = payload["result"]["partition_polynomial"]
        _, coeffs = run_json(capsys, "coeffs", "--symbolic", "--n-max", "3")
        assert brute == coeffs["result"]["coefficients"][2]["value"]

    def test_size_bound(self, capsys):
        code, payload = run_json(capsys, "enumerate", "--n", "5")
        assert code == 1
        assert payload["error"]["type"] == "EnumerationBound"


class TestRadius:
    def test_critical_point_exact(self, capsys):
        code, payload = run_json(capsys, "radius", "--nu", "4", "--c", "1")
        assert code == 0
        result = payload["result"]
        assert result["rho"] == "2/405"
        assert result["mu"] == "2/405"
        assert result["s_at_rho"] == "1/45"
        assert result["exponent"] == "1/3"
        assert result["exact"] is True

    def test_sweep_csv_columns(self, capsys):
        code, out = run_cli(capsys, "radius", "--nu", "1/4,5", "--c", "1",
                            "--format", "csv", "--no-exponent")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "nu,c,rho,mu,exponent"
        assert lines[1].startswith("1/4,1,256/2025,256/2025")
        assert lines[2].startswith("5,1,67/20736,67/20736")

    def test_parallel_sweep_is_deterministic(self, capsys):
        args = ("radius", "--nu", "1/4,5", "--c", "1,19/20", "--no-exponent")
        _, serial = run_cli(capsys, *args, "--jobs", "1")
        _, parallel = run_cli(capsys, *args, "--jobs", "2")
        strip = lambda text: re.sub(r'"elapsed_seconds": [0-9.e-]+', "", text)
        assert strip(serial) == strip(parallel).replace('"jobs": 2', '"jobs": 1')

    def test_far_field_guard(self, capsys):
        code, payload = run_json(capsys, "radius", "--nu", "2", "--c", "3/2")
        assert code == 2
        assert "validated" in payload["error"]["message"]
        code, payload = run_json(capsys, "radius", "--nu", "2", "--c", "3/2",
                                 "--allow-far-field", "--no-exponent")
        assert code == 0
        assert payload["meta"]["warnings"]


class TestPuiseux:
    def test_cube_root_at_critical_point(self, capsys):
        code, payload = run_json(capsys, "puiseux", "--nu", "4", "--c", "1",
                                 "--max-terms", "2")
        assert code == 0
        result = payload["result"]
        assert result["exponent"] == "1/3"
        assert result["exact_center"] is True
        assert result["rho"] == "2/405"
        ramifications = {b["ramification"] for b in result["branches"]}
        assert 3 in ramifications

    def test_square_root_generic(self, capsys):
        code, payload = run_json(capsys, "puiseux", "--nu", "2", "--c", "1",
                                 "--max-terms", "1")
        assert code == 0
        assert payload["result"]["exponent"] == "1/2"


class TestObservables:
    def test_closed_forms_at_critical_coupling(self, capsys):
        code, payload = run_json(capsys, "observables", "--nu", "5", "--c", "1")
        assert code == 0
        result = payload["result"]
        assert result["M0"] == "45/67"
        assert result["chi"] == "inf"

    def test_finite_size(self, capsys):
        code, payload = run_json(capsys, "observables", "--nu", "1", "--c", "1",
                                 "--n", "2")
        assert code == 0
        assert payload["result"]["M"] == "1/2"

    def test_csv_unsupported(self, capsys):
        code, out = run_cli(capsys, "observables", "--nu", "5", "--c", "1",
                            "--format", "csv")
        assert code == 2


class TestExponentFit:
    def test_short_run_reports_fields(self, capsys):
        code, payload = run_json(capsys, "exponent-fit", "--nu", "2", "--c", "1",
                                 "--n-max", "80", "--precision-bits", "96")
        assert code == 0
        result = payload["result"]
        alpha = float(result["alpha_exponent"])
        assert 2.0 < alpha < 3.0
        assert result["n_range"] == [10, 80]
        assert "amplitude" in result and "residual" in result


class TestCheck:
    def test_battery_passes(self, capsys):
        code, payload = run_json(capsys, "check")
        assert code == 0
        assert payload["result"]["ok"] is True
        names = {c["name"] for c in payload["result"]["checks"]}
        assert {"branch_continuity", "discriminant_divisibility",
                "sturm_single_root", "singular_exponents"} <= names


class TestEnvelope:
    def test_determinism_modulo_timing(self, capsys):
        _, first = run_cli(capsys, "radius", "--nu", "4", "--c", "1")
        _, second = run_cli(capsys, "radius", "--nu", "4", "--c", "1")
        strip = lambda text: re.sub(r'"elapsed_seconds": [0-9.e-]+', "", text)
        assert strip(first) == strip(second)

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "radius.json"
        code, _ = run_cli(capsys, "radius", "--nu", "4", "--c", "1",
                          "--out", str(target))
        assert code == 0
        payload = json.loads(target.read_text())
        jsonschema.validate(payload, SCHEMA)
        assert payload["result"]["rho"] == "2/405"

    def test_env_var_precision(self, capsys, monkeypatch):
        monkeypatch.setenv("ISINGMAPS_PRECISION", "96")
        code, payload = run_json(capsys, "observables", "--nu", "5", "--c", "1")
        assert code == 0
        assert payload["meta"]["precision_bits"] == 96

    def test_error_envelope_validates(self, capsys):
        _, payload = run_json(capsys, "enumerate", "--n", "9")
        assert "error" in payload


class TestPolynomialString:
    def test_laurent_and_signs(self):
        from isingmaps.exactalg import ParamPoly
        p = ParamPoly({(2, -1): 3, (0, 0): -1})
        assert polynomial_string(p) == "3*nu^2*c^-1 - 1"

    def test_zero(self):
        from isingmaps.exactalg import ParamPoly
        assert polynomial_string(ParamPoly()) == "0"
