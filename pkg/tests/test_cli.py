"""End-to-end command-line behavior: parsing, formats, exit codes."""

import json

import numpy as np
import pytest

import hypocomp as hc
from hypocomp import cli
from hypocomp.errors import ConvergenceFailureError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


class TestParsers:
    def test_complex_forms(self):
        assert cli.parse_complex("i") == 1j
        assert cli.parse_complex("-i") == -1j
        assert cli.parse_complex("0.5") == 0.5
        assert cli.parse_complex("1+2i") == 1 + 2j
        assert cli.parse_complex("0.3-0.4j") == 0.3 - 0.4j

    def test_map_forms(self):
        assert hc.map_distance(cli.parse_map("1,0,1,2"), hc.MoebiusMap(1, 0, 1, 2)) < 1e-15
        assert hc.map_distance(cli.parse_map("rotation:i"), hc.rotation(1j)) < 1e-15
        assert hc.map_distance(cli.parse_map("parabolic:1,1"), hc.cayley_parabolic(1, 1)) < 1e-15
        assert hc.map_distance(cli.parse_map("hyperbolic-nonauto:0.5"), hc.MoebiusMap(1, 0, 1, 2)) < 1e-15
        nf = hc.normal_form(0.3, 0.4, 1, hc.hardy())
        assert hc.map_distance(cli.parse_map("normal-form:0.3,0.4"), nf.phi) < 1e-14

    def test_weight_forms(self):
        space = hc.hardy()
        phi = cli.parse_map("1,0,1,2")
        poly = cli.parse_weight("3,2,-3", phi, space)
        assert abs(poly(1) - 2) < 1e-14
        rat = cli.parse_weight("1,1/3,-1", phi, space)
        assert abs(rat(0.5) - 1.5 / 2.5) < 1e-14
        kq = cli.parse_weight("kernel-quotient:0,2", phi, space)
        assert abs(kq(0.3) - 2) < 1e-13


class TestClassifyCommand:
    def test_parabolic(self, capsys):
        code, rep = run_json(capsys, "classify", "--map", "parabolic:1,1")
        assert code == 0
        assert rep["map_class"] == "parabolic-nonautomorphism"
        assert rep["verdict"]["outcome"] == "NotHyponormal"

    def test_rotation(self, capsys):
        code, rep = run_json(capsys, "classify", "--map", "rotation:i")
        assert code == 0
        assert rep["map_class"] == "elliptic-automorphism"
        assert rep["verdict"]["outcome"] == "Normal"

    def test_candidate(self, capsys):
        code, rep = run_json(capsys, "classify", "--map", "hyperbolic-nonauto:0.5")
        assert code == 0
        assert rep["verdict"]["outcome"] == "CandidateNotExcluded"

    def test_parse_failure_exit_2(self, capsys):
        assert cli.main(["classify", "--map", "garbage:1"]) == 2


class TestCheckCommand:
    def test_worked_example(self, capsys):
        code, rep = run_json(capsys, "check", "--psi", "3,2,-3", "--map", "parabolic:1,1",
                             "--space", "hardy")
        assert code == 0
        assert rep["verdict"]["outcome"] == "NotHyponormal"
        assert "kernel norm-ratio" in rep["verdict"]["citation"]

    def test_kernel_quotient_normal(self, capsys):
        code, rep = run_json(capsys, "check", "--psi", "kernel-quotient:0.3,1",
                             "--map", "normal-form:0.3,0.4")
        assert code == 0
        assert rep["verdict"]["outcome"] == "Normal"

    def test_candidate_with_bounds(self, capsys):
        code, rep = run_json(capsys, "check", "--psi", "1", "--map", "1,0,1,2")
        assert code == 0
        assert rep["verdict"]["outcome"] == "CandidateNotExcluded"
        assert rep["spectral"]["norm_lower"] == pytest.approx(2 ** -0.5)
        assert rep["spectral"]["norm_upper"] == pytest.approx(1.0)

    def test_zero_weight_exit_2(self, capsys):
        assert cli.main(["check", "--psi", "0", "--map", "1,0,1,2"]) == 2

    def test_escalation_attaches_witness(self, capsys):
        code, rep = run_json(capsys, "check", "--psi", "2,1", "--map", "1,0.5,0.5,1",
                             "--escalate", "--budget", "15", "--order", "64")
        assert code == 0
        if rep["verdict"]["outcome"] == "CertifiedNotNumeric":
            w = rep["verdict"]["witness"]
            assert w["adjoint_norm"] > w["forward_norm"]


class TestSpectralCommand:
    def test_parabolic_weighted(self, capsys):
        code, rep = run_json(capsys, "spectral", "--psi", "0.5,-0.25", "--map", "parabolic:1,1")
        assert code == 0
        assert rep["spectral"]["r"] == pytest.approx(0.25)

    def test_hyperbolic_automorphism(self, capsys):
        code, rep = run_json(capsys, "spectral", "--psi", "1", "--map", "1,0.5,0.5,1")
        assert code == 0
        assert rep["spectral"]["r_e"] == pytest.approx(3 ** 0.5)
        code, rep = run_json(capsys, "spectral", "--psi", "1", "--map", "1,0.5,0.5,1",
                             "--space", "bergman:0")
        assert rep["spectral"]["r_e"] == pytest.approx(3.0)

    def test_dilation_with_numeric(self, capsys):
        code, rep = run_json(capsys, "spectral", "--psi", "1", "--map", "0.5,0,0,1",
                             "--numeric", "--order", "24")
        assert code == 0
        assert rep["spectral"]["r"] == pytest.approx(1.0)
        assert any("advisory" in d for d in rep["diagnostics"])

    def test_require_all_exit_3(self, capsys):
        # z/(z+2): both radii unavailable (interior Denjoy-Wolff, candidate only)
        code, _ = run_json(capsys, "spectral", "--psi", "1", "--map", "1,0,1,2",
                           "--require-all")
        assert code == 3

    def test_dump_files(self, capsys, tmp_path):
        mpath = tmp_path / "m.csv"
        epath = tmp_path / "e.csv"
        code, _ = run_json(capsys, "spectral", "--psi", "1", "--map", "0.5,0,0,1",
                           "--numeric", "--order", "16",
                           "--dump-matrix", str(mpath), "--dump-eigs", str(epath))
        assert code == 0
        assert mpath.read_text().splitlines()[0] == "n,j,re,im"
        assert epath.read_text().splitlines()[0] == "k,re,im"


class TestConvergenceExit:
    def test_exit_4(self, capsys, monkeypatch):
        def boom(*a, **k):
            raise ConvergenceFailureError("stalled", iterations=10, residual=1.0)

        monkeypatch.setattr(cli.matrixrep, "operator_norm", boom)
        code = cli.main(["spectral", "--psi", "1", "--map", "0.5,0,0,1",
                         "--numeric", "--order", "16"])
        assert code == 4


class TestOutputContracts:
    def test_json_roundtrip_all_commands(self, capsys):
        for argv in (
            ["classify", "--map", "rotation:i"],
            ["check", "--psi", "1", "--map", "1,0,1,2"],
            ["spectral", "--psi", "0.5,-0.25", "--map", "parabolic:1,1"],
            ["selftest", "--space", "bergman:0"],
        ):
            _, out = run(capsys, *argv, "--format", "json")
            rep = json.loads(out)
            assert json.loads(json.dumps(rep)) == rep

    def test_schema_keys(self, capsys):
        _, rep = run_json(capsys, "check", "--psi", "1", "--map", "1,0,1,2")
        assert set(rep) == {"input", "space", "map_class", "verdict", "spectral",
                            "diagnostics", "wall_time_ms"}
        assert {"outcome", "citation", "details"} <= set(rep["verdict"])
        assert {"r", "r_e", "norm_lower", "norm_upper", "citations"} == set(rep["spectral"])

    def test_deterministic_modulo_walltime(self, capsys):
        reps = []
        for _ in range(2):
            _, rep = run_json(capsys, "check", "--psi", "0.5,-0.25", "--map", "parabolic:1,1")
            rep.pop("wall_time_ms")
            reps.append(json.dumps(rep, sort_keys=True))
        assert reps[0] == reps[1]

    def test_csv_format(self, capsys):
        code, out = run(capsys, "classify", "--map", "rotation:i", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "field,value"
        assert any(line.startswith("verdict.outcome,") for line in lines)

    def test_json_flag_shorthand(self, capsys):
        code, out = run(capsys, "classify", "--map", "rotation:i", "--json")
        assert code == 0
        assert json.loads(out)["verdict"]["outcome"] == "Normal"

    def test_order_cap_env(self, capsys, monkeypatch):
        monkeypatch.setenv("HYPOCOMP_MAX_N", "32")
        code = cli.main(["spectral", "--psi", "1", "--map", "0.5,0,0,1",
                         "--numeric", "--order", "64"])
        assert code == 2


class TestSelftest:
    def test_default_battery_passes(self, capsys):
        code, rep = run_json(capsys, "selftest")
        assert code == 0
        assert rep["passed_count"] == rep["total_count"]
        assert rep["total_count"] >= 10

    def test_space_override(self, capsys):
        code, rep = run_json(capsys, "selftest", "--space", "bergman:1")
        assert code == 0
        assert rep["passed_count"] == rep["total_count"]
        assert "bergman:1" in rep["input"]["spaces"]
