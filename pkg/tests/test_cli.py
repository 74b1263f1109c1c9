import io
import json
import subprocess
import sys

import pytest

from supertruss import GF, builtin
from supertruss.cli import run
from supertruss.cli.app import execute, shipped_file
from supertruss.cli.stx import parse_morphism, parse_stx, render_morphism, render_stx
from supertruss.cotruss import BUILTINS, reduce
from supertruss.errors import StxError


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


class TestFiles:
    @pytest.mark.parametrize("name", sorted(BUILTINS))
    def test_twins_equal_builtins(self, name):
        assert parse_stx(shipped_file(name)) == builtin(name)

    @pytest.mark.parametrize("name", sorted(BUILTINS) + ["poly_theta_mutated"])
    def test_round_trip(self, name):
        P = parse_stx(shipped_file(name))
        assert parse_stx(render_stx(P)) == P

    def test_field_override(self):
        assert parse_stx(shipped_file("poly_theta"), field=GF(3)) == builtin("poly_theta", GF(3))

    def test_fp_header(self):
        text = shipped_file("poly_theta").replace("scalar QQ", "scalar FP 5")
        assert parse_stx(text).field == GF(5)


def positioned(text):
    with pytest.raises(StxError) as e:
        parse_stx(text)
    return e.value


HEAD = "scalar QQ\ngen x even\ngen theta odd\n"


class TestErrors:
    def test_odd_invertible(self):
        err = positioned("scalar QQ\ngen theta odd invertible ti\n")
        assert err.line == 2 and "odd" in err.message

    def test_arity(self):
        err = positioned(HEAD + "delta2\n  x -> x # x\n  theta -> x # theta + theta # x\ndelta3\n  x -> x # x\n")
        assert (err.line, err.column) == (8, 8)
        assert err.message == "term has 2 tensor factor(s), block needs 3"

    def test_syntax(self):
        err = positioned(HEAD + "delta2\n  x -> x # # x\n")
        assert err.line == 5 and err.column == 12

    def test_unknown_generator(self):
        err = positioned(HEAD + "delta2\n  x -> y # x\n")
        assert err.line == 5

    def test_parity_violation_has_line(self):
        text = HEAD + "delta2\n  x -> x # x\n  theta -> x # x\ndelta3\n  x -> x # 1 # 1\n  theta -> theta # 1 # 1\n"
        err = positioned(text)
        assert err.line == 6 and "theta" in err.message

    def test_missing_block(self):
        err = positioned(HEAD + "delta2\n  x -> x # x\n  theta -> x # theta + theta # x\n")
        assert "delta3" in err.message


class TestCommands:
    def test_check_pass(self):
        code, out, _ = cli("check", "builtin:poly_theta")
        assert code == 0 and out.rstrip().endswith("verdict: PASS")

    def test_check_mutated(self, tmp_path):
        f = tmp_path / "m.stx"
        f.write_text(shipped_file("poly_theta_mutated"))
        code, out, _ = cli("check", str(f))
        assert code == 1
        assert "FAIL Con2" in out and "on theta:" in out

    def test_input_errors(self, tmp_path):
        assert cli("check", "builtin:nope")[0] == 2
        assert cli("check", str(tmp_path / "missing.stx"))[0] == 2
        assert cli("check", "builtin:poly_theta", "--field", "fp:4")[0] == 2
        assert cli("frobnicate")[0] == 2
        bad = tmp_path / "bad.stx"
        bad.write_text("scalar QQ\ngen theta odd invertible ti\n")
        code, _, err = cli("check", str(bad))
        assert code == 2 and "line 2" in err

    def test_json_is_deterministic(self):
        argv = ("points", "builtin:poly_theta", "--field", "fp:3", "--grassmann", "1", "--exhaustive", "--json")
        a, b = cli(*argv), cli(*argv)
        assert a == b
        report = json.loads(a[1])
        assert report["schema_version"] == 1 and report["verdict"] == "pass"
        assert "seconds" not in report
        assert list(report)[:5] == ["schema_version", "tool", "command", "argv", "verdict"]

    def test_timing_flag(self):
        code, report = execute(["check", "builtin:trivial", "--timing"])
        assert code == 0 and "seconds" in report

    def test_samples_mode(self):
        code, out, _ = cli("points", "builtin:laurent_theta", "--grassmann", "2", "--samples", "5", "--seed", "1")
        assert code == 0 and "samples(N=5, seed=1)" in out

    def test_exhaustive_needs_finite_field(self):
        assert cli("points", "builtin:poly_theta", "--exhaustive")[0] == 2

    def test_budget(self):
        code, _, err = cli("points", "builtin:poly_theta", "--field", "fp:3", "--exhaustive", "--budget", "100")
        assert code == 2 and "budget" in err

    def test_ybe(self):
        common = ("--field", "fp:3", "--grassmann", "1", "--exhaustive")
        code, out, _ = cli("ybe", "builtin:poly_theta", "--map", "superflip", *common)
        assert code == 0 and "729 triples checked" in out
        code, out, _ = cli("ybe", "builtin:poly_theta", "--map", "left-action", *common)
        assert code == 1 and "FAIL braid relation" in out and "FAIL YB1" in out
        code, out, _ = cli("ybe", "builtin:laurent_theta", "--map", "odd-scaling", "--q", "2", *common)
        assert code == 0

    def test_ybe_precondition_is_input_error(self):
        assert cli("ybe", "builtin:poly_theta", "--map", "inverse-map", "--field", "fp:3", "--grassmann", "1",
                   "--exhaustive")[0] == 2

    def test_reduce(self, tmp_path):
        out_file = tmp_path / "red.stx"
        code, out, _ = cli("reduce", "builtin:poly_theta", "-o", str(out_file))
        assert code == 0 and "wrote" in out
        assert parse_stx(out_file.read_text()) == reduce(builtin("poly_theta"))

    def test_morphism(self, tmp_path):
        src = tmp_path / "pt.stx"
        src.write_text(shipped_file("poly_theta"))
        alpha = tmp_path / "alpha.phi"
        alpha.write_text("x -> x\ntheta -> -theta\n")
        assert cli("morphism", str(alpha), str(src), str(src))[0] == 0
        double = tmp_path / "double.phi"
        double.write_text("x -> 2*x\ntheta -> theta\n")
        code, out, _ = cli("morphism", str(double), str(src), str(src))
        assert code == 1 and "FAIL delta2" in out
        unit = tmp_path / "unit.phi"
        unit.write_text("x -> 1\ntheta -> 0\n")
        assert cli("morphism", str(unit), str(src), "builtin:trivial")[0] == 0
        odd = tmp_path / "odd.phi"
        odd.write_text("x -> theta\ntheta -> theta\n")
        code, _, err = cli("morphism", str(odd), str(src), str(src))
        assert code == 2 and "line 1" in err

    def test_morphism_round_trip(self):
        P = builtin("poly_theta")
        phi = parse_morphism("x -> x\ntheta -> -theta\n", P, P)
        assert parse_morphism(render_morphism(phi), P, P) == phi


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "supertruss", "check", "builtin:trivial"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "verdict: PASS" in proc.stdout
