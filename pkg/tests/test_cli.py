import subprocess
import sys

import pytest

from sdquiver import cli, docfmt
from sdquiver.quiver import Rep, random_rep
from sdquiver.sheafbridge import ideal_sheaf_rep, lambda3, line_pencil


@pytest.fixture
def files(tmp_path):
    out = {}

    def put(name, doc):
        path = tmp_path / name
        docfmt.save(doc, path)
        out[name] = str(path)

    put("point", docfmt.rep_document(ideal_sheaf_rep((1, 2, 3)).rep, "bundle"))
    put("on", docfmt.rep_document(line_pencil((3, 0, -1)).rep, "pencil"))
    put("off", docfmt.rep_document(line_pencil((1, 1, 1)).rep, "pencil"))
    put("lam", docfmt.rep_document(lambda3().rep, "pencil"))
    put("scalars", docfmt.rep_document(Rep.scalars([1, 2, 3])))
    put("pencil2", docfmt.rep_document(random_rep(3, (2, 2), 1), "pencil"))
    put("cfg", docfmt.make("config", {"seed": 5, "r": 1, "d": 1, "samples_V": 3, "samples_W": 3,
                                      "schedule": [1, 2, 3]}))
    out["dir"] = tmp_path
    return out


def run(capsys, *argv):
    code = cli.run([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


class TestDrezetVerbs:
    def test_height(self, capsys):
        assert run(capsys, "height", 3, 0, 5)[:2] == (0, "2\n")

    def test_eps(self, capsys):
        code, out, _ = run(capsys, "eps", "3/8")
        assert code == 0
        assert out.splitlines() == ["slope 12/29", "rank 29", "delta 420/841"]

    def test_delta_and_posdim(self, capsys):
        assert run(capsys, "delta", "1/2")[1] == "5/8\n"
        assert run(capsys, "posdim", 2, 1, 2)[1] == "true\n"
        assert run(capsys, "posdim", 1, 0, 0)[1] == "false\n"

    def test_height_exact_rational(self, capsys):
        code, out, _ = run(capsys, "height", 2, 1, 1, "--json")
        assert code == 0 and docfmt.loads(out)["height"] == "-1"

    def test_depth_flag(self, capsys):
        assert run(capsys, "delta", "12/29", "--depth", 1)[0] == 1


class TestPairVerbs:
    def test_incidence(self, capsys, files):
        code, out, _ = run(capsys, "pair", files["point"], files["on"])
        lines = out.splitlines()
        assert code == 0 and lines[0] == "0"
        assert "h0=1" in out

    def test_off_line(self, capsys, files):
        code, out, _ = run(capsys, "pair", files["point"], files["off"])
        assert out.splitlines()[0] != "0" and "h0=0 h1=0" in out

    def test_reflect_roundtrip(self, capsys, files):
        code, out, _ = run(capsys, "reflect", files["scalars"], "--out", files["dir"] / "r.json")
        assert code == 0
        code, out, _ = run(capsys, "unreflect", files["dir"] / "r.json")
        back = docfmt.rep_from_document(docfmt.loads(out))
        assert back.dim.a1 == back.dim.a2 == 1

    def test_curve_and_ddual(self, capsys, files):
        assert run(capsys, "curve", files["on"])[1] == "(3)*x + (-1)*z\n"
        assert run(capsys, "curve", files["lam"])[1] == "0\n"
        assert run(capsys, "ddual", files["pencil2"])[0] == 0

    def test_stable(self, capsys, files):
        code, out, _ = run(capsys, "stable", files["scalars"], "--seed", 0, "--weight", "1,-1")
        assert code == 0 and out.split()[0] in ("Stable", "Semistable")

    def test_stable_needs_seed(self, capsys, files):
        assert run(capsys, "stable", files["scalars"])[0] == 2

    def test_strata(self, capsys, files):
        code, out, _ = run(capsys, "strata", files["point"])
        assert code == 0 and out.splitlines() == ["index 1", "hom_to_O 1", "rank 2"]
        code, out, _ = run(capsys, "strata", "--census", 1, "--samples", 3, "--seed", 2)
        assert code == 0 and "residual failures 0" in out
        assert run(capsys, "strata", "--census", 1)[0] == 1

    def test_coh(self, capsys, files):
        assert run(capsys, "coh", files["point"], "--twist", 1)[1] == "h0=2 h1=0 h2=0\n"
        assert run(capsys, "coh", files["point"], "--tensor", files["on"])[1] == "h0=1 h1=1\n"
        assert run(capsys, "coh", files["point"], "--tensor", files["lam"])[0] == 1


class TestExperiment:
    def test_pairing_is_byte_identical(self, capsys, files):
        a, b = files["dir"] / "a.json", files["dir"] / "b.json"
        assert run(capsys, "experiment", files["cfg"], "--out", a)[0] == 0
        assert run(capsys, "experiment", files["cfg"], "--out", b, "--workers", 2)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    @pytest.mark.parametrize("kind", ["vanishing", "census", "span"])
    def test_kinds(self, capsys, files, kind):
        assert run(capsys, "experiment", files["cfg"], "--kind", kind)[0] == 0

    def test_not_a_config(self, capsys, files):
        assert run(capsys, "experiment", files["point"])[0] == 2


class TestExitCodes:
    def test_contract(self, capsys, files):
        code, _, err = run(capsys, "pair", files["point"], files["point"])
        assert code == 1 and "!= 0" in err

    def test_parse(self, capsys, files):
        bad = files["dir"] / "bad.json"
        bad.write_text("{")
        assert run(capsys, "reflect", bad)[0] == 2
        assert run(capsys, "height", "x", 0, 1)[0] == 2
        assert run(capsys, "eps", "1/0")[0] == 2
        assert run(capsys)[0] == 2

    def test_not_dyadic(self, capsys):
        assert run(capsys, "eps", "1/3")[0] == 1


def test_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--only", 7, 9)
    assert code == 0 and out.count("[PASS]") == 2


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "sdquiver.cli", "height", "3", "0", "5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "2\n"
