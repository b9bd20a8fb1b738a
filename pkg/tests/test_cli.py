import io
import json
import subprocess
import sys

import pytest

from chrono_kh.cli import SCHEMA, main

from corpus import HOPF_NEG, LEFT_TREFOIL


def run(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_compute_json():
    code, out, _ = run("compute", "--pd", LEFT_TREFOIL, "--theory", "even", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["schema"] == SCHEMA
    ent = {(e["i"], e["j"]): e for e in obj["homology"]["entries"]}
    assert ent[(-2, -7)]["torsion"] == [2]


def test_compute_grid_text():
    code, out, _ = run("compute", "--pd", "PD[]", "--theory", "odd")
    assert code == 0 and out.startswith("odd")


def test_pd_from_file(tmp_path):
    p = tmp_path / "trefoil.pd"
    p.write_text(LEFT_TREFOIL + "\n", encoding="utf-8")
    a = run("compute", "--pd", str(p), "--json")[1]
    b = run("compute", "--pd", LEFT_TREFOIL, "--json")[1]
    assert a == b


def test_pd_from_stdin(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(HOPF_NEG))
    code, out, _ = run("state-sum", "--pd", "-")
    assert code == 0
    assert out.strip() == "(-6,1) (-4,1) (-2,1) (0,1)"


def test_cube_output_is_byte_identical():
    a = run("cube", "--pd", LEFT_TREFOIL)[1]
    b = run("cube", "--pd", LEFT_TREFOIL)[1]
    assert a == b
    obj = json.loads(a)
    assert obj["schema"] == SCHEMA and obj["command"] == "cube"
    assert (len(obj["vertices"]), len(obj["edges"]), len(obj["faces"])) == (8, 12, 6)


def test_compute_threads_identical(monkeypatch):
    a = run("compute", "--pd", LEFT_TREFOIL, "--theory", "odd", "--json", "--threads", "1")[1]
    b = run("compute", "--pd", LEFT_TREFOIL, "--theory", "odd", "--json", "--threads", "8")[1]
    monkeypatch.setenv("CHRONO_KH_THREADS", "3")
    c = run("compute", "--pd", LEFT_TREFOIL, "--theory", "odd", "--json")[1]
    assert a == b == c


def test_arrows_bitmask():
    code, out, _ = run("cube", "--pd", LEFT_TREFOIL, "--arrows", "0b101")
    assert code == 0
    assert json.loads(out)["arrows"] == [1, 0, 1]
    assert run("cube", "--pd", LEFT_TREFOIL, "--arrows", "8")[0] == 2
    assert run("cube", "--pd", LEFT_TREFOIL, "--arrows", "x")[0] == 2


def test_verify_all_checks_pass():
    code, out, _ = run("verify", "--pd", LEFT_TREFOIL, "--checks",
                       "cocycle,d2,euler,mod2,signs,arrows", "--trials", "2", "--json")
    assert code == 0, out
    obj = json.loads(out)
    assert obj["pass"] and obj["seed"] == 1729
    assert [r["check"] for r in obj["results"]] == ["cocycle", "d2", "euler", "mod2", "signs", "arrows"]


def test_verify_invariance_pair():
    kink = "PD[X[1,1,2,2]]"
    assert run("verify", "--pd", "PD[]", "--checks", "invariance-pair", "--pair", kink)[0] == 0
    code, out, _ = run("verify", "--pd", "PD[]", "--checks", "invariance-pair", "--pair", LEFT_TREFOIL)
    assert code == 3 and "FAIL" in out
    assert run("verify", "--pd", "PD[]", "--checks", "invariance-pair")[0] == 2


def test_usage_errors():
    assert run()[0] == 2
    assert run("compute")[0] == 2
    assert run("verify", "--pd", "PD[]", "--checks", "nonsense")[0] == 2
    code, _, err = run("compute", "--pd", LEFT_TREFOIL, "--theory", "bogus")
    assert code == 2 and "bogus" in err


def test_malformed_pd():
    code, _, err = run("compute", "--pd", "PD[X[1,2,3]]")
    assert code == 2 and err.startswith("chrono-kh: error")
    assert run("compute", "--pd", "PD[X[1,2,3,4],X[2,3,1,4]]")[0] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "chrono_kh", "state-sum", "--pd", "PD[]"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert r.stdout.strip() == "(-1,1) (1,1)"
