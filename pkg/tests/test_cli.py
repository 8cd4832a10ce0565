import json

import pytest

from strongclones.cli import main
from strongclones.families import rho_02, rho_1, xi
from strongclones.formats import read_function, read_relation, write_function, write_relation
from strongclones.core import PartialFunction, Relation
from strongclones.preserve import ppol_fingerprint


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        (write_relation if isinstance(obj, Relation) else write_function)(obj, path)
        return str(path)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --- gen-family ----------------------------------------------------------

def test_gen_family_stdout(capsys):
    code, out, _ = run(capsys, "gen-family", "r02_c", "--n", "5")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "arity 5" and len(lines) == 12


def test_gen_family_file(capsys, tmp_path):
    path = tmp_path / "xi.pfn"
    assert run(capsys, "gen-family", "xi", "--j", "1", "-o", str(path))[0] == 0
    assert read_function(path) == xi(1).expand()
    path = tmp_path / "rho.rel"
    run(capsys, "gen-family", "rho02", "-o", str(path))
    assert read_relation(path) == rho_02()


def test_gen_family_missing_parameter(capsys):
    code, _, err = run(capsys, "gen-family", "r02")
    assert code == 2 and err.startswith("error:")


# --- preserves -----------------------------------------------------------

def test_preserves_true(capsys, files):
    code, out, _ = run(capsys, "preserves", files("xi.pfn", xi(1).expand()), files("r1.rel", rho_1()))
    assert code == 0 and out.strip() == "preserves: true"
    code, out, _ = run(capsys, "preserves", "--symmetric", files("xi.pfn", xi(1).expand()), files("r1.rel", rho_1()))
    assert code == 0


def test_preserves_false_prints_matrix(capsys, files):
    f = files("or.pfn", PartialFunction.from_callable(2, lambda x, y: x | y))
    code, out, _ = run(capsys, "preserves", f, files("r.rel", rho_02()))
    lines = out.splitlines()
    assert code == 1 and lines[0] == "preserves: false"
    assert lines[2:] == ["0 1 | 1", "1 0 | 1"]
    code, out, _ = run(capsys, "preserves", "--symmetric", f, files("r.rel", rho_02()))
    assert code == 1 and out.splitlines()[2:] == ["0 1 | 1", "1 0 | 1"]


def test_preserves_symmetric_rejects_asymmetric(capsys, files):
    f = files("p.pfn", PartialFunction.projection(2, 1))
    code, _, err = run(capsys, "preserves", "--symmetric", f, files("r.rel", rho_02()))
    assert code == 2 and "symmetric" in err


def test_preserves_budget(capsys, files):
    f = files("t.pfn", PartialFunction.total(3, 0))
    code, _, err = run(capsys, "preserves", "--matrix-budget", "5", f, files("r1.rel", rho_1()))
    assert code == 2 and err.startswith("error:")


def test_bad_file_reports_line(capsys, tmp_path):
    bad = tmp_path / "bad.rel"
    bad.write_text("arity 2\n0x\n")
    code, _, err = run(capsys, "fingerprint", str(bad))
    assert code == 2 and "bad.rel:2" in err


# --- definable -----------------------------------------------------------

def test_definable(capsys, tmp_path):
    rll, r3 = tmp_path / "rll.rel", tmp_path / "r3.rel"
    run(capsys, "gen-family", "rlambda_lambda", "-o", str(rll))
    run(capsys, "gen-family", "rlambda", "--m", "3", "-o", str(r3))
    code, out, _ = run(capsys, "definable", str(rll), str(r3))
    js = json.loads(out)
    assert code == 0 and js["definable"] and js["revalidated"] and js["target"] == "rll.rel"
    code, out, _ = run(capsys, "definable", str(r3), str(rll))
    assert code == 1 and not json.loads(out)["definable"] and json.loads(out)["revalidated"]


def test_definable_redundant(capsys, files):
    target = files("t.rel", Relation.from_tuples(3, ["000", "101"]))
    src = files("s.rel", Relation.from_tuples(2, ["00", "10"]))
    assert run(capsys, "definable", target, src)[0] == 2
    code, out, _ = run(capsys, "definable", "--reduce", target, src)
    assert code == 0 and json.loads(out)["reduced"] is True


# --- interval ------------------------------------------------------------

def test_interval(capsys, tmp_path):
    dot = tmp_path / "i.dot"
    code, out, _ = run(capsys, "interval", "--clone", "T0∩T1", "--basis", "t0t1", "--dot", str(dot))
    js = json.loads(out)
    assert code == 0 and js["size"] == 7 and js["counts_by_total_part"]["T0∩T1"] == 4
    assert dot.read_text().count("[label=") == 7


def test_interval_unknown_clone(capsys):
    code, _, err = run(capsys, "interval", "--clone", "nope", "--basis", "t0t1")
    assert code == 2 and "unknown" in err


# --- fingerprint ---------------------------------------------------------

def test_fingerprint(capsys, files):
    r = files("r.rel", rho_02())
    code, out, _ = run(capsys, "fingerprint", r)
    assert code == 0 and out.strip() == ppol_fingerprint([rho_02()], 3).digest()
    total = run(capsys, "fingerprint", "--total", r)[1]
    empty = run(capsys, "fingerprint", "--empty-consequent", r)[1]
    assert len({out, total, empty}) == 3
    assert run(capsys, "fingerprint", "--k", "2", r)[1] != out


# --- verify-paper --------------------------------------------------------

def test_verify_paper_section_json(capsys):
    code, out, _ = run(capsys, "verify-paper", "--section", "lambda")
    js = json.loads(out)
    assert code == 0 and js["schema_version"] == 1 and js["section"] == "6"
    assert js["summary"] == {"pass": 6, "fail": 0, "skipped": 0}
    assert all("runtime_ms" not in c for c in js["checks"])


def test_verify_paper_is_byte_stable(capsys):
    a = run(capsys, "verify-paper", "--section", "6")[1]
    b = run(capsys, "verify-paper", "--section", "lambda")[1]
    assert a == b


def test_verify_paper_text_and_timings(capsys):
    code, out, _ = run(capsys, "verify-paper", "--section", "intervals", "--format", "text", "--timings")
    lines = out.splitlines()
    assert code == 0 and lines[-1] == "6 passed, 0 failed, 0 skipped"
    assert all(line.startswith("[PASS") and line.endswith(" ms)") for line in lines[:-1])


def test_verify_paper_skip_is_not_success(capsys):
    code, out, _ = run(capsys, "verify-paper", "--section", "6", "--index-budget", "10")
    js = json.loads(out)
    assert js["summary"]["skipped"] > 0 and code == 1


def test_verify_paper_unknown_section(capsys):
    code, _, err = run(capsys, "verify-paper", "--section", "9")
    assert code == 2 and "unknown section" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "fingerprint", str(tmp_path / "nope.rel"))
    assert code == 2 and err.startswith("error:") and "nope.rel" in err
