import json
import subprocess
import sys

from wedgecrys.cli import main
from wedgecrys.dieudonne import descriptor, isocrystal_to_json, make_standard
from wedgecrys.rings import make_witt_ring


def run_cli(args, env=None):
    cmd = [sys.executable, "-m", "wedgecrys.cli", *args]
    base_env = {"PATH": "/usr/bin:/bin"}
    if env:
        base_env.update(env)
    return subprocess.run(cmd, capture_output=True, text=True, env=base_env)


IDENTITY4 = json.dumps(
    {
        "schema": "v1",
        "ring": {"kind": "Q"},
        "rows": 4,
        "cols": 4,
        "entries": [("1" if i == j else "0") for i in range(4) for j in range(4)],
    }
)


def test_compound_identity4(capsys):
    assert main(["compound", "--in", IDENTITY4, "--d", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rows"] == 6
    assert out["entries"] == [("1" if i == j else "0") for i in range(6) for j in range(6)]


def test_compound_diag_q(capsys):
    payload = json.dumps(
        {
            "schema": "v1",
            "ring": {"kind": "Q"},
            "rows": 3,
            "cols": 3,
            "entries": ["1", "0", "0", "0", "2", "0", "0", "0", "3"],
        }
    )
    assert main(["compound", "--in", payload, "--d", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["entries"] == ["2", "0", "0", "0", "3", "0", "0", "0", "6"]


def test_compound_malformed_entry_names_index(capsys):
    payload = json.dumps(
        {
            "schema": "v1",
            "ring": {"kind": "Zpm", "p": 3, "m": 2},
            "rows": 2,
            "cols": 2,
            "entries": ["1", "0", "oops", "1"],
        }
    )
    assert main(["compound", "--in", payload, "--d", "1"]) == 2
    assert "index 2" in capsys.readouterr().err


def test_compound_dimension_error_exit_3(capsys):
    assert main(["compound", "--in", IDENTITY4, "--d", "9"]) == 3


def test_rank_verb(capsys):
    payload = json.dumps(
        {
            "schema": "v1",
            "ring": {"kind": "Zpm", "p": 3, "m": 2},
            "rows": 2,
            "cols": 2,
            "entries": ["1", "0", "0", "3"],
        }
    )
    assert main(["rank", "--in", payload]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rank"] is None
    assert out["witness"] == ["UNIT", "UNIT", "PROPER_NONZERO", "ZERO"]


def test_slopes_verb(capsys):
    C = make_standard(descriptor("LT_2"), make_witt_ring(3, 1, 6)).to_isocrystal()
    payload = json.dumps(isocrystal_to_json(C))
    assert main(["slopes", "--in", payload]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"schema": "v1", "segments": [{"slope": "1/2", "mult": 2}]}


def test_wedge_verb_h2_mu(capsys):
    assert main(["wedge", "--h", "2", "--dim", "1", "--r", "2", "--p", "3", "--a", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["height"] == 1 and out["dim"] == 1
    assert out["slopes"] == ["0"] and out["mu_check"] is True


def test_wedge_verb_h5(capsys):
    assert main(["wedge", "--h", "5", "--dim", "1", "--r", "2", "--p", "3", "--a", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["height"] == 10 and out["dim"] == 4
    assert out["slopes"] == ["3/5"] * 10


def test_wedge_r1_echoes_source(capsys):
    assert main(["wedge", "--h", "3", "--dim", "1", "--r", "1", "--p", "3", "--a", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["height"] == 3 and out["dim"] == 1
    assert out["slopes"] == ["2/3"] * 3


def test_wedge_insufficient_precision_exit_4(capsys):
    assert main(["wedge", "--h", "5", "--dim", "1", "--r", "2", "--p", "3", "--a", "1", "--m", "4"]) == 4
    err = capsys.readouterr().err
    assert "required minimum m" in err and "18" in err


def test_default_prime_env_override():
    res = run_cli(["wedge", "--h", "2", "--dim", "1", "--r", "2"], env={"WEDGECRYS_DEFAULT_P": "5"})
    assert res.returncode == 0
    assert json.loads(res.stdout)["source"]["p"] == 5


def test_check_rank_lemma_exhaustive(capsys):
    assert main(["check", "rank-lemma", "--exhaustive-f2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["cases"] == 512 and out["failures"] == 0


def test_check_wrong_shift_is_a_failing_negative_control(capsys):
    code = main(["check", "compat", "--seed", "1", "--trials", "5", "--wrong-shift"])
    captured = capsys.readouterr()
    assert code == 5
    out = json.loads(captured.out)
    assert out["failures"] > 0
    assert out["counterexamples"]


def test_cli_byte_identical_across_runs():
    C = make_standard(descriptor("LT_3"), make_witt_ring(3, 1, 8)).to_isocrystal()
    iso_payload = json.dumps(isocrystal_to_json(C))
    commands = [
        ["compound", "--in", IDENTITY4, "--d", "3"],
        ["rank", "--in", IDENTITY4],
        ["slopes", "--in", iso_payload],
        ["wedge", "--h", "4", "--dim", "1", "--r", "2", "--p", "3", "--a", "1"],
        ["check", "rank-lemma", "--seed", "11", "--trials", "5"],
        ["check", "cauchy-binet", "--seed", "11", "--trials", "5"],
        ["check", "adjunction", "--seed", "11", "--trials", "6"],
    ]
    for cmd in commands:
        a = run_cli(cmd)
        b = run_cli(cmd)
        assert a.returncode == b.returncode == 0, (cmd, a.stderr)
        assert a.stdout == b.stdout


def test_stdout_carries_only_json(capsys):
    assert main(["check", "compat", "--seed", "2", "--trials", "3"]) == 0
    out = capsys.readouterr().out
    json.loads(out)  # a single JSON document
    assert out.endswith("\n") and out.count("\n") == 1
