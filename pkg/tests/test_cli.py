"""End-to-end CLI behavior: subcommands, formats, exit codes, stability."""

import json

import pytest

from sptrees.cli import run

from conftest import DIAMOND_TEXT, THETA_TEXT


@pytest.fixture
def diamond_file(tmp_path):
    path = tmp_path / "diamond.sp"
    path.write_text(f"# the diamond\n{DIAMOND_TEXT}\n", encoding="utf-8")
    return str(path)


@pytest.fixture
def theta_file(tmp_path):
    path = tmp_path / "theta.sp"
    path.write_text(THETA_TEXT + "\n", encoding="utf-8")
    return str(path)


def test_parse_echoes_normalized(diamond_file, capsys):
    assert run(["parse", diamond_file]) == 0
    assert capsys.readouterr().out == DIAMOND_TEXT + "\n"


def test_parse_normalizes_nesting(tmp_path, capsys):
    path = tmp_path / "nested.sp"
    path.write_text("S(S(e(a,b),e(b,c)),e(c,d))\n", encoding="utf-8")
    assert run(["parse", str(path)]) == 0
    assert capsys.readouterr().out == "S(e(a,b),e(b,c),e(c,d))\n"


@pytest.mark.parametrize(
    "args, expected",
    [
        (["--mode", "semioriented"], "3"),
        (["--mode", "total"], "8"),
        (["--mode", "oriented"], "5"),
        (["--mode", "oriented", "--near"], "3"),
        (["--mode", "total", "--near"], "4"),
    ],
)
def test_count_diamond(diamond_file, capsys, args, expected):
    assert run(["count", diamond_file, *args]) == 0
    assert capsys.readouterr().out.strip() == expected


def test_count_theta(theta_file, capsys):
    assert run(["count", theta_file, "--mode", "oriented"]) == 0
    assert run(["count", theta_file, "--mode", "semioriented"]) == 0
    assert run(["count", theta_file, "--mode", "total"]) == 0
    assert capsys.readouterr().out.split() == ["9", "6", "15"]


def test_enumerate_text_is_byte_stable(diamond_file, capsys):
    assert run(["enumerate", diamond_file, "--mode", "oriented"]) == 0
    first = capsys.readouterr().out
    assert run(["enumerate", diamond_file, "--mode", "oriented"]) == 0
    assert capsys.readouterr().out == first
    lines = first.splitlines()
    assert len(lines) == 5
    for line in lines:
        tokens = line.split(",")
        assert tokens == sorted(tokens)
        assert all("-" in tok for tok in tokens)


def test_enumerate_golden_diamond(diamond_file, capsys):
    assert run(["enumerate", diamond_file, "--mode", "oriented"]) == 0
    assert capsys.readouterr().out == (
        "1-3,2-3,3-4\n"
        "1-3,2-3,2-4\n"
        "1-2,2-3,2-4\n"
        "1-2,1-3,3-4\n"
        "1-2,1-3,2-4\n"
    )


def test_enumerate_count_agreement(theta_file, capsys):
    for mode, near in (
        ("oriented", False),
        ("oriented", True),
        ("semioriented", False),
    ):
        args = ["enumerate", theta_file, "--mode", mode] + (["--near"] if near else [])
        assert run(args) == 0
        enum_lines = capsys.readouterr().out.splitlines()
        count_args = ["count", theta_file, "--mode", mode] + (
            ["--near"] if near else []
        )
        assert run(count_args) == 0
        assert len(enum_lines) == int(capsys.readouterr().out.strip())


def test_enumerate_records(diamond_file, capsys):
    assert run(["enumerate", diamond_file, "--mode", "semioriented", "--format", "records"]) == 0
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [r["index"] for r in records] == [0, 1, 2]
    assert all(r["mode"] == "semioriented" and r["kind"] == "spanning" for r in records)
    assert all(r["edges"] == sorted(r["edges"]) for r in records)


def test_semioriented_near_is_usage_error(diamond_file, capsys):
    assert run(["count", diamond_file, "--mode", "semioriented", "--near"]) == 1
    assert run(["enumerate", diamond_file, "--mode", "semioriented", "--near"]) == 1


def test_usage_error_on_bad_flags(diamond_file):
    assert run(["count", diamond_file, "--mode", "bogus"]) == 1
    assert run(["bogus-command"]) == 1
    assert run(["count"]) == 1


def test_validation_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.sp"
    bad.write_text("S(e(a,b),e(c,d))\n", encoding="utf-8")
    assert run(["parse", str(bad)]) == 2
    assert "chain mismatch" in capsys.readouterr().err
    assert run(["parse", str(tmp_path / "missing.sp")]) == 2


def test_verify_diamond_and_theta(diamond_file, theta_file, capsys):
    assert run(["verify", diamond_file]) == 0
    out = capsys.readouterr().out
    assert out.startswith("PASS (")
    assert "total=8" in out and "oriented=5" in out and "semi=3" in out
    assert run(["verify", theta_file]) == 0
    out = capsys.readouterr().out
    assert "total=15" in out and "oriented=9" in out and "semi=6" in out


def test_verify_refuses_large_instances(tmp_path, capsys):
    path = tmp_path / "big.sp"
    chain = "S(" + ",".join(f"e(v{i},v{i + 1})" for i in range(20)) + ")"
    path.write_text(chain + "\n", encoding="utf-8")
    assert run(["verify", str(path)]) == 2
    assert "refusing" in capsys.readouterr().err
    assert run(["verify", str(path), "--limit", "30"]) == 0


def test_random_emits_deterministic_expression(capsys):
    assert run(["random", "--seed", "5", "--depth", "2", "--children", "3"]) == 0
    first = capsys.readouterr().out
    assert run(["random", "--seed", "5", "--depth", "2", "--children", "3"]) == 0
    assert capsys.readouterr().out == first
    assert first.startswith(("S(", "P(", "e("))


def test_random_round_trips_through_parse(tmp_path, capsys):
    assert run(["random", "--seed", "11"]) == 0
    text = capsys.readouterr().out
    path = tmp_path / "random.sp"
    path.write_text(text, encoding="utf-8")
    assert run(["parse", str(path)]) == 0
    assert capsys.readouterr().out == text


def test_code_subcommand(diamond_file, capsys):
    assert run(["code", diamond_file]) == 0
    out = capsys.readouterr().out.strip()
    code, reversal = out.split()
    assert code == reversal == "P(S(EE)S(EE)E)"


def test_edge_list_input(tmp_path, capsys):
    path = tmp_path / "diamond.edges"
    path.write_text(
        "terminals 2 3\n1 2\n1 3\n2 3\n2 4\n3 4\n", encoding="utf-8"
    )
    assert run(["count", str(path), "--mode", "total"]) == 0
    assert capsys.readouterr().out.strip() == "8"
