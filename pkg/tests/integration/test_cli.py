import json

import pytest

from qhflow.main import main


@pytest.fixture
def radial_file(tmp_path):
    path = tmp_path / "radial.txt"
    path.write_text("p = 1\nq = 2\nP = x\nQ = 2y\n")
    return path


@pytest.fixture
def perturbed_file(tmp_path):
    """The focus plus a higher-order term, without weights."""
    path = tmp_path / "perturbed.txt"
    path.write_text("P = x^2 - 1/2y + x^5\nQ = x^3 + 2xy\n")
    return path


def test_analyze_focus(x1_file, capsys):
    """Test that analyzing the focus prints its portrait and exits 0."""
    assert main(["analyze", str(x1_file)]) == 0
    out = capsys.readouterr().out
    assert "verdict    STABLE" in out
    assert "GLOBAL_UNSTABLE_FOCUS" in out
    assert "circle     " in out


def test_analyze_sectored_json(x2_file, capsys):
    """Test the JSON report of the sectored field."""
    assert main(["analyze", str(x2_file), "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "STABLE"
    assert report["portrait"] == "SECTORED"
    assert report["sequence"] == "--,++,--,++"
    assert len(report["singularities"]) == 4
    assert report["field"]["P"] == [[0, 1, "-1"], [2, 0, "1"]]


def test_analyze_bare_expressions_with_weights(tmp_path, capsys):
    """Test that two bare lines analyze once --weights is given."""
    path = tmp_path / "bare.txt"
    path.write_text("x^2 - y\n2x^3 - 3xy\n")
    assert main(["analyze", str(path), "--weights", "1", "2", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["sequence"] == "--,++,--,++"

    assert main(["analyze", str(path)]) == 2
    assert "weights missing" in capsys.readouterr().err


def test_analyze_focus_reports_both_integrals(x1_file, capsys):
    """Test that the JSON report carries the line and the full-turn integral."""
    assert main(["analyze", str(x1_file), "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["integral"]["sign"] == 1
    assert report["circle_integral"]["reversible"]
    assert report["circle_integral"]["ambiguous"]


def test_analyze_radial_exit_code(radial_file, capsys):
    """Test that the radial field exits 4."""
    assert main(["analyze", str(radial_file)]) == 4
    assert "DEGENERATE_RADIAL" in capsys.readouterr().out


def test_analyze_invalid_document(tmp_path, capsys):
    """Test that a malformed document exits 2 with nothing on stdout."""
    path = tmp_path / "bad.txt"
    path.write_text("p = 1\nq = 2\nP = x^2 + $\nQ = x\n")
    assert main(["analyze", str(path)]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "parse_error" in captured.err


def test_analyze_missing_file(tmp_path, capsys):
    """Test that an unreadable file exits 2."""
    assert main(["analyze", str(tmp_path / "absent.json")]) == 2


def test_invalid_tolerance(x1_file, capsys):
    """Test that a non-positive tolerance is rejected before the command runs."""
    assert main(["analyze", str(x1_file), "--tol", "-1"]) == 2
    assert capsys.readouterr().out == ""


def test_missing_command(capsys):
    """Test that argparse usage errors exit 2."""
    assert main([]) == 2


def test_count_empty_family(capsys):
    """Test that a family without stable fields exits 5."""
    assert main(["count", "1", "7", "2"]) == 5
    assert "stable_class_empty" in capsys.readouterr().err


def test_count_with_oracle(capsys):
    """Test the count of (1, 1, 1) against the oracle."""
    assert main(["count", "1", "1", "1", "--brute-force"]) == 0
    out = capsys.readouterr().out
    assert "total = 5" in out
    assert "oracle total = 5" in out
    assert "DISCREPANCY TOTAL_CLOSED_FORM printed=3 oracle=5 (ODD_ODD/r=odd)" in out
    assert "NO" not in out.split("c0 =")[0]


def test_count_representatives_json(capsys):
    """Test that representatives come back as field documents."""
    assert main(["count", "1", "1", "1", "--representatives", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["total"] == 5
    assert len(report["representatives"]) == 5
    assert [rep["sequence"] is None for rep in report["representatives"]].count(True) == 2


def test_count_oracle_bound(capsys):
    """Test that the oracle bound is a command-line setting."""
    assert main(["count", "1", "1", "1", "--brute-force", "--r-bound", "0"]) == 2
    assert "oracle_bound_exceeded" in capsys.readouterr().err


def test_construct_sectored(tmp_path, capsys):
    """Test that construct prints a document that analyzes back to its sequence."""
    assert main(["construct", "1", "2", "2", "--sequence=--,++,--,++"]) == 0
    document = capsys.readouterr().out
    path = tmp_path / "built.json"
    path.write_text(document)
    assert json.loads(document)["m"] == 2

    assert main(["analyze", str(path), "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["sequence"] == "--,++,--,++"


def test_construct_inadmissible(capsys):
    """Test that an inadmissible sequence exits 6."""
    assert main(["construct", "1", "1", "1", "--sequence=+-,-+,+-,-+"]) == 6
    assert capsys.readouterr().out == ""


def test_construct_malformed_sequence(capsys):
    """Test that malformed sequence text exits 2."""
    assert main(["construct", "1", "1", "1", "--sequence=+-,-"]) == 2


def test_equiv_inequivalent(x1_file, x2_file, capsys):
    """Test that a focus and a sectored field are inequivalent."""
    assert main(["equiv", str(x1_file), str(x2_file)]) == 1
    assert capsys.readouterr().out.splitlines()[0] == "inequivalent"


def test_equiv_same_field(x2_file, capsys):
    """Test that a field is equivalent to itself."""
    assert main(["equiv", str(x2_file), str(x2_file)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "equivalent"


def test_equiv_unstable(x2_file, tmp_path, capsys):
    """Test that comparing an unstable field exits 3."""
    path = tmp_path / "double.txt"
    path.write_text("p = 1\nq = 1\nP = 2x - y\nQ = x\n")
    assert main(["equiv", str(x2_file), str(path)]) == 3


def test_decompose_origin(perturbed_file, capsys):
    """Test that the origin is decided by the degree-2 component."""
    assert main(["decompose", str(perturbed_file), "--p", "1", "--q", "2"]) == 0
    out = capsys.readouterr().out
    assert "components m=2, m=5" in out
    assert "dominant   m=2" in out
    assert "GLOBAL_UNSTABLE_FOCUS" in out


def test_decompose_infinity_not_applicable(perturbed_file, capsys):
    """Test that the degenerate top component exits 7."""
    argv = ["decompose", str(perturbed_file), "--p", "1", "--q", "2", "--end", "infinity"]
    assert main(argv) == 7
    captured = capsys.readouterr()
    assert "theorem_not_applicable" in captured.err
    assert "dominant   m=5" in captured.out
    assert "theorem inapplicable" in captured.out


def test_decompose_unstable_dominant_part(tmp_path, capsys):
    """Test that an unstable dominant part is reported before exiting 7."""
    path = tmp_path / "double.txt"
    path.write_text("P = 2x - y + x^3\nQ = x\n")
    argv = ["decompose", str(path), "--p", "1", "--q", "1", "--format", "json"]
    assert main(argv) == 7
    report = json.loads(capsys.readouterr().out)
    assert not report["applicable"]
    assert report["dominant_m"] == 1
    assert [c["m"] for c in report["components"]] == [1, 3]
    assert "not structurally stable" in report["message"]
    assert "theorem inapplicable" in report["message"]
    assert report["analysis"] is None


def test_plot_writes_svg(x2_file, tmp_path, capsys):
    """Test that the portrait is written as a reproducible SVG."""
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    argv = ["plot", str(x2_file), "--trajectories", "4", "--size", "300"]
    assert main(argv + ["-o", str(first)]) == 0
    assert main(argv + ["-o", str(second)]) == 0
    assert "wrote" in capsys.readouterr().out

    content = first.read_bytes()
    assert content.startswith(b"<?xml")
    assert b"<svg" in content
    assert content == second.read_bytes()


def test_plot_sectored_golden(x2_file, tmp_path, golden):
    """Test the sectored portrait against its golden file."""
    out = tmp_path / "x2.svg"
    assert main(["plot", str(x2_file), "--trajectories", "4", "--size", "300", "-o", str(out)]) == 0
    golden("x2_portrait.svg", out.read_bytes())


def test_plot_rejects_radial(radial_file, tmp_path, capsys):
    """Test that only stable fields are plotted."""
    out = tmp_path / "radial.svg"
    assert main(["plot", str(radial_file), "-o", str(out)]) == 3
    assert not out.exists()


def test_decompose_agrees_with_analyze(x2_file, capsys):
    """Test that a quasihomogeneous input decomposes to its own analysis."""
    assert main(["analyze", str(x2_file), "--format", "json"]) == 0
    direct = json.loads(capsys.readouterr().out)
    argv = ["decompose", str(x2_file), "--p", "1", "--q", "2", "--format", "json"]
    assert main(argv) == 0
    report = json.loads(capsys.readouterr().out)
    assert [c["m"] for c in report["components"]] == [2]
    assert report["analysis"] == direct


def test_plot_focus_golden(x1_file, tmp_path, golden):
    """Test the focus portrait against its golden file."""
    out = tmp_path / "x1.svg"
    assert main(["plot", str(x1_file), "--trajectories", "4", "--size", "300", "-o", str(out)]) == 0
    golden("x1_portrait.svg", out.read_bytes())
