"""Command-line interface: subcommands, exit codes, determinism."""

import json

import pytest

from treelocal.cli import EXIT_INCOMPLETE, EXIT_INVALID, EXIT_OK, main
from treelocal.tree import ball_size

SPEC3 = {"d": 3, "F": ["(1 2 3)"], "Fprime": ["(1 2 3)", "(1 2)"]}
SPECD4 = {"d": 4, "F": ["(1 2 3 4)"], "Fprime": ["(1 2 3 4)", "(1 3)"]}
BAD = {"d": 3, "F": ["(1 2)"], "Fprime": ["(1 2 3)", "(1 2)"]}


@pytest.fixture
def spec3(tmp_path):
    p = tmp_path / "spec3.json"
    p.write_text(json.dumps(SPEC3))
    return str(p)


@pytest.fixture
def specd4(tmp_path):
    p = tmp_path / "specd4.json"
    p.write_text(json.dumps(SPECD4))
    return str(p)


@pytest.fixture
def badspec(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(BAD))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestGroupValidate:
    def test_valid(self, capsys, spec3):
        code, out, _ = run(capsys, "group", "validate", spec3)
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["valid"] is True
        assert data["flags"]["Fprime_2transitive"] is True

    def test_invalid(self, capsys, badspec):
        code, out, _ = run(capsys, "group", "validate", badspec)
        assert code == EXIT_INVALID
        assert json.loads(out)["valid"] is False

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "group", "validate", "/no/such/file.json")
        assert code == EXIT_INVALID
        assert "error" in err

    def test_text_format(self, capsys, spec3):
        code, out, _ = run(capsys, "--format", "text", "group", "validate",
                           spec3)
        assert code == EXIT_OK
        assert "valid = true" in out


class TestElement:
    def test_classify_word(self, capsys):
        code, out, _ = run(capsys, "element", "classify", "--d", "3",
                           "--word", "1.2")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["class"] == "loxodromic"
        assert data["length"] == 2
        assert data["eta"] == 0

    def test_classify_inversion(self, capsys):
        code, out, _ = run(capsys, "element", "classify", "--d", "3",
                           "--word", "1")
        data = json.loads(out)
        assert data["class"] == "inversion"
        assert data["eta"] == 1

    def test_apply(self, capsys):
        code, out, _ = run(capsys, "element", "apply", "--d", "3",
                           "--word", "1.2", "--vertex", "2.3")
        assert code == EXIT_OK
        assert json.loads(out)["image"] == "1.3"

    def test_build_json_element(self, capsys):
        expr = json.dumps({"op": "diag", "perm": "(1 2)"})
        code, out, _ = run(capsys, "element", "build", "--d", "3",
                           "--element", expr)
        assert code == EXIT_OK
        assert json.loads(out)["ok"] is True

    def test_certify(self, capsys, spec3):
        code, out, _ = run(capsys, "element", "certify", "--spec", spec3,
                           "--word", "1.2", "--radius", "4")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["exact"] is True
        assert data["singular"] == []

    def test_no_element_given(self, capsys):
        code, _, err = run(capsys, "element", "classify", "--d", "3")
        assert code == EXIT_INVALID


class TestQm:
    def test_eval(self, capsys, specd4):
        seg = json.dumps({"start": "e", "colors": [1, 2]})
        code, out, _ = run(capsys, "qm", "eval", "--spec", specd4,
                           "--segment", seg, "--word", "1.2.1.2")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data == {"value": 0, "forward": 3, "backward": 3}

    def test_homogenize_with_limit(self, capsys, specd4):
        seg = json.dumps({"start": "e", "colors": [1, 2, 1, 3, 1]})
        code, out, _ = run(capsys, "qm", "homogenize", "--spec", specd4,
                           "--segment", seg, "--word", "1.2.1.2.4.2.3",
                           "--limit", "4")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["homogenize"] == 1
        assert len(data["limit"]) == 4

    def test_independence_exhaustion_exit_code(self, capsys, specd4):
        code, out, _ = run(capsys, "qm", "independence", "--spec", specd4,
                           "--rank", "3", "--max-seg", "2", "--bound", "4")
        assert code == EXIT_INCOMPLETE
        assert json.loads(out)["rank"] == 0


class TestChains:
    def test_exactness(self, capsys):
        code, out, _ = run(capsys, "chains", "exactness",
                           "--points", "e,1,2,1.2", "--max-degree", "3")
        assert code == EXIT_OK
        assert json.loads(out)["exact"] is True

    def test_aligned(self, capsys):
        code, out, _ = run(capsys, "chains", "aligned",
                           "--points", "e,1,2,1.2", "--degree", "2")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["closed_under_boundary"] is True
        # all four points lie on the geodesic through 2, e, 1, 1.2
        assert ["e", "1", "2"] in data["aligned_basis"]
        assert len(data["aligned_basis"]) == 4

    def test_restriction(self, capsys, spec3):
        code, out, _ = run(capsys, "chains", "restriction", "--spec", spec3,
                           "--radius", "2", "--degree", "1")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["failures"] == []
        assert data["consistent"] == data["tuples_checked"]


class TestTree:
    def test_ball_count(self, capsys):
        code, out, _ = run(capsys, "tree", "ball", "--d", "4", "--radius", "2")
        assert code == EXIT_OK
        assert json.loads(out)["count"] == ball_size(2, 4)

    def test_dot(self, capsys):
        code, out, _ = run(capsys, "tree", "dot", "--d", "3", "--radius", "1")
        assert code == EXIT_OK
        assert out.startswith("graph tree {")
        assert "[label=2]" in out


class TestBranchCommand:
    def test_summary_and_determinism(self, capsys, spec3, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"sample_size": 25, "transport_samples": 5,
                                   "seed": 1}))
        code1, out1, _ = run(capsys, "branch", spec3, "--config", str(cfg),
                             "--evidence", "summary")
        code2, out2, _ = run(capsys, "branch", spec3, "--config", str(cfg),
                             "--evidence", "summary")
        assert code1 == code2 == EXIT_OK
        assert out1 == out2
        data = json.loads(out1)
        assert data["branch"] == "BoundedlyAcyclic"
        assert data["complete"] is True
        assert all(v == {"pass": True} for v in data["evidence"].values())

    def test_invalid_spec_exits_1(self, capsys, badspec):
        code, out, _ = run(capsys, "branch", badspec)
        assert code == EXIT_INVALID

    def test_incomplete_exits_2(self, capsys, specd4, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"qm_max_seg": 2, "qm_search_bound": 3,
                                   "qm_rank_max_seg": 2, "rank_target": 1}))
        code, out, _ = run(capsys, "branch", specd4, "--config", str(cfg))
        assert code == EXIT_INCOMPLETE
        assert json.loads(out)["complete"] is False

    def test_config_env_variable(self, capsys, spec3, tmp_path, monkeypatch):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"sample_size": 5, "transport_samples": 2}))
        monkeypatch.setenv("TREELOCAL_CONFIG", str(cfg))
        code, out, _ = run(capsys, "branch", spec3, "--evidence", "summary")
        assert code == EXIT_OK
        data = json.loads(out)
        assert data["parameters"]["sample_size"] == 5
