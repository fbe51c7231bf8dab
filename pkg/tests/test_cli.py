from fractions import Fraction
import json

import pytest

from app.services.export_service import export_service
from app.services.rearrange_service import profile_from_schema
from cli.main import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestBellman:
    def test_eval(self, capsys):
        code, out = run(capsys, "bellman", "eval", "--q", "0.5", "--f", "1", "--h", "0.8")
        payload = json.loads(out)
        assert code == 0
        assert payload["B"] == pytest.approx(1.6)
        assert payload["c"] == pytest.approx(4.0)
        assert payload["omega"] == pytest.approx(2.0)

    def test_inadmissible_point(self, capsys):
        code, _ = run(capsys, "bellman", "eval", "--q", "0.5", "--f", "1", "--h", "2")
        assert code == 2

    def test_curve(self, capsys):
        code, out = run(capsys, "bellman", "curve", "--q", "0.5", "--samples", "3", "--z-max", "2")
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[0] == "z,omega"
        assert lines[1] == "1,1"
        assert len(lines) == 4


class TestMaximal:
    def test_eval_exact(self, capsys):
        code, out = run(capsys, "maximal", "eval", "--depth", "2", "--values", "1/2,0,0,3", "--q", "0.5")
        payload = json.loads(out)
        assert code == 0
        assert payload["values"] == ["1/2", "0", "0", "3"]
        assert payload["maximal"] == ["7/8", "7/8", "3/2", "3"]
        assert payload["argmax_levels"] == [0, 0, 1, 2]
        assert "integral" in payload

    def test_eval_rearranged(self, capsys):
        code, out = run(capsys, "maximal", "eval", "--depth", "2", "--values", "1/2,0,0,3", "--rearranged")
        assert code == 0
        assert out == "breakpoint,value\n1/4,3\n1/2,3/2\n1,7/8\n"
        profile = profile_from_schema(export_service.parse_profile(out))
        assert profile.breakpoints == (0, Fraction(1, 4), Fraction(1, 2), 1)
        assert profile.values == (3, Fraction(3, 2), Fraction(7, 8))

    def test_wrong_length(self, capsys):
        code, _ = run(capsys, "maximal", "eval", "--depth", "2", "--values", "1,2")
        assert code == 2

    def test_depth_limit(self, capsys):
        code, _ = run(capsys, "maximal", "eval", "--depth", "99", "--values", "1,2")
        assert code == 2


class TestOracleAndTree:
    def test_search(self, capsys):
        code, out = run(capsys, "oracle", "search", "--depth", "2", "--values", "4,2,1,0")
        payload = json.loads(out)
        assert code == 0
        assert payload["permutations"] == 24
        assert payload["holds"] is True

    def test_tree_show(self, capsys):
        code, out = run(capsys, "tree", "show", "--depth", "2", "--comb", "--values", "4,2,1")
        payload = json.loads(out)
        assert code == 0
        assert payload["measure"] == "1"
        assert payload["children"][0]["children"][0] == {"measure": "1/4", "value": "4", "children": []}


class TestExtremal:
    def test_sweep(self, capsys):
        code, out = run(capsys, "extremal", "sweep", "--q", "0.5", "--f", "1", "--h", "0.8",
                        "--min-depth", "2", "--max-depth", "4", "--rule", "dyadic")
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[0].startswith("depth,rule,cells,I_m,closed_form,B,h_m")
        assert len(lines) == 4


class TestVerify:
    ARGS = ("verify", "all", "--seed", "3", "--trials", "1", "--q", "0.5", "--depth", "2",
            "--lambdas", "2", "--subsets", "2", "--no-suites")

    def test_writes_csv(self, capsys, tmp_path):
        out = tmp_path / "campaign.csv"
        code, _ = run(capsys, *self.ARGS, "--out", str(out))
        lines = out.read_text(encoding="utf-8").strip().split("\n")
        assert code == 0
        assert lines[0] == "check,q,depth,cell,trial,case,lhs,rhs,slack,holds"
        assert len(lines) == 1 + 2 * (2 + 2 + 8)

    def test_config_file_overrides_flags(self, capsys, tmp_path):
        config = tmp_path / "campaign.env"
        config.write_text("TRIALS=0\nSEED=9\n", encoding="utf-8")
        out = tmp_path / "campaign.csv"
        code, _ = run(capsys, *self.ARGS, "--out", str(out), "--config", str(config))
        assert code == 0
        assert out.read_text(encoding="utf-8") == "check,q,depth,cell,trial,case,lhs,rhs,slack,holds\n"

    def test_unknown_config_key(self, capsys, tmp_path):
        config = tmp_path / "campaign.env"
        config.write_text("COLOR=blue\n", encoding="utf-8")
        code, _ = run(capsys, *self.ARGS, "--config", str(config))
        assert code == 2

    def test_missing_config_file(self, capsys, tmp_path):
        code, _ = run(capsys, *self.ARGS, "--config", str(tmp_path / "missing.env"))
        assert code == 2

    def test_invalid_q(self, capsys, tmp_path):
        code, _ = run(capsys, *self.ARGS, "--q", "1.5", "--out", str(tmp_path / "x.csv"))
        assert code == 2
