import json

import pytest

from polarineq.cli import main

Z2 = "[[0,0],[0,0],[1,0]]"


def run(argv):
    return main(argv)


class TestCheck:
    def test_zygmund_equality_case(self, capsys):
        code = run(["check", "zygmund", "--poly", Z2, "--p", "2"])
        out = capsys.readouterr().out
        assert code == 0
        assert "ratio       : 1" in out

    def test_debruijn_hypothesis_failure(self, capsys):
        code = run(["check", "debruijn", "--poly", "[[0,0],[1,0]]"])
        assert code == 3

    def test_malformed_poly(self):
        assert run(["check", "zygmund", "--poly", "not json", "--p", "2"]) == 1

    def test_missing_poly(self):
        assert run(["check", "zygmund", "--p", "2"]) == 1

    def test_main_theorem_with_full_params(self, capsys):
        code = run(["check", "main", "--poly",
                    "[[0.0625,0],[0,0],[0,0],[0,0],[1,0]]",
                    "--alpha", "1+0i", "--beta", "1", "--K", "0.5",
                    "--mu", "4", "--p", "2", "--format", "json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["name"] == "main_theorem" and payload["satisfied"]

    def test_lemma1_variant_flag(self, capsys):
        code = run(["check", "lemma1", "--poly", Z2, "--alpha", "2",
                    "--K", "1.0", "--mu", "1", "--variant", "proof"])
        assert code == 0
        assert "lemma1" in capsys.readouterr().out

    def test_lemma2_default_majorant(self, capsys):
        code = run(["check", "lemma2", "--poly", "[[1,0],[0,0],[0,0],[1,0]]",
                    "--alpha", "1", "--beta", "0.5", "--K", "0.5"])
        assert code == 0

    def test_csv_format(self, capsys):
        code = run(["check", "bernstein", "--poly", Z2, "--format", "csv"])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("name,n,K,mu,p")
        assert lines[1].startswith("bernstein,2,")


class TestCpTable:
    def test_standard_values(self, capsys):
        assert run(["cp-table", "--p", "1,2,4"]) == 0
        out = capsys.readouterr().out
        assert "0.707106781" in out

    def test_infinity(self, capsys):
        assert run(["cp-table", "--p", "inf"]) == 0
        assert "0.5" in capsys.readouterr().out

    def test_p_below_one_is_malformed(self):
        assert run(["cp-table", "--p", "0.5"]) == 1


class TestScan:
    def test_campaign_and_determinism(self, tmp_path, capsys):
        cfg = tmp_path / "scan.json"
        cfg.write_text(json.dumps({
            "check": "zygmund",
            "grid": {"p_values": [1.0, 2.0], "n_values": [3],
                     "samples_per_cell": 3, "seed": 17},
        }))
        out1 = tmp_path / "r1"
        out2 = tmp_path / "r2"
        assert run(["scan", "--config", str(cfg), "--out", str(out1)]) == 0
        assert run(["scan", "--config", str(cfg), "--out", str(out2)]) == 0

        csv1 = (out1 / "scan_zygmund.csv").read_bytes()
        csv2 = (out2 / "scan_zygmund.csv").read_bytes()
        assert csv1 == csv2  # byte-identical rerun

        lines = (out1 / "scan_zygmund.jsonl").read_text().splitlines()
        header = json.loads(lines[0])["header"]
        assert header["tool"] == "polarineq" and "timestamp" in header
        assert header["config"]["grid"]["seed"] == 17
        assert len(lines) == 1 + 6  # header + 2 cells x 3 samples

    def test_seed_override(self, tmp_path):
        cfg = tmp_path / "scan.json"
        cfg.write_text(json.dumps({
            "check": "zygmund",
            "grid": {"p_values": [2.0], "n_values": [2],
                     "samples_per_cell": 2, "seed": 1},
        }))
        out = tmp_path / "r"
        assert run(["scan", "--config", str(cfg), "--out", str(out),
                    "--seed", "99"]) == 0
        header = json.loads((out / "scan_zygmund.jsonl").read_text()
                            .splitlines()[0])["header"]
        assert header["config"]["grid"]["seed"] == 99

    def test_empty_grid_is_malformed(self, tmp_path):
        cfg = tmp_path / "scan.json"
        cfg.write_text(json.dumps({
            "check": "zygmund",
            "grid": {"p_values": [], "samples_per_cell": 3, "seed": 0},
        }))
        assert run(["scan", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 1

    def test_missing_config_file(self, tmp_path):
        assert run(["scan", "--config", str(tmp_path / "nope.json")]) == 1


class TestSearchAndReplay:
    def test_round_trip(self, tmp_path, capsys):
        cfg = tmp_path / "search.json"
        cfg.write_text(json.dumps({
            "check": "zygmund",
            "family": {"n": 2, "side": "unrestricted"},
            "fixed": {"p": 2},
            "search": {"multistarts": 2, "max_iters": 60, "seed": 9},
        }))
        out = tmp_path / "rec"
        assert run(["search", "--config", str(cfg), "--out", str(out)]) == 0
        rec_file = out / "search_zygmund.json"
        assert rec_file.exists()
        payload = json.loads(rec_file.read_text())
        assert payload["header"]["config"]["seed"] == 9
        assert payload["record"]["best_ratio"] <= 1 + 1e-9
        assert (out / "sharpness_zygmund.csv").exists()

        assert run(["replay", str(rec_file)]) == 0

    def test_infeasible_family_is_malformed(self, tmp_path):
        cfg = tmp_path / "search.json"
        cfg.write_text(json.dumps({
            "check": "zygmund",
            "family": {"n": 0, "side": "unrestricted"},
            "fixed": {"p": 2},
            "search": {"multistarts": 1, "max_iters": 10, "seed": 0},
        }))
        assert run(["search", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 1


def test_unknown_subcommand_is_malformed():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_unknown_check_name():
    assert main(["check", "nonsense", "--poly", Z2]) == 1
