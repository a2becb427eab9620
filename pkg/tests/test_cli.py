from pathlib import Path

import pytest

from conjlab.cli import main

HOWIE_CONFIG = """rank 2
g X^2Y^3
g X^2(xy)^5
w xy^2
group S3
group S4
mode exhaustive
"""

WITNESS_CONFIG = """rank 2
g x
w y
group Z2xZ2
"""


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestNorm:
    def test_hamming_table_on_s5(self, capsys):
        code, out, _ = run(capsys, "norm", "S5", "hamming")
        assert code == 0
        values = {}
        for line in out.splitlines():
            if line.startswith("C") and "\t" in line:
                cells = line.split("\t")
                values[cells[0]] = cells[3]
        assert values == {
            "C1": "0", "C2": "2/5", "C3": "3/5", "C2,2": "4/5",
            "C4": "4/5", "C2,3": "1", "C5": "1",
        }
        assert "overall: pass" in out

    def test_single_point_group(self, capsys):
        code, out, _ = run(capsys, "norm", "S1", "hamming")
        assert code == 0
        assert out.count("\nC1\t") == 1
        assert "\t0" in out

    def test_graph_norm_distances(self, capsys):
        code, out, _ = run(capsys, "norm", "S5", "graph", "--classes", "C2")
        assert code == 0
        values = {}
        for line in out.splitlines():
            if line.startswith("C") and "\t" in line:
                cells = line.split("\t")
                values[cells[0]] = cells[3]
        assert values == {
            "C1": "0", "C2": "1", "C3": "2", "C2,2": "2",
            "C4": "3", "C2,3": "3", "C5": "4",
        }

    def test_character_norm_bundled(self, capsys):
        code, out, _ = run(capsys, "norm", "S5", "character")
        assert code == 0
        assert "0.894427191" in out  # sqrt(4/5) to 12 significant digits

    def test_unknown_group_is_usage_error(self, capsys):
        code, _, err = run(capsys, "norm", "NoSuch", "hamming")
        assert code == 1
        assert "error" in err

    def test_graph_needs_classes(self, capsys):
        code, _, err = run(capsys, "norm", "S4", "graph")
        assert code == 1


class TestConjgraph:
    def test_edge_list(self, capsys):
        code, out, _ = run(capsys, "conjgraph", "S5", "--classes", "C2")
        assert code == 0
        assert "7 vertices" in out
        assert "C1 -- C2" in out

    def test_empty_class_set(self, capsys):
        code, out, _ = run(capsys, "conjgraph", "S4")
        assert code == 0
        assert "0 edges" in out

    def test_dot_output(self, capsys):
        code, out, _ = run(capsys, "conjgraph", "S5", "--classes", "C2", "--dot")
        assert code == 0
        assert out.startswith("graph")
        assert '"C1" -- "C2";' in out

    def test_table_group_class_labels(self, capsys):
        code, out, _ = run(capsys, "conjgraph", "Q8", "--classes", "K1")
        assert code == 0


class TestAmplifyAndAhomCheck:
    def test_amplify_exact_embedding(self, capsys):
        code, out, _ = run(
            capsys, "amplify", "--degree", "3", "--hom", "(1 2);(1 2 3)",
            "--radius", "2", "--target-margin", "0.9",
        )
        assert code == 0
        assert "step 2: degree 81" in out
        assert "margin 80/81" in out

    def test_ahom_check_verdict(self, capsys):
        code, out, _ = run(
            capsys, "ahom-check", "--degree", "3", "--hom", "(1 2);(1 2 3)",
            "--radius", "2", "--eps", "0.1", "--alpha", "0.5",
        )
        assert code == 0
        assert "almost-homomorphism" in out
        assert "measured margin  = 2/3" in out

    def test_corrupt_requires_seed(self, capsys):
        code, _, err = run(
            capsys, "ahom-check", "--degree", "3", "--hom", "(1 2);(1 2 3)",
            "--radius", "2", "--eps", "0.1", "--alpha", "0.5", "--corrupt", "1",
        )
        assert code == 1

    def test_corrupted_run_is_seeded(self, capsys):
        argv = [
            "ahom-check", "--degree", "4", "--hom", "(1 2);(1 2 3 4)",
            "--radius", "2", "--eps", "0.9", "--alpha", "0.01",
            "--corrupt", "1", "--seed", "7",
        ]
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2


class TestSeparate:
    def test_model_passes(self, capsys):
        code, out, _ = run(
            capsys, "separate", "--degree", "3", "--hom", "(1 2);(1 2 3)",
            "-r", "3", "--eps", "0.1", "--delta", "0.5",
        )
        assert code == 0
        assert "pass (53 words)" in out

    def test_violations_exit_2(self, capsys):
        code, out, _ = run(
            capsys, "separate", "--degree", "3", "--hom", "(1 2);(1 2 3)",
            "-r", "3", "--eps", "0.1", "--delta", "0.7",
        )
        assert code == 2
        assert "violation" in out


class TestClosure:
    def test_howie_small_exits_zero(self, tmp_path, capsys):
        cfg = tmp_path / "howie.cfg"
        cfg.write_text(HOWIE_CONFIG)
        code, out, _ = run(capsys, "closure", str(cfg))
        assert code == 0
        assert '"witness_found":false' in out
        assert '"group":"S3"' in out and '"group":"S4"' in out

    def test_witness_exits_two(self, tmp_path, capsys):
        cfg = tmp_path / "witness.cfg"
        cfg.write_text(WITNESS_CONFIG)
        code, out, _ = run(capsys, "closure", str(cfg))
        assert code == 2
        assert '"witness"' in out
        assert '"brute_force_verified":true' in out

    def test_byte_identical_logs(self, tmp_path, capsys):
        cfg = tmp_path / "howie.cfg"
        cfg.write_text(HOWIE_CONFIG)
        out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert main(["closure", str(cfg), "--out", str(out1)]) == 0
        assert main(["closure", str(cfg), "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_mode_override_changes_run_id(self, tmp_path, capsys):
        cfg = tmp_path / "howie.cfg"
        cfg.write_text(HOWIE_CONFIG)
        _, out_exh, _ = run(capsys, "closure", str(cfg))
        _, out_smp, _ = run(
            capsys, "closure", str(cfg), "--mode", "sampled:10", "--seed", "5"
        )
        id_of = lambda text: text.split('"run_id":"')[1].split('"')[0]
        assert id_of(out_exh) != id_of(out_smp)

    def test_family_expansion(self, tmp_path, capsys):
        cfg = tmp_path / "fam.cfg"
        cfg.write_text("rank 2\ng X^2Y^3\ng X^2(xy)^5\nw xy^2\nfamily nilpotent16\n")
        code, out, _ = run(capsys, "closure", str(cfg), "--cap-order", "4")
        assert code == 0
        # orders 1..4 of the family survive the cap: Z1, Z2, Z3, Z4, Z2xZ2
        assert out.count('"type":"group"') == 5

    def test_malformed_config(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("rank 2\nnonsense\n")
        code, _, err = run(capsys, "closure", str(cfg))
        assert code == 1
        assert "line 2" in err


class TestVerifyCertificate:
    VALID = (
        "certificate v1\nrank 2\ng y\nw x\ntarget perm 4\n"
        "img (1 2)\nimg (3 4)\nend\n"
    )
    REFUTED = (
        "certificate v1\nrank 2\ng x\nw x\ntarget perm 2\n"
        "img (1 2)\nimg (1 2)\nend\n"
    )

    def test_valid_exits_zero(self, tmp_path, capsys):
        p = tmp_path / "c.cert"
        p.write_text(self.VALID)
        code, out, _ = run(capsys, "verify-certificate", str(p))
        assert code == 0
        assert "VALID" in out

    def test_refuted_exits_three(self, tmp_path, capsys):
        p = tmp_path / "c.cert"
        p.write_text(self.REFUTED)
        code, out, _ = run(capsys, "verify-certificate", str(p))
        assert code == 3
        assert "REFUTED" in out


class TestStabilize:
    def test_s5_transposition(self, capsys):
        code, out, _ = run(capsys, "stabilize", "S5", "(1 2)")
        assert code == 0
        assert "set size 60" in out
        assert "symmetrized variant equals normal closure: True" in out
        assert "paired-classes set equals normal closure: False" in out

    def test_table_group_element_index(self, capsys):
        code, out, _ = run(capsys, "stabilize", "Z4", "1")
        assert code == 0
        assert "set size 1" in out


class TestOutputFile:
    def test_out_flag_writes_file(self, tmp_path, capsys):
        target = tmp_path / "norm.txt"
        code, out, _ = run(capsys, "norm", "S3", "hamming", "--out", str(target))
        assert code == 0
        assert out == ""
        assert "overall: pass" in target.read_text()


class TestHelp:
    @pytest.mark.parametrize("command,construction", [
        ("norm", "Hamming"),
        ("conjgraph", "conjugacy-class graph"),
        ("amplify", "S_n x S_n"),
        ("ahom-check", "defect and margin"),
        ("separate", "(r,eps,delta) separation"),
        ("closure", "product of conjugacy classes"),
        ("stabilize", "conjugacy classes"),
        ("verify-certificate", "certificate"),
    ])
    def test_subcommand_help_names_its_construction(self, capsys, command, construction):
        with pytest.raises(SystemExit) as exc:
            main([command, "--help"])
        assert exc.value.code == 0
        out = capsys.readouterr().out
        assert construction in out
