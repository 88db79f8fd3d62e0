import json

import numpy as np
import pytest

from bminimal import io as bio
from bminimal.cli import main
from bminimal.moment import Subspace

IV = 1 / np.sqrt(2)
M1 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)


def write_matrix(path, m):
    path.write_text(bio.dumps(bio.matrix_to_doc(m)))
    return str(path)


def write_frame(path, cols):
    s = Subspace.from_span(np.column_stack([np.asarray(c, dtype=complex) for c in cols]))
    path.write_text(bio.dumps(bio.frame_to_doc(s)))
    return str(path)


@pytest.fixture
def m1_file(tmp_path):
    return write_matrix(tmp_path / "m1.json", M1)


class TestCheck:
    def test_minimal_exit_zero(self, m1_file, capsys):
        code = main(["check", "--matrix", m1_file, "--algebra", "diag"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        assert doc["verdict"] == "minimal"
        assert doc["certificate"]["residual_perp"] <= 1e-10

    def test_not_minimal_exit_one(self, tmp_path, capsys):
        path = write_matrix(tmp_path / "d.json", np.diag([1.0, -1.0, 0.0]))
        code = main(["check", "--matrix", path, "--algebra", "diag"])
        assert code == 1
        assert json.loads(capsys.readouterr().out)["verdict"] == "not_minimal"

    def test_malformed_json_exit_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code = main(["check", "--matrix", str(bad), "--algebra", "diag"])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_missing_file_exit_two(self, tmp_path):
        assert main(["check", "--matrix", str(tmp_path / "nope.json"),
                     "--algebra", "diag"]) == 2

    def test_output_file_carries_timings(self, m1_file, tmp_path, capsys):
        out = tmp_path / "report.json"
        main(["check", "--matrix", m1_file, "--algebra", "diag",
              "--output", str(out)])
        stdout_doc = json.loads(capsys.readouterr().out)
        file_doc = json.loads(out.read_text())
        assert "timings" not in stdout_doc
        assert file_doc["timings"]["total_s"] >= 0.0
        assert file_doc["verdict"] == stdout_doc["verdict"]

    def test_deterministic_stdout(self, m1_file, capsys):
        main(["check", "--matrix", m1_file, "--algebra", "diag"])
        first = capsys.readouterr().out
        main(["check", "--matrix", m1_file, "--algebra", "diag"])
        second = capsys.readouterr().out
        assert first == second


class TestCertificate:
    def test_emits_certificate(self, m1_file, capsys):
        code = main(["certificate", "--matrix", m1_file, "--algebra", "diag"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        x = bio.matrix_from_doc(doc["x"])
        assert np.allclose(np.abs(x), [[0, 1, 0], [1, 0, 0], [0, 0, 0]], atol=1e-9)

    def test_refuses_when_not_minimal(self, tmp_path, capsys):
        path = write_matrix(tmp_path / "d.json", np.diag([2.0, 1.0]))
        code = main(["certificate", "--matrix", path, "--algebra", "diag"])
        assert code == 1
        assert "no certificate" in capsys.readouterr().err


class TestMoment:
    def test_deterministic_csv(self, tmp_path, capsys):
        frame = write_frame(tmp_path / "s.json", [[IV, IV, 0], [0, 0, 1]])
        args = ["moment", "--frame", frame, "--algebra", "diag",
                "--samples", "16", "--seed", "7"]
        main(args)
        first = capsys.readouterr().out
        main(args)
        second = capsys.readouterr().out
        assert first == second
        lines = first.strip().split("\n")
        assert lines[0] == "B_1,B_2,B_3"
        assert len(lines) == 17

    def test_rank_one_rows_identical(self, tmp_path, capsys):
        frame = write_frame(tmp_path / "v.json", [[IV, -IV, 0]])
        main(["moment", "--frame", frame, "--algebra", "diag",
              "--samples", "5", "--seed", "1"])
        rows = capsys.readouterr().out.strip().split("\n")[1:]
        assert len(set(rows)) == 1

    def test_rotated_basis_rows_transform(self, tmp_path, capsys):
        frame = write_frame(tmp_path / "s.json", [[IV, IV, 0], [0, 0, 1]])
        rot = {
            "kind": "custom",
            "n": 3,
            "elements": [
                bio.matrix_to_doc(np.diag([1.0, 0.0, 0.0])),
                bio.matrix_to_doc(np.diag([0.0, IV, -IV])),
                bio.matrix_to_doc(np.diag([0.0, IV, IV])),
            ],
        }
        rot_path = tmp_path / "rot.json"
        rot_path.write_text(bio.dumps(rot))
        main(["moment", "--frame", frame, "--algebra", "diag",
              "--samples", "10", "--seed", "3"])
        base = capsys.readouterr().out
        main(["moment", "--frame", frame, "--algebra", f"custom:{rot_path}",
              "--samples", "10", "--seed", "3"])
        rotated = capsys.readouterr().out
        parse = lambda text: np.array(
            [[float(v) for v in line.split(",")]
             for line in text.strip().split("\n")[1:]]
        )
        c = np.array([[1, 0, 0], [0, IV, -IV], [0, IV, IV]])
        assert np.allclose(parse(rotated), parse(base) @ c.T, atol=1e-10)

    def test_bad_frame_exit_two(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(bio.dumps({"n": 2, "columns": [[[1.0, 0.0], [0.0, 0.0]],
                                                      [[2.0, 0.0], [0.0, 0.0]]]}))
        assert main(["moment", "--frame", str(bad), "--algebra", "diag"]) == 2


class TestSupport:
    def test_true_pair(self, tmp_path, capsys):
        v = write_frame(tmp_path / "v.json", [[IV, IV, 0], [0, 0, 1]])
        w = write_frame(tmp_path / "w.json", [[IV, -IV, 0]])
        code = main(["support", "--v-frame", v, "--w-frame", w, "--algebra", "diag"])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["support_pair"] is True

    def test_false_pair(self, tmp_path, capsys):
        v = write_frame(tmp_path / "v.json", [[1, 0]])
        w = write_frame(tmp_path / "w.json", [[0, 1]])
        code = main(["support", "--v-frame", v, "--w-frame", w, "--algebra", "diag"])
        assert code == 1


class TestConstructAndCheck:
    def test_block_example_pipeline(self, tmp_path, capsys):
        v = write_frame(tmp_path / "v.json", [[0.5, 0.5, 0.5, 0.5]])
        w = write_frame(tmp_path / "w.json", [[-0.5, -0.5, 0.5, 0.5]])
        pv = np.full((4, 4), 0.25)
        qw = 0.25 * np.outer([-1, -1, 1, 1], [-1, -1, 1, 1])
        rest = write_matrix(tmp_path / "rest.json", 0.5 * (np.eye(4) - pv - qw))
        code = main(["construct", "--v-frame", v, "--w-frame", w, "--lam", "1.0",
                     "--rest", rest, "--algebra", "block:2d,2f"])
        assert code == 0
        built = bio.matrix_from_doc(json.loads(capsys.readouterr().out))
        expected = 1.0 * (pv - qw) + 0.5 * (np.eye(4) - pv - qw)
        assert np.allclose(built, expected, atol=1e-12)
        m_path = write_matrix(tmp_path / "m.json", built)
        assert main(["check", "--matrix", m_path, "--algebra", "block:2d,2f"]) == 0
        capsys.readouterr()


class TestBestApproxAndDirDeriv:
    def test_best_approx(self, tmp_path, capsys):
        path = write_matrix(tmp_path / "x.json", np.array([[0.0, 1.0], [1.0, 0.0]]))
        code = main(["best-approx", "--matrix", path, "--algebra", "diag",
                     "--x0", "1,-1", "--max-iter", "200"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        assert abs(doc["dist"] - 1.0) <= 0.02
        assert np.linalg.norm(doc["x_star"]) <= 0.05

    def test_dirderiv_zero_direction(self, m1_file, capsys):
        code = main(["dirderiv", "--matrix", m1_file, "--algebra", "diag",
                     "--w", "0,0,0"])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["value"] == 0.0

    def test_dirderiv_against_library(self, tmp_path, capsys):
        from bminimal.algebra import build_diagonal
        from bminimal.variational import AffineFamily, directional_derivative

        a = np.array([[1.0, 0.2], [0.2, -1.0]])
        path = write_matrix(tmp_path / "a.json", a)
        main(["dirderiv", "--matrix", path, "--algebra", "diag",
              "--x", "0.3,-0.1", "--w", "1,2"])
        got = json.loads(capsys.readouterr().out)["value"]
        fam = AffineFamily(a, build_diagonal(2))
        assert got == pytest.approx(
            directional_derivative(fam, [0.3, -0.1], [1.0, 2.0]), abs=0
        )


class TestLogging:
    def test_info_logs_to_stderr(self, m1_file, capsys, monkeypatch):
        monkeypatch.setenv("BMIN_LOG", "info")
        code = main(["check", "--matrix", m1_file, "--algebra", "diag"])
        captured = capsys.readouterr()
        assert code == 0
        assert "verdict minimal" in captured.err
        json.loads(captured.out)  # stdout stays pure JSON

    def test_off_is_silent(self, m1_file, capsys, monkeypatch):
        monkeypatch.setenv("BMIN_LOG", "off")
        main(["check", "--matrix", m1_file, "--algebra", "diag"])
        assert capsys.readouterr().err == ""

    def test_bad_level_exits_two(self, m1_file, capsys, monkeypatch):
        monkeypatch.setenv("BMIN_LOG", "loud")
        assert main(["check", "--matrix", m1_file, "--algebra", "diag"]) == 2
        assert "BMIN_LOG" in capsys.readouterr().err


class TestAlgebraSpecParsing:
    def test_unknown_spec(self, m1_file):
        assert main(["check", "--matrix", m1_file, "--algebra", "toeplitz"]) == 2

    def test_bad_block_spec(self, m1_file):
        assert main(["check", "--matrix", m1_file, "--algebra", "block:xyz"]) == 2

    def test_pauli_dimension_mismatch(self, m1_file):
        # matrix is 3x3, pauli:2 needs n = 4
        assert main(["check", "--matrix", m1_file, "--algebra", "pauli:2"]) == 2
