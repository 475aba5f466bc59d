import json
import subprocess
import sys

import numpy as np
import pytest

import biunitary as b
from biunitary.cli import main

from conftest import twisted_fourier


@pytest.fixture(scope="module")
def docs(tmp_path_factory):
    """A directory of ready-made documents for CLI runs."""
    root = tmp_path_factory.mktemp("docs")

    def put(name, structure):
        path = root / name
        b.save(structure, path)
        return path

    put("h4.json", b.fourier(4))
    put("twisted3.json", b.HadamardMatrix(twisted_fourier(3, seed=7)))
    put("h3.json", b.fourier(3))
    put("kron22.json", b.HadamardMatrix(np.kron(b.fourier(2).matrix, b.fourier(2).matrix)))
    put("fam3.json", b.ControlledFamily.constant(b.fourier(3), (3,)))
    put("q3.json", b.qls_from_latin(b.cyclic_latin(3)))
    put("u2.json", b.pauli_ueb(2))
    put("latin3.json", b.cyclic_latin(3))
    put("ref.json", b.build_reference_ueb())

    # a slightly perturbed candidate: fails at default tolerance only
    bad = b.fourier(2).matrix.copy()
    bad[0, 0] *= np.exp(1e-6j)
    doc = {
        "kind": "hadamard",
        "dims": {"dimension": 2},
        "index_base": 1,
        "data": [[[z.real, z.imag] for z in row] for row in bad],
    }
    (root / "near2.json").write_text(json.dumps(doc))

    ones = {
        "kind": "hadamard",
        "dims": {"dimension": 2},
        "index_base": 1,
        "data": [[[1.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [1.0, 0.0]]],
    }
    (root / "ones.json").write_text(json.dumps(ones))
    return root


def run_cli(*argv):
    return main([str(a) for a in argv])


class TestVerify:
    def test_hadamard_pass(self, docs, capsys):
        assert run_cli("verify", "hadamard", docs / "h4.json") == 0
        out = capsys.readouterr().out
        assert out.startswith("pass, λ=4")

    def test_qls_pass(self, docs, capsys):
        assert run_cli("verify", "qls", docs / "q3.json") == 0
        assert capsys.readouterr().out.startswith("pass, λ=1")

    def test_ueb_pass(self, docs, capsys):
        assert run_cli("verify", "ueb", docs / "u2.json") == 0
        assert capsys.readouterr().out.startswith("pass, λ=2")

    def test_latin_pass(self, docs, capsys):
        assert run_cli("verify", "latin", docs / "latin3.json") == 0
        assert "Latin square of order 3" in capsys.readouterr().out

    def test_controlled_pass(self, docs, capsys):
        assert run_cli("verify", "controlled", docs / "fam3.json") == 0
        assert capsys.readouterr().out.startswith("pass")

    def test_failing_candidate(self, docs, capsys):
        assert run_cli("verify", "hadamard", docs / "ones.json") == 1
        out = capsys.readouterr().out
        assert out.startswith("fail")

    def test_kind_mismatch(self, docs, capsys):
        assert run_cli("verify", "ueb", docs / "h4.json") == 1
        err = capsys.readouterr().err
        assert "document holds a 'hadamard', not a 'ueb'" in err

    def test_missing_file(self, docs, capsys):
        assert run_cli("verify", "hadamard", docs / "nope.json") == 1
        assert capsys.readouterr().err.startswith("error:")

    def test_tol_override(self, docs, capsys):
        assert run_cli("verify", "hadamard", docs / "near2.json") == 1
        capsys.readouterr()
        assert run_cli("verify", "hadamard", docs / "near2.json", "--tol", "1e-3") == 0
        capsys.readouterr()

    def test_json_output_is_stable(self, docs, capsys):
        assert run_cli("verify", "ueb", docs / "u2.json", "--json") == 0
        first = capsys.readouterr().out
        assert run_cli("verify", "ueb", docs / "u2.json", "--json") == 0
        second = capsys.readouterr().out
        assert first == second
        payload = json.loads(first)
        assert payload["kind"] == "ueb"
        assert payload["passed"] is True
        assert payload["verifier"]["lambda"] == 2.0

    def test_json_error_goes_to_stdout(self, docs, capsys):
        assert run_cli("verify", "ueb", docs / "h4.json", "--json") == 1
        payload = json.loads(capsys.readouterr().out)
        assert "error" in payload


class TestUsage:
    def test_no_arguments(self, capsys):
        assert run_cli() == 2
        capsys.readouterr()

    def test_unknown_subcommand(self, capsys):
        assert run_cli("frobnicate") == 2
        capsys.readouterr()

    def test_unknown_construction(self, docs, capsys):
        assert run_cli("construct", "nonesuch", "-o", docs / "x.json") == 2
        capsys.readouterr()

    def test_help_exits_zero(self, capsys):
        assert run_cli("--help") == 0
        assert "biunitary" in capsys.readouterr().out


class TestConstruct:
    def test_pipeline(self, docs, tmp_path, capsys):
        out = tmp_path / "u.json"
        code = run_cli(
            "construct", "qsm",
            "--hadamards", docs / "fam3.json",
            "--qls", docs / "q3.json",
            "-o", out,
        )
        assert code == 0
        assert "wrote ueb of dimension 3" in capsys.readouterr().out
        assert run_cli("verify", "ueb", out) == 0
        assert capsys.readouterr().out.startswith("pass")

    def test_two_inputs_same_role(self, docs, tmp_path, capsys):
        out = tmp_path / "q.json"
        code = run_cli(
            "construct", "had_had_to_qls",
            "--hadamard", docs / "h3.json",
            "--hadamard", docs / "h3.json",
            "-o", out,
        )
        assert code == 0
        assert "wrote qls of dimension 3" in capsys.readouterr().out
        assert isinstance(b.load(out), b.QuantumLatinSquare)

    def test_json_summary(self, docs, tmp_path, capsys):
        out = tmp_path / "u.json"
        code = run_cli(
            "construct", "qsm",
            "--hadamards", docs / "fam3.json",
            "--qls", docs / "q3.json",
            "-o", out, "--json",
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload == {
            "construction": "qsm",
            "kind": "ueb",
            "dimension": 3,
            "output": str(out),
        }

    def test_missing_input(self, docs, tmp_path, capsys):
        code = run_cli(
            "construct", "qsm", "--qls", docs / "q3.json", "-o", tmp_path / "x.json"
        )
        assert code == 1
        assert "--hadamards" in capsys.readouterr().err

    def test_leftover_input(self, docs, tmp_path, capsys):
        code = run_cli(
            "construct", "qsm",
            "--hadamards", docs / "fam3.json",
            "--qls", docs / "q3.json",
            "--ueb", docs / "u2.json",
            "-o", tmp_path / "x.json",
        )
        assert code == 1
        err = capsys.readouterr().err
        assert "unused inputs for qsm" in err
        assert "ueb" in err

    def test_wrong_role_type(self, docs, tmp_path, capsys):
        code = run_cli(
            "construct", "qsm",
            "--hadamards", docs / "h3.json",
            "--qls", docs / "q3.json",
            "-o", tmp_path / "x.json",
        )
        assert code == 1
        assert "controlled family of Hadamards" in capsys.readouterr().err

    def test_f_family_requires_arity(self, docs, tmp_path, capsys):
        code = run_cli("construct", "f_family", "-o", tmp_path / "x.json")
        assert code == 1
        assert "--arity" in capsys.readouterr().err


class TestEquiv:
    def test_equivalent_pair(self, docs, capsys):
        assert run_cli("equiv", "hadamard", docs / "twisted3.json", docs / "h3.json") == 0
        out = capsys.readouterr().out
        assert out.startswith("equivalent")
        assert "row permutation (1-based)" in out
        assert "residual" in out

    def test_not_equivalent_is_exit_zero(self, docs, capsys):
        assert run_cli("equiv", "hadamard", docs / "h4.json", docs / "kron22.json") == 0
        assert capsys.readouterr().out.strip() == "not equivalent"

    def test_json_witness(self, docs, capsys):
        assert (
            run_cli("equiv", "hadamard", docs / "twisted3.json", docs / "h3.json", "--json")
            == 0
        )
        payload = json.loads(capsys.readouterr().out)
        assert payload["equivalent"] is True
        witness = payload["witness"]
        assert sorted(witness["row_perm"]) == [1, 2, 3]
        assert witness["residual"] <= 1e-10
        assert len(witness["row_phases"][0]) == 2

    def test_wrong_kind(self, docs, capsys):
        assert run_cli("equiv", "hadamard", docs / "h4.json", docs / "u2.json") == 1
        assert "two Hadamard documents" in capsys.readouterr().err


class TestGraph:
    def test_small_basis(self, docs, capsys):
        assert run_cli("graph", "commute", docs / "u2.json") == 0
        out = capsys.readouterr().out
        assert out.startswith("4 vertices, 3 edges")
        assert "  1 -- 2" in out

    def test_exclude_identity(self, docs, capsys):
        assert run_cli("graph", "commute", docs / "u2.json", "--exclude-identity") == 0
        assert capsys.readouterr().out.startswith("3 vertices, 0 edges")

    def test_reference_labels_and_clique(self, docs, capsys):
        code = run_cli("graph", "commute", docs / "ref.json", "--max-clique", "--json")
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["vertices"]) == 64
        assert payload["vertices"][0] == "111"
        assert ["121", "131"] in payload["edges"]
        assert payload["max_clique"] == {
            "size": 4,
            "witness": ["111", "114", "121", "124"],
        }

    def test_clique_without_identity(self, docs, capsys):
        code = run_cli(
            "graph", "commute", docs / "ref.json",
            "--max-clique", "--exclude-identity", "--json",
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["vertices"]) == 63
        assert payload["max_clique"]["size"] == 3
        assert "111" not in payload["max_clique"]["witness"]


class TestNormalize:
    def test_integer_pivot(self, docs, tmp_path, capsys):
        out = tmp_path / "n.json"
        assert run_cli("normalize", docs / "u2.json", "--pivot", "3", "-o", out) == 0
        capsys.readouterr()
        u = b.load(out)
        assert np.allclose(u.elements[2], np.eye(2), atol=1e-12)

    def test_triple_pivot_on_reference(self, docs, tmp_path, capsys):
        out = tmp_path / "n.json"
        code = run_cli("normalize", docs / "ref.json", "--pivot", "2,1,1", "-o", out)
        assert code == 0
        capsys.readouterr()
        u = b.load(out)
        k = b.label_to_index("211")
        assert np.allclose(u.elements[k], np.eye(8), atol=1e-12)

    def test_triple_pivot_needs_reference_size(self, docs, tmp_path, capsys):
        code = run_cli(
            "normalize", docs / "u2.json", "--pivot", "1,1,2", "-o", tmp_path / "n.json"
        )
        assert code == 1
        assert "pivot" in capsys.readouterr().err

    def test_pivot_out_of_range(self, docs, tmp_path, capsys):
        code = run_cli(
            "normalize", docs / "u2.json", "--pivot", "5", "-o", tmp_path / "n.json"
        )
        assert code == 1
        capsys.readouterr()

    def test_json_summary(self, docs, tmp_path, capsys):
        out = tmp_path / "n.json"
        code = run_cli(
            "normalize", docs / "u2.json", "--pivot", "2", "-o", out, "--json"
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload == {
            "kind": "ueb",
            "dimension": 2,
            "pivot": 2,
            "output": str(out),
        }


class TestReproduce:
    def test_pass_line(self, capsys):
        assert run_cli("reproduce", "appendix-a") == 0
        out = capsys.readouterr().out
        assert "64/64 matrices match" in out
        assert "tolerance 1e-12" in out
        assert "not nice: the adjoint of element 112" in out
        assert "max commuting subset 4 < 8" in out

    def test_json(self, capsys):
        assert run_cli("reproduce", "appendix-a", "--json") == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["matches"] == 64
        assert payload["total"] == 64
        assert payload["max_deviation"] == 0.0
        assert payload["not_nice"] == {"verdict": True, "witness": "112"}
        assert payload["not_qsm"]["max_commuting"] == 4
        assert payload["not_qsm"]["witness"] == ["111", "114", "121", "124"]
        assert payload["passed"] is True

    def test_alternate_fixture(self, docs, capsys):
        assert run_cli("reproduce", "appendix-a", "--fixture", docs / "ref.json") == 0
        capsys.readouterr()

    def test_mismatched_fixture_fails(self, docs, tmp_path, capsys):
        fixture = b.load_reference_fixture()
        elements = fixture.elements.copy()
        elements[5] = elements[5] * np.exp(0.25j)
        altered = tmp_path / "altered.json"
        b.save(b.UnitaryErrorBasis(elements), altered)
        assert run_cli("reproduce", "appendix-a", "--fixture", altered) == 1
        assert "63/64 matrices match" in capsys.readouterr().out


def test_console_script_installed(docs):
    proc = subprocess.run(
        ["biunitary", "verify", "hadamard", str(docs / "h4.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("pass")


def test_module_matches_script():
    proc = subprocess.run(
        [sys.executable, "-c", "from biunitary.cli import main; raise SystemExit(main(['--help']))"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
