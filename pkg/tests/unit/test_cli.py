# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

import json
from fractions import Fraction

import pytest

import cli
import qstruct
import rea
import tensor


def _json_lines(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines()]


def test_axioms(capsys):
    """
    arrange: none.
    act: run the axioms subcommand for N=2 with JSON output.
    assert: five passing certificates in a fixed order and exit code 0.
    """
    assert cli.main(["axioms", "--n", "2", "--json"]) == cli.EXIT_OK
    certs = _json_lines(capsys.readouterr().out)
    assert [c["claim"] for c in certs] == [
        "yang-baxter-n2",
        "hecke-condition-n2",
        "eps-eigenrelation-both-sides-n2",
        "eps-norm-n2",
        "qtrace-rhat-n2",
    ]
    assert all(c["status"] == "pass" for c in certs)
    assert certs[2]["parameters"] == {"kernel_dimension": 1}
    assert all("wall_time" not in c for c in certs)


def test_axioms_failure_exit_code(capsys, monkeypatch):
    """
    arrange: a q-trace residual that does not vanish.
    act: run the axioms subcommand.
    assert: the certificate fails with a witness and the exit code is 1.
    """
    monkeypatch.setattr(
        qstruct,
        "qtrace_rhat_residual",
        lambda rhat, d: tensor.TensorOp.identity(rhat.n, 1, tensor.LAURENT),
    )
    assert cli.main(["axioms", "--n", "2", "--json"]) == cli.EXIT_FAILED
    last = _json_lines(capsys.readouterr().out)[-1]
    assert last["status"] == "fail"
    assert last["witness"] == "1->1: 1*q^0; 2->2: 1*q^0"


def test_engine_error_becomes_failed_certificate(capsys, monkeypatch):
    """
    arrange: a rewrite system construction that raises PBWError.
    act: run the relations subcommand.
    assert: a failed certificate names the error and the exit code is 1.
    """

    def broken(relations, n):
        raise rea.PBWError("leading words differ")

    monkeypatch.setattr(rea, "build_rewrite_system", broken)
    assert cli.main(["relations", "--n", "2", "--json"]) == cli.EXIT_FAILED
    (cert,) = _json_lines(capsys.readouterr().out)
    assert cert["claim"] == "relations-n2"
    assert cert["witness"] == "PBWError: leading words differ"


@pytest.mark.parametrize(
    "argv",
    [
        ["axioms", "--n", "6"],
        ["newton", "--n", "4"],
        ["newton", "--n", "0"],
        ["eval", "--n", "2", "--q", "0"],
        ["eval", "--n", "2", "--q", "three"],
        ["higher", "--n", "2", "--p", "0"],
        ["confluence", "--n", "2", "--degree", "2"],
        ["classical", "--n", "2", "--seed", "-1"],
        ["eval", "--n", "2", "--rep", "other"],
        ["unknown", "--n", "2"],
        ["axioms"],
    ],
)
def test_invalid_arguments(argv, capsys):
    """
    arrange: invalid command lines.
    act: run main.
    assert: the exit code is 2 and nothing is written to stdout.
    """
    assert cli.main(argv) == cli.EXIT_INVALID
    assert capsys.readouterr().out == ""


def test_run_options():
    """
    arrange: none.
    act: validate options with and without q.
    assert: q is parsed exactly and defaults cover both samples and seeds 0..19.
    """
    options = cli.RunOptions(command="eval", n=2, q="7/2")
    assert options.q == Fraction(7, 2)
    assert options.q_samples == (Fraction(7, 2),)
    defaults = cli.RunOptions(command="classical", n=3)
    assert defaults.q_samples == (Fraction(3, 5), Fraction(7, 2))
    assert list(defaults.seeds) == list(range(20))
    with pytest.raises(cli.InvalidArgumentsError):
        cli.parse_options(["alpha", "--n", "7"])


def test_dump_rhat(tmp_path):
    """
    arrange: an output file.
    act: dump R̂ for N=2.
    assert: the file loads back into the same operator.
    """
    out = tmp_path / "rhat.json"
    assert cli.main(["dump-rhat", "--n", "2", "--out", str(out)]) == cli.EXIT_OK
    loaded = tensor.load_json(out.read_text(encoding="utf-8"))
    assert loaded == qstruct.build_rhat(2).op


def test_dump_eps(capsys):
    """
    arrange: none.
    act: dump ε_q for N=3 to stdout.
    assert: six cotensor entries in the Laurent ring.
    """
    assert cli.main(["dump-eps", "--n", "3"]) == cli.EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document["ring"] == "laurent"
    assert len(document["entries"]) == 6
    assert all("col" not in e for e in document["entries"])


def test_relations_dump(tmp_path, capsys):
    """
    arrange: a rules file.
    act: run relations for N=2 with --dump.
    assert: rank and PBW certificates pass and six rules are written.
    """
    rules = tmp_path / "rules.json"
    assert cli.main(["relations", "--n", "2", "--json", "--dump", str(rules)]) == cli.EXIT_OK
    certs = _json_lines(capsys.readouterr().out)
    assert [c["claim"] for c in certs] == ["relation-rank-n2", "pbw-leading-words-n2"]
    assert certs[0]["parameters"] == {"rank": 6}
    assert len(json.loads(rules.read_text(encoding="utf-8"))) == 6


def test_alpha_text_report(capsys):
    """
    arrange: none.
    act: run alpha for N=3 with the text report.
    assert: the report lists the passing claim and the summary.
    """
    assert cli.main(["alpha", "--n", "3"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "[PASS] alpha-table-n3" in out
    assert "1/1 certificates passed" in out


def test_newton_and_cayley(capsys):
    """
    arrange: none.
    act: run newton and cayley for N=2.
    assert: every certificate passes.
    """
    assert cli.main(["newton", "--n", "2", "--json"]) == cli.EXIT_OK
    assert [c["claim"] for c in _json_lines(capsys.readouterr().out)] == [
        "newton-relation-i1-n2",
        "newton-relation-i2-n2",
    ]
    assert cli.main(["cayley", "--n", "2", "--json", "--timing"]) == cli.EXIT_OK
    (cert,) = _json_lines(capsys.readouterr().out)
    assert cert["claim"] == "cayley-hamilton-n2"
    assert cert["wall_time"] >= 0


def test_bmatrix(capsys):
    """
    arrange: none.
    act: run bmatrix for N=2.
    assert: the relation holds for β = q² and fails for β = q³.
    """
    assert cli.main(["bmatrix", "--n", "2", "--json"]) == cli.EXIT_OK
    certs = _json_lines(capsys.readouterr().out)
    assert [c["claim"] for c in certs] == ["b-matrix-relation-n2", "b-matrix-shift-forced-n2"]
    assert all(c["status"] == "pass" for c in certs)


def test_eval_single_identity(capsys):
    """
    arrange: none.
    act: evaluate the Newton relations in L = 1 at q = 7/2.
    assert: one passing certificate.
    """
    argv = ["eval", "--n", "2", "--q", "7/2", "--rep", "identity", "--check", "newton", "--json"]
    assert cli.main(argv) == cli.EXIT_OK
    (cert,) = _json_lines(capsys.readouterr().out)
    assert cert["claim"] == "rep-identity-newton-n2-q7_2"


def test_eval_claims_are_unique(capsys):
    """
    arrange: none.
    act: evaluate every identity in both representations at q = 3/5.
    assert: no claim id repeats and each names its representation.
    """
    assert cli.main(["eval", "--n", "2", "--q", "3/5", "--json"]) == cli.EXIT_OK
    claims = [c["claim"] for c in _json_lines(capsys.readouterr().out)]
    assert len(claims) == len(set(claims)) == 11
    assert "rep-identity-cayley-n2-q3_5" in claims
    assert "rep-rsquared-cayley-n2-q3_5" in claims


def test_classical(capsys):
    """
    arrange: none.
    act: run classical for N=2 and one seed.
    assert: the textbook check and the q = 1 collapse pass.
    """
    assert cli.main(["classical", "--n", "2", "--seed", "4", "--json"]) == cli.EXIT_OK
    claims = [c["claim"] for c in _json_lines(capsys.readouterr().out)]
    assert claims == ["classical-limit-n2-seed4", "q1-collapse-n2-seed4"]


def test_output_file(tmp_path, capsys):
    """
    arrange: an output file.
    act: run det for N=2 writing to the file.
    assert: the report goes to the file, not stdout.
    """
    out = tmp_path / "det.txt"
    assert cli.main(["det", "--n", "2", "--out", str(out)]) == cli.EXIT_OK
    assert capsys.readouterr().out == ""
    assert "[PASS] quantum-determinant-n2" in out.read_text(encoding="utf-8")


@pytest.mark.parametrize(
    "flag, command",
    [("--out", "det"), ("--out", "dump-rhat"), ("--dump", "relations")],
)
def test_unwritable_output_path(tmp_path, capsys, flag, command):
    """
    arrange: a path inside a directory that does not exist.
    act: run a command writing to that path.
    assert: the exit code is 2, nothing reaches stdout and stderr names the problem.
    """
    target = tmp_path / "missing" / "output.txt"
    assert cli.main([command, "--n", "2", flag, str(target)]) == cli.EXIT_INVALID
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "cannot write output" in captured.err
    assert not target.exists()


def test_suite_n1(capsys):
    """
    arrange: none.
    act: run the full pipeline for N=1.
    assert: every certificate passes.
    """
    assert cli.main(["suite", "--n", "1", "--json"]) == cli.EXIT_OK
    certs = _json_lines(capsys.readouterr().out)
    assert all(c["status"] == "pass" for c in certs), [c for c in certs if c["witness"]]
    assert certs[0]["claim"] == "yang-baxter-n1"
    claims = [c["claim"] for c in certs]
    assert len(claims) == len(set(claims))
