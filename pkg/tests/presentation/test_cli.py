"""cli.py のテスト。"""

import io
import json
import shutil
from pathlib import Path

import pytest

import hypal
from hypal.application.amenability_service import Mean, verify_mean
from hypal.application.corpus import s3_conjugacy
from hypal.application.haar_service import Normalization, check_left_invariance, normalize
from hypal.application.k_polytope import build_K
from hypal.application.ppt_service import verify_ppt_certificate
from hypal.domain.algebra import integrate
from hypal.domain.measure import FunctionOnH, Measure
from hypal.infrastructure.document_io import load_document, parse_rational
from hypal.presentation import cli
from hypal.presentation.cli import (
    EXIT_FAIL,
    EXIT_INPUT,
    EXIT_OK,
    REPORT_SUFFIX,
    main,
    run_command,
)

FIXTURES = Path(hypal.__file__).parent / "fixtures"


def fixture(name: str) -> str:
    return str(FIXTURES / name)


def _measure(elements: tuple[str, ...], data: dict[str, str]) -> Measure:
    return Measure.from_mapping(elements, {k: parse_rational(v, k) for k, v in data.items()})


@pytest.fixture
def broken_file(tmp_path: Path) -> Path:
    path = tmp_path / "broken.json"
    path.write_text(
        json.dumps(
            {
                "name": "broken",
                "elements": ["e", "a"],
                "involution": {"e": "e", "a": "a"},
                "convolution": {"a,a": {"e": "1/4", "a": "1/2"}},
            }
        ),
        encoding="utf-8",
    )
    return path


class TestValidate:
    def test_valid(self) -> None:
        result = run_command(["validate", fixture("s3c.json")])
        assert result.exit_code == EXIT_OK
        assert result.report is not None
        assert result.report["valid"] is True
        assert [c["axiom"] for c in result.report["checks"]] == ["A", "B", "C", "D", "E", "3", "4"]

    def test_axiom_violation(self) -> None:
        result = run_command(["validate", fixture("nosupport.json"), "--json"])
        assert result.exit_code == EXIT_FAIL
        doc = json.loads(result.text)
        failing = [c for c in doc["checks"] if c["status"] == "fail"]
        assert [c["axiom"] for c in failing] == ["E"]
        assert failing[0]["witness"]["elements"] == ["a", "a"]

    def test_nonassociative_witness(self) -> None:
        result = run_command(["validate", fixture("nonassoc.json")])
        assert result.exit_code == EXIT_FAIL
        assert result.report is not None
        check = next(c for c in result.report["checks"] if c["axiom"] == "A")
        assert check["witness"]["elements"] == ["a", "a", "b", "e"]
        assert (check["witness"]["left"], check["witness"]["right"]) == ("1/4", "1/6")

    def test_malformed_document(self, broken_file: Path) -> None:
        result = run_command(["validate", str(broken_file)])
        assert result.exit_code == EXIT_INPUT
        assert "sums to 3/4" in result.text
        assert "convolution['a,a']" in result.errors[0]

    def test_writes_report(self, tmp_path: Path) -> None:
        out = tmp_path / "report.json"
        result = run_command(["validate", fixture("z3.json"), "-o", str(out)])
        assert result.exit_code == EXIT_OK
        assert json.loads(out.read_text(encoding="utf-8"))["name"] == "Z3"

    def test_text_output(self) -> None:
        result = run_command(["validate", fixture("s3c.json")])
        assert result.text.startswith("[validate] S3c")


class TestUsage:
    def test_unknown_flag(self) -> None:
        result = run_command(["validate", fixture("z2.json"), "--bogus"])
        assert result.exit_code == EXIT_INPUT
        assert "usage:" in result.text

    def test_missing_subcommand(self) -> None:
        assert run_command([]).exit_code == EXIT_INPUT

    def test_ppt_requires_f(self) -> None:
        assert run_command(["ppt", fixture("z2.json")]).exit_code == EXIT_INPUT

    def test_help(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run_command(["--help"]).exit_code == EXIT_OK
        assert "hypal" in capsys.readouterr().out

    def test_bad_seed(self) -> None:
        result = run_command(["mean", fixture("z2.json")], environ={"HYPAL_SEED": "x"})
        assert result.exit_code == EXIT_INPUT
        assert "HYPAL_SEED" in result.text

    def test_internal_errors_are_not_input_errors(self, monkeypatch: pytest.MonkeyPatch) -> None:
        def broken(*_: object) -> None:
            raise ValueError("shape mismatch")

        monkeypatch.setitem(cli.COMMANDS, "validate", broken)
        with pytest.raises(ValueError, match="shape mismatch"):
            run_command(["validate", fixture("z2.json")])


class TestHaar:
    def test_direct(self) -> None:
        result = run_command(["haar", fixture("h2_quarter.json"), "--method", "direct"])
        assert result.exit_code == EXIT_OK
        assert result.report is not None
        assert result.report["weights"] == {"e": "1", "a": "4"}
        assert result.report["invariance"]["ok"] is True

    def test_nullspace_default(self) -> None:
        result = run_command(["haar", fixture("d4c.json"), "--json"])
        assert result.exit_code == EXIT_OK
        doc = json.loads(result.text)
        assert doc["method"] == "nullspace"
        assert doc["weights"] == {"e": "1", "z": "1", "r": "2", "s": "2", "t": "2"}

    def test_cesaro_with_progress(self) -> None:
        stderr = io.StringIO()
        result = run_command(
            ["haar", fixture("s3c.json"), "--method", "cesaro", "--verbose"], stderr=stderr
        )
        assert result.exit_code == EXIT_OK
        assert result.report is not None
        assert result.report["exact"] is False
        identity = {k: float(v) for k, v in result.report["weights_identity_normalized"].items()}
        assert identity == pytest.approx({"e": 1.0, "t": 3.0, "c": 2.0})
        assert "Cesàro 反復" in stderr.getvalue()

    def test_invalid_table(self) -> None:
        assert run_command(["haar", fixture("nosupport.json")]).exit_code == EXIT_FAIL


class TestPpt:
    def test_holds(self) -> None:
        result = run_command(["ppt", fixture("s3c.json"), "--f-indicator", "t"])
        assert result.exit_code == EXIT_OK
        assert result.report is not None
        assert result.report["status"] == "holds"
        assert result.report["certificate"] is None

    def test_invalid_table_needs_relaxed(self) -> None:
        result = run_command(["ppt", fixture("nosupport.json"), "--f-indicator", "e"])
        assert result.exit_code == EXIT_FAIL
        assert result.report is not None
        assert result.report["command"] == "validate"

    def test_relaxed_certificate_reverifies(self) -> None:
        result = run_command(
            ["ppt", fixture("nosupport.json"), "--f-indicator", "e", "--relaxed", "--json"]
        )
        assert result.exit_code == EXIT_FAIL
        doc = json.loads(result.text)
        assert doc["status"] == "fails"
        assert doc["certificate"] == {"mu": {"a": "1"}, "nu": {}}
        table = load_document(fixture("nosupport.json"))
        mu = _measure(table.elements, doc["certificate"]["mu"])
        nu = _measure(table.elements, doc["certificate"]["nu"])
        assert verify_ppt_certificate(table, FunctionOnH.indicator(2, 0), mu, nu)

    def test_unknown_symbol(self) -> None:
        result = run_command(["ppt", fixture("s3c.json"), "--f-indicator", "x"])
        assert result.exit_code == EXIT_INPUT
        assert "'x'" in result.text


class TestGammaAndMean:
    def test_gamma(self) -> None:
        f = fixture("f_s3c_mixed.json")
        result = run_command(["gamma", fixture("s3c.json"), "--f-file", f, "--g-file", f])
        assert result.exit_code == EXIT_OK
        assert result.report is not None
        assert result.report["well_defined"] is True
        assert result.report["positive"] is True
        assert result.report["gamma_of_f_range"] == {"lower": "1", "upper": "1"}

    def test_mean(self) -> None:
        result = run_command(["mean", fixture("h2_half.json"), "--samples", "3"])
        assert result.exit_code == EXIT_OK
        assert result.report is not None
        assert result.report["weights"] == {"e": "1/3", "a": "2/3"}
        assert result.report["verification"]["functions_checked"] == 5


class TestReport:
    def test_single(self) -> None:
        result = run_command(["report", fixture("s3c.json"), "--samples", "2"])
        assert result.exit_code == EXIT_OK
        assert result.report is not None
        assert result.report["conditions"] == {
            "haar_exists": True,
            "ppt_all_tested": True,
            "ppt_some": True,
        }
        assert result.report["consistent"] is True
        assert result.report["haar"] == {"e": "1", "t": "3", "c": "2"}

    def test_entries_reverify(self) -> None:
        result = run_command(["report", fixture("s3c.json"), "--samples", "2", "--json"])
        assert result.exit_code == EXIT_OK
        doc = json.loads(result.text)
        table = load_document(fixture("s3c.json"))

        haar = _measure(table.elements, doc["haar"])
        assert doc["haar_normalization"] == Normalization.IDENTITY.value
        assert check_left_invariance(table, haar).ok

        mean = Mean(_measure(table.elements, doc["mean"]))
        assert mean.weights == normalize(haar, Normalization.MASS)
        assert verify_mean(table, mean).ok

        assert len(doc["functions"]) == table.n + 2
        for chain in doc["functions"]:
            f = FunctionOnH(_measure(table.elements, chain["f"]).weights)
            point = _measure(table.elements, chain["k_point"])
            assert build_K(table, f).contains(point), chain["label"]
            assert parse_rational(chain["gamma_of_f"], "gamma_of_f") == integrate(point, f) == 1

    def test_all(self, tmp_path: Path, broken_file: Path) -> None:
        for name in ("s3c.json", "nosupport.json"):
            shutil.copy(FIXTURES / name, tmp_path / name)
        result = run_command(["report", "--all", str(tmp_path), "--samples", "1", "--workers", "2"])
        assert result.exit_code == EXIT_INPUT
        assert result.report is not None
        codes = {e["file"]: e["exit_code"] for e in result.report["files"]}
        assert codes == {"broken.json": EXIT_INPUT, "nosupport.json": EXIT_FAIL, "s3c.json": EXIT_OK}
        written = sorted(p.name for p in tmp_path.glob(f"*{REPORT_SUFFIX}"))
        assert written == [f"broken{REPORT_SUFFIX}", f"nosupport{REPORT_SUFFIX}", f"s3c{REPORT_SUFFIX}"]

    def test_all_into_output_directory(self, tmp_path: Path) -> None:
        src, out = tmp_path / "in", tmp_path / "out"
        src.mkdir()
        shutil.copy(FIXTURES / "z2.json", src / "z2.json")
        result = run_command(["report", "--all", str(src), "-o", str(out), "--samples", "1"])
        assert result.exit_code == EXIT_OK
        assert (out / f"z2{REPORT_SUFFIX}").exists()
        assert not list(src.glob(f"*{REPORT_SUFFIX}"))


class TestGen:
    def test_conjugacy(self, tmp_path: Path) -> None:
        out = tmp_path / "s3c.json"
        result = run_command(
            ["gen", "--family", "conjugacy", "--builtin", "s3", "--names", "e,t,c", "-o", str(out)]
        )
        assert result.exit_code == EXIT_OK
        assert load_document(out) == s3_conjugacy().table

    def test_group_from_document(self, tmp_path: Path) -> None:
        out = tmp_path / "s3.json"
        result = run_command(["gen", "--family", "group", "--group", fixture("s3_group.json"), "-o", str(out)])
        assert result.exit_code == EXIT_OK
        assert load_document(out) == load_document(fixture("s3.json"))

    def test_order2(self, tmp_path: Path) -> None:
        out = tmp_path / "h.json"
        result = run_command(["gen", "--family", "order2", "--alpha", "1/4", "-o", str(out)])
        assert result.exit_code == EXIT_OK
        assert load_document(out) == load_document(fixture("h2_quarter.json"))

    def test_order2_zero_needs_relaxed(self, tmp_path: Path) -> None:
        out = tmp_path / "h.json"
        assert run_command(["gen", "--family", "order2", "--alpha", "0", "-o", str(out)]).exit_code == EXIT_INPUT
        result = run_command(["gen", "--family", "order2", "--alpha", "0", "--relaxed", "-o", str(out)])
        assert result.exit_code == EXIT_OK
        assert result.report is not None
        assert result.report["valid"] is False

    def test_needs_output(self) -> None:
        assert run_command(["gen", "--family", "group", "--builtin", "z2"]).exit_code == EXIT_INPUT

    def test_needs_group_source(self, tmp_path: Path) -> None:
        result = run_command(["gen", "--family", "group", "-o", str(tmp_path / "g.json")])
        assert result.exit_code == EXIT_INPUT


class TestMain:
    def test_exit_code(self, capsys: pytest.CaptureFixture[str]) -> None:
        with pytest.raises(SystemExit) as info:
            main(["validate", fixture("nonassoc.json")])
        assert info.value.code == EXIT_FAIL
        assert "[validate] NonAssoc" in capsys.readouterr().out

    def test_input_error_goes_to_stderr(self, capsys: pytest.CaptureFixture[str]) -> None:
        with pytest.raises(SystemExit) as info:
            main(["validate", fixture("missing.json")])
        assert info.value.code == EXIT_INPUT
        assert "hypal: error" in capsys.readouterr().err
