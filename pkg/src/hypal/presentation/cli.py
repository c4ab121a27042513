"""コマンドラインインターフェース。

終了コード: 0 = 成功 / 成立 / 妥当、1 = 性質の不成立・公理違反（証明書・証拠付き）、
2 = 入力エラー（構文、未知のシンボル、未知のフラグ等）。
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence, TextIO

from hypal.application.amenability_service import invariant_mean, verify_mean
from hypal.application.corpus import gen_conjugacy, gen_group, gen_order2
from hypal.application.equivalence_service import equivalence_report
from hypal.application.haar_service import (
    HaarMethod,
    check_left_invariance,
    fixed_point_haar,
)
from hypal.application.k_polytope import build_K, gamma_bounds, k_feasible
from hypal.application.ppt_service import gamma_positive, gamma_well_defined, ppt_check
from hypal.application.settings import ProgressCallback, SolverSettings
from hypal.domain.errors import HypalError
from hypal.domain.group import (
    GroupTable,
    cyclic_group,
    dihedral_group,
    quaternion_group,
    symmetric_group,
)
from hypal.domain.hypergroup import (
    ConvolutionTable,
    FiniteHypergroup,
    TableLike,
    as_table,
    validate_table,
)
from hypal.domain.measure import FunctionOnH
from hypal.infrastructure.document_io import (
    load_document,
    load_function,
    load_group,
    parse_rational,
    save_document,
    write_text_atomic,
)
from hypal.presentation.reports import (
    equivalence_dict,
    gamma_dict,
    haar_dict,
    mean_dict,
    ppt_dict,
    render_text,
    validation_dict,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

BUILTIN_GROUPS: dict[str, Callable[[], GroupTable]] = {
    "z2": lambda: cyclic_group(2),
    "z3": lambda: cyclic_group(3),
    "z4": lambda: cyclic_group(4),
    "s3": lambda: symmetric_group(3),
    "d4": lambda: dihedral_group(4),
    "q8": quaternion_group,
}

REPORT_SUFFIX = ".report.json"


@dataclass
class CommandResult:
    """run_command の結果。report は機械可読の辞書、text は標準出力に出す内容。"""

    exit_code: int
    report: dict[str, Any] | None = None
    text: str = ""
    errors: list[str] = field(default_factory=list)


class UsageError(Exception):
    """argparse の使い方エラー（終了コード 2）。"""

    def __init__(self, message: str, usage: str) -> None:
        super().__init__(message)
        self.usage = usage


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message, self.format_usage())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="機械可読な JSON を標準出力に出す")
    common.add_argument("-o", "--output", type=Path, help="レポートをファイルに書く（原子的に置換）")
    common.add_argument("--verbose", action="store_true", help="進捗を標準エラーに出す")

    def add_f_options(p: argparse.ArgumentParser, required: bool) -> None:
        group = p.add_mutually_exclusive_group(required=required)
        group.add_argument("--f-indicator", metavar="SYM", help="f = 元 SYM の指示関数")
        group.add_argument("--f-file", type=Path, metavar="FILE", help="関数文書から f を読む")

    parser = _ArgumentParser(
        prog="hypal",
        description="有限ハイパーグループの公理検証・ppt 判定・Haar 測度の構成",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("validate", parents=[common], help="公理 (A)〜(E) を検証する")
    p.add_argument("file", type=Path)

    p = sub.add_parser("haar", parents=[common], help="左 Haar 測度を求める")
    p.add_argument("file", type=Path)
    p.add_argument("--method", choices=[m.value for m in HaarMethod], default="nullspace")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=None)
    add_f_options(p, required=False)

    p = sub.add_parser("ppt", parents=[common], help="平行移動の正値性を判定する")
    p.add_argument("file", type=Path)
    add_f_options(p, required=True)
    p.add_argument("--relaxed", action="store_true", help="公理違反のテーブルも受け付ける")

    p = sub.add_parser("gamma", parents=[common], help="Γ_f の well-definedness と K の点")
    p.add_argument("file", type=Path)
    add_f_options(p, required=True)
    p.add_argument("--g-file", type=Path, metavar="FILE", help="Λ(g) の範囲を求める関数 g")

    p = sub.add_parser("mean", parents=[common], help="左不変平均を求めて検証する")
    p.add_argument("file", type=Path)
    p.add_argument("--samples", type=int, default=None)

    p = sub.add_parser("report", parents=[common], help="Haar 測度と ppt の同値性レポート")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("file", type=Path, nargs="?")
    target.add_argument("--all", type=Path, metavar="DIR", help="DIR 内の *.json を並列処理する")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--workers", type=int, default=4)

    p = sub.add_parser("gen", parents=[common], help="ハイパーグループ文書を生成する")
    p.add_argument("--family", choices=["group", "conjugacy", "order2"], required=True)
    p.add_argument("--alpha", help="order2 の α（p/q）")
    source = p.add_mutually_exclusive_group()
    source.add_argument("--group", type=Path, metavar="FILE", help="群文書")
    source.add_argument("--builtin", choices=sorted(BUILTIN_GROUPS), help="組み込みの群")
    p.add_argument("--names", help="共役類のシンボル（カンマ区切り）")
    p.add_argument("--relaxed", action="store_true", help="α = 0 など公理違反も出力する")
    return parser


# --- 共通処理 ---


def _stderr_progress(stream: TextIO) -> ProgressCallback:
    def report(stage: str, value: float) -> None:
        stream.write(f"{stage}: {value:.0%}\n")

    return report


def _load_valid(path: Path) -> tuple[ConvolutionTable, FiniteHypergroup | None, dict[str, Any]]:
    table = load_document(path)
    report = validate_table(table)
    return table, report.hypergroup, validation_dict(report)


def _test_function(args: argparse.Namespace, t: ConvolutionTable) -> FunctionOnH | None:
    if getattr(args, "f_indicator", None):
        return FunctionOnH.indicator(t.n, t.index(args.f_indicator))
    if getattr(args, "f_file", None):
        return load_function(args.f_file, t.elements)
    return None


def _settings(args: argparse.Namespace, environ: Mapping[str, str] | None) -> SolverSettings:
    base = SolverSettings.from_env(environ)
    return base.with_overrides(
        tol=getattr(args, "tol", None),
        max_iter=getattr(args, "max_iter", None),
        samples=getattr(args, "samples", None),
    )


# --- コマンド ---


def cmd_validate(
    args: argparse.Namespace, settings: SolverSettings, progress: ProgressCallback | None
) -> tuple[int, dict[str, Any]]:
    _, hg, doc = _load_valid(args.file)
    return (EXIT_OK if hg is not None else EXIT_FAIL), doc


def cmd_haar(
    args: argparse.Namespace, settings: SolverSettings, progress: ProgressCallback | None
) -> tuple[int, dict[str, Any]]:
    t, hg, doc = _load_valid(args.file)
    if hg is None:
        return EXIT_FAIL, doc
    f = _test_function(args, t)
    result = fixed_point_haar(hg, f, args.method, settings, progress)
    weights = result.weights if result.weights is not None else result.approximate
    invariance = check_left_invariance(hg, weights, settings.tol)
    code = EXIT_OK if invariance.ok else EXIT_FAIL
    return code, haar_dict(t, result, invariance, f if f is not None else FunctionOnH.constant(t.n))


def cmd_ppt(
    args: argparse.Namespace, settings: SolverSettings, progress: ProgressCallback | None
) -> tuple[int, dict[str, Any]]:
    t, hg, doc = _load_valid(args.file)
    if hg is None and not args.relaxed:
        return EXIT_FAIL, doc
    f = _test_function(args, t)
    assert f is not None
    target: TableLike = hg if hg is not None else t
    verdict = ppt_check(target, f)
    out = ppt_dict(t, f, verdict)
    out["relaxed"] = hg is None
    return (EXIT_OK if verdict.holds else EXIT_FAIL), out


def cmd_gamma(
    args: argparse.Namespace, settings: SolverSettings, progress: ProgressCallback | None
) -> tuple[int, dict[str, Any]]:
    t, hg, doc = _load_valid(args.file)
    if hg is None:
        return EXIT_FAIL, doc
    f = _test_function(args, t)
    assert f is not None
    gamma = gamma_well_defined(hg, f)
    positivity = gamma_positive(hg, f)
    k = build_K(hg, f)
    feasibility = k_feasible(k)
    bounds = None
    if args.g_file is not None and feasibility.feasible:
        bounds = gamma_bounds(k, load_function(args.g_file, t.elements))
    ok = gamma.affirmative and positivity.holds and feasibility.feasible
    return (EXIT_OK if ok else EXIT_FAIL), gamma_dict(t, f, gamma, positivity, feasibility, bounds)


def cmd_mean(
    args: argparse.Namespace, settings: SolverSettings, progress: ProgressCallback | None
) -> tuple[int, dict[str, Any]]:
    t, hg, doc = _load_valid(args.file)
    if hg is None:
        return EXIT_FAIL, doc
    outcome = invariant_mean(hg)
    verification = None
    if outcome.mean is not None:
        verification = verify_mean(hg, outcome.mean, settings.samples, settings.seed)
    ok = verification is not None and verification.ok
    return (EXIT_OK if ok else EXIT_FAIL), mean_dict(t, outcome, verification)


def _report_one(
    path: Path, settings: SolverSettings, progress: ProgressCallback | None
) -> tuple[int, dict[str, Any]]:
    t, hg, doc = _load_valid(path)
    if hg is None:
        return EXIT_FAIL, doc
    report = equivalence_report(hg, settings, progress)
    ok = report.all_hold and report.mean_exists and report.chains_ok
    return (EXIT_OK if ok else EXIT_FAIL), equivalence_dict(t, report)


def _report_file_entry(
    path: Path, out_dir: Path, settings: SolverSettings
) -> dict[str, Any]:
    try:
        code, doc = _report_one(path, settings, None)
    except HypalError as exc:
        code, doc = EXIT_INPUT, {"command": "report", "name": path.name, "error": str(exc)}
    out_path = out_dir / f"{path.stem}{REPORT_SUFFIX}"
    write_text_atomic(out_path, json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    return {"file": path.name, "exit_code": code, "output": str(out_path)}


def cmd_report(
    args: argparse.Namespace, settings: SolverSettings, progress: ProgressCallback | None
) -> tuple[int, dict[str, Any]]:
    if args.all is None:
        return _report_one(args.file, settings, progress)

    directory: Path = args.all
    if not directory.is_dir():
        raise HypalError(f"not a directory: {directory}")
    out_dir = args.output or directory
    files = sorted(
        p for p in directory.glob("*.json") if not p.name.endswith(REPORT_SUFFIX)
    )
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        entries = list(pool.map(lambda p: _report_file_entry(p, out_dir, settings), files))
    code = max((e["exit_code"] for e in entries), default=EXIT_OK)
    return code, {"command": "report", "name": str(directory), "files": entries}


def _group_source(args: argparse.Namespace) -> GroupTable:
    if args.group is not None:
        return load_group(args.group)
    if args.builtin is not None:
        return BUILTIN_GROUPS[args.builtin]()
    raise HypalError(f"--family {args.family} needs --group FILE or --builtin NAME")


def cmd_gen(
    args: argparse.Namespace, settings: SolverSettings, progress: ProgressCallback | None
) -> tuple[int, dict[str, Any]]:
    if args.output is None:
        raise HypalError("gen needs -o FILE")
    if args.family == "order2":
        if args.alpha is None:
            raise HypalError("--family order2 needs --alpha p/q")
        alpha: Fraction = parse_rational(args.alpha, "--alpha")
        generated = gen_order2(alpha, relaxed=args.relaxed)
    elif args.family == "group":
        generated = gen_group(_group_source(args))
    else:
        names = [s.strip() for s in args.names.split(",")] if args.names else None
        generated = gen_conjugacy(_group_source(args), names=names)
    table = as_table(generated)
    save_document(table, args.output)
    report = validate_table(table)
    doc = {
        "command": "gen",
        "name": table.name,
        "family": args.family,
        "elements": list(table.elements),
        "valid": report.valid,
        "output": str(args.output),
    }
    return EXIT_OK, doc


COMMANDS = {
    "validate": cmd_validate,
    "haar": cmd_haar,
    "ppt": cmd_ppt,
    "gamma": cmd_gamma,
    "mean": cmd_mean,
    "report": cmd_report,
    "gen": cmd_gen,
}


def run_command(
    argv: Sequence[str],
    environ: Mapping[str, str] | None = None,
    stderr: TextIO | None = None,
) -> CommandResult:
    """引数列を解釈してコマンドを実行する。

    Args:
        argv: コマンドライン引数（プログラム名を除く）
        environ: 環境変数（省略時は os.environ）
        stderr: 進捗の出力先（--verbose 時）

    Returns:
        CommandResult（終了コード、レポート、出力テキスト）
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except UsageError as exc:
        return CommandResult(EXIT_INPUT, text=f"{exc.usage}hypal: error: {exc}\n", errors=[str(exc)])
    except SystemExit as exc:  # --help
        return CommandResult(int(exc.code or 0))

    progress = _stderr_progress(stderr or sys.stderr) if args.verbose else None
    try:
        settings = _settings(args, environ)
        code, report = COMMANDS[args.command](args, settings, progress)
    except HypalError as exc:
        return CommandResult(EXIT_INPUT, text=f"hypal: error: {exc}\n", errors=[str(exc)])

    text = json.dumps(report, indent=2, ensure_ascii=False) + "\n" if args.json else render_text(report)
    if args.output is not None and args.command != "gen" and not (args.command == "report" and args.all):
        write_text_atomic(args.output, json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    return CommandResult(code, report, text)


def main(argv: Sequence[str] | None = None) -> None:
    result = run_command(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if result.exit_code == EXIT_INPUT else sys.stdout
    stream.write(result.text)
    sys.exit(result.exit_code)
