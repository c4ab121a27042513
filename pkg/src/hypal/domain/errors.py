"""ドメイン例外。

入力エラーはすべて HypalError (ValueError) の派生で表す。
ppt の不成立や K の実行不能などの「結果」は例外ではなく値で返す。
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from hypal.domain.hypergroup import ValidationReport


class HypalError(ValueError):
    """hypal の入力エラーの基底クラス。"""


class TableStructureError(HypalError):
    """構造定数テーブルの構造不正（テンソル欠損、σ が置換でない、確率行でない等）。"""


class UnknownElementError(HypalError):
    """未知の元シンボル。"""

    def __init__(self, symbol: str) -> None:
        super().__init__(f"unknown element: {symbol!r}")
        self.symbol = symbol


class AxiomViolationError(HypalError):
    """公理検証に失敗したテーブルから FiniteHypergroup を作ろうとした。"""

    def __init__(self, report: ValidationReport) -> None:
        failed = ", ".join(c.axiom.value for c in report.failures)
        super().__init__(f"table {report.name!r} violates axiom(s): {failed}")
        self.report = report


class InvalidFunctionError(HypalError):
    """関数 f が前提（非負・非零・長さ一致）を満たさない。"""


class InvalidMeasureError(HypalError):
    """測度が前提（正・非零・長さ一致）を満たさない。"""


class LinearProgramError(HypalError):
    """LP インスタンスの次元不一致。"""


class DominationError(HypalError):
    """f の平行移動が点 y を覆わない（どの x でも (δ_x∗f)(y) = 0）。"""

    def __init__(self, symbol: str) -> None:
        super().__init__(f"translates of f do not dominate: point {symbol!r} is uncovered")
        self.symbol = symbol


class HaarSolveError(HypalError):
    """Haar 測度を構成できない（K が空、不変解なし）。"""


class DocumentParseError(HypalError):
    """ドキュメント（JSON）の解析エラー。location にエラー箇所を保持する。"""

    def __init__(self, message: str, location: str = "") -> None:
        text = f"{location}: {message}" if location else message
        super().__init__(text)
        self.location = location


class GroupTableError(HypalError):
    """群の乗積表が群公理を満たさない。"""


class ConfigurationError(HypalError):
    """環境変数などの設定値が不正。"""
