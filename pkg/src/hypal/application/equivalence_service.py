"""Haar 測度の存在と ppt の同値性のレポート。

有限ハイパーグループについて次の 3 条件を評価する（互いに同値であるべき）:
    1. 左 Haar 測度が存在する（nullspace ソルバーが成功する）
    2. 検査した全ての非負・非零 f で ppt が成り立つ
    3. ある非負・非零 f で ppt が成り立つ
あわせて前提側（左不変平均の存在）と、f ごとの構成的な連鎖
（Γ_f が well-defined → K の点 → Γ(f) = 1）も記録する。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from hypal.application.amenability_service import Mean, invariant_mean
from hypal.application.haar_service import Normalization, nullspace_haar
from hypal.application.k_polytope import build_K, k_feasible
from hypal.application.ppt_service import (
    GammaReport,
    PptVerdict,
    gamma_well_defined,
    ppt_check,
)
from hypal.application.settings import ProgressCallback, SolverSettings
from hypal.domain.algebra import integrate
from hypal.domain.errors import HaarSolveError
from hypal.domain.hypergroup import TableLike, as_table
from hypal.domain.measure import FunctionOnH, Measure
from hypal.infrastructure.sampling import random_positive_functions


@dataclass(frozen=True)
class FunctionChain:
    """1 つの f に対する ppt 判定と構成的な連鎖。"""

    label: str
    f: FunctionOnH
    ppt: PptVerdict
    gamma: GammaReport | None = None
    k_point: Measure | None = None
    gamma_of_f: Fraction | None = None

    @property
    def chain_ok(self) -> bool:
        """ppt が成り立つなら連鎖が全て通ること。成り立たないなら証明書があること。"""
        if not self.ppt.holds:
            return self.ppt.mu is not None
        return (
            self.gamma is not None
            and self.gamma.affirmative
            and self.k_point is not None
            and self.gamma_of_f == 1
        )


@dataclass
class EquivalenceReport:
    """同値性レポート。"""

    name: str
    haar_exists: bool
    ppt_all: bool
    ppt_some: bool
    mean_exists: bool
    haar: Measure | None = None
    haar_normalization: Normalization | None = None
    mean: Mean | None = None
    chains: list[FunctionChain] = field(default_factory=list)
    log: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.haar_exists == self.ppt_all == self.ppt_some

    @property
    def all_hold(self) -> bool:
        return self.haar_exists and self.ppt_all and self.ppt_some

    @property
    def chains_ok(self) -> bool:
        return all(c.chain_ok for c in self.chains)


def sample_functions(
    n: int, elements: tuple[str, ...], settings: SolverSettings
) -> list[tuple[str, FunctionOnH]]:
    """全ての指示関数 + シード固定の正の乱数関数。"""
    functions = [(f"1_{elements[y]}", FunctionOnH.indicator(n, y)) for y in range(n)]
    for i, f in enumerate(random_positive_functions(n, settings.samples, settings.seed)):
        functions.append((f"random[{i}]", f))
    return functions


def _chain(h: TableLike, label: str, f: FunctionOnH) -> FunctionChain:
    verdict = ppt_check(h, f)
    if not verdict.holds:
        return FunctionChain(label, f, verdict)
    gamma = gamma_well_defined(h, f)
    point = k_feasible(build_K(h, f)).point
    # s = e の制約 ⟨w, δ_e∗f⟩ = ⟨w, f⟩ が Γ(f) = 1 を与える
    gamma_of_f = integrate(point, f) if point is not None else None
    return FunctionChain(label, f, verdict, gamma, point, gamma_of_f)


def equivalence_report(
    h: TableLike,
    settings: SolverSettings | None = None,
    progress: ProgressCallback | None = None,
) -> EquivalenceReport:
    """3 条件と前提・連鎖を評価する。

    Args:
        h: ハイパーグループ（公理違反のテーブルも評価できる）
        settings: 乱数関数の本数とシード
        progress: 進捗コールバック

    Returns:
        EquivalenceReport
    """
    t = as_table(h)
    settings = settings or SolverSettings()
    log: list[str] = []

    if progress:
        progress("Haar 測度", 0.0)
    try:
        solved = nullspace_haar(t)
        haar, haar_normalization = solved.weights, solved.normalization
        if haar is not None:
            log.append(f"haar: {tuple(str(v) for v in haar.weights)} ({haar_normalization.value})")
    except HaarSolveError as exc:
        haar, haar_normalization = None, None
        log.append(f"haar: {exc}")

    functions = sample_functions(t.n, t.elements, settings)
    chains: list[FunctionChain] = []
    for i, (label, f) in enumerate(functions):
        if progress:
            progress("ppt 判定", (i + 1) / len(functions))
        chains.append(_chain(t, label, f))
    holding = sum(1 for c in chains if c.ppt.holds)
    log.append(f"ppt: holds for {holding} of {len(chains)} test functions")

    if progress:
        progress("不変平均", 1.0)
    mean = invariant_mean(t).mean
    log.append("mean: exists" if mean is not None else "mean: none")

    return EquivalenceReport(
        name=t.name,
        haar_exists=haar is not None,
        ppt_all=holding == len(chains),
        ppt_some=holding > 0,
        mean_exists=mean is not None,
        haar=haar,
        haar_normalization=haar_normalization,
        mean=mean,
        chains=chains,
        log=log,
    )
