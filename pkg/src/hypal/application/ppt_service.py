"""平行移動の正値性 (ppt) と汎関数 Γ_f。

ppt: 正測度 μ, ν について μ∗f ≤ ν∗f（各点）ならば ‖μ‖ ≤ ‖ν‖。
有限 H では LP
    max ρ(H)  s.t.  (ρ∗f)(y) ≤ 0 (∀y),  ‖ρ‖ ≤ 1
の最適値が 0 かどうかで判定できる（ρ = p − q, p, q ≥ 0, Σ(p+q) ≤ 1）。
最適値 > 0 なら ρ の Jordan 分解 (μ, ν) = (ρ₊, ρ₋) が反例になる。

Γ_f(ρ∗f) = ρ(H) は平行移動の張る部分空間上の汎関数で、
ppt の下で well-defined かつ正（ρ∗f ≥ 0 ⇒ ρ(H) ≥ 0）となる。
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from hypal.domain.algebra import jordan_decompose, translate_function, translates
from hypal.domain.errors import DominationError, InvalidFunctionError
from hypal.domain.hypergroup import TableLike, as_table
from hypal.domain.linear_program import (
    Constraint,
    LinearProgram,
    LPOutcome,
    LPStatus,
    Relation,
    Sense,
    feasible_point,
    nullspace,
    solve,
)
from hypal.domain.measure import FunctionOnH, Measure

_ZERO = Fraction(0)
_ONE = Fraction(1)


def require_test_function(h: TableLike, f: FunctionOnH) -> None:
    """f が H 上の非負・非零関数であることを確認する。

    Raises:
        InvalidFunctionError: 長さ不一致・負の値・恒等的に 0
    """
    n = as_table(h).n
    if len(f) != n:
        raise InvalidFunctionError(f"f has {len(f)} values, hypergroup has {n} elements")
    if not f.is_positive():
        raise InvalidFunctionError("f must be nonnegative")
    if not f.is_nonzero():
        raise InvalidFunctionError("f must be nonzero")


def translate_columns(h: TableLike, f: FunctionOnH) -> tuple[tuple[Fraction, ...], ...]:
    """T[x][y] = (δ_x∗f)(y)。"""
    return tuple(t.values for t in translates(h, f))


def _split_rows(
    table: tuple[tuple[Fraction, ...], ...], relation: Relation, rhs: tuple[Fraction, ...]
) -> list[Constraint]:
    """ρ = p − q の形で Σ_x ρ_x T[x][y] (relation) rhs[y] を並べる。"""
    n = len(table)
    rows = []
    for y in range(n):
        column = tuple(table[x][y] for x in range(n))
        rows.append(Constraint(column + tuple(-v for v in column), relation, rhs[y]))
    return rows


def _norm_row(n: int) -> Constraint:
    return Constraint((_ONE,) * (2 * n), Relation.LE, _ONE)


def _signed_point(point: tuple[Fraction, ...], n: int) -> Measure:
    return Measure(tuple(point[x] - point[n + x] for x in range(n)))


# --- ppt ---


class PptStatus(Enum):
    HOLDS = "holds"
    FAILS = "fails"


@dataclass(frozen=True)
class PptVerdict:
    """ppt 判定の結果。FAILS のときは (μ, ν) が反例。

    optimum は max ρ(H) の最適値（HOLDS なら 0）。
    """

    status: PptStatus
    optimum: Fraction
    mu: Measure | None = None
    nu: Measure | None = None
    outcome: LPOutcome | None = None

    @property
    def holds(self) -> bool:
        return self.status is PptStatus.HOLDS


def verify_ppt_certificate(
    h: TableLike, f: FunctionOnH, mu: Measure, nu: Measure
) -> bool:
    """μ, ν ≥ 0、μ∗f ≤ ν∗f（各点）、‖μ‖ > ‖ν‖ を厳密に確認する。"""
    if not (mu.is_positive() and nu.is_positive()):
        return False
    left = translate_function(h, mu, f)
    right = translate_function(h, nu, f)
    return left.pointwise_le(right) and mu.total_variation > nu.total_variation


def ppt_lp(h: TableLike, f: FunctionOnH) -> LinearProgram:
    """ppt 判定の LP。変数は (p_0..p_{n-1}, q_0..q_{n-1})。"""
    table = translate_columns(h, f)
    n = len(table)
    rows = _split_rows(table, Relation.LE, (_ZERO,) * n)
    rows.append(_norm_row(n))
    objective = (_ONE,) * n + (-_ONE,) * n
    return LinearProgram.build(Sense.MAX, objective, rows)


def ppt_check(h: TableLike, f: FunctionOnH) -> PptVerdict:
    """f に対する平行移動の正値性を判定する。

    公理を満たさないテーブル（構造的に整合したもの）も受け付ける。

    Args:
        h: FiniteHypergroup または ConvolutionTable
        f: 非負・非零の関数

    Returns:
        PptVerdict。FAILS の証明書は返す前に再検証済み。

    Raises:
        InvalidFunctionError: f が負・零・長さ不一致
    """
    require_test_function(h, f)
    n = as_table(h).n
    outcome = solve(ppt_lp(h, f))
    # 0 が実行可能で ‖ρ‖ ≤ 1 により有界なので必ず最適
    assert outcome.status is LPStatus.OPTIMAL and outcome.point is not None
    optimum = outcome.value if outcome.value is not None else _ZERO
    if optimum <= 0:
        return PptVerdict(PptStatus.HOLDS, optimum, outcome=outcome)

    mu, nu = jordan_decompose(_signed_point(outcome.point, n))
    if not verify_ppt_certificate(h, f, mu, nu):
        raise ArithmeticError("ppt certificate failed exact re-verification")
    return PptVerdict(PptStatus.FAILS, optimum, mu=mu, nu=nu, outcome=outcome)


# --- Γ_f ---


@dataclass(frozen=True)
class GammaReport:
    """Γ_f の well-definedness。

    kernel は N = {ρ : ρ∗f = 0} の基底。affirmative は全基底で ρ(H) = 0。
    offending は ρ(H) ≠ 0 となった最初の基底ベクトル。
    """

    kernel: tuple[Measure, ...]
    affirmative: bool
    offending: Measure | None = None

    @property
    def kernel_dimension(self) -> int:
        return len(self.kernel)


def gamma_well_defined(h: TableLike, f: FunctionOnH) -> GammaReport:
    """ρ∗f = 0 ⇒ ρ(H) = 0 を核の基底で確認する。

    列が δ_x∗f の行列の核を厳密に求め、各基底ベクトルの質量を調べる。
    ppt が成り立つときは必ず肯定的になる。
    """
    require_test_function(h, f)
    table = translate_columns(h, f)
    n = len(table)
    matrix = [[table[x][y] for x in range(n)] for y in range(n)]
    kernel = tuple(Measure(v) for v in nullspace(matrix, n_cols=n))
    offending = next((rho for rho in kernel if rho.mass != 0), None)
    return GammaReport(kernel=kernel, affirmative=offending is None, offending=offending)


@dataclass(frozen=True)
class GammaPositivity:
    """Γ_f の正値性 (ρ∗f ≥ 0 ⇒ ρ(H) ≥ 0)。

    minimum は min ρ(H) s.t. ρ∗f ≥ 0, ‖ρ‖ ≤ 1 の最適値。負なら witness が反例。
    """

    holds: bool
    minimum: Fraction
    witness: Measure | None = None


def gamma_positive(h: TableLike, f: FunctionOnH) -> GammaPositivity:
    """Γ_f が平行移動の部分空間上で正であるかを LP で判定する。"""
    require_test_function(h, f)
    table = translate_columns(h, f)
    n = len(table)
    rows = _split_rows(table, Relation.GE, (_ZERO,) * n)
    rows.append(_norm_row(n))
    objective = (_ONE,) * n + (-_ONE,) * n
    outcome = solve(LinearProgram.build(Sense.MIN, objective, rows))
    assert outcome.status is LPStatus.OPTIMAL and outcome.point is not None
    minimum = outcome.value if outcome.value is not None else _ZERO
    if minimum >= 0:
        return GammaPositivity(holds=True, minimum=minimum)
    return GammaPositivity(
        holds=False, minimum=minimum, witness=_signed_point(outcome.point, n)
    )


def gamma_value(h: TableLike, f: FunctionOnH, g: FunctionOnH) -> Fraction | None:
    """g = ρ∗f と書けるとき Γ_f(g) = ρ(H) を返す。平行移動の張る空間の外なら None。

    ρ の取り方に依存しないのは gamma_well_defined が肯定的なときに限る。
    """
    require_test_function(h, f)
    table = translate_columns(h, f)
    n = len(table)
    if len(g) != n:
        raise InvalidFunctionError(f"g has {len(g)} values, hypergroup has {n} elements")
    rows = [
        Constraint(tuple(table[x][y] for x in range(n)), Relation.EQ, g[y])
        for y in range(n)
    ]
    outcome = feasible_point(rows, n, free=(True,) * n)
    if outcome.status is not LPStatus.OPTIMAL or outcome.point is None:
        return None
    return sum(outcome.point, _ZERO)


# --- 支配 ---


def dominate(h: TableLike, f: FunctionOnH, g: FunctionOnH) -> Measure:
    """g ≤ μ∗f（各点）を満たす正測度 μ のうち μ(H) 最小のものを返す。

    Args:
        h: FiniteHypergroup または ConvolutionTable
        f: 非負・非零の関数
        g: 支配したい関数

    Returns:
        正測度 μ（厳密に g ≤ μ∗f を満たす）

    Raises:
        DominationError: ある点 y でどの平行移動も正にならない
        InvalidFunctionError: f または g が不正
    """
    require_test_function(h, f)
    t = as_table(h)
    table = translate_columns(h, f)
    n = len(table)
    if len(g) != n:
        raise InvalidFunctionError(f"g has {len(g)} values, hypergroup has {n} elements")
    for y in range(n):
        if all(table[x][y] == 0 for x in range(n)):
            raise DominationError(t.elements[y])

    rows = [
        Constraint(tuple(table[x][y] for x in range(n)), Relation.GE, g[y])
        for y in range(n)
    ]
    outcome = solve(LinearProgram.build(Sense.MIN, (_ONE,) * n, rows))
    # 被覆されていれば十分大きな一様 μ が実行可能、目的は μ(H) ≥ 0 で下に有界
    assert outcome.status is LPStatus.OPTIMAL and outcome.point is not None
    mu = Measure(outcome.point)
    if not g.pointwise_le(translate_function(h, mu, f)):
        raise ArithmeticError("dominating measure failed exact re-verification")
    return mu
