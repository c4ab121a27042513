"""C(H) 上の左不変平均。

有限離散 H では WUCB_r(H) = UCB_r(H) = C(H) なので平均は 1 種類だけ扱う。
平均 m は質量 1 の正の重みで、左不変性 m(δ_x∗f) = m(f) (∀x, f) は
行列系 Σ_y c[x][y][z] m_y = m_z (∀x, z) と同値になる。
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from hypal.application.settings import SolverSettings
from hypal.domain.algebra import integrate, translate_point
from hypal.domain.errors import InvalidMeasureError
from hypal.domain.hypergroup import TableLike, as_table
from hypal.domain.linear_program import Constraint, LPStatus, Relation, feasible_point
from hypal.domain.measure import FunctionOnH, Measure
from hypal.infrastructure.sampling import random_signed_functions

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Mean:
    """左不変平均の候補。weights は正で和が 1。"""

    weights: Measure

    def __post_init__(self) -> None:
        if not self.weights.is_positive():
            raise InvalidMeasureError("a mean must have nonnegative weights")
        if self.weights.mass != 1:
            raise InvalidMeasureError(f"a mean must have mass 1, got {self.weights.mass}")

    def __call__(self, f: FunctionOnH) -> Fraction:
        return integrate(self.weights, f)


@dataclass(frozen=True)
class MeanOutcome:
    """invariant_mean の結果。存在しないときは Farkas 証明を持つ。"""

    mean: Mean | None
    certificate: tuple[Fraction, ...] | None = None

    @property
    def exists(self) -> bool:
        return self.mean is not None


def invariance_constraints(h: TableLike) -> list[Constraint]:
    """Σ_y c[x][y][z] m_y − m_z = 0 (∀x, z) と Σ m = 1。"""
    t = as_table(h)
    n = t.n
    rows = []
    for x, z in product(range(n), repeat=2):
        coeffs = tuple(t.conv[x][y][z] - (1 if y == z else 0) for y in range(n))
        rows.append(Constraint(coeffs, Relation.EQ, _ZERO))
    rows.append(Constraint((_ONE,) * n, Relation.EQ, _ONE))
    return rows


def invariant_mean(h: TableLike) -> MeanOutcome:
    """不変性の連立系 + 正規化の実行可能点として平均を求める。

    公理を満たさないテーブルでは存在しないことがあり、その場合は値として返す。
    """
    t = as_table(h)
    outcome = feasible_point(invariance_constraints(t), t.n)
    if outcome.status is not LPStatus.OPTIMAL or outcome.point is None:
        return MeanOutcome(mean=None, certificate=outcome.farkas)
    return MeanOutcome(mean=Mean(Measure(outcome.point)))


@dataclass(frozen=True)
class MeanVerification:
    """verify_mean の結果。

    matrix_ok: 行列系の判定、functional_ok: 関数サンプルでの判定。
    worst / location: 行列系の最大残差とその (x, z)。
    """

    matrix_ok: bool
    functional_ok: bool
    worst: Fraction
    location: tuple[str, str] | None
    functions_checked: int

    @property
    def ok(self) -> bool:
        return self.matrix_ok and self.functional_ok

    @property
    def consistent(self) -> bool:
        """2 つの定式化が同じ判定を下したか。"""
        return self.matrix_ok == self.functional_ok


def verify_mean(
    h: TableLike,
    m: Mean,
    sample_size: int | None = None,
    seed: int | None = None,
) -> MeanVerification:
    """m(δ_x∗f) = m(f) を全ての x、全ての指示関数、シード固定の乱数関数で確認する。

    同時に行列系 Σ_y c[x][y][z] m_y = m_z も調べ、両者の一致を報告する。
    """
    t = as_table(h)
    n = t.n
    if len(m.weights) != n:
        raise InvalidMeasureError(f"expected {n} weights, got {len(m.weights)}")
    defaults = SolverSettings()
    count = defaults.samples if sample_size is None else sample_size
    seed = defaults.seed if seed is None else seed

    worst = _ZERO
    location: tuple[str, str] | None = None
    for x, z in product(range(n), repeat=2):
        moved = sum((t.conv[x][y][z] * m.weights[y] for y in range(n)), _ZERO)
        r = abs(moved - m.weights[z])
        if r > worst:
            worst, location = r, (t.elements[x], t.elements[z])

    functions = [FunctionOnH.indicator(n, y) for y in range(n)]
    functions.extend(random_signed_functions(n, count, seed))
    functional_ok = all(
        m(translate_point(t, x, f)) == m(f) for f in functions for x in range(n)
    )
    return MeanVerification(
        matrix_ok=worst == 0,
        functional_ok=functional_ok,
        worst=worst,
        location=location,
        functions_checked=len(functions),
    )
