"""厳密有理数の線形計画法と線形代数カーネル。

二段階単体法 + Bland の巡回防止ルール。すべて Fraction で計算し、
最適解には双対証明、実行不能には Farkas 証明、非有界には改善方向を付けて返す。
問題規模は小さい（変数 ≤ 2n, 制約 ≤ n²）ため密なタブローで十分。

証明書の符号規約（元の問題の制約行ごとに 1 成分）:
    max 問題の双対 y: ≤ 行で y ≥ 0、≥ 行で y ≤ 0、= 行は自由。
        非負変数で (yᵀA)_j ≥ c_j、自由変数で (yᵀA)_j = c_j、bᵀy = 最適値。
    min 問題の双対 y: ≤ 行で y ≤ 0、≥ 行で y ≥ 0、= 行は自由。
        非負変数で (yᵀA)_j ≤ c_j、自由変数で (yᵀA)_j = c_j、bᵀy = 最適値。
    Farkas y: ≤ 行で y ≥ 0、≥ 行で y ≤ 0、= 行は自由。
        非負変数で (yᵀA)_j ≥ 0、自由変数で (yᵀA)_j = 0、かつ bᵀy < 0。
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from hypal.domain.errors import LinearProgramError

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Sense(Enum):
    MAX = "max"
    MIN = "min"


class Relation(Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    """制約行 coefficients · x (relation) rhs。"""

    coefficients: tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction

    @classmethod
    def of(
        cls,
        coefficients: Sequence[Fraction | int | str],
        relation: Relation | str,
        rhs: Fraction | int | str,
    ) -> Constraint:
        return cls(
            tuple(Fraction(a) for a in coefficients),
            relation if isinstance(relation, Relation) else Relation(relation),
            Fraction(rhs),
        )

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coefficients, x) if a), _ZERO)

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        value = self.lhs(x)
        if self.relation is Relation.LE:
            return value <= self.rhs
        if self.relation is Relation.GE:
            return value >= self.rhs
        return value == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """厳密有理数の LP インスタンス。

    free[j] が True の変数は符号制約なし、False の変数は x_j ≥ 0。
    """

    sense: Sense
    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...]
    free: tuple[bool, ...]

    def __post_init__(self) -> None:
        n = len(self.objective)
        if len(self.free) != n:
            raise LinearProgramError(
                f"bounds cover {len(self.free)} variables, objective has {n}"
            )
        for i, row in enumerate(self.constraints):
            if len(row.coefficients) != n:
                raise LinearProgramError(
                    f"constraint {i} has {len(row.coefficients)} coefficients, expected {n}"
                )

    @classmethod
    def build(
        cls,
        sense: Sense | str,
        objective: Sequence[Fraction | int | str],
        constraints: Iterable[Constraint],
        free: Sequence[bool] | None = None,
    ) -> LinearProgram:
        obj = tuple(Fraction(c) for c in objective)
        return cls(
            sense=sense if isinstance(sense, Sense) else Sense(sense),
            objective=obj,
            constraints=tuple(constraints),
            free=tuple(free) if free is not None else (False,) * len(obj),
        )

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def value_at(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), _ZERO)

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.n_vars:
            return False
        if any(v < 0 for v, f in zip(x, self.free) if not f):
            return False
        return all(row.satisfied_by(x) for row in self.constraints)


@dataclass(frozen=True)
class LPOutcome:
    """LP の結果。status ごとに埋まるフィールドが異なる。

    OPTIMAL: point, value, dual
    INFEASIBLE: farkas
    UNBOUNDED: point（実行可能点）, ray（改善方向）
    """

    status: LPStatus
    point: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    dual: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None
    ray: tuple[Fraction, ...] | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


# --- 単体法 ---


class _Tableau:
    """標準形 A'x' = b', x' ≥ 0 のタブロー。列 N..N+m-1 は人工変数。"""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], n_real: int) -> None:
        self.rows = rows
        self.rhs = rhs
        self.m = len(rows)
        self.n_real = n_real
        self.basis = [n_real + i for i in range(self.m)]
        self.reduced: list[Fraction] = []

    def set_costs(self, costs: Sequence[Fraction]) -> None:
        """reduced = c − c_B B⁻¹ A を計算し直す。"""
        width = self.n_real + self.m
        reduced = list(costs)
        for i, b in enumerate(self.basis):
            cb = costs[b]
            if cb:
                row = self.rows[i]
                for j in range(width):
                    if row[j]:
                        reduced[j] -= cb * row[j]
        self.reduced = reduced

    def pivot(self, i: int, j: int) -> None:
        piv = self.rows[i][j]
        row = [v / piv for v in self.rows[i]]
        self.rows[i] = row
        self.rhs[i] /= piv
        for k in range(self.m):
            if k == i:
                continue
            factor = self.rows[k][j]
            if factor:
                self.rows[k] = [a - factor * b for a, b in zip(self.rows[k], row)]
                self.rhs[k] -= factor * self.rhs[i]
        factor = self.reduced[j]
        if factor:
            self.reduced = [a - factor * b for a, b in zip(self.reduced, row)]
        self.basis[i] = j

    def run(self, allowed: int) -> int | None:
        """Bland ルールで最小化。非有界なら入る列を、最適なら None を返す。"""
        while True:
            entering = next((j for j in range(allowed) if self.reduced[j] < 0), None)
            if entering is None:
                return None
            best: tuple[Fraction, int, int] | None = None
            for i in range(self.m):
                a = self.rows[i][entering]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i], i)
                    if best is None or key[:2] < best[:2]:
                        best = key
            if best is None:
                return entering
            self.pivot(best[2], entering)

    def basic_solution(self) -> list[Fraction]:
        x = [_ZERO] * (self.n_real + self.m)
        for i, b in enumerate(self.basis):
            x[b] = self.rhs[i]
        return x


@dataclass
class _StandardForm:
    columns: list[tuple[int, int | None]]
    flips: list[int]
    n_real: int


def _to_standard(p: LinearProgram) -> tuple[_Tableau, _StandardForm]:
    columns: list[tuple[int, int | None]] = []
    col = 0
    for j in range(p.n_vars):
        if p.free[j]:
            columns.append((col, col + 1))
            col += 2
        else:
            columns.append((col, None))
            col += 1
    slack_of: list[int | None] = []
    for row in p.constraints:
        if row.relation is Relation.EQ:
            slack_of.append(None)
        else:
            slack_of.append(col)
            col += 1
    n_real = col
    m = len(p.constraints)

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    flips: list[int] = []
    for i, row in enumerate(p.constraints):
        line = [_ZERO] * (n_real + m)
        for j, a in enumerate(row.coefficients):
            pos, neg = columns[j]
            line[pos] = a
            if neg is not None:
                line[neg] = -a
        slack = slack_of[i]
        if slack is not None:
            line[slack] = _ONE if row.relation is Relation.LE else -_ONE
        d = -1 if row.rhs < 0 else 1
        if d < 0:
            line = [-v for v in line]
        line[n_real + i] = _ONE
        rows.append(line)
        rhs.append(row.rhs * d)
        flips.append(d)
    return _Tableau(rows, rhs, n_real), _StandardForm(columns, flips, n_real)


def _to_original(form: _StandardForm, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = []
    for pos, neg in form.columns:
        v = x[pos]
        if neg is not None:
            v -= x[neg]
        out.append(v)
    return tuple(out)


def _drive_out_artificials(tab: _Tableau) -> None:
    """値 0 で基底に残った人工変数を実変数と入れ替える（可能な場合のみ）。"""
    for i in range(tab.m):
        if tab.basis[i] < tab.n_real:
            continue
        j = next((j for j in range(tab.n_real) if tab.rows[i][j] != 0), None)
        if j is not None:
            tab.pivot(i, j)


def solve(p: LinearProgram) -> LPOutcome:
    """LP を厳密に解く。

    決定的（固定ピボットルール）で、同一インスタンスには同一の結果を返す。

    Args:
        p: LinearProgram

    Returns:
        LPOutcome（最適 / 実行不能 / 非有界と各証明書）
    """
    tab, form = _to_standard(p)
    n_real, m = form.n_real, tab.m
    width = n_real + m

    # フェーズ 1: 人工変数の和を最小化
    phase1 = [_ZERO] * n_real + [_ONE] * m
    tab.set_costs(phase1)
    tab.run(allowed=width)
    infeasibility = sum(
        (tab.rhs[i] for i, b in enumerate(tab.basis) if b >= n_real), _ZERO
    )
    if infeasibility > 0:
        y_std = [_ONE - tab.reduced[n_real + i] for i in range(m)]
        farkas = tuple(-form.flips[i] * y_std[i] for i in range(m))
        return LPOutcome(status=LPStatus.INFEASIBLE, farkas=farkas)
    _drive_out_artificials(tab)

    # フェーズ 2: 元の目的関数（max は符号反転して最小化）
    sign = -1 if p.sense is Sense.MAX else 1
    phase2 = [_ZERO] * width
    for j, (pos, neg) in enumerate(form.columns):
        phase2[pos] = sign * p.objective[j]
        if neg is not None:
            phase2[neg] = -sign * p.objective[j]
    tab.set_costs(phase2)
    entering = tab.run(allowed=n_real)

    x_std = tab.basic_solution()
    point = _to_original(form, x_std)
    if entering is not None:
        direction = [_ZERO] * width
        direction[entering] = _ONE
        for i, b in enumerate(tab.basis):
            direction[b] = -tab.rows[i][entering]
        return LPOutcome(
            status=LPStatus.UNBOUNDED,
            point=point,
            ray=_to_original(form, direction),
        )

    # 双対: y_std = c_B B⁻¹ = −reduced[人工列]
    u = [form.flips[i] * -tab.reduced[n_real + i] for i in range(m)]
    dual = tuple(sign * v for v in u)
    return LPOutcome(
        status=LPStatus.OPTIMAL,
        point=point,
        value=p.value_at(point),
        dual=dual,
    )


def feasible_point(
    constraints: Sequence[Constraint],
    n_vars: int,
    free: Sequence[bool] | None = None,
) -> LPOutcome:
    """目的関数なしで実行可能点を求める（フェーズ 1 の実現）。

    Returns:
        OPTIMAL（point が実行可能点）または INFEASIBLE（Farkas 証明付き）
    """
    p = LinearProgram.build(Sense.MAX, [_ZERO] * n_vars, constraints, free)
    return solve(p)


# --- 証明書の検証 ---


def _row_values(p: LinearProgram, y: Sequence[Fraction]) -> list[Fraction]:
    """yᵀA を列ごとに返す。"""
    out = [_ZERO] * p.n_vars
    for yi, row in zip(y, p.constraints):
        if yi:
            for j, a in enumerate(row.coefficients):
                out[j] += yi * a
    return out


def _signs_ok(p: LinearProgram, y: Sequence[Fraction], le_sign: int) -> bool:
    """≤ 行で le_sign·y ≥ 0、≥ 行で le_sign·y ≤ 0 を満たすか。"""
    for yi, row in zip(y, p.constraints):
        if row.relation is Relation.LE and le_sign * yi < 0:
            return False
        if row.relation is Relation.GE and le_sign * yi > 0:
            return False
    return True


def verify_outcome(p: LinearProgram, outcome: LPOutcome) -> bool:
    """LPOutcome の証明書をインスタンスに対して厳密に検証する。"""
    m = len(p.constraints)
    if outcome.status is LPStatus.OPTIMAL:
        x, y = outcome.point, outcome.dual
        if x is None or y is None or outcome.value is None or len(y) != m:
            return False
        if not p.is_feasible(x) or p.value_at(x) != outcome.value:
            return False
        le_sign = 1 if p.sense is Sense.MAX else -1
        if not _signs_ok(p, y, le_sign):
            return False
        ya = _row_values(p, y)
        for j in range(p.n_vars):
            gap = le_sign * (ya[j] - p.objective[j])
            if p.free[j] and gap != 0:
                return False
            if gap < 0:
                return False
        dual_value = sum((yi * row.rhs for yi, row in zip(y, p.constraints)), _ZERO)
        return dual_value == outcome.value

    if outcome.status is LPStatus.INFEASIBLE:
        y = outcome.farkas
        if y is None or len(y) != m or not _signs_ok(p, y, 1):
            return False
        ya = _row_values(p, y)
        for j in range(p.n_vars):
            if ya[j] < 0 or (p.free[j] and ya[j] != 0):
                return False
        return sum((yi * row.rhs for yi, row in zip(y, p.constraints)), _ZERO) < 0

    x, d = outcome.point, outcome.ray
    if x is None or d is None or not p.is_feasible(x):
        return False
    if any(v < 0 for v, f in zip(d, p.free) if not f):
        return False
    for row in p.constraints:
        ad = row.lhs(d)
        if row.relation is Relation.LE and ad > 0:
            return False
        if row.relation is Relation.GE and ad < 0:
            return False
        if row.relation is Relation.EQ and ad != 0:
            return False
    gain = p.value_at(d)
    return gain > 0 if p.sense is Sense.MAX else gain < 0


# --- 線形代数 ---


def rref(
    matrix: Sequence[Sequence[Fraction | int]], n_cols: int | None = None
) -> tuple[list[list[Fraction]], list[int]]:
    """簡約階段形とピボット列を返す。"""
    rows = [[Fraction(v) for v in row] for row in matrix]
    width = n_cols if n_cols is not None else (len(rows[0]) if rows else 0)
    if any(len(r) != width for r in rows):
        raise LinearProgramError("matrix rows have inconsistent length")
    pivots: list[int] = []
    r = 0
    for c in range(width):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        piv = rows[r][c]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix: Sequence[Sequence[Fraction | int]], n_cols: int | None = None) -> int:
    return len(rref(matrix, n_cols)[1])


def nullspace(
    matrix: Sequence[Sequence[Fraction | int]], n_cols: int | None = None
) -> list[tuple[Fraction, ...]]:
    """核 {v : m·v = 0} の基底（自由列ごとに 1 本）を返す。

    Args:
        matrix: 有理数行列（行のリスト）
        n_cols: 列数。行が 0 本のときに必要

    Returns:
        一次独立で核を張るベクトルのリスト
    """
    rows, pivots = rref(matrix, n_cols)
    width = n_cols if n_cols is not None else (len(matrix[0]) if matrix else 0)
    pivot_set = set(pivots)
    basis: list[tuple[Fraction, ...]] = []
    for free_col in range(width):
        if free_col in pivot_set:
            continue
        v = [_ZERO] * width
        v[free_col] = _ONE
        for r, p in enumerate(pivots):
            v[p] = -rows[r][free_col]
        basis.append(tuple(v))
    return basis
