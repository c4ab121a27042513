"""平行移動作用と不動点としての Haar 測度。

作用行列 (A_x)[z][y] = c[σ(x)][y][z] は x·Λ(g) = Λ(δ_σ(x)∗g) の行列表示で、
⟨A_x w, g⟩ = ⟨w, δ_σ(x)∗g⟩ を満たす。K は各 A_x で保たれ、
全ての A_x の共通不動点が左 Haar 測度になる:
    Σ_y c[x][y][z] λ_y = λ_z  (∀x, z)

求解法:
    direct    — λ_x = 1 / c[x][σ(x)][e]（独立なオラクル）
    nullspace — 積み上げた (A_x − I) w = 0 の厳密な核
    cesaro    — 平均作用素の Cesàro 平均（binary64）、不変性を事後検証し
                失敗時は nullspace にフォールバック
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product

import numpy as np
import numpy.typing as npt

from hypal.application.k_polytope import KPolytope, build_K, k_feasible
from hypal.application.ppt_service import require_test_function
from hypal.application.settings import ProgressCallback, SolverSettings
from hypal.domain.algebra import integrate
from hypal.domain.errors import HaarSolveError, InvalidMeasureError
from hypal.domain.hypergroup import (
    IDENTITY_INDEX,
    FiniteHypergroup,
    TableLike,
    as_table,
)
from hypal.domain.linear_program import Constraint, LPStatus, Relation, feasible_point, nullspace
from hypal.domain.measure import FunctionOnH, Measure
from hypal.infrastructure.cesaro import cesaro_average, invariance_residual, stack_actions

_ZERO = Fraction(0)


# --- 作用行列 ---


@dataclass(frozen=True)
class ActionMatrix:
    """元 x の作用行列。entries[z][y] = c[σ(x)][y][z]（各列は確率分布）。"""

    x: int
    symbol: str
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def apply(self, w: Measure) -> Measure:
        """A_x w。"""
        return Measure(
            tuple(
                sum((a * w[y] for y, a in enumerate(row) if a), _ZERO)
                for row in self.entries
            )
        )

    def as_array(self) -> npt.NDArray[np.float64]:
        return np.array([[float(a) for a in row] for row in self.entries], dtype=np.float64)


def _matmul(
    a: tuple[tuple[Fraction, ...], ...], b: tuple[tuple[Fraction, ...], ...]
) -> tuple[tuple[Fraction, ...], ...]:
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n) if a[i][k]), _ZERO) for j in range(n))
        for i in range(n)
    )


def action_matrix(h: TableLike, x: int | str) -> ActionMatrix:
    """元 x（インデックスまたはシンボル）の作用行列。

    Raises:
        UnknownElementError: 未知のシンボル
    """
    t = as_table(h)
    xi = t.index(x) if isinstance(x, str) else x
    plane = t.conv[t.involution[xi]]
    entries = tuple(tuple(plane[y][z] for y in range(t.n)) for z in range(t.n))
    return ActionMatrix(x=xi, symbol=t.elements[xi], entries=entries)


def action_matrices(h: TableLike) -> tuple[ActionMatrix, ...]:
    t = as_table(h)
    return tuple(action_matrix(t, x) for x in range(t.n))


@dataclass(frozen=True)
class CompositionReport:
    """作用の合成則の検査結果。failure は最初に破れた (x, y)。"""

    identity_is_unit: bool
    holds: bool
    failure: tuple[str, str] | None = None

    @property
    def ok(self) -> bool:
        return self.identity_is_unit and self.holds


def check_action_composition(h: TableLike, opposite: bool = True) -> CompositionReport:
    """A_e = I と合成則を全ての (x, y) で厳密に確認する。

    この平行移動の規約では w ↦ A_x w は右作用になり、
        A_x·A_y = Σ_t c[y][x][t]·A_t
    が成り立つ（opposite=True）。opposite=False は積の順序を入れ替えた
    A_x·A_y = Σ_t c[x][y][t]·A_t を調べ、可換なハイパーグループでのみ一致する。
    """
    t = as_table(h)
    n = t.n
    mats = action_matrices(t)
    identity = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    unit = mats[IDENTITY_INDEX].entries == identity
    for x, y in product(range(n), repeat=2):
        left = _matmul(mats[x].entries, mats[y].entries)
        weights = t.conv[y][x] if opposite else t.conv[x][y]
        right = tuple(
            tuple(
                sum((weights[s] * mats[s].entries[i][j] for s in range(n) if weights[s]), _ZERO)
                for j in range(n)
            )
            for i in range(n)
        )
        if left != right:
            return CompositionReport(unit, False, (t.elements[x], t.elements[y]))
    return CompositionReport(unit, True)


@dataclass(frozen=True)
class PreservationReport:
    """K の保存の検査結果。failure は (元シンボル, 点の番号)。"""

    holds: bool
    checked: int
    failure: tuple[str, int] | None = None


def check_k_preservation(k: KPolytope, points: list[Measure]) -> PreservationReport:
    """全ての x と与えた点 w ∈ K について A_x w ∈ K を厳密に確認する。"""
    t = as_table(k.hypergroup)
    mats = action_matrices(t)
    for i, w in enumerate(points):
        for a in mats:
            if not k.contains(a.apply(w)):
                return PreservationReport(False, i, (a.symbol, i))
    return PreservationReport(True, len(points))


# --- 左不変性 ---


@dataclass(frozen=True)
class InvarianceCheck:
    """左不変性の検査結果。worst は最大残差、location はその (x, z)。"""

    ok: bool
    worst: Fraction | float
    location: tuple[str, str] | None = None


def check_left_invariance(
    h: TableLike,
    weights: Measure | npt.ArrayLike,
    tol: float | None = None,
) -> InvarianceCheck:
    """Σ_y c[x][y][z] λ_y = λ_z を全ての (x, z) で確認する。

    Measure（有理数）なら厳密に判定し、配列（float）なら残差 ≤ tol で判定する。

    Raises:
        InvalidMeasureError: λ が正・非零でない、または長さ不一致
    """
    t = as_table(h)
    n = t.n
    exact = isinstance(weights, Measure)
    values = weights.weights if exact else tuple(float(v) for v in np.asarray(weights, dtype=np.float64))
    if len(values) != n:
        raise InvalidMeasureError(f"expected {n} weights, got {len(values)}")
    if any(v < 0 for v in values) or all(v == 0 for v in values):
        raise InvalidMeasureError("Haar candidate must be positive and nonzero")

    worst: Fraction | float = _ZERO if exact else 0.0
    location: tuple[str, str] | None = None
    for x, z in product(range(n), repeat=2):
        moved = sum((t.conv[x][y][z] * values[y] for y in range(n)), _ZERO if exact else 0.0)
        r = abs(moved - values[z])
        if r > worst:
            worst, location = r, (t.elements[x], t.elements[z])
    if exact:
        return InvarianceCheck(worst == 0, worst, location)
    limit = SolverSettings().tol if tol is None else tol
    return InvarianceCheck(worst <= limit, worst, location)


# --- Haar ---


class HaarMethod(Enum):
    DIRECT = "direct"
    NULLSPACE = "nullspace"
    CESARO = "cesaro"


class Normalization(Enum):
    IDENTITY = "lambda_e = 1"
    FUNCTIONAL = "Lambda(f) = 1"
    MASS = "mass = 1"


@dataclass
class HaarResult:
    """Haar 測度の計算結果。

    厳密解は weights、Cesàro の近似解は approximate に入る。
    iterations / residual は Cesàro 反復の値（厳密解では 0）。
    """

    method: HaarMethod
    normalization: Normalization
    weights: Measure | None = None
    approximate: npt.NDArray[np.float64] | None = None
    iterations: int = 0
    residual: float = 0.0
    converged: bool = True
    fallback_used: bool = False
    log: list[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.weights is not None

    def as_floats(self) -> npt.NDArray[np.float64]:
        if self.weights is not None:
            return np.array([float(v) for v in self.weights.weights], dtype=np.float64)
        assert self.approximate is not None
        return self.approximate.copy()


def normalize(
    weights: Measure, normalization: Normalization, f: FunctionOnH | None = None
) -> Measure:
    """正規化を変換する（スカラー倍のみ）。

    Raises:
        InvalidMeasureError: 正規化の基準値が 0
    """
    if normalization is Normalization.IDENTITY:
        base = weights[IDENTITY_INDEX]
    elif normalization is Normalization.MASS:
        base = weights.mass
    else:
        if f is None:
            raise InvalidMeasureError("Lambda(f) = 1 normalization needs f")
        base = integrate(weights, f)
    if base == 0:
        raise InvalidMeasureError(f"cannot normalize to {normalization.value}: base value is 0")
    return weights.scale(1 / base)


def normalize_floats(
    weights: npt.ArrayLike, normalization: Normalization, f: FunctionOnH | None = None
) -> npt.NDArray[np.float64]:
    """binary64 ベクトル版の normalize。"""
    w = np.asarray(weights, dtype=np.float64)
    if normalization is Normalization.IDENTITY:
        base = w[IDENTITY_INDEX]
    elif normalization is Normalization.MASS:
        base = w.sum()
    else:
        if f is None:
            raise InvalidMeasureError("Lambda(f) = 1 normalization needs f")
        base = float(np.dot(w, [float(v) for v in f.values]))
    if base == 0:
        raise InvalidMeasureError(f"cannot normalize to {normalization.value}: base value is 0")
    return w / base


def direct_haar(h: TableLike) -> HaarResult:
    """λ_x = 1 / c[x][σ(x)][e]、λ_e = 1。

    Raises:
        AxiomViolationError: 公理を満たさないテーブル
    """
    hg = h if isinstance(h, FiniteHypergroup) else FiniteHypergroup.from_table(h)
    weights = Measure(
        tuple(1 / hg.c(x, hg.sigma(x), IDENTITY_INDEX) for x in range(hg.n))
    )
    check = check_left_invariance(hg, weights)
    log = [f"direct: λ_x = 1 / c[x][σx][e], invariance {'exact' if check.ok else 'violated'}"]
    return HaarResult(
        method=HaarMethod.DIRECT,
        normalization=Normalization.IDENTITY,
        weights=weights,
        residual=float(check.worst),
        converged=check.ok,
        log=log,
    )


def _invariance_rows(h: TableLike) -> list[list[Fraction]]:
    """(A_x − I) の行を全ての x について積み上げる。"""
    rows: list[list[Fraction]] = []
    for a in action_matrices(h):
        for z, row in enumerate(a.entries):
            rows.append([v - (1 if y == z else 0) for y, v in enumerate(row)])
    return rows


def nullspace_haar(h: TableLike, f: FunctionOnH | None = None) -> HaarResult:
    """積み上げた (A_x − I) w = 0 と K の等式制約から厳密な Λ_0 を求め、λ_e = 1 で返す。

    λ_e = 0 の不変点（公理 (E) を欠くテーブル）は Λ(f) = 1 の正規化のまま返す。

    Raises:
        HaarSolveError: K が空、または不変な正の解がない
    """
    t = as_table(h)
    n = t.n
    f = FunctionOnH.constant(n) if f is None else f
    k = build_K(t, f)
    rows = _invariance_rows(t)
    log: list[str] = []

    basis = nullspace(rows, n_cols=n)
    log.append(f"nullspace: invariant subspace has dimension {len(basis)}")
    point: Measure | None = None
    if len(basis) == 1:
        v = Measure(basis[0])
        pairing = integrate(v, f)
        if pairing != 0:
            candidate = v.scale(1 / pairing)
            if k.contains(candidate):
                point = candidate
    if point is None:
        # 不変部分空間が 1 次元でない（または符号が合わない）ときは K との共通部分を LP で探す
        constraints = [Constraint(tuple(r), Relation.EQ, _ZERO) for r in rows]
        constraints.extend(k.constraints())
        outcome = feasible_point(constraints, n)
        if outcome.status is not LPStatus.OPTIMAL or outcome.point is None:
            raise HaarSolveError(f"{t.name}: no invariant point in K")
        point = Measure(outcome.point)
        log.append("nullspace: invariant point found by LP feasibility")

    if point[IDENTITY_INDEX] == 0:
        # 公理 (E) を欠くテーブルでは λ_e = 0 になり得る。K の点のまま Λ(f) = 1 で返す
        log.append("nullspace: invariant point vanishes at the identity, kept as Lambda(f) = 1")
        return HaarResult(
            method=HaarMethod.NULLSPACE,
            normalization=Normalization.FUNCTIONAL,
            weights=point,
            log=log,
        )
    weights = normalize(point, Normalization.IDENTITY)
    log.append(f"nullspace: Lambda_0 = lambda / {integrate(weights, f)} (Lambda(f) = 1)")
    return HaarResult(
        method=HaarMethod.NULLSPACE,
        normalization=Normalization.IDENTITY,
        weights=weights,
        log=log,
    )


def cesaro_haar(
    h: TableLike,
    f: FunctionOnH | None = None,
    settings: SolverSettings | None = None,
    progress: ProgressCallback | None = None,
) -> HaarResult:
    """K の点から Cesàro 平均で不動点を近似する（Λ(f) = 1 の正規化）。

    収束しない、または各元の不変性が tol を超える場合は nullspace に切り替える。

    Raises:
        HaarSolveError: K が空
    """
    t = as_table(h)
    n = t.n
    settings = settings or SolverSettings()
    f = FunctionOnH.constant(n) if f is None else f
    k = build_K(t, f)

    if progress:
        progress("K の実行可能点", 0.0)
    start = k_feasible(k)
    if start.point is None:
        raise HaarSolveError(f"{t.name}: K is empty for the given f")
    actions = stack_actions([a.as_array() for a in action_matrices(t)])
    w0 = np.array([float(v) for v in start.point.weights], dtype=np.float64)

    def on_epoch(iterations: int, residual: float) -> None:
        if progress:
            progress("Cesàro 反復", min(1.0, iterations / settings.max_iter))

    run = cesaro_average(
        actions, w0,
        tol=settings.tol, max_iter=settings.max_iter, epoch=settings.epoch,
        on_epoch=on_epoch,
    )
    residual = invariance_residual(actions, run.weights)
    log = [
        f"cesaro: start {tuple(str(v) for v in start.point.weights)} from K",
        f"cesaro: {run.iterations} iterations in {run.epochs} epochs, residual {residual:.3e}",
    ]
    if progress:
        progress("Cesàro 反復", 1.0)

    if run.converged and residual < settings.tol:
        return HaarResult(
            method=HaarMethod.CESARO,
            normalization=Normalization.FUNCTIONAL,
            approximate=run.weights,
            iterations=run.iterations,
            residual=residual,
            converged=True,
            log=log,
        )

    log.append(f"cesaro: residual above tol {settings.tol:.1e}, falling back to nullspace")
    exact = nullspace_haar(t, f)
    return HaarResult(
        method=HaarMethod.NULLSPACE,
        normalization=exact.normalization,
        weights=exact.weights,
        iterations=run.iterations,
        residual=residual,
        converged=False,
        fallback_used=True,
        log=log + exact.log,
    )


def fixed_point_haar(
    h: TableLike,
    f: FunctionOnH | None = None,
    method: HaarMethod | str = HaarMethod.NULLSPACE,
    settings: SolverSettings | None = None,
    progress: ProgressCallback | None = None,
) -> HaarResult:
    """左 Haar 測度を指定の方法で求める。

    Args:
        h: FiniteHypergroup（direct）または構造的に整合したテーブル
        f: K を定める非負・非零の関数（省略時は定数 1）
        method: direct | nullspace | cesaro
        settings: tol / max_iter / epoch
        progress: 進捗コールバック

    Returns:
        HaarResult

    Raises:
        HaarSolveError: K が空、不変解なし
        InvalidFunctionError: f が不正
    """
    m = method if isinstance(method, HaarMethod) else HaarMethod(method)
    if f is not None:
        require_test_function(h, f)
    if m is HaarMethod.DIRECT:
        return direct_haar(h)
    if m is HaarMethod.NULLSPACE:
        return nullspace_haar(h, f)
    return cesaro_haar(h, f, settings, progress)
