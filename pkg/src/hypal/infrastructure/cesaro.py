"""平行移動作用の Cesàro 平均（binary64）。

平均作用素 P = (1/n) Σ_x A_x を scipy.sparse の CSR 行列で持ち、
w̄ = (1/E) Σ_{k<E} P^k w を 1 エポックとして、前エポックの平均から再開始しながら
各元の不変性残差 max_x ‖A_x w̄ − w̄‖_∞ が tol を下回るまで繰り返す。
P は列確率行列なので質量 Σ w は保存される。
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.typing as npt
import scipy.sparse as scsp

# エポック終了ごとの通知: (累計反復回数, 残差)
EpochCallback = Callable[[int, float], None]


@dataclass
class CesaroRun:
    """Cesàro 反復の結果。iterations は P の適用回数の合計。"""

    weights: npt.NDArray[np.float64]
    iterations: int
    residual: float
    converged: bool
    epochs: int


def stack_actions(actions: list[npt.ArrayLike]) -> npt.NDArray[np.float64]:
    """作用行列を (n, n, n) の float64 配列にまとめる。"""
    stacked = np.asarray(actions, dtype=np.float64)
    if stacked.ndim != 3 or stacked.shape[1] != stacked.shape[2]:
        raise ValueError(f"expected a stack of square matrices, got shape {stacked.shape}")
    return stacked


def averaged_operator(actions: npt.NDArray[np.float64]) -> scsp.csr_matrix:
    """一様平均 P = (1/n) Σ_x A_x。"""
    return scsp.csr_matrix(actions.mean(axis=0))


def invariance_residual(
    actions: npt.NDArray[np.float64], w: npt.NDArray[np.float64]
) -> float:
    """max_x ‖A_x w − w‖_∞。"""
    moved = actions @ w  # (n, n)
    return float(np.max(np.abs(moved - w[np.newaxis, :])))


def cesaro_average(
    actions: npt.NDArray[np.float64],
    w0: npt.ArrayLike,
    tol: float = 1e-12,
    max_iter: int = 100_000,
    epoch: int = 64,
    on_epoch: EpochCallback | None = None,
) -> CesaroRun:
    """再開始付き Cesàro 平均で作用の不動点を近似する。

    Args:
        actions: (n, n, n) の作用行列スタック
        w0: 初期点（K の点）
        tol: 各元の不変性残差の許容値
        max_iter: P の適用回数の上限
        epoch: 1 エポックの反復回数
        on_epoch: エポック終了時のコールバック

    Returns:
        CesaroRun（converged が False でも最後の平均を返す）
    """
    p = averaged_operator(actions)
    w = np.asarray(w0, dtype=np.float64).copy()
    epoch = max(1, int(epoch))

    iterations = 0
    epochs = 0
    residual = invariance_residual(actions, w)
    if residual < tol:
        return CesaroRun(w, 0, residual, True, 0)

    while iterations < max_iter:
        steps = min(epoch, max_iter - iterations)
        total = np.zeros_like(w)
        current = w
        for _ in range(steps):
            total += current
            current = p @ current
        iterations += steps
        epochs += 1
        w = total / steps
        residual = invariance_residual(actions, w)
        if on_epoch is not None:
            on_epoch(iterations, residual)
        if residual < tol:
            return CesaroRun(w, iterations, residual, True, epochs)

    return CesaroRun(w, iterations, residual, False, epochs)
