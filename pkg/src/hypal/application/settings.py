"""ソルバー設定。"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Callable, Mapping

from hypal.domain.errors import ConfigurationError

# 進捗コールバック: (ステージ名, 進捗 0.0〜1.0)
ProgressCallback = Callable[[str, float], None]

SEED_ENV = "HYPAL_SEED"

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100_000
DEFAULT_EPOCH = 64
DEFAULT_SAMPLES = 20


@dataclass(frozen=True)
class SolverSettings:
    """Cesàro 反復とサンプリングの設定。

    tol: 各元ごとの不変性残差（∞ノルム）の許容値
    max_iter: 作用素の適用回数の上限
    epoch: 平均を再開始するまでの反復回数
    samples: 疑似乱数関数の本数（ppt / 平均の検査用）
    seed: 疑似乱数のシード
    """

    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    epoch: int = DEFAULT_EPOCH
    samples: int = DEFAULT_SAMPLES
    seed: int = 0

    def __post_init__(self) -> None:
        # 範囲外の値はクランプ
        object.__setattr__(self, "tol", max(0.0, float(self.tol)))
        object.__setattr__(self, "max_iter", max(1, int(self.max_iter)))
        object.__setattr__(self, "epoch", max(1, int(self.epoch)))
        object.__setattr__(self, "samples", max(0, int(self.samples)))

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> SolverSettings:
        """環境変数 HYPAL_SEED からシードを読む。

        Raises:
            ConfigurationError: HYPAL_SEED が整数でない
        """
        env = os.environ if environ is None else environ
        raw = env.get(SEED_ENV, "").strip()
        if not raw:
            return cls()
        try:
            seed = int(raw)
        except ValueError:
            raise ConfigurationError(f"{SEED_ENV} must be an integer, got {raw!r}") from None
        return cls(seed=seed)

    def with_overrides(self, **changes: object) -> SolverSettings:
        """None でない値だけを上書きした設定を返す。"""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})
