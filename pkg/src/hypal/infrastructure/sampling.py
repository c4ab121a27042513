"""シード固定の疑似乱数サンプリング。

numpy.random.default_rng で整数を引き、厳密な有理数に変換して返す。
同じ seed からは常に同じ列が得られる。
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from hypal.domain.measure import FunctionOnH

_DENOMINATOR = 8
_NUMERATOR_MAX = 16


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_positive_functions(n: int, count: int, seed: int) -> list[FunctionOnH]:
    """非負・非零の有理数値関数を count 本生成する。

    値は {0, 1/8, ..., 2} から取り、全成分 0 になった場合は引き直す。
    """
    rng = make_rng(seed)
    out: list[FunctionOnH] = []
    while len(out) < count:
        numerators = rng.integers(0, _NUMERATOR_MAX + 1, size=n)
        if not numerators.any():
            continue
        out.append(
            FunctionOnH(tuple(Fraction(int(k), _DENOMINATOR) for k in numerators))
        )
    return out


def random_signed_functions(n: int, count: int, seed: int) -> list[FunctionOnH]:
    """符号付きの有理数値関数を count 本生成する（平均の検査用）。"""
    rng = make_rng(seed)
    return [
        FunctionOnH(
            tuple(
                Fraction(int(k), _DENOMINATOR)
                for k in rng.integers(-_NUMERATOR_MAX, _NUMERATOR_MAX + 1, size=n)
            )
        )
        for _ in range(count)
    ]


def random_objective(rng: np.random.Generator, n: int) -> tuple[Fraction, ...]:
    """LP 用のランダムな整数目的係数（-5..5）。"""
    return tuple(Fraction(int(k)) for k in rng.integers(-5, 6, size=n))


def random_convex_weights(rng: np.random.Generator, k: int) -> tuple[Fraction, ...]:
    """和が 1 の正の有理数重みを k 個返す。"""
    raw = [int(v) for v in rng.integers(1, 10, size=k)]
    total = sum(raw)
    return tuple(Fraction(v, total) for v in raw)
