"""測度代数 M(H) の演算と関数への平行移動作用。

畳み込み (μ∗ν)_z = Σ_{x,y} μ_x ν_y c[x][y][z] は双線形拡張で定義する。
関数への作用は各点で (μ∗f)(y) = Σ_x μ_x Σ_z c[x][y][z] f(z) とする。
この規約では左不変性 λ(δ_x∗f) = λ(f) が Σ_y c[x][y][z] λ_y = λ_z と同値になる。
"""

from __future__ import annotations

from fractions import Fraction

from hypal.domain.errors import InvalidMeasureError
from hypal.domain.hypergroup import TableLike, as_table
from hypal.domain.measure import FunctionOnH, Measure

_ZERO = Fraction(0)


def _require_length(n: int, *items: Measure | FunctionOnH) -> None:
    for item in items:
        if len(item) != n:
            raise InvalidMeasureError(
                f"expected a vector over {n} elements, got {len(item)}"
            )


def convolve_measures(h: TableLike, mu: Measure, nu: Measure) -> Measure:
    """測度の畳み込み μ∗ν。"""
    t = as_table(h)
    n = t.n
    _require_length(n, mu, nu)
    out = [_ZERO] * n
    for x in range(n):
        if mu[x] == 0:
            continue
        for y in range(n):
            w = mu[x] * nu[y]
            if w == 0:
                continue
            dist = t.conv[x][y]
            for z in range(n):
                if dist[z]:
                    out[z] += w * dist[z]
    return Measure(tuple(out))


def involute_measure(h: TableLike, mu: Measure) -> Measure:
    """対合 μ̌。(μ̌)_z = μ_{σ(z)}。"""
    t = as_table(h)
    _require_length(t.n, mu)
    return Measure(tuple(mu[t.involution[z]] for z in range(t.n)))


def translate_point(h: TableLike, x: int, f: FunctionOnH) -> FunctionOnH:
    """点測度による平行移動 (δ_x∗f)(y) = Σ_z c[x][y][z] f(z)。"""
    t = as_table(h)
    n = t.n
    _require_length(n, f)
    plane = t.conv[x]
    return FunctionOnH(
        tuple(sum((plane[y][z] * f[z] for z in range(n) if plane[y][z]), _ZERO) for y in range(n))
    )


def translates(h: TableLike, f: FunctionOnH) -> tuple[FunctionOnH, ...]:
    """全ての点平行移動 (δ_x∗f)_{x∈H} をまとめて返す。"""
    t = as_table(h)
    return tuple(translate_point(t, x, f) for x in range(t.n))


def translate_function(h: TableLike, mu: Measure, f: FunctionOnH) -> FunctionOnH:
    """測度による平行移動 μ∗f = Σ_x μ_x (δ_x∗f)。"""
    t = as_table(h)
    n = t.n
    _require_length(n, mu, f)
    out = [_ZERO] * n
    for x in range(n):
        if mu[x] == 0:
            continue
        shifted = translate_point(t, x, f)
        for y in range(n):
            out[y] += mu[x] * shifted[y]
    return FunctionOnH(tuple(out))


def jordan_decompose(mu: Measure) -> tuple[Measure, Measure]:
    """Jordan 分解 μ = μ₊ − μ₋（台は互いに素）。"""
    plus = Measure(tuple(a if a > 0 else _ZERO for a in mu.weights))
    minus = Measure(tuple(-a if a < 0 else _ZERO for a in mu.weights))
    return plus, minus


def integrate(w: Measure, f: FunctionOnH) -> Fraction:
    """ペアリング ⟨w, f⟩ = Σ_x w_x f(x)。"""
    _require_length(len(w), f)
    return sum((a * b for a, b in zip(w.weights, f.values)), _ZERO)
