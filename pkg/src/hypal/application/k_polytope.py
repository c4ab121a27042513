"""正規化された正の汎関数の多面体 K。

K = {w ≥ 0 : ⟨w, δ_s∗f⟩ = 1 (∀s ∈ H)}。
線形性により ⟨w, μ∗f⟩ = μ(H) が全ての μ で成り立つ（点測度の制約で十分）。
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from hypal.application.ppt_service import dominate, require_test_function
from hypal.domain.algebra import integrate, translates
from hypal.domain.errors import HaarSolveError, InvalidFunctionError
from hypal.domain.hypergroup import TableLike
from hypal.domain.linear_program import (
    Constraint,
    LinearProgram,
    LPStatus,
    Relation,
    Sense,
    feasible_point,
    solve,
)
from hypal.domain.measure import FunctionOnH, Measure
from hypal.infrastructure.sampling import make_rng, random_convex_weights, random_objective

_ONE = Fraction(1)


@dataclass(frozen=True)
class KPolytope:
    """K の制約系。translates[s] = δ_s∗f。"""

    hypergroup: TableLike
    f: FunctionOnH
    translates: tuple[FunctionOnH, ...]

    @property
    def n(self) -> int:
        return len(self.translates)

    def constraints(self) -> list[Constraint]:
        """⟨w, δ_s∗f⟩ = 1 の等式制約（w ≥ 0 は LP の変数制約で表す）。"""
        return [Constraint(t.values, Relation.EQ, _ONE) for t in self.translates]

    def contains(self, w: Measure) -> bool:
        """w ∈ K を厳密に判定する。"""
        if len(w) != self.n or not w.is_positive():
            return False
        return all(integrate(w, t) == 1 for t in self.translates)


def build_K(h: TableLike, f: FunctionOnH) -> KPolytope:
    """H と f から K を組み立てる。"""
    require_test_function(h, f)
    return KPolytope(hypergroup=h, f=f, translates=translates(h, f))


@dataclass(frozen=True)
class KFeasibility:
    """k_feasible の結果。point か Farkas 証明のどちらか一方を持つ。"""

    point: Measure | None
    certificate: tuple[Fraction, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.point is not None


def k_feasible(k: KPolytope) -> KFeasibility:
    """K の点を 1 つ求める。空なら Farkas 証明を返す（例外ではない）。"""
    outcome = feasible_point(k.constraints(), k.n)
    if outcome.status is LPStatus.INFEASIBLE:
        return KFeasibility(point=None, certificate=outcome.farkas)
    assert outcome.point is not None
    return KFeasibility(point=Measure(outcome.point))


def _extreme_point(k: KPolytope, objective: tuple[Fraction, ...]) -> Measure | None:
    outcome = solve(LinearProgram.build(Sense.MAX, objective, k.constraints()))
    if outcome.status is not LPStatus.OPTIMAL or outcome.point is None:
        return None
    return Measure(outcome.point)


def k_sample(k: KPolytope, count: int, seed: int = 0) -> list[Measure]:
    """K の点を count 個サンプルする。

    ランダムな目的関数で LP を解いて頂点を集め、
    その有理数凸結合を返す（全点が K に入ることを確認済み）。

    Raises:
        HaarSolveError: K が空
    """
    rng = make_rng(seed)
    vertices: list[Measure] = []
    for _ in range(max(count, 1)):
        v = _extreme_point(k, random_objective(rng, k.n))
        if v is not None and v not in vertices:
            vertices.append(v)
    if not vertices:
        start = k_feasible(k)
        if start.point is None:
            raise HaarSolveError("K is empty")
        vertices.append(start.point)

    points: list[Measure] = []
    for _ in range(count):
        weights = random_convex_weights(rng, len(vertices))
        w = Measure.zero(k.n)
        for lam, v in zip(weights, vertices):
            w = w + v.scale(lam)
        if not k.contains(w):
            raise ArithmeticError("sampled point left K")
        points.append(w)
    return points


@dataclass(frozen=True)
class GammaBounds:
    """K 上の Λ(g) の範囲。非有界側は None。"""

    lower: Fraction | None
    upper: Fraction | None


def gamma_bounds(k: KPolytope, g: FunctionOnH) -> GammaBounds:
    """Γ_f の正値拡張 Λ ∈ K が g に与えうる値の範囲 [min, max]。

    Raises:
        HaarSolveError: K が空
    """
    if len(g) != k.n:
        raise InvalidFunctionError(f"g has {len(g)} values, K lives on {k.n} elements")
    bounds: list[Fraction | None] = []
    for sense in (Sense.MIN, Sense.MAX):
        outcome = solve(LinearProgram.build(sense, g.values, k.constraints()))
        if outcome.status is LPStatus.INFEASIBLE:
            raise HaarSolveError("K is empty")
        bounds.append(outcome.value if outcome.status is LPStatus.OPTIMAL else None)
    return GammaBounds(lower=bounds[0], upper=bounds[1])


def compactness_bound(k: KPolytope, g: FunctionOnH) -> Fraction:
    """K 上一様な評価 |Λ(g)| ≤ μ_g(H)。μ_g は |g| ≤ μ_g∗f を満たす最小の正測度。"""
    if len(g) != k.n:
        raise InvalidFunctionError(f"g has {len(g)} values, K lives on {k.n} elements")
    mu = dominate(k.hypergroup, k.f, g.abs())
    return mu.mass

