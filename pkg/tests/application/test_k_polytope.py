"""k_polytope.py のテスト。"""

from fractions import Fraction

import pytest

from hypal.application.corpus import gen_group, gen_order2, nosupport_table, s3_conjugacy
from hypal.application.k_polytope import (
    build_K,
    compactness_bound,
    gamma_bounds,
    k_feasible,
    k_sample,
)
from hypal.domain.algebra import integrate
from hypal.domain.errors import HaarSolveError, InvalidFunctionError
from hypal.domain.group import cyclic_group, symmetric_group
from hypal.domain.linear_program import LinearProgram, LPOutcome, LPStatus, Sense, verify_outcome
from hypal.domain.measure import FunctionOnH, Measure


class TestKPolytope:
    def test_group_indicator_pins_single_point(self) -> None:
        """群で f = 1_e なら ⟨w, 1_{s⁻¹}⟩ = 1 なので K = {1}。"""
        k = build_K(gen_group(cyclic_group(3)), FunctionOnH.indicator(3, 0))
        result = k_feasible(k)
        assert result.feasible
        assert result.point == Measure.of([1, 1, 1])

    def test_contains(self) -> None:
        k = build_K(gen_order2(Fraction(1, 2)), FunctionOnH.constant(2))
        assert k.contains(Measure.of(["1/3", "2/3"]))
        assert not k.contains(Measure.of([2, -1]))
        assert not k.contains(Measure.of([1, 1]))
        assert not k.contains(Measure.of([1]))

    def test_constraints_count(self) -> None:
        k = build_K(s3_conjugacy(), FunctionOnH.indicator(3, 1))
        assert len(k.constraints()) == 3
        assert k.n == 3

    def test_rejects_invalid_f(self) -> None:
        with pytest.raises(InvalidFunctionError):
            build_K(s3_conjugacy(), FunctionOnH.constant(3, 0))


class TestEmptyK:
    def test_farkas_certificate(self) -> None:
        t = nosupport_table()
        k = build_K(t, FunctionOnH.indicator(2, 0))
        result = k_feasible(k)
        assert not result.feasible
        assert result.certificate is not None
        program = LinearProgram.build(Sense.MAX, [0, 0], k.constraints())
        assert verify_outcome(program, LPOutcome(LPStatus.INFEASIBLE, farkas=result.certificate))

    def test_sampling_raises(self) -> None:
        k = build_K(nosupport_table(), FunctionOnH.indicator(2, 0))
        with pytest.raises(HaarSolveError):
            k_sample(k, 3)
        with pytest.raises(HaarSolveError):
            gamma_bounds(k, FunctionOnH.constant(2))


class TestSampling:
    def test_points_lie_in_K(self) -> None:
        k = build_K(s3_conjugacy(), FunctionOnH.of([1, "1/2", 0]))
        points = k_sample(k, 6, seed=3)
        assert len(points) == 6
        assert all(k.contains(w) for w in points)

    def test_deterministic(self) -> None:
        k = build_K(gen_order2(Fraction(1, 4)), FunctionOnH.constant(2))
        assert k_sample(k, 4, seed=7) == k_sample(k, 4, seed=7)


class TestGammaBounds:
    def test_simplex_range(self) -> None:
        k = build_K(gen_order2(Fraction(1, 2)), FunctionOnH.constant(2))
        bounds = gamma_bounds(k, FunctionOnH.indicator(2, 1))
        assert bounds.lower == 0
        assert bounds.upper == 1

    def test_single_point_range(self) -> None:
        k = build_K(gen_group(cyclic_group(3)), FunctionOnH.indicator(3, 0))
        bounds = gamma_bounds(k, FunctionOnH.of([1, 2, 3]))
        assert bounds.lower == bounds.upper == 6

    def test_compactness_bound(self) -> None:
        h = gen_group(symmetric_group(3))
        f = FunctionOnH.indicator(6, 0)
        k = build_K(h, f)
        g = FunctionOnH.of([1, -1, "1/2", 0, 0, 2])
        bound = compactness_bound(k, g)
        assert bound == Fraction(9, 2)
        for w in k_sample(k, 3):
            assert abs(integrate(w, g)) <= bound

    def test_g_length_mismatch(self) -> None:
        k = build_K(s3_conjugacy(), FunctionOnH.constant(3))
        with pytest.raises(InvalidFunctionError):
            gamma_bounds(k, FunctionOnH.constant(2))
