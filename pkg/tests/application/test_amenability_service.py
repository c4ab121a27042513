"""amenability_service.py のテスト。"""

from fractions import Fraction

import pytest

from hypal.application.amenability_service import (
    Mean,
    invariance_constraints,
    invariant_mean,
    verify_mean,
)
from hypal.application.corpus import (
    gen_order2,
    golden_suite,
    nonassociative_table,
    nosupport_table,
    s3_conjugacy,
)
from hypal.domain.errors import InvalidMeasureError
from hypal.domain.linear_program import LinearProgram, LPOutcome, LPStatus, Sense, verify_outcome
from hypal.domain.measure import FunctionOnH, Measure


class TestInvariantMean:
    def test_golden_means(self) -> None:
        for entry in golden_suite():
            outcome = invariant_mean(entry.hypergroup)
            assert outcome.exists, entry.name
            assert outcome.mean is not None
            assert outcome.mean.weights == entry.mean

    def test_mean_is_normalized_haar(self) -> None:
        outcome = invariant_mean(s3_conjugacy())
        assert outcome.mean is not None
        assert outcome.mean.weights == Measure.of(["1/6", "1/2", "1/3"])
        assert outcome.mean(FunctionOnH.constant(3)) == 1

    def test_constraint_rows(self) -> None:
        rows = invariance_constraints(s3_conjugacy())
        assert len(rows) == 3 * 3 + 1

    def test_without_support_axiom_mean_sits_off_identity(self) -> None:
        outcome = invariant_mean(nosupport_table())
        assert outcome.mean is not None
        assert outcome.mean.weights == Measure.of([0, 1])

    def test_no_mean_without_associativity(self) -> None:
        t = nonassociative_table()
        outcome = invariant_mean(t)
        assert not outcome.exists
        assert outcome.certificate is not None
        program = LinearProgram.build(Sense.MAX, [0] * t.n, invariance_constraints(t))
        assert verify_outcome(program, LPOutcome(LPStatus.INFEASIBLE, farkas=outcome.certificate))


class TestMean:
    def test_requires_mass_one(self) -> None:
        with pytest.raises(InvalidMeasureError, match="mass 1"):
            Mean(Measure.of([1, 1]))

    def test_requires_nonnegative(self) -> None:
        with pytest.raises(InvalidMeasureError, match="nonnegative"):
            Mean(Measure.of([2, -1]))

    def test_call(self) -> None:
        m = Mean(Measure.of(["1/3", "2/3"]))
        assert m(FunctionOnH.of([3, "3/2"])) == 2


class TestVerifyMean:
    def test_golden_means_verify(self) -> None:
        for entry in golden_suite():
            result = verify_mean(entry.hypergroup, Mean(entry.mean), sample_size=5, seed=1)
            assert result.ok, entry.name
            assert result.consistent
            assert result.worst == 0
            assert result.functions_checked == entry.hypergroup.n + 5

    def test_uniform_mean_fails_on_order2(self) -> None:
        h = gen_order2(Fraction(1, 2))
        result = verify_mean(h, Mean(Measure.of(["1/2", "1/2"])))
        assert not result.matrix_ok
        assert not result.functional_ok
        assert result.consistent
        assert result.worst == Fraction(1, 4)
        assert result.location == ("a", "e")

    def test_length_mismatch(self) -> None:
        with pytest.raises(InvalidMeasureError):
            verify_mean(s3_conjugacy(), Mean(Measure.of(["1/2", "1/2"])))
