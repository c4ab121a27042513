"""equivalence_service.py のテスト。"""

from hypal.application.corpus import golden_suite, nosupport_table, s3_conjugacy
from hypal.application.equivalence_service import equivalence_report, sample_functions
from hypal.application.haar_service import Normalization
from hypal.application.settings import SolverSettings
from hypal.domain.measure import Measure


class TestSampleFunctions:
    def test_labels(self) -> None:
        functions = sample_functions(3, ("e", "t", "c"), SolverSettings(samples=2))
        assert [label for label, _ in functions] == ["1_e", "1_t", "1_c", "random[0]", "random[1]"]
        assert all(f.is_positive() and f.is_nonzero() for _, f in functions)

    def test_seeded(self) -> None:
        a = sample_functions(3, ("e", "t", "c"), SolverSettings(samples=3, seed=5))
        b = sample_functions(3, ("e", "t", "c"), SolverSettings(samples=3, seed=5))
        assert a == b


class TestEquivalenceReport:
    def test_all_conditions_hold_on_golden_suite(self) -> None:
        settings = SolverSettings(samples=3)
        for entry in golden_suite():
            report = equivalence_report(entry.hypergroup, settings)
            assert report.all_hold, entry.name
            assert report.consistent
            assert report.mean_exists
            assert report.chains_ok
            assert report.haar == entry.haar
            assert len(report.chains) == entry.hypergroup.n + 3

    def test_chain_evaluates_gamma_to_one(self) -> None:
        report = equivalence_report(s3_conjugacy(), SolverSettings(samples=2))
        for chain in report.chains:
            assert chain.gamma is not None and chain.gamma.affirmative
            assert chain.k_point is not None
            assert chain.gamma_of_f == 1

    def test_table_without_support_axiom(self) -> None:
        """δ_a は不変だが ppt は 1_e で破れる。公理 (E) が無いと同値性は崩れる。"""
        report = equivalence_report(nosupport_table(), SolverSettings(samples=4))
        assert report.haar_exists
        assert report.haar == Measure.of([0, 1])
        assert report.haar_normalization is Normalization.FUNCTIONAL
        assert report.ppt_some
        assert not report.ppt_all
        assert not report.consistent
        assert report.mean_exists
        assert report.chains_ok
        failing = [c for c in report.chains if not c.ppt.holds]
        assert [c.label for c in failing][0] == "1_e"
        assert report.mean is not None and report.mean.weights == report.haar

    def test_progress(self) -> None:
        stages: list[str] = []
        equivalence_report(s3_conjugacy(), SolverSettings(samples=1), lambda s, v: stages.append(s))
        assert stages[0] == "Haar 測度"
        assert "ppt 判定" in stages
        assert stages[-1] == "不変平均"
