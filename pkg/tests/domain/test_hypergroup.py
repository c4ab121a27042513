"""hypergroup.py のテスト。"""

from fractions import Fraction

import pytest

from hypal.application.corpus import (
    gen_group,
    golden_suite,
    negative_fixtures,
    nonassociative_table,
    nosupport_table,
    s3_conjugacy,
)
from hypal.domain.errors import (
    AxiomViolationError,
    TableStructureError,
    UnknownElementError,
)
from hypal.domain.group import symmetric_group
from hypal.domain.hypergroup import (
    Axiom,
    CheckStatus,
    ConvolutionTable,
    FiniteHypergroup,
    convolve_points,
    support,
    table_from_products,
    validate_table,
)
from hypal.domain.measure import Measure


class TestTableFromProducts:
    def test_identity_pairs_are_filled(self) -> None:
        t = table_from_products("Z2", ("e", "a"), {"e": "e", "a": "a"}, {("a", "a"): {"e": 1}})
        assert t.conv[0][1] == (Fraction(0), Fraction(1))
        assert t.conv[1][0] == (Fraction(0), Fraction(1))
        assert t.conv[0][0] == (Fraction(1), Fraction(0))

    def test_missing_pair_raises(self) -> None:
        with pytest.raises(TableStructureError, match="missing convolution for pair 'a,b'"):
            table_from_products(
                "broken",
                ("e", "a", "b"),
                {"e": "e", "a": "a", "b": "b"},
                {("a", "a"): {"e": 1}, ("b", "b"): {"e": 1}, ("b", "a"): {"a": 1}},
            )

    def test_row_not_summing_to_one_raises(self) -> None:
        with pytest.raises(TableStructureError, match="sums to 3/4"):
            table_from_products(
                "broken", ("e", "a"), {"e": "e", "a": "a"}, {("a", "a"): {"e": "1/4", "a": "1/2"}}
            )

    def test_unknown_symbol_raises(self) -> None:
        with pytest.raises(UnknownElementError):
            table_from_products("broken", ("e", "a"), {"e": "e", "a": "a"}, {("a", "x"): {"e": 1}})

    def test_involution_must_be_self_inverse(self) -> None:
        with pytest.raises(TableStructureError, match="involution"):
            table_from_products(
                "broken",
                ("e", "a", "b"),
                [0, 2, 0],
                {(x, y): {"e": 1} for x in "ab" for y in "ab"},
            )

    def test_negative_constant_is_structural_error(self) -> None:
        with pytest.raises(TableStructureError, match="negative"):
            table_from_products(
                "broken", ("e", "a"), {"e": "e", "a": "a"}, {("a", "a"): {"e": "3/2", "a": "-1/2"}}
            )


class TestValidateTable:
    def test_golden_suite_is_valid(self) -> None:
        for entry in golden_suite():
            report = validate_table(entry.hypergroup.table)
            assert report.valid, entry.name
            assert report.hypergroup is not None
            assert report.failures == ()

    def test_continuity_axioms_are_automatic(self) -> None:
        report = validate_table(s3_conjugacy().table)
        for axiom in (Axiom.CONVOLUTION_CONTINUITY, Axiom.SUPPORT_CONTINUITY):
            check = report.check(axiom)
            assert check.status is CheckStatus.AUTOMATIC
            assert check.passed

    def test_negative_fixtures_fail_expected_axiom(self) -> None:
        for fixture in negative_fixtures():
            report = validate_table(fixture.table)
            assert not report.valid
            assert report.hypergroup is None
            assert [c.axiom for c in report.failures] == [fixture.axiom]
            witness = report.check(fixture.axiom).witness
            assert witness is not None
            assert witness.symbols == fixture.witness

    def test_second_identity_is_caught_by_identity_rows(self) -> None:
        """a も左単位元として振る舞うテーブルは c[a][e][e] = 1 で (C) に落ちる。"""
        one, zero = Fraction(1), Fraction(0)
        t = ConvolutionTable(
            name="TwoIdentities",
            elements=("e", "a"),
            involution=(0, 1),
            conv=(((one, zero), (zero, one)), ((one, zero), (zero, one))),
        )
        check = validate_table(t).check(Axiom.IDENTITY)
        assert not check.passed
        assert check.witness is not None
        assert check.witness.symbols == ("a", "e", "e")

    def test_identity_row_excludes_other_elements(self) -> None:
        for entry in golden_suite():
            t = entry.hypergroup.table
            assert all(t.conv[k][0][0] == 0 for k in range(1, t.n)), entry.name

    def test_nonassociative_witness_values(self) -> None:
        """((δa∗δa)∗δb)(e) = 1/4、(δa∗(δa∗δb))(e) = 1/6。"""
        witness = validate_table(nonassociative_table()).check(Axiom.ASSOCIATIVITY).witness
        assert witness is not None
        assert witness.left == Fraction(1, 4)
        assert witness.right == Fraction(1, 6)

    def test_support_witness_detail(self) -> None:
        witness = validate_table(nosupport_table()).check(Axiom.SUPPORT).witness
        assert witness is not None
        assert witness.left == 0
        assert "= 0 but y = σ(x)" in witness.detail

    def test_wrong_involution_fails_involution_axiom(self) -> None:
        s3 = gen_group(symmetric_group(3)).table
        t = ConvolutionTable("S3/id", s3.elements, tuple(range(6)), s3.conv)
        report = validate_table(t)
        check = report.check(Axiom.INVOLUTION)
        assert not check.passed
        assert check.witness is not None
        assert check.witness.left != check.witness.right

    def test_non_identity_fails_identity_axiom(self) -> None:
        t = table_from_products(
            "bad-e",
            ("e", "a"),
            {"e": "e", "a": "a"},
            {("e", "a"): {"e": 1}, ("a", "a"): {"e": 1}},
        )
        check = validate_table(t).check(Axiom.IDENTITY)
        assert not check.passed
        assert check.witness is not None
        assert check.witness.symbols == ("e", "a", "e")

    def test_cyclic_with_wrong_involution_fails_support(self) -> None:
        t = table_from_products(
            "Z3/id",
            ("e", "g", "g2"),
            {"e": "e", "g": "g", "g2": "g2"},
            {
                ("g", "g"): {"g2": 1},
                ("g", "g2"): {"e": 1},
                ("g2", "g"): {"e": 1},
                ("g2", "g2"): {"g": 1},
            },
        )
        check = validate_table(t).check(Axiom.SUPPORT)
        assert not check.passed
        assert check.witness is not None
        assert check.witness.symbols == ("g", "g")


class TestFiniteHypergroup:
    def test_direct_construction_is_rejected(self) -> None:
        with pytest.raises(TypeError):
            FiniteHypergroup(table=nosupport_table())

    def test_from_table_raises_with_report(self) -> None:
        with pytest.raises(AxiomViolationError) as info:
            FiniteHypergroup.from_table(nosupport_table())
        assert info.value.report.failures[0].axiom is Axiom.SUPPORT
        assert "E" in str(info.value)

    def test_delegates_to_table(self) -> None:
        h = s3_conjugacy()
        assert h.n == 3
        assert h.elements == ("e", "t", "c")
        assert h.index("c") == 2
        assert h.symbol(1) == "t"
        assert h.identity == 0
        assert h.sigma(1) == 1
        assert h.c(1, 1, 2) == Fraction(2, 3)

    def test_unknown_symbol(self) -> None:
        with pytest.raises(UnknownElementError):
            s3_conjugacy().index("x")


class TestPointConvolution:
    def test_class_hypergroup_product(self) -> None:
        h = s3_conjugacy()
        assert convolve_points(h, "t", "t") == Measure.of([Fraction(1, 3), 0, Fraction(2, 3)])
        assert support(h, "t", "t") == frozenset({"e", "c"})
        assert support(h, "t", "c") == frozenset({"t"})

    def test_group_product_is_point_mass(self) -> None:
        h = gen_group(symmetric_group(3))
        m = convolve_points(h, "021", "102")
        assert m == Measure.point(6, h.index("201"))
        assert m.mass == 1
