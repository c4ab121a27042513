"""corpus.py のテスト。"""

from fractions import Fraction

import pytest

from hypal.application.corpus import (
    class_sizes,
    d4_conjugacy,
    gen_conjugacy,
    gen_group,
    gen_order2,
    golden_suite,
    nonassociative_table,
    nosupport_table,
    ordered_classes,
    s3_conjugacy,
)
from hypal.domain.errors import HypalError
from hypal.domain.group import (
    GroupTable,
    cyclic_group,
    dihedral_group,
    quaternion_group,
    symmetric_group,
)
from hypal.domain.hypergroup import ConvolutionTable, FiniteHypergroup, validate_table


class TestGroupHypergroup:
    def test_point_masses(self) -> None:
        h = gen_group(symmetric_group(3))
        for x in range(h.n):
            for y in range(h.n):
                assert sum(h.table.conv[x][y]) == 1
                assert max(h.table.conv[x][y]) == 1

    def test_involution_is_group_inverse(self) -> None:
        h = gen_group(symmetric_group(3))
        assert h.symbol(h.sigma(h.index("120"))) == "201"
        assert h.symbol(h.sigma(h.index("021"))) == "021"

    def test_quaternion(self) -> None:
        h = gen_group(quaternion_group())
        assert h.name == "Q8"
        assert h.n == 8


class TestConjugacy:
    def test_class_order(self) -> None:
        """単位元、中心、その他の順。"""
        assert ordered_classes(dihedral_group(4)) == [[0], [2], [1, 3], [4, 6], [5, 7]]
        assert class_sizes(symmetric_group(3)) == (1, 3, 2)

    def test_s3_class_products(self) -> None:
        h = s3_conjugacy()
        assert h.elements == ("e", "t", "c")
        assert h.table.conv[1][1] == (Fraction(1, 3), Fraction(0), Fraction(2, 3))
        assert h.table.conv[2][2] == (Fraction(1, 2), Fraction(0), Fraction(1, 2))
        assert h.table.conv[1][2] == (Fraction(0), Fraction(1), Fraction(0))

    def test_d4_class_products(self) -> None:
        h = d4_conjugacy()
        r, s, t = h.index("r"), h.index("s"), h.index("t")
        assert h.table.conv[r][r][:2] == (Fraction(1, 2), Fraction(1, 2))
        assert h.table.conv[r][s][t] == 1

    def test_default_names(self) -> None:
        h = gen_conjugacy(quaternion_group())
        assert h.name == "Q8c"
        assert h.elements == ("e", "C1", "C2", "C3", "C4")

    def test_name_count_mismatch(self) -> None:
        with pytest.raises(HypalError, match="3 conjugacy classes"):
            gen_conjugacy(symmetric_group(3), names=("e", "t"))

    @pytest.mark.parametrize("g", [cyclic_group(3), cyclic_group(4), cyclic_group(6)], ids=lambda g: g.name)
    def test_abelian_group_recovers_group_hypergroup(self, g: GroupTable) -> None:
        conj = gen_conjugacy(g, names=list(g.elements))
        grp = gen_group(g)
        assert conj.table.elements == grp.table.elements
        assert conj.table.involution == grp.table.involution
        assert conj.table.conv == grp.table.conv


class TestOrder2:
    def test_valid_alpha(self) -> None:
        h = gen_order2("1/4")
        assert isinstance(h, FiniteHypergroup)
        assert h.name == "H2(1/4)"
        assert h.table.conv[1][1] == (Fraction(1, 4), Fraction(3, 4))

    def test_alpha_one_is_z2(self) -> None:
        h = gen_order2(1)
        assert h.table.conv[1][1] == (Fraction(1), Fraction(0))

    @pytest.mark.parametrize("alpha", ["0", "-1/2", "3/2"])
    def test_out_of_range(self, alpha: str) -> None:
        with pytest.raises(HypalError, match="alpha"):
            gen_order2(alpha)

    def test_relaxed_returns_raw_table(self) -> None:
        t = gen_order2(0, relaxed=True)
        assert isinstance(t, ConvolutionTable)
        assert t.name == "H2(0)"
        assert not validate_table(t).valid


class TestFixtures:
    def test_golden_entries(self) -> None:
        names = [e.name for e in golden_suite()]
        assert names == ["Z2", "Z3", "S3", "S3c", "H2(1/2)", "H2(1/4)", "D4c"]
        for entry in golden_suite():
            assert entry.haar[0] == 1
            assert entry.mean.mass == 1
            assert entry.mean == entry.haar.scale(1 / entry.haar.mass)

    def test_class_hypergroup_haar_is_class_sizes(self) -> None:
        entry = next(e for e in golden_suite() if e.name == "D4c")
        assert tuple(entry.haar.weights) == class_sizes(dihedral_group(4))

    def test_negative_tables_are_structurally_sound(self) -> None:
        assert nosupport_table().name == "NoSupport"
        assert nonassociative_table().n == 3
