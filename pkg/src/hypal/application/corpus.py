"""ハイパーグループの生成器と検証済みフィクスチャ。

群から作る点質量ハイパーグループ、共役類ハイパーグループ（群環での総当たり計算）、
位数 2 の族 H2(α)、および公理違反の負例を提供する。
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from hypal.domain.errors import HypalError
from hypal.domain.group import (
    GroupTable,
    cyclic_group,
    dihedral_group,
    symmetric_group,
)
from hypal.domain.hypergroup import (
    Axiom,
    ConvolutionTable,
    FiniteHypergroup,
    TableLike,
    table_from_products,
)
from hypal.domain.measure import Measure


def _freeze(conv: list[list[list[Fraction]]]) -> tuple:
    return tuple(tuple(tuple(row) for row in plane) for plane in conv)


def gen_group(g: GroupTable, name: str | None = None) -> FiniteHypergroup:
    """群 G の点質量ハイパーグループ。c[x][y][z] = [z = xy]、σ = 逆元。"""
    n = g.order
    conv = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for x in range(n):
        for y in range(n):
            conv[x][y][g.mult[x][y]] = Fraction(1)
    table = ConvolutionTable(
        name=name or g.name,
        elements=g.elements,
        involution=tuple(g.inverse(x) for x in range(n)),
        conv=_freeze(conv),
    )
    return FiniteHypergroup.from_table(table)


def ordered_classes(g: GroupTable) -> list[list[int]]:
    """共役類を 単位元 → 1 元の類（中心） → その他 の順に並べる（各群内は出現順）。"""
    classes = g.conjugacy_classes()
    identity = [c for c in classes if c == [0]]
    singletons = [c for c in classes if len(c) == 1 and c != [0]]
    rest = [c for c in classes if len(c) > 1]
    return identity + singletons + rest


def gen_conjugacy(
    g: GroupTable,
    names: Sequence[str] | None = None,
    name: str | None = None,
) -> FiniteHypergroup:
    """共役類ハイパーグループ。

    c[C_i][C_j][C_k] = #{(a, b) ∈ C_i × C_j : ab ∈ C_k} / (|C_i|·|C_j|)
    を群環の類和の積から総当たりで求める。σ は逆元の類。

    Args:
        g: 有限群
        names: 類のシンボル（既定は e, C1, C2, ...）
        name: テーブル名（既定は群名 + "c"）

    Returns:
        検証済みの FiniteHypergroup
    """
    classes = ordered_classes(g)
    k = len(classes)
    if names is None:
        names = ["e"] + [f"C{i}" for i in range(1, k)]
    if len(names) != k:
        raise HypalError(f"{g.name} has {k} conjugacy classes, got {len(names)} names")
    class_of = {a: i for i, members in enumerate(classes) for a in members}

    conv = [[[Fraction(0)] * k for _ in range(k)] for _ in range(k)]
    for i, ci in enumerate(classes):
        for j, cj in enumerate(classes):
            counts = Counter(class_of[g.mult[a][b]] for a in ci for b in cj)
            pairs = len(ci) * len(cj)
            for target, count in counts.items():
                conv[i][j][target] = Fraction(count, pairs)

    involution = tuple(class_of[g.inverse(members[0])] for members in classes)
    table = ConvolutionTable(
        name=name or f"{g.name}c",
        elements=tuple(names),
        involution=involution,
        conv=_freeze(conv),
    )
    return FiniteHypergroup.from_table(table)


def class_sizes(g: GroupTable) -> tuple[int, ...]:
    """ordered_classes と同じ順の類の大きさ。"""
    return tuple(len(c) for c in ordered_classes(g))


def order2_table(alpha: Fraction | int | str, name: str | None = None) -> ConvolutionTable:
    """{e, a}、σ = id、a∗a = α·δ_e + (1 − α)·δ_a の生テーブル（公理未検証）。"""
    a = Fraction(alpha)
    dist = {"e": a, "a": 1 - a}
    return table_from_products(
        name or f"H2({a})",
        ("e", "a"),
        {"e": "e", "a": "a"},
        {("a", "a"): {z: v for z, v in dist.items() if v != 0}},
    )


def gen_order2(alpha: Fraction | int | str, relaxed: bool = False) -> TableLike:
    """位数 2 の族 H2(α)。Haar は (1, 1/α)。

    Args:
        alpha: (0, 1] の有理数
        relaxed: True なら公理検証をせず生テーブルを返す（α = 0 の負例用）

    Raises:
        HypalError: relaxed でないのに α が (0, 1] の外
    """
    a = Fraction(alpha)
    if relaxed:
        return order2_table(a)
    if not 0 < a <= 1:
        raise HypalError(f"alpha must be in (0, 1], got {a}")
    return FiniteHypergroup.from_table(order2_table(a))


def nosupport_table() -> ConvolutionTable:
    """a∗a = δ_a。支持公理 (E) に違反する。"""
    return order2_table(0, name="NoSupport")


def nonassociative_table() -> ConvolutionTable:
    """{e, a, b}、σ = id。可換だが結合律 (A) に違反する。"""
    half, third = Fraction(1, 2), Fraction(1, 3)
    return table_from_products(
        "NonAssoc",
        ("e", "a", "b"),
        {"e": "e", "a": "a", "b": "b"},
        {
            ("a", "a"): {"e": half, "b": half},
            ("b", "b"): {"e": half, "a": half},
            ("a", "b"): {"a": third, "b": 2 * third},
            ("b", "a"): {"a": third, "b": 2 * third},
        },
    )


def s3_conjugacy() -> FiniteHypergroup:
    """S3 の類ハイパーグループ (e, t, c)。t = 互換、c = 3-巡回。"""
    return gen_conjugacy(symmetric_group(3), names=("e", "t", "c"), name="S3c")


def d4_conjugacy() -> FiniteHypergroup:
    """D4 の類ハイパーグループ (e, z, r, s, t)。z = 中心の回転 r²。"""
    return gen_conjugacy(dihedral_group(4), names=("e", "z", "r", "s", "t"), name="D4c")


@dataclass(frozen=True)
class GoldenEntry:
    """正例フィクスチャと期待値（Haar は λ_e = 1、平均は質量 1）。"""

    name: str
    hypergroup: FiniteHypergroup
    haar: Measure
    mean: Measure


@dataclass(frozen=True)
class NegativeFixture:
    """公理違反フィクスチャと期待される違反公理・証拠。"""

    name: str
    table: ConvolutionTable
    axiom: Axiom
    witness: tuple[str, ...]


def _entry(name: str, h: FiniteHypergroup, haar: Sequence[int | Fraction]) -> GoldenEntry:
    weights = Measure.of(haar)
    return GoldenEntry(name, h, weights, weights.scale(1 / weights.mass))


def golden_suite() -> list[GoldenEntry]:
    """正例フィクスチャ一式。"""
    return [
        _entry("Z2", gen_group(cyclic_group(2)), (1, 1)),
        _entry("Z3", gen_group(cyclic_group(3)), (1, 1, 1)),
        _entry("S3", gen_group(symmetric_group(3)), (1,) * 6),
        _entry("S3c", s3_conjugacy(), (1, 3, 2)),
        _entry("H2(1/2)", gen_order2(Fraction(1, 2)), (1, 2)),
        _entry("H2(1/4)", gen_order2(Fraction(1, 4)), (1, 4)),
        _entry("D4c", d4_conjugacy(), (1, 1, 2, 2, 2)),
    ]


def negative_fixtures() -> list[NegativeFixture]:
    """負例フィクスチャ一式。"""
    return [
        NegativeFixture("NoSupport", nosupport_table(), Axiom.SUPPORT, ("a", "a")),
        NegativeFixture("NonAssoc", nonassociative_table(), Axiom.ASSOCIATIVITY, ("a", "a", "b", "e")),
    ]
