"""有限ハイパーグループの構造定数テーブルと公理検証。

Pure Python + fractions で実装（外部ライブラリ依存なし）。
構造定数 c[x][y][z] = (δ_x∗δ_y)({z}) はすべて厳密な有理数で保持し、
公理チェックは許容誤差なしの厳密一致で行う。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence, Union

from hypal.domain.errors import (
    AxiomViolationError,
    TableStructureError,
    UnknownElementError,
)
from hypal.domain.measure import Measure

Tensor = tuple[tuple[tuple[Fraction, ...], ...], ...]

IDENTITY_INDEX = 0


@dataclass(frozen=True)
class ConvolutionTable:
    """ハイパーグループ候補の構造定数テーブル。

    index 0 が単位元 e。構造上の整合性（テンソルの完全性、σ が対合置換、
    各点畳み込みが確率測度）は生成時に検査する。代数的公理は validate_table で検査する。
    """

    name: str
    elements: tuple[str, ...]
    involution: tuple[int, ...]
    conv: Tensor

    def __post_init__(self) -> None:
        _check_structure(self)

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> int:
        return IDENTITY_INDEX

    def index(self, symbol: str) -> int:
        """シンボルからインデックスを引く。"""
        try:
            return self.elements.index(symbol)
        except ValueError:
            raise UnknownElementError(symbol) from None

    def symbol(self, i: int) -> str:
        return self.elements[i]

    def c(self, x: int, y: int, z: int) -> Fraction:
        return self.conv[x][y][z]

    def sigma(self, x: int) -> int:
        return self.involution[x]


def _check_structure(t: ConvolutionTable) -> None:
    n = len(t.elements)
    if n < 1:
        raise TableStructureError("table must have at least one element")
    if len(set(t.elements)) != n:
        raise TableStructureError("element symbols must be distinct")
    if any(not isinstance(s, str) or not s for s in t.elements):
        raise TableStructureError("element symbols must be non-empty strings")
    if len(t.involution) != n or sorted(t.involution) != list(range(n)):
        raise TableStructureError("involution is not a permutation of the elements")
    for x in range(n):
        if t.involution[t.involution[x]] != x:
            raise TableStructureError(
                f"involution is not self-inverse at {t.elements[x]!r}"
            )
    if len(t.conv) != n or any(len(row) != n for row in t.conv):
        raise TableStructureError("convolution tensor is incomplete")
    for x, y in product(range(n), repeat=2):
        dist = t.conv[x][y]
        pair = f"{t.elements[x]},{t.elements[y]}"
        if len(dist) != n:
            raise TableStructureError(f"convolution tensor is incomplete at pair {pair!r}")
        if any(not isinstance(v, Fraction) for v in dist):
            raise TableStructureError(f"non-rational structure constant at pair {pair!r}")
        if any(v < 0 for v in dist):
            raise TableStructureError(f"negative structure constant at pair {pair!r}")
        total = sum(dist, Fraction(0))
        if total != 1:
            raise TableStructureError(
                f"row for pair {pair!r} sums to {total}, not 1"
            )


def table_from_products(
    name: str,
    elements: Sequence[str],
    involution: Mapping[str, str] | Sequence[int],
    products: Mapping[tuple[str, str], Mapping[str, Fraction | int | str]],
    fill_identity: bool = True,
) -> ConvolutionTable:
    """疎な積の指定から ConvolutionTable を組み立てる。

    Args:
        name: テーブル名
        elements: 元のシンボル列（先頭が単位元）
        involution: シンボル→シンボルの対応、またはインデックス列
        products: (x, y) → {z: 係数} の疎な分布
        fill_identity: 単位元を含む未指定のペアを単位元公理で補完するか

    Returns:
        ConvolutionTable

    Raises:
        TableStructureError: ペアの欠損・確率行でない等
        UnknownElementError: 未知のシンボル
    """
    elems = tuple(elements)
    n = len(elems)
    lookup = {s: i for i, s in enumerate(elems)}

    def idx(symbol: str) -> int:
        if symbol not in lookup:
            raise UnknownElementError(symbol)
        return lookup[symbol]

    if isinstance(involution, Mapping):
        missing = [s for s in elems if s not in involution]
        if missing:
            raise TableStructureError(f"involution has no image for {missing[0]!r}")
        sigma = tuple(idx(involution[s]) for s in elems)
    else:
        sigma = tuple(int(i) for i in involution)

    conv = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    seen: set[tuple[int, int]] = set()
    for (xs, ys), dist in products.items():
        x, y = idx(xs), idx(ys)
        seen.add((x, y))
        for zs, value in dist.items():
            conv[x][y][idx(zs)] = Fraction(value)

    for x, y in product(range(n), repeat=2):
        if (x, y) in seen:
            continue
        if fill_identity and x == IDENTITY_INDEX:
            conv[x][y][y] = Fraction(1)
        elif fill_identity and y == IDENTITY_INDEX:
            conv[x][y][x] = Fraction(1)
        else:
            raise TableStructureError(
                f"missing convolution for pair '{elems[x]},{elems[y]}'"
            )

    frozen = tuple(tuple(tuple(row) for row in plane) for plane in conv)
    return ConvolutionTable(name=name, elements=elems, involution=sigma, conv=frozen)


# --- 公理検証 ---


class Axiom(Enum):
    """検証対象の公理。3, 4 は有限離散の場合に自動的に成立する連続性条件。"""

    ASSOCIATIVITY = "A"
    PROBABILITY = "B"
    IDENTITY = "C"
    INVOLUTION = "D"
    SUPPORT = "E"
    CONVOLUTION_CONTINUITY = "3"
    SUPPORT_CONTINUITY = "4"


class CheckStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    AUTOMATIC = "automatic (finite discrete)"


@dataclass(frozen=True)
class AxiomWitness:
    """公理違反の最小の証拠（辞書順で最初のインデックス組）。"""

    indices: tuple[int, ...]
    symbols: tuple[str, ...]
    left: Fraction
    right: Fraction | None
    detail: str


@dataclass(frozen=True)
class AxiomCheck:
    axiom: Axiom
    status: CheckStatus
    description: str
    witness: AxiomWitness | None = None

    @property
    def passed(self) -> bool:
        return self.status is not CheckStatus.FAIL


@dataclass(frozen=True)
class ValidationReport:
    """validate_table の結果。valid のときのみ hypergroup を保持する。"""

    name: str
    checks: tuple[AxiomCheck, ...]
    hypergroup: FiniteHypergroup | None

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[AxiomCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def check(self, axiom: Axiom) -> AxiomCheck:
        for c in self.checks:
            if c.axiom is axiom:
                return c
        raise KeyError(axiom)


_VALIDATED = object()


@dataclass(frozen=True)
class FiniteHypergroup:
    """公理検証を通過した有限ハイパーグループ。不変オブジェクト。

    validate_table もしくは from_table 経由でのみ生成できる。
    """

    table: ConvolutionTable
    _token: object = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self._token is not _VALIDATED:
            raise TypeError("FiniteHypergroup is created only through validate_table()")

    @classmethod
    def from_table(cls, table: ConvolutionTable) -> FiniteHypergroup:
        report = validate_table(table)
        if report.hypergroup is None:
            raise AxiomViolationError(report)
        return report.hypergroup

    @property
    def name(self) -> str:
        return self.table.name

    @property
    def elements(self) -> tuple[str, ...]:
        return self.table.elements

    @property
    def involution(self) -> tuple[int, ...]:
        return self.table.involution

    @property
    def n(self) -> int:
        return self.table.n

    @property
    def identity(self) -> int:
        return IDENTITY_INDEX

    def index(self, symbol: str) -> int:
        return self.table.index(symbol)

    def symbol(self, i: int) -> str:
        return self.table.symbol(i)

    def c(self, x: int, y: int, z: int) -> Fraction:
        return self.table.conv[x][y][z]

    def sigma(self, x: int) -> int:
        return self.table.involution[x]


TableLike = Union[ConvolutionTable, FiniteHypergroup]


def as_table(h: TableLike) -> ConvolutionTable:
    """FiniteHypergroup / ConvolutionTable のどちらからでもテーブルを取り出す。"""
    return h.table if isinstance(h, FiniteHypergroup) else h


def _witness(
    t: ConvolutionTable,
    indices: tuple[int, ...],
    left: Fraction,
    right: Fraction | None,
    detail: str,
) -> AxiomWitness:
    return AxiomWitness(
        indices=indices,
        symbols=tuple(t.elements[i] for i in indices),
        left=left,
        right=right,
        detail=detail,
    )


def _check_associativity(t: ConvolutionTable) -> AxiomCheck:
    n = t.n
    c = t.conv
    rng = range(n)
    for x, y, z in product(rng, repeat=3):
        for v in rng:
            # (δ_x∗δ_y)∗δ_z と δ_x∗(δ_y∗δ_z) の v 成分
            left = sum((c[x][y][w] * c[w][z][v] for w in rng), Fraction(0))
            right = sum((c[y][z][w] * c[x][w][v] for w in rng), Fraction(0))
            if left != right:
                return AxiomCheck(
                    Axiom.ASSOCIATIVITY,
                    CheckStatus.FAIL,
                    "associativity of point convolutions",
                    _witness(
                        t, (x, y, z, v), left, right,
                        "((δx∗δy)∗δz)({v}) != (δx∗(δy∗δz))({v})",
                    ),
                )
    return AxiomCheck(Axiom.ASSOCIATIVITY, CheckStatus.PASS, "associativity of point convolutions")


def _check_probability(t: ConvolutionTable) -> AxiomCheck:
    n = t.n
    for x, y in product(range(n), repeat=2):
        dist = t.conv[x][y]
        total = sum(dist, Fraction(0))
        negative = [z for z in range(n) if dist[z] < 0]
        if negative:
            z = negative[0]
            return AxiomCheck(
                Axiom.PROBABILITY, CheckStatus.FAIL, "point convolutions are probability measures",
                _witness(t, (x, y, z), dist[z], Fraction(0), "negative mass"),
            )
        if total != 1:
            return AxiomCheck(
                Axiom.PROBABILITY, CheckStatus.FAIL, "point convolutions are probability measures",
                _witness(t, (x, y), total, Fraction(1), "total mass is not 1"),
            )
    return AxiomCheck(Axiom.PROBABILITY, CheckStatus.PASS, "point convolutions are probability measures")


def _check_identity(t: ConvolutionTable) -> AxiomCheck:
    n = t.n
    e = IDENTITY_INDEX
    desc = "δx∗δe = δe∗δx = δx with e unique"
    for y, z in product(range(n), repeat=2):
        expected = Fraction(int(y == z))
        if t.conv[e][y][z] != expected:
            return AxiomCheck(
                Axiom.IDENTITY, CheckStatus.FAIL, desc,
                _witness(t, (e, y, z), t.conv[e][y][z], expected, "c[e][y][z] != [y=z]"),
            )
        if t.conv[y][e][z] != expected:
            return AxiomCheck(
                Axiom.IDENTITY, CheckStatus.FAIL, desc,
                _witness(t, (y, e, z), t.conv[y][e][z], expected, "c[x][e][z] != [x=z]"),
            )
    # 上のループで c[k][e][e] = 0 (k ≠ e) なので、e 以外は単位元になれない（一意性は自動）
    return AxiomCheck(Axiom.IDENTITY, CheckStatus.PASS, desc)


def _check_involution(t: ConvolutionTable) -> AxiomCheck:
    n = t.n
    s = t.involution
    desc = "(μ∗ν)ˇ = ν̌∗μ̌ on point masses"
    for x, y, z in product(range(n), repeat=3):
        left = t.conv[x][y][z]
        right = t.conv[s[y]][s[x]][s[z]]
        if left != right:
            return AxiomCheck(
                Axiom.INVOLUTION, CheckStatus.FAIL, desc,
                _witness(t, (x, y, z), left, right, "c[x][y][z] != c[σy][σx][σz]"),
            )
    return AxiomCheck(Axiom.INVOLUTION, CheckStatus.PASS, desc)


def _check_support(t: ConvolutionTable) -> AxiomCheck:
    n = t.n
    e = IDENTITY_INDEX
    desc = "e ∈ supp(δx∗δy) iff y = σ(x)"
    for x, y in product(range(n), repeat=2):
        value = t.conv[x][y][e]
        is_inverse = y == t.involution[x]
        if (value > 0) != is_inverse:
            detail = (
                f"c[{t.elements[x]}][{t.elements[y]}][e] = 0 but y = σ(x)"
                if is_inverse
                else f"c[{t.elements[x]}][{t.elements[y]}][e] > 0 but y != σ(x)"
            )
            return AxiomCheck(
                Axiom.SUPPORT, CheckStatus.FAIL, desc,
                _witness(t, (x, y), value, Fraction(0), detail),
            )
    # c[e][e][e] = 1 > 0 なので、ここまで通過すれば σ(e) = e も成立している
    return AxiomCheck(Axiom.SUPPORT, CheckStatus.PASS, desc)


def validate_table(t: ConvolutionTable) -> ValidationReport:
    """有限ハイパーグループの公理 (A)〜(E) を厳密に検証する。

    公理 3, 4（畳み込みと台写像の連続性）は有限離散空間では自動的に成立するため、
    AUTOMATIC として記録する。

    Args:
        t: 構造的に整合した ConvolutionTable

    Returns:
        ValidationReport。全項目が通過した場合のみ hypergroup を持つ。
    """
    checks = (
        _check_associativity(t),
        _check_probability(t),
        _check_identity(t),
        _check_involution(t),
        _check_support(t),
        AxiomCheck(
            Axiom.CONVOLUTION_CONTINUITY, CheckStatus.AUTOMATIC,
            "(x, y) ↦ δx∗δy is continuous",
        ),
        AxiomCheck(
            Axiom.SUPPORT_CONTINUITY, CheckStatus.AUTOMATIC,
            "(x, y) ↦ supp(δx∗δy) is continuous (Michael topology)",
        ),
    )
    valid = all(c.passed for c in checks)
    hypergroup = FiniteHypergroup(table=t, _token=_VALIDATED) if valid else None
    return ValidationReport(name=t.name, checks=checks, hypergroup=hypergroup)


# --- 点測度の畳み込み ---


def convolve_points(h: TableLike, x: str, y: str) -> Measure:
    """点測度の畳み込み δ_x∗δ_y（確率測度）を返す。

    Raises:
        UnknownElementError: 未知のシンボル
    """
    t = as_table(h)
    return Measure(t.conv[t.index(x)][t.index(y)])


def support(h: TableLike, x: str, y: str) -> frozenset[str]:
    """supp(δ_x∗δ_y) = {z : c[x][y][z] > 0}。"""
    t = as_table(h)
    dist = t.conv[t.index(x)][t.index(y)]
    return frozenset(t.elements[z] for z in range(t.n) if dist[z] > 0)
