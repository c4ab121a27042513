"""測度 M(H) と関数空間 C(H) の値オブジェクト。

有限離散 H では C(H) = C_C(H) = UCB_r(H) = WUCB_r(H) であり、
測度・関数ともに元インデックス順の有理数ベクトルで表す。
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


def _as_fractions(values: Iterable[Fraction | int | str]) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class Measure:
    """H 上の符号付き有限測度。weights[x] = μ({x})。"""

    weights: tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Sequence[Fraction | int | str]) -> Measure:
        return cls(_as_fractions(values))

    @classmethod
    def zero(cls, n: int) -> Measure:
        return cls((Fraction(0),) * n)

    @classmethod
    def point(cls, n: int, x: int) -> Measure:
        """点測度 δ_x。"""
        return cls(tuple(Fraction(int(i == x)) for i in range(n)))

    @classmethod
    def from_mapping(
        cls, elements: Sequence[str], values: Mapping[str, Fraction | int | str]
    ) -> Measure:
        return cls(tuple(Fraction(values.get(s, 0)) for s in elements))

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, x: int) -> Fraction:
        return self.weights[x]

    def __add__(self, other: Measure) -> Measure:
        return Measure(tuple(a + b for a, b in zip(self.weights, other.weights, strict=True)))

    def __sub__(self, other: Measure) -> Measure:
        return Measure(tuple(a - b for a, b in zip(self.weights, other.weights, strict=True)))

    def __neg__(self) -> Measure:
        return Measure(tuple(-a for a in self.weights))

    def scale(self, factor: Fraction | int) -> Measure:
        return Measure(tuple(a * factor for a in self.weights))

    @property
    def mass(self) -> Fraction:
        """μ(H)。"""
        return sum(self.weights, Fraction(0))

    @property
    def total_variation(self) -> Fraction:
        """全変動ノルム ‖μ‖ = Σ|μ_x|。"""
        return sum((abs(a) for a in self.weights), Fraction(0))

    def is_positive(self) -> bool:
        return all(a >= 0 for a in self.weights)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.weights)

    def support(self) -> frozenset[int]:
        return frozenset(i for i, a in enumerate(self.weights) if a != 0)

    def as_mapping(self, elements: Sequence[str]) -> dict[str, Fraction]:
        """ゼロ成分を省いたシンボル→重みの辞書。"""
        return {s: a for s, a in zip(elements, self.weights, strict=True) if a != 0}


@dataclass(frozen=True)
class FunctionOnH:
    """H 上の有理数値関数。values[y] = f(y)。"""

    values: tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Sequence[Fraction | int | str]) -> FunctionOnH:
        return cls(_as_fractions(values))

    @classmethod
    def indicator(cls, n: int, y: int) -> FunctionOnH:
        return cls(tuple(Fraction(int(i == y)) for i in range(n)))

    @classmethod
    def constant(cls, n: int, value: Fraction | int = 1) -> FunctionOnH:
        return cls((Fraction(value),) * n)

    @classmethod
    def from_mapping(
        cls, elements: Sequence[str], values: Mapping[str, Fraction | int | str]
    ) -> FunctionOnH:
        return cls(tuple(Fraction(values.get(s, 0)) for s in elements))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, y: int) -> Fraction:
        return self.values[y]

    def __add__(self, other: FunctionOnH) -> FunctionOnH:
        return FunctionOnH(tuple(a + b for a, b in zip(self.values, other.values, strict=True)))

    def __sub__(self, other: FunctionOnH) -> FunctionOnH:
        return FunctionOnH(tuple(a - b for a, b in zip(self.values, other.values, strict=True)))

    def scale(self, factor: Fraction | int) -> FunctionOnH:
        return FunctionOnH(tuple(a * factor for a in self.values))

    def abs(self) -> FunctionOnH:
        return FunctionOnH(tuple(abs(a) for a in self.values))

    def is_positive(self) -> bool:
        return all(a >= 0 for a in self.values)

    def is_nonzero(self) -> bool:
        return any(a != 0 for a in self.values)

    def pointwise_le(self, other: FunctionOnH) -> bool:
        """self ≤ other（各点）。"""
        return all(a <= b for a, b in zip(self.values, other.values, strict=True))

    def as_mapping(self, elements: Sequence[str]) -> dict[str, Fraction]:
        return {s: a for s, a in zip(elements, self.values, strict=True) if a != 0}
