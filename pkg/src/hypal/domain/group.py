"""有限群の乗積表（ハイパーグループ生成の入力）。

群は 0 始まりのインデックスで表し、index 0 を単位元とする。
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Sequence

from hypal.domain.errors import GroupTableError


@dataclass(frozen=True)
class GroupTable:
    """有限群の Cayley 表。mult[a][b] = ab のインデックス。

    生成時に群公理（閉包・単位元 index 0・結合律・逆元）を検査する。
    """

    name: str
    elements: tuple[str, ...]
    mult: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.elements)
        if n == 0:
            raise GroupTableError("group has no elements")
        if len(set(self.elements)) != n:
            raise GroupTableError("group element symbols are not distinct")
        if len(self.mult) != n or any(len(row) != n for row in self.mult):
            raise GroupTableError(f"multiplication table is not {n}x{n}")
        for a, b in product(range(n), repeat=2):
            if not 0 <= self.mult[a][b] < n:
                raise GroupTableError(
                    f"product {self.elements[a]}*{self.elements[b]} is not an element"
                )
        for a in range(n):
            if self.mult[0][a] != a or self.mult[a][0] != a:
                raise GroupTableError(
                    f"{self.elements[0]!r} is not an identity for {self.elements[a]!r}"
                )
        for a, b, c in product(range(n), repeat=3):
            if self.mult[self.mult[a][b]][c] != self.mult[a][self.mult[b][c]]:
                names = ",".join(self.elements[i] for i in (a, b, c))
                raise GroupTableError(f"multiplication is not associative at ({names})")
        for a in range(n):
            if 0 not in self.mult[a]:
                raise GroupTableError(f"{self.elements[a]!r} has no inverse")

    @classmethod
    def from_rows(
        cls, name: str, elements: Sequence[str], rows: Sequence[Sequence[str]]
    ) -> GroupTable:
        """シンボルで書かれた乗積表から生成する。"""
        lookup = {s: i for i, s in enumerate(elements)}
        try:
            mult = tuple(tuple(lookup[s] for s in row) for row in rows)
        except KeyError as exc:
            raise GroupTableError(f"unknown element in multiplication table: {exc.args[0]!r}") from exc
        return cls(name=name, elements=tuple(elements), mult=mult)

    @property
    def order(self) -> int:
        return len(self.elements)

    def inverse(self, a: int) -> int:
        return self.mult[a].index(0)

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.mult[a][b] == self.mult[b][a] for a, b in product(range(n), repeat=2))

    def conjugacy_classes(self) -> list[list[int]]:
        """共役類を最小元の出現順で返す（各類の中も昇順）。"""
        n = self.order
        seen: set[int] = set()
        classes: list[list[int]] = []
        for a in range(n):
            if a in seen:
                continue
            orbit = sorted({self.mult[self.mult[g][a]][self.inverse(g)] for g in range(n)})
            seen.update(orbit)
            classes.append(orbit)
        return classes


def _from_rule(name: str, elements: Sequence[str], rule) -> GroupTable:
    n = len(elements)
    mult = tuple(tuple(rule(a, b) for b in range(n)) for a in range(n))
    return GroupTable(name=name, elements=tuple(elements), mult=mult)


def cyclic_group(n: int) -> GroupTable:
    """巡回群 Z_n。元は e, g, g2, ..., g{n-1}。"""
    if n < 1:
        raise GroupTableError(f"cyclic group order must be >= 1, got {n}")
    names = ["e"] + ["g" if k == 1 else f"g{k}" for k in range(1, n)]
    return _from_rule(f"Z{n}", names, lambda a, b: (a + b) % n)


def symmetric_group(degree: int = 3) -> GroupTable:
    """対称群 S_degree。元は一行記法（"012" が恒等置換）、積は (pq)(i) = p(q(i))。"""
    if not 1 <= degree <= 9:
        raise GroupTableError(f"symmetric group degree must be in 1..9, got {degree}")
    perms = list(permutations(range(degree)))
    lookup = {p: i for i, p in enumerate(perms)}
    names = ["".join(str(i) for i in p) for p in perms]

    def rule(a: int, b: int) -> int:
        p, q = perms[a], perms[b]
        return lookup[tuple(p[q[i]] for i in range(degree))]

    return _from_rule(f"S{degree}", names, rule)


def dihedral_group(n: int) -> GroupTable:
    """二面体群 D_n（位数 2n）。元 r^k s^j を index k + n·j に置く。"""
    if n < 2:
        raise GroupTableError(f"dihedral group needs n >= 2, got {n}")

    def name(k: int, j: int) -> str:
        rot = "" if k == 0 else ("r" if k == 1 else f"r{k}")
        if j == 0:
            return rot or "e"
        return f"{rot}s"

    names = [name(k, j) for j in range(2) for k in range(n)]

    def rule(a: int, b: int) -> int:
        ka, ja = a % n, a // n
        kb, jb = b % n, b // n
        k = (ka + (-kb if ja else kb)) % n
        return k + n * ((ja + jb) % 2)

    return _from_rule(f"D{n}", names, rule)


# 四元数単位の積: (単位, 単位) → (符号, 単位)。単位 0..3 = 1, i, j, k
_QUATERNION_UNITS = (
    ((1, 0), (1, 1), (1, 2), (1, 3)),
    ((1, 1), (-1, 0), (1, 3), (-1, 2)),
    ((1, 2), (-1, 3), (-1, 0), (1, 1)),
    ((1, 3), (1, 2), (-1, 1), (-1, 0)),
)


def quaternion_group() -> GroupTable:
    """四元数群 Q8。元は 1, -1, i, -i, j, -j, k, -k（index = 2·単位 + 符号ビット）。"""
    units = ("1", "i", "j", "k")
    names = [("-" if neg else "") + units[u] for u in range(4) for neg in (0, 1)]

    def rule(a: int, b: int) -> int:
        ua, na = divmod(a, 2)
        ub, nb = divmod(b, 2)
        sign, unit = _QUATERNION_UNITS[ua][ub]
        negative = (sign < 0) ^ bool(na) ^ bool(nb)
        return 2 * unit + int(negative)

    return _from_rule("Q8", names, rule)
