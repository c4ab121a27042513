"""JSON ドキュメントの読み書き。

ハイパーグループ文書:
    {
      "name": "H2(1/2)",
      "elements": ["e", "a"],
      "involution": {"e": "e", "a": "a"},
      "convolution": {"a,a": {"e": "1/2", "a": "1/2"}}
    }
有理数は "p/q" または整数の文字列（JSON の整数も可）。分布は疎で、0 の成分は省く。
単位元を含むペアは省略でき、単位元公理で補われる。

群文書:      {"name": "S3", "elements": [...], "multiplication": [[...], ...]}
関数文書:    {"values": {"a": "1", "b": "1/2"}}（省略した元は 0）
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

from hypal.domain.errors import (
    DocumentParseError,
    GroupTableError,
    TableStructureError,
    UnknownElementError,
)
from hypal.domain.group import GroupTable
from hypal.domain.hypergroup import IDENTITY_INDEX, ConvolutionTable, table_from_products
from hypal.domain.measure import FunctionOnH

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


# --- 共通 ---


def _load_json(data: bytes | str) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentParseError(f"not UTF-8: {exc.reason}", f"byte {exc.start}") from exc
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise DocumentParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc


def parse_rational(value: object, location: str) -> Fraction:
    """"p/q" / 整数文字列 / JSON 整数を Fraction に変換する。"""
    if isinstance(value, bool):
        raise DocumentParseError("expected a rational string, got a boolean", location)
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str) or not _RATIONAL.match(value.strip()):
        raise DocumentParseError(f"expected a rational like \"p/q\", got {value!r}", location)
    text = value.strip()
    if "/" in text and int(text.split("/")[1]) == 0:
        raise DocumentParseError(f"zero denominator in {value!r}", location)
    return Fraction(text)


def format_rational(value: Fraction | int) -> str:
    return str(Fraction(value))


def _require(doc: Mapping[str, Any], key: str, kind: type, location: str = "") -> Any:
    where = f"{location}.{key}" if location else key
    if key not in doc:
        raise DocumentParseError(f"missing field {key!r}", location or "document")
    value = doc[key]
    if not isinstance(value, kind):
        raise DocumentParseError(f"expected {kind.__name__}", where)
    return value


def _symbol_list(raw: Sequence[Any], location: str) -> tuple[str, ...]:
    symbols: list[str] = []
    for i, s in enumerate(raw):
        if not isinstance(s, str) or not s or "," in s:
            raise DocumentParseError(
                "element symbols must be non-empty strings without commas", f"{location}[{i}]"
            )
        if s in symbols:
            raise DocumentParseError(f"duplicate element {s!r}", f"{location}[{i}]")
        symbols.append(s)
    if not symbols:
        raise DocumentParseError("at least one element is required", location)
    return tuple(symbols)


def write_text_atomic(path: str | Path, text: str) -> None:
    """同じディレクトリの一時ファイルに書いてから置き換える。"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


# --- ハイパーグループ文書 ---


def parse_document(data: bytes | str) -> ConvolutionTable:
    """ハイパーグループ文書を ConvolutionTable に変換する（公理は検証しない）。

    Args:
        data: UTF-8 の JSON

    Returns:
        構造的に整合した ConvolutionTable

    Raises:
        DocumentParseError: 構文エラー、未知のシンボル、確率行でない等（位置付き）
    """
    doc = _load_json(data)
    if not isinstance(doc, dict):
        raise DocumentParseError("top level must be an object", "document")
    name = _require(doc, "name", str)
    elements = _symbol_list(_require(doc, "elements", list), "elements")
    known = set(elements)

    raw_involution = _require(doc, "involution", dict)
    involution: dict[str, str] = {}
    for key, image in raw_involution.items():
        if key not in known:
            raise DocumentParseError(f"unknown element {key!r}", f"involution[{key!r}]")
        if not isinstance(image, str) or image not in known:
            raise DocumentParseError(f"unknown element {image!r}", f"involution[{key!r}]")
        involution[key] = image

    raw_conv = _require(doc, "convolution", dict)
    products: dict[tuple[str, str], dict[str, Fraction]] = {}
    for pair, dist in raw_conv.items():
        where = f"convolution[{pair!r}]"
        parts = pair.split(",")
        if len(parts) != 2:
            raise DocumentParseError("pair key must look like \"x,y\"", where)
        xs, ys = (p.strip() for p in parts)
        for s in (xs, ys):
            if s not in known:
                raise DocumentParseError(f"unknown element {s!r}", where)
        if (xs, ys) in products:
            raise DocumentParseError(f"pair '{xs},{ys}' given twice", where)
        if not isinstance(dist, dict):
            raise DocumentParseError("distribution must be an object", where)
        values: dict[str, Fraction] = {}
        for zs, raw in dist.items():
            if zs not in known:
                raise DocumentParseError(f"unknown element {zs!r}", f"{where}[{zs!r}]")
            value = parse_rational(raw, f"{where}[{zs!r}]")
            if value < 0:
                raise DocumentParseError(f"negative mass {value}", f"{where}[{zs!r}]")
            values[zs] = value
        total = sum(values.values(), Fraction(0))
        if total != 1:
            raise DocumentParseError(f"row for pair '{xs},{ys}' sums to {total}, not 1", where)
        products[(xs, ys)] = values

    try:
        return table_from_products(name, elements, involution, products)
    except UnknownElementError as exc:
        raise DocumentParseError(str(exc), "convolution") from exc
    except TableStructureError as exc:
        location = "involution" if "involution" in str(exc) else "convolution"
        raise DocumentParseError(str(exc), location) from exc


def _is_identity_default(t: ConvolutionTable, x: int, y: int) -> bool:
    if x != IDENTITY_INDEX and y != IDENTITY_INDEX:
        return False
    target = y if x == IDENTITY_INDEX else x
    return all(t.conv[x][y][z] == (1 if z == target else 0) for z in range(t.n))


def table_to_document(t: ConvolutionTable) -> dict[str, Any]:
    """ConvolutionTable を文書の辞書に変換する（単位元の既定ペアと 0 成分は省く）。"""
    convolution: dict[str, dict[str, str]] = {}
    for x in range(t.n):
        for y in range(t.n):
            if _is_identity_default(t, x, y):
                continue
            convolution[f"{t.elements[x]},{t.elements[y]}"] = {
                t.elements[z]: format_rational(v)
                for z, v in enumerate(t.conv[x][y])
                if v != 0
            }
    return {
        "name": t.name,
        "elements": list(t.elements),
        "involution": {s: t.elements[t.involution[i]] for i, s in enumerate(t.elements)},
        "convolution": convolution,
    }


def serialize_table(t: ConvolutionTable) -> str:
    return json.dumps(table_to_document(t), indent=2, ensure_ascii=False) + "\n"


def load_document(path: str | Path) -> ConvolutionTable:
    """ファイルからハイパーグループ文書を読む。"""
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise DocumentParseError(exc.strerror or "cannot read file", str(p)) from exc
    return parse_document(data)


def save_document(t: ConvolutionTable, path: str | Path) -> None:
    write_text_atomic(path, serialize_table(t))


# --- 群文書 ---


def parse_group_document(data: bytes | str) -> GroupTable:
    """群文書を GroupTable に変換する。

    Raises:
        DocumentParseError: 構文エラー、群公理の違反
    """
    doc = _load_json(data)
    if not isinstance(doc, dict):
        raise DocumentParseError("top level must be an object", "document")
    name = _require(doc, "name", str)
    elements = _symbol_list(_require(doc, "elements", list), "elements")
    rows = _require(doc, "multiplication", list)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or not all(isinstance(s, str) for s in row):
            raise DocumentParseError("rows must be lists of element symbols", f"multiplication[{i}]")
    try:
        return GroupTable.from_rows(name, elements, rows)
    except GroupTableError as exc:
        raise DocumentParseError(str(exc), "multiplication") from exc


def group_to_document(g: GroupTable) -> dict[str, Any]:
    return {
        "name": g.name,
        "elements": list(g.elements),
        "multiplication": [[g.elements[v] for v in row] for row in g.mult],
    }


def load_group(path: str | Path) -> GroupTable:
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise DocumentParseError(exc.strerror or "cannot read file", str(p)) from exc
    return parse_group_document(data)


# --- 関数文書 ---


def parse_function_document(data: bytes | str, elements: Sequence[str]) -> FunctionOnH:
    """関数文書を FunctionOnH に変換する（省略した元の値は 0）。"""
    doc = _load_json(data)
    if not isinstance(doc, dict):
        raise DocumentParseError("top level must be an object", "document")
    raw = _require(doc, "values", dict)
    known = set(elements)
    values: dict[str, Fraction] = {}
    for s, v in raw.items():
        if s not in known:
            raise DocumentParseError(f"unknown element {s!r}", f"values[{s!r}]")
        values[s] = parse_rational(v, f"values[{s!r}]")
    return FunctionOnH.from_mapping(elements, values)


def load_function(path: str | Path, elements: Sequence[str]) -> FunctionOnH:
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise DocumentParseError(exc.strerror or "cannot read file", str(p)) from exc
    return parse_function_document(data, elements)
