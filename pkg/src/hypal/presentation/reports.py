"""コマンド結果のレポート（機械可読の辞書と人間向けテキスト）。

有理数は "p/q" 文字列、binary64 の値と残差は 10 進文字列で埋め込む。
証明書（ppt の反例、Farkas ベクトル、K の点）は再読込して検証できる形で出力する。
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

import numpy as np
import numpy.typing as npt

from hypal.application.amenability_service import MeanOutcome, MeanVerification
from hypal.application.equivalence_service import EquivalenceReport, FunctionChain
from hypal.application.haar_service import (
    HaarResult,
    InvarianceCheck,
    Normalization,
    normalize_floats,
)
from hypal.application.k_polytope import GammaBounds, KFeasibility
from hypal.application.ppt_service import GammaPositivity, GammaReport, PptVerdict
from hypal.domain.hypergroup import ConvolutionTable, ValidationReport
from hypal.domain.measure import FunctionOnH, Measure
from hypal.infrastructure.document_io import format_rational


def _rat(v: Fraction | int | None) -> str | None:
    return None if v is None else format_rational(v)


def _decimal(v: float) -> str:
    return f"{v:.17g}"


def _residual(v: float | Fraction) -> str:
    return format_rational(v) if isinstance(v, Fraction) else f"{v:.3e}"


def measure_dict(
    elements: Sequence[str], m: Measure | FunctionOnH | None, sparse: bool = True
) -> dict[str, str] | None:
    """測度・関数をシンボル→有理数文字列の辞書にする（sparse なら 0 を省く）。"""
    if m is None:
        return None
    values = m.weights if isinstance(m, Measure) else m.values
    return {s: format_rational(v) for s, v in zip(elements, values) if v != 0 or not sparse}


def float_dict(elements: Sequence[str], values: npt.NDArray[np.float64]) -> dict[str, str]:
    return {s: _decimal(float(v)) for s, v in zip(elements, values)}


# --- 各コマンド ---


def validation_dict(report: ValidationReport) -> dict[str, Any]:
    checks = []
    for c in report.checks:
        entry: dict[str, Any] = {
            "axiom": c.axiom.value,
            "status": c.status.value,
            "description": c.description,
        }
        if c.witness is not None:
            entry["witness"] = {
                "elements": list(c.witness.symbols),
                "left": _rat(c.witness.left),
                "right": _rat(c.witness.right),
                "detail": c.witness.detail,
            }
        checks.append(entry)
    return {
        "command": "validate",
        "name": report.name,
        "valid": report.valid,
        "checks": checks,
    }


def invariance_dict(check: InvarianceCheck) -> dict[str, Any]:
    return {
        "ok": check.ok,
        "worst_residual": _residual(check.worst),
        "location": list(check.location) if check.location else None,
    }


def haar_dict(
    t: ConvolutionTable,
    result: HaarResult,
    invariance: InvarianceCheck,
    f: FunctionOnH | None = None,
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "command": "haar",
        "name": t.name,
        "method": result.method.value,
        "normalization": result.normalization.value,
        "exact": result.exact,
    }
    if result.weights is not None:
        doc["weights"] = measure_dict(t.elements, result.weights, sparse=False)
    else:
        assert result.approximate is not None
        doc["weights"] = float_dict(t.elements, result.approximate)
        doc["weights_identity_normalized"] = float_dict(
            t.elements, normalize_floats(result.approximate, Normalization.IDENTITY, f)
        )
    doc.update(
        iterations=result.iterations,
        residual=_residual(result.residual),
        converged=result.converged,
        fallback_used=result.fallback_used,
        invariance=invariance_dict(invariance),
        log=list(result.log),
    )
    return doc


def ppt_dict(t: ConvolutionTable, f: FunctionOnH, verdict: PptVerdict) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "command": "ppt",
        "name": t.name,
        "f": measure_dict(t.elements, f),
        "status": verdict.status.value,
        "optimum": _rat(verdict.optimum),
        "certificate": None,
    }
    if not verdict.holds:
        doc["certificate"] = {
            "mu": measure_dict(t.elements, verdict.mu),
            "nu": measure_dict(t.elements, verdict.nu),
        }
    return doc


def gamma_dict(
    t: ConvolutionTable,
    f: FunctionOnH,
    gamma: GammaReport,
    positivity: GammaPositivity,
    feasibility: KFeasibility,
    bounds: GammaBounds | None,
) -> dict[str, Any]:
    return {
        "command": "gamma",
        "name": t.name,
        "f": measure_dict(t.elements, f),
        "well_defined": gamma.affirmative,
        "kernel": [measure_dict(t.elements, rho) for rho in gamma.kernel],
        "offending": measure_dict(t.elements, gamma.offending),
        "positive": positivity.holds,
        "positivity_minimum": _rat(positivity.minimum),
        "positivity_witness": measure_dict(t.elements, positivity.witness),
        "k_point": measure_dict(t.elements, feasibility.point, sparse=False),
        "farkas": [_rat(v) for v in feasibility.certificate] if feasibility.certificate else None,
        "gamma_of_f_range": (
            {"lower": _rat(bounds.lower), "upper": _rat(bounds.upper)} if bounds else None
        ),
    }


def mean_dict(
    t: ConvolutionTable, outcome: MeanOutcome, verification: MeanVerification | None
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "command": "mean",
        "name": t.name,
        "exists": outcome.exists,
        "weights": (
            measure_dict(t.elements, outcome.mean.weights, sparse=False) if outcome.mean else None
        ),
        "farkas": [_rat(v) for v in outcome.certificate] if outcome.certificate else None,
    }
    if verification is not None:
        doc["verification"] = {
            "matrix_ok": verification.matrix_ok,
            "functional_ok": verification.functional_ok,
            "consistent": verification.consistent,
            "worst_residual": _rat(verification.worst),
            "location": list(verification.location) if verification.location else None,
            "functions_checked": verification.functions_checked,
        }
    return doc


def _chain_dict(elements: Sequence[str], c: FunctionChain) -> dict[str, Any]:
    return {
        "label": c.label,
        "f": measure_dict(elements, c.f),
        "ppt": c.ppt.status.value,
        "certificate": (
            {"mu": measure_dict(elements, c.ppt.mu), "nu": measure_dict(elements, c.ppt.nu)}
            if not c.ppt.holds
            else None
        ),
        "well_defined": c.gamma.affirmative if c.gamma else None,
        "k_point": measure_dict(elements, c.k_point, sparse=False),
        "gamma_of_f": _rat(c.gamma_of_f),
        "chain_ok": c.chain_ok,
    }


def equivalence_dict(t: ConvolutionTable, report: EquivalenceReport) -> dict[str, Any]:
    return {
        "command": "report",
        "name": report.name,
        "conditions": {
            "haar_exists": report.haar_exists,
            "ppt_all_tested": report.ppt_all,
            "ppt_some": report.ppt_some,
        },
        "consistent": report.consistent,
        "hypothesis": {"invariant_mean": report.mean_exists},
        "haar": measure_dict(t.elements, report.haar, sparse=False),
        "haar_normalization": report.haar_normalization.value if report.haar_normalization else None,
        "mean": measure_dict(t.elements, report.mean.weights, sparse=False) if report.mean else None,
        "functions": [_chain_dict(t.elements, c) for c in report.chains],
        "log": list(report.log),
    }


# --- テキスト表示 ---


def _render_value(value: Any) -> str:
    if isinstance(value, dict):
        return ", ".join(f"{k}: {_render_value(v)}" for k, v in value.items()) or "{}"
    if isinstance(value, list):
        return "[" + ", ".join(_render_value(v) for v in value) + "]"
    if value is None:
        return "-"
    return str(value)


def render_text(doc: dict[str, Any]) -> str:
    """レポート辞書を人間向けの行テキストにする。"""
    lines = [f"[{doc.get('command', 'report')}] {doc.get('name', '')}".rstrip()]
    for key, value in doc.items():
        if key in ("command", "name"):
            continue
        if key == "checks":
            for c in value:
                line = f"  ({c['axiom']}) {c['status']:<28} {c['description']}"
                if "witness" in c:
                    w = c["witness"]
                    line += f"\n      witness {tuple(w['elements'])}: {w['detail']} ({w['left']} vs {w['right']})"
                lines.append(line)
        elif key in ("functions", "files"):
            lines.append(f"  {key}:")
            for item in value:
                lines.append(f"    - {_render_value(item)}")
        elif key == "log":
            for entry in value:
                lines.append(f"  > {entry}")
        else:
            lines.append(f"  {key}: {_render_value(value)}")
    return "\n".join(lines) + "\n"
