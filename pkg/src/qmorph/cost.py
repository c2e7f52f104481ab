"""Quantum-cost accounting.

Unit weights: NOT, CNOT and reset cost 1, a Toffoli costs 5.  Gates outside
that alphabet are charged by a fixed decomposition:

* controlled SWAP = CNOT + Toffoli + CNOT = 7
* k >= 3 positive controls = a ladder of 2k - 3 Toffolis with reusable work
  bits, 5 * (2k - 3)
* every negative control adds a NOT pair, +2
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import log2, sqrt
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .core import (
    Circuit,
    ControlledNot,
    ControlledSwap,
    MultiControlledNot,
    Not,
    Reset,
    Toffoli,
)

ORACLE_SUFFIX = "oracle"


def mcx_weight(k: int) -> int:
    if k <= 1:
        return 1
    if k == 2:
        return 5
    return 5 * (2 * k - 3)


def gate_weight(gate) -> int:
    if isinstance(gate, (Not, ControlledNot, Reset)):
        return 1
    if isinstance(gate, Toffoli):
        return 5
    if isinstance(gate, ControlledSwap):
        return 7
    if isinstance(gate, MultiControlledNot):
        return mcx_weight(len(gate.controls)) + 2 * gate.negated
    raise TypeError(f"not a gate: {gate!r}")


@dataclass
class CostReport:
    counts: dict = field(default_factory=dict)
    weighted_total: int = 0
    breakdown: dict = field(default_factory=dict)

    @property
    def charged_total(self) -> int:
        """Weighted cost without preparation-oracle calls, which are not charged."""
        return self.weighted_total - sum(
            v for k, v in self.breakdown.items() if k.rsplit("/", 1)[-1] == ORACLE_SUFFIX
        )

    def to_dict(self) -> dict:
        return {
            "counts": dict(sorted(self.counts.items())),
            "weighted_total": self.weighted_total,
            "charged_total": self.charged_total,
            "breakdown": dict(self.breakdown),
        }


def count(circuit: Circuit) -> CostReport:
    counts: dict = {}
    total = 0
    for g in circuit.gates:
        kind = type(g).__name__
        counts[kind] = counts.get(kind, 0) + 1
        total += gate_weight(g)
    return CostReport(counts, total, {})


def count_parts(parts: Iterable) -> CostReport:
    """Cost of a list of ``(name, circuit)`` stages with a per-name breakdown."""
    report = CostReport()
    for name, circ in parts:
        r = count(circ)
        for k, v in r.counts.items():
            report.counts[k] = report.counts.get(k, 0) + v
        report.weighted_total += r.weighted_total
        report.breakdown[name] = report.breakdown.get(name, 0) + r.weighted_total
    return report


@dataclass(frozen=True)
class PaperCostTable:
    """Published cost formulas evaluated at ``(n, q)``."""

    n: int
    q: int

    @property
    def comparator(self) -> int:
        return 18 * self.q - 13

    @property
    def comparator_comparison(self) -> int:
        # the comparison table writes the comparator width as n
        return 18 * self.q - 3

    @property
    def subtractor(self) -> int:
        return 27 * self.q - 43

    @property
    def cycle_shift(self) -> int:
        return self.n ** 2

    @property
    def copy(self) -> int:
        return self.q

    @property
    def qcsl(self) -> int:
        return 21 * self.q - 13

    @property
    def dilation_erosion(self) -> int:
        return self.n ** 2 + 7 * self.q

    @property
    def binarization(self) -> int:
        return 2 * self.q + 13

    def complexity(self, t: int = 1) -> dict:
        """Orders of growth from the algorithm comparison, evaluated without constants."""
        pixels = 2 ** (2 * self.n)
        return {
            "HIS": {"order": "O(sqrt(2^(2n) t))", "value": sqrt(pixels * t)},
            "MQCTIS": {"order": "O(2^(2n) log 2^(2n))", "value": pixels * log2(pixels)},
            "proposed": {"order": "O(n^2 + q)", "value": self.n ** 2 + self.q},
        }

    def rows(self) -> dict:
        return {
            "comparator": self.comparator,
            "comparator_comparison": self.comparator_comparison,
            "subtractor": self.subtractor,
            "cycle_shift": self.cycle_shift,
            "copy": self.copy,
            "qcs_qcl": self.qcsl,
            "dilation_erosion": self.dilation_erosion,
            "binarization": self.binarization,
        }


def paper_table(n: int, q: int) -> PaperCostTable:
    if n < 1 or q < 1:
        raise ValueError("n and q must be >= 1")
    return PaperCostTable(n, q)


@dataclass
class FitReport:
    params: list
    costs: list
    model: str
    coefficients: tuple
    max_residual: float
    envelope: Optional[float] = None  # max cost / p^2 for the quadratic model

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "costs": self.costs,
            "model": self.model,
            "coefficients": list(self.coefficients),
            "max_residual": self.max_residual,
            "envelope": self.envelope,
        }


def scaling_check(builder: Callable[[int], Circuit], params: Sequence[int], model: str = "linear") -> FitReport:
    """Least-squares fit of weighted cost against the swept parameter.

    ``linear`` fits ``a*p + b``; ``quadratic`` fits ``c*p^2`` and also reports
    ``max(cost / p^2)`` as the tightest envelope constant.
    """
    params = list(params)
    costs = [count(builder(p)).weighted_total for p in params]
    p = np.asarray(params, dtype=float)
    y = np.asarray(costs, dtype=float)
    envelope = None
    if model == "linear":
        design = np.column_stack([p, np.ones_like(p)])
    elif model == "quadratic":
        design = (p ** 2)[:, None]
        envelope = float(np.max(y / p ** 2))
    else:
        raise ValueError(f"unknown model {model!r}")
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return FitReport(params, costs, model, tuple(float(c) for c in coef), float(np.max(np.abs(resid))), envelope)
