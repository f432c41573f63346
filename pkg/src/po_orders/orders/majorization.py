"""
Majorization-type preorders on vectors

All three compare ascending-sorted copies:
- M (majorization): partial sums of x <= those of y for j < n, equal totals
- W (weak supermajorization): partial sums of x <= those of y for every j
- P (p-larger): partial products of x <= those of y for every j
"""

from __future__ import annotations

import math
from enum import Enum
from typing import List, Optional, Sequence

from ..errors import ParameterError
from ..settings import get_settings


class MajorizationMode(Enum):
    M = "M"
    W = "W"
    P = "P"


def _partial_sums(values: Sequence[float]) -> List[float]:
    return [math.fsum(values[: j + 1]) for j in range(len(values))]


def _partial_products(values: Sequence[float]) -> List[float]:
    out, acc = [], 1.0
    for v in values:
        acc *= v
        out.append(acc)
    return out


def first_violation(x: Sequence[float], y: Sequence[float], mode: MajorizationMode, slack: Optional[float] = None) -> Optional[int]:
    """Index j (0-based) of the first partial comparison that fails, or None."""
    if len(x) != len(y):
        raise ParameterError(f"vectors differ in length: {len(x)} vs {len(y)}")
    if len(x) == 0:
        raise ParameterError("vectors must be non-empty")
    if mode is MajorizationMode.P and (min(x) <= 0 or min(y) <= 0):
        raise ParameterError("p-larger comparison needs strictly positive entries")
    slack = get_settings().majorization_slack if slack is None else slack
    xs, ys = sorted(float(v) for v in x), sorted(float(v) for v in y)

    if mode is MajorizationMode.P:
        px, py = _partial_products(xs), _partial_products(ys)
        for j, (a, b) in enumerate(zip(px, py)):
            # products span many orders of magnitude, so the slack is relative
            if a > b + slack * max(1.0, abs(b)):
                return j
        return None

    sx, sy = _partial_sums(xs), _partial_sums(ys)
    for j, (a, b) in enumerate(zip(sx, sy)):
        if a > b + slack:
            return j
    if mode is MajorizationMode.M and abs(sx[-1] - sy[-1]) > slack:
        return len(xs) - 1
    return None


def majorizes(x: Sequence[float], y: Sequence[float], mode: MajorizationMode) -> bool:
    """True when x ⪰ y in the given mode."""
    return first_violation(x, y, mode) is None
