"""Evaluation grids shared by the shape checks, order comparisons and figures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Literal

import numpy as np

from .errors import ParameterError

Spacing = Literal["log", "linear"]


@dataclass(frozen=True)
class GridSpec:
    """A one-dimensional grid over [lo, hi] with ``count`` points."""

    lo: float
    hi: float
    count: int
    spacing: Spacing = "log"

    def __post_init__(self):
        if self.count < 1:
            raise ParameterError(f"grid count must be >= 1, got {self.count}")
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)) or self.hi < self.lo:
            raise ParameterError(f"grid bounds must satisfy lo <= hi, got [{self.lo}, {self.hi}]")
        if self.spacing == "log" and self.lo <= 0:
            raise ParameterError(f"log-spaced grid needs lo > 0, got {self.lo}")

    def points(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)

    def describe(self) -> str:
        return f"{self.spacing}[{self.lo:.6g}, {self.hi:.6g}] x {self.count}"

    def to_dict(self) -> Dict[str, Any]:
        return {"lo": self.lo, "hi": self.hi, "count": self.count, "spacing": self.spacing}

    @classmethod
    def parse(cls, text: str, spacing: Spacing = "log") -> "GridSpec":
        """Parse the ``lo:hi:count`` form used on the command line."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ParameterError(f"grid must look like lo:hi:count, got {text!r}")
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ParameterError(f"grid must look like lo:hi:count, got {text!r}") from exc
        return cls(lo, hi, count, spacing)
