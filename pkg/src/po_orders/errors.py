"""Exception hierarchy for po_orders."""

from typing import List, Sequence, Tuple


class PoOrdersError(Exception):
    """Base class for every error raised by this package."""


class CatalogError(PoOrdersError, KeyError):
    """Raised when a generator, baseline, figure or theorem name is unknown."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message.
        return str(self.args[0]) if self.args else ""


class ParameterError(PoOrdersError, ValueError):
    """Raised when a parameter or vector is outside its admissible range."""


class DomainError(PoOrdersError, ValueError):
    """Raised when a function is evaluated where it is undefined."""


class ScenarioError(PoOrdersError):
    """Raised when a scenario file violates the schema.

    ``problems`` holds ``(field_path, message)`` pairs such as
    ``("models[0].alphas[2]", "must be > 0")``.
    """

    def __init__(self, problems: Sequence[Tuple[str, str]]):
        self.problems: List[Tuple[str, str]] = list(problems)
        super().__init__("; ".join(f"{path}: {msg}" for path, msg in self.problems))
