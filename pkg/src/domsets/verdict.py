"""Three-valued results with replayable witness payloads."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .numerics import DyadicSum, IntervalVal, Value, format_value

HOLDS, FAILS, UNKNOWN = "holds", "fails", "unknown"


@dataclass
class Verdict:
    """Outcome of a check.

    ``symbolic`` is True when the status holds for every index, not only the
    ``depth`` that was inspected.  ``witness`` is a kind-specific payload
    (failing index, cover, uncovered point, partial-sum ledger, ...).
    """

    status: str
    method: str = ""
    depth: int | None = None
    symbolic: bool = False
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in (HOLDS, FAILS, UNKNOWN):
            raise ValueError(f"bad verdict status {self.status!r}")

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        return to_jsonable(dataclasses.asdict(self))


def to_jsonable(obj: Any) -> Any:
    """Convert library objects to plain JSON data, exact values as strings."""
    if isinstance(obj, (Value, IntervalVal)):
        return str(obj)
    if isinstance(obj, DyadicSum):
        return obj.terms()
    if isinstance(obj, Fraction):
        return format_value(Value.of(obj))
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, Verdict):
        return obj.to_dict()
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if hasattr(obj, "describe"):
        return obj.describe()
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj, key=repr) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    return str(obj)
