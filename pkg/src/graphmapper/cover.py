"""Interval covers of the normalized lens range [0,1].

A cover is an ordered list of open intervals. The uniform cover splits
[0,1] at n+1 equally spaced breakpoints and widens every piece by an
absolute overlap epsilon on both ends. Individual intervals can then be
shrunk, expanded, or shifted; manipulation may open a gap in the cover,
which is flagged rather than forbidden.

Boundary rule: intervals are open, but the extreme values 0 and 1 (always
attained after min-max normalization) belong to every interval whose
closure contains them. This keeps the default pipeline total.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .lenses import LensField


@dataclass(frozen=True)
class Interval:
    """Open interval (lo, hi) over lens values, with a stable id."""

    id: int
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ParameterError(f"interval {self.id}: lo must be < hi, got ({self.lo}, {self.hi})")

    def contains(self, value: float) -> bool:
        if self.lo < value < self.hi:
            return True
        # closed-at-the-extremes rule for the attained range endpoints
        return value in (0.0, 1.0) and self.lo <= value <= self.hi

    def to_json_obj(self) -> dict:
        return {"id": self.id, "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class Cover:
    intervals: tuple[Interval, ...]
    provenance: dict

    def __post_init__(self):
        ordered = tuple(sorted(self.intervals, key=lambda iv: (iv.lo + iv.hi) / 2.0))
        object.__setattr__(self, "intervals", ordered)

    def interval_by_id(self, interval_id: int) -> Interval:
        for iv in self.intervals:
            if iv.id == interval_id:
                return iv
        raise ParameterError(f"no interval with id {interval_id}")

    def coverage_gaps(self) -> list[tuple[float, float]]:
        """Open subranges of [0,1] not covered by any interval."""
        gaps = []
        cursor = 0.0
        for iv in sorted(self.intervals, key=lambda iv: iv.lo):
            if iv.lo > cursor:
                gaps.append((cursor, iv.lo))
            cursor = max(cursor, iv.hi)
            if cursor >= 1.0:
                break
        if cursor < 1.0:
            gaps.append((cursor, 1.0))
        return gaps

    @property
    def has_gaps(self) -> bool:
        return bool(self.coverage_gaps())

    def to_json_obj(self) -> dict:
        obj = {"provenance": self.provenance.get("kind", "manual")}
        if obj["provenance"] == "uniform":
            obj["n"] = self.provenance["n"]
            obj["epsilon"] = self.provenance["epsilon"]
        obj["intervals"] = [iv.to_json_obj() for iv in self.intervals]
        return obj


def uniform_cover(n: int, epsilon: float) -> Cover:
    """n equal-length intervals (i/n - eps, (i+1)/n + eps) covering [0,1].

    epsilon is an absolute length on the normalized range, not a fraction
    of the interval length.
    """
    if n < 1:
        raise ParameterError(f"resolution n must be >= 1, got {n}")
    if not 0 <= epsilon < 1:
        raise ParameterError(f"overlap epsilon must be in [0,1), got {epsilon}")
    intervals = tuple(
        Interval(id=i, lo=i / n - epsilon, hi=(i + 1) / n + epsilon) for i in range(n)
    )
    return Cover(intervals=intervals, provenance={"kind": "uniform", "n": n, "epsilon": epsilon})


def modify_interval(cover: Cover, interval_id: int, new_lo: float, new_hi: float) -> Cover:
    """Replace one interval's bounds; all others untouched. The result has
    manual provenance, and any coverage gap is flagged (not an error)."""
    if not new_lo < new_hi:
        raise ParameterError(f"inverted bounds ({new_lo}, {new_hi}) for interval {interval_id}")
    cover.interval_by_id(interval_id)  # raises on unknown id
    intervals = tuple(
        Interval(id=iv.id, lo=new_lo, hi=new_hi) if iv.id == interval_id else iv
        for iv in cover.intervals
    )
    return Cover(intervals=intervals, provenance={"kind": "manual"})


def cover_from_json_obj(obj: dict) -> Cover:
    """Accept the cover wire format: either explicit intervals, or a
    uniform spec {"provenance":"uniform","n":…,"epsilon":…} without them."""
    if not isinstance(obj, dict):
        raise ParameterError("cover JSON must be an object")
    kind = obj.get("provenance", "uniform" if "n" in obj else "manual")
    if "intervals" not in obj:
        if kind != "uniform":
            raise ParameterError("manual cover JSON must list intervals")
        return uniform_cover(int(obj["n"]), float(obj["epsilon"]))
    intervals = []
    for entry in obj["intervals"]:
        try:
            intervals.append(Interval(id=int(entry["id"]), lo=float(entry["lo"]), hi=float(entry["hi"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"bad interval entry {entry!r}: {exc}") from None
    ids = [iv.id for iv in intervals]
    if len(set(ids)) != len(ids):
        raise ParameterError("interval ids must be unique")
    provenance = {"kind": kind}
    if kind == "uniform":
        provenance["n"] = int(obj.get("n", len(intervals)))
        provenance["epsilon"] = float(obj.get("epsilon", 0.0))
    return Cover(intervals=tuple(intervals), provenance=provenance)


def assign_nodes(cover: Cover, field: LensField) -> tuple[dict[int, np.ndarray], np.ndarray]:
    """Preimage of each interval under the normalized lens.

    Returns (interval id -> sorted node indices, uncovered node indices).
    A node with a lens value covered by no interval is reported in the
    uncovered set, never an error.
    """
    values = field.normalized
    covered = np.zeros(values.shape[0], dtype=bool)
    assignment: dict[int, np.ndarray] = {}
    for iv in cover.intervals:
        mask = (values > iv.lo) & (values < iv.hi)
        if iv.lo <= 0.0 <= iv.hi:
            mask |= values == 0.0
        if iv.lo <= 1.0 <= iv.hi:
            mask |= values == 1.0
        members = np.nonzero(mask)[0]
        assignment[iv.id] = members
        covered |= mask
    uncovered = np.nonzero(~covered)[0]
    return assignment, uncovered
