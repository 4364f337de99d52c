"""Finite integer axes and their Cartesian products.

Descriptor micro-format: comma-separated axes, each ``lo..hi`` (inclusive)
or ``{v1,v2,...}``; e.g. ``"1..4,1..4,-4..-1"`` or ``"{1,3,9},0..10"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class Axis:
    """Either the integer interval ``[lo, hi]`` or an explicit sorted value set."""

    lo: int
    hi: int
    explicit: tuple | None = None

    @classmethod
    def interval(cls, lo: int, hi: int) -> "Axis":
        return cls(int(lo), int(hi), None)

    @classmethod
    def of(cls, values: Iterable[int]) -> "Axis":
        vals = tuple(sorted({int(v) for v in values}))
        if not vals:
            return cls(1, 0, ())
        return cls(vals[0], vals[-1], vals)

    @property
    def is_interval(self) -> bool:
        return self.explicit is None

    @property
    def size(self) -> int:
        if self.explicit is not None:
            return len(self.explicit)
        return max(0, self.hi - self.lo + 1)

    def __len__(self):
        return self.size

    def values(self) -> np.ndarray:
        """Axis values as int64, or as Python ints (object dtype) beyond int64."""
        wide = self.max_abs >= 2**63 - 1
        if self.explicit is not None:
            return np.array(self.explicit, dtype=object if wide else np.int64)
        if wide:
            return np.array(range(self.lo, self.hi + 1), dtype=object)
        return np.arange(self.lo, self.hi + 1, dtype=np.int64)

    def __contains__(self, v) -> bool:
        if self.explicit is not None:
            return int(v) in self.explicit
        return self.lo <= v <= self.hi

    def contains_array(self, vals: np.ndarray) -> np.ndarray:
        if self.explicit is not None:
            return np.isin(vals, self.values())
        return (vals >= self.lo) & (vals <= self.hi)

    @property
    def max_abs(self) -> int:
        if self.size == 0:
            return 0
        return max(abs(self.lo), abs(self.hi))

    def __str__(self):
        if self.explicit is not None:
            return "{" + ",".join(str(v) for v in self.explicit) + "}"
        return f"{self.lo}..{self.hi}"


@dataclass(frozen=True)
class GridSpec:
    axes: tuple

    def __init__(self, axes: Sequence[Axis]):
        object.__setattr__(self, "axes", tuple(axes))

    @classmethod
    def cube(cls, lo: int, hi: int, m: int) -> "GridSpec":
        return cls([Axis.interval(lo, hi)] * m)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        return cls([_parse_axis(part) for part in _split_axes(text)])

    @property
    def arity(self) -> int:
        return len(self.axes)

    @property
    def cells(self) -> int:
        out = 1
        for a in self.axes:
            out *= a.size
        return out

    @property
    def side(self) -> int:
        """Largest axis size (the ``n`` of Schwartz-Zippel style bounds)."""
        return max((a.size for a in self.axes), default=0)

    def contains_rows(self, rows: np.ndarray) -> np.ndarray:
        ok = np.ones(rows.shape[0], dtype=bool)
        for j, a in enumerate(self.axes):
            ok &= a.contains_array(rows[:, j])
        return ok

    def __str__(self):
        return ",".join(str(a) for a in self.axes)


_INTERVAL = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")


def _split_axes(text: str) -> list:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced '}}' in grid descriptor {text!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ValueError(f"unbalanced '{{' in grid descriptor {text!r}")
    parts.append("".join(cur))
    return parts


def _parse_axis(part: str) -> Axis:
    s = part.strip()
    m = _INTERVAL.match(s)
    if m:
        return Axis.interval(int(m.group(1)), int(m.group(2)))
    if s.startswith("{") and s.endswith("}"):
        body = s[1:-1].strip()
        if not body:
            return Axis.of(())
        try:
            return Axis.of(int(v) for v in body.split(","))
        except ValueError:
            raise ValueError(f"bad explicit axis {part!r}") from None
    raise ValueError(f"bad axis descriptor {part!r}; expected 'lo..hi' or '{{v1,v2,...}}'")
