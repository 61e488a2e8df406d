"""Comparison records and the tolerance rule used by every inequality check."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

DEFAULT_TOL = 1e-9


def leq(lhs, rhs, tol=DEFAULT_TOL):
    """``lhs <= rhs`` up to ``tol * max(|lhs|, |rhs|, 1)``; vectorised."""
    lhs = np.asarray(lhs, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
        out = (lhs <= rhs + tol * scale) | ((lhs == rhs) & np.isinf(lhs))
    return bool(out) if out.ndim == 0 else out


def close(lhs, rhs, rtol):
    """Relative equality ``|lhs - rhs| <= rtol * max(|lhs|, |rhs|)``."""
    lhs = np.asarray(lhs, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1e-300)
    out = np.abs(lhs - rhs) <= rtol * scale
    return bool(out) if out.ndim == 0 else out


class Comparison(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


@dataclass(frozen=True)
class Link:
    label: str
    lhs: float
    rhs: float
    relation: str
    holds: bool

    def to_dict(self):
        return {"label": self.label, "lhs": self.lhs, "rhs": self.rhs,
                "relation": self.relation, "holds": self.holds}


@dataclass(frozen=True)
class Chain:
    """An evaluated chain of (in)equalities; ``lhs``/``rhs`` are its ends."""

    name: str
    links: tuple[Link, ...]
    warning: str | None = None

    @property
    def holds(self):
        return all(link.holds for link in self.links)

    @property
    def lhs(self):
        return self.links[0].lhs

    @property
    def rhs(self):
        return self.links[-1].rhs

    def to_dict(self):
        return {"name": self.name, "holds": self.holds, "warning": self.warning,
                "links": [link.to_dict() for link in self.links]}


def make_link(label, lhs, rhs, relation="<=", tol=DEFAULT_TOL, eq_rtol=1e-10):
    lhs, rhs = float(lhs), float(rhs)
    holds = close(lhs, rhs, eq_rtol) if relation == "=" else leq(lhs, rhs, tol)
    return Link(label, lhs, rhs, relation, bool(holds))
