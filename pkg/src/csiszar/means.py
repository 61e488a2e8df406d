"""Weighted two-point means and the harmonic <= geometric <= arithmetic chain."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from csiszar.errors import DomainError

#: library-wide comparison tolerances for mean-level checks
RTOL = 1e-9
ATOL = 1e-12


class MeanKind(enum.Enum):
    ARITHMETIC = "A"
    GEOMETRIC = "G"
    HARMONIC = "H"

    @classmethod
    def parse(cls, letter):
        try:
            return cls(letter.upper())
        except ValueError:
            raise ValueError(f"unknown mean kind {letter!r}; use A, G or H") from None

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class WeightedMean:
    kind: MeanKind
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in [0, 1], got {self.alpha}")

    def __call__(self, x, y):
        return evaluate(self, x, y)


def close_leq(a, b, rtol=RTOL, atol=ATOL):
    """``a <= b`` up to ``max(rtol * max(|a|, |b|), atol)``."""
    slack = np.maximum(rtol * np.maximum(np.abs(a), np.abs(b)), atol)
    return a <= b + slack


def two_point(kind, alpha, x, y):
    """Vectorised weighted mean of ``x`` and ``y``; ``alpha`` weights ``x``.

    Inputs broadcast. No domain validation; callers that need it use
    :func:`evaluate`.
    """
    alpha = np.asarray(alpha, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if kind is MeanKind.ARITHMETIC:
            out = alpha * x + (1.0 - alpha) * y
        elif kind is MeanKind.GEOMETRIC:
            out = np.exp(alpha * np.log(x) + (1.0 - alpha) * np.log(y))
        else:
            out = 1.0 / (alpha / x + (1.0 - alpha) / y)
        # weight-0/1 boundaries and equal arguments return the argument itself
        out = np.where(alpha == 1.0, x, np.where((alpha == 0.0) | (x == y), y, out))
    return out[()] if out.ndim == 0 else out


def evaluate(m: WeightedMean, x, y):
    """Weighted mean ``m`` of ``x`` and ``y``.

    Geometric and harmonic means require strictly positive arguments;
    the arithmetic mean accepts zeros.
    """
    if not 0.0 <= m.alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {m.alpha}")
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if m.kind is MeanKind.ARITHMETIC:
        if np.any(xa < 0) or np.any(ya < 0):
            raise DomainError("arithmetic mean needs nonnegative arguments")
    elif np.any(xa <= 0) or np.any(ya <= 0):
        raise DomainError(f"{m.kind.name.lower()} mean needs positive arguments")
    out = two_point(m.kind, m.alpha, xa, ya)
    return float(out) if np.ndim(out) == 0 else out


def agh_ordering_check(alpha, x, y):
    """Return ``((H, G, A), ordered)`` where ``ordered`` asserts H <= G <= A."""
    h = evaluate(WeightedMean(MeanKind.HARMONIC, alpha), x, y)
    g = evaluate(WeightedMean(MeanKind.GEOMETRIC, alpha), x, y)
    a = evaluate(WeightedMean(MeanKind.ARITHMETIC, alpha), x, y)
    ordered = bool(np.all(close_leq(h, g)) and np.all(close_leq(g, a)))
    return (h, g, a), ordered


def n_point(kind, xs, weights):
    """Weighted mean of many points: sum w x, prod x^w, or (sum w/x)^-1."""
    xs = np.asarray(xs, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    keep = w > 0.0
    xs, w = xs[keep], w[keep]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if kind is MeanKind.ARITHMETIC:
            return float(np.dot(w, xs))
        if kind is MeanKind.GEOMETRIC:
            return float(np.exp(np.dot(w, np.log(xs))))
        return float(1.0 / np.dot(w, 1.0 / xs))
