"""Core functions ``f`` with their limit data, the named catalog and transforms.

Extended reals are plain floats (``math.inf`` is allowed). A limit field set to
``None`` means the limit is not available, e.g. ``f(0+)`` for a function whose
domain starts at 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from csiszar.errors import DomainError, EvaluationError

INF = math.inf

#: exp() argument bound accepted by :func:`transform_compose_exp`
EXP_GUARD = 700.0


@dataclass(frozen=True)
class Fact:
    """A declared MN-convexity fact, e.g. ``Fact("GG", 0.0, 1.0)``."""

    pair: str
    lo: float
    hi: float


@dataclass(frozen=True, eq=False)
class CoreFunction:
    """Positive (usually) real function on an open interval.

    ``func`` must be numpy-vectorised. Calling the instance validates the
    domain and rejects non-finite results with :class:`EvaluationError`.
    """

    func: Callable[[np.ndarray], np.ndarray]
    domain: tuple[float, float] = (0.0, INF)
    limit_at_zero: float | None = None
    slope_at_infinity: float | None = None
    name: str = "f"
    facts: tuple[Fact, ...] = ()
    estimated: frozenset[str] = field(default_factory=frozenset)

    def __call__(self, t):
        arr = np.asarray(t, dtype=np.float64)
        lo, hi = self.domain
        inside = (arr > lo) & (arr < hi)
        if not np.all(inside):
            bad = np.atleast_1d(arr[~inside])[:5].tolist()
            raise DomainError(f"{self.name}: {bad} outside domain ({lo}, {hi})")
        with np.errstate(all="ignore"):
            out = np.asarray(self.func(arr), dtype=np.float64)
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape)
        if not np.all(np.isfinite(out)):
            bad = np.atleast_1d(arr[~np.isfinite(out)])[:5].tolist()
            raise EvaluationError(f"{self.name}: non-finite value at t = {bad}")
        return float(out) if out.ndim == 0 else out

    def contains(self, t):
        arr = np.asarray(t, dtype=np.float64)
        return (arr > self.domain[0]) & (arr < self.domain[1])

    def declares(self, pair, interval=None):
        """True when a fact for ``pair`` covers ``interval`` (or any interval)."""
        for fact in self.facts:
            if fact.pair != pair:
                continue
            if interval is None or (fact.lo <= interval[0] and interval[1] <= fact.hi):
                return True
        return False

    def with_fact(self, pair, interval):
        return replace(self, facts=self.facts + (Fact(pair, float(interval[0]), float(interval[1])),))

    def __repr__(self):
        return f"CoreFunction({self.name!r}, domain={self.domain})"


def _power_limits(r):
    at_zero = 0.0 if r > 0 else (1.0 if r == 0 else INF)
    slope = INF if r > 1 else (1.0 if r == 1 else 0.0)
    return at_zero, slope


def _power_r(r):
    at_zero, slope = _power_limits(r)
    facts = []
    if r < 0:
        facts.append(Fact("AG", 0.0, INF))
    if 0 <= r <= 1:
        facts.append(Fact("HH", 0.0, INF))
    return CoreFunction(
        lambda t: np.power(t, r), (0.0, INF), at_zero, slope, f"power_r({r:g})", tuple(facts)
    )


def _exp_power(r):
    if -1 < r < 0:
        raise DomainError(f"exp_power is catalogued for r >= 0 or r <= -1, got r = {r}")
    at_zero = 1.0 if r > 0 else (math.e if r == 0 else INF)
    slope = INF if r > 0 else 0.0
    return CoreFunction(
        lambda t: np.exp(np.power(t, r)), (0.0, INF), at_zero, slope,
        f"exp_power({r:g})", (Fact("HG", 0.0, INF),),
    )


_FIXED = {
    "kl": lambda: CoreFunction(lambda t: t * np.log(t), (0.0, INF), 0.0, INF, "kl", (Fact("AA", 0.0, INF),)),
    "tv": lambda: CoreFunction(lambda t: np.abs(t - 1), (0.0, INF), 1.0, 1.0, "tv", (Fact("AA", 0.0, INF),)),
    "hellinger": lambda: CoreFunction(
        lambda t: 2 * (np.sqrt(t) - 1) ** 2, (0.0, INF), 2.0, 2.0, "hellinger",
        (Fact("AA", 0.0, INF), Fact("GG", 0.0, INF)),
    ),
    "chi2": lambda: CoreFunction(lambda t: (t - 1) ** 2, (0.0, INF), 1.0, INF, "chi2", (Fact("AA", 0.0, INF),)),
    "exp": lambda: CoreFunction(
        np.exp, (-INF, INF), 1.0, INF, "exp", (Fact("AG", -INF, INF), Fact("GG", 0.0, INF))
    ),
    "inv_sqrt": lambda: CoreFunction(lambda t: 1 / np.sqrt(t), (0.0, INF), INF, 0.0, "inv_sqrt", (Fact("AH", 0.0, INF),)),
    "log1p": lambda: CoreFunction(np.log1p, (0.0, INF), 0.0, 0.0, "log1p", (Fact("GA", 0.0, INF),)),
    "geom_series": lambda: CoreFunction(lambda t: 1 / (1 - t), (0.0, 1.0), 1.0, None, "geom_series", (Fact("GG", 0.0, 1.0),)),
    "mobius": lambda: CoreFunction(lambda t: (1 + t) / (1 - t), (0.0, 1.0), 1.0, None, "mobius", (Fact("GG", 0.0, 1.0),)),
    # ln t <= 0 on (0, 1]: restricted to (1, inf)
    "inv_sqrt_log": lambda: CoreFunction(
        lambda t: 1 / np.sqrt(np.log(t)), (1.0, INF), None, 0.0, "inv_sqrt_log", (Fact("GH", 1.0, INF),)
    ),
    "t_over_lnt": lambda: CoreFunction(lambda t: t / np.log(t), (1.0, INF), None, 0.0, "t_over_lnt", (Fact("HH", 1.0, INF),)),
}

_PARAMETRIC = {"power_r": _power_r, "exp_power": _exp_power}

CATALOG_NAMES = tuple(sorted(set(_FIXED) | set(_PARAMETRIC)))


def catalog_lookup(name, r=None):
    """Return the catalogued core ``name``; ``power_r`` and ``exp_power`` need ``r``."""
    if name in _FIXED:
        if r is not None:
            raise DomainError(f"{name} takes no parameter")
        return _FIXED[name]()
    if name in _PARAMETRIC:
        if r is None:
            raise DomainError(f"{name} needs a parameter r")
        r = float(r)
        if not math.isfinite(r):
            raise DomainError(f"{name}: parameter must be finite, got {r}")
        return _PARAMETRIC[name](r)
    raise KeyError(f"unknown core function {name!r}; known: {', '.join(CATALOG_NAMES)}")


def constant(c):
    c = float(c)
    return CoreFunction(lambda t: np.full(np.shape(t), c), (0.0, INF), c, 0.0, f"const({c:g})")


def _inv(v):
    if v is None:
        return None
    if math.isinf(v):
        return 0.0
    return INF if v == 0 else 1.0 / v


def transform_reciprocal_value(f: CoreFunction) -> CoreFunction:
    """``t -> 1/f(t)``."""
    slope = 0.0 if f.slope_at_infinity is not None and f.slope_at_infinity > 0 else None
    return CoreFunction(
        lambda t: 1.0 / f.func(t), f.domain, _inv(f.limit_at_zero), slope, f"1/({f.name})"
    )


def transform_log_compose(f: CoreFunction) -> CoreFunction:
    """``t -> ln f(t)``."""
    at_zero = None
    if f.limit_at_zero is not None and f.limit_at_zero >= 0:
        at_zero = -INF if f.limit_at_zero == 0 else math.log(f.limit_at_zero)
    s = f.slope_at_infinity
    slope = 0.0 if s is not None and 0 < s < INF else None
    return CoreFunction(lambda t: np.log(f.func(t)), f.domain, at_zero, slope, f"ln({f.name})")


def transform_arg_reciprocal(f: CoreFunction) -> CoreFunction:
    """``phi(t) = f(1/t)``."""
    lo, hi = f.domain
    if hi <= 0:
        raise DomainError(f"{f.name}: no positive part of the domain to reflect")
    new_lo = 0.0 if math.isinf(hi) else 1.0 / hi
    new_hi = INF if lo <= 0 else 1.0 / lo
    s = f.slope_at_infinity
    at_zero = INF if s is not None and s > 0 else None
    slope = 0.0 if f.limit_at_zero is not None and math.isfinite(f.limit_at_zero) else None
    return CoreFunction(lambda t: f.func(1.0 / t), (new_lo, new_hi), at_zero, slope, f"{f.name}(1/t)")


def transform_mul_t(f: CoreFunction) -> CoreFunction:
    """``t -> t f(t)``."""
    s = f.slope_at_infinity
    slope = None if s is None or s == 0 else math.copysign(INF, s)
    at_zero = 0.0 if f.limit_at_zero is not None and math.isfinite(f.limit_at_zero) else None
    return CoreFunction(lambda t: t * f.func(t), f.domain, at_zero, slope, f"t*{f.name}")


def transform_compose_exp(f: CoreFunction) -> CoreFunction:
    """``t -> f(exp t)`` on ``(ln lo, ln hi)``, clipped to ``|t| < 700``."""
    lo, hi = f.domain
    if hi <= 0:
        raise DomainError(f"{f.name}: exp(t) never lands in the domain")
    new_lo = -EXP_GUARD if lo <= 0 else max(math.log(lo), -EXP_GUARD)
    new_hi = EXP_GUARD if math.isinf(hi) else min(math.log(hi), EXP_GUARD)
    at_zero = None
    if lo < 1.0 < hi:
        try:
            at_zero = f(1.0)
        except DomainError:
            at_zero = None
    s = f.slope_at_infinity
    slope = INF if s is not None and s > 0 else None
    return CoreFunction(lambda t: f.func(np.exp(t)), (new_lo, new_hi), at_zero, slope, f"{f.name}(exp t)")


def negate(f: CoreFunction) -> CoreFunction:
    """``t -> -f(t)``; turns concavity questions into convexity ones."""
    neg = lambda v: None if v is None else -v  # noqa: E731
    return CoreFunction(lambda t: -f.func(t), f.domain, neg(f.limit_at_zero), neg(f.slope_at_infinity), f"-{f.name}")


def _extrapolate(values):
    """Limit of a sequence sampled at h = 10^-4 .. 10^-9 (h -> 0).

    Steps that stop shrinking (ratio above 1/2, same sign) signal divergence
    to +-inf, which also catches logarithmic growth; otherwise Aitken's
    delta-squared step, which adapts to O(h^p) error terms for any p > 0.
    """
    v = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        tail = v[-1]
        return math.copysign(INF, tail) if np.isinf(tail) else None
    d = np.diff(v)
    if abs(d[-1]) <= 1e-13 * max(abs(v[-1]), 1.0):
        return float(v[-1])
    if d[-2] != 0 and np.sign(d[-1]) == np.sign(d[-2]) and abs(d[-1]) > 0.5 * abs(d[-2]):
        return math.copysign(INF, d[-1])
    if d[-2] == 0:
        return float(v[-1])
    r = d[-1] / d[-2]
    return float(v[-1] + d[-1] * r / (1.0 - r))


def estimate_limit_at_zero(func, domain):
    if domain[0] > 0:
        return None
    hs = 10.0 ** -np.arange(4, 10)
    with np.errstate(all="ignore"):
        vals = np.asarray(func(hs), dtype=np.float64)
    return _extrapolate(vals)


def estimate_slope_at_infinity(func, domain):
    if math.isfinite(domain[1]):
        return None
    ts = 10.0 ** np.arange(4, 10)
    with np.errstate(all="ignore"):
        vals = np.asarray(func(ts), dtype=np.float64) / ts
    return _extrapolate(vals)
