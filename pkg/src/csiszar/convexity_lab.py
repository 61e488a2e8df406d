"""Sampling-based MN-convexity checks.

``f`` is MN-convex on an interval when ``f(M_a(x, y)) <= N_a(f(x), f(y))``
for all ``x, y`` in the interval and all weights ``a``. Sampling can only
falsify: a ``holds_on_samples`` verdict is evidence, not proof.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from csiszar import core_functions as cf
from csiszar._checks import DEFAULT_TOL, Comparison, leq
from csiszar._sampling import interval_grid, run_chunks, sample_interval
from csiszar.core_functions import CoreFunction
from csiszar.errors import DomainError
from csiszar.means import MeanKind, n_point, two_point

ALPHA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
GRID_POINTS = 9
SHRINK_ROUNDS = 20


class Verdict(str, enum.Enum):
    HOLDS = "holds_on_samples"
    FAILS = "fails"
    SKIPPED = "skipped_domain"


@dataclass(frozen=True)
class MeanPair:
    """``M`` acts on arguments, ``N`` on values."""

    arg_mean: MeanKind
    val_mean: MeanKind

    @classmethod
    def parse(cls, text):
        if isinstance(text, MeanPair):
            return text
        if len(text) != 2:
            raise ValueError(f"mean pair must be two letters from A, G, H; got {text!r}")
        return cls(MeanKind.parse(text[0]), MeanKind.parse(text[1]))

    def __str__(self):
        return f"{self.arg_mean.value}{self.val_mean.value}"


ALL_PAIRS = tuple(MeanPair(a, v) for a in MeanKind for v in MeanKind)


@dataclass(frozen=True)
class Witness:
    x: float
    y: float
    alpha: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class ConvexityReport:
    pair: MeanPair
    interval: tuple[float, float]
    verdict: Verdict
    witness: Witness | None
    trials: int
    tolerance: float
    seed: int
    note: str | None = None

    def to_dict(self):
        return {
            "pair": str(self.pair),
            "interval": list(self.interval),
            "verdict": self.verdict.value,
            "witness": None if self.witness is None else vars(self.witness).copy(),
            "trials": self.trials,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "note": self.note,
            "proof": False,
        }


def two_point_sides(f: CoreFunction, pair, x, y, alpha):
    """``(f(M_a(x, y)), N_a(f(x), f(y)))``; vectorised."""
    pair = MeanPair.parse(pair)
    lhs = f(two_point(pair.arg_mean, alpha, x, y))
    rhs = two_point(pair.val_mean, alpha, f(x), f(y))
    return lhs, rhs


def replay(f: CoreFunction, report: ConvexityReport):
    """Re-evaluate a stored witness; True when it still violates."""
    w = report.witness
    if w is None:
        return False
    lhs, rhs = two_point_sides(f, report.pair, w.x, w.y, w.alpha)
    return bool(lhs == w.lhs and rhs == w.rhs and not leq(lhs, rhs, report.tolerance))


def _batch(f, pair, x, y, alpha, tol):
    """Violation mask for one batch, or a skip note."""
    try:
        fx, fy = f(x), f(y)
        if pair.val_mean is not MeanKind.ARITHMETIC and (np.any(fx <= 0) or np.any(fy <= 0)):
            return None, f"{f.name} takes nonpositive values; {pair.val_mean.name.lower()} mean undefined"
        lhs = f(two_point(pair.arg_mean, alpha, x, y))
    except DomainError as exc:
        return None, str(exc)
    rhs = two_point(pair.val_mean, alpha, fx, fy)
    return ~leq(lhs, rhs, tol), None


def _shrink(f, pair, x, y, alpha, tol, positive, rounds):
    """Bisect ``y`` toward ``x`` (where equality holds) keeping a violation."""

    def point(s):
        if positive:
            return math.exp((1 - s) * math.log(x) + s * math.log(y))
        return (1 - s) * x + s * y

    lo, hi = 0.0, 1.0
    for _ in range(rounds):
        mid = 0.5 * (lo + hi)
        lhs, rhs = two_point_sides(f, pair, x, point(mid), alpha)
        if leq(lhs, rhs, tol):
            lo = mid
        else:
            hi = mid
    return point(hi) if hi < 1.0 else y


def _resolve_interval(f, interval):
    lo, hi = f.domain if interval is None else (float(interval[0]), float(interval[1]))
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise DomainError(f"need a finite sampling interval, got ({lo}, {hi})")
    if lo < f.domain[0] or hi > f.domain[1]:
        raise DomainError(f"interval ({lo}, {hi}) is not inside the domain {f.domain} of {f.name}")
    return lo, hi


def check_mn_convexity(f: CoreFunction, pair, interval=None, trials=10_000, seed=0,
                       tol=DEFAULT_TOL, jobs=1, shrink_rounds=SHRINK_ROUNDS) -> ConvexityReport:
    """Search for ``(x, y, a)`` with ``f(M_a(x, y)) > N_a(f(x), f(y))``.

    A deterministic grid (9 x 9 points, weights 0, 1/4, 1/2, 3/4, 1) is tried
    first, then ``trials`` random triples with ``x, y`` log-uniform (uniform
    when the interval reaches 0 or below) and ``a`` uniform. The first
    violation, shrunk toward ``x = y``, is the witness.
    """
    pair = MeanPair.parse(pair)
    lo, hi = _resolve_interval(f, interval)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")

    def report(verdict, witness=None, note=None):
        return ConvexityReport(pair, (lo, hi), verdict, witness, trials, tol, seed, note)

    if pair.arg_mean is not MeanKind.ARITHMETIC and lo < 0:
        return report(Verdict.SKIPPED, note=f"{pair.arg_mean.name.lower()} mean needs positive arguments")

    g = interval_grid(lo, hi, GRID_POINTS)
    gx, gy, ga = (a.ravel() for a in np.meshgrid(g, g, ALPHA_GRID, indexing="ij"))

    def chunk(rng, start, stop):
        size = stop - start
        x = sample_interval(rng, lo, hi, size)
        y = sample_interval(rng, lo, hi, size)
        a = rng.random(size)
        return x, y, a, _batch(f, pair, x, y, a, tol)

    batches = [(gx, gy, ga, _batch(f, pair, gx, gy, ga, tol))]
    batches += run_chunks(chunk, trials, seed, jobs)
    for x, y, a, (bad, note) in batches:
        if note is not None:
            return report(Verdict.SKIPPED, note=note)
        for i in np.flatnonzero(bad):
            xi, yi, ai = float(x[i]), float(y[i]), float(a[i])
            lhs, rhs = two_point_sides(f, pair, xi, yi, ai)
            if leq(lhs, rhs, tol):
                continue
            yi = _shrink(f, pair, xi, yi, ai, tol, lo > 0, shrink_rounds)
            lhs, rhs = two_point_sides(f, pair, xi, yi, ai)
            return report(Verdict.FAILS, Witness(xi, yi, ai, float(lhs), float(rhs)))
    return report(Verdict.HOLDS)


def classify(f: CoreFunction, interval=None, trials=10_000, seed=0, tol=DEFAULT_TOL, jobs=1):
    """Reports for all nine mean pairs, keyed by :class:`MeanPair`."""
    return {pair: check_mn_convexity(f, pair, interval, trials, seed, tol, jobs) for pair in ALL_PAIRS}


def declare(f: CoreFunction, report: ConvexityReport) -> CoreFunction:
    """Attach a classifier-backed fact to ``f`` when the report holds."""
    if report.verdict is Verdict.HOLDS:
        return f.with_fact(str(report.pair), report.interval)
    return f


def discover_subinterval(f: CoreFunction, pair, candidates, trials=2_000, seed=0, tol=DEFAULT_TOL):
    """First candidate interval on which ``pair`` holds on samples, else None."""
    for interval in candidates:
        if check_mn_convexity(f, pair, interval, trials, seed, tol).verdict is Verdict.HOLDS:
            return tuple(interval)
    return None


@dataclass(frozen=True)
class TransformCheck:
    item: str
    pair: str
    transform: str
    direct: Verdict
    transformed: Verdict | None
    consistent: bool | None
    note: str | None = None

    def to_dict(self):
        return {"item": self.item, "pair": self.pair, "transform": self.transform,
                "direct": self.direct.value,
                "transformed": None if self.transformed is None else self.transformed.value,
                "consistent": self.consistent, "note": self.note}


def _log_interval(lo, hi):
    if lo <= 0:
        raise DomainError("log-domain transform needs a positive interval")
    return math.log(lo), math.log(hi)


# item -> (direct pair, description, builder, transformed check pair, interval map)
_TRANSFORM_ITEMS = {
    "i": ("AG", "ln f convex", cf.transform_log_compose, "AA", None),
    "ii": ("AH", "1/f concave", lambda f: cf.negate(cf.transform_reciprocal_value(f)), "AA", None),
    "iii": ("GA", "f o exp convex", cf.transform_compose_exp, "AA", _log_interval),
    "v": ("GG", "ln o f o exp convex", lambda f: cf.transform_log_compose(cf.transform_compose_exp(f)), "AA", _log_interval),
    "vi": ("GG", "ln f GA-convex", cf.transform_log_compose, "GA", None),
    "viii": ("HG", "t ln f(t) convex", lambda f: cf.transform_mul_t(cf.transform_log_compose(f)), "AA", None),
    "x": ("HH", "t/f(t) concave", lambda f: cf.negate(cf.transform_mul_t(cf.transform_reciprocal_value(f))), "AA", None),
}

TRANSFORM_ITEMS = tuple(_TRANSFORM_ITEMS)


def crosscheck_lemma_equivalences(f: CoreFunction, interval=None, trials=10_000, seed=0,
                                  tol=DEFAULT_TOL, items=TRANSFORM_ITEMS):
    """Compare the direct MN verdict with the plain-convexity verdict of a transform.

    Both checks draw the same random stream, so a log-domain transform sees
    exactly the logarithms of the direct check's sample points.
    """
    lo, hi = _resolve_interval(f, interval)
    out = []
    for item in items:
        pair, description, build, check_pair, imap = _TRANSFORM_ITEMS[item]
        direct = check_mn_convexity(f, pair, (lo, hi), trials, seed, tol).verdict
        try:
            h = build(f)
            h_interval = (lo, hi) if imap is None else imap(lo, hi)
            transformed = check_mn_convexity(h, check_pair, h_interval, trials, seed, tol).verdict
        except DomainError as exc:
            out.append(TransformCheck(item, pair, description, direct, None, None, f"skipped: {exc}"))
            continue
        if Verdict.SKIPPED in (direct, transformed):
            out.append(TransformCheck(item, pair, description, direct, transformed, None, "skipped: domain"))
            continue
        consistent = (direct is Verdict.HOLDS) == (transformed is Verdict.HOLDS)
        out.append(TransformCheck(item, pair, description, direct, transformed, consistent))
    return out


def as_weight_vector(w):
    w = np.asarray(w, dtype=np.float64).ravel()
    if w.size == 0 or np.any(w < 0) or np.any(w > 1):
        raise DomainError("weights must lie in [0, 1]")
    if abs(float(np.sum(w)) - 1.0) > 1e-12:
        raise DomainError(f"weights must sum to 1, got {float(np.sum(w))!r}")
    return w


def jensen_n_point(f: CoreFunction, variant, xs, w, tol=DEFAULT_TOL) -> Comparison:
    """n-point Jensen inequality ``f(M_w(xs)) <= N_w(f(xs))``."""
    pair = MeanPair.parse(variant)
    xs = np.asarray(xs, dtype=np.float64).ravel()
    w = as_weight_vector(w)
    if xs.shape != w.shape:
        raise DomainError(f"{xs.size} points but {w.size} weights")
    if np.any(xs <= 0) and pair.arg_mean is not MeanKind.ARITHMETIC:
        raise DomainError("geometric/harmonic means need positive points")
    fx = f(xs)
    if np.any(fx <= 0) and pair.val_mean is not MeanKind.ARITHMETIC:
        raise DomainError(f"{f.name} takes nonpositive values at the points")
    lhs = float(f(n_point(pair.arg_mean, xs, w)))
    rhs = n_point(pair.val_mean, fx, w)
    return Comparison(lhs, rhs, bool(leq(lhs, rhs, tol)))
