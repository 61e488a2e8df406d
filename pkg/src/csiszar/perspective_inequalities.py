"""Convexity transfer from a core ``f`` to its perspective ``g(t, s) = s f(t/s)``.

Two families of checks:

* two-point inequalities in ``(a, b, x, y, alpha)`` whose shape depends on
  the convexity type of ``f`` (parts ``i`` to ``v``),
* chains of sum inequalities for positive tuples ``a, b`` with
  ``a_bar = sum a`` and ``b_bar = sum b`` (parts ``i`` to ``iv``).

Hypotheses are never re-derived inside a check: a missing declaration only
attaches a warning. The randomised suite is where the classifier runs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from csiszar import core_functions as cf
from csiszar import kernels
from csiszar._checks import DEFAULT_TOL, Chain, close, leq, make_link
from csiszar._sampling import run_chunks, sample_interval
from csiszar.convexity_lab import Verdict, check_mn_convexity, declare, discover_subinterval
from csiszar.core_functions import CoreFunction, catalog_lookup
from csiszar.divergence import (
    as_positive_tuple, csiszar_divergence, csiszar_divergence_batch, perspective, tuple_sum,
)
from csiszar.errors import DomainError
from csiszar.means import MeanKind, WeightedMean, evaluate, two_point

A, G, H = MeanKind.ARITHMETIC, MeanKind.GEOMETRIC, MeanKind.HARMONIC

THM23_PARTS = ("i", "ii", "iii", "iv", "v")
THM24_PARTS = ("i", "ii", "iii", "iv")

#: convexity type of f each part assumes; part iii also follows from GH
THM23_HYPOTHESIS = {"i": "AH", "ii": "AG", "iii": "GG", "iv": "HH", "v": "GH"}
THM24_HYPOTHESIS = {"i": "AH", "ii": "AG", "iii": "HA", "iv": "GA"}


def _declared(f, pairs):
    return any(f.declares(p) for p in pairs)


def _thm23_pairs(part):
    return ("GG", "GH") if part == "iii" else (THM23_HYPOTHESIS[part],)


@dataclass(frozen=True)
class PointCheck:
    lhs: float
    rhs: float
    holds: bool
    warning: str | None = None

    def to_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds, "warning": self.warning}


def thm23_sides(f: CoreFunction, part, a, b, x, y, alpha):
    """Both sides of the part's two-point inequality; vectorised."""
    if part not in THM23_PARTS:
        raise ValueError(f"unknown part {part!r}; expected one of {THM23_PARTS}")

    def g(s, t):
        return perspective(f, s, t)

    if part in ("i", "ii"):
        lhs = g(two_point(A, alpha, a, b), two_point(A, alpha, x, y))
        inner_a = two_point(A, alpha, g(a, x), g(a, y))
        inner_b = two_point(A, alpha, g(b, x), g(b, y))
        rhs = two_point(H if part == "i" else G, alpha, inner_a, inner_b)
    elif part == "v":
        lhs = g(two_point(G, alpha, a, b), two_point(G, alpha, x, y))
        inner_a = two_point(G, alpha, g(a, x), g(a, y))
        inner_b = two_point(G, alpha, g(b, x), g(b, y))
        rhs = two_point(H, alpha, inner_a, inner_b)
    else:
        m = G if part == "iii" else H
        lhs = g(two_point(m, alpha, a, b), two_point(m, alpha, x, y))
        rhs = two_point(m, alpha, g(a, x), g(b, y))
    return lhs, rhs


def check_thm23(f: CoreFunction, part, a, b, x, y, alpha, tol=DEFAULT_TOL) -> PointCheck:
    for name, v in (("a", a), ("b", b), ("x", x), ("y", y)):
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v}")
    WeightedMean(A, alpha)
    lhs, rhs = thm23_sides(f, part, float(a), float(b), float(x), float(y), float(alpha))
    warning = None
    if not _declared(f, _thm23_pairs(part)):
        warning = f"{f.name} is not declared {THM23_HYPOTHESIS[part]}-convex; the inequality may fail"
    return PointCheck(float(lhs), float(rhs), bool(leq(lhs, rhs, tol)), warning)


@dataclass(frozen=True)
class Counterexample:
    lhs: float
    rhs: float
    violated: bool
    lhs_closed_form: float
    rhs_closed_form: float

    def to_dict(self):
        return vars(self).copy()


def paper_counterexample() -> Counterexample:
    """``g`` built from ``1/sqrt(t)`` is not AH-convex in its second coordinate.

    With ``a = 1, x = 2, y = 4`` and weight 1/2:
    ``g(a, A(x, y)) = 3 sqrt 3`` exceeds ``H(g(a, x), g(a, y)) = 16 sqrt 2 / (4 + sqrt 2)``.
    """
    f = catalog_lookup("inv_sqrt")
    a, x, y = 1.0, 2.0, 4.0
    lhs = perspective(f, a, evaluate(WeightedMean(A, 0.5), x, y))
    rhs = evaluate(WeightedMean(H, 0.5), perspective(f, a, x), perspective(f, a, y))
    s2 = math.sqrt(2.0)
    return Counterexample(lhs, rhs, lhs > rhs, 3.0 * math.sqrt(3.0), 16.0 * s2 / (4.0 + s2))


def is_increasing(f: CoreFunction, interval, pairs=1000, seed=0):
    """Sampled monotonicity: ``f(s) <= f(t)`` for ``pairs`` random ``s < t``."""
    lo, hi = interval
    rng = np.random.default_rng(seed)
    s = sample_interval(rng, lo, hi, pairs)
    t = sample_interval(rng, lo, hi, pairs)
    s, t = np.minimum(s, t), np.maximum(s, t)
    return bool(np.all(f(s) <= f(t)))


class _ExactOps:
    """One tuple pair at a time through the public divergence API."""

    @staticmethod
    def total(rows):
        return np.array([tuple_sum(r) for r in rows])

    @staticmethod
    def div(core, p_rows, q_rows):
        return np.array([csiszar_divergence(core, p, q).value for p, q in zip(p_rows, q_rows)])


class _BatchOps:
    total = staticmethod(kernels.kahan_sum_rows)
    div = staticmethod(csiszar_divergence_batch)


def thm24_links(f: CoreFunction, part, a_rows, b_rows, ops=_BatchOps):
    """``[(label, lhs, rhs, relation), ...]`` for each row pair of tuples."""
    if part not in THM24_PARTS:
        raise ValueError(f"unknown part {part!r}; expected one of {THM24_PARTS}")
    sa, sb = ops.total(a_rows), ops.total(b_rows)
    g = perspective(f, sa, sb)
    if part == "i":
        mid = sb ** 2 / ops.div(cf.transform_reciprocal_value(f), a_rows, b_rows)
        return [("g(a_bar, b_bar) <= b_bar^2 / I_{1/f}(a, b)", g, mid, "<="),
                ("b_bar^2 / I_{1/f}(a, b) <= I_f(a, b)", mid, ops.div(f, a_rows, b_rows), "<=")]
    if part == "ii":
        mid = sb * np.exp(ops.div(cf.transform_log_compose(f), a_rows, b_rows) / sb)
        return [("g(a_bar, b_bar) <= b_bar exp(I_{ln f}(a, b) / b_bar)", g, mid, "<="),
                ("b_bar exp(I_{ln f}(a, b) / b_bar) <= I_f(a, b)", mid, ops.div(f, a_rows, b_rows), "<=")]
    if part == "iii":
        phi = cf.transform_arg_reciprocal(f)
        psi = cf.transform_mul_t(f)
        k = sb / sa
        v1 = k * perspective(phi, sb, sa)
        v2 = k * perspective(psi, sa, sb)
        v3 = k * ops.div(phi, b_rows, a_rows)
        v4 = k * ops.div(psi, a_rows, b_rows)
        return [("g(a_bar, b_bar) = (b_bar/a_bar) g_phi(b_bar, a_bar)", g, v1, "="),
                ("(b_bar/a_bar) g_phi(b_bar, a_bar) = (b_bar/a_bar) g_psi(a_bar, b_bar)", v1, v2, "="),
                ("(b_bar/a_bar) g_psi(a_bar, b_bar) <= (b_bar/a_bar) I_phi(b, a)", v2, v3, "<="),
                ("(b_bar/a_bar) I_phi(b, a) = (b_bar/a_bar) I_psi(a, b)", v3, v4, "=")]
    fe = cf.transform_compose_exp(f)
    mid = perspective(fe, sa, sb)
    return [("g(a_bar, b_bar) <= g_{f o exp}(a_bar, b_bar)", g, mid, "<="),
            ("g_{f o exp}(a_bar, b_bar) <= I_{f o exp}(a, b)", mid, ops.div(fe, a_rows, b_rows), "<=")]


def _monotonicity_interval(f, a, b):
    ratios = a / b
    lo = max(float(ratios.min()), f.domain[0])
    hi = min(math.exp(min(float(ratios.max()), cf.EXP_GUARD)), f.domain[1])
    return (lo, hi) if lo < hi else None


def check_thm24(f: CoreFunction, part, a, b, tol=DEFAULT_TOL, eq_rtol=1e-10) -> Chain:
    """Evaluate every quantity of the part's chain and each link's verdict."""
    a = as_positive_tuple(a, name="a")
    b = as_positive_tuple(b, name="b")
    if a.shape != b.shape:
        raise DomainError(f"length mismatch: len(a) = {a.size}, len(b) = {b.size}")
    if np.any(a == 0) or np.any(b == 0):
        raise DomainError("tuples must be strictly positive")
    warnings = []
    if not f.declares(THM24_HYPOTHESIS[part]):
        warnings.append(f"{f.name} is not declared {THM24_HYPOTHESIS[part]}-convex")
    if part == "iv":
        span = _monotonicity_interval(f, a, b)
        if span is not None and not is_increasing(f, span):
            warnings.append(f"{f.name} is not increasing on {span} (1000 sampled pairs)")
    links = tuple(
        make_link(label, lhs[0], rhs[0], rel, tol, eq_rtol)
        for label, lhs, rhs, rel in thm24_links(f, part, a[None, :], b[None, :], _ExactOps)
    )
    return Chain(f"part {part}", links, "; ".join(warnings) or None)


# ---------------------------------------------------------------- randomised suite

#: per-domain sampling boxes: (a and b range, x and y range, classification interval)
_BOXES = {
    "positive": ((0.1, 10.0), (0.1, 10.0), (0.01, 100.0)),
    "above_one": ((1.0, 10.0), (0.1, 1.0), (1.0, 100.0)),
    "unit": ((0.01, 0.1), (0.1, 1.0), (0.01, 1.0)),
}

DEFAULT_THM23_PAIRINGS = (
    ("inv_sqrt", "i"), ("power_r:-1", "ii"), ("exp", "ii"), ("hellinger", "iii"),
    ("exp", "iii"), ("mobius", "iii"), ("power_r:0.5", "iv"), ("t_over_lnt", "iv"),
    ("inv_sqrt_log", "v"), ("inv_sqrt_log", "iii"), ("kl", "i"),
)
DEFAULT_THM24_PAIRINGS = (
    ("inv_sqrt", "i"), ("power_r:-1", "ii"), ("exp", "ii"), ("power_r:0.5", "iii"), ("log1p", "iv"),
)

#: candidate subintervals scanned for the KL core, whose AH-convexity is local
KL_AH_CANDIDATES = ((1.05, 1.5), (1.5, 3.0), (3.0, 10.0), (10.0, 100.0), (1.05, 100.0),
                    (0.05, 0.3), (0.3, 0.95))


def resolve_core(core_id) -> CoreFunction:
    """``"name"`` or ``"name:r"`` -> catalogued core; cores pass through."""
    if isinstance(core_id, CoreFunction):
        return core_id
    name, _, r = core_id.partition(":")
    return catalog_lookup(name, float(r) if r else None)


def _box(f):
    lo, hi = f.domain
    if lo >= 1.0:
        return _BOXES["above_one"]
    if hi <= 1.0:
        return _BOXES["unit"]
    return _BOXES["positive"]


@dataclass(frozen=True)
class SuiteEntry:
    suite: str
    part: str
    core: str
    hypothesis: str
    hypothesis_verdict: str
    interval: tuple[float, float] | None
    trials: int
    violations: int
    witness: dict | None = None
    note: str | None = None

    @property
    def confirmed(self):
        return self.hypothesis_verdict == Verdict.HOLDS.value

    def to_dict(self):
        d = vars(self).copy()
        d["interval"] = None if self.interval is None else list(self.interval)
        return d


@dataclass(frozen=True)
class SuiteReport:
    trials: int
    seed: int
    tolerance: float
    entries: tuple[SuiteEntry, ...] = field(default_factory=tuple)

    @property
    def violations(self):
        """Violations among pairings whose hypothesis the classifier confirmed."""
        return sum(e.violations for e in self.entries if e.confirmed)

    @property
    def refuted(self):
        return tuple(e for e in self.entries if not e.confirmed)

    def to_dict(self):
        return {"trials": self.trials, "seed": self.seed, "tolerance": self.tolerance,
                "violations": self.violations, "entries": [e.to_dict() for e in self.entries]}


def _hypothesis(f, pair, interval, seed, tol):
    report = check_mn_convexity(f, pair, interval, 10_000, seed, tol)
    return report.verdict, declare(f, report)


def _run_thm23(f, part, trials, seed, tol, jobs, box):
    (ab_lo, ab_hi), (xy_lo, xy_hi), _ = box

    def chunk(rng, start, stop):
        n = stop - start
        a = sample_interval(rng, ab_lo, ab_hi, n)
        b = sample_interval(rng, ab_lo, ab_hi, n)
        x = sample_interval(rng, xy_lo, xy_hi, n)
        y = sample_interval(rng, xy_lo, xy_hi, n)
        alpha = rng.random(n)
        lhs, rhs = thm23_sides(f, part, a, b, x, y, alpha)
        bad = np.flatnonzero(~leq(lhs, rhs, tol))
        witness = None
        if bad.size:
            i = int(bad[0])
            witness = {"trial": start + i, "a": a[i], "b": b[i], "x": x[i], "y": y[i],
                       "alpha": alpha[i], "lhs": lhs[i], "rhs": rhs[i]}
        return int(bad.size), witness

    parts = run_chunks(chunk, trials, seed, jobs)
    return sum(c for c, _ in parts), next((w for _, w in parts if w is not None), None)


def _run_thm24(f, part, trials, seed, tol, jobs, box, lengths=(2, 8), eq_rtol=1e-10):
    # a_i from the first box and b_i from the second keep a_i / b_i in the domain
    a_box, b_box = box[0], box[1]

    def chunk(rng, start, stop):
        n_trials = stop - start
        ns = rng.integers(lengths[0], lengths[1] + 1, size=n_trials)
        a_all = sample_interval(rng, a_box[0], a_box[1], (n_trials, lengths[1]))
        b_all = sample_interval(rng, b_box[0], b_box[1], (n_trials, lengths[1]))
        bad = np.zeros(n_trials, dtype=bool)
        for n in np.unique(ns):
            rows = np.flatnonzero(ns == n)
            for _, lhs, rhs, rel in thm24_links(f, part, a_all[rows, :n], b_all[rows, :n]):
                ok = close(lhs, rhs, eq_rtol) if rel == "=" else leq(lhs, rhs, tol)
                bad[rows] |= ~np.asarray(ok)
        idx = np.flatnonzero(bad)
        witness = None
        if idx.size:
            i = int(idx[0])
            witness = {"trial": start + i, "a": a_all[i, :ns[i]], "b": b_all[i, :ns[i]]}
        return int(idx.size), witness

    parts = run_chunks(chunk, trials, seed, jobs)
    return sum(c for c, _ in parts), next((w for _, w in parts if w is not None), None)


def randomized_suite_thm23_24(trials=10_000, seed=0, pairings23=None, pairings24=None,
                              tol=DEFAULT_TOL, jobs=1) -> SuiteReport:
    """Drive both checkers over (core, part) pairings.

    Each pairing's hypothesis is first classified on the interval its
    ratios ``a/x`` live in. Every pairing is then run and its violations
    counted; :attr:`SuiteReport.violations` only sums the pairings whose
    hypothesis held. The KL core is classified on candidate subintervals
    and skipped when none qualifies.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    pairings23 = DEFAULT_THM23_PAIRINGS if pairings23 is None else pairings23
    pairings24 = DEFAULT_THM24_PAIRINGS if pairings24 is None else pairings24
    entries = []
    for core_id, part in pairings23:
        f = resolve_core(core_id)
        box = _box(f)
        pair = THM23_HYPOTHESIS[part]
        note = None
        interval = box[2]
        if f.name == "kl" and part == "i":
            interval = discover_subinterval(f, pair, KL_AH_CANDIDATES, seed=seed, tol=tol)
            if interval is None:
                entries.append(SuiteEntry("thm23", part, f.name, pair, Verdict.FAILS.value, None, 0, 0,
                                          note="no candidate subinterval is AH-convex on samples"))
                continue
            note = f"classifier-discovered subinterval {interval}"
        verdict, _ = _hypothesis(f, pair, interval, seed, tol)
        count, witness = _run_thm23(f, part, trials, seed, tol, jobs, box)
        entries.append(SuiteEntry("thm23", part, f.name, pair, verdict.value, interval, trials,
                                  count, witness, note))
    for core_id, part in pairings24:
        f = resolve_core(core_id)
        box = _box(f)
        pair = THM24_HYPOTHESIS[part]
        verdict, _ = _hypothesis(f, pair, box[2], seed, tol)
        note = None
        if part == "iv" and not is_increasing(f, box[2], seed=seed):
            verdict, note = Verdict.FAILS, "core is not increasing on samples"
        count, witness = _run_thm24(f, part, trials, seed, tol, jobs, box)
        entries.append(SuiteEntry("thm24", part, f.name, pair, verdict.value, box[2], trials,
                                  count, witness, note))
    return SuiteReport(trials, seed, tol, tuple(entries))
