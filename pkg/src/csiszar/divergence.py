"""Csiszar f-divergence, perspective functions and the named divergences.

Boundary conventions for a term ``q f(p/q)``:

* ``p = q = 0`` contributes 0,
* ``q = 0 < p`` contributes ``p * lim f(t)/t`` (possibly +inf),
* ``p = 0 < q`` contributes ``q * f(0+)``.

Tuples are used as given; nothing is normalised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from csiszar import kernels
from csiszar._checks import DEFAULT_TOL, leq
from csiszar._sampling import run_chunks
from csiszar.core_functions import CoreFunction, catalog_lookup
from csiszar.errors import DomainError, IndeterminateFormError

ZERO_OVER_ZERO = "used_zero_over_zero_convention"
P_OVER_ZERO = "used_p_over_zero_convention"
F_AT_ZERO = "used_limit_at_zero_convention"

NAMED = ("kl", "tv", "hellinger", "chi2", "renyi_rho", "renyi_R")


@dataclass(frozen=True)
class DivergenceValue:
    value: float
    flags: frozenset[str] = field(default_factory=frozenset)

    def __float__(self):
        return self.value

    def to_dict(self):
        return {"value": self.value, "flags": sorted(self.flags)}


def as_positive_tuple(values, allow_all_zero=False, name="tuple"):
    arr = np.atleast_1d(np.asarray(values, dtype=np.float64))
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"{name} must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError(f"{name} entries must be finite and >= 0")
    if not allow_all_zero and not np.any(arr > 0):
        raise DomainError(f"{name} needs at least one positive entry")
    return arr


def _terms(f: CoreFunction, x, y):
    """Per-entry ``y f(x/y)`` with the boundary conventions; returns (terms, flags)."""
    terms = np.empty(np.broadcast(x, y).shape, dtype=np.float64)
    x, y = np.broadcast_to(x, terms.shape), np.broadcast_to(y, terms.shape)
    flags = set()
    both = (x > 0) & (y > 0)
    if np.all(both):
        return y * f(x / y), flags
    terms[both] = y[both] * f(x[both] / y[both])
    zz = (x == 0) & (y == 0)
    if np.any(zz):
        terms[zz] = 0.0
        flags.add(ZERO_OVER_ZERO)
    x0 = (x == 0) & (y > 0)
    if np.any(x0):
        if f.limit_at_zero is None:
            raise DomainError(f"{f.name}: f(0+) is not available")
        terms[x0] = y[x0] * f.limit_at_zero
        flags.add(F_AT_ZERO)
    y0 = (y == 0) & (x > 0)
    if np.any(y0):
        if f.slope_at_infinity is None:
            raise DomainError(f"{f.name}: lim f(t)/t at infinity is not available")
        terms[y0] = x[y0] * f.slope_at_infinity
        flags.add(P_OVER_ZERO)
    return terms, flags


def _sum(terms):
    pos = bool(np.any(terms == math.inf))
    neg = bool(np.any(terms == -math.inf))
    if pos and neg:
        raise IndeterminateFormError("divergence terms contain both +inf and -inf")
    if pos:
        return math.inf
    if neg:
        return -math.inf
    return float(kernels.kahan_sum(terms))


def csiszar_divergence(f: CoreFunction, p, q) -> DivergenceValue:
    """``I_f(p, q) = sum_j q_j f(p_j / q_j)``."""
    p = as_positive_tuple(p, allow_all_zero=True, name="p")
    q = as_positive_tuple(q, allow_all_zero=True, name="q")
    if p.shape != q.shape:
        raise DomainError(f"length mismatch: len(p) = {p.size}, len(q) = {q.size}")
    terms, flags = _terms(f, p, q)
    return DivergenceValue(_sum(terms), frozenset(flags))


def perspective(f: CoreFunction, x, y):
    """``g(x, y) = y f(x / y)`` for ``x, y >= 0``; vectorised over arrays."""
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if np.any(xa < 0) or np.any(ya < 0):
        raise DomainError("perspective arguments must be >= 0")
    terms, _ = _terms(f, xa, ya)
    return float(terms) if np.ndim(terms) == 0 else terms


class Perspective:
    """The two-variable function ``(t, s) -> s f(t/s)`` as a callable."""

    def __init__(self, core: CoreFunction):
        self.core = core
        self.name = f"persp[{core.name}]"

    def __call__(self, t, s):
        return perspective(self.core, t, s)

    def __repr__(self):
        return f"Perspective({self.core.name!r})"


def tuple_sum(p):
    return float(kernels.kahan_sum(as_positive_tuple(p, allow_all_zero=True)))


def named(name, p, q, alpha=None) -> DivergenceValue:
    """KL, total variation, Hellinger, chi^2 and the two Renyi forms."""
    if name in ("kl", "tv", "hellinger", "chi2"):
        return csiszar_divergence(catalog_lookup(name), p, q)
    if name not in ("renyi_rho", "renyi_R"):
        raise KeyError(f"unknown divergence {name!r}; known: {', '.join(NAMED)}")
    if alpha is None:
        raise DomainError(f"{name} needs alpha")
    alpha = float(alpha)
    rho = csiszar_divergence(catalog_lookup("power_r", r=alpha), p, q)
    if name == "renyi_rho":
        return rho
    if alpha in (0.0, 1.0):
        raise DomainError("renyi_R is defined for alpha outside {0, 1}")
    if not rho.value > 0:
        raise DomainError(f"rho_alpha must be positive, got {rho.value}")
    return DivergenceValue(math.log(rho.value) / (alpha * (alpha - 1.0)), rho.flags)


@dataclass(frozen=True)
class SubadditivityResult:
    core: str
    trials: int
    subadditivity_violations: int
    joint_convexity_violations: int
    witness: dict | None = None

    @property
    def violations(self):
        return self.subadditivity_violations + self.joint_convexity_violations


def csiszar_divergence_batch(f: CoreFunction, p_rows, q_rows):
    """Row-wise ``I_f`` for 2-d arrays of strictly positive entries.

    Same arithmetic as :func:`csiszar_divergence` (Kahan, left to right) but
    without the boundary conventions; used by the randomised suites.
    """
    p_rows = np.asarray(p_rows, dtype=np.float64)
    q_rows = np.asarray(q_rows, dtype=np.float64)
    if p_rows.shape != q_rows.shape or p_rows.ndim != 2:
        raise DomainError("p_rows and q_rows must be 2-d arrays of equal shape")
    if not (np.all(p_rows > 0) and np.all(q_rows > 0)):
        raise DomainError("batched divergence needs strictly positive entries")
    return kernels.kahan_sum_rows(q_rows * f(p_rows / q_rows))


def subadditivity_suite(cores=("kl", "tv", "hellinger", "chi2"), trials=10_000, seed=0,
                    tol=DEFAULT_TOL, jobs=1, lengths=(2, 8), value_range=(1e-3, 1e3)):
    """Randomised check of ``g(sum p, sum q) <= I_f(p, q)`` and of joint convexity.

    Trial ``i`` draws a length ``n`` in ``lengths``, two (p, q) pairs with
    log-uniform entries in ``value_range`` and a mixing weight ``lam``.
    Trials of equal length are evaluated together.
    """
    lo, hi = math.log(value_range[0]), math.log(value_range[1])
    n_max = lengths[1]
    results = []
    for name in cores:
        f = catalog_lookup(name) if isinstance(name, str) else name

        def chunk(rng, start, stop, f=f):
            count = stop - start
            ns = rng.integers(lengths[0], n_max + 1, size=count)
            vals = np.exp(rng.uniform(lo, hi, size=(count, 4, n_max)))
            lam = rng.random(count)
            sub_bad = np.zeros(count, dtype=bool)
            joint_bad = np.zeros(count, dtype=bool)
            for n in np.unique(ns):
                rows = np.flatnonzero(ns == n)
                p1, q1, p2, q2 = (vals[rows, k, :n] for k in range(4))
                lr = lam[rows, None]
                i1 = csiszar_divergence_batch(f, p1, q1)
                i2 = csiszar_divergence_batch(f, p2, q2)
                mixed = csiszar_divergence_batch(f, lr * p1 + (1 - lr) * p2, lr * q1 + (1 - lr) * q2)
                whole = perspective(f, kernels.kahan_sum_rows(p1), kernels.kahan_sum_rows(q1))
                sub_bad[rows] = ~leq(whole, i1, tol)
                joint_bad[rows] = ~leq(mixed, lam[rows] * i1 + (1 - lam[rows]) * i2, tol)
            witness = None
            bad = np.flatnonzero(sub_bad | joint_bad)
            if bad.size:
                j = int(bad[0])
                n = int(ns[j])
                witness = {"trial": start + j, "n": n, "lam": float(lam[j]),
                           "p1": vals[j, 0, :n], "q1": vals[j, 1, :n],
                           "p2": vals[j, 2, :n], "q2": vals[j, 3, :n],
                           "kind": "subadditivity" if sub_bad[j] else "joint_convexity"}
            return int(sub_bad.sum()), int(joint_bad.sum()), witness

        parts = run_chunks(chunk, trials, seed, jobs)
        witness = next((w for _, _, w in parts if w is not None), None)
        results.append(SubadditivityResult(f.name, trials, sum(s for s, _, _ in parts),
                                      sum(j for _, j, _ in parts), witness))
    return results
