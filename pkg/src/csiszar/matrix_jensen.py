"""Spectral calculus for real symmetric matrices and matrix Jensen checks.

``f(A) = sum f(lam_i) P_i`` where ``P_i`` projects onto the eigenspace of
``lam_i``; eigenvalues closer than ``1e-8 * max|lam|`` share one projection
so the result does not depend on the basis chosen inside a degenerate
eigenspace. Two-variable functions act on ``R^n (x) R^m`` through
``h(A, B) = sum h(lam_i, mu_j) P_i (x) Q_j`` with numpy's row-major
Kronecker layout, so ``eta (x) zeta = np.kron(eta, zeta)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from csiszar import kernels
from csiszar._checks import DEFAULT_TOL, Chain, Comparison, leq, make_link
from csiszar._sampling import random_orthogonal, random_unit, run_chunks, sample_interval
from csiszar.convexity_lab import MeanPair, jensen_n_point
from csiszar.core_functions import CoreFunction, catalog_lookup
from csiszar.divergence import Perspective
from csiszar.errors import ConvergenceError, DomainError
from csiszar.means import MeanKind

MAX_DIM = 64
CLUSTER_RTOL = 1e-8
SYMMETRY_RTOL = 1e-12

VARIANTS = ("AA", "AH", "AG", "GA", "GG", "GH", "HG", "HH")
TWO_VARIABLE_HYPOTHESES = ("separately_convex", "separately_HH", "separately_GG",
                           "AH_first_convex_second", "convex_first_convex_second")


def as_sym_matrix(a, name="A"):
    """Validated float copy of a real symmetric matrix, exactly symmetrised."""
    m = np.array(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DomainError(f"{name} must be a nonempty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError(f"{name} has non-finite entries")
    scale = float(np.max(np.abs(m)))
    asym = float(np.max(np.abs(m - m.T)))
    if asym > SYMMETRY_RTOL * scale:
        raise DomainError(f"{name} is not symmetric: max |a_ij - a_ji| = {asym:.3g}")
    return 0.5 * (m + m.T)


def as_unit_vector(v, n=None, name="eta"):
    v = np.array(v, dtype=np.float64).ravel()
    if n is not None and v.size != n:
        raise DomainError(f"{name} has length {v.size}, expected {n}")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-12:
        raise DomainError(f"{name} must have unit norm, got {norm!r}")
    return v


@dataclass(frozen=True, eq=False)
class SpectralForm:
    """Ascending eigenvalues, orthonormal eigenvector columns and eigenvalue clusters."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    clusters: tuple[tuple[float, tuple[int, ...]], ...]
    sweeps: int = 0
    residual: float = 0.0

    @property
    def n(self):
        return self.eigenvalues.size

    @property
    def values(self):
        """One eigenvalue per cluster (the cluster mean)."""
        return np.array([lam for lam, _ in self.clusters])

    @cached_property
    def projections(self):
        out = []
        for _, idx in self.clusters:
            v = self.vectors[:, list(idx)]
            out.append(v @ v.T)
        return tuple(out)

    def weights(self, eta):
        """``<P_k eta, eta>`` per cluster."""
        eta = np.asarray(eta, dtype=np.float64)
        coords = self.vectors.T @ eta
        return np.array([float(np.sum(coords[list(idx)] ** 2)) for _, idx in self.clusters])

    def apply(self, values):
        """``sum values[k] P_k`` for per-cluster ``values``."""
        out = np.zeros((self.n, self.n))
        for val, p in zip(values, self.projections):
            out += val * p
        return 0.5 * (out + out.T)

    def reconstruct(self):
        return self.apply(self.values)


def _clusters(lam):
    tol = CLUSTER_RTOL * max(float(np.max(np.abs(lam))), np.finfo(float).tiny)
    groups = [[0]]
    for i in range(1, lam.size):
        if lam[i] - lam[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return tuple((float(np.mean(lam[g])), tuple(g)) for g in groups)


def eigendecompose(a, rel_tol=1e-12, max_sweeps=100) -> SpectralForm:
    """Cyclic Jacobi eigendecomposition of a symmetric matrix (``n <= 64``).

    Eigenvectors follow the sign convention "first nonzero component
    positive". Results are cached by matrix content and read-only.
    """
    if isinstance(a, SpectralForm):
        return a
    m = as_sym_matrix(a)
    if m.shape[0] > MAX_DIM:
        raise DomainError(f"dimension {m.shape[0]} exceeds {MAX_DIM}")
    return _eigendecompose(m.tobytes(), m.shape[0], float(rel_tol), int(max_sweeps))


@lru_cache(maxsize=64)
def _eigendecompose(raw, n, rel_tol, max_sweeps):
    m = np.frombuffer(raw, dtype=np.float64).reshape(n, n)
    diag, vecs, sweeps, off = kernels.jacobi_eigh(m, rel_tol, max_sweeps)
    if off > rel_tol * float(np.linalg.norm(m)):
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", off)
    order = np.argsort(diag, kind="stable")
    lam = np.asarray(diag)[order]
    v = np.asarray(vecs)[:, order]
    for k in range(v.shape[1]):
        nz = np.flatnonzero(np.abs(v[:, k]) > 1e-14)
        if nz.size and v[nz[0], k] < 0:
            v[:, k] = -v[:, k]
    lam.setflags(write=False)
    v.setflags(write=False)
    return SpectralForm(lam, v, _clusters(lam), int(sweeps), float(off))


def _check_spectrum(f: CoreFunction, sf: SpectralForm):
    bad = [lam for lam in sf.values if not f.contains(lam)]
    if bad:
        raise DomainError(f"{f.name}: eigenvalues {bad} outside domain {f.domain}")


def matrix_function(f: CoreFunction, a) -> np.ndarray:
    """``f(A) = sum f(lam_k) P_k``."""
    sf = eigendecompose(a)
    _check_spectrum(f, sf)
    return sf.apply(np.atleast_1d(f(sf.values)))


def _h_grid(h, lam, mu):
    if isinstance(h, Perspective):
        bad = [(float(l), float(m)) for l in lam for m in mu if not (l > 0 and m > 0)]
        if bad:
            raise DomainError(f"{h.name}: eigenpairs {bad[:5]} would need a boundary convention")
    try:
        with np.errstate(all="ignore"):
            grid = np.asarray(h(lam[:, None], mu[None, :]), dtype=np.float64)
    except DomainError as exc:
        raise DomainError(f"h undefined on the eigenvalue pairs: {exc}") from None
    grid = np.broadcast_to(grid, (lam.size, mu.size))
    if not np.all(np.isfinite(grid)):
        i, j = np.argwhere(~np.isfinite(grid))[0]
        raise DomainError(f"h is not finite at eigenpair ({lam[i]}, {mu[j]})")
    return grid


def two_variable_matrix_function(h, a, b) -> np.ndarray:
    """``h(A, B) = sum_ij h(lam_i, mu_j) P_i (x) Q_j`` of size ``nm``."""
    sa, sb = eigendecompose(a), eigendecompose(b)
    grid = _h_grid(h, sa.values, sb.values)
    out = np.zeros((sa.n * sb.n, sa.n * sb.n))
    for i, p in enumerate(sa.projections):
        for j, q in enumerate(sb.projections):
            out += grid[i, j] * np.kron(p, q)
    return 0.5 * (out + out.T)


def _form(m, v):
    return float(v @ m @ v)


def _positive_spectrum(sf, what):
    if np.any(sf.values <= 0):
        raise DomainError(f"{what} needs a positive spectrum, got eigenvalues {sf.values.tolist()}")


def _arg_side(kind, sf, a, eta):
    if kind is MeanKind.ARITHMETIC:
        return _form(a, eta)
    _positive_spectrum(sf, "geometric/harmonic argument side")
    if kind is MeanKind.GEOMETRIC:
        return math.exp(_form(sf.apply(np.log(sf.values)), eta))
    return 1.0 / _form(np.linalg.inv(a), eta)


def _value_side(kind, fa, log_fa, eta):
    if kind is MeanKind.ARITHMETIC:
        return _form(fa, eta)
    if log_fa is None:
        raise DomainError("f takes nonpositive values on the spectrum")
    if kind is MeanKind.GEOMETRIC:
        return math.exp(_form(log_fa, eta))
    return 1.0 / _form(np.linalg.inv(fa), eta)


def jensen_scalar_form(f: CoreFunction, variant, a, eta, tol=DEFAULT_TOL) -> Comparison:
    """Matrix Jensen inequality of type ``variant`` for ``f``, ``A`` and unit ``eta``.

    Argument side: ``<A eta, eta>``, ``exp <log A eta, eta>`` or
    ``<A^-1 eta, eta>^-1``; value side likewise with ``f(A)``.
    """
    pair = MeanPair.parse(variant)
    a = as_sym_matrix(a)
    sf = eigendecompose(a)
    eta = as_unit_vector(eta, sf.n)
    _check_spectrum(f, sf)
    fvals = np.atleast_1d(f(sf.values))
    fa = sf.apply(fvals)
    log_fa = sf.apply(np.log(fvals)) if np.all(fvals > 0) else None
    lhs = float(f(_arg_side(pair.arg_mean, sf, a, eta)))
    rhs = _value_side(pair.val_mean, fa, log_fa, eta)
    return Comparison(lhs, rhs, bool(leq(lhs, rhs, tol)))


def spectral_scalar_oracle(f: CoreFunction, variant, a, eta, tol=DEFAULT_TOL) -> Comparison:
    """The same inequality as scalar weighted means of the eigenvalues.

    Weights are ``<P_k eta, eta>``; points are the cluster eigenvalues.
    """
    sf = eigendecompose(a)
    # squared coordinates can overshoot 1 by an ulp
    w = np.clip(sf.weights(eta), 0.0, 1.0)
    return jensen_n_point(f, variant, sf.values, w / np.sum(w), tol)


def _mixed(h, sf, col_value):
    """``h(A, c) = sum h(lam_k, c) P_k`` for a scalar second argument."""
    return sf.apply(_h_grid(h, sf.values, np.array([col_value]))[:, 0])


def _mixed_second(h, c, sf):
    return sf.apply(_h_grid(h, np.array([c]), sf.values)[0, :])


def jensen_two_variable(h, hypothesis, a, b, eta, zeta, tol=DEFAULT_TOL):
    """Two-variable matrix Jensen inequality on the tensor product.

    Returns a :class:`Comparison` for the separately-typed hypotheses and a
    :class:`Chain` for the mixed-type ones.
    """
    if hypothesis not in TWO_VARIABLE_HYPOTHESES:
        raise ValueError(f"unknown hypothesis {hypothesis!r}; expected one of {TWO_VARIABLE_HYPOTHESES}")
    a, b = as_sym_matrix(a, "A"), as_sym_matrix(b, "B")
    sa, sb = eigendecompose(a), eigendecompose(b)
    eta = as_unit_vector(eta, sa.n, "eta")
    zeta = as_unit_vector(zeta, sb.n, "zeta")
    xi = np.kron(eta, zeta)
    grid = _h_grid(h, sa.values, sb.values)

    def tensor(values):
        out = np.zeros((xi.size, xi.size))
        for i, p in enumerate(sa.projections):
            for j, q in enumerate(sb.projections):
                out += values[i, j] * np.kron(p, q)
        return 0.5 * (out + out.T)

    def h_at(s, t):
        return float(_h_grid(h, np.array([s]), np.array([t]))[0, 0])

    if hypothesis == "separately_convex":
        lhs = h_at(_form(a, eta), _form(b, zeta))
        rhs = _form(tensor(grid), xi)
        return Comparison(lhs, rhs, bool(leq(lhs, rhs, tol)))
    if hypothesis == "separately_HH":
        lhs = h_at(_arg_side(MeanKind.HARMONIC, sa, a, eta), _arg_side(MeanKind.HARMONIC, sb, b, zeta))
        if np.any(grid <= 0):
            raise DomainError("h takes nonpositive values on the spectra")
        rhs = 1.0 / _form(tensor(1.0 / grid), xi)
        return Comparison(lhs, rhs, bool(leq(lhs, rhs, tol)))
    if hypothesis == "separately_GG":
        lhs = h_at(_arg_side(MeanKind.GEOMETRIC, sa, a, eta), _arg_side(MeanKind.GEOMETRIC, sb, b, zeta))
        if np.any(grid <= 0):
            raise DomainError("h takes nonpositive values on the spectra")
        rhs = math.exp(_form(tensor(np.log(grid)), xi))
        return Comparison(lhs, rhs, bool(leq(lhs, rhs, tol)))

    s, t = _form(a, eta), _form(b, zeta)
    lhs = h_at(s, t)
    full = _form(tensor(grid), xi)
    if hypothesis == "convex_first_convex_second":
        mid = _form(_mixed_second(h, s, sb), zeta)
        return Chain("h(<A eta, eta>, B) route", (
            make_link("h(<A eta,eta>, <B zeta,zeta>) <= <h(<A eta,eta>, B) zeta, zeta>", lhs, mid, tol=tol),
            make_link("<h(<A eta,eta>, B) zeta, zeta> <= <h(A,B) eta(x)zeta, eta(x)zeta>", mid, full, tol=tol),
        ))
    mixed = _mixed(h, sa, t)
    if np.any(np.linalg.eigvalsh(mixed) <= 0):
        raise DomainError("h(A, <B zeta, zeta>) is not positive definite")
    harmonic = 1.0 / _form(np.linalg.inv(mixed), eta)
    arithmetic = _form(mixed, eta)
    return Chain("h(A, <B zeta, zeta>) route", (
        make_link("h(<A eta,eta>, <B zeta,zeta>) <= <h(A, <B zeta,zeta>)^-1 eta, eta>^-1", lhs, harmonic, tol=tol),
        make_link("<h(A, <B zeta,zeta>)^-1 eta, eta>^-1 <= <h(A, <B zeta,zeta>) eta, eta>", harmonic, arithmetic, tol=tol),
        make_link("<h(A, <B zeta,zeta>) eta, eta> <= <h(A,B) eta(x)zeta, eta(x)zeta>", arithmetic, full, tol=tol),
    ))


def remark_scalar_product_case(r, a, b, eta, zeta, tol=DEFAULT_TOL) -> Comparison:
    """``<A^-1 eta,eta>^-r <B^-1 zeta,zeta>^(r-1) <= <(A^r (x) B^(1-r)) eta(x)zeta, eta(x)zeta>``."""
    r = float(r)
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"r must lie in [0, 1], got {r}")
    a, b = as_sym_matrix(a, "A"), as_sym_matrix(b, "B")
    sa, sb = eigendecompose(a), eigendecompose(b)
    _positive_spectrum(sa, "A")
    _positive_spectrum(sb, "B")
    eta = as_unit_vector(eta, sa.n, "eta")
    zeta = as_unit_vector(zeta, sb.n, "zeta")
    ha = _form(np.linalg.inv(a), eta)
    hb = _form(np.linalg.inv(b), zeta)
    lhs = ha ** (-r) * hb ** (r - 1.0)
    g = Perspective(catalog_lookup("power_r", r=r))
    rhs = _form(two_variable_matrix_function(g, sa, sb), np.kron(eta, zeta))
    return Comparison(lhs, rhs, bool(leq(lhs, rhs, tol)))


# ---------------------------------------------------------------- randomised suite

def random_symmetric(rng, n, lo, hi, degenerate=True):
    """``Q diag(lam) Q^T`` with ``lam`` in ``(lo, hi)``; repeated eigenvalues are planted.

    Returns ``(A, lam, Q)`` so that callers hold an independent ground truth.
    """
    k = int(rng.integers(1, n + 1)) if degenerate else n
    distinct = sample_interval(rng, lo, hi, k)
    lam = distinct[rng.permutation(np.r_[np.arange(k), rng.integers(0, k, size=n - k)])]
    q = random_orthogonal(rng, n)
    a = (q * lam) @ q.T
    return 0.5 * (a + a.T), lam, q


@dataclass(frozen=True)
class InvariantReport:
    reconstruction: float
    orthonormality: float
    completeness: float
    basis_independence: float

    @property
    def holds(self):
        return (self.reconstruction <= 1e-9 and self.orthonormality <= 1e-10
                and self.completeness <= 1e-10 and self.basis_independence <= 1e-8)


def spectral_invariants(a, lam_true, q_true, f: CoreFunction) -> InvariantReport:
    """Measured defects of the decomposition of ``A = Q diag(lam) Q^T``.

    ``basis_independence`` compares ``f(A)`` from the solver with
    ``Q diag(f(lam)) Q^T`` built from the planted, unrelated basis.
    """
    sf = eigendecompose(a)
    scale = max(float(np.max(np.abs(sf.eigenvalues))), 1e-300)
    recon = float(np.max(np.abs(sf.reconstruct() - a))) / scale
    ortho = float(np.max(np.abs(sf.vectors.T @ sf.vectors - np.eye(sf.n))))
    complete = float(np.max(np.abs(sum(sf.projections) - np.eye(sf.n))))
    fl = np.atleast_1d(f(lam_true))
    truth = (q_true * fl) @ q_true.T
    fa = matrix_function(f, sf)
    indep = float(np.max(np.abs(fa - truth))) / max(float(np.max(np.abs(fl))), 1e-300)
    return InvariantReport(recon, ortho, complete, indep)


# (core or two-variable function, A-spectrum box, B-spectrum box)
_POS = (0.1, 10.0)
_ABOVE, _BELOW = (1.0, 10.0), (0.1, 1.0)
_SMALL = (0.01, 0.1)


def _persp(name, r=None):
    return Perspective(catalog_lookup(name, r))


def _square_diff(t, s):
    return (t - s) ** 2


MATRIX_SUITES = {
    "jensen_AA": ("AA", [("kl", _POS), ("chi2", _POS), ("tv", _POS), ("exp", (-3.0, 3.0)), ("power_r:2", _POS)]),
    "jensen_AH": ("AH", [("inv_sqrt", _POS), ("geom_series", (0.01, 0.99))]),
    "jensen_AG": ("AG", [("power_r:-1", _POS), ("exp", _POS)]),
    "jensen_GA": ("GA", [("log1p", _POS), ("power_r:0.5", _POS)]),
    "jensen_GG": ("GG", [("exp", _POS), ("mobius", (0.01, 0.99))]),
    "jensen_GH": ("GH", [("inv_sqrt_log", (1.01, 10.0))]),
    "jensen_HG": ("HG", [("exp_power:1", (0.1, 5.0)), ("exp", _POS)]),
    "jensen_HH": ("HH", [("power_r:0.5", _POS), ("t_over_lnt", (1.01, 10.0))]),
}

TWO_VARIABLE_SUITES = {
    "tensor_convex": ("separately_convex", [
        ("persp[kl]", lambda: _persp("kl"), _POS, _POS),
        ("persp[chi2]", lambda: _persp("chi2"), _POS, _POS),
        ("(t-s)^2", lambda: _square_diff, (-5.0, 5.0), (-5.0, 5.0)),
    ]),
    "tensor_HH": ("separately_HH", [
        ("persp[power_r(0.5)]", lambda: _persp("power_r", 0.5), _POS, _POS),
        ("persp[t_over_lnt]", lambda: _persp("t_over_lnt"), _ABOVE, _BELOW),
    ]),
    "tensor_GG": ("separately_GG", [
        ("persp[exp]", lambda: _persp("exp"), _POS, _POS),
        ("persp[mobius]", lambda: _persp("mobius"), _SMALL, _BELOW),
    ]),
    "mixed_AH_first": ("AH_first_convex_second", [
        ("persp[inv_sqrt]", lambda: _persp("inv_sqrt"), _POS, _POS),
        ("persp[geom_series]", lambda: _persp("geom_series"), _SMALL, _BELOW),
    ]),
    "mixed_convex_first": ("convex_first_convex_second", [
        ("persp[inv_sqrt]", lambda: _persp("inv_sqrt"), _POS, _POS),
        ("persp[kl]", lambda: _persp("kl"), _POS, _POS),
    ]),
    "tensor_power_product": ("product", [("r uniform in [0,1]", None, _POS, _POS)]),
}


@dataclass(frozen=True)
class MatrixSuiteEntry:
    suite: str
    subject: str
    trials: int
    violations: int
    invariant_failures: int
    witness: dict | None = None

    def to_dict(self):
        return vars(self).copy()


@dataclass(frozen=True)
class MatrixSuiteReport:
    trials: int
    seed: int
    tolerance: float
    entries: tuple[MatrixSuiteEntry, ...] = field(default_factory=tuple)

    @property
    def violations(self):
        return sum(e.violations for e in self.entries)

    @property
    def invariant_failures(self):
        return sum(e.invariant_failures for e in self.entries)

    def to_dict(self):
        return {"trials": self.trials, "seed": self.seed, "tolerance": self.tolerance,
                "violations": self.violations, "invariant_failures": self.invariant_failures,
                "entries": [e.to_dict() for e in self.entries]}


def _holds(result):
    return result.holds


def _matrix_witness(a, eta, b=None, zeta=None, result=None):
    w = {"A": a.tolist(), "eta": eta.tolist()}
    if b is not None:
        w.update({"B": b.tolist(), "zeta": zeta.tolist()})
    if result is not None:
        w["result"] = result._asdict() if hasattr(result, "_asdict") else result.to_dict()
    return w


def _run_entry(check, trials, seed, jobs):
    def chunk(rng, start, stop):
        bad = inv_bad = 0
        witness = None
        for _ in range(start, stop):
            ok, inv_ok, w = check(rng)
            bad += not ok
            inv_bad += not inv_ok
            if witness is None and not (ok and inv_ok):
                witness = w
        return bad, inv_bad, witness

    parts = run_chunks(chunk, trials, seed, jobs)
    return (sum(p[0] for p in parts), sum(p[1] for p in parts),
            next((p[2] for p in parts if p[2] is not None), None))


def _resolve(core_id):
    name, _, r = core_id.partition(":")
    return catalog_lookup(name, float(r) if r else None)


def _scalar_check(f, variant, box, max_n, tol):
    def check(rng):
        n = int(rng.integers(1, max_n + 1))
        a, lam, q = random_symmetric(rng, n, *box)
        eta = random_unit(rng, n)
        res = jensen_scalar_form(f, variant, a, eta, tol)
        inv = spectral_invariants(a, lam, q, f)
        return res.holds, inv.holds, _matrix_witness(a, eta, result=res)
    return check


def _two_variable_check(h, hypothesis, box_a, box_b, max_n, tol):
    def check(rng):
        n = int(rng.integers(1, max_n + 1))
        m = int(rng.integers(1, max_n + 1))
        a, lam, qa = random_symmetric(rng, n, *box_a)
        b, mu, qb = random_symmetric(rng, m, *box_b)
        eta, zeta = random_unit(rng, n), random_unit(rng, m)
        if hypothesis == "product":
            r = float(rng.random())
            res = remark_scalar_product_case(r, a, b, eta, zeta, tol)
            hh = _persp("power_r", r)
        else:
            res = jensen_two_variable(h, hypothesis, a, b, eta, zeta, tol)
            hh = h
        # tensor-level basis independence against the planted bases
        q = np.kron(qa, qb)
        truth = (q * _h_grid(hh, lam, mu).ravel()) @ q.T
        got = two_variable_matrix_function(hh, a, b)
        scale = max(float(np.max(np.abs(truth))), 1e-300)
        inv_ok = (float(np.max(np.abs(got - truth))) / scale <= 1e-8
                  and spectral_invariants(a, lam, qa, catalog_lookup("power_r", r=1.0)
                                          if box_a[0] >= 0 else _identity()).holds)
        return res.holds, inv_ok, _matrix_witness(a, eta, b, zeta, res)
    return check


def _identity():
    return CoreFunction(lambda t: t, (-math.inf, math.inf), None, 1.0, "id")


def randomized_matrix_suite(trials=1000, seed=0, suites=None, max_n=6, tol=DEFAULT_TOL,
                            jobs=1) -> MatrixSuiteReport:
    """Seeded random instances for every matrix inequality.

    Spectra are drawn per subject so they stay inside its domain, with
    repeated eigenvalues planted at random. Spectral invariants are
    measured on every instance.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    entries = []
    for suite, (variant, subjects) in MATRIX_SUITES.items():
        if suites is not None and suite not in suites:
            continue
        for core_id, box in subjects:
            f = _resolve(core_id)
            v, i, w = _run_entry(_scalar_check(f, variant, box, max_n, tol), trials, seed, jobs)
            entries.append(MatrixSuiteEntry(suite, f.name, trials, v, i, w))
    for suite, (hypothesis, subjects) in TWO_VARIABLE_SUITES.items():
        if suites is not None and suite not in suites:
            continue
        for label, make, box_a, box_b in subjects:
            h = None if make is None else make()
            check = _two_variable_check(h, hypothesis, box_a, box_b, max_n, tol)
            v, i, w = _run_entry(check, trials, seed, jobs)
            entries.append(MatrixSuiteEntry(suite, label, trials, v, i, w))
    return MatrixSuiteReport(trials, seed, tol, tuple(entries))
