"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line; the lines are also
collected and repeated in the terminal summary. Run directly with
``python tests/test_acceptance.py`` for the lines alone.
"""
import io
import math
import time

import numpy as np
import pytest

from csiszar import convexity_lab as lab
from csiszar import divergence as dv
from csiszar import expr_parser as ep
from csiszar import matrix_jensen as mj
from csiszar import perspective_inequalities as pi
from csiszar._checks import close
from csiszar._sampling import random_unit, sample_interval
from csiszar.cli import main
from csiszar.core_functions import catalog_lookup
from csiszar.errors import ParseError

pytestmark = pytest.mark.acceptance

RESULTS = []


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def agree(x, y, tol):
    """``|x - y| <= tol * max(|x|, |y|, 1)``, the same scale as the inequality checks."""
    return abs(x - y) <= tol * max(abs(x), abs(y), 1.0)


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


# ---------------------------------------------------------------- 1

def test_criterion_1_counterexample():
    s2 = math.sqrt(2.0)
    lhs_cf, rhs_cf = 3 * math.sqrt(3.0), 16 * s2 / (4 + s2)
    pi.paper_counterexample()
    elapsed = min(timed(pi.paper_counterexample)[1] for _ in range(20))
    c = pi.paper_counterexample()
    out, err = io.StringIO(), io.StringIO()
    code = main(["verify", "counterexample"], out, err)
    ok = (close(c.lhs, lhs_cf, 1e-12) and close(c.rhs, rhs_cf, 1e-12) and c.lhs > c.rhs
          and code == 0 and "PASS" in out.getvalue() and elapsed < 1e-3)
    assert record(1, "counterexample", ok,
                  f"lhs={c.lhs!r} rhs={c.rhs!r} exit={code} runtime={elapsed * 1e3:.3f} ms")


# ---------------------------------------------------------------- 2

POS = (0.01, 100.0)
UNIT = (0.01, 0.99)
CATALOG_FACTS = [
    ("hellinger", None, "GG", POS),
    ("inv_sqrt", None, "AH", POS),
    ("exp", None, "AG", POS),
    ("exp", None, "GG", POS),
    ("power_r", -0.5, "AG", POS),
    ("power_r", -1.0, "AG", POS),
    ("power_r", -2.0, "AG", POS),
    ("power_r", 0.0, "HH", POS),
    ("power_r", 0.5, "HH", POS),
    ("power_r", 1.0, "HH", POS),
    ("log1p", None, "GA", POS),
    ("geom_series", None, "GG", UNIT),
    ("mobius", None, "GG", UNIT),
]


def test_criterion_2_catalog_classification():
    t0 = time.perf_counter()
    failed = []
    for name, r, pair, interval in CATALOG_FACTS:
        rep = lab.check_mn_convexity(catalog_lookup(name, r), pair, interval, trials=10_000, seed=0)
        if rep.verdict is not lab.Verdict.HOLDS:
            label = name if r is None else f"{name}({r:g})"
            failed.append(f"{label}/{pair}={rep.verdict.value}")
    elapsed = time.perf_counter() - t0
    ok = not failed and elapsed < 10.0
    detail = f"{len(CATALOG_FACTS) - len(failed)}/{len(CATALOG_FACTS)} facts hold, runtime={elapsed:.2f} s"
    if failed:
        detail += "; not reproduced: " + ", ".join(failed)
    assert record(2, "catalog classification", ok, detail)


# ---------------------------------------------------------------- 3

def test_criterion_3_subadditivity_and_joint_convexity():
    res, elapsed = timed(dv.subadditivity_suite, ("kl", "tv", "hellinger", "chi2"),
                         trials=10_000, seed=0, tol=1e-9)
    total = sum(r.violations for r in res)
    ok = total == 0 and all(r.trials == 10_000 for r in res) and elapsed < 5.0
    assert record(3, "divergence subadditivity / joint convexity", ok,
                  f"violations={total} over 4 cores x 10^4, runtime={elapsed:.2f} s")


# ---------------------------------------------------------------- 4

def test_criterion_4_perspective_transfer():
    pairings = (("hellinger", "iii"), ("power_r:0.5", "iv"), ("inv_sqrt", "i"))
    rep, elapsed = timed(pi.randomized_suite_thm23_24, trials=10_000, seed=42,
                         pairings23=pairings, pairings24=(), tol=1e-9)
    per = ", ".join(f"{e.core}/{e.part}={e.violations}" for e in rep.entries)
    total = sum(e.violations for e in rep.entries)
    ok = total == 0 and elapsed < 5.0
    assert record(4, "perspective transfer suite", ok,
                  f"violations={total} ({per}), runtime={elapsed:.2f} s")


# ---------------------------------------------------------------- 5

def test_criterion_5_sum_chains():
    rep, elapsed = timed(pi.randomized_suite_thm23_24, trials=1000, seed=0, pairings23=(),
                         pairings24=pi.DEFAULT_THM24_PAIRINGS, tol=1e-9)
    parts = {e.part for e in rep.entries if e.confirmed}
    total = sum(e.violations for e in rep.entries)
    per = ", ".join(f"{e.core}/{e.part}={e.violations}" for e in rep.entries)
    ok = total == 0 and parts == set(pi.THM24_PARTS) and elapsed < 5.0
    assert record(5, "sum-inequality chains", ok,
                  f"violations={total} ({per}), parts with matched core={sorted(parts)}, runtime={elapsed:.2f} s")


# ---------------------------------------------------------------- 6

def test_criterion_6_spectral_reduction():
    rng = np.random.default_rng(0)
    t0 = time.perf_counter()
    mismatches = 0
    checked = 0
    for variant, subjects in mj.MATRIX_SUITES.values():
        name, box = subjects[0]
        core, _, r = name.partition(":")
        f = catalog_lookup(core, float(r) if r else None)
        for _ in range(1000):
            n = int(rng.integers(1, 9))
            a, _, _ = mj.random_symmetric(rng, n, *box)
            eta = random_unit(rng, n)
            m = mj.jensen_scalar_form(f, variant, a, eta)
            s = mj.spectral_scalar_oracle(f, variant, a, eta)
            checked += 1
            if not (agree(m.lhs, s.lhs, 1e-10) and agree(m.rhs, s.rhs, 1e-10)):
                mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 10.0
    assert record(6, "matrix/scalar spectral reduction", ok,
                  f"mismatches={mismatches}/{checked} (10^3 per variant, n<=8), runtime={elapsed:.2f} s")


# ---------------------------------------------------------------- 7

def test_criterion_7_matrix_suites():
    rep, elapsed = timed(mj.randomized_matrix_suite, trials=1000, seed=0, max_n=6, tol=1e-9)
    ok = rep.violations == 0 and rep.invariant_failures == 0 and elapsed < 60.0
    assert record(7, "matrix suites", ok,
                  f"entries={len(rep.entries)} violations={rep.violations} "
                  f"invariant_failures={rep.invariant_failures}, runtime={elapsed:.2f} s")


# ---------------------------------------------------------------- 8

DSL_CORES = [
    ("kl", "t*ln(t)"),
    ("tv", "abs(t-1)"),
    ("hellinger", "2*(sqrt(t)-1)^2"),
    ("chi2", "(t-1)^2"),
    ("inv_sqrt", "1/sqrt(t)"),
]
MALFORMED = [
    ("t**2", 2), ("", 0), ("t+", 2), ("(t", 2), ("t)", 1), ("foo(t)", 0),
    ("sqrt t", 5), ("2..3", 2), ("t $ 1", 2), ("ln()", 3), ("t^", 2), ("-", 1),
    ("t t", 2), ("sqrt(t", 6), ("1e999", 0),
]


def test_criterion_8_parser_conformance():
    rng = np.random.default_rng(0)
    t = sample_interval(rng, 1e-6, 1e6, 1000)
    bad_cores = []
    for name, src in DSL_CORES:
        compiled = ep.compile(src)(t)
        native = catalog_lookup(name)(t)
        if not np.all(close(compiled, native, 1e-12) | (compiled == native)):
            bad_cores.append(name)
    bad_offsets = []
    for src, offset in MALFORMED:
        try:
            ep.parse(src)
            bad_offsets.append(f"{src!r}: no error")
        except ParseError as exc:
            if exc.offset != offset:
                bad_offsets.append(f"{src!r}: offset {exc.offset} != {offset}")
    ok = not bad_cores and not bad_offsets
    detail = (f"{len(DSL_CORES) - len(bad_cores)}/{len(DSL_CORES)} cores agree on 10^3 points, "
              f"{len(MALFORMED) - len(bad_offsets)}/{len(MALFORMED)} malformed inputs at the right offset")
    if bad_cores or bad_offsets:
        detail += "; " + "; ".join(bad_cores + bad_offsets)
    assert record(8, "parser conformance", ok, detail)


if __name__ == "__main__":
    for fn in [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]:
        try:
            fn()
        except AssertionError:
            pass
