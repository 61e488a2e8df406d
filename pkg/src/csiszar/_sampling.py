"""Seeded, chunked sampling shared by every randomized check.

Trials are cut into fixed-size chunks; chunk ``k`` draws from its own stream
``SeedSequence([seed, k])``. Results therefore do not depend on how many
workers evaluate the chunks.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

CHUNK = 1024


def chunk_plan(trials, chunk=CHUNK):
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    return [(k, start, min(start + chunk, trials)) for k, start in enumerate(range(0, trials, chunk))]


def chunk_rng(seed, index):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(index)])))


def run_chunks(fn, trials, seed, jobs=1):
    """Call ``fn(rng, start, stop)`` per chunk and return results in chunk order."""
    plan = chunk_plan(trials)
    tasks = [(chunk_rng(seed, k), start, stop) for k, start, stop in plan]
    if jobs <= 1 or len(tasks) == 1:
        return [fn(*task) for task in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda task: fn(*task), tasks))


def sample_interval(rng, lo, hi, size):
    """Points strictly inside ``(lo, hi)``: log-uniform when ``lo > 0``, else uniform."""
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise ValueError(f"need a finite nonempty interval, got ({lo}, {hi})")
    u = rng.random(size)
    if lo > 0:
        out = np.exp(math.log(lo) + u * (math.log(hi) - math.log(lo)))
    else:
        out = lo + u * (hi - lo)
    return np.clip(out, np.nextafter(lo, math.inf), np.nextafter(hi, -math.inf))


def interval_grid(lo, hi, k):
    """``k`` deterministic interior points, log-spaced when ``lo > 0``."""
    frac = (np.arange(k) + 0.5) / k
    if lo > 0:
        return np.exp(math.log(lo) + frac * (math.log(hi) - math.log(lo)))
    return lo + frac * (hi - lo)


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))


def random_unit(rng, n):
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)
