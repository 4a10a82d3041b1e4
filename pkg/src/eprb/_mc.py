"""Chunked Monte Carlo reductions with worker-count-invariant results.

Sums are accumulated serially inside fixed-size chunks and the per-chunk
partial sums are folded in chunk order by a single combiner. Workers only
ever compute whole chunks, so the float operation sequence, and therefore
every bit of the result, is independent of how many threads ran. The
compiled kernels release the GIL, which is what makes threads worthwhile.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

CHUNK_SIZE = 4096


def chunk_ranges(n):
    """Contiguous (start, count) chunks covering range(n)."""
    return [(s, min(CHUNK_SIZE, n - s)) for s in range(0, n, CHUNK_SIZE)]


def _run_group(job, group):
    return [job(start, count) for start, count in group]


def run_chunk_jobs(job, n, workers=1):
    """Run ``job(start, count)`` over every chunk, in chunk order.

    Results come back as a list ordered by chunk index regardless of
    ``workers``. Exceptions surface in chunk order too: the serial path
    stops at the first failing chunk, and the threaded path raises the
    earliest-submitted group's error first.
    """
    ranges = chunk_ranges(n)
    if workers <= 1 or len(ranges) == 1:
        return _run_group(job, ranges)
    nworkers = min(workers, len(ranges))
    # Contiguous groups keep error ordering aligned with chunk order.
    per = -(-len(ranges) // nworkers)
    groups = [ranges[k:k + per] for k in range(0, len(ranges), per)]
    parts = []
    with ThreadPoolExecutor(max_workers=len(groups)) as pool:
        futures = [pool.submit(_run_group, job, g) for g in groups]
        for fut in futures:
            parts.extend(fut.result())
    return parts


def combine_scalar(parts, n):
    """Fold per-chunk (sum, sum_sq, min, max) into (mean, stderr)."""
    s = 0.0
    s2 = 0.0
    mn = math.inf
    mx = -math.inf
    for ps, ps2, pmn, pmx in parts:
        s += ps
        s2 += ps2
        if pmn < mn:
            mn = pmn
        if pmx > mx:
            mx = pmx
    return _finalize(s, s2, mn, mx, n)


def combine_vec4(parts, n):
    """Fold per-chunk 4-way accumulators into four (mean, stderr) pairs."""
    s = [0.0, 0.0, 0.0, 0.0]
    s2 = [0.0, 0.0, 0.0, 0.0]
    mn = [math.inf] * 4
    mx = [-math.inf] * 4
    for ps, ps2, pmn, pmx in parts:
        for k in range(4):
            s[k] += ps[k]
            s2[k] += ps2[k]
            if pmn[k] < mn[k]:
                mn[k] = pmn[k]
            if pmx[k] > mx[k]:
                mx[k] = pmx[k]
    return [_finalize(s[k], s2[k], mn[k], mx[k], n) for k in range(4)]


def _finalize(s, s2, mn, mx, n):
    mean = s / n
    if mn == mx:
        # Constant sample: the unbiased variance is exactly zero, and the
        # cancellation-prone formula below must not manufacture noise.
        return mean, 0.0
    var = (s2 - (s * s) / n) / (n - 1)
    if var < 0.0:
        var = 0.0
    return mean, math.sqrt(var / n)


def scalar_job_from_index_fn(value_at):
    """Wrap a per-index value function into a chunk job.

    The accumulation order matches the compiled kernels: serial sum,
    sum of squares, running min/max.
    """

    def job(start, count):
        s = 0.0
        s2 = 0.0
        mn = math.inf
        mx = -math.inf
        for i in range(start, start + count):
            x = value_at(i)
            s += x
            s2 += x * x
            if x < mn:
                mn = x
            if x > mx:
                mx = x
        return s, s2, mn, mx

    return job


def vec4_job_from_index_fn(values_at):
    """Same as scalar_job_from_index_fn for 4-tuples of values."""

    def job(start, count):
        s = [0.0, 0.0, 0.0, 0.0]
        s2 = [0.0, 0.0, 0.0, 0.0]
        mn = [math.inf] * 4
        mx = [-math.inf] * 4
        for i in range(start, start + count):
            xs = values_at(i)
            for k in range(4):
                x = xs[k]
                s[k] += x
                s2[k] += x * x
                if x < mn[k]:
                    mn[k] = x
                if x > mx[k]:
                    mx[k] = x
        return tuple(s), tuple(s2), tuple(mn), tuple(mx)

    return job
