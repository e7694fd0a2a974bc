"""Compiled inner loops for the threshold solvers.

All kernels are nopython/nogil so worker threads can overlap, and none uses
fastmath: the accumulation order is part of the contract (results must be
bit-identical across worker counts and, for the block-parallel solver,
across block lengths on integer-valued losses).
"""

from __future__ import annotations

import numpy as np
from numba import njit

# ---------------------------------------------------------------------------
# preparation: loss matrix M[j, k] = sum_l counts[j, l] * table[k, l]
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def loss_matrix_rows(counts, table, out, row_lo, row_hi):
    """Fill out[row_lo:row_hi] with the per-unique-score loss totals.

    The inner accumulation order over l is fixed, so any row partition
    (and hence any worker count) produces bit-identical results even for
    fractional tables.
    """
    n_classes = table.shape[0]
    for j in range(row_lo, row_hi):
        for k in range(n_classes):
            acc = 0.0
            for l in range(n_classes):
                c = counts[j, l]
                if c != 0:
                    acc += c * table[k, l]
            out[j, k] = acc


# ---------------------------------------------------------------------------
# dynamic-programming solver
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def dp_forward(m, cost):
    """cost[j, k] = min over nondecreasing labelings of rows <= j ending at k."""
    n_rows, n_classes = m.shape
    for k in range(n_classes):
        cost[0, k] = m[0, k]
    for j in range(1, n_rows):
        running = np.inf
        for k in range(n_classes):
            v = cost[j - 1, k]
            if v < running:
                running = v
            cost[j, k] = running + m[j, k]


@njit(cache=True, nogil=True)
def dp_backtrack(cost, idx_out):
    """Recover candidate indices (0-based into the N+1 candidates) from cost.

    Ties are broken toward the smallest class index at every argmin, making
    the output deterministic.
    """
    n_rows, n_classes = cost.shape
    top = 0
    best = np.inf
    for k in range(n_classes):
        if cost[n_rows - 1, k] < best:
            best = cost[n_rows - 1, k]
            top = k
    for k in range(top, n_classes - 1):
        idx_out[k] = n_rows  # candidate above every score
    for j in range(n_rows - 2, -1, -1):
        cut = 0
        best = np.inf
        for k in range(top + 1):
            if cost[j, k] < best:
                best = cost[j, k]
                cut = k
        if cut != top:
            for k in range(cut, top):
                idx_out[k] = j + 1
            top = cut
    for k in range(top):
        idx_out[k] = 0  # candidate below every score


# ---------------------------------------------------------------------------
# independent-optimization solver
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def io_columns(mt, col_lo, col_hi, r, idx_out):
    """Per-threshold independent minimization for columns [col_lo, col_hi).

    Fills row k of `r` with the prefix vector (r[k, 0] = 0 and
    r[k, j+1] = r[k, j] + m[j, k] - m[j, k+1]) and sets idx_out[k] to its
    first minimizer.  Distinct column ranges touch disjoint slots, so any
    number of workers may run ranges concurrently.
    """
    n_rows = mt.shape[1]
    for k in range(col_lo, col_hi):
        m1 = mt[k]
        m2 = mt[k + 1]
        row = r[k]
        row[0] = 0.0
        s = 0.0
        for j in range(n_rows):
            s += m1[j] - m2[j]
            row[j + 1] = s
        best = np.inf
        bj = 0
        for j in range(n_rows + 1):
            if row[j] < best:
                best = row[j]
                bj = j
        idx_out[k] = bj


# ---------------------------------------------------------------------------
# block-parallel independent-optimization solver
# ---------------------------------------------------------------------------
#
# Phase 1 scans each block of the column prefix independently: the block's
# local prefix values start from 0, so it records the block total plus the
# local minimum and its first position.  The phase-2 offset is constant
# within a block, which means the block's argmin position is unaffected by
# it; phase 2 only adds offsets to the recorded minima and merges blocks in
# order, preserving the global first-minimum tie rule.


@njit(cache=True, nogil=True)
def pio_phase1(mt, k, block_len, l_lo, l_hi, totals, mins, argmins):
    """Block-local prefix stats for blocks [l_lo, l_hi) of column k.

    Full blocks are processed four at a time; the chains are independent,
    which is where the block decomposition buys speed even on one core.
    """
    np1 = mt.shape[1] + 1
    m1 = mt[k]
    m2 = mt[k + 1]
    n_full = np1 // block_len
    l = l_lo
    stop4 = min(l_hi, n_full)
    while l + 4 <= stop4:
        b0 = l * block_len
        b1 = b0 + block_len
        b2 = b1 + block_len
        b3 = b2 + block_len
        s0 = 0.0
        s1 = 0.0
        s2 = 0.0
        s3 = 0.0
        v0 = 0.0
        v1 = 0.0
        v2 = 0.0
        v3 = 0.0
        i0 = b0
        i1 = b1
        i2 = b2
        i3 = b3
        for j in range(1, block_len):
            s0 += m1[b0 + j - 1] - m2[b0 + j - 1]
            s1 += m1[b1 + j - 1] - m2[b1 + j - 1]
            s2 += m1[b2 + j - 1] - m2[b2 + j - 1]
            s3 += m1[b3 + j - 1] - m2[b3 + j - 1]
            if s0 < v0:
                v0 = s0
                i0 = b0 + j
            if s1 < v1:
                v1 = s1
                i1 = b1 + j
            if s2 < v2:
                v2 = s2
                i2 = b2 + j
            if s3 < v3:
                v3 = s3
                i3 = b3 + j
        mins[l] = v0
        mins[l + 1] = v1
        mins[l + 2] = v2
        mins[l + 3] = v3
        argmins[l] = i0
        argmins[l + 1] = i1
        argmins[l + 2] = i2
        argmins[l + 3] = i3
        totals[l] = s0 + (m1[b0 + block_len - 1] - m2[b0 + block_len - 1])
        totals[l + 1] = s1 + (m1[b1 + block_len - 1] - m2[b1 + block_len - 1])
        totals[l + 2] = s2 + (m1[b2 + block_len - 1] - m2[b2 + block_len - 1])
        totals[l + 3] = s3 + (m1[b3 + block_len - 1] - m2[b3 + block_len - 1])
        l += 4
    while l < l_hi:
        base = l * block_len
        end = min(base + block_len, np1)
        s = 0.0
        v = 0.0
        i = base
        for j in range(base + 1, end):
            s += m1[j - 1] - m2[j - 1]
            if s < v:
                v = s
                i = j
        mins[l] = v
        argmins[l] = i
        if end < np1:
            totals[l] = s + (m1[end - 1] - m2[end - 1])
        else:
            totals[l] = 0.0
        l += 1


@njit(cache=True, nogil=True)
def pio_phase2(totals, mins, argmins, n_blocks):
    """Offset scan over block totals plus ordered merge of block minima.

    The running offset is the exclusive left-to-right sum of block totals
    (algebraically the direct offset formula); merging blocks in ascending
    order with strict < keeps the smallest index among tied minima.
    """
    offset = 0.0
    best = np.inf
    bj = 0
    for l in range(n_blocks):
        v = mins[l] + offset
        if v < best:
            best = v
            bj = argmins[l]
        offset += totals[l]
    return bj


# ---------------------------------------------------------------------------
# risk evaluation and the brute-force oracle
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def risk_of_sorted_indices(m, idx_sorted):
    """n-scaled risk of thresholds at the given sorted candidate indices.

    Row j gets label 1 + #{k : idx[k] <= j}; the sweep is O(N + K).
    """
    n_rows = m.shape[0]
    n_thresh = idx_sorted.shape[0]
    total = 0.0
    pos = 0
    for j in range(n_rows):
        while pos < n_thresh and idx_sorted[pos] <= j:
            pos += 1
        total += m[j, pos]
    return total


@njit(cache=True, nogil=True)
def brute_force_search(cum, n_rows, n_classes, best_idx):
    """Exhaustive scan of all nondecreasing candidate-index tuples.

    `cum` holds per-class prefix sums of the loss matrix:
    cum[j, k] = sum of m[0:j, k].  Enumeration is lexicographic and ties
    keep the first (smallest) tuple.  Returns the minimal risk sum.
    """
    n_thresh = n_classes - 1
    idx = np.zeros(n_thresh, dtype=np.int64)
    best = np.inf
    while True:
        # direct evaluation: label-m segment is rows [idx[m-1], idx[m])
        risk = 0.0
        prev = 0
        for k in range(n_thresh):
            cur = idx[k]
            risk += cum[cur, k] - cum[prev, k]
            prev = cur
        risk += cum[n_rows, n_classes - 1] - cum[prev, n_classes - 1]
        if risk < best:
            best = risk
            for k in range(n_thresh):
                best_idx[k] = idx[k]
        # advance the odometer (nondecreasing tuples, lexicographic order)
        p = n_thresh - 1
        while p >= 0 and idx[p] == n_rows:
            p -= 1
        if p < 0:
            return best
        idx[p] += 1
        for q in range(p + 1, n_thresh):
            idx[q] = idx[p]
