"""Hot inner loops of merge training, in two interchangeable backends.

Token sequences live in one flat int32 array partitioned by a ``bounds``
offset array (sequence ``s`` spans ``flat[bounds[s]:bounds[s+1]]``, every
sequence non-empty), with one integer weight per sequence. Adjacent token
pairs are packed into a single int64 code, ``(left << 32) | right``.

Two implementations exist: numba-jitted loops and a vectorized pure-numpy
fallback. They produce identical results; selection is controlled by the
``BYTEBPE_JIT`` environment variable ("1"/"on" requires numba, "0"/"off"
forces numpy, unset picks numba when importable).
"""

from __future__ import annotations

import os
from typing import Callable, NamedTuple

import numpy as np

try:
    from numba import njit, types
    from numba.typed import Dict

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False


def pack_pair(left: int, right: int) -> int:
    return (left << 32) | right


def unpack_pair(code: int) -> tuple[int, int]:
    return code >> 32, code & 0xFFFFFFFF


class Kernels(NamedTuple):
    """One backend: a name plus the two training kernels.

    pair_counts(flat, bounds, weights, lo, hi) -> (codes, counts)
        Weighted adjacent-pair counts over sequences lo..hi-1.
    merge_pair(flat, bounds, weights, left, right, new_id)
        -> (new_flat, new_bounds, delta_codes, delta_counts)
        Replaces every left/right adjacency (left-to-right, non-overlapping)
        with new_id and reports the net change of every affected pair count.
    """

    name: str
    pair_counts: Callable
    merge_pair: Callable


# ---------------------------------------------------------------------------
# numpy fallback


def _pair_counts_np(flat, bounds, weights, lo, hi):
    b0, b1 = bounds[lo], bounds[hi]
    seg = flat[b0:b1].astype(np.int64)
    if len(seg) < 2:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    codes = (seg[:-1] << 32) | seg[1:]
    lens = np.diff(bounds[lo : hi + 1])
    pos_w = np.repeat(weights[lo:hi], lens)[:-1]
    valid = np.ones(len(seg) - 1, bool)
    last = np.cumsum(lens) - 1  # final position of each sequence starts no pair
    valid[last[last < len(valid)]] = False
    if not valid.any():
        return np.empty(0, np.int64), np.empty(0, np.int64)
    uniq, inv = np.unique(codes[valid], return_inverse=True)
    counts = np.bincount(inv, weights=pos_w[valid].astype(np.float64))
    return uniq, counts.astype(np.int64)


def _pair_codes_masked(flat, bounds, lens, seq_mask):
    """Pair codes of sequences selected by seq_mask, with per-pair weights mask."""
    n = len(flat)
    codes = (flat[:-1].astype(np.int64) << 32) | flat[1:]
    valid = np.ones(n - 1, bool)
    last = bounds[1:] - 1
    valid[last[(last >= 0) & (last < n - 1)]] = False
    pos_sel = np.repeat(seq_mask, lens)
    return codes, valid & pos_sel[:-1]


def _merge_pair_np(flat, bounds, weights, left, right, new_id):
    n = len(flat)
    empty = np.empty(0, np.int64)
    if n < 2:
        return flat.copy(), bounds.copy(), empty, empty
    lens = np.diff(bounds)
    hit = (flat[:-1] == left) & (flat[1:] == right)
    last = bounds[1:] - 1
    hit[last[last < n - 1]] = False
    idx = np.flatnonzero(hit)
    if idx.size == 0:
        return flat, bounds, empty, empty

    # Left-to-right non-overlapping: in every run of consecutive matches
    # (possible only when left == right), keep the 1st, 3rd, ... match.
    run_start = np.where(np.r_[True, np.diff(idx) != 1], np.arange(idx.size), -1)
    run_start = np.maximum.accumulate(run_start)
    idx = idx[(np.arange(idx.size) - run_start) % 2 == 0]

    seq_of = np.searchsorted(bounds, idx, side="right") - 1
    changed = np.zeros(len(lens), bool)
    changed[seq_of] = True
    pos_w = np.repeat(weights, lens)

    old_codes, old_mask = _pair_codes_masked(flat, bounds, lens, changed)
    old_codes = old_codes[old_mask]
    old_w = pos_w[:-1][old_mask]

    out = flat.copy()
    out[idx] = new_id
    drop = np.zeros(n, bool)
    drop[idx + 1] = True
    out = out[~drop]
    new_lens = lens - np.bincount(seq_of, minlength=len(lens))
    new_bounds = np.zeros(len(bounds), np.int64)
    np.cumsum(new_lens, out=new_bounds[1:])

    if len(out) >= 2:
        new_codes, new_mask = _pair_codes_masked(out, new_bounds, new_lens, changed)
        new_codes = new_codes[new_mask]
        new_w = np.repeat(weights, new_lens)[:-1][new_mask]
    else:
        new_codes = new_w = empty

    dcodes = np.concatenate([old_codes, new_codes])
    dvals = np.concatenate([-old_w, new_w])
    uniq, inv = np.unique(dcodes, return_inverse=True)
    net = np.bincount(inv, weights=dvals.astype(np.float64)).astype(np.int64)
    nz = net != 0
    return out, new_bounds, uniq[nz], net[nz]


# ---------------------------------------------------------------------------
# numba backend

if HAS_NUMBA:

    @njit(cache=True, nogil=True)
    def _pair_counts_jit(flat, bounds, weights, lo, hi):
        d = Dict.empty(types.int64, types.int64)
        for s in range(lo, hi):
            w = weights[s]
            for i in range(bounds[s], bounds[s + 1] - 1):
                code = (np.int64(flat[i]) << 32) | np.int64(flat[i + 1])
                d[code] = d.get(code, 0) + w
        codes = np.empty(len(d), np.int64)
        counts = np.empty(len(d), np.int64)
        k = 0
        for code, c in d.items():
            codes[k] = code
            counts[k] = c
            k += 1
        return codes, counts

    @njit(cache=True, nogil=True)
    def _merge_pair_jit(flat, bounds, weights, left, right, new_id):
        out = np.empty_like(flat)
        new_bounds = np.empty_like(bounds)
        new_bounds[0] = 0
        deltas = Dict.empty(types.int64, types.int64)
        k = 0
        for s in range(len(bounds) - 1):
            b, e = bounds[s], bounds[s + 1]
            found = False
            for i in range(b, e - 1):
                if flat[i] == left and flat[i + 1] == right:
                    found = True
                    break
            if not found:
                for i in range(b, e):
                    out[k] = flat[i]
                    k += 1
                new_bounds[s + 1] = k
                continue
            w = weights[s]
            for i in range(b, e - 1):
                code = (np.int64(flat[i]) << 32) | np.int64(flat[i + 1])
                deltas[code] = deltas.get(code, 0) - w
            start = k
            i = b
            while i < e:
                if i < e - 1 and flat[i] == left and flat[i + 1] == right:
                    out[k] = new_id
                    k += 1
                    i += 2
                else:
                    out[k] = flat[i]
                    k += 1
                    i += 1
            for j in range(start, k - 1):
                code = (np.int64(out[j]) << 32) | np.int64(out[j + 1])
                deltas[code] = deltas.get(code, 0) + w
            new_bounds[s + 1] = k
        dcodes = np.empty(len(deltas), np.int64)
        dvals = np.empty(len(deltas), np.int64)
        m = 0
        for code, v in deltas.items():
            if v != 0:
                dcodes[m] = code
                dvals[m] = v
                m += 1
        return out[:k], new_bounds, dcodes[:m], dvals[:m]


NUMPY_KERNELS = Kernels("numpy", _pair_counts_np, _merge_pair_np)
NUMBA_KERNELS = Kernels("numba", _pair_counts_jit, _merge_pair_jit) if HAS_NUMBA else None


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if HAS_NUMBA else ("numpy",)


def default_backend() -> str:
    flag = os.environ.get("BYTEBPE_JIT", "").strip().lower()
    if flag in ("0", "off", "false", "no"):
        return "numpy"
    if flag in ("1", "on", "true", "yes"):
        if not HAS_NUMBA:
            raise RuntimeError("BYTEBPE_JIT requested the numba backend but numba is not installed")
        return "numba"
    return "numba" if HAS_NUMBA else "numpy"


def get_kernels(name: str | None = None) -> Kernels:
    """Resolve a backend by name, or the environment default when None."""
    name = name or default_backend()
    if name == "numpy":
        return NUMPY_KERNELS
    if name == "numba":
        if NUMBA_KERNELS is None:
            raise RuntimeError("numba backend requested but numba is not installed")
        return NUMBA_KERNELS
    raise ValueError(f"unknown kernel backend: {name!r}")
