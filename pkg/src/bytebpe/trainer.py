"""Greedy merge-rule training over pre-token byte sequences.

The trainer streams the corpus once to count distinct pre-tokens, lowers
them to weighted byte sequences in the chosen domain, then repeatedly
merges the most frequent adjacent pair until the vocabulary is full or no
pair occurs often enough. Pair counts are kept incrementally: each merge
kernel call reports the net count change of every affected pair, and a
lazy max-heap yields the next winner.

Ties on frequency break toward the pair whose (left bytes, right bytes)
is smallest lexicographically, which makes training fully deterministic:
the same corpus and parameters produce the same merge list regardless of
backend or shard count.
"""

from __future__ import annotations

import heapq
import os
from collections import Counter
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import kernels
from .codec import ByteDomain, text_to_bytes
from .model import BASE_VOCAB, MergeRule, TokenizerModel, Vocabulary, pre_tokenize


def train(
    corpus: Iterable[str],
    target_vocab_size: int,
    domain: ByteDomain,
    specials: Iterable[str] = (),
    *,
    min_pair_freq: int = 2,
    shards: int = 1,
    backend: str | None = None,
) -> TokenizerModel:
    """Train a tokenizer over a stream of utterance strings.

    Stops when the vocabulary reaches ``target_vocab_size`` or when the
    best remaining pair occurs fewer than ``min_pair_freq`` times. The
    initial pair count may be split across ``shards`` worker chunks; the
    result is identical for any shard count.
    """
    special_names = list(specials)
    if len(set(special_names)) != len(special_names):
        raise ValueError("special token names must be unique")
    floor = BASE_VOCAB + len(special_names)
    if target_vocab_size < floor:
        raise ValueError(
            f"target_vocab_size must be at least {floor} "
            f"(256 base bytes + {len(special_names)} specials), got {target_vocab_size}"
        )
    if min_pair_freq < 1:
        raise ValueError(f"min_pair_freq must be positive, got {min_pair_freq}")
    if shards < 1:
        raise ValueError(f"shards must be positive, got {shards}")
    kern = kernels.get_kernels(backend)

    piece_counts = count_pieces(corpus)
    flat, bounds, weights = _piece_arrays(piece_counts, domain)

    token_bytes: dict[int, bytes] = {i: bytes([i]) for i in range(BASE_VOCAB)}
    counts: dict[int, int] = {}
    for codes, cnts in _sharded_counts(kern, flat, bounds, weights, shards):
        for code, c in zip(codes.tolist(), cnts.tolist()):
            counts[code] = counts.get(code, 0) + c
    # Heap entries are (-count, left bytes, right bytes, code); the byte
    # strings implement the deterministic tie-break.
    heap: list[tuple[int, bytes, bytes, int]] = []
    for code, c in counts.items():
        left, right = kernels.unpack_pair(code)
        heap.append((-c, token_bytes[left], token_bytes[right], code))
    heapq.heapify(heap)

    merges: list[MergeRule] = []
    max_merges = target_vocab_size - floor
    while len(merges) < max_merges:
        picked = _pop_best(heap, counts)
        if picked is None:
            break
        code, count = picked
        if count < min_pair_freq:
            break
        left, right = kernels.unpack_pair(code)
        new_id = floor + len(merges)
        merges.append(MergeRule(left, right, new_id, len(merges)))
        token_bytes[new_id] = token_bytes[left] + token_bytes[right]

        flat, bounds, dcodes, dvals = kern.merge_pair(flat, bounds, weights, left, right, new_id)
        for dcode, dv in zip(dcodes.tolist(), dvals.tolist()):
            cur = counts.get(dcode, 0) + dv
            if cur > 0:
                counts[dcode] = cur
                if dv > 0:
                    dl, dr = kernels.unpack_pair(dcode)
                    heapq.heappush(heap, (-cur, token_bytes[dl], token_bytes[dr], dcode))
            else:
                counts.pop(dcode, None)
        # Overlapping runs can leave occurrences of the merged pair behind;
        # its winning heap entry is gone, so reseed it.
        remaining = counts.get(code)
        if remaining:
            heapq.heappush(heap, (-remaining, token_bytes[left], token_bytes[right], code))

    entries = dict(token_bytes)
    special_list = [(name, BASE_VOCAB + i) for i, name in enumerate(special_names)]
    vocab = Vocabulary(entries=entries, specials=special_list)
    return TokenizerModel(
        domain=domain,
        vocab=vocab,
        merges=merges,
        target_vocab_size=target_vocab_size,
    )


def count_pieces(corpus: Iterable[str]) -> Counter:
    """Stream the corpus once, counting distinct pre-token pieces."""
    pieces: Counter = Counter()
    for utterance in corpus:
        pieces.update(pre_tokenize(utterance))
    return pieces


def _piece_arrays(piece_counts: Counter, domain: ByteDomain):
    """Lower distinct pieces to (flat int32 tokens, bounds, weights) arrays."""
    parts: list[np.ndarray] = []
    lens: list[int] = []
    weights: list[int] = []
    for piece, n in piece_counts.items():
        data = text_to_bytes(piece, domain)
        parts.append(np.frombuffer(data, dtype=np.uint8))
        lens.append(len(data))
        weights.append(n)
    flat = np.concatenate(parts).astype(np.int32) if parts else np.empty(0, np.int32)
    bounds = np.zeros(len(lens) + 1, np.int64)
    np.cumsum(lens, out=bounds[1:])
    return flat, bounds, np.array(weights, np.int64)


def _sharded_counts(kern, flat, bounds, weights, shards):
    """Initial pair counts, optionally split over contiguous sequence chunks.

    Chunk results are summed by the caller; integer addition makes the
    total independent of chunking and execution order.
    """
    n_seqs = len(bounds) - 1
    shards = max(1, min(shards, n_seqs))
    if shards == 1:
        yield kern.pair_counts(flat, bounds, weights, 0, n_seqs)
        return
    cuts = [round(i * n_seqs / shards) for i in range(shards + 1)]
    ranges = [(lo, hi) for lo, hi in zip(cuts, cuts[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=min(len(ranges), os.cpu_count() or 1)) as pool:
        futures = [
            pool.submit(kern.pair_counts, flat, bounds, weights, lo, hi) for lo, hi in ranges
        ]
        for future in futures:
            yield future.result()


def _pop_best(heap, counts):
    """Pop the most frequent pair, refreshing stale heap entries lazily."""
    while heap:
        negc, left_bytes, right_bytes, code = heapq.heappop(heap)
        current = counts.get(code, 0)
        if current == -negc:
            return code, current
        if current > 0:
            # Stale entry: reinsert with the live count and keep looking.
            # Every live pair keeps at least one entry recording >= its
            # current count, so deflating stale tops never loses the max.
            heapq.heappush(heap, (-current, left_bytes, right_bytes, code))
    return None
