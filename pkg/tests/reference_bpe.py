"""Independent quadratic-time oracles the production code is checked against.

Everything here is deliberately naive: a manual pre-token scanner, a
trainer that recounts every pair from scratch each round, and an encoder
that rescans for the lowest-rank applicable rule after every merge. None
of it shares code with the package under test.
"""

from collections import Counter


def oracle_pieces(text: str) -> list[str]:
    pieces = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if not ch.isspace():
            j = i
            while j < n and not text[j].isspace():
                j += 1
            pieces.append(text[i:j])
            i = j
        elif ch == " " and i + 1 < n and not text[i + 1].isspace():
            j = i + 1
            while j < n and not text[j].isspace():
                j += 1
            pieces.append(text[i:j])
            i = j
        else:
            pieces.append(ch)
            i += 1
    return pieces


def _codec_name(domain: str) -> str:
    return {"utf8": "utf-8", "utf16le": "utf-16-le"}[domain]


def replace_pair(seq: list[int], pair: tuple[int, int], new_id: int) -> list[int]:
    out, i = [], 0
    while i < len(seq):
        if i + 1 < len(seq) and (seq[i], seq[i + 1]) == pair:
            out.append(new_id)
            i += 2
        else:
            out.append(seq[i])
            i += 1
    return out


def oracle_train(
    utterances,
    target_vocab_size: int,
    domain: str,
    n_specials: int = 0,
    min_pair_freq: int = 2,
) -> list[tuple[int, int, int]]:
    """Full-recount greedy trainer; returns merges as (left, right, new_id)."""
    enc = _codec_name(domain)
    piece_weights = Counter()
    for utt in utterances:
        piece_weights.update(oracle_pieces(utt))
    seqs = [(list(piece.encode(enc)), w) for piece, w in piece_weights.items()]
    token_bytes = {i: bytes([i]) for i in range(256)}
    next_id = 256 + n_specials
    merges: list[tuple[int, int, int]] = []
    while next_id < target_vocab_size:
        counts = Counter()
        for seq, w in seqs:
            for a, b in zip(seq, seq[1:]):
                counts[(a, b)] += w
        if not counts:
            break
        best_count = max(counts.values())
        if best_count < min_pair_freq:
            break
        best = min(
            (p for p, c in counts.items() if c == best_count),
            key=lambda p: (token_bytes[p[0]], token_bytes[p[1]]),
        )
        merges.append((best[0], best[1], next_id))
        token_bytes[next_id] = token_bytes[best[0]] + token_bytes[best[1]]
        seqs = [(replace_pair(seq, best, next_id), w) for seq, w in seqs]
        next_id += 1
    return merges


def oracle_encode(text: str, merges: list[tuple[int, int, int]], domain: str) -> list[int]:
    """Apply merges lowest-rank-first until none applies, piece by piece."""
    enc = _codec_name(domain)
    rank_of = {(l, r): rank for rank, (l, r, _) in enumerate(merges)}
    out: list[int] = []
    for piece in oracle_pieces(text):
        seq = list(piece.encode(enc))
        while True:
            ranks = [rank_of[p] for p in zip(seq, seq[1:]) if p in rank_of]
            if not ranks:
                break
            left, right, new_id = merges[min(ranks)]
            seq = replace_pair(seq, (left, right), new_id)
        out.extend(seq)
    return out
