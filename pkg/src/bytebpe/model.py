"""Tokenizer model: vocabulary, merge rules, encoding, decoding, persistence.

A model is the trained artifact: a byte domain, the 256 base byte tokens,
optional special tokens, and an ordered list of merge rules. Token ids are
laid out as ``0..255`` base bytes, then specials, then merged tokens in
rank order, so the id layout is stable across vocabulary sizes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from . import codec
from .codec import ByteDomain

BASE_VOCAB = 256
MODEL_FORMAT_VERSION = 1

_PRETOKEN_RE = re.compile(r" ?\S+|\s")
_PIECE_CACHE_MAX = 65536


class ModelFormatError(ValueError):
    """Raised when a model document cannot be parsed or is inconsistent."""


def pre_tokenize(text: str) -> list[str]:
    """Split text into the pieces merges are confined to.

    Each run of non-whitespace becomes one piece, keeping a single
    immediately-preceding space when present; every other whitespace
    character is a piece of its own. The pieces always concatenate back
    to the input exactly.
    """
    return _PRETOKEN_RE.findall(text)


@dataclass(frozen=True)
class MergeRule:
    """One learned merge: replace adjacent (left, right) with result."""

    left: int
    right: int
    result: int
    rank: int


@dataclass
class Vocabulary:
    """Bijection between token ids and byte strings, plus special tokens.

    ``entries`` maps base and merged token ids to their byte strings;
    special tokens sit outside the bijection and carry no bytes.
    """

    entries: dict[int, bytes]
    specials: list[tuple[str, int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries) + len(self.specials)

    def __contains__(self, token_id: int) -> bool:
        return token_id in self.entries or any(i == token_id for _, i in self.specials)

    def bytes_for(self, token_id: int) -> bytes:
        """Byte string of a token; specials yield an empty byte string."""
        data = self.entries.get(token_id)
        if data is not None:
            return data
        if any(i == token_id for _, i in self.specials):
            return b""
        raise ValueError(f"unknown token id: {token_id}")

    def validate(self, merges: list[MergeRule]) -> None:
        """Check the structural invariants; raises ModelFormatError."""
        if len(set(self.entries.values())) != len(self.entries):
            raise ModelFormatError("vocabulary byte strings are not unique")
        for b in range(BASE_VOCAB):
            if self.entries.get(b) != bytes([b]):
                raise ModelFormatError(f"base byte token {b} missing or wrong")
        expected_special_ids = list(range(BASE_VOCAB, BASE_VOCAB + len(self.specials)))
        if [i for _, i in self.specials] != expected_special_ids:
            raise ModelFormatError("special token ids must directly follow the base bytes")
        first_merge = BASE_VOCAB + len(self.specials)
        for rule in merges:
            if rule.result != first_merge + rule.rank:
                raise ModelFormatError(f"merge rank {rule.rank} has id {rule.result}")
            left = self.entries.get(rule.left)
            right = self.entries.get(rule.right)
            if left is None or right is None:
                raise ModelFormatError(f"merge {rule.rank} references an unknown token")
            if self.entries.get(rule.result) != left + right:
                raise ModelFormatError(f"merge {rule.rank} bytes are not left+right")
        if len(self) != BASE_VOCAB + len(self.specials) + len(merges):
            raise ModelFormatError("vocabulary size does not match merges and specials")


@dataclass
class TokenizerModel:
    """A trained tokenizer; immutable by convention after construction."""

    domain: ByteDomain
    vocab: Vocabulary
    merges: list[MergeRule]
    target_vocab_size: int

    def __post_init__(self) -> None:
        self._pair_rank: dict[tuple[int, int], MergeRule] = {
            (r.left, r.right): r for r in self.merges
        }
        self._special_names = {i: name for name, i in self.vocab.specials}
        self._piece_cache: dict[str, tuple[int, ...]] = {}

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    # -- encoding ----------------------------------------------------------

    def encode(self, text: str) -> list[int]:
        """Token ids for ``text``; every string encodes, nothing is OOV."""
        out: list[int] = []
        for piece in pre_tokenize(text):
            out.extend(self._encode_piece(piece))
        return out

    def _encode_piece(self, piece: str) -> tuple[int, ...]:
        cached = self._piece_cache.get(piece)
        if cached is not None:
            return cached
        ids: list[int] = list(codec.text_to_bytes(piece, self.domain))
        ranks = self._pair_rank
        while len(ids) >= 2:
            best: MergeRule | None = None
            for pair in zip(ids, ids[1:]):
                rule = ranks.get(pair)
                if rule is not None and (best is None or rule.rank < best.rank):
                    best = rule
            if best is None:
                break
            ids = _merge_all(ids, best.left, best.right, best.result)
        result = tuple(ids)
        if len(self._piece_cache) < _PIECE_CACHE_MAX:
            self._piece_cache[piece] = result
        return result

    # -- decoding ----------------------------------------------------------

    def decode_bytes(self, ids: list[int]) -> bytes:
        """Concatenated byte strings of ``ids``; specials contribute nothing."""
        return b"".join(self.vocab.bytes_for(i) for i in ids)

    def decode(self, ids: list[int]) -> str:
        """Text for ``ids``; malformed byte runs decode to U+FFFD."""
        text, _ = codec.bytes_to_text(self.decode_bytes(ids), self.domain)
        return text

    def token_display(self, token_id: int) -> str:
        """Printable form of one token (special tokens show their name)."""
        name = self._special_names.get(token_id)
        if name is not None:
            return name
        return codec.bytes_to_display(self.vocab.bytes_for(token_id))

    # -- persistence ---------------------------------------------------------

    def dumps(self) -> str:
        """Canonical text form; loading it reproduces the model exactly."""
        doc = {
            "format_version": MODEL_FORMAT_VERSION,
            "byte_domain": self.domain.value,
            "target_vocab_size": self.target_vocab_size,
            "specials": [name for name, _ in self.vocab.specials],
            "merges": [
                [
                    codec.bytes_to_display(self.vocab.bytes_for(r.left)),
                    codec.bytes_to_display(self.vocab.bytes_for(r.right)),
                ]
                for r in self.merges
            ],
        }
        return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps())

    @classmethod
    def loads(cls, text: str) -> "TokenizerModel":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"not a valid model document: {exc}") from None
        if not isinstance(doc, dict):
            raise ModelFormatError("model document must be a JSON object")
        version = doc.get("format_version")
        if version != MODEL_FORMAT_VERSION:
            raise ModelFormatError(f"unsupported format_version: {version!r}")
        try:
            domain = ByteDomain(doc["byte_domain"])
        except (KeyError, ValueError):
            raise ModelFormatError(f"bad byte_domain: {doc.get('byte_domain')!r}") from None
        specials = doc.get("specials", [])
        target = doc.get("target_vocab_size")
        merge_pairs = doc.get("merges", [])
        if not isinstance(target, int) or isinstance(target, bool):
            raise ModelFormatError(f"bad target_vocab_size: {target!r}")
        if not isinstance(specials, list) or not all(isinstance(s, str) for s in specials):
            raise ModelFormatError("specials must be a list of names")
        if len(set(specials)) != len(specials):
            raise ModelFormatError("special token names must be unique")

        entries = {i: bytes([i]) for i in range(BASE_VOCAB)}
        by_bytes = {bytes([i]): i for i in range(BASE_VOCAB)}
        special_list = [(name, BASE_VOCAB + i) for i, name in enumerate(specials)]
        next_id = BASE_VOCAB + len(specials)
        merges: list[MergeRule] = []
        for rank, pair in enumerate(merge_pairs):
            if not (isinstance(pair, list) and len(pair) == 2):
                raise ModelFormatError(f"merge {rank} is not a two-element pair")
            try:
                left_bytes = codec.display_to_bytes(pair[0])
                right_bytes = codec.display_to_bytes(pair[1])
            except ValueError as exc:
                raise ModelFormatError(f"merge {rank}: {exc}") from None
            left = by_bytes.get(left_bytes)
            right = by_bytes.get(right_bytes)
            if left is None or right is None:
                raise ModelFormatError(f"merge {rank} references a token not yet defined")
            combined = left_bytes + right_bytes
            if combined in by_bytes:
                raise ModelFormatError(f"merge {rank} duplicates an existing token")
            merges.append(MergeRule(left, right, next_id, rank))
            entries[next_id] = combined
            by_bytes[combined] = next_id
            next_id += 1

        vocab = Vocabulary(entries=entries, specials=special_list)
        if len(vocab) > target:
            raise ModelFormatError(
                f"vocabulary size {len(vocab)} exceeds target_vocab_size {target}"
            )
        return cls(domain=domain, vocab=vocab, merges=merges, target_vocab_size=target)

    @classmethod
    def load(cls, path) -> "TokenizerModel":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())


def _merge_all(ids: list[int], left: int, right: int, result: int) -> list[int]:
    """Replace every (left, right) adjacency, left to right, non-overlapping."""
    out: list[int] = []
    i, n = 0, len(ids)
    while i < n:
        if i < n - 1 and ids[i] == left and ids[i + 1] == right:
            out.append(result)
            i += 2
        else:
            out.append(ids[i])
            i += 1
    return out
