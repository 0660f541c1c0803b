"""Byte-level BPE tokenization over UTF-8 or UTF-16LE byte sequences.

The UTF-16LE domain represents every basic-plane character in two bytes,
which shortens token sequences for CJK scripts and lets merged tokens be
shared across languages; the UTF-8 domain is the conventional baseline.
Both are trained, applied and analyzed through the same interfaces.
"""

from .analytics import (
    ComparisonReport,
    CorpusStats,
    LanguagePartition,
    LanguageStats,
    SharedCount,
    UsedTokenSet,
    compare_models,
    corpus_stats,
    coverage,
    relative_reduction,
    render_csv,
    render_table,
    shared_tokens,
    tokens_per_utterance,
    used_tokens,
)
from .codec import (
    ByteDomain,
    byte_to_display,
    bytes_to_display,
    bytes_to_text,
    display_to_byte,
    display_to_bytes,
    text_to_bytes,
)
from .model import (
    BASE_VOCAB,
    MergeRule,
    ModelFormatError,
    TokenizerModel,
    Vocabulary,
    pre_tokenize,
)
from .trainer import train

__version__ = "0.1.0"

__all__ = [
    "BASE_VOCAB",
    "ByteDomain",
    "ComparisonReport",
    "CorpusStats",
    "LanguagePartition",
    "LanguageStats",
    "MergeRule",
    "ModelFormatError",
    "SharedCount",
    "TokenizerModel",
    "UsedTokenSet",
    "Vocabulary",
    "byte_to_display",
    "bytes_to_display",
    "bytes_to_text",
    "compare_models",
    "corpus_stats",
    "coverage",
    "display_to_byte",
    "display_to_bytes",
    "pre_tokenize",
    "relative_reduction",
    "render_csv",
    "render_table",
    "shared_tokens",
    "text_to_bytes",
    "tokens_per_utterance",
    "train",
    "used_tokens",
]
