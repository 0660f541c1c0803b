"""Corpus-level tokenizer measurements.

Given a trained model and named per-language corpora, computes which
vocabulary entries each language actually uses, how many tokens an
average utterance costs, what fraction of the vocabulary each language
covers, and how many tokens languages share pairwise and jointly.

Shared-token counts come in two flavors: the headline figure counts only
merged tokens (ids >= 256), since the 256 base bytes are shared by
construction; the count including base tokens is reported alongside.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .model import BASE_VOCAB, TokenizerModel


@dataclass
class LanguagePartition:
    """A named corpus slice: language tag plus its utterances.

    ``utterances`` may be any re-iterable of strings (a list, or a lazy
    line reader for large corpora).
    """

    tag: str
    utterances: Iterable[str]

    def __post_init__(self) -> None:
        if not self.tag:
            raise ValueError("partition tag must be non-empty")


@dataclass(frozen=True)
class UsedTokenSet:
    """Token ids a language actually emits when encoded."""

    tag: str
    ids: frozenset[int]

    @property
    def merged_ids(self) -> frozenset[int]:
        return frozenset(i for i in self.ids if i >= BASE_VOCAB)


@dataclass(frozen=True)
class SharedCount:
    """Size of a used-token intersection, with and without base bytes."""

    merged: int
    with_base: int


@dataclass(frozen=True)
class LanguageStats:
    tag: str
    utterance_count: int
    total_tokens: int
    mean_tokens_per_utterance: float
    coverage_percent: float
    used: UsedTokenSet


@dataclass
class CorpusStats:
    """Per-language stats plus pairwise/global shared-token counts."""

    per_language: dict[str, LanguageStats]
    pairwise_shared: dict[tuple[str, str], SharedCount] = field(default_factory=dict)
    all_shared: SharedCount | None = None

    def shared_for(self, a: str, b: str) -> SharedCount:
        got = self.pairwise_shared.get((a, b))
        return got if got is not None else self.pairwise_shared[(b, a)]


def used_tokens(model: TokenizerModel, part: LanguagePartition) -> UsedTokenSet:
    """Union of token ids over every utterance of the partition."""
    ids: set[int] = set()
    for utterance in part.utterances:
        ids.update(model.encode(utterance))
    return UsedTokenSet(part.tag, frozenset(ids))


def tokens_per_utterance(model: TokenizerModel, part: LanguagePartition) -> float:
    """Arithmetic mean encoded length; full precision."""
    total = 0
    n = 0
    for utterance in part.utterances:
        total += len(model.encode(utterance))
        n += 1
    if n == 0:
        raise ValueError(f"partition {part.tag!r} is empty")
    return total / n


def coverage(model: TokenizerModel, part: LanguagePartition) -> float:
    """Percentage of the vocabulary (specials excluded) the partition uses."""
    return 100.0 * len(used_tokens(model, part).ids) / _coverage_denominator(model)


def relative_reduction(a: float, b: float) -> float:
    """Relative change of b versus baseline a, in percent (negative = smaller)."""
    if a <= 0:
        raise ValueError(f"baseline must be positive, got {a}")
    return 100.0 * (b - a) / a


def shared_tokens(
    model: TokenizerModel, parts: Sequence[LanguagePartition]
) -> tuple[dict[tuple[str, str], SharedCount], SharedCount]:
    """Pairwise and all-language shared-token counts over >= 2 partitions."""
    if len(parts) < 2:
        raise ValueError("shared-token analysis needs at least two partitions")
    _check_unique_tags(parts)
    used = {p.tag: used_tokens(model, p).ids for p in parts}
    return _shared_from_used([p.tag for p in parts], used)


def corpus_stats(model: TokenizerModel, parts: Sequence[LanguagePartition]) -> CorpusStats:
    """Full per-language statistics in a single pass over each partition."""
    _check_unique_tags(parts)
    denominator = _coverage_denominator(model)
    per_language: dict[str, LanguageStats] = {}
    used_sets: dict[str, frozenset[int]] = {}
    for part in parts:
        total = 0
        n = 0
        ids: set[int] = set()
        for utterance in part.utterances:
            encoded = model.encode(utterance)
            total += len(encoded)
            n += 1
            ids.update(encoded)
        if n == 0:
            raise ValueError(f"partition {part.tag!r} is empty")
        used = UsedTokenSet(part.tag, frozenset(ids))
        used_sets[part.tag] = used.ids
        per_language[part.tag] = LanguageStats(
            tag=part.tag,
            utterance_count=n,
            total_tokens=total,
            mean_tokens_per_utterance=total / n,
            coverage_percent=100.0 * len(ids) / denominator,
            used=used,
        )
    stats = CorpusStats(per_language=per_language)
    if len(parts) >= 2:
        pairwise, everyone = _shared_from_used([p.tag for p in parts], used_sets)
        stats.pairwise_shared = pairwise
        stats.all_shared = everyone
    return stats


# ---------------------------------------------------------------------------
# model comparison reports


@dataclass(frozen=True)
class ModelReport:
    name: str
    stats: CorpusStats


@dataclass(frozen=True)
class ComparisonReport:
    """Stats for one or more models over the same partitions.

    Models are ordered by name; the first is the reduction baseline.
    ``reductions`` maps (model name, tag) to the relative change of that
    model's mean tokens per utterance versus the baseline model's.
    """

    models: tuple[ModelReport, ...]
    tags: tuple[str, ...]
    baseline: str
    reductions: dict[tuple[str, str], float]


def compare_models(
    named_models: Sequence[tuple[str, TokenizerModel]],
    parts: Sequence[LanguagePartition],
) -> ComparisonReport:
    """Run corpus_stats for every model and tabulate reductions vs the baseline."""
    if not named_models:
        raise ValueError("need at least one model")
    names = [name for name, _ in named_models]
    if len(set(names)) != len(names):
        raise ValueError(f"model names must be unique, got {names}")
    ordered = sorted(named_models, key=lambda kv: kv[0])
    reports = tuple(ModelReport(name, corpus_stats(m, parts)) for name, m in ordered)
    tags = tuple(p.tag for p in parts)
    baseline = reports[0]
    reductions: dict[tuple[str, str], float] = {}
    for report in reports:
        for tag in tags:
            reductions[(report.name, tag)] = relative_reduction(
                baseline.stats.per_language[tag].mean_tokens_per_utterance,
                report.stats.per_language[tag].mean_tokens_per_utterance,
            )
    return ComparisonReport(
        models=reports, tags=tags, baseline=baseline.name, reductions=reductions
    )


def report_columns(report: ComparisonReport) -> list[str]:
    """Fixed column set for the tabular outputs (documented in the README)."""
    cols = ["model", "language", "utterances", "mean_tokens", "coverage_pct",
            "used_merged", "used_total"]
    if len(report.tags) >= 2:
        for tag in report.tags:
            cols += [f"shared_merged_{tag}", f"shared_with_base_{tag}"]
        cols += ["shared_merged_all_langs", "shared_with_base_all_langs"]
    if len(report.models) >= 2:
        cols.append("reduction_pct")
    return cols


def report_rows(report: ComparisonReport) -> list[dict[str, object]]:
    """One row per (model, language), in deterministic order."""
    rows: list[dict[str, object]] = []
    for model_report in report.models:
        stats = model_report.stats
        for tag in report.tags:
            lang = stats.per_language[tag]
            row: dict[str, object] = {
                "model": model_report.name,
                "language": tag,
                "utterances": lang.utterance_count,
                "mean_tokens": lang.mean_tokens_per_utterance,
                "coverage_pct": lang.coverage_percent,
                "used_merged": len(lang.used.merged_ids),
                "used_total": len(lang.used.ids),
            }
            if len(report.tags) >= 2:
                for other in report.tags:
                    if other == tag:
                        row[f"shared_merged_{other}"] = ""
                        row[f"shared_with_base_{other}"] = ""
                    else:
                        shared = stats.shared_for(tag, other)
                        row[f"shared_merged_{other}"] = shared.merged
                        row[f"shared_with_base_{other}"] = shared.with_base
                assert stats.all_shared is not None
                row["shared_merged_all_langs"] = stats.all_shared.merged
                row["shared_with_base_all_langs"] = stats.all_shared.with_base
            if len(report.models) >= 2:
                row["reduction_pct"] = report.reductions[(model_report.name, tag)]
            rows.append(row)
    return rows


def render_csv(report: ComparisonReport) -> str:
    """Machine-readable form: full-precision floats, comma separated."""
    cols = report_columns(report)
    lines = [",".join(cols)]
    for row in report_rows(report):
        lines.append(",".join(_csv_cell(row[c]) for c in cols))
    return "\n".join(lines) + "\n"


def render_table(report: ComparisonReport) -> str:
    """Aligned human-readable table; floats shown to one decimal place."""
    cols = report_columns(report)
    body = [[_table_cell(row[c]) for c in cols] for row in report_rows(report)]
    widths = [max(len(col), *(len(r[i]) for r in body)) if body else len(col)
              for i, col in enumerate(cols)]
    def fmt(cells):
        return "  ".join(c.ljust(w) if i < 2 else c.rjust(w)
                         for i, (c, w) in enumerate(zip(cells, widths)))
    lines = [fmt(cols), fmt(["-" * w for w in widths])]
    lines += [fmt(r) for r in body]
    return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _table_cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.1f}"
    return str(value)


def _check_unique_tags(parts: Sequence[LanguagePartition]) -> None:
    tags = [p.tag for p in parts]
    if len(set(tags)) != len(tags):
        raise ValueError(f"partition tags must be unique, got {tags}")


def _coverage_denominator(model: TokenizerModel) -> int:
    # Specials are not language content; they never count toward coverage.
    return BASE_VOCAB + len(model.merges)


def _shared_from_used(
    tags: list[str], used: dict[str, frozenset[int]]
) -> tuple[dict[tuple[str, str], SharedCount], SharedCount]:
    pairwise: dict[tuple[str, str], SharedCount] = {}
    for i, a in enumerate(tags):
        for b in tags[i + 1 :]:
            overlap = used[a] & used[b]
            pairwise[(a, b)] = _shared_count(overlap)
    everyone = frozenset.intersection(*(used[t] for t in tags))
    return pairwise, _shared_count(everyone)


def _shared_count(ids: frozenset[int]) -> SharedCount:
    merged = sum(1 for i in ids if i >= BASE_VOCAB)
    return SharedCount(merged=merged, with_base=len(ids))
