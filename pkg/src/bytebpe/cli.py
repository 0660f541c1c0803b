"""Command-line interface: train, encode, decode, stats, compare.

Corpora are plain UTF-8 text, one utterance per line. All file outputs
are byte-deterministic: rerunning a command with identical inputs writes
identical bytes.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import analytics, codec
from .codec import ByteDomain
from .model import ModelFormatError, TokenizerModel
from .trainer import train

DEFAULT_VOCAB_SIZE = 7000  # comfortable for trilingual training
DEFAULT_MAX_LINE_CHARS = 8192


class CliError(Exception):
    """User-facing failure; message printed to stderr, exit code 1."""


class CorpusLines:
    """Re-iterable, streaming reader of one utterance per line.

    Lines longer than ``max_chars`` are rejected with a diagnostic naming
    the file and line number, never silently truncated.
    """

    def __init__(self, path: Path, max_chars: int):
        self.path = path
        self.max_chars = max_chars

    def __iter__(self):
        try:
            fh = open(self.path, encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read corpus {self.path}: {exc}") from None
        with fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\r\n")
                if len(line) > self.max_chars:
                    raise CliError(
                        f"{self.path}:{lineno}: line has {len(line)} characters, "
                        f"limit is {self.max_chars}"
                    )
                yield line


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bytebpe",
        description="Byte-level BPE tokenizer over UTF-8 or UTF-16LE byte sequences",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train a tokenizer over corpus files")
    p_train.add_argument("--byte-domain", choices=["utf8", "utf16le"], default="utf8")
    p_train.add_argument("--vocab-size", type=int, default=DEFAULT_VOCAB_SIZE)
    p_train.add_argument("--corpus", action="append", required=True, metavar="TAG=PATH",
                         help="corpus file, repeatable; bare PATH uses the file stem as tag")
    p_train.add_argument("--model", required=True, metavar="PATH", help="model file to write")
    p_train.add_argument("--special", action="append", default=[], metavar="NAME",
                         help="special token name, repeatable")
    p_train.add_argument("--min-pair-freq", type=int, default=2)
    p_train.add_argument("--shards", type=int, default=1,
                         help="parallel shards for pair counting (result is identical)")
    p_train.add_argument("--max-line-length", type=int, default=DEFAULT_MAX_LINE_CHARS)
    p_train.set_defaults(func=cmd_train)

    p_encode = sub.add_parser("encode", help="encode text lines to token id lines")
    p_encode.add_argument("--model", required=True, metavar="PATH")
    p_encode.add_argument("--input", default="-", metavar="PATH", help="default: stdin")
    p_encode.add_argument("--output", default="-", metavar="PATH", help="default: stdout")
    p_encode.add_argument("--display", action="store_true",
                          help="emit display symbols instead of numeric ids")
    p_encode.add_argument("--max-line-length", type=int, default=DEFAULT_MAX_LINE_CHARS)
    p_encode.set_defaults(func=cmd_encode)

    p_decode = sub.add_parser("decode", help="decode token id lines back to text")
    p_decode.add_argument("--model", required=True, metavar="PATH")
    p_decode.add_argument("--input", default="-", metavar="PATH")
    p_decode.add_argument("--output", default="-", metavar="PATH")
    p_decode.set_defaults(func=cmd_decode)

    p_stats = sub.add_parser("stats", help="per-language token statistics for one model")
    p_stats.add_argument("--model", required=True, metavar="PATH")
    p_stats.add_argument("--corpus", action="append", required=True, metavar="TAG=PATH")
    p_stats.add_argument("--output", metavar="PATH",
                         help="write the CSV report here ('-' for stdout)")
    p_stats.add_argument("--max-line-length", type=int, default=DEFAULT_MAX_LINE_CHARS)
    p_stats.set_defaults(func=cmd_stats)

    p_cmp = sub.add_parser("compare", help="compare two or more models on tagged corpora")
    p_cmp.add_argument("--model", action="append", required=True, metavar="PATH",
                       help="model file, repeatable (at least two)")
    p_cmp.add_argument("--corpus", action="append", required=True, metavar="TAG=PATH")
    p_cmp.add_argument("--output", metavar="PATH")
    p_cmp.add_argument("--max-line-length", type=int, default=DEFAULT_MAX_LINE_CHARS)
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ModelFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:  # console entry point
    sys.exit(main())


# ---------------------------------------------------------------------------
# subcommands


def cmd_train(args) -> int:
    corpora = _parse_corpus_args(args.corpus, args.max_line_length)

    def stream():
        for _, lines in corpora:
            yield from lines

    started = time.perf_counter()
    model = train(
        stream(),
        target_vocab_size=args.vocab_size,
        domain=ByteDomain(args.byte_domain),
        specials=args.special,
        min_pair_freq=args.min_pair_freq,
        shards=args.shards,
    )
    duration = time.perf_counter() - started
    model.save(args.model)
    print(
        f"trained {model.domain.value} model: vocab size {model.vocab_size} "
        f"({len(model.merges)} merges) in {duration:.2f}s -> {args.model}"
    )
    return 0


def cmd_encode(args) -> int:
    model = _load_model(args.model)
    with _open_out(args.output) as out:
        for line in _input_lines(args.input, args.max_line_length):
            ids = model.encode(line)
            if args.display:
                out.write(" ".join(model.token_display(i) for i in ids))
            else:
                out.write(" ".join(str(i) for i in ids))
            out.write("\n")
    return 0


def cmd_decode(args) -> int:
    model = _load_model(args.model)
    with _open_out(args.output) as out:
        for lineno, line in enumerate(_input_lines(args.input, max_chars=None), start=1):
            try:
                ids = [int(tok) for tok in line.split()]
            except ValueError:
                raise CliError(f"line {lineno}: not a sequence of token ids") from None
            try:
                raw = model.decode_bytes(ids)
            except ValueError as exc:
                raise CliError(f"line {lineno}: {exc}") from None
            text, replacements = codec.bytes_to_text(raw, model.domain)
            if replacements:
                print(f"line {lineno}: {replacements} replacement(s)", file=sys.stderr)
            out.write(text)
            out.write("\n")
    return 0


def cmd_stats(args) -> int:
    model = _load_model(args.model)
    name = Path(args.model).stem
    parts = _partitions(args.corpus, args.max_line_length)
    report = analytics.compare_models([(name, model)], parts)
    _emit_report(report, args.output)
    return 0


def cmd_compare(args) -> int:
    if len(args.model) < 2:
        raise CliError("compare needs at least two --model files")
    named = []
    seen: dict[str, int] = {}
    for path in args.model:
        model = _load_model(path)
        name = Path(path).stem
        seen[name] = seen.get(name, 0) + 1
        if seen[name] > 1:
            name = f"{name}~{seen[name]}"
        named.append((name, model))
    parts = _partitions(args.corpus, args.max_line_length)
    report = analytics.compare_models(named, parts)
    _emit_report(report, args.output)
    return 0


# ---------------------------------------------------------------------------
# helpers


def _parse_corpus_args(pairs: list[str], max_chars: int) -> list[tuple[str, CorpusLines]]:
    out: list[tuple[str, CorpusLines]] = []
    tags: set[str] = set()
    for spec in pairs:
        tag, eq, path = spec.partition("=")
        if not eq:
            path = spec
            tag = Path(spec).stem
        if not tag or not path:
            raise CliError(f"bad --corpus value {spec!r}, expected TAG=PATH")
        if tag in tags:
            raise CliError(f"duplicate corpus tag {tag!r}")
        tags.add(tag)
        corpus_path = Path(path)
        if not corpus_path.is_file():
            raise CliError(f"corpus file not found: {corpus_path}")
        out.append((tag, CorpusLines(corpus_path, max_chars)))
    return out


def _partitions(pairs: list[str], max_chars: int) -> list[analytics.LanguagePartition]:
    return [
        analytics.LanguagePartition(tag=tag, utterances=lines)
        for tag, lines in _parse_corpus_args(pairs, max_chars)
    ]


def _load_model(path: str) -> TokenizerModel:
    try:
        return TokenizerModel.load(path)
    except OSError as exc:
        raise CliError(f"cannot read model {path}: {exc}") from None
    except ModelFormatError as exc:
        raise CliError(f"bad model file {path}: {exc}") from None


def _input_lines(path: str, max_chars: int | None):
    if path == "-":
        for line in sys.stdin:
            yield line.rstrip("\r\n")
    else:
        src = Path(path)
        if not src.is_file():
            raise CliError(f"input file not found: {src}")
        yield from CorpusLines(src, max_chars if max_chars is not None else sys.maxsize)


class _StdoutHandle:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        sys.stdout.flush()
        return False


def _open_out(path: str):
    if path == "-":
        return _StdoutHandle()
    return open(path, "w", encoding="utf-8", newline="\n")


def _emit_report(report: analytics.ComparisonReport, output: str | None) -> None:
    if output == "-":
        sys.stdout.write(analytics.render_csv(report))
        return
    sys.stdout.write(analytics.render_table(report))
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(analytics.render_csv(report))
