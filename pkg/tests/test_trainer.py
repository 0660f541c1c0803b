"""Trainer tests: worked examples, oracle equivalence, determinism, invariants."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bytebpe import ByteDomain, train
from bytebpe.kernels import available_backends
from bytebpe.model import BASE_VOCAB

from conftest import random_text
from reference_bpe import oracle_train

corpus_strategy = st.lists(
    st.text(alphabet="ab한 国x", max_size=12), min_size=0, max_size=12
)


def merge_triples(model):
    return [(r.left, r.right, r.result) for r in model.merges]


class TestWorkedExamples:
    def test_single_merge_most_frequent_pair(self):
        # pair ('a','a') occurs 3 times across both utterances, ('a','b') twice
        model = train(["aaab", "aab"], 257, ByteDomain.UTF8)
        assert merge_triples(model) == [(0x61, 0x61, 256)]

    def test_empty_corpus_gives_base_only_model(self):
        model = train([], 256, ByteDomain.UTF8)
        assert model.merges == []
        assert model.vocab_size == 256

    def test_utf16_first_merge_is_hangul_code_unit(self):
        # over byte seqs [5C D5] and [20 00 5C D5], pair (5C, D5) occurs twice
        model = train(["한 한"], 260, ByteDomain.UTF16LE)
        assert (model.merges[0].left, model.merges[0].right) == (0x5C, 0xD5)

    def test_no_pair_reaches_min_frequency(self):
        model = train(["ab"], 300, ByteDomain.UTF8)
        assert model.merges == []

    def test_min_pair_freq_one_merges_hapaxes(self):
        model = train(["ab"], 257, ByteDomain.UTF8, min_pair_freq=1)
        assert merge_triples(model) == [(0x61, 0x62, 256)]


class TestValidation:
    def test_vocab_size_below_floor_rejected(self):
        with pytest.raises(ValueError):
            train(["x"], 255, ByteDomain.UTF8)
        with pytest.raises(ValueError):
            train(["x"], 257, ByteDomain.UTF8, specials=["<a>", "<b>"])

    def test_duplicate_specials_rejected(self):
        with pytest.raises(ValueError):
            train(["x"], 300, ByteDomain.UTF8, specials=["<a>", "<a>"])

    def test_bad_min_pair_freq_rejected(self):
        with pytest.raises(ValueError):
            train(["x"], 300, ByteDomain.UTF8, min_pair_freq=0)

    def test_bad_shards_rejected(self):
        with pytest.raises(ValueError):
            train(["x"], 300, ByteDomain.UTF8, shards=0)


class TestSpecials:
    def test_specials_sit_between_bytes_and_merges(self):
        model = train(["aaab", "aab"], 259, ByteDomain.UTF8, specials=["<unk>", "<pad>"])
        assert model.vocab.specials == [("<unk>", 256), ("<pad>", 257)]
        assert model.merges[0].result == 258
        assert model.vocab_size == 259

    def test_specials_count_toward_target(self):
        model = train(["aaab aaab"], 258, ByteDomain.UTF8, specials=["<s>", "</s>"])
        assert model.merges == []


class TestStructuralInvariants:
    def test_vocabulary_validates(self, mini_corpora):
        model = train(mini_corpora["en"][:300], 500, ByteDomain.UTF8, specials=["<unk>"])
        model.vocab.validate(model.merges)

    def test_ranks_consecutive_and_ids_offset(self, mini_corpora):
        model = train(mini_corpora["ko"][:300], 400, ByteDomain.UTF16LE)
        for i, rule in enumerate(model.merges):
            assert rule.rank == i
            assert rule.result == BASE_VOCAB + i

    def test_merged_bytes_concatenate_transitively(self, mini_corpora):
        model = train(mini_corpora["zh"][:300], 400, ByteDomain.UTF16LE)

        def expand(token_id):
            if token_id < BASE_VOCAB:
                return bytes([token_id])
            rule = model.merges[token_id - BASE_VOCAB]
            return expand(rule.left) + expand(rule.right)

        for token_id, data in model.vocab.entries.items():
            assert expand(token_id) == data

    def test_vocab_never_exceeds_target(self, mini_corpora):
        for size in (256, 300, 1000):
            model = train(mini_corpora["en"][:100], size, ByteDomain.UTF8)
            assert model.vocab_size <= size

    def test_trilingual_training_at_default_size_stops_early(self, mini_corpora):
        from collections import Counter

        from bytebpe import pre_tokenize

        corpus = mini_corpora["en"] + mini_corpora["ko"] + mini_corpora["zh"]
        model = train(corpus, 7000, ByteDomain.UTF16LE)
        assert model.vocab_size <= 7000
        assert model.target_vocab_size == 7000
        # early stop means no remaining adjacent pair occurs twice
        if model.vocab_size < 7000:
            pieces = Counter(p for line in corpus for p in pre_tokenize(line))
            counts = Counter()
            for piece, weight in pieces.items():
                ids = model.encode(piece)
                for pair in zip(ids, ids[1:]):
                    counts[pair] += weight
            assert not counts or max(counts.values()) < 2


class TestDeterminism:
    def test_identical_runs_identical_models(self, mini_corpora):
        corpus = mini_corpora["en"][:200]
        a = train(corpus, 500, ByteDomain.UTF8)
        b = train(corpus, 500, ByteDomain.UTF8)
        assert a.dumps() == b.dumps()

    def test_shard_count_does_not_change_model(self, mini_corpora):
        corpus = mini_corpora["ko"][:200]
        reference = train(corpus, 400, ByteDomain.UTF16LE, shards=1)
        for shards in (2, 3, 16):
            assert train(corpus, 400, ByteDomain.UTF16LE, shards=shards).dumps() == reference.dumps()

    @pytest.mark.skipif(len(available_backends()) < 2, reason="needs both backends")
    def test_backends_train_identically(self, mini_corpora):
        corpus = mini_corpora["en"][:150] + mini_corpora["zh"][:150]
        models = {
            backend: train(corpus, 600, ByteDomain.UTF16LE, backend=backend)
            for backend in available_backends()
        }
        dumps = [m.dumps() for m in models.values()]
        assert dumps[0] == dumps[1]


class TestMonotoneVocabulary:
    def test_larger_target_extends_smaller(self, mini_corpora):
        corpus = mini_corpora["en"][:150]
        small = train(corpus, 300, ByteDomain.UTF8)
        large = train(corpus, 360, ByteDomain.UTF8)
        assert merge_triples(large)[: len(small.merges)] == merge_triples(small)


class TestOracleEquivalence:
    @given(corpus=corpus_strategy, extra=st.integers(0, 20))
    @settings(max_examples=40)
    def test_matches_reference_trainer(self, corpus, extra):
        for domain in ByteDomain:
            model = train(corpus, 256 + extra, domain)
            expected = oracle_train(corpus, 256 + extra, domain.value)
            assert merge_triples(model) == expected

    def test_matches_reference_on_random_multilingual_corpora(self):
        rng = random.Random(1234)
        for trial in range(15):
            corpus = [random_text(rng, max_len=30) for _ in range(rng.randint(1, 25))]
            target = 256 + rng.randint(0, 30)
            for domain in ByteDomain:
                model = train(corpus, target, domain)
                assert merge_triples(model) == oracle_train(corpus, target, domain.value), (
                    trial,
                    domain,
                    corpus,
                )

    def test_matches_reference_with_specials_offset(self):
        corpus = ["aaab", "aab", "aaab"]
        model = train(corpus, 260, ByteDomain.UTF8, specials=["<unk>"])
        assert merge_triples(model) == oracle_train(corpus, 260, "utf8", n_specials=1)
