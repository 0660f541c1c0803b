"""Backend kernel tests: numba and numpy paths agree with a plain reference."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bytebpe import kernels

BACKENDS = kernels.available_backends()

token_seqs = st.lists(
    st.lists(st.integers(0, 4), min_size=1, max_size=10), min_size=1, max_size=8
)


def to_arrays(seqs, weights):
    flat = np.array([t for s in seqs for t in s], np.int32)
    bounds = np.zeros(len(seqs) + 1, np.int64)
    np.cumsum([len(s) for s in seqs], out=bounds[1:])
    return flat, bounds, np.array(weights, np.int64)


def counts_dict(codes, counts):
    return {
        kernels.unpack_pair(int(c)): int(n) for c, n in zip(codes, counts) if int(n) != 0
    }


def ref_counts(seqs, weights):
    out = {}
    for seq, w in zip(seqs, weights):
        for pair in zip(seq, seq[1:]):
            out[pair] = out.get(pair, 0) + w
    return out


def ref_merge(seqs, left, right, new_id):
    merged = []
    for seq in seqs:
        out, i = [], 0
        while i < len(seq):
            if i + 1 < len(seq) and seq[i] == left and seq[i + 1] == right:
                out.append(new_id)
                i += 2
            else:
                out.append(seq[i])
                i += 1
        merged.append(out)
    return merged


def test_pack_unpack_round_trip():
    for pair in [(0, 0), (255, 255), (97, 98), (70000, 3)]:
        assert kernels.unpack_pair(kernels.pack_pair(*pair)) == pair


def test_backend_selection(monkeypatch):
    monkeypatch.setenv("BYTEBPE_JIT", "0")
    assert kernels.get_kernels().name == "numpy"
    monkeypatch.delenv("BYTEBPE_JIT")
    assert kernels.get_kernels().name == ("numba" if kernels.HAS_NUMBA else "numpy")
    with pytest.raises(ValueError):
        kernels.get_kernels("fortran")


@pytest.mark.parametrize("backend", BACKENDS)
class TestKernels:
    @given(seqs=token_seqs, data=st.data())
    def test_pair_counts_match_reference(self, backend, seqs, data):
        weights = data.draw(
            st.lists(st.integers(1, 5), min_size=len(seqs), max_size=len(seqs))
        )
        kern = kernels.get_kernels(backend)
        flat, bounds, w = to_arrays(seqs, weights)
        codes, counts = kern.pair_counts(flat, bounds, w, 0, len(seqs))
        assert counts_dict(codes, counts) == ref_counts(seqs, weights)

    @given(seqs=token_seqs, data=st.data())
    def test_merge_pair_matches_reference(self, backend, seqs, data):
        weights = data.draw(
            st.lists(st.integers(1, 5), min_size=len(seqs), max_size=len(seqs))
        )
        left = data.draw(st.integers(0, 4))
        right = data.draw(st.integers(0, 4))
        kern = kernels.get_kernels(backend)
        flat, bounds, w = to_arrays(seqs, weights)
        new_flat, new_bounds, dcodes, dvals = kern.merge_pair(flat, bounds, w, left, right, 99)

        expected = ref_merge(seqs, left, right, 99)
        exp_flat, exp_bounds, _ = to_arrays(expected, weights)
        assert list(new_flat) == list(exp_flat)
        assert list(new_bounds) == list(exp_bounds)

        before = ref_counts(seqs, weights)
        after = ref_counts(expected, weights)
        expected_deltas = {
            k: after.get(k, 0) - before.get(k, 0)
            for k in set(before) | set(after)
            if after.get(k, 0) != before.get(k, 0)
        }
        assert counts_dict(dcodes, dvals) == expected_deltas

    def test_overlapping_matches_merge_left_to_right(self, backend):
        kern = kernels.get_kernels(backend)
        flat, bounds, w = to_arrays([[7, 7, 7], [7, 7, 7, 7]], [1, 1])
        new_flat, new_bounds, _, _ = kern.merge_pair(flat, bounds, w, 7, 7, 99)
        assert list(new_flat) == [99, 7, 99, 99]
        assert list(new_bounds) == [0, 2, 4]

    def test_empty_input(self, backend):
        kern = kernels.get_kernels(backend)
        flat = np.empty(0, np.int32)
        bounds = np.zeros(1, np.int64)
        w = np.empty(0, np.int64)
        codes, counts = kern.pair_counts(flat, bounds, w, 0, 0)
        assert len(codes) == 0 and len(counts) == 0


@pytest.mark.skipif(len(BACKENDS) < 2, reason="needs both backends")
@given(seqs=token_seqs)
def test_backends_agree(seqs):
    weights = [1] * len(seqs)
    flat, bounds, w = to_arrays(seqs, weights)
    results = []
    for backend in BACKENDS:
        kern = kernels.get_kernels(backend)
        codes, counts = kern.pair_counts(flat, bounds, w, 0, len(seqs))
        results.append(counts_dict(codes, counts))
    assert results[0] == results[1]


def test_sharded_counts_sum_to_unsharded(mini_corpora):
    from bytebpe.codec import ByteDomain
    from bytebpe.trainer import _piece_arrays, _sharded_counts, count_pieces

    pieces = count_pieces(mini_corpora["ko"][:200])
    flat, bounds, weights = _piece_arrays(pieces, ByteDomain.UTF16LE)
    for backend in BACKENDS:
        kern = kernels.get_kernels(backend)
        whole = {}
        for codes, counts in _sharded_counts(kern, flat, bounds, weights, 1):
            for c, n in zip(codes.tolist(), counts.tolist()):
                whole[c] = whole.get(c, 0) + n
        for shards in (2, 3, 8, 64):
            total = {}
            for codes, counts in _sharded_counts(kern, flat, bounds, weights, shards):
                for c, n in zip(codes.tolist(), counts.tolist()):
                    total[c] = total.get(c, 0) + n
            assert total == whole
