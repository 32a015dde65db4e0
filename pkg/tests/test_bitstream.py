"""Uniform source: draw accounting, bit repackaging, recycling."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fvn.bitstream import DEFAULT_WORD_BITS, UniformSource
from fvn.comparison import run_test

W = DEFAULT_WORD_BITS


class FakeEngine:
    """Cycles a fixed list of 64-bit raw words."""

    def __init__(self, words):
        self._words = [int(w) % 2 ** 64 for w in words]
        self._i = 0

    def random_raw(self, size):
        out = np.empty(size, dtype=np.uint64)
        for j in range(size):
            out[j] = self._words[self._i % len(self._words)]
            self._i += 1
        return out


def raw_from_word(word53):
    # engine words are 64-bit; the source keeps the top 53
    return word53 << 11


def test_fresh_uniform_counts_one_draw():
    src = UniformSource(1)
    u = src.next_uniform()
    assert 0.0 <= u < 1.0
    assert src.draws == 1


def test_fresh_uniforms_are_fixed_point():
    src = UniformSource(5)
    for _ in range(1000):
        u = src.next_uniform()
        assert (u * 2.0 ** W) == int(u * 2.0 ** W)


def test_recycled_value_takes_priority_and_costs_nothing():
    src = UniformSource(1)
    src.recycle_pair(0.0, 0.5)
    assert src.recycled == [0.5]
    assert src.next_uniform() == 0.5
    assert src.draws == 0


def test_equal_seeds_give_identical_streams():
    a = UniformSource(987654321)
    b = UniformSource(987654321)
    assert [a.next_uniform() for _ in range(1000)] == \
           [b.next_uniform() for _ in range(1000)]


def test_different_seeds_differ():
    a = UniformSource(1)
    b = UniformSource(2)
    assert [a.next_uniform() for _ in range(10)] != \
           [b.next_uniform() for _ in range(10)]


def test_seed_validation():
    with pytest.raises(ValueError):
        UniformSource(-1)
    with pytest.raises(ValueError):
        UniformSource(2 ** 64)
    with pytest.raises(ValueError):
        UniformSource(0, word_bits=0)
    with pytest.raises(ValueError):
        UniformSource(0, word_bits=60)


def test_geometric_index_top_bit_set_gives_one():
    # u in [1/2, 1): no leading zeros
    src = UniformSource(0, engine=FakeEngine([raw_from_word(1 << (W - 1))]))
    assert src.geometric_index() == 1


def test_geometric_index_u_point_three_gives_two():
    # 0.3 in binary is 0.0100...: one leading zero
    word = int(0.3 * 2 ** W)
    src = UniformSource(0, engine=FakeEngine([raw_from_word(word)]))
    assert src.geometric_index() == 2


def test_geometric_index_all_zero_word_clamps_to_wordlength():
    src = UniformSource(0, engine=FakeEngine([0]))
    assert src.geometric_index() == W
    assert src.recycled == []


def test_geometric_index_repackages_leftover_bits():
    # word 0b001<tail>: k = 3, tail must come back left-justified
    tail = 0b1011
    word = (1 << (W - 3)) | tail
    src = UniformSource(0, engine=FakeEngine([raw_from_word(word)]))
    assert src.geometric_index() == 3
    assert src.recycled == [(tail << 3) * 2.0 ** -W]
    assert src.draws == 1


def test_geometric_index_marginal_frequencies():
    """Empirical Prob(k) vs 2^-k, binomial four-sigma bands, k <= 10."""
    n = 1_000_000
    src = UniformSource(20240617, recycling=False)
    counts = np.zeros(W + 1, dtype=int)
    for _ in range(n):
        counts[src.geometric_index()] += 1
    assert src.draws == n
    for k in range(1, 11):
        p = 2.0 ** -k
        sigma = math.sqrt(p * (1 - p) * n)
        assert abs(counts[k] - n * p) < 4 * sigma, f"k={k}"


def test_recycle_pair_exact_arithmetic():
    src = UniformSource(0)
    src.recycle_pair(0.25, 0.625)
    assert src.recycled == [0.5]
    src.recycled.clear()
    src.recycle_pair(0.0, 0.8125)
    assert src.recycled == [0.8125]


def test_recycle_pair_rejects_decreasing_pair():
    src = UniformSource(0)
    with pytest.raises(ValueError):
        src.recycle_pair(0.7, 0.3)


def test_recycle_pair_skips_degenerate_and_disabled():
    src = UniformSource(0)
    src.recycle_pair(1.0, 1.0)
    assert src.recycled == []
    src.recycling = False
    src.recycle_pair(0.25, 0.625)
    assert src.recycled == []


def test_recycled_values_from_live_runs_are_uniform():
    """KS on 1e5 terminal-pair leftovers collected from real run tests."""
    src = UniformSource(31337, recycling=True)
    values = []
    gs = (0.2, 0.5, 0.9)
    while len(values) < 100_000:
        run_test(gs[len(values) % 3], src)
        values.extend(src.recycled)
        src.recycled.clear()
    x = np.sort(values[:100_000])
    n = x.size
    d = max(np.max(np.arange(1, n + 1) / n - x),
            np.max(x - np.arange(0, n) / n))
    assert d < 1.6276 / math.sqrt(n)   # alpha = 0.01


def test_random_sign_is_balanced():
    n = 1_000_000
    src = UniformSource(77)
    plus = sum(1 for _ in range(n) if src.random_sign() == 1)
    sigma = math.sqrt(0.25 * n)
    assert abs(plus - n / 2) < 4 * sigma


def test_random_sign_deterministic_and_bit_pooled():
    n = 10_007
    a = UniformSource(5)
    b = UniformSource(5)
    assert [a.random_sign() for _ in range(n)] == \
           [b.random_sign() for _ in range(n)]
    # one word serves word_bits calls
    assert a.draws == math.ceil(n / W)


def test_injected_engine_is_used():
    src = UniformSource(0, engine=FakeEngine([raw_from_word(1 << (W - 1))]))
    assert src.next_uniform() == 0.5


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(["uniform", "word", "geometric", "sign"]),
                min_size=1, max_size=300),
       st.integers(min_value=0, max_value=2 ** 64 - 1))
def test_draw_accounting_matches_declared_costs(ops, seed):
    """draws == sum of declared per-operation costs for any interleaving."""
    src = UniformSource(seed, recycling=True)
    expected = 0
    sign_calls = 0
    for op in ops:
        if op == "uniform":
            if not src.recycled:
                expected += 1
            src.next_uniform()
        elif op == "word":
            expected += 1
            src.next_word()
        elif op == "geometric":
            expected += 1
            src.geometric_index()
        else:
            if sign_calls % W == 0:
                expected += 1
            sign_calls += 1
            src.random_sign()
    assert src.draws == expected
