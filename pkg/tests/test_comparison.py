"""Run-test kernel and its closed-form law.

Monte Carlo assertions use four-sigma bands; closed-form expectations were
frozen from independent oracles (power series, brute-force integration
over ordered uniform tuples) coded alongside the tests.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fvn.bitstream import UniformSource
from fvn.comparison import (DensitySpec, expected_run_length,
                            odd_parity_probability, run_length_pmf, run_test,
                            sample_density)
from tests.test_bitstream import FakeEngine, raw_from_word

# sum of x^k/k!, the oracle for everything exp-shaped in this file
def _exp_series(x, terms=40):
    total, term = 1.0, 1.0
    for k in range(1, terms):
        term *= x / k
        total += term
    return total


E_SERIES = _exp_series(1.0)                 # 2.718281828459045
EXP_MINUS_1_SERIES = _exp_series(-1.0)      # 0.36787944117144233


def _pmf_by_brute_force(g, n, rng, trials=2_000_000):
    """Prob(run length == n) estimated from raw ordered uniform tuples."""
    u = rng.random((trials, n + 1))
    ok = np.ones(trials, dtype=bool)
    prev = np.full(trials, g)
    for j in range(n - 1):
        ok &= u[:, j] < prev
        prev = u[:, j]
    return float(np.mean(ok & (u[:, n - 1] >= prev)))


def test_run_test_g_zero_always_accepts_with_n_one():
    src = UniformSource(3)
    for _ in range(1000):
        r = run_test(0.0, src)
        assert r.accepted and r.n == 1 and r.uniforms_used == 1
        assert r.terminal_pair[0] == 0.0


def test_run_test_rejects_out_of_range_g():
    src = UniformSource(0)
    for bad in (-0.1, 1.1, float("nan")):
        with pytest.raises(ValueError):
            run_test(bad, src)


def test_run_test_terminal_pair_ordered():
    src = UniformSource(11)
    for _ in range(2000):
        lo, hi = run_test(0.8, src).terminal_pair
        assert lo <= hi


def test_run_test_acceptance_rate_at_g_one():
    n = 1_000_000
    src = UniformSource(101, recycling=False)
    hits = sum(1 for _ in range(n) if run_test(1.0, src).accepted)
    p = EXP_MINUS_1_SERIES
    sigma = math.sqrt(p * (1 - p) * n)
    assert abs(hits - n * p) < 4 * sigma


def test_run_test_prob_n_two_at_g_half():
    # p_2 = g - g^2/2 = 0.375 at g = 0.5
    n = 1_000_000
    src = UniformSource(102, recycling=False)
    hits = sum(1 for _ in range(n) if run_test(0.5, src).n == 2)
    sigma = math.sqrt(0.375 * 0.625 * n)
    assert abs(hits - n * 0.375) < 4 * sigma


def test_run_test_length_capped_on_broken_input():
    # an engine emitting a strictly decreasing ramp never terminates a run
    top = 2 ** 53 - 1
    words = [raw_from_word(top - i) for i in range(100)]
    src = UniformSource(0, engine=FakeEngine(words), recycling=False)
    with pytest.raises(RuntimeError):
        run_test(1.0, src)


def test_pmf_boundary_values():
    assert run_length_pmf(0.0, 1) == 1.0
    assert run_length_pmf(1.0, 1) == 0.0
    assert run_length_pmf(0.5, 3) == pytest.approx(0.10416666666666667, abs=1e-16)


def test_pmf_matches_brute_force_integration():
    rng = np.random.default_rng(2718)
    for g, n in ((0.5, 2), (0.5, 3), (1.0, 3), (0.25, 1)):
        est = _pmf_by_brute_force(g, n, rng)
        p = run_length_pmf(g, n)
        sigma = math.sqrt(p * (1 - p) / 2_000_000)
        assert abs(est - p) < 4 * sigma, (g, n)


def test_pmf_validates_arguments():
    with pytest.raises(ValueError):
        run_length_pmf(1.5, 1)
    with pytest.raises(ValueError):
        run_length_pmf(0.5, 0)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0), st.integers(1, 20))
def test_pmf_telescopes_exactly(g, big_n):
    total = sum(run_length_pmf(g, n) for n in range(1, big_n + 1))
    assert total == pytest.approx(1.0 - g ** big_n / math.factorial(big_n),
                                  abs=1e-12)


def test_expected_run_length_values():
    assert expected_run_length(0.0) == 1.0
    assert expected_run_length(1.0) == pytest.approx(E_SERIES, abs=1e-15)


def test_expected_run_length_matches_simulation():
    n = 1_000_000
    src = UniformSource(103, recycling=False)
    lengths = np.array([run_test(0.7, src).n for _ in range(n)])
    se = lengths.std(ddof=1) / math.sqrt(n)
    assert abs(lengths.mean() - _exp_series(0.7)) < 4 * se


def test_odd_parity_probability_values():
    assert odd_parity_probability(0.0) == 1.0
    assert odd_parity_probability(1.0) == pytest.approx(EXP_MINUS_1_SERIES,
                                                        abs=1e-15)


@pytest.mark.parametrize("g", [0.25, 0.5, 1.0])
def test_odd_parity_equals_partial_alternating_sum(g):
    partial = sum((-g) ** k / math.factorial(k) for k in range(21))
    assert abs(odd_parity_probability(g) - partial) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0))
def test_odd_parity_equals_odd_pmf_sum(g):
    odd_sum = sum(run_length_pmf(g, n) for n in range(1, 31, 2))
    assert abs(odd_parity_probability(g) - odd_sum) < 1e-12


def test_run_length_histogram_matches_pmf():
    from fvn.stats import chi_square_test

    n = 200_000
    src = UniformSource(104, recycling=False)
    counts = [0] * 9
    for _ in range(n):
        counts[min(run_test(1.0, src).n, 9) - 1] += 1
    probs = [run_length_pmf(1.0, m) for m in range(1, 9)]
    probs.append(1.0 - sum(probs))
    assert chi_square_test(counts, probs, n).passed


def test_density_spec_audits_g_on_a_grid():
    with pytest.raises(ValueError):
        DensitySpec(lambda x: 1.2 * x, 0.0, 1.0)
    with pytest.raises(ValueError):
        DensitySpec(lambda x: x - 0.5, 0.0, 1.0)
    with pytest.raises(ValueError):
        DensitySpec(lambda x: 0.0, 1.0, 1.0)


def test_sample_density_flat_g_is_uniform_with_unit_acceptance():
    spec = DensitySpec(lambda x: 0.0, 2.0, 5.0)
    src = UniformSource(105, recycling=False)
    n = 100_000
    values = np.array([sample_density(spec, src) for _ in range(n)])
    # every trial accepts at n = 1: candidate plus one run draw
    assert src.draws == 2 * n
    x = np.sort((values - 2.0) / 3.0)
    d = max(np.max(np.arange(1, n + 1) / n - x),
            np.max(x - np.arange(0, n) / n))
    assert d < 1.6276 / math.sqrt(n)


def test_sample_density_truncated_exponential():
    ln2 = math.log(2.0)
    spec = DensitySpec(lambda x: x, 0.0, ln2)
    src = UniformSource(106)
    n = 1_000_000
    x = np.sort([sample_density(spec, src) for _ in range(n)])
    cdf = -np.expm1(-x) / -math.expm1(-ln2)
    steps = np.arange(1, n + 1) / n
    d = max(np.max(steps - cdf), np.max(cdf - (steps - 1.0 / n)))
    assert d < 1.6276 / math.sqrt(n)


def test_sample_density_gaussian_kernel_histogram():
    from scipy import integrate

    from fvn.stats import chi_square_test

    spec = DensitySpec(lambda x: 0.5 * x * x, 0.0, 1.0)
    src = UniformSource(107)
    n = 200_000
    values = [sample_density(spec, src) for _ in range(n)]
    edges = np.linspace(0.0, 1.0, 11)
    counts, _ = np.histogram(values, bins=edges)
    norm = integrate.quad(lambda t: math.exp(-t * t / 2), 0.0, 1.0)[0]
    probs = [integrate.quad(lambda t: math.exp(-t * t / 2), a, b)[0] / norm
             for a, b in zip(edges, edges[1:])]
    assert chi_square_test(counts.tolist(), probs, n).passed


def test_sample_density_seed_independent_distribution():
    from scipy.stats import ks_2samp

    spec = DensitySpec(lambda x: x, 0.0, math.log(2.0))
    n = 100_000
    src_a, src_b = UniformSource(108), UniformSource(208)
    a = [sample_density(spec, src_a) for _ in range(n)]
    b = [sample_density(spec, src_b) for _ in range(n)]
    assert ks_2samp(a, b).pvalue > 0.01
