import math

import numpy as np
import pytest
from scipy.special import softmax

from core.errors import DomainError, IngestionError
from decoding import (
    DecodingPolicy,
    EntropyObjectiveConfig,
    SequenceDistribution,
    TokenDistribution,
    effective_temperature,
    entropy_gradient,
    entropy_objective,
    sample_token,
    sample_tokens,
    sequence_confidence,
    sequence_entropy_loss,
    token_entropy,
    top_p_filter,
)
from decoding.matrix_io import read_matrix, write_matrix

DRAWS = 100_000


def one_hot(size, index=0):
    probs = np.zeros(size)
    probs[index] = 1.0
    return TokenDistribution(probs)


def uniform(size):
    return TokenDistribution(np.full(size, 1.0 / size))


def within_three_sigma(draws, expected):
    counts = np.bincount(draws, minlength=len(expected)) / len(draws)
    sigma = np.sqrt(np.asarray(expected) * (1 - np.asarray(expected)) / len(draws))
    return np.all(np.abs(counts - expected) <= 3 * sigma + 1e-12)


# --- entropy ---------------------------------------------------------------------------


def test_token_entropy_examples():
    assert token_entropy(one_hot(5)) == 0.0
    assert token_entropy(uniform(7)) == pytest.approx(math.log(7))
    assert token_entropy(TokenDistribution([0.5, 0.25, 0.25])) == pytest.approx(1.039721, abs=1e-6)


def test_token_entropy_is_maximal_at_uniform():
    rng = np.random.default_rng(0)
    base = np.full(6, 1 / 6)
    for _ in range(100):
        noise = rng.normal(scale=0.01, size=6)
        noise -= noise.mean()
        probs = np.clip(base + noise, 0, None)
        probs /= probs.sum()
        assert token_entropy(TokenDistribution(probs)) <= math.log(6) + 1e-12


def test_unnormalized_distribution_is_rejected():
    with pytest.raises(DomainError):
        TokenDistribution([0.5, 0.4])


def test_sequence_entropy_loss_examples():
    assert sequence_entropy_loss(SequenceDistribution((one_hot(4), one_hot(4, 2)))) == 0.0
    assert sequence_entropy_loss(SequenceDistribution((one_hot(4), uniform(4)))) == pytest.approx(math.log(4) / 2)
    single = TokenDistribution([0.2, 0.3, 0.5])
    assert sequence_entropy_loss(SequenceDistribution((single,))) == pytest.approx(token_entropy(single))


# --- gradient ----------------------------------------------------------------------------


def entropy_of_logits(logits):
    q = softmax(logits)
    return float(-np.sum(q * np.log(q)))


def finite_difference(logits, step=1e-5):
    grad = np.empty_like(logits)
    for j in range(logits.size):
        up, down = logits.copy(), logits.copy()
        up[j] += step
        down[j] -= step
        grad[j] = (entropy_of_logits(up) - entropy_of_logits(down)) / (2 * step)
    return grad


@pytest.mark.parametrize("vocab", [2, 10, 100])
def test_entropy_gradient_matches_finite_differences(vocab):
    rng = np.random.default_rng(vocab)
    for _ in range(100):
        logits = rng.uniform(-5, 5, size=vocab)
        np.testing.assert_allclose(entropy_gradient(logits), finite_difference(logits), rtol=0, atol=1e-6)


def test_entropy_gradient_examples():
    np.testing.assert_allclose(entropy_gradient(np.zeros(5)), 0.0, atol=1e-12)
    logits = np.array([2.0, 0.0, 0.0])
    np.testing.assert_allclose(entropy_gradient(logits), finite_difference(logits), atol=1e-6)
    np.testing.assert_allclose(entropy_gradient(logits + 3.7), entropy_gradient(logits), atol=1e-9)


def test_entropy_gradient_rejects_non_finite_logits():
    with pytest.raises(DomainError):
        entropy_gradient([0.0, np.inf])


# --- objective ---------------------------------------------------------------------------


def test_entropy_objective_example():
    config = EntropyObjectiveConfig(lambda_f=1.0, lambda_r=-0.25)
    assert entropy_objective(0.7, [0.3, 0.5], [0.9], config) == pytest.approx(0.875)


def test_entropy_objective_empty_batches():
    config = EntropyObjectiveConfig(lambda_f=1.0, lambda_r=-0.25)
    assert entropy_objective(0.7, [], [], config) == 0.7


def test_entropy_objective_continuous_in_lambda_r():
    config = EntropyObjectiveConfig(lambda_f=1.0, lambda_r=-1e-12)
    assert entropy_objective(0.7, [0.4], [0.9], config) == pytest.approx(1.1, abs=1e-9)


def test_entropy_objective_config_signs():
    with pytest.raises(DomainError):
        EntropyObjectiveConfig(lambda_f=0.0, lambda_r=-1.0)
    with pytest.raises(DomainError):
        EntropyObjectiveConfig(lambda_f=1.0, lambda_r=0.5)


# --- confidence and temperature ------------------------------------------------------------


def test_sequence_confidence_examples():
    assert sequence_confidence(SequenceDistribution((one_hot(3), one_hot(3, 1)))) == 1.0
    assert sequence_confidence(SequenceDistribution((uniform(4), uniform(4)))) == 0.25
    seq = SequenceDistribution.from_matrix([[0.9, 0.1], [0.3, 0.7]])
    assert sequence_confidence(seq) == pytest.approx(0.8)


def test_effective_temperature_threshold_is_strict():
    policy = DecodingPolicy(base_temperature=1.0, confidence_threshold=0.9)
    assert effective_temperature(0.95, policy) == 0.0
    assert effective_temperature(0.5, policy) == 1.0
    assert effective_temperature(0.9, policy) == 1.0


def test_full_confidence_only_for_one_hot_steps():
    rng = np.random.default_rng(5)
    for _ in range(200):
        matrix = np.zeros((4, 6))
        matrix[np.arange(4), rng.integers(0, 6, size=4)] = 1.0
        assert sequence_confidence(SequenceDistribution.from_matrix(matrix)) == 1.0

        row, spill = rng.integers(0, 4), rng.uniform(1e-9, 0.5)
        top = int(np.argmax(matrix[row]))
        matrix[row, top] -= spill
        matrix[row, (top + 1) % 6] += spill
        assert sequence_confidence(SequenceDistribution.from_matrix(matrix)) < 1.0


def test_effective_temperature_non_increasing_in_confidence():
    policy = DecodingPolicy(base_temperature=0.7, confidence_threshold=0.6)
    temperatures = [effective_temperature(c, policy) for c in np.linspace(0.0, 1.0, 101)]
    assert all(t2 <= t1 for t1, t2 in zip(temperatures, temperatures[1:]))
    assert set(temperatures) == {0.0, 0.7}


def test_default_policy_values():
    policy = DecodingPolicy()
    assert (policy.base_temperature, policy.confidence_threshold, policy.top_p) == (1.0, 0.9, 0.9)


# --- sampling ------------------------------------------------------------------------------


def test_top_p_filter_keeps_crossing_token():
    np.testing.assert_allclose(top_p_filter(np.array([0.5, 0.3, 0.2]), 0.7), [0.625, 0.375, 0.0])
    np.testing.assert_allclose(top_p_filter(np.array([0.2, 0.5, 0.3]), 0.5), [0.0, 1.0, 0.0])
    with pytest.raises(DomainError):
        top_p_filter(np.array([1.0]), 0.0)


def test_top_p_filter_preserves_ratios_of_kept_tokens():
    rng = np.random.default_rng(8)
    for _ in range(200):
        probs = rng.dirichlet(np.full(12, 0.5))
        filtered = top_p_filter(probs, float(rng.uniform(0.05, 1.0)))
        kept = np.flatnonzero(filtered)
        assert filtered.sum() == pytest.approx(1.0, abs=1e-12)
        ratios = filtered[kept] / probs[kept]
        np.testing.assert_allclose(ratios, ratios[0], rtol=1e-12, atol=0)
        # the nucleus is a prefix of the descending order
        assert probs[kept].min() >= probs[np.setdiff1d(np.arange(12), kept)].max(initial=0.0)


def test_greedy_sampling_breaks_ties_to_lowest_index():
    dist = TokenDistribution([0.4, 0.4, 0.2])
    assert sample_token(dist, 0.0, 0.9, rng=1) == 0


def test_top_p_sampling_frequencies():
    dist = TokenDistribution([0.5, 0.3, 0.2])
    draws = sample_tokens(dist, 1.0, 0.7, np.random.default_rng(42), DRAWS)
    assert within_three_sigma(draws, [0.625, 0.375, 0.0])


def test_full_nucleus_matches_distribution():
    dist = TokenDistribution([0.5, 0.3, 0.2])
    draws = sample_tokens(dist, 1.0, 1.0, np.random.default_rng(43), DRAWS)
    assert within_three_sigma(draws, [0.5, 0.3, 0.2])


def test_near_zero_temperature_is_argmax():
    dist = TokenDistribution([0.3, 0.45, 0.25])
    draws = sample_tokens(dist, 1e-4, 1.0, np.random.default_rng(44), DRAWS)
    assert np.mean(draws == 1) >= 0.999


def test_sampling_is_deterministic_given_seed():
    dist = TokenDistribution([0.1, 0.2, 0.3, 0.4])
    first = sample_tokens(dist, 1.0, 0.9, 7, 100)
    second = sample_tokens(dist, 1.0, 0.9, 7, 100)
    np.testing.assert_array_equal(first, second)


def test_sampling_requires_explicit_rng():
    with pytest.raises(TypeError):
        sample_token(TokenDistribution([0.5, 0.5]), 1.0, 1.0, None)


# --- matrix files --------------------------------------------------------------------------


def test_matrix_file_round_trip(tmp_path):
    seq = SequenceDistribution.from_matrix(softmax(np.random.default_rng(0).normal(size=(3, 5)), axis=1))
    path = tmp_path / "probs.txt"
    write_matrix(seq, path)
    assert path.read_text().startswith("# probe-matrix/1 vocab=5 steps=3")
    np.testing.assert_array_equal(read_matrix(path).matrix, seq.matrix)


def test_matrix_file_bad_row_names_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("# probe-matrix/1 vocab=2 steps=2\n0.5 0.5\n0.9 0.9\n")
    with pytest.raises(IngestionError) as excinfo:
        read_matrix(path)
    assert excinfo.value.line_no == 3


def test_matrix_file_error_line_counts_blank_and_comment_lines(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("# probe-matrix/1 vocab=2 steps=2\n\n# step one\n0.5 0.5\n\n0.9 0.9\n")
    with pytest.raises(IngestionError) as excinfo:
        read_matrix(path)
    assert excinfo.value.line_no == 6


def test_matrix_file_comment_and_blank_lines_are_skipped(tmp_path):
    path = tmp_path / "probs.txt"
    path.write_text("# probe-matrix/1 vocab=2 steps=2\n# first\n0.25 0.75  # trailing\n\n1 0\n")
    np.testing.assert_array_equal(read_matrix(path).matrix, [[0.25, 0.75], [1.0, 0.0]])


@pytest.mark.parametrize("header", ["vocab=2 steps=0", "vocab=0 steps=1"])
def test_matrix_file_empty_header_is_ingestion_error(tmp_path, header):
    path = tmp_path / "empty.txt"
    path.write_text(f"# probe-matrix/1 {header}\n")
    with pytest.raises(IngestionError) as excinfo:
        read_matrix(path)
    assert excinfo.value.line_no == 1
    assert excinfo.value.exit_code == 3


def test_matrix_file_shape_mismatch(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("# probe-matrix/1 vocab=3 steps=1\n0.5 0.5\n")
    with pytest.raises(IngestionError):
        read_matrix(path)
