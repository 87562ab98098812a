# tests/test_stats.py

from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import binom

from app.core.exceptions import (
    DegenerateSampleException,
    EmptyDirectoryException,
    EmptyInputException,
    InvalidBitsException,
    InvalidThresholdRequestException,
    LengthMismatchException,
    UnbalancedWatermarkException,
)
from app.db.schemas.codec import Watermark
from app.db.schemas.stats import AttributionDirectory
from app.services.codec.embedding import random_watermark
from app.services.stats.attribution import attribute
from app.services.stats.metrics import bit_accuracy, detect, match_count, tpr_over_samples
from app.services.stats.significance import normality_test, two_proportion_test, welch_ttest
from app.services.stats.thresholds import (
    _exact_threshold,
    _log_threshold,
    attribution_threshold,
    binomial_tail,
    detection_threshold,
    predict_vote_accuracy,
)


# --- metrics ---


def test_bit_accuracy_and_matches():
    assert match_count("0101", "0111") == 3
    assert bit_accuracy("0101", np.array([0, 1, 1, 1])) == 0.75
    assert bit_accuracy(Watermark(bits="0101"), "0101") == 1.0


def test_metrics_errors():
    with pytest.raises(LengthMismatchException):
        bit_accuracy("0101", "01")
    with pytest.raises(EmptyInputException):
        match_count([], [])


def test_bit_accuracy_is_symmetric_and_complement_is_zero():
    rng = np.random.default_rng(8)
    for _ in range(20):
        a, b = rng.integers(0, 2, size=64), rng.integers(0, 2, size=64)
        assert bit_accuracy(a, b) == bit_accuracy(b, a)
    m = random_watermark(256, 8)
    assert bit_accuracy(m, 1 - m.as_array()) == 0.0


@pytest.mark.parametrize("bad", ["0a", "01 1", "0121"])
def test_bit_strings_reject_other_characters(bad):
    with pytest.raises(InvalidBitsException):
        bit_accuracy(bad, "01" * (len(bad) // 2))


def test_bit_arrays_reject_other_values():
    with pytest.raises(InvalidBitsException):
        match_count(np.array([0, 2]), np.array([0, 1]))
    with pytest.raises(InvalidBitsException):
        match_count([0, -1], [0, 1])


# --- thresholds ---


@pytest.mark.parametrize(
    "k_bits, fpr, tau",
    [(32, 1e-6, 30), (48, 1e-6, 41), (256, 1e-6, 167), (32, 1e-4, 27), (48, 1e-4, 38), (256, 1e-4, 159)],
)
def test_detection_thresholds(k_bits, fpr, tau):
    threshold = detection_threshold(k_bits, fpr)
    assert threshold.tau == tau
    # минимальность: на единицу ниже граница уже нарушена
    assert binomial_tail(k_bits, tau) <= Fraction(fpr)
    assert binomial_tail(k_bits, tau - 1) > Fraction(fpr)
    assert threshold.false_positive_rate < threshold.tail_at_tau <= fpr


def test_default_fpr_comes_from_settings():
    assert detection_threshold(256).fpr_bound == 1e-6


@pytest.mark.parametrize("k_bits", [1, 32, 48, 256, 1000, 4096])
def test_log_path_agrees_with_exact_path(k_bits):
    assert _log_threshold(k_bits, 1e-6) == _exact_threshold(k_bits, 1e-6)


def test_unreachable_bound_gives_k_plus_one():
    # для K = 8 даже P(X ≥ 8) = 1/256 > 10⁻⁶
    assert detection_threshold(8, 1e-6).tau == 9
    assert binomial_tail(8, 9) == 0
    assert binomial_tail(8, 0) == 1


@pytest.mark.parametrize("k_bits, fpr", [(0, 1e-6), (256, 0.0), (256, 1.0), (256, -0.5)])
def test_invalid_threshold_requests(k_bits, fpr):
    with pytest.raises(InvalidThresholdRequestException):
        detection_threshold(k_bits, fpr)


def test_attribution_threshold_is_stricter():
    assert attribution_threshold(256, 1) == 167
    assert attribution_threshold(256, 1000) > 167
    with pytest.raises(InvalidThresholdRequestException):
        attribution_threshold(256, 0)


# --- detect / tpr ---


def _with_matches(m: Watermark, matches: int) -> np.ndarray:
    bits = m.as_array().copy()
    bits[matches:] ^= 1
    return bits


def test_detect_is_strictly_above_tau():
    m = random_watermark(256, 1)
    threshold = detection_threshold(256, 1e-6)
    assert detect(m, _with_matches(m, 168), threshold)
    assert not detect(m, _with_matches(m, 167), threshold)


def test_detect_is_monotone_in_matches():
    m = random_watermark(256, 3)
    threshold = detection_threshold(256, 1e-6)
    decisions = [detect(m, _with_matches(m, matches), threshold) for matches in range(257)]
    assert decisions == sorted(decisions)
    assert decisions.index(True) == 168


def test_detect_rejects_wrong_length():
    with pytest.raises(LengthMismatchException):
        detect("01" * 16, "01" * 16, detection_threshold(256))


def test_tpr_over_samples():
    m = random_watermark(256, 2)
    threshold = detection_threshold(256)
    pairs = [(m, m)] * 7 + [(m, _with_matches(m, 0))] * 3
    assert tpr_over_samples(pairs, threshold) == pytest.approx(0.7)
    with pytest.raises(EmptyInputException):
        tpr_over_samples([], threshold)


# --- attribute ---


def test_attribution_finds_the_user():
    signatures = [random_watermark(256, seed) for seed in (10, 11, 12)]
    directory = AttributionDirectory(signatures=signatures)
    m_prime = _with_matches(signatures[1], 246)
    result = attribute(m_prime, directory)
    assert result.user == 1
    assert result.match_count == 246
    assert result.tau_attr == attribution_threshold(256, 3)


def test_attribution_below_threshold_is_none():
    signatures = [random_watermark(256, seed) for seed in (20, 21)]
    result = attribute(random_watermark(256, 99), AttributionDirectory(signatures=signatures))
    assert result.user is None


@pytest.mark.slow
def test_independent_bits_are_not_attributed():
    directory = AttributionDirectory(signatures=[random_watermark(256, seed) for seed in range(1000)])
    rng = np.random.default_rng(12)
    for _ in range(1000):
        assert attribute(rng.integers(0, 2, size=256), directory).user is None


def test_attribution_tie_is_none():
    directory = AttributionDirectory(signatures=[Watermark(bits="0011"), Watermark(bits="0101")], tau_attr=0)
    result = attribute("0111", directory)
    assert result.user is None
    assert result.match_count == 3


def test_directory_validation():
    with pytest.raises(EmptyDirectoryException):
        AttributionDirectory(signatures=[])
    with pytest.raises(UnbalancedWatermarkException):
        AttributionDirectory(signatures=[Watermark(bits="0101"), Watermark(bits="0101")])
    with pytest.raises(UnbalancedWatermarkException):
        AttributionDirectory(signatures=[Watermark(bits="01"), Watermark(bits="0101")])


def test_attribution_length_mismatch():
    directory = AttributionDirectory(signatures=[Watermark(bits="0101")])
    with pytest.raises(LengthMismatchException):
        attribute("01", directory)


# --- significance ---


def test_welch_example():
    result = welch_ttest([1, 2, 3, 4], [2, 4, 6, 8, 10])
    assert result.t_value == pytest.approx(-2.2514, abs=1e-3)
    assert result.df == pytest.approx(5.5209, abs=1e-3)
    assert result.significant
    assert not welch_ttest([1, 2, 3, 4], [2, 4, 6, 8, 10], t_critical=3.0).significant


def test_welch_identical_samples():
    result = welch_ttest([1.0, 2.0, 3.0, 4.0], [1.0, 2.0, 3.0, 4.0])
    assert result.t_value == 0.0
    assert not result.significant


def test_welch_false_positive_rate():
    rng = np.random.default_rng(13)
    hits = sum(welch_ttest(rng.normal(size=10), rng.normal(size=10)).significant for _ in range(10_000))
    # df ≤ 18, поэтому порог 2.101 даёт около 5% ложных срабатываний
    assert abs(hits / 10_000 - 0.05) <= 0.01


@pytest.mark.parametrize("a, b", [([1.0], [1.0, 2.0]), ([1.0, 1.0], [2.0, 2.0])])
def test_welch_degenerate(a, b):
    with pytest.raises(DegenerateSampleException):
        welch_ttest(a, b)


def test_normality_test():
    rng = np.random.default_rng(3)
    assert normality_test(rng.standard_normal(5000)).passed
    assert not normality_test(np.linspace(0.0, 1.0, 1000)).passed
    with pytest.raises(EmptyInputException):
        normality_test([])


def test_two_proportion_test():
    result = two_proportion_test(90, 100, 70, 100)
    assert result.z_value == pytest.approx(3.5355, abs=1e-3)
    assert result.p_value == pytest.approx(0.000407, abs=2e-5)
    flat = two_proportion_test(0, 10, 0, 10)
    assert flat.z_value == 0.0 and flat.p_value == pytest.approx(1.0)


# --- predict_vote_accuracy ---


@pytest.mark.parametrize("n, q", [(9, 0.8), (33, 0.6), (1, 0.3)])
def test_prediction_matches_binomial_tail_for_odd_votes(n, q):
    assert predict_vote_accuracy(n, q) == pytest.approx(binom.sf(n // 2, n, q))


def test_group_vote_counts_as_one_more_voter():
    assert predict_vote_accuracy(8, 0.8, 0.8) == pytest.approx(binom.sf(4, 9, 0.8))


def test_even_tie_counts_half():
    assert predict_vote_accuracy(2, 0.5) == pytest.approx(0.5)
    assert predict_vote_accuracy(4, 1.0) == pytest.approx(1.0)


def test_prediction_rejects_bad_probability():
    with pytest.raises(InvalidThresholdRequestException):
        predict_vote_accuracy(8, 1.5)
