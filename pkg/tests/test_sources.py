"""Tests for the correlated source family: frozen entropy values, PMF shape,
sampling statistics, and the conditional-entropy identity."""

import math

import numpy as np
import pytest

from modsum.modmat import ModVector
from modsum.sources import (
    JointSourceModel,
    SequencePair,
    TypeStats,
    conditional_entropies,
    empirical_entropy,
    entropy_Z,
    joint_pmf,
    modsum,
    sample_pair,
    shannon_entropy_bits,
    sw_sum_rate,
    type_of,
)

# Hand-derived anchors: h2(0.05), h2(0.9), and the M=4 theta=0.01 sum entropy.
H_BIN_005 = 0.2863969571
H_BIN_09 = 0.4689955936
H_M4_001 = 0.2419407329


def grid_models():
    for m in [2, 3, 4, 5, 8]:
        upper = 1.0 / (m - 1)
        for frac in [0.02, 0.3, 0.5, 0.9, 0.98]:
            yield JointSourceModel(M=m, theta=frac * upper)


# ----------------------------------------------------------------- validation


def test_theta_domain_is_open():
    JointSourceModel(M=2, theta=0.999)
    with pytest.raises(ValueError):
        JointSourceModel(M=2, theta=0.0)
    with pytest.raises(ValueError):
        JointSourceModel(M=2, theta=1.0)
    with pytest.raises(ValueError):
        JointSourceModel(M=4, theta=1.0 / 3.0 + 1e-12)
    with pytest.raises(ValueError):
        JointSourceModel(M=1, theta=0.5)
    with pytest.raises(TypeError):
        JointSourceModel(M=2.0, theta=0.5)


# ------------------------------------------------------------------ joint pmf


def test_joint_pmf_binary_values():
    pmf = joint_pmf(JointSourceModel(M=2, theta=0.05))
    assert pmf[0, 0] == pytest.approx(0.025)
    assert pmf[1, 1] == pytest.approx(0.025)
    assert pmf[0, 1] == pytest.approx(0.475)
    assert pmf[1, 0] == pytest.approx(0.475)


def test_joint_pmf_uniform_theta_half_is_flat():
    pmf = joint_pmf(JointSourceModel(M=2, theta=0.5))
    assert np.allclose(pmf, 0.25)


def test_joint_pmf_m4_values():
    pmf = joint_pmf(JointSourceModel(M=4, theta=0.01))
    anti = [(i, 3 - i) for i in range(4)]
    for i in range(4):
        for j in range(4):
            if (i, j) in anti:
                assert pmf[i, j] == pytest.approx((1 - 0.03) / 4)  # 0.2425
            else:
                assert pmf[i, j] == pytest.approx(0.0025)


def test_joint_pmf_marginals_uniform_and_normalized():
    for model in grid_models():
        pmf = joint_pmf(model)
        assert pmf.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(pmf.sum(axis=0), 1.0 / model.M, atol=1e-12)
        assert np.allclose(pmf.sum(axis=1), 1.0 / model.M, atol=1e-12)
        assert (pmf > 0).all()


# ------------------------------------------------------------------ entropies


def test_entropy_z_frozen_values():
    assert entropy_Z(JointSourceModel(2, 0.5)) == pytest.approx(1.0, abs=1e-12)
    assert entropy_Z(JointSourceModel(2, 0.05)) == pytest.approx(H_BIN_005, abs=1e-9)
    assert entropy_Z(JointSourceModel(2, 0.9)) == pytest.approx(H_BIN_09, abs=1e-9)
    assert entropy_Z(JointSourceModel(4, 0.01)) == pytest.approx(H_M4_001, abs=1e-9)


def test_sw_sum_rate_frozen_values():
    assert sw_sum_rate(JointSourceModel(2, 0.05)) == pytest.approx(1.0 + H_BIN_005, abs=1e-9)
    assert sw_sum_rate(JointSourceModel(2, 0.9)) == pytest.approx(1.0 + H_BIN_09, abs=1e-9)
    assert sw_sum_rate(JointSourceModel(4, 0.01)) == pytest.approx(2.0 + H_M4_001, abs=1e-9)


def test_conditional_entropies_match_entropy_z():
    # H(X|Y) == H(Y|X) == H(Z) is the structural identity of the family.
    for model in grid_models():
        h_xy, h_yx = conditional_entropies(model)
        hz = entropy_Z(model)
        assert abs(h_xy - hz) < 1e-12
        assert abs(h_yx - hz) < 1e-12


def test_sum_rate_identity():
    for model in grid_models():
        expect = entropy_Z(model) + math.log2(model.M)
        assert abs(sw_sum_rate(model) - expect) < 1e-12


def test_shannon_entropy_rejects_junk():
    with pytest.raises(ValueError):
        shannon_entropy_bits(np.array([0.5, 0.4]))
    with pytest.raises(ValueError):
        shannon_entropy_bits(np.array([1.2, -0.2]))


# ------------------------------------------------------------------- sampling


def test_sampling_is_deterministic_given_seed():
    model = JointSourceModel(2, 0.05)
    a = sample_pair(model, 64, 1234)
    b = sample_pair(model, 64, 1234)
    c = sample_pair(model, 64, 4321)
    assert a.x == b.x and a.y == b.y
    assert a.x != c.x or a.y != c.y


def test_sampling_matches_joint_pmf():
    model = JointSourceModel(2, 0.05)
    pair = sample_pair(model, 1_000_000, 20240805)
    pmf = joint_pmf(model)
    for i in range(2):
        for j in range(2):
            freq = np.mean((pair.x.entries == i) & (pair.y.entries == j))
            assert abs(freq - pmf[i, j]) < 0.005


def test_sampling_marginals_uniform_m4():
    model = JointSourceModel(4, 0.06)
    pair = sample_pair(model, 400_000, 99)
    for sym in range(4):
        assert abs(np.mean(pair.x.entries == sym) - 0.25) < 0.005
        assert abs(np.mean(pair.y.entries == sym) - 0.25) < 0.005


def test_sample_rejects_bad_length():
    with pytest.raises(ValueError):
        sample_pair(JointSourceModel(2, 0.5), 0, 1)


# --------------------------------------------------------------------- modsum


def test_modsum_hand_example():
    pair = SequencePair(
        x=ModVector([0, 1, 2, 3], 4),
        y=ModVector([3, 3, 3, 3], 4),
    )
    assert modsum(pair).entries.tolist() == [3, 0, 1, 2]


def test_modsum_distribution():
    model = JointSourceModel(4, 0.01)
    pair = sample_pair(model, 500_000, 7)
    z = modsum(pair)
    assert abs(np.mean(z.entries == 3) - 0.97) < 0.005
    for sym in range(3):
        assert abs(np.mean(z.entries == sym) - 0.01) < 0.005


def test_pair_halves_must_align():
    with pytest.raises(ValueError):
        SequencePair(x=ModVector([0, 1], 2), y=ModVector([0], 2))
    with pytest.raises(ValueError):
        SequencePair(x=ModVector([0, 1], 2), y=ModVector([0, 1], 3))


# ----------------------------------------------------------------------- type


def test_type_of_and_entropy_examples():
    stats = type_of(ModVector([0, 1, 1, 0, 2], 3))
    assert stats == TypeStats(counts=(2, 2, 1), n=5)
    assert empirical_entropy(stats) == pytest.approx(1.5219280949, abs=1e-9)

    flat = type_of(ModVector([2, 2, 2], 5))
    assert flat.counts == (0, 0, 3, 0, 0)
    assert empirical_entropy(flat) == 0.0

    half = TypeStats(counts=(1, 1, 2), n=4)
    assert empirical_entropy(half) == pytest.approx(1.5, abs=1e-12)


def test_type_stats_validation():
    with pytest.raises(ValueError):
        TypeStats(counts=(1, 2), n=4)
