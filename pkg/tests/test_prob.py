import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_distribution, random_joint
from morphocomp.prob import (
    Alphabet,
    DimensionError,
    Distribution,
    InvalidDistributionError,
    Joint3,
    Kernel2,
    Kernel3,
    SupportError,
    chain,
    compose_joint,
    condition,
    conditional_mutual_information,
    kl,
    marginal,
)

B = Alphabet(2)


def binary_loop_tables(phi, psi, zeta, mu, tau):
    """Two-point softmax tables written out directly, as an independent oracle."""
    w = np.array([-1.0, 1.0])
    alpha = np.empty((2, 2, 2))
    for i in range(2):
        for j in range(2):
            e = np.exp(phi * w * w[i] + psi * w * w[j])
            alpha[i, j] = e / e.sum()
    beta = np.empty((2, 2))
    pi = np.empty((2, 2))
    for i in range(2):
        e = np.exp(zeta * w * w[i])
        beta[i] = e / e.sum()
        e = np.exp(mu * w * w[i])
        pi[i] = e / e.sum()
    e = np.exp(tau * w)
    return alpha, beta, pi, e / e.sum()


class TestConstructors:
    def test_alphabet_rejects_size_zero(self):
        with pytest.raises(DimensionError):
            Alphabet(0)

    def test_alphabet_rejects_wrong_label_count(self):
        with pytest.raises(DimensionError):
            Alphabet(3, ("a", "b"))

    def test_distribution_rejects_negative(self):
        with pytest.raises(InvalidDistributionError):
            Distribution(B, [1.1, -0.1])

    def test_distribution_rejects_nan(self):
        with pytest.raises(InvalidDistributionError):
            Distribution(B, [np.nan, 1.0])

    def test_distribution_rejects_bad_sum(self):
        with pytest.raises(InvalidDistributionError):
            Distribution(B, [0.5, 0.5 + 2e-9])

    def test_distribution_renormalizes_small_drift(self):
        d = Distribution(B, [0.5, 0.5 + 5e-10])
        assert d.probs.sum() == pytest.approx(1.0, abs=1e-15)

    def test_distribution_keeps_tiny_drift_untouched(self):
        values = np.array([0.5, 0.5 + 5e-13])
        d = Distribution(B, values)
        np.testing.assert_array_equal(d.probs, values)

    def test_distribution_shape_mismatch(self):
        with pytest.raises(DimensionError):
            Distribution(Alphabet(3), [0.5, 0.5])

    def test_kernel_rows_validated(self):
        with pytest.raises(InvalidDistributionError):
            Kernel2(B, B, [[0.5, 0.5], [0.9, 0.2]])

    def test_joint_global_sum_validated(self):
        with pytest.raises(InvalidDistributionError):
            Joint3(B, B, B, np.full((2, 2, 2), 0.2))

    def test_arrays_are_immutable(self):
        d = Distribution.uniform(B)
        with pytest.raises(ValueError):
            d.probs[0] = 0.3


class TestComposeAndMarginal:
    def test_uniform_everything_gives_uniform_joint(self):
        joint = compose_joint(
            Distribution.uniform(B), Kernel2.uniform(B, B), Kernel3.uniform(B, B, B)
        )
        np.testing.assert_allclose(joint.probs, 1 / 8)

    def test_point_prior_restricts_support(self, rng):
        prior = Distribution.point(B, 1)
        policy = Kernel2(B, B, rng.dirichlet(np.ones(2), size=2))
        kernel = Kernel3(B, B, B, rng.dirichlet(np.ones(2), size=(2, 2)))
        joint = compose_joint(prior, policy, kernel)
        np.testing.assert_array_equal(joint.probs[0], 0.0)

    def test_marginal_recovers_prior(self, rng):
        prior = random_distribution(rng, Alphabet(3))
        policy = Kernel2(Alphabet(3), B, rng.dirichlet(np.ones(2), size=3))
        kernel = Kernel3(Alphabet(3), B, B, rng.dirichlet(np.ones(2), size=(3, 2)))
        joint = compose_joint(prior, policy, kernel)
        np.testing.assert_allclose(marginal(joint, keep=(0,)).probs, prior.probs, atol=1e-15)

    def test_alphabet_mismatch(self):
        with pytest.raises(DimensionError):
            compose_joint(
                Distribution.uniform(Alphabet(3)),
                Kernel2.uniform(B, B),
                Kernel3.uniform(B, B, B),
            )

    def test_marginal_over_everything_is_one(self, rng):
        joint = random_joint(rng, 2, 3, 2)
        assert marginal(joint, drop=(0, 1, 2)) == pytest.approx(1.0, abs=1e-12)

    def test_marginal_uniform_single_axis(self):
        joint = Joint3(B, B, B, np.full((2, 2, 2), 1 / 8))
        np.testing.assert_allclose(marginal(joint, keep=(0,)).probs, [0.5, 0.5])

    def test_marginal_respects_requested_order(self, rng):
        joint = random_joint(rng, 2, 3, 4)
        table = marginal(joint, keep=(2, 0))
        assert table.shape == (4, 2)
        np.testing.assert_allclose(table, joint.probs.sum(axis=1).T)

    def test_marginal_axis_errors(self, rng):
        joint = random_joint(rng, 2, 2, 2)
        with pytest.raises(ValueError):
            marginal(joint)
        with pytest.raises(ValueError):
            marginal(joint, keep=())
        with pytest.raises(ValueError):
            marginal(joint, keep=(0,), drop=(1,))
        with pytest.raises(ValueError):
            marginal(joint, keep=(0, 3))


class TestCondition:
    def test_copy_joint_gives_identity(self):
        probs = np.zeros((2, 2, 2))
        probs[0, 0, 0] = probs[0, 1, 0] = 0.25
        probs[1, 0, 1] = probs[1, 1, 1] = 0.25
        joint = Joint3(B, B, B, probs)
        cond = condition(joint, target=2, given=0)
        np.testing.assert_allclose(cond.table, np.eye(2))
        assert cond.defined.all()

    def test_independent_joint_rows_equal_marginal(self, rng):
        px = rng.dirichlet(np.ones(3))
        pz = rng.dirichlet(np.ones(2))
        probs = px[:, None, None] * np.full((1, 2, 1), 0.5) * pz[None, None, :]
        joint = Joint3(Alphabet(3), B, B, probs)
        cond = condition(joint, target=2, given=0)
        np.testing.assert_allclose(cond.table, np.tile(pz, (3, 1)), atol=1e-15)

    def test_zero_mass_row_is_flagged(self):
        probs = np.zeros((2, 2, 2))
        probs[0] = 0.25
        joint = Joint3(B, B, B, probs)
        cond = condition(joint, target=2, given=0)
        assert cond.defined[0] and not cond.defined[1]
        assert np.isnan(cond.table[1]).all()

    def test_binary_loop_action_drive(self):
        # with only the action coupling switched on the next state copies the action
        alpha, beta, pi, p_w = binary_loop_tables(0.0, 5.0, 20.0, 0.0, 0.0)
        joint = compose_joint(
            Distribution(B, p_w),
            Kernel2(B, B, beta @ pi),
            Kernel3(B, B, B, alpha),
        )
        cond = condition(joint, target=2, given=1)
        np.testing.assert_allclose(cond.table, np.eye(2), atol=1e-4)

    def test_condition_on_two_axes(self, rng):
        joint = random_joint(rng, 2, 3, 2)
        cond = condition(joint, target=2, given=(0, 1))
        p_xy = joint.probs.sum(axis=2)
        np.testing.assert_allclose(
            cond.table, joint.probs / p_xy[:, :, None], atol=1e-15
        )


class TestKl:
    def test_identical_is_exactly_zero(self):
        p = Distribution(B, [0.3, 0.7])
        assert kl(p, p) == 0.0

    def test_single_term_value(self):
        p = Distribution(B, [1.0, 0.0])
        q = Distribution(B, [0.5, 0.5])
        assert kl(p, q) == pytest.approx(math.log(2), abs=1e-15)

    def test_support_violation_carries_index(self):
        p = Distribution(B, [0.5, 0.5])
        q = Distribution(B, [1.0, 0.0])
        with pytest.raises(SupportError) as exc_info:
            kl(p, q)
        assert exc_info.value.index == 1

    def test_alphabet_mismatch(self):
        with pytest.raises(DimensionError):
            kl(Distribution.uniform(B), Distribution.uniform(Alphabet(3)))

    @given(st.integers(0, 2**32 - 1), st.integers(2, 6))
    @settings(max_examples=60, deadline=None)
    def test_non_negative_on_random_pairs(self, seed, size):
        rng = np.random.default_rng(seed)
        alphabet = Alphabet(size)
        p = random_distribution(rng, alphabet)
        q = random_distribution(rng, alphabet)
        assert kl(p, q) >= 0.0


class TestConditionalMutualInformation:
    def test_independent_target_gives_zero(self, rng):
        px = rng.dirichlet(np.ones(2))
        py = rng.dirichlet(np.ones(2))
        pz = rng.dirichlet(np.ones(2))
        joint = Joint3(B, B, B, px[:, None, None] * py[None, :, None] * pz[None, None, :])
        assert conditional_mutual_information(joint, source=1, given=0) == pytest.approx(0.0, abs=1e-15)

    def test_deterministic_copy_gives_log2(self):
        # z copies y, x independent, everything uniform: brute-force over the
        # eight cells gives ln 2 exactly
        probs = np.zeros((2, 2, 2))
        for x in range(2):
            for y in range(2):
                probs[x, y, y] = 0.25
        joint = Joint3(B, B, B, probs)
        value = conditional_mutual_information(joint, source=1, given=0)
        assert value == pytest.approx(math.log(2), abs=1e-15)

    def test_fully_random_loop_gives_zero(self):
        alpha, beta, pi, p_w = binary_loop_tables(0.0, 0.0, 20.0, 0.0, 0.0)
        joint = compose_joint(
            Distribution(B, p_w), Kernel2(B, B, beta @ pi), Kernel3(B, B, B, alpha)
        )
        assert conditional_mutual_information(joint, source=1, given=0) == pytest.approx(0.0, abs=1e-12)

    def test_matches_double_kl_expectation(self, rng):
        # definitional cross-check: I(Z;Y|X) as an expectation of row KLs
        for _ in range(40):
            joint = random_joint(rng, 3, 2, 3)
            direct = conditional_mutual_information(joint, source=1, given=0)
            p_xy = joint.probs.sum(axis=2)
            expectation = 0.0
            for x in range(3):
                p_x = joint.probs[x].sum()
                row_x = Distribution(joint.z, joint.probs[x].sum(axis=0) / p_x)
                for y in range(2):
                    if p_xy[x, y] == 0:
                        continue
                    row_xy = Distribution(joint.z, joint.probs[x, y] / p_xy[x, y])
                    expectation += p_xy[x, y] * kl(row_xy, row_x)
            assert direct == pytest.approx(expectation, abs=1e-12)

    def test_bounded_by_log_alphabet(self, rng):
        for _ in range(20):
            joint = random_joint(rng, 2, 3, 4)
            value = conditional_mutual_information(joint, source=0, given=1)
            assert 0.0 <= value <= math.log(4) + 1e-12

    def test_axis_validation(self, rng):
        joint = random_joint(rng, 2, 2, 2)
        with pytest.raises(ValueError):
            conditional_mutual_information(joint, source=2, given=0)


class TestChainAndRoundTrip:
    def test_chain_matches_matrix_product(self, rng):
        first = Kernel2(Alphabet(3), B, rng.dirichlet(np.ones(2), size=3))
        second = Kernel2(B, Alphabet(4), rng.dirichlet(np.ones(4), size=2))
        combined = chain(first, second)
        np.testing.assert_allclose(combined.rows, first.rows @ second.rows)

    def test_chain_alphabet_check(self):
        with pytest.raises(DimensionError):
            chain(Kernel2.uniform(B, B), Kernel2.uniform(Alphabet(3), B))

    def test_compose_condition_recovers_policy(self, rng):
        # round trip: the policy can be read back off the joint wherever the
        # conditioning state has mass
        prior = random_distribution(rng, Alphabet(3))
        policy = Kernel2(Alphabet(3), B, rng.dirichlet(np.ones(2), size=3))
        kernel = Kernel3(Alphabet(3), B, Alphabet(3), rng.dirichlet(np.ones(3), size=(3, 2)))
        joint = compose_joint(prior, policy, kernel)
        cond = condition(joint, target=1, given=0)
        assert cond.defined.all()
        np.testing.assert_allclose(cond.table, policy.rows, atol=1e-12)
