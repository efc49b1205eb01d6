import unittest

import numpy as np

from latentlift.homoverify import (
    N_BINS, TabularMDP, bin_edges, check_gradient_equivalence, decoder_from_thresholds, decoder_matrix, induced_policy,
    intermediate_gradient, latent_gradient, perturbed_decoder, random_gradient_instance,
)


class DecoderTestCase(unittest.TestCase):
    def test_bins(self):
        edges = bin_edges()
        self.assertEqual(len(edges), N_BINS + 1)
        self.assertEqual((edges[0], edges[-1]), (-1.0, 1.0))

    def test_thresholds(self):
        decoder = decoder_from_thresholds([0.0])
        self.assertEqual(decoder.tolist(), [0] * 32 + [1] * 32)
        decoder = decoder_from_thresholds([0.5, -0.5], n_bins=8)
        self.assertEqual(decoder.tolist(), [0, 0, 1, 1, 1, 1, 2, 2])

    def test_invalid_thresholds(self):
        with self.assertRaises(ValueError):
            decoder_from_thresholds([0.01])
        with self.assertRaises(ValueError):
            decoder_from_thresholds([-1.0])
        with self.assertRaises(ValueError):
            decoder_from_thresholds([0.0, 0.0])

    def test_induced_policy_sums_preimages(self):
        theta = np.random.default_rng(0).normal(size=(3, 8))
        decoder = decoder_matrix(decoder_from_thresholds([0.0], 8), 2)
        policy = induced_policy(theta, decoder)
        probabilities = np.exp(theta) / np.exp(theta).sum(axis=1, keepdims=True)
        np.testing.assert_allclose(policy[:, 0], probabilities[:, :4].sum(axis=1))
        np.testing.assert_allclose(policy.sum(axis=1), 1.0)


class GradientEquivalenceTestCase(unittest.TestCase):
    def test_random_instances(self):
        rng = np.random.default_rng(2024)
        for _ in range(20):
            mdp, thresholds, theta = random_gradient_instance(rng)
            self.assertLessEqual(mdp.n_states, 10)
            self.assertLessEqual(mdp.n_actions, 4)
            report = check_gradient_equivalence(mdp, thresholds, theta)
            self.assertLess(report.max_rel_err, 1e-6)
            self.assertLess(report.fd_max_rel_err, 1e-4)
            self.assertTrue(report.passed())
            self.assertTrue(report.to_record()['passed'])

    def test_two_state_instance(self):
        mdp = TabularMDP(T=np.array([[1, 0], [0, 1]]), R=np.array([[0.0, 0.5], [1.0, -1.0]]), gamma=0.8)
        theta = np.random.default_rng(7).normal(size=(2, N_BINS))
        report = check_gradient_equivalence(mdp, [0.25], theta, d0=np.array([1.0, 0.0]))
        self.assertLess(report.max_rel_err, 1e-6)
        self.assertLess(report.fd_max_rel_err, 1e-4)
        self.assertTrue(report.deterministic_decoder)

    def test_symmetric_mdp_has_zero_gradient(self):
        mdp = TabularMDP(T=np.array([[1, 1, 1], [0, 0, 0]]), R=np.array([[1.0, 1.0, 1.0], [0.0, 0.0, 0.0]]),
                         gamma=0.9)
        theta = np.zeros((2, N_BINS))
        report = check_gradient_equivalence(mdp, [-0.5, 0.5], theta, finite_differences=False)
        np.testing.assert_allclose(report.grad_intermediate, 0.0, atol=1e-12)
        np.testing.assert_allclose(report.grad_latent, 0.0, atol=1e-12)
        self.assertIsNone(report.fd_max_rel_err)

    def test_stochastic_decoder_breaks_equivalence(self):
        rng = np.random.default_rng(3)
        mdp, thresholds, theta = random_gradient_instance(rng, max_states=5)
        decoder = perturbed_decoder(decoder_from_thresholds(thresholds), mdp.n_actions, 0.5, rng)
        report = check_gradient_equivalence(mdp, thresholds, theta, decoder=decoder, finite_differences=False)
        self.assertFalse(report.deterministic_decoder)
        self.assertGreater(report.max_rel_err, 1e-6)
        self.assertFalse(report.passed())

    def test_gradients_agree_directly(self):
        mdp, thresholds, theta = random_gradient_instance(np.random.default_rng(11))
        decoder = decoder_from_thresholds(thresholds)
        d0 = np.full(mdp.n_states, 1.0 / mdp.n_states)
        np.testing.assert_allclose(
            intermediate_gradient(mdp, theta, decoder_matrix(decoder, mdp.n_actions), d0),
            latent_gradient(mdp, theta, decoder, d0), rtol=1e-8, atol=1e-12,
        )

    def test_threshold_count(self):
        mdp, thresholds, theta = random_gradient_instance(np.random.default_rng(1), max_actions=2)
        with self.assertRaises(ValueError):
            check_gradient_equivalence(mdp, [-0.5, 0.0, 0.5], theta)
