import unittest

import numpy as np

from latentlift import exceptions
from latentlift.envs import GridWorldConfig
from latentlift.homoverify import (
    HomomorphismMap, StochasticMDP, TabularMDP, brute_force_optimal_values, check_homomorphism,
    check_stochastic_homomorphism, gridworld_mdp, induced_abstract_mdp, lift_policy, mirror_action,
    mirror_quotient, policy_evaluation, value_iteration, verify_lifting,
)


def grid_config(grid_n: int = 3, n_actions: int = 4, **kwargs) -> GridWorldConfig:
    return GridWorldConfig(grid_n=grid_n, n_actions=n_actions, image_size=max(grid_n, 10), **kwargs)


class TabularTestCase(unittest.TestCase):
    def test_geometric_series(self):
        values, policy = value_iteration(TabularMDP(T=np.array([[0]]), R=np.array([[1.0]]), gamma=0.9))
        self.assertAlmostEqual(values[0], 10.0, places=9)
        self.assertEqual(policy.tolist(), [0])

    def test_chain(self):
        mdp = TabularMDP(T=np.array([[1], [1]]), R=np.array([[0.0], [1.0]]), gamma=0.9)
        values, _ = value_iteration(mdp)
        self.assertAlmostEqual(values[0], 0.9 * values[1], places=9)

    def test_tie_break(self):
        mdp = TabularMDP(T=np.array([[0, 0, 0]]), R=np.array([[0.5, 1.0, 1.0]]), gamma=0.5)
        self.assertEqual(value_iteration(mdp)[1].tolist(), [1])

    def test_brute_force(self):
        mdp, _ = gridworld_mdp(grid_config(3))
        values, policy = value_iteration(mdp)
        np.testing.assert_allclose(values, brute_force_optimal_values(mdp), atol=1e-9)
        np.testing.assert_allclose(policy_evaluation(mdp, policy), values, atol=1e-9)

    def test_goal_is_absorbing(self):
        mdp, cells = gridworld_mdp(grid_config(3))
        goal = cells.index((2, 2))
        self.assertTrue(np.all(mdp.T[goal] == goal))
        self.assertTrue(np.all(mdp.R[goal] == 0.0))
        self.assertEqual(mdp.R[cells.index((2, 1)), 2], 1.0)

    def test_validation(self):
        with self.assertRaises(ValueError):
            TabularMDP(T=np.array([[2]]), R=np.array([[0.0]]), gamma=0.9)
        with self.assertRaises(ValueError):
            TabularMDP(T=np.array([[0]]), R=np.array([[0.0]]), gamma=1.0)
        with self.assertRaises(ValueError):
            StochasticMDP(P=np.array([[[0.5, 0.4]], [[1.0, 0.0]]]), R=np.zeros((2, 1)), gamma=0.9)


class HomomorphismTestCase(unittest.TestCase):
    def test_identity(self):
        mdp, _ = gridworld_mdp(grid_config(3, 8))
        report = check_homomorphism(mdp, mdp, HomomorphismMap.identity(mdp))
        self.assertTrue(report.ok)
        self.assertEqual(report.violations, [])

    def test_mirror_quotient(self):
        for n_actions in (4, 8):
            source, image, mapping = mirror_quotient(grid_config(3, n_actions))
            self.assertEqual(source.n_states, 9)
            self.assertEqual(image.n_states, 6)
            self.assertTrue(check_homomorphism(source, image, mapping).ok)

    def test_mirror_action(self):
        self.assertEqual([mirror_action(a) for a in range(8)], [3, 2, 1, 0, 7, 5, 6, 4])

    def test_corrupted_image(self):
        source, image, mapping = mirror_quotient(grid_config(3))
        image.T[0, 0] = 5
        report = check_homomorphism(source, image, mapping)
        self.assertFalse(report.transition_ok)
        self.assertTrue(report.reward_ok)
        self.assertIn((0, 0), [(v.state, v.action) for v in report.violations])
        self.assertIn('transition condition fails', str(report.violations[0]))

    def test_corrupted_reward(self):
        source, image, mapping = mirror_quotient(grid_config(3))
        image.R[1, 2] += 0.5
        report = check_homomorphism(source, image, mapping)
        self.assertFalse(report.reward_ok)
        self.assertEqual(report.to_record()['reward_ok'], False)

    def test_induced_abstract_mdp(self):
        source, image, mapping = mirror_quotient(grid_config(3))
        induced, covered = induced_abstract_mdp(source, mapping)
        self.assertTrue(covered.all())
        np.testing.assert_array_equal(induced.T, image.T)
        np.testing.assert_array_equal(induced.R, image.R)

    def test_induced_filler(self):
        source = TabularMDP(T=np.array([[0, 0]]), R=np.array([[1.0, 2.0]]), gamma=0.9)
        induced, covered = induced_abstract_mdp(source, HomomorphismMap(f=[0], g=[[0, 0]]), n_actions=2)
        self.assertEqual(covered.tolist(), [[True, False]])
        self.assertEqual(induced.R[0, 1], 0.0)

    def test_domain(self):
        mdp, _ = gridworld_mdp(grid_config(3))
        with self.assertRaises(ValueError):
            check_homomorphism(mdp, mdp, HomomorphismMap(f=np.zeros(9), g=np.zeros((9, 3))))
        with self.assertRaises(ValueError):
            HomomorphismMap(f=np.zeros(3), g=np.zeros((2, 4)))


class LiftingTestCase(unittest.TestCase):
    def test_mirror_lifting_is_optimal(self):
        source, image, mapping = mirror_quotient(grid_config(3))
        result = verify_lifting(source, image, mapping)
        self.assertTrue(result.precondition_ok)
        self.assertTrue(result.optimal)
        self.assertLessEqual(result.max_abs_error, 1e-10)
        values, _ = value_iteration(source)
        np.testing.assert_allclose(result.lifted_values, values, atol=1e-9)

    def test_larger_grids(self):
        for grid_n in (4, 5):
            result = verify_lifting(*mirror_quotient(grid_config(grid_n, 8)))
            self.assertTrue(result.precondition_ok and result.optimal)

    def test_identity_lifting(self):
        mdp, _ = gridworld_mdp(grid_config(3))
        _, policy = value_iteration(mdp)
        lifted = lift_policy(mdp, mdp, HomomorphismMap.identity(mdp), policy)
        np.testing.assert_array_equal(lifted, policy)

    def test_no_preimage(self):
        mdp = TabularMDP(T=np.array([[0, 0]]), R=np.array([[0.0, 1.0]]), gamma=0.9)
        with self.assertRaises(exceptions.NoPreimageAction):
            lift_policy(mdp, mdp, HomomorphismMap(f=[0], g=[[0, 0]]), np.array([1]))

    def test_violated_precondition_is_reported(self):
        source, image, mapping = mirror_quotient(grid_config(3))
        mapping.g[1] = mapping.g[1][::-1]
        result = verify_lifting(source, image, mapping)
        self.assertFalse(result.precondition_ok)
        self.assertFalse(result.to_record()['precondition_ok'])


class StochasticTestCase(unittest.TestCase):
    def setUp(self):
        # two states with identical rewards and the same probability of staying in the pair
        self.source = StochasticMDP(
            P=np.array([[[0.5, 0.5], [0.2, 0.8]], [[0.3, 0.7], [1.0, 0.0]]]),
            R=np.array([[1.0, 0.0], [1.0, 0.0]]),
            gamma=0.9,
        )

    def test_collapse_to_one_state(self):
        image = StochasticMDP(P=np.ones((1, 2, 1)), R=np.array([[1.0, 0.0]]), gamma=0.9)
        report = check_stochastic_homomorphism(self.source, image, HomomorphismMap(f=[0, 0], g=[[0, 1], [0, 1]]))
        self.assertTrue(report.ok)

    def test_identity(self):
        report = check_stochastic_homomorphism(self.source, self.source, HomomorphismMap.identity(self.source))
        self.assertTrue(report.ok)

    def test_block_probabilities_must_match(self):
        image = StochasticMDP(P=np.array([[[0.5, 0.5], [0.2, 0.8]], [[0.5, 0.5], [1.0, 0.0]]]),
                              R=self.source.R, gamma=0.9)
        report = check_stochastic_homomorphism(self.source, image, HomomorphismMap.identity(self.source))
        self.assertFalse(report.transition_ok)
        self.assertEqual([(v.state, v.action) for v in report.violations], [(1, 0)])

    def test_from_deterministic(self):
        mdp, _ = gridworld_mdp(grid_config(3))
        stochastic = StochasticMDP.from_deterministic(mdp)
        np.testing.assert_allclose(value_iteration(stochastic)[0], value_iteration(mdp)[0])
