import unittest

import numpy as np

from latentlift import exceptions
from latentlift.envs import GridWorldConfig, make_env
from latentlift.envs.render import DISTRACTOR_COLORS
from latentlift.pipeline import collect, collect_env_overrides, random_transitions

from base import BaseTestCase


def tiny_env():
    return make_env('gridworld', GridWorldConfig(grid_n=4, image_size=16, max_steps=5))


class RandomTransitionsTestCase(unittest.TestCase):
    def test_exact_count(self):
        dataset = random_transitions(tiny_env(), 37, seed=1)
        self.assertEqual(len(dataset), 37)
        self.assertEqual(dataset.n_actions, 4)
        self.assertEqual(dataset.obs.shape, (37, 16, 16, 3))
        self.assertTrue(np.all((dataset.action >= 0) & (dataset.action < 4)))

    def test_deterministic(self):
        first = random_transitions(tiny_env(), 30, seed=4)
        second = random_transitions(tiny_env(), 30, seed=4)
        np.testing.assert_array_equal(first.action, second.action)
        np.testing.assert_array_equal(first.obs, second.obs)
        np.testing.assert_array_equal(first.reward, second.reward)
        other = random_transitions(tiny_env(), 30, seed=5)
        self.assertFalse(np.array_equal(first.action, other.action))

    def test_empty(self):
        with self.assertRaises(exceptions.EmptyDataset):
            random_transitions(tiny_env(), 0)


class CollectTestCase(BaseTestCase, unittest.TestCase):
    def test_collect(self):
        config = self.tiny_config(collect={'n_transitions': 12, 'env_overrides': {'max_steps': 3}})
        self.assertEqual(len(collect(config)), 12)

    def test_bad_overrides(self):
        config = self.tiny_config(collect={'env_overrides': {'colour': 'red'}})
        with self.assertRaises(exceptions.ConfigError):
            collect(config)

    def test_distractors_unseen_while_collecting(self):
        config = self.tiny_config(env={'n_distractors': 3}, collect={'n_transitions': 40})
        self.assertEqual(collect_env_overrides(config), {'distractors_active': False})
        self.assertTrue(config.env.distractors_active)
        dataset = collect(config)
        for color in DISTRACTOR_COLORS:
            for pixels in (dataset.obs, dataset.next_obs):
                self.assertFalse(np.all(pixels == np.asarray(color, dtype=np.uint8), axis=-1).any())

    def test_distractors_on_request(self):
        config = self.tiny_config(env={'n_distractors': 3},
                                  collect={'n_transitions': 5, 'env_overrides': {'distractors_active': True}})
        dataset = collect(config)
        painted = [np.all(dataset.obs == np.asarray(color, dtype=np.uint8), axis=-1).any()
                   for color in DISTRACTOR_COLORS]
        self.assertTrue(all(painted))
