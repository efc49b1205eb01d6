import unittest

import numpy as np

from latentlift import exceptions
from latentlift.core import DiscreteAction, Transition, one_hot, validate_observation, to_uint8, from_uint8


class DiscreteActionTestCase(unittest.TestCase):
    def test_one_hot(self):
        self.assertEqual(one_hot(DiscreteAction(0, 4)).tolist(), [1, 0, 0, 0])
        self.assertEqual(one_hot(DiscreteAction(3, 4)).tolist(), [0, 0, 0, 1])
        self.assertEqual(one_hot((7, 8)).tolist(), [0, 0, 0, 0, 0, 0, 0, 1])

    def test_one_hot_sums_to_one(self):
        for n_actions in [1, 3, 8]:
            for index in range(n_actions):
                vector = DiscreteAction(index, n_actions).one_hot()
                self.assertEqual(vector.sum(), 1.0)
                self.assertEqual(np.count_nonzero(vector), 1)

    def test_out_of_range(self):
        with self.assertRaises(exceptions.InvalidAction):
            DiscreteAction(4, 4)
        with self.assertRaises(exceptions.InvalidAction):
            DiscreteAction(-1, 4)
        with self.assertRaises(exceptions.InvalidAction):
            one_hot((0, 0))


class ObservationTestCase(unittest.TestCase):
    def test_validate(self):
        obs = np.zeros((5, 5, 3), dtype=np.float32)
        self.assertIs(validate_observation(obs), obs)
        with self.assertRaises(exceptions.ShapeMismatch):
            validate_observation(np.zeros((5, 5), dtype=np.float32))
        with self.assertRaises(ValueError):
            validate_observation(np.full((5, 5, 3), 1.5))
        with self.assertRaises(ValueError):
            validate_observation(np.full((5, 5, 3), np.nan))

    def test_uint8_conversion(self):
        pixels = np.arange(256, dtype=np.uint8).reshape(1, 256, 1).repeat(3, axis=2)
        obs = from_uint8(pixels)
        self.assertEqual(obs.dtype, np.float32)
        self.assertEqual(obs.min(), 0.0)
        self.assertEqual(obs.max(), 1.0)
        np.testing.assert_array_equal(to_uint8(obs), pixels)


class TransitionTestCase(unittest.TestCase):
    def test_invalid_reward(self):
        obs = np.zeros((4, 4, 3), dtype=np.float32)
        with self.assertRaises(ValueError):
            Transition(obs, DiscreteAction(0, 4), float('inf'), obs, False)

    def test_shape_mismatch(self):
        with self.assertRaises(exceptions.ShapeMismatch):
            Transition(np.zeros((4, 4, 3)), DiscreteAction(0, 4), 0.0, np.zeros((5, 5, 3)), False)

    def test_repr(self):
        obs = np.zeros((4, 4, 3), dtype=np.float32)
        self.assertIn('action=2', repr(Transition(obs, DiscreteAction(2, 4), -0.5, obs, True)))
