import os
import tempfile
import unittest

import numpy as np

from latentlift import exceptions
from latentlift.analysis import LatentDump, build_latent_dump
from latentlift.envs import GridWorld, GridWorldConfig
from latentlift.nets import ModelBundle, NetConfig


class LatentDumpTestCase(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.directory.cleanup()

    def test_save_load(self):
        rng = np.random.default_rng(1)
        dump = LatentDump(true_state=rng.integers(0, 5, size=(7, 2)), latent=rng.normal(size=(7, 3)),
                          reward=rng.normal(size=7), latent_actions=rng.normal(size=(7, 4, 2)),
                          deltas=rng.normal(size=(7, 4, 3)), env='grid')
        loaded = LatentDump.load(dump.save(os.path.join(self.directory.name, 'dump.npz')))
        np.testing.assert_array_equal(loaded.latent, dump.latent)
        np.testing.assert_array_equal(loaded.deltas, dump.deltas)
        self.assertEqual(loaded.env, 'grid')
        self.assertEqual(loaded.n_actions, 4)

    def test_optional_columns(self):
        dump = LatentDump(true_state=np.zeros(3), latent=np.zeros((3, 2)), reward=np.zeros(3))
        loaded = LatentDump.load(dump.save(os.path.join(self.directory.name, 'plain.npz')))
        self.assertIsNone(loaded.latent_actions)
        self.assertEqual(loaded.true_state.shape, (3, 1))
        self.assertEqual(loaded.n_actions, 0)

    def test_not_a_dump(self):
        path = os.path.join(self.directory.name, 'other.npz')
        with open(path, 'wb') as stream:
            np.savez(stream, something=np.zeros(2))
        with self.assertRaises(exceptions.DatasetFormatError):
            LatentDump.load(path)

    def test_shape_mismatch(self):
        with self.assertRaises(exceptions.ShapeMismatch):
            LatentDump(true_state=np.zeros(3), latent=np.zeros((4, 2)), reward=np.zeros(3))
        with self.assertRaises(exceptions.ShapeMismatch):
            LatentDump(true_state=np.zeros(3), latent=np.zeros((3, 2)), reward=np.zeros(3),
                       deltas=np.zeros((3, 4, 5)))

    def test_build(self):
        env = GridWorld(GridWorldConfig(grid_n=4, image_size=16))
        config = NetConfig(observation_shape=env.observation_shape, dim_s=3, dim_a=2, n_actions=env.n_actions,
                           hidden=(8,), conv_channels=(4, 8))
        dump = build_latent_dump(env, ModelBundle.build(config), n_samples=10, seed=2, batch_size=4)
        self.assertEqual(len(dump), 10)
        self.assertEqual(dump.latent.shape, (10, 3))
        self.assertEqual(dump.deltas.shape, (10, 4, 3))
        self.assertEqual(dump.env, env.name)
