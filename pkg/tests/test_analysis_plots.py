import os
import tempfile
import unittest

import numpy as np
import pandas as pd

from latentlift.analysis import LatentDump, aggregate_curves, latent_map_frame, plot_curves, plot_latent_map


def random_dump(n: int = 40, width: int = 4) -> LatentDump:
    rng = np.random.default_rng(5)
    return LatentDump(true_state=rng.integers(0, 6, size=(n, 2)), latent=rng.normal(size=(n, width)),
                      reward=rng.uniform(-1, 0, size=n), env='gridworld')


class LatentMapTestCase(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.directory.cleanup()

    def test_csv_matches_dump(self):
        image, csv = plot_latent_map(random_dump(), os.path.join(self.directory.name, 'maps', 'latent.png'))
        self.assertTrue(image.endswith('latent.svg'))
        self.assertTrue(os.path.exists(image))
        frame = pd.read_csv(csv)
        self.assertEqual(len(frame), 40)
        self.assertEqual(list(frame.columns), ['pc1', 'pc2', 'reward', 'true_0', 'true_1'])

    def test_three_components(self):
        image, csv = plot_latent_map(random_dump(), os.path.join(self.directory.name, 'nav'), n_components=3,
                                     image_format='png')
        self.assertTrue(image.endswith('nav.png'))
        self.assertIn('pc3', pd.read_csv(csv).columns)

    def test_empty_dump(self):
        dump = LatentDump(true_state=np.zeros((0, 2)), latent=np.zeros((0, 4)), reward=np.zeros(0))
        with self.assertWarns(UserWarning):
            _, csv = plot_latent_map(dump, os.path.join(self.directory.name, 'empty'))
        self.assertEqual(len(pd.read_csv(csv)), 0)

    def test_collapsed_columns_are_zero(self):
        dump = LatentDump(true_state=np.zeros((5, 1)), latent=np.ones((5, 3)), reward=np.zeros(5))
        with self.assertWarns(UserWarning):
            frame = latent_map_frame(dump)
        np.testing.assert_array_equal(frame['pc1'], 0.0)

    def test_bad_arguments(self):
        with self.assertRaises(ValueError):
            plot_latent_map(random_dump(), os.path.join(self.directory.name, 'x'), n_components=4)
        with self.assertRaises(ValueError):
            plot_latent_map(random_dump(), os.path.join(self.directory.name, 'x'), image_format='gif')
        with self.assertRaises(ValueError):
            plot_latent_map(random_dump(), os.path.join(self.directory.name, 'x'), color='true_5')

    def test_colour_by_true_state(self):
        image, _ = plot_latent_map(random_dump(), os.path.join(self.directory.name, 'rows'), color='true_0')
        self.assertTrue(os.path.exists(image))


class CurvePlotTestCase(unittest.TestCase):
    def test_curves(self):
        runs = {seed: pd.DataFrame({'episode': range(5), 'steps': [9 - seed, 8, 7, 6, 5]}) for seed in range(3)}
        curves = {'ours': aggregate_curves(runs, best_k=2), 'dqn': aggregate_curves(runs, best_k=3)}
        with tempfile.TemporaryDirectory() as directory:
            image, csv = plot_curves(curves, os.path.join(directory, 'steps'), x='env_steps', reference=5.0)
            self.assertTrue(os.path.exists(image))
            frame = pd.read_csv(csv)
        self.assertEqual(len(frame), 10)
        self.assertEqual(sorted(frame['method'].unique()), ['dqn', 'ours'])
