import unittest

import numpy as np
import pandas as pd

from latentlift import exceptions
from latentlift.analysis import aggregate_curves, curve_frame, steps_to_threshold


def run(steps, n_episodes: int = 10) -> pd.DataFrame:
    values = steps if isinstance(steps, list) else [steps] * n_episodes
    return pd.DataFrame({
        'episode': np.arange(len(values)),
        'steps': values,
        'return': [-float(v) for v in values],
        'success': [1.0] * len(values),
    })


class AggregateCurvesTestCase(unittest.TestCase):
    def test_identical_runs(self):
        runs = {seed: run([30, 20, 10, 8]) for seed in range(4)}
        curves = aggregate_curves(runs, best_k=3, final_window=2)
        self.assertEqual(curves.best_k, 3)
        np.testing.assert_allclose(curves.frame['variance'], 0.0)
        np.testing.assert_allclose(curves.frame['mean'], [30, 20, 10, 8])
        np.testing.assert_allclose(curves.frame['env_steps'], [30, 50, 60, 68])

    def test_best_seeds(self):
        runs = {0: run(20), 1: run(5), 2: run(7), 3: run(6)}
        curves = aggregate_curves(runs, best_k=3)
        self.assertEqual(curves.seeds, [1, 3, 2])
        np.testing.assert_allclose(curves.frame['mean'], 6.0)
        np.testing.assert_allclose(curves.frame['variance'], np.var([5, 6, 7]))
        self.assertEqual(curves.scores[0], 20.0)

    def test_higher_is_better(self):
        runs = {0: run(20), 1: run(5), 2: run(7), 3: run(6)}
        curves = aggregate_curves(runs, best_k=1, metric='return')
        self.assertEqual(curves.seeds, [1])

    def test_ties_broken_by_seed(self):
        runs = {4: run(5), 2: run(5), 9: run(5)}
        self.assertEqual(aggregate_curves(runs, best_k=2).seeds, [2, 4])

    def test_all_seeds_is_plain_mean(self):
        runs = {0: run(20), 1: run(5), 2: run(7)}
        curves = aggregate_curves(runs, best_k=3)
        np.testing.assert_allclose(curves.frame['mean'], 32 / 3)
        self.assertTrue((curves.frame['n_seeds'] == 3).all())

    def test_long_frame_input(self):
        frame = pd.concat([run(4).assign(seed=0), run(8).assign(seed=1)], ignore_index=True)
        curves = aggregate_curves(frame, best_k=2)
        np.testing.assert_allclose(curves.frame['mean'], 6.0)

    def test_insufficient_seeds(self):
        runs = {0: run(5), 1: run(6)}
        with self.assertRaises(exceptions.InsufficientSeeds):
            aggregate_curves(runs, best_k=3)
        with self.assertRaises(exceptions.InsufficientSeeds):
            aggregate_curves(runs, best_k=0)

    def test_missing_columns(self):
        with self.assertRaises(exceptions.DatasetFormatError):
            aggregate_curves(pd.DataFrame({'seed': [0], 'steps': [3]}))
        with self.assertRaises(exceptions.DatasetFormatError):
            aggregate_curves({0: run(5)}, best_k=1, metric='loss')


class StepsToThresholdTestCase(unittest.TestCase):
    def test_reached(self):
        curves = aggregate_curves({0: run([40, 30, 12, 10, 9])}, best_k=1)
        self.assertEqual(steps_to_threshold(curves, 12), 82.0)
        self.assertEqual(steps_to_threshold(curves, 12, window=2), 92.0)

    def test_never_reached(self):
        curves = aggregate_curves({0: run([40, 30, 12])}, best_k=1)
        self.assertIsNone(steps_to_threshold(curves, 5))

    def test_from_below(self):
        curves = aggregate_curves({0: run([40, 30, 12])}, best_k=1, metric='return')
        self.assertEqual(steps_to_threshold(curves, -30), 70.0)

    def test_curve_frame(self):
        curves = {'ours': aggregate_curves({0: run(5)}, best_k=1), 'dqn': aggregate_curves({0: run(9)}, best_k=1)}
        frame = curve_frame(curves)
        self.assertEqual(list(frame['method'].unique()), ['ours', 'dqn'])
        self.assertEqual(len(frame), 20)
        self.assertTrue(curve_frame({}).empty)
