import os
import tempfile
import unittest

import numpy as np

from latentlift import exceptions
from latentlift.envs import GridWorldConfig
from latentlift.homoverify import mirror_quotient, read_map, read_mdp, write_map, write_mdp


class TabularFormatTestCase(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.directory.cleanup()

    def path(self, name: str) -> str:
        return os.path.join(self.directory.name, name)

    def write(self, name: str, text: str) -> str:
        with open(self.path(name), 'w') as stream:
            stream.write(text)
        return self.path(name)

    def test_mirror_files(self):
        source, image, mapping = mirror_quotient(GridWorldConfig(grid_n=3, image_size=10))
        loaded = read_mdp(write_mdp(source, self.path('source.mdp')))
        np.testing.assert_array_equal(loaded.T, source.T)
        np.testing.assert_array_equal(loaded.R, source.R)
        self.assertEqual(loaded.gamma, source.gamma)

        loaded_map, n_states, n_actions = read_map(write_map(mapping, self.path('fold.map'), 6, 4))
        np.testing.assert_array_equal(loaded_map.f, mapping.f)
        np.testing.assert_array_equal(loaded_map.g, mapping.g)
        self.assertEqual((n_states, n_actions), (6, 4))

    def test_comments(self):
        path = self.write('tiny.mdp', '# a single absorbing state\n1 2 0.5\n\n0 0  # successors\n1.0 -1.0\n')
        mdp = read_mdp(path)
        self.assertEqual(mdp.T.tolist(), [[0, 0]])
        self.assertEqual(mdp.R.tolist(), [[1.0, -1.0]])

    def test_bad_mdp_files(self):
        for text in ['1 2\n0 0\n1 1\n', '1 2 0.5\n0\n1 1\n', '1 2 0.5\n0 0\n1 x\n', '1 2 0.5\n0 3\n1 1\n',
                     '1 2 0.5\n0 0\n1 1\n1 1\n']:
            with self.assertRaises(exceptions.DatasetFormatError, msg=text):
                read_mdp(self.write('bad.mdp', text))

    def test_bad_map_files(self):
        for text in ['2 1 1\n0 0\n0\n0\n', '2 1 1 1\n0\n0\n0\n', '2 1 1 1\n0 0\n0\n']:
            with self.assertRaises(exceptions.DatasetFormatError, msg=text):
                read_map(self.write('bad.map', text))
