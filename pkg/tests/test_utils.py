import random
import unittest
import dataclasses

import numpy as np
import torch

from latentlift.utils import Lookup, ToStringMixin, canonical_json, fingerprint, seed_everything, to_plain, torch_seed


@dataclasses.dataclass
class Point:
    x: float
    tags: tuple = ()


class UtilsTestCase(unittest.TestCase):
    def test_lookup(self):
        lookup = Lookup()
        self.assertEqual(lookup[b'a'], 0)
        self.assertEqual(lookup[b'b'], 1)
        self.assertEqual(lookup[b'a'], 0)
        self.assertEqual(len(lookup), 2)
        self.assertEqual(lookup.get(b'b'), 1)
        self.assertEqual(lookup.get(b'c'), -1)
        self.assertEqual(len(lookup), 2)

    def test_to_plain(self):
        plain = to_plain({'p': Point(np.float64(1.5), (1, 2)), 3: [np.int64(4)]})
        self.assertEqual(plain, {'p': {'x': 1.5, 'tags': [1, 2]}, '3': [4]})
        self.assertIsInstance(plain['p']['x'], float)

    def test_fingerprint(self):
        self.assertEqual(fingerprint({'a': 1, 'b': [1, 2]}), fingerprint({'b': [1, 2], 'a': 1}))
        self.assertEqual(fingerprint(Point(1.0)), fingerprint({'x': 1.0, 'tags': []}))
        self.assertNotEqual(fingerprint({'a': 1}), fingerprint({'a': 2}))
        self.assertNotEqual(fingerprint('a', 'b'), fingerprint('ab'))
        self.assertEqual(canonical_json({'b': 1, 'a': 2}), '{"a":2,"b":1}')

    def test_torch_seed(self):
        torch.manual_seed(7)
        expected = torch.rand(3)
        torch.manual_seed(7)
        with torch_seed(0):
            first = torch.rand(2)
        self.assertTrue(torch.equal(torch.rand(3), expected))
        with torch_seed(0):
            self.assertTrue(torch.equal(torch.rand(2), first))

    def test_seed_everything(self):
        seed_everything(3)
        first = (random.random(), np.random.rand(), torch.rand(1).item())
        seed_everything(3)
        self.assertEqual((random.random(), np.random.rand(), torch.rand(1).item()), first)

    def test_to_string(self):
        class Thing(ToStringMixin):
            name = 'thing'
            index = None

        self.assertEqual(Thing()._to_string(['name', 'index']), "<Thing name='thing'>")
