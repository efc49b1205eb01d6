import os
import tempfile
import unittest

import numpy as np
import torch

from latentlift import exceptions
from latentlift.nets import (
    ActionDecoder, Actor, Critic, Encoder, ModelBundle, NetConfig, QNetwork, load_bundle, load_checkpoint,
    save_bundle, save_checkpoint,
)


def small_config(**kwargs) -> NetConfig:
    options = dict(observation_shape=(8, 8, 3), n_actions=4, hidden=(16,), conv_channels=(4, 8), conv_stride=1)
    options.update(kwargs)
    return NetConfig(**options)


class ShapesTestCase(unittest.TestCase):
    def test_default_bundle(self):
        bundle = ModelBundle.build(NetConfig(observation_shape=(50, 50, 3), n_actions=4))
        obs = torch.rand(2, 50, 50, 3)
        state = bundle.encode(obs)
        self.assertEqual(tuple(state.shape), (2, 10))
        latent_action = bundle.action_input(state, np.array([0, 3]))
        self.assertEqual(tuple(latent_action.shape), (2, 5))
        self.assertTrue(torch.all(latent_action.abs() < 1.0))
        probabilities = bundle.action_decoder(latent_action)
        self.assertTrue(torch.allclose(probabilities.sum(-1), torch.ones(2)))
        self.assertEqual(tuple(bundle.transition(state, latent_action).shape), (2, 10))
        self.assertEqual(tuple(bundle.reward(state, latent_action).shape), (2,))

    def test_unbatched(self):
        bundle = ModelBundle.build(small_config())
        self.assertEqual(tuple(bundle.encode(np.zeros((8, 8, 3), dtype=np.uint8)).shape), (10,))

    def test_shape_mismatch(self):
        bundle = ModelBundle.build(small_config())
        with self.assertRaises(exceptions.ShapeMismatch):
            bundle.encode(torch.rand(1, 9, 9, 3))
        with self.assertRaises(exceptions.ShapeMismatch):
            bundle.transition(torch.rand(1, 10), torch.rand(1, 3))
        with self.assertRaises(exceptions.ShapeMismatch):
            Critic(10, 5)(torch.rand(1, 10), torch.rand(1, 4))

    def test_one_hot_inputs(self):
        bundle = ModelBundle.build(small_config(use_psi=False))
        state = bundle.encode(torch.rand(3, 8, 8, 3))
        action = bundle.action_input(state, np.array([0, 1, 2]))
        self.assertEqual(action.tolist(), [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
        self.assertEqual(tuple(bundle.transition(state, action).shape), (3, 10))

    def test_state_free_action_encoder(self):
        bundle = ModelBundle.build(small_config(state_free_action_encoder=True))
        one_hot = bundle.one_hot(np.array([2, 2]))
        latent = bundle.action_encoder(torch.randn(2, 10), one_hot)
        self.assertTrue(torch.allclose(latent[0], latent[1]))

    def test_decode_ties(self):
        decoder = ActionDecoder(small_config(dim_a=2))
        for parameter in decoder.parameters():
            torch.nn.init.zeros_(parameter)
        self.assertEqual(decoder.decode(torch.zeros(3, 2)).tolist(), [0, 0, 0])

    def test_policy_networks(self):
        actor, critic, q = Actor(10, 5, (32,)), Critic(10, 5, (32,)), QNetwork(10, 8, (32,))
        state = torch.randn(7, 10)
        action = actor(state)
        self.assertTrue(torch.all(action.abs() <= 1.0))
        self.assertEqual(tuple(critic(state, action).shape), (7,))
        self.assertEqual(tuple(q(state).shape), (7, 8))

    def test_build_is_seeded(self):
        first = ModelBundle.build(small_config(init_seed=4)).parameter_snapshot()
        second = ModelBundle.build(small_config(init_seed=4)).parameter_snapshot()
        for key in first:
            self.assertTrue(torch.equal(first[key], second[key]))

    def test_freeze(self):
        bundle = ModelBundle.build(small_config()).freeze()
        self.assertTrue(bundle.frozen)
        self.assertFalse(any(parameter.requires_grad for parameter in bundle.parameters()))

    def test_config_validation(self):
        with self.assertRaises(ValueError):
            NetConfig(observation_shape=(4, 4, 3))
        with self.assertRaises(ValueError):
            small_config(dtype='float16')


class GradientTestCase(unittest.TestCase):
    def test_gradcheck(self):
        bundle = ModelBundle.build(small_config(dtype='float64'))
        obs = torch.rand(2, 8, 8, 3, dtype=torch.float64, requires_grad=True)
        one_hot = bundle.one_hot(np.array([1, 3]))

        def forward(pixels):
            state = bundle.encoder(pixels)
            latent_action = bundle.action_encoder(state, one_hot)
            return bundle.transition(state, latent_action), bundle.reward(state, latent_action), \
                bundle.action_decoder(latent_action)

        self.assertTrue(torch.autograd.gradcheck(forward, (obs,), eps=1e-6, atol=1e-5))

    def test_encoder_gradcheck(self):
        encoder = Encoder(small_config()).double()
        obs = torch.rand(1, 8, 8, 3, dtype=torch.float64, requires_grad=True)
        self.assertTrue(torch.autograd.gradcheck(encoder, (obs,), eps=1e-6, atol=1e-5))


class CheckpointTestCase(unittest.TestCase):
    def test_bundle_round_trip(self):
        bundle = ModelBundle.build(small_config(init_seed=1))
        obs = np.random.default_rng(0).integers(0, 256, size=(3, 8, 8, 3), dtype=np.uint8)
        with tempfile.TemporaryDirectory() as directory:
            path = save_bundle(bundle, os.path.join(directory, 'bundle.pt'), extra={'epochs': 3})
            loaded = load_bundle(path)
        np.testing.assert_array_equal(bundle.encode_numpy(obs), loaded.encode_numpy(obs))
        self.assertEqual(loaded.checkpoint_extra, {'epochs': 3})

    def test_mismatches(self):
        bundle = ModelBundle.build(small_config())
        with tempfile.TemporaryDirectory() as directory:
            path = save_bundle(bundle, os.path.join(directory, 'bundle.pt'))
            with self.assertRaises(exceptions.CheckpointMismatch):
                load_checkpoint(path, 'td3')
            with self.assertRaises(exceptions.CheckpointMismatch):
                load_checkpoint(os.path.join(directory, 'missing.pt'), 'bundle')

            other = os.path.join(directory, 'other.pt')
            save_checkpoint(other, 'bundle', {'n': 1}, {'encoder': torch.nn.Linear(2, 2)})
            container = torch.load(other, weights_only=False)
            container['config'] = {'n': 2}
            torch.save(container, other)
            with self.assertRaises(exceptions.CheckpointMismatch):
                load_checkpoint(other, 'bundle')
