import os
import tempfile
import unittest

import torch

from latentlift import exceptions
from latentlift.agents import (
    METRIC_COLUMNS, DQNConfig, TD3Config, agent_catalogue, evaluate_policy, iter_train_policy, load_agent, make_agent,
    save_agent, train_policy,
)
from latentlift.envs import GridWorldConfig, make_env
from latentlift.nets import ModelBundle, NetConfig


def tiny_env(**kwargs):
    options = dict(grid_n=4, image_size=16, max_steps=15)
    options.update(kwargs)
    return make_env('gridworld', GridWorldConfig(**options))


def tiny_bundle(n_actions: int = 4) -> ModelBundle:
    return ModelBundle.build(NetConfig(observation_shape=(16, 16, 3), n_actions=n_actions, hidden=(8,), dim_s=4,
                                       dim_a=2))


def td3_config(**kwargs) -> TD3Config:
    options = dict(batch_size=8, replay_capacity=200, warmup_steps=10, hidden=(16,), episodes=4, env_steps=50)
    options.update(kwargs)
    return TD3Config(**options)


class TrainPolicyTestCase(unittest.TestCase):
    def test_metrics(self):
        run = train_policy(tiny_env(), tiny_bundle(), 'td3', td3_config(), seed=3)
        frame = run.frame
        self.assertEqual(list(frame.columns), METRIC_COLUMNS)
        self.assertTrue((frame['seed'] == 3).all())
        self.assertEqual(frame['episode'].tolist(), list(range(1, len(frame) + 1)))
        self.assertLessEqual(frame['steps'].sum(), 50)
        self.assertTrue(set(frame['success'].unique()) <= {0, 1})
        self.assertEqual(run.agent.config.seed, 3)

    def test_budget_cut_episode_is_not_reported(self):
        env = tiny_env(max_steps=15)
        metrics = list(iter_train_policy(env, tiny_bundle(), 'td3', td3_config(episodes=4, env_steps=20), seed=1))
        self.assertLessEqual(sum(m.steps for m in metrics), 20)
        for m in metrics:
            self.assertTrue(m.success or m.steps == 15, m)
        frame = train_policy(env, tiny_bundle(), 'td3', td3_config(episodes=4, env_steps=20), seed=1).frame
        if len(frame):
            last = frame.iloc[-1]
            self.assertTrue(last['success'] == 1 or last['steps'] == 15)

    def test_bundle_is_not_updated(self):
        bundle = tiny_bundle()
        before = bundle.parameter_snapshot()
        train_policy(tiny_env(), bundle, 'td3', td3_config())
        after = bundle.parameter_snapshot()
        for key in before:
            self.assertTrue(torch.equal(before[key], after[key]), key)

    def test_deterministic(self):
        first = train_policy(tiny_env(), tiny_bundle(), 'dqn', DQNConfig(
            batch_size=8, replay_capacity=200, warmup_steps=10, hidden=(16,), episodes=3, env_steps=40)).frame
        second = train_policy(tiny_env(), tiny_bundle(), 'dqn', DQNConfig(
            batch_size=8, replay_capacity=200, warmup_steps=10, hidden=(16,), episodes=3, env_steps=40)).frame
        self.assertTrue(first.equals(second))

    def test_mismatched_bundle(self):
        with self.assertRaises(exceptions.CheckpointMismatch):
            train_policy(tiny_env(n_actions=8), tiny_bundle(4), 'td3', td3_config())
        with self.assertRaises(exceptions.CheckpointMismatch):
            train_policy(tiny_env(image_size=20), tiny_bundle(), 'td3', td3_config())

    def test_evaluate(self):
        run = train_policy(tiny_env(), tiny_bundle(), 'td3', td3_config())
        results = evaluate_policy(tiny_env(), run.agent, episodes=3, seed=1)
        self.assertEqual([m.episode for m in results], [1, 2, 3])
        self.assertTrue(all(1 <= m.steps <= 15 for m in results))

    def test_save_load(self):
        bundle = tiny_bundle()
        run = train_policy(tiny_env(), bundle, 'td3', td3_config())
        state = torch.zeros(4).numpy()
        with tempfile.TemporaryDirectory() as directory:
            path = save_agent(run.agent, os.path.join(directory, 'agent.pt'))
            loaded = load_agent(path, 'td3', bundle)
            with self.assertRaises(exceptions.CheckpointMismatch):
                load_agent(path, 'dqn', bundle)
        self.assertEqual(loaded.updates, run.agent.updates)
        self.assertEqual(loaded.act(state, explore=False)[1], run.agent.act(state, explore=False)[1])


class AgentCatalogueTestCase(unittest.TestCase):
    def test_catalogue(self):
        self.assertIn('td3', agent_catalogue)
        self.assertIn('dqn', agent_catalogue)
        agent = make_agent('dqn', tiny_bundle(), batch_size=4, replay_capacity=8)
        self.assertEqual(agent.config.batch_size, 4)
        with self.assertRaises(exceptions.ConfigError):
            make_agent('ddpg', tiny_bundle())
