#!/usr/bin/env python3

import os
import sys
import time
import click
import tempfile

from typing import Any, Dict, List, Optional, Tuple

from wasabi import msg

from latentlift.analysis import build_latent_dump, neighborhood_consistency
from latentlift.envs import GridWorldConfig, make_env
from latentlift.pipeline import apply_overrides, config_from_dict, random_transitions, run_pipeline
from latentlift.representation import (
    LossWeights, ReprConfig, action_round_trip_accuracy, mean_pairwise_latent_distance, train_representation,
)

Check = Tuple[str, bool, str]


def representation_checks(fast: bool) -> List[Check]:
    """Collapse prevention, action round trip and grid structure on a sparse-reward 6 x 6 maze."""
    n_transitions, epochs = (1500, 4) if fast else (10000, 100)
    env = make_env('gridworld', GridWorldConfig(grid_n=6, eta=0.0))
    dataset = random_transitions(env, n_transitions, seed=0)
    train, holdout = dataset.split(0.1, seed=0)
    weights = LossWeights()

    checks = []  # type: List[Check]
    spreads = {}  # type: Dict[str, float]
    for baseline in ('ours', 'd_mdp'):
        start_time = time.time()
        result = train_representation(ReprConfig(baseline=baseline, epochs=epochs, weights=weights), train)
        spreads[baseline] = mean_pairwise_latent_distance(result.bundle, holdout)
        click.echo("Trained {} in {:.1f}s: held-out latent spread {:.4f}, L_T {:.5f} -> {:.5f}".format(
            baseline, time.time() - start_time, spreads[baseline], result.initial('L_T'), result.final('L_T')))

        if baseline == 'ours':
            checks.append(('collapse prevention', spreads[baseline] >= 0.5 * weights.hinge_eps and
                           result.final('L_T') < result.initial('L_T'),
                           'spread {:.4f} (needs >= {:.2f})'.format(spreads[baseline], 0.5 * weights.hinge_eps)))
            accuracy = action_round_trip_accuracy(result.bundle, holdout)
            checks.append(('action round trip', accuracy >= 0.95, 'accuracy {:.3f} (needs >= 0.95)'.format(accuracy)))
            score = neighborhood_consistency(build_latent_dump(env, result.bundle, 2000, seed=0))
            checks.append(('grid structure', score.score >= 0.9 and not score.degenerate,
                           'neighbourhood consistency {:.3f} (needs >= 0.9)'.format(score.score)))
    click.echo("D-MDP spread for comparison: {:.4f}".format(spreads['d_mdp']))
    return checks


def experiment(output_dir: str, grid_n: int, n_actions: int, agent: str, fast: bool, workers: int) -> Dict[str, Any]:
    raw = {
        'output_dir': output_dir,
        'seeds': 2 if fast else 10,
        'workers': workers,
        'env': {'name': 'gridworld', 'grid_n': grid_n, 'n_actions': n_actions},
        'collect': {'n_transitions': 1000 if fast else 10000 * max(1, grid_n // 6)},
        'repr': {'epochs': 3 if fast else 100},
        'agent': {'name': agent},
        'analysis': {'best_k': 2 if fast else 3, 'eval_episodes': 5 if fast else 50},
    }  # type: Dict[str, Any]
    overrides = ['agent.env_steps=1500', 'agent.warmup_steps=200', 'analysis.n_samples=200'] if fast else []
    start_time = time.time()
    manifest = run_pipeline(config_from_dict(apply_overrides(raw, overrides)))
    click.echo("{} on {}x{} with {} actions finished in {:.1f}s".format(agent, grid_n, grid_n, n_actions,
                                                                       time.time() - start_time))
    return manifest.stages['eval'].metrics


def convergence_check(output_root: str, fast: bool, workers: int) -> List[Check]:
    metrics = experiment(os.path.join(output_root, 'maze6_td3'), 6, 4, 'td3', fast, workers)
    final, optimal = metrics['best_k_final_mean_steps'], metrics['optimal_mean_steps']
    return [('policy convergence', final <= 1.25 * optimal,
             'best-k final mean steps {:.2f}, optimal {:.2f} (needs <= 1.25x)'.format(final, optimal))]


def ordering_check(output_root: str, fast: bool, workers: int) -> List[Check]:
    grid_n = 6 if fast else 14
    reached = {}  # type: Dict[str, Optional[float]]
    for agent in ('td3', 'dqn'):
        metrics = experiment(os.path.join(output_root, 'maze{}_{}'.format(grid_n, agent)), grid_n, 8, agent, fast,
                             workers)
        reached[agent] = metrics.get('env_steps_to_1.5x_optimal')
    td3, dqn = (float('inf') if reached[agent] is None else reached[agent] for agent in ('td3', 'dqn'))
    return [('latent TD3 converges before DQN', td3 < dqn,
             'steps to 1.5x optimal: td3 {}, dqn {}'.format(reached['td3'], reached['dqn']))]


@click.command()
@click.option('--fast', is_flag=True, help='Tiny budgets; reports the checks without enforcing their thresholds.')
@click.option('--check', 'checks', type=click.Choice(['representation', 'convergence', 'ordering']), multiple=True,
              help='Only run these checks (repeatable).')
@click.option('--output-dir', type=click.Path(file_okay=False), default=None,
              help='Keep the experiment outputs here instead of a temporary directory.')
@click.option('--workers', type=int, default=1, help='Processes used for the seed fan-out.')
def main(fast, checks, output_dir, workers):
    """Scaled-down reproductions of the representation and policy-learning claims."""
    selected = set(checks) or {'representation', 'convergence', 'ordering'}
    with tempfile.TemporaryDirectory() as scratch:
        output_root = output_dir or scratch
        results = []  # type: List[Check]
        if 'representation' in selected:
            results += representation_checks(fast)
        if 'convergence' in selected:
            results += convergence_check(output_root, fast, workers)
        if 'ordering' in selected:
            results += ordering_check(output_root, fast, workers)

    for name, passed, detail in results:
        if passed:
            msg.good(name, detail)
        else:
            msg.fail(name, detail)
    if fast:
        msg.info("fast mode: the budgets are too small for the thresholds, failures are not counted")
        sys.exit(0)
    sys.exit(0 if all(passed for _, passed, _ in results) else 1)


if __name__ == "__main__":
    main()
