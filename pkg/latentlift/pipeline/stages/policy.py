import os
import logging
import warnings
import dataclasses

from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List

import numpy as np
import pandas as pd
import torch

from ...agents import AgentConfig, METRIC_COLUMNS, evaluate_policy, load_agent, metrics_frame, save_agent, \
    train_policy
from ...analysis import aggregate_curves, final_window_summary, steps_to_threshold
from ...envs import make_env
from ...nets import load_bundle
from ...utils import seed_everything
from .base import Stage, StageContext, StageResult
from .catalogue import register_stage

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class SeedJob:
    """One independent policy-training run; picklable so that it can be sent to a worker process."""

    env_name: str
    env_config: Any
    agent_name: str
    agent_config: AgentConfig
    bundle_path: str
    seed: int
    directory: str


def run_seed(job: SeedJob) -> Dict[str, str]:
    """Train one seed and write its agent checkpoint and episode metrics."""
    os.makedirs(job.directory, exist_ok=True)
    seed_everything(job.seed)
    bundle = load_bundle(job.bundle_path)
    env = make_env(job.env_name, job.env_config)
    run = train_policy(env, bundle, job.agent_name, job.agent_config, seed=job.seed)
    metrics_path = os.path.join(job.directory, 'metrics.csv')
    run.frame.to_csv(metrics_path, index=False)
    agent_path = save_agent(run.agent, os.path.join(job.directory, 'agent.pt'))
    return {'metrics': metrics_path, 'agent': agent_path}


def _single_thread():
    torch.set_num_threads(1)


def run_seeds(jobs: List[SeedJob], workers: int = 1) -> List[Dict[str, str]]:
    """Run the jobs inline or fan them out over ``workers`` processes; results keep the order of ``jobs``."""
    if workers <= 1 or len(jobs) <= 1:
        return [run_seed(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs)), initializer=_single_thread) as pool:
        return list(pool.map(run_seed, jobs))


def optimal_reference(env) -> Any:
    """Mean shortest-path length over the spawn distribution, for environments that can compute it."""
    if hasattr(env, 'mean_optimal_steps'):
        return float(env.mean_optimal_steps())
    return None


class TrainPolicyStage(Stage):
    """Train a latent policy for every seed on top of the frozen representation."""

    name = 'train_policy'
    autoload = True
    index = 2
    depends_on = ('train_repr', )
    blocks = ('env', 'agent', 'seeds')

    def run(self, context: StageContext) -> StageResult:
        config = context.config
        bundle_path = context.artifact('train_repr', 'bundle')
        jobs = [
            SeedJob(env_name=config.env_name, env_config=config.env, agent_name=config.agent_name,
                    agent_config=config.agent_config(seed), bundle_path=bundle_path, seed=seed,
                    directory=context.path('train_policy', 'seed_{}'.format(seed), ''))
            for seed in config.seeds
        ]
        logger.info('training %s on %d seeds with %d workers', config.agent_name, len(jobs), config.workers)
        outputs = run_seeds(jobs, config.workers)

        frame = pd.concat([pd.read_csv(output['metrics']) for output in outputs], ignore_index=True)
        frame = frame.sort_values(['seed', 'episode'], kind='mergesort')[METRIC_COLUMNS]
        metrics_path = context.path('train_policy', 'metrics.csv')
        frame.to_csv(metrics_path, index=False)

        artifacts = {'metrics': context.relative(metrics_path)}
        for seed, output in zip(config.seeds, outputs):
            artifacts['agent_{}'.format(seed)] = context.relative(output['agent'])
        tail = frame.groupby('seed').tail(config.analysis.final_window)
        return StageResult(artifacts=artifacts, metrics={
            'episodes': int(len(frame)),
            'env_steps': int(frame['steps'].sum()),
            'final_mean_steps': float(tail['steps'].mean()) if len(tail) else float('nan'),
            'final_success': float(tail['success'].mean()) if len(tail) else float('nan'),
            'optimal_mean_steps': optimal_reference(make_env(config.env_name, config.env)),
        })


class EvaluateStage(Stage):
    """Greedy evaluation of every trained seed, best-k learning curves and a summary table."""

    name = 'eval'
    autoload = True
    index = 3
    depends_on = ('train_policy', )
    blocks = ('analysis', )

    def run(self, context: StageContext) -> StageResult:
        config = context.config
        analysis = config.analysis
        bundle = load_bundle(context.artifact('train_repr', 'bundle'))
        env = make_env(config.env_name, config.env)

        evaluations = []
        for seed in config.seeds:
            agent = load_agent(context.artifact('train_policy', 'agent_{}'.format(seed)), config.agent_name, bundle)
            results = evaluate_policy(env, agent, analysis.eval_episodes, seed=analysis.eval_seed + seed)
            evaluations.append(metrics_frame(results).assign(seed=seed))
        evaluation = pd.concat(evaluations, ignore_index=True)[METRIC_COLUMNS]
        eval_path = context.path('eval', 'eval_metrics.csv')
        evaluation.to_csv(eval_path, index=False)

        training = pd.read_csv(context.artifact('train_policy', 'metrics'))
        best_k = analysis.best_k
        if best_k > len(config.seeds):
            warnings.warn('best_k={} but only {} seeds were trained; aggregating all of them'.format(
                best_k, len(config.seeds)))
            best_k = len(config.seeds)
        curves = aggregate_curves(training, best_k=best_k, metric='steps', final_window=analysis.final_window)
        curves_path = context.path('eval', 'curves.csv')
        curves.frame.to_csv(curves_path, index=False)

        method = '{}+{}'.format(config.repr.baseline, config.agent_name)
        summary = pd.concat([
            final_window_summary(training, method, config.env_name, analysis.final_window),
            final_window_summary(evaluation, method + ':greedy', config.env_name,
                                 final_window=max(analysis.eval_episodes, 1)),
        ], ignore_index=True)
        summary_path = context.path('eval', 'summary.csv')
        summary.to_csv(summary_path, index=False)

        optimal = optimal_reference(env)
        metrics = {
            'best_seeds': curves.seeds,
            'greedy_mean_steps': float(evaluation['steps'].mean()) if len(evaluation) else float('nan'),
            'greedy_success': float(evaluation['success'].mean()) if len(evaluation) else float('nan'),
            'best_k_final_mean_steps': float(np.mean([curves.scores[seed] for seed in curves.seeds])),
        }  # type: Dict[str, Any]
        if optimal is not None:
            metrics['optimal_mean_steps'] = optimal
            metrics['env_steps_to_1.5x_optimal'] = steps_to_threshold(curves, 1.5 * optimal,
                                                                        window=min(10, analysis.final_window))
        return StageResult(
            artifacts={'eval_metrics': context.relative(eval_path), 'curves': context.relative(curves_path),
                       'summary': context.relative(summary_path)},
            metrics=metrics,
        )


register_stage(TrainPolicyStage)
register_stage(EvaluateStage)
