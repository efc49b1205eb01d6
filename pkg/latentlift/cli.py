"""Command line interface: ``latentlift <command> --help`` lists the options of every command."""
import os
import sys
import json
import shutil
import logging
import functools

from typing import List, Optional, Sequence, Tuple

import click
import pandas as pd
from wasabi import msg

from . import __version__, exceptions
from .agents import METRIC_COLUMNS
from .core import TransitionDataset
from .analysis import LatentDump, build_latent_dump, comparison_table, plot_latent_map, read_summaries
from .envs import GridWorldConfig, make_env
from .homoverify import (
    induced_abstract_mdp, mirror_quotient, read_map, read_mdp, verify_lifting,
)
from .nets import load_bundle
from .pipeline import (
    ExperimentConfig, Pipeline, RunManifest, SeedJob, gradient_equivalence_suite, load_config, run_seeds,
)
from .representation import save_loss_curves, train_representation

EXIT_CONFIG_ERROR = 2
EXIT_STAGE_FAILURE = 3

logger = logging.getLogger(__name__)


def configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    root = logging.getLogger('latentlift')
    root.setLevel(level)
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter('%(asctime)s %(name)s %(levelname)s: %(message)s'))
        root.addHandler(handler)


def handle_errors(command):
    """Turn domain errors into a message and the documented exit code."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except exceptions.ConfigError as error:
            msg.fail('Configuration error', str(error))
            sys.exit(EXIT_CONFIG_ERROR)
        except exceptions.LatentLiftException as error:
            msg.fail('{} failed'.format(command.__name__.replace('_', '-')), str(error))
            sys.exit(EXIT_STAGE_FAILURE)
    return wrapper


def _summarise(manifest: RunManifest, names: Optional[Sequence[str]] = None) -> None:
    for name, record in manifest.stages.items():
        if names is not None and name not in names:
            continue
        msg.good('{}: {} ({:.1f}s)'.format(name, record.status, record.wall_clock))
        for key, value in sorted(record.metrics.items()):
            if isinstance(value, (int, float, str, bool)):
                msg.text('    {} = {}'.format(key, value))


def _run_stages(config_path: Optional[str], overrides: Sequence[str], stages: Optional[Sequence[str]],
                force: bool = False, workers: Optional[int] = None,
                export: Optional[Tuple[str, str, str]] = None) -> RunManifest:
    """Run ``stages`` of the configured pipeline.

    :param export: ``(stage, artifact, destination)``: copy that artifact out of the run directory afterwards.
    """
    overrides = list(overrides)
    if workers is not None:
        overrides.append('workers={}'.format(workers))
    config = load_config(config_path, overrides)
    pipeline = Pipeline(config, stage_list=stages, force=force)
    manifest = pipeline.run()
    _summarise(manifest, [stage.name for stage in pipeline.stages])
    msg.info('manifest written to {}'.format(pipeline.output_dir))
    if export is not None:
        stage, key, destination = export
        _makedirs_for(destination)
        shutil.copyfile(manifest.artifact(stage, key, pipeline.output_dir), destination)
        msg.good('copied {} to {}'.format(key, destination))
    return manifest


def _makedirs_for(path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def _config_file(positional: Optional[str], option: Optional[str]) -> Optional[str]:
    if positional is not None and option is not None and positional != option:
        raise exceptions.ConfigError('give the config either as an argument or with --config, not both')
    return option if option is not None else positional


config_argument = click.argument('config', required=False, type=click.Path(exists=True, dir_okay=False))
config_option = click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False), default=None,
                             help='Experiment YAML file, same as the positional argument.')
set_option = click.option('--set', 'overrides', multiple=True, metavar='KEY=VALUE',
                          help='Override a config entry, e.g. --set repr.epochs=10 (repeatable).')
force_option = click.option('--force', is_flag=True, help='Run even if the outputs are up to date.')


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Log debugging details.')
@click.option('--quiet', '-q', is_flag=True, help='Only log warnings and errors.')
@click.version_option(version=__version__)
def main(verbose: bool, quiet: bool):
    """Learn homomorphic latent state and action spaces from pixels and train latent policies."""
    configure_logging(verbose, quiet)


@main.command()
@config_argument
@set_option
@click.option('--stage', 'stages', multiple=True, help='Run only these stages (repeatable); "verify" is opt-in.')
@click.option('--verify', is_flag=True, help='Add the homomorphism verification stage.')
@click.option('--workers', type=int, default=None, help='Processes used for the seed fan-out.')
@force_option
@handle_errors
def run(config, overrides, stages, verify, workers, force):
    """Run the whole experiment pipeline, resuming where a previous run stopped."""
    stage_list = list(stages) or None
    if verify:
        stage_list = (stage_list or ['collect', 'train_repr', 'train_policy', 'eval', 'plot']) + ['verify']
    _run_stages(config, overrides, stage_list, force, workers)


@main.command()
@config_argument
@set_option
@force_option
@handle_errors
def collect(config, overrides, force):
    """Collect transitions with a uniformly random policy."""
    _run_stages(config, overrides, ['collect'], force)


@main.command('train-repr')
@config_argument
@config_option
@set_option
@click.option('--dataset', type=click.Path(exists=True, file_okay=False), default=None,
              help='Train on this saved dataset directly, outside the run directory; needs --out-checkpoint.')
@click.option('--out-checkpoint', type=click.Path(dir_okay=False), default=None,
              help='Where to write the frozen bundle; its loss curves go next to it as <name>_loss_curves.csv.')
@click.option('--baseline', default=None, help='Representation method, e.g. ours, mdp_h, d_mdp, jsae or jsae_c.')
@click.option('--seed', type=int, default=None, help='Seed of the representation training.')
@force_option
@handle_errors
def train_repr(config, config_file, overrides, dataset, out_checkpoint, baseline, seed, force):
    """Train the representation on the collected dataset."""
    config = _config_file(config, config_file)
    overrides = list(overrides)
    if baseline is not None:
        overrides.append('repr.baseline={}'.format(baseline))
    if seed is not None:
        overrides.append('repr.seed={}'.format(seed))
    if dataset is None:
        export = None if out_checkpoint is None else ('train_repr', 'bundle', out_checkpoint)
        _run_stages(config, overrides, ['train_repr'], force, export=export)
        return
    if out_checkpoint is None:
        raise exceptions.ConfigError('--dataset needs --out-checkpoint')

    experiment = load_config(config, overrides)
    result = train_representation(experiment.repr, TransitionDataset.load(dataset))
    bundle_path = result.save(out_checkpoint, extra={'dataset': os.path.abspath(dataset)})
    curves_path = save_loss_curves(result.curves, os.path.splitext(out_checkpoint)[0] + '_loss_curves.csv')
    msg.good('{} representation: final total loss {:.5f}'.format(experiment.repr.baseline, result.final('total')))
    msg.info('wrote {} and {}'.format(bundle_path, curves_path))


def _train_policies(experiment: ExperimentConfig, bundle_path: str, out: str) -> pd.DataFrame:
    root = os.path.dirname(os.path.abspath(out))
    jobs = [
        SeedJob(env_name=experiment.env_name, env_config=experiment.env, agent_name=experiment.agent_name,
                agent_config=experiment.agent_config(seed), bundle_path=bundle_path, seed=seed,
                directory=os.path.join(root, 'seed_{}'.format(seed)))
        for seed in experiment.seeds
    ]
    outputs = run_seeds(jobs, experiment.workers)
    frames = [pd.read_csv(output['metrics']) for output in outputs]  # type: List[pd.DataFrame]
    frame = pd.concat(frames, ignore_index=True).sort_values(['seed', 'episode'], kind='mergesort')
    frame[METRIC_COLUMNS].to_csv(out, index=False)
    return frame


@main.command('train-policy')
@config_argument
@config_option
@set_option
@click.option('--env', 'env_name', default=None, help='Registered environment, e.g. gridworld or navigation.')
@click.option('--repr-checkpoint', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Train on top of this bundle directly, outside the run directory; needs --out.')
@click.option('--agent', type=click.Choice(['td3', 'dqn']), default=None, help='Latent policy learner.')
@click.option('--seeds', type=click.IntRange(min=1), default=None, help='Train seeds 0 .. N-1.')
@click.option('--episodes', type=click.IntRange(min=1), default=None, help='Episode budget per seed.')
@click.option('--steps', type=click.IntRange(min=1), default=None, help='Environment step budget per seed.')
@click.option('--out', type=click.Path(dir_okay=False), default=None,
              help='Metrics CSV (seed, episode, steps, return, success); agents go to seed_<n>/ next to it.')
@click.option('--workers', type=int, default=None, help='Processes used for the seed fan-out.')
@force_option
@handle_errors
def train_policy(config, config_file, overrides, env_name, repr_checkpoint, agent, seeds, episodes, steps, out,
                 workers, force):
    """Train a latent policy for every seed on top of the frozen representation."""
    config = _config_file(config, config_file)
    overrides = list(overrides)
    for key, value in (('env.name', env_name), ('agent.name', agent), ('seeds', seeds),
                       ('agent.episodes', episodes), ('agent.env_steps', steps), ('workers', workers)):
        if value is not None:
            overrides.append('{}={}'.format(key, value))
    if repr_checkpoint is None:
        export = None if out is None else ('train_policy', 'metrics', out)
        _run_stages(config, overrides, ['train_policy'], force, export=export)
        return
    if out is None:
        raise exceptions.ConfigError('--repr-checkpoint needs --out')

    experiment = load_config(config, overrides)
    _makedirs_for(out)
    frame = _train_policies(experiment, repr_checkpoint, out)
    msg.good('{} on {}: {} episodes over {} seeds, success {:.2f}'.format(
        experiment.agent_name, experiment.env_name, len(frame), len(experiment.seeds),
        float(frame['success'].mean()) if len(frame) else float('nan')))
    msg.info('wrote {}'.format(out))


@main.command('eval')
@config_argument
@set_option
@force_option
@handle_errors
def evaluate(config, overrides, force):
    """Evaluate the trained policies greedily and aggregate their learning curves."""
    _run_stages(config, overrides, ['eval'], force)


@main.command()
@config_argument
@set_option
@click.option('--bundle', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Representation checkpoint; defaults to the one recorded in the run manifest.')
@click.option('--samples', type=int, default=None, help='Number of sampled states.')
@click.option('--out', type=click.Path(dir_okay=False), required=True, help='Output .npz file.')
@handle_errors
def dump(config, overrides, bundle, samples, out):
    """Encode sampled environment states into a latent dump for plotting."""
    experiment = load_config(config, overrides)
    if bundle is None:
        manifest = RunManifest.load(experiment.output_dir)
        if manifest is None:
            raise exceptions.StageFailure('dump', 'no run manifest in {}; pass --bundle'.format(
                experiment.output_dir))
        bundle = manifest.artifact('train_repr', 'bundle', experiment.output_dir)
    n_samples = experiment.analysis.n_samples if samples is None else samples
    latent_dump = build_latent_dump(make_env(experiment.env_name, experiment.env), load_bundle(bundle), n_samples,
                                    experiment.analysis.dump_seed)
    msg.good('wrote {} rows to {}'.format(len(latent_dump), latent_dump.save(out)))


@main.command()
@click.option('--dump', 'dump_path', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--components', type=click.Choice(['2', '3']), default='2')
@click.option('--color', default='reward', show_default=True,
              help='Colour of the points: reward or a true-state column such as true_0.')
@click.option('--format', 'image_format', type=click.Choice(['svg', 'png']), default='svg')
@click.option('--out', type=click.Path(dir_okay=False), required=True, help='Output path, without extension.')
@handle_errors
def plot(dump_path, components, color, image_format, out):
    """Plot the principal components of a latent dump, with a CSV of the plotted points."""
    try:
        image, table = plot_latent_map(LatentDump.load(dump_path), out, n_components=int(components),
                                       image_format=image_format, color=color)
    except ValueError as error:
        raise exceptions.ConfigError(str(error))
    msg.good('wrote {} and {}'.format(image, table))


@main.command()
@click.argument('metrics', nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Write the table as CSV.')
@click.option('--final-window', type=int, default=50, help='Final episodes averaged per seed.')
@handle_errors
def report(metrics, out, final_window):
    """Merge metrics or summary CSVs into a method x (env, metric) comparison table."""
    table = comparison_table(read_summaries(metrics, final_window))
    if out is not None:
        table.to_csv(out)
        msg.good('wrote {}'.format(out))
    click.echo(table.to_string())


@main.command('verify-homomorphism')
@click.option('--mdp', 'mdp_path', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Source MDP in the tabular text format.')
@click.option('--map', 'map_path', type=click.Path(exists=True, dir_okay=False), default=None,
              help='State and action maps in the tabular text format.')
@click.option('--image', 'image_path', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Image MDP; induced from the maps when omitted.')
@click.option('--grid-n', type=int, default=3, help='Side of the mirrored grid when no MDP is given.')
@click.option('--n-actions', type=click.Choice(['4', '8']), default='4')
@click.option('--prop2', 'gradient_check', is_flag=True,
              help='Also check that latent and discrete policy gradients agree under the action decoder.')
@click.option('--gradient-checks', type=click.IntRange(min=1), default=20,
              help='Random instances of the gradient equivalence check.')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Write the full report as JSON.')
@handle_errors
def verify_homomorphism(mdp_path, map_path, image_path, grid_n, n_actions, gradient_check, gradient_checks, out):
    """Check a homomorphism exhaustively, lift the image's optimal policy and compare it with the optimum."""
    if (mdp_path is None) != (map_path is None):
        raise exceptions.ConfigError('--mdp and --map must be given together')
    if mdp_path is not None:
        source = read_mdp(mdp_path)
        mapping, n_image_states, n_image_actions = read_map(map_path)
        if image_path is not None:
            image = read_mdp(image_path)
        else:
            image, _ = induced_abstract_mdp(source, mapping, n_image_states, n_image_actions)
    else:
        try:
            config = GridWorldConfig(grid_n=grid_n, n_actions=int(n_actions), image_size=max(grid_n, 10))
            source, image, mapping = mirror_quotient(config)
        except ValueError as error:
            raise exceptions.ConfigError(str(error))

    lifting = verify_lifting(source, image, mapping)
    result = {'lifting': lifting.to_record()}
    passed = lifting.precondition_ok and lifting.optimal
    if gradient_check:
        result['gradient_equivalence'] = gradient_equivalence_suite(gradient_checks)
        passed = passed and result['gradient_equivalence']['passed']

    for violation in lifting.report.violations[:10]:
        msg.warn(str(violation))
    msg.text('homomorphism: {}  lifted policy optimal: {} (max error {:.3g})'.format(
        lifting.precondition_ok, lifting.optimal, lifting.max_abs_error))
    if out is not None:
        with open(out, 'w') as stream:
            json.dump(result, stream, indent=2, sort_keys=True)
    if not passed:
        raise exceptions.StageFailure('verify-homomorphism', 'a check failed, see above')
    msg.good('all checks passed')


if __name__ == '__main__':
    main()
