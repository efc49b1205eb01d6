import json

import pandas as pd

from ...analysis import aggregate_curves, build_latent_dump, neighborhood_consistency, plot_curves, plot_latent_map
from ...envs import GridWorld, make_env
from ...nets import load_bundle
from .base import Stage, StageContext, StageResult
from .catalogue import register_stage
from .policy import optimal_reference


class PlotStage(Stage):
    """Latent map of the learned representation and the learning curves of the trained seeds."""

    name = 'plot'
    autoload = True
    index = 4
    depends_on = ('train_repr', 'train_policy')
    blocks = ('analysis', )

    def run(self, context: StageContext) -> StageResult:
        config = context.config
        analysis = config.analysis
        env = make_env(config.env_name, config.env)
        bundle = load_bundle(context.artifact('train_repr', 'bundle'))

        dump = build_latent_dump(env, bundle, analysis.n_samples, analysis.dump_seed)
        dump_path = dump.save(context.path('plot', 'latent_dump.npz'))
        map_image, map_csv = plot_latent_map(dump, context.path('plot', 'latent_map'),
                                             n_components=analysis.n_components(config.env_name),
                                             image_format=analysis.image_format,
                                             title='{} on {}'.format(config.repr.baseline, config.env_name))

        training = pd.read_csv(context.artifact('train_policy', 'metrics'))
        curves = aggregate_curves(training, best_k=min(analysis.best_k, training['seed'].nunique()),
                                  metric='steps', final_window=analysis.final_window)
        method = '{}+{}'.format(config.repr.baseline, config.agent_name)
        curves_image, curves_csv = plot_curves({method: curves}, context.path('plot', 'curves'),
                                               image_format=analysis.image_format, ylabel='steps per episode',
                                               reference=optimal_reference(env))

        artifacts = {
            'latent_dump': dump_path, 'latent_map': map_image, 'latent_map_csv': map_csv,
            'curves': curves_image, 'curves_csv': curves_csv,
        }
        metrics = {'n_dump_rows': len(dump)}
        if isinstance(env, GridWorld):
            score = neighborhood_consistency(dump)
            metrics.update({'structure_{}'.format(key): value for key, value in score.to_record().items()})
            structure_path = context.path('plot', 'structure.json')
            with open(structure_path, 'w') as stream:
                json.dump(score.to_record(), stream, indent=2, sort_keys=True)
            artifacts['structure'] = structure_path
        return StageResult(artifacts={key: context.relative(path) for key, path in artifacts.items()},
                           metrics=metrics)


register_stage(PlotStage)
