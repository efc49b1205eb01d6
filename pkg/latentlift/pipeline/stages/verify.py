import json
import logging

from typing import Any, Dict

import numpy as np

from ...envs import GridWorldConfig
from ...homoverify import check_gradient_equivalence, mirror_quotient, random_gradient_instance, verify_lifting
from .base import Stage, StageContext, StageResult
from .catalogue import register_stage

logger = logging.getLogger(__name__)


def gradient_equivalence_suite(n_instances: int = 20, seed: int = 0) -> Dict[str, Any]:
    """Compare the latent and the induced policy gradients on random small MDPs."""
    rng = np.random.default_rng(seed)
    records = []
    for _ in range(n_instances):
        mdp, thresholds, theta = random_gradient_instance(rng)
        report = check_gradient_equivalence(mdp, thresholds, theta)
        records.append(dict(n_states=mdp.n_states, n_actions=mdp.n_actions, **report.to_record()))
    return {
        'instances': records,
        'max_rel_err': max(record['max_rel_err'] for record in records),
        'passed': all(record['passed'] for record in records),
    }


class VerifyStage(Stage):
    """Exact homomorphism and lifting checks on the tabular version of the experiment's grid.

    Only runs when added explicitly. The mirror quotient needs a square grid with the goal on the diagonal;
    other environments only get the random gradient-equivalence suite.
    """

    name = 'verify'
    autoload = False
    index = 5
    blocks = ('env', )

    def run(self, context: StageContext) -> StageResult:
        config = context.config
        report = {'gradient_equivalence': gradient_equivalence_suite()}  # type: Dict[str, Any]
        env_config = config.env
        if isinstance(env_config, GridWorldConfig) and env_config.n_rows == env_config.n_cols and \
                env_config.goal_cell[0] == env_config.goal_cell[1]:  # type: ignore
            source, image, mapping = mirror_quotient(env_config)
            report['mirror_lifting'] = verify_lifting(source, image, mapping).to_record()
        else:
            logger.info('no mirror quotient for %s, checking gradient equivalence only', config.env_name)

        path = context.path('verify', 'verify.json')
        with open(path, 'w') as stream:
            json.dump(report, stream, indent=2, sort_keys=True)
        metrics = {'gradient_equivalence_passed': report['gradient_equivalence']['passed']}
        if 'mirror_lifting' in report:
            metrics['lifting_optimal'] = report['mirror_lifting']['optimal']
            metrics['homomorphism_ok'] = report['mirror_lifting']['precondition_ok']
        return StageResult(artifacts={'report': context.relative(path)}, metrics=metrics)


register_stage(VerifyStage)
