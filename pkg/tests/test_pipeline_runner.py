import os
import json
import unittest

import pandas as pd

from latentlift import exceptions
from latentlift.pipeline import (
    CollectStage, Pipeline, RunManifest, Stage, StageResult, VerifyStage, register_stage, remove_stage,
    config_from_dict, run_pipeline, stage_catalogue,
)

from base import BaseTestCase, tiny_raw


class Explode(Stage):
    name = 'explode'
    index = 1

    def run(self, context):
        raise RuntimeError('boom')


class PipelineTestCase(BaseTestCase, unittest.TestCase):
    def test_default_stages(self):
        pipeline = Pipeline(self.tiny_config())
        self.assertEqual([stage.name for stage in pipeline.stages],
                         ['collect', 'train_repr', 'train_policy', 'eval', 'plot'])

    def test_add_and_remove(self):
        pipeline = Pipeline(self.tiny_config(), stage_list=[])
        pipeline.add_stage('verify')
        pipeline.add_stage(CollectStage())
        self.assertEqual([stage.name for stage in pipeline.stages], ['collect', 'verify'])
        with self.assertRaises(KeyError):
            pipeline.add_stage(VerifyStage)
        with self.assertRaises(exceptions.ConfigError):
            pipeline.add_stage('deploy')
        with self.assertRaises(TypeError):
            pipeline.add_stage(dict)
        pipeline.remove_stage('verify')
        pipeline.remove_stage(CollectStage)
        self.assertEqual(pipeline.stages, [])

    def test_run_and_rerun(self):
        manifest = run_pipeline(self.tiny_config())
        self.assertEqual(list(manifest.stages), ['collect', 'train_repr', 'train_policy', 'eval', 'plot'])
        self.assertTrue(all(record.status == 'done' for record in manifest.stages.values()))
        self.assertFalse(manifest.partial)
        for record in manifest.stages.values():
            for path in record.artifacts.values():
                self.assertFalse(os.path.isabs(path))
                self.assertTrue(os.path.exists(os.path.join(self.output_dir, path)), path)
        self.assertEqual(manifest.stages['collect'].metrics['n_transitions'], 64)
        self.assertTrue(os.path.exists(os.path.join(self.output_dir, 'config.yaml')))

        metrics = pd.read_csv(os.path.join(self.output_dir, manifest.stages['train_policy'].artifacts['metrics']))
        self.assertEqual(sorted(metrics['seed'].unique()), [0, 1])
        latent_map = pd.read_csv(os.path.join(self.output_dir, manifest.stages['plot'].artifacts['latent_map_csv']))
        self.assertEqual(len(latent_map), 20)
        summary = pd.read_csv(os.path.join(self.output_dir, manifest.stages['eval'].artifacts['summary']))
        self.assertIn('ours+td3', set(summary['method']))

        again = run_pipeline(self.tiny_config())
        self.assertTrue(all(record.status == 'skipped' for record in again.stages.values()))

        edited = run_pipeline(self.tiny_config(agent={'episodes': 3}))
        statuses = {name: record.status for name, record in edited.stages.items()}
        self.assertEqual(statuses, {'collect': 'skipped', 'train_repr': 'skipped', 'train_policy': 'done',
                                    'eval': 'done', 'plot': 'done'})

        forced = run_pipeline(self.tiny_config(agent={'episodes': 3}), stages=['collect'], force=True)
        self.assertEqual(forced.stages['collect'].status, 'done')

    def test_failure(self):
        with self.assertRaises(exceptions.StageFailure) as context:
            Pipeline(self.tiny_config(), stage_list=['collect', Explode]).run()
        self.assertIn('boom', str(context.exception))
        manifest = RunManifest.load(self.output_dir)
        self.assertTrue(manifest.partial)
        self.assertEqual(manifest.stages['collect'].status, 'done')
        self.assertEqual(manifest.stages['explode'].status, 'failed')
        self.assertIn('RuntimeError', manifest.error)

    def test_missing_upstream(self):
        with self.assertRaises(exceptions.StageFailure):
            Pipeline(self.tiny_config(), stage_list=['eval']).run()

    def test_verify_stage(self):
        manifest = Pipeline(self.tiny_config(), stage_list=['verify']).run()
        metrics = manifest.stages['verify'].metrics
        self.assertTrue(metrics['gradient_equivalence_passed'])
        self.assertTrue(metrics['homomorphism_ok'])
        self.assertTrue(metrics['lifting_optimal'])
        with open(os.path.join(self.output_dir, manifest.stages['verify'].artifacts['report'])) as stream:
            report = json.load(stream)
        self.assertEqual(len(report['gradient_equivalence']['instances']), 20)


class StageCatalogueTestCase(unittest.TestCase):
    def test_register_and_remove(self):
        class Report(Stage):
            name = 'report'

            def run(self, context):
                return StageResult()

        register_stage(Report, autoload=False, index=40)
        try:
            self.assertIn('report', stage_catalogue)
            self.assertEqual(Report.index, 40)
        finally:
            remove_stage('report')
        self.assertNotIn('report', stage_catalogue)

    def test_register_instance(self):
        with self.assertRaises(ValueError):
            register_stage(Explode())
        with self.assertRaises(ValueError):
            remove_stage(Explode())

    def test_stage_fingerprint_scope(self):
        manifest = RunManifest(config_fingerprint='', code_version='')
        base = config_from_dict(tiny_raw('runs/x'))
        other = config_from_dict(tiny_raw('runs/x', agent={'episodes': 9}))
        self.assertEqual(CollectStage().fingerprint(base, manifest), CollectStage().fingerprint(other, manifest))
        collect_edit = config_from_dict(tiny_raw('runs/x', collect={'n_transitions': 65}))
        self.assertNotEqual(CollectStage().fingerprint(base, manifest),
                            CollectStage().fingerprint(collect_edit, manifest))
