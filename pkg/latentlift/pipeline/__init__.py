from .config import (
    SCHEMA_VERSION, OUTPUT_ROOT_VARIABLE, CollectConfig, AnalysisConfig, ExperimentConfig, apply_overrides,
    parse_override, config_from_dict, load_config, dump_config, output_root,
)
from .collect import collect, collect_env_overrides, random_transitions
from .manifest import MANIFEST_FILE, StageRecord, RunManifest
from .stages import (
    stage_catalogue, register_stage, remove_stage, Stage, StageContext, StageResult, CollectStage,
    TrainRepresentationStage, TrainPolicyStage, EvaluateStage, PlotStage, VerifyStage, SeedJob, run_seed,
    run_seeds, gradient_equivalence_suite,
)
from .runner import Pipeline, run_pipeline
