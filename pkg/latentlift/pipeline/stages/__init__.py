from .catalogue import stage_catalogue, register_stage, remove_stage
from .base import Stage, StageContext, StageResult
from .collect import CollectStage
from .representation import TrainRepresentationStage
from .policy import SeedJob, run_seed, run_seeds, TrainPolicyStage, EvaluateStage
from .plot import PlotStage
from .verify import VerifyStage, gradient_equivalence_suite
