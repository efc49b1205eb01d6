from .dump import LatentDump, build_latent_dump
from .pca import Projection, pca_project
from .curves import CurveSet, aggregate_curves, steps_to_threshold, curve_frame
from .structure import StructureScore, neighborhood_consistency, cell_means
from .plots import latent_map_frame, plot_latent_map, plot_curves
from .report import SUMMARY_COLUMNS, final_window_summary, read_summaries, comparison_table
