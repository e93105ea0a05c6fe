"""Simulator for just-in-time decoding of sliced 3D surface codes."""

from .channel import (ErrorState, NoiseParams, SyndromeState, compute_syndrome,
                      extract_endpoints, sample_errors, trial_rng)
from .correction import (CollapseRecord, CorrectionError, CorrectionOp,
                         collapse, layer_failure, push_to_top, z_footprint)
from .decoder import (DecoderParams, PseudoDistanceMap, delayed_match,
                      loop_check, mwpm)
from .frame import CODES, DISPLACEMENT
from .harness import (CIEstimate, TrialConfig, TrialStats, agresti_coull,
                      run_cell, run_sweep, run_trial)
from .lattice import (BOUNDARY_SX1, BOUNDARY_SX2, TOP, GeometryError,
                      LayerGeometry, SliceGeometry, ValidationReport,
                      build_layer, build_slice, canonical_pair, dual_distance,
                      min_logical_weight, overlap_triples, path_between,
                      path_to_top, translate_pair, validate_slice)

__all__ = [
    "CODES", "DISPLACEMENT", "BOUNDARY_SX1", "BOUNDARY_SX2", "TOP",
    "GeometryError", "LayerGeometry", "SliceGeometry", "ValidationReport",
    "build_layer", "build_slice", "canonical_pair", "dual_distance",
    "min_logical_weight", "overlap_triples", "path_between", "path_to_top",
    "translate_pair", "validate_slice",
    "ErrorState", "NoiseParams", "SyndromeState", "compute_syndrome",
    "extract_endpoints", "sample_errors", "trial_rng",
    "DecoderParams", "PseudoDistanceMap", "delayed_match", "loop_check", "mwpm",
    "CollapseRecord", "CorrectionError", "CorrectionOp", "collapse",
    "layer_failure", "push_to_top", "z_footprint",
    "CIEstimate", "TrialConfig", "TrialStats", "agresti_coull",
    "run_cell", "run_sweep", "run_trial",
]

__version__ = "0.1.0"
