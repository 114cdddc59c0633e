"""Circular planar electrical networks, resistance metrics and circular split systems."""
from .matkernel import Arith, EXACT, SquareMatrix, determinant, schur_complement
from .circular import CircularOrder, CircularPair, circular_minor, is_circular_planar
from .network import Network, StrandMatching, laplacian, response_matrix, resistance_matrix
from .response import m_from_w, validate_response, w_from_m
from .kalmanson import WeightedSplit, WeightedSplitSystem, split_decomposition, split_metric
from .reconstruct import PipelineConfig, reconstruct_from, reconstruct_pipeline

__version__ = "0.1.0"

__all__ = [
    "Arith",
    "EXACT",
    "SquareMatrix",
    "determinant",
    "schur_complement",
    "CircularOrder",
    "CircularPair",
    "circular_minor",
    "is_circular_planar",
    "Network",
    "StrandMatching",
    "laplacian",
    "response_matrix",
    "resistance_matrix",
    "m_from_w",
    "validate_response",
    "w_from_m",
    "WeightedSplit",
    "WeightedSplitSystem",
    "split_decomposition",
    "split_metric",
    "PipelineConfig",
    "reconstruct_from",
    "reconstruct_pipeline",
]
