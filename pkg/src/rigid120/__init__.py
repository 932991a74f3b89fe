"""Exact certificate of infinitesimal rigidity for the 96-wall reflection group of the right-angled 120-cell."""

from .numfield import ALPHA, NFElem, TAU, TAU_INV
from .pipeline import PipelineConfig, run_pipeline

__all__ = ["ALPHA", "NFElem", "TAU", "TAU_INV", "PipelineConfig", "run_pipeline"]
__version__ = "0.1.0"
