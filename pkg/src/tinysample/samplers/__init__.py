"""Samplers. Every sampler sees the graph only through a CrawlOracle."""

from ._crawl import LocalView, SamplingError, mix64
from .bfs import (
    forest_fire_sample,
    geometric_burn_count,
    iter_forest_fire,
    iter_snowball,
    snowball_sample,
)
from .extractor import (
    CalibrationError,
    CalibrationReport,
    calibrate,
    interpolate_alpha,
    stage_seed,
    tiny_sample_extractor,
)
from .walks import (
    brwfb_sample,
    brwfb_transition,
    estimate_exponent_mrw,
    iter_brwfb,
    iter_mrw,
    mrw_acceptance,
    mrw_sample,
    mrw_walk,
    transition_probabilities,
)

__all__ = [
    "CalibrationError",
    "CalibrationReport",
    "LocalView",
    "SamplingError",
    "brwfb_sample",
    "brwfb_transition",
    "calibrate",
    "estimate_exponent_mrw",
    "forest_fire_sample",
    "geometric_burn_count",
    "interpolate_alpha",
    "iter_brwfb",
    "iter_forest_fire",
    "iter_mrw",
    "iter_snowball",
    "mix64",
    "mrw_acceptance",
    "mrw_sample",
    "mrw_walk",
    "snowball_sample",
    "stage_seed",
    "tiny_sample_extractor",
    "transition_probabilities",
]
