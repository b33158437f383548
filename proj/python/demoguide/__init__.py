"""Demonstration-guided PPO: clustering-based demo selection on top of a
clipped-surrogate actor-critic, with desk-scale reaching environments."""

from ._core import (
    Env,
    Trainer,
    __version__,
    clip_objective,
    efficiency_ratios_json,
    gae,
    kmeans,
    record_demo,
    run_experiment,
)

__all__ = [
    "Env",
    "Trainer",
    "__version__",
    "clip_objective",
    "efficiency_ratios_json",
    "gae",
    "kmeans",
    "record_demo",
    "run_experiment",
]
