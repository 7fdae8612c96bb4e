"""Reproducible learning algorithms: statistical queries, heavy hitters,
approximate medians, lattice-rounding halfspace learners and smooth boosting,
with a paired-run harness for measuring reproducibility."""

from .errors import BOTTOM
from .randomness import RandomStream, derive_stream, draw_uniform, split_round_robin

__version__ = "0.1.0"

__all__ = ["BOTTOM", "RandomStream", "derive_stream", "draw_uniform", "split_round_robin"]
