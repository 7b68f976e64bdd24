"""Combining the per-level residual stacks of two control branches.

The edge branch and the depth branch each produce a stack of intermediate
residual tensors; the combined conditioning is their level-wise sum. Optional
per-branch scales default to 1 (equal weighting).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ResidualError(ValueError):
    pass


@dataclass(frozen=True)
class ResidualStack:
    levels: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.levels:
            raise ResidualError("a residual stack needs at least one level")
        for i, lv in enumerate(self.levels):
            if not np.isfinite(lv).all():
                raise ResidualError(f"level {i} contains non-finite values")

    @property
    def level_count(self) -> int:
        return len(self.levels)


def combine_control_residuals(edge: ResidualStack, depth: ResidualStack,
                              edge_scale: float = 1.0,
                              depth_scale: float = 1.0) -> ResidualStack:
    """Level-wise sum of the two stacks; shapes must match at every level."""
    if edge.level_count != depth.level_count:
        raise ResidualError(
            f"level count mismatch: {edge.level_count} vs {depth.level_count}")
    combined = []
    for i, (e, d) in enumerate(zip(edge.levels, depth.levels)):
        if e.shape != d.shape:
            raise ResidualError(
                f"shape mismatch at level {i}: {e.shape} vs {d.shape}")
        combined.append(edge_scale * e + depth_scale * d)
    return ResidualStack(tuple(combined))
