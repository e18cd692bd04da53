"""Optimal-transport conditional flow matching math.

The straight conditional path from a Gaussian source X0 to a data sample X1
has the time-independent target field X1 - (1 - sigma) * X0; the interpolant
is the unique affine-in-t path with that derivative starting at X0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class FlowError(ValueError):
    pass


@dataclass(frozen=True)
class FlowConfig:
    sigma: float = 0.05
    tau: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.sigma < 1.0:
            raise FlowError("sigma must lie in [0, 1)")
        if self.tau <= 0.0:
            raise FlowError("tau must be > 0")


def _check_shapes(x0: np.ndarray, x1: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x0 = np.asarray(x0, dtype=float)
    x1 = np.asarray(x1, dtype=float)
    if x0.shape != x1.shape:
        raise FlowError(f"shape mismatch: {x0.shape} vs {x1.shape}")
    return x0, x1


def ot_interpolant(x0: np.ndarray, x1: np.ndarray, t: float, cfg: FlowConfig) -> np.ndarray:
    """phi_t = (1 - (1 - sigma) t) X0 + t X1."""
    x0, x1 = _check_shapes(x0, x1)
    if not 0.0 <= t <= 1.0:
        raise FlowError("t must lie in [0, 1]")
    return (1.0 - (1.0 - cfg.sigma) * t) * x0 + t * x1


def ot_target_field(x0: np.ndarray, x1: np.ndarray, cfg: FlowConfig) -> np.ndarray:
    """Regression target X1 - (1 - sigma) X0; independent of t."""
    x0, x1 = _check_shapes(x0, x1)
    return x1 - (1.0 - cfg.sigma) * x0


def cfm_loss(
    predicted_field: np.ndarray, x0: np.ndarray, x1: np.ndarray, cfg: FlowConfig
) -> float:
    """Mean squared error between the predicted and target fields.

    Mean over elements (not sum) so values are scale-comparable across shapes.
    """
    x0, x1 = _check_shapes(x0, x1)
    pred = np.asarray(predicted_field, dtype=float)
    if pred.shape != x0.shape:
        raise FlowError(f"shape mismatch: predicted {pred.shape} vs {x0.shape}")
    target = ot_target_field(x0, x1, cfg)
    return float(np.mean((target - pred) ** 2))


def cosine_timestep(u: float) -> float:
    """Monotone reparameterization t = 1 - cos(u * pi / 2) of uniform times."""
    if not 0.0 <= u <= 1.0:
        raise FlowError("u must lie in [0, 1]")
    return 1.0 - math.cos(u * math.pi / 2.0)


def sample_source(shape: tuple[int, ...], tau: float, seed: int) -> np.ndarray:
    """Draw the flow source: i.i.d. N(0, 1/tau) entries, deterministic per seed."""
    if tau <= 0.0:
        raise FlowError("tau must be > 0")
    rng = np.random.default_rng(seed)
    return rng.normal(loc=0.0, scale=1.0 / math.sqrt(tau), size=shape)
