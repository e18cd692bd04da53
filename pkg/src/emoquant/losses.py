"""Training-objective math: position-weighted smoothed sequence loss, the
ADV-predictor regression loss, and the semi-supervised gating fusion rule."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


class LossError(ValueError):
    pass


class InfiniteLossError(LossError):
    """A weighted position assigns zero probability where the target puts mass."""

    def __init__(self, position: int):
        super().__init__(f"zero predicted probability at weighted position {position}")
        self.position = position


@dataclass(frozen=True)
class SmoothingConfig:
    epsilon: float = 0.1
    vocab_size_K: int = 2

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon < 1.0:
            raise LossError("epsilon must lie in [0, 1)")
        if self.vocab_size_K < 2:
            raise LossError("vocab_size_K must be >= 2")


@dataclass(frozen=True)
class AdvLossConfig:
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if not np.isfinite(self.alpha) or self.alpha < 0:
            raise LossError("alpha must be finite and >= 0")


def smoothed_sequence_loss(
    probs: np.ndarray,
    targets: Sequence[int],
    weights: Sequence[float],
    cfg: SmoothingConfig,
) -> float:
    """Weighted smoothed cross-entropy over the loss region.

    The target distribution puts 1 - epsilon on the ground-truth token and
    epsilon / K on every other vocabulary entry (the literal mass assignment;
    it sums to slightly less than 1 and is deliberately not renormalized).
    Positions with weight 0 are skipped entirely, so their probabilities are
    never evaluated.
    """
    q = np.asarray(probs, dtype=float)
    mu = np.asarray(targets, dtype=int)
    w = np.asarray(weights, dtype=float)
    if q.ndim != 2:
        raise LossError("probs must be a (length, vocab) matrix")
    length, vocab = q.shape
    if length < 3:
        raise LossError("loss region must have length L + 2 >= 3")
    if mu.shape[0] != length or w.shape[0] != length:
        raise LossError("targets/weights length mismatch")
    if np.any(q < 0) or np.any(np.abs(q.sum(axis=1) - 1.0) > 1e-6):
        raise LossError("probability rows must be valid distributions")

    eps = cfg.epsilon
    off_mass = eps / cfg.vocab_size_K
    total = 0.0
    for l in range(length):
        if w[l] == 0.0:
            continue
        row = q[l]
        if row[mu[l]] == 0.0:
            raise InfiniteLossError(l)
        term = (1.0 - eps) * np.log(row[mu[l]])
        if eps > 0.0:
            others = np.delete(row, mu[l])
            if np.any(others == 0.0):
                raise InfiniteLossError(l)
            term += off_mass * np.log(others).sum()
        total += w[l] * term
    return float(-total / length)


def adv_predictor_loss(
    pred: np.ndarray,
    truth: np.ndarray,
    centers: np.ndarray,
    cfg: AdvLossConfig,
) -> float:
    """alpha * squared error to the true triples + squared distance to the
    bin centers of the true triples, summed over the batch."""
    pred = np.asarray(pred, dtype=float)
    truth = np.asarray(truth, dtype=float)
    centers = np.asarray(centers, dtype=float)
    if pred.shape != truth.shape or pred.shape != centers.shape:
        raise LossError(
            f"batch shape mismatch: pred {pred.shape}, truth {truth.shape}, centers {centers.shape}"
        )
    if pred.ndim != 2 or pred.shape[1] != 3:
        raise LossError("batches must have shape (B, 3)")
    mse_term = float(np.sum((pred - truth) ** 2))
    center_term = float(np.sum((pred - centers) ** 2))
    return cfg.alpha * mse_term + center_term


def emotion_gate(
    e_lbl: np.ndarray | None,
    e_adv: np.ndarray | None,
    e_attn: np.ndarray | None,
    gate: float,
    x_lbl: int,
    adv_present: bool,
) -> np.ndarray:
    """Fuse label and ADV embeddings into the emotion condition.

    Unknown label -> the ADV embedding alone; label without ADV -> the label
    embedding scaled by (gate + 1); both present -> a convex combination of
    the label embedding and the label-attended ADV embedding.
    """
    if not 0.0 <= gate <= 1.0:
        raise LossError("gate must lie in [0, 1]")
    if x_lbl == 0:
        if e_adv is None:
            raise LossError("unknown-label branch requires the ADV embedding")
        return np.asarray(e_adv, dtype=float).copy()
    if e_lbl is None:
        raise LossError("labeled branches require the label embedding")
    e_lbl = np.asarray(e_lbl, dtype=float)
    if not adv_present:
        return (gate + 1.0) * e_lbl
    if e_attn is None:
        raise LossError("label+ADV branch requires the attended embedding")
    e_attn = np.asarray(e_attn, dtype=float)
    if e_attn.shape != e_lbl.shape:
        raise LossError("embedding dimension mismatch")
    return gate * e_lbl + (1.0 - gate) * e_attn
