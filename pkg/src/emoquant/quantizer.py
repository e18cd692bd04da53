"""Clustering-based nonlinear binning of the ADV space, plus a linear baseline.

The fitted model turns continuous (a, d, v) triples into integer token triples
by per-axis boundary counting. Boundaries come from a 3-D k-means fit: per axis
the sorted centroid coordinates are split either at midpoints or, when the
adjacent clusters' axis variances differ by more than a configured ratio, at
size-weighted averages.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .adv import AdvPoint, AdvTokenTriple

AXES = ("a", "d", "v")


class QuantizerError(ValueError):
    pass


@dataclass(frozen=True)
class QuantizerConfig:
    k_max_cap: int = 14
    sweep_step_s: int = 1
    restarts_R: int = 5
    penalty_lambda: float = 0.25
    variance_ratio_threshold: float = 2.0
    rng_seed: int = 0
    silhouette_subsample: int = 2000
    kmeans_max_iter: int = 300
    kmeans_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.k_max_cap < 2:
            raise QuantizerError("k_max_cap must be >= 2")
        if self.restarts_R < 1 or self.sweep_step_s < 1:
            raise QuantizerError("restarts_R and sweep_step_s must be >= 1")
        if self.penalty_lambda < 0:
            raise QuantizerError("penalty_lambda must be >= 0")


@dataclass
class QuantizerModel:
    """Fitted binning: per-axis strictly increasing boundaries plus bin centers.

    `axis_centers[c]` holds the K sorted per-axis centroid coordinates; bin i
    (1-based token) is represented by `axis_centers[c][i-1]`. The linear
    baseline fills the same shape with equally spaced boundaries and bin
    midpoints (centroids/sizes/variances absent).
    """

    K: int
    boundaries: dict[str, list[float]]
    axis_centers: dict[str, list[float]]
    centroids: list[list[float]] | None = None
    cluster_sizes: list[int] | None = None
    cluster_axis_variances: dict[str, list[float]] | None = None
    fit_report: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for c in AXES:
            bs = self.boundaries[c]
            if len(bs) != self.K - 1:
                raise QuantizerError(f"axis {c!r}: expected {self.K - 1} boundaries, got {len(bs)}")
            if any(b2 <= b1 for b1, b2 in zip(bs, bs[1:])):
                raise QuantizerError(f"axis {c!r}: boundaries not strictly increasing")
            if len(self.axis_centers[c]) != self.K:
                raise QuantizerError(f"axis {c!r}: expected {self.K} bin centers")

    # -- self-describing text serialization; round-trips bit-exactly --

    def to_text(self) -> str:
        payload = {
            "format": "emoquant-quantizer-model",
            "version": 1,
            "K": self.K,
            "boundaries": self.boundaries,
            "axis_centers": self.axis_centers,
            "centroids": self.centroids,
            "cluster_sizes": self.cluster_sizes,
            "cluster_axis_variances": self.cluster_axis_variances,
            "fit_report": self.fit_report,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")

    @classmethod
    def from_text(cls, text: str) -> "QuantizerModel":
        payload = json.loads(text)
        if payload.get("format") != "emoquant-quantizer-model":
            raise QuantizerError("not a quantizer model file")
        return cls(
            K=payload["K"],
            boundaries=payload["boundaries"],
            axis_centers=payload["axis_centers"],
            centroids=payload["centroids"],
            cluster_sizes=payload["cluster_sizes"],
            cluster_axis_variances=payload["cluster_axis_variances"],
            fit_report=payload["fit_report"],
        )

    @classmethod
    def load(cls, path: str | Path) -> "QuantizerModel":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


@dataclass
class CoverageReport:
    m: int
    occupied_units: int
    total_units: int
    coverage_rate: float
    occupancy_histogram: dict[tuple[int, int, int], int]

    def occupancy_entropy(self) -> float:
        """Shannon entropy (nats) of the per-cell sample distribution."""
        counts = np.array(list(self.occupancy_histogram.values()), dtype=float)
        if counts.size == 0:
            return 0.0
        p = counts / counts.sum()
        return float(-(p * np.log(p)).sum())


def _as_array(points: Sequence[AdvPoint] | np.ndarray) -> np.ndarray:
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=float)
    else:
        arr = np.array([p.as_tuple() for p in points], dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise QuantizerError(f"expected an (N, 3) point set, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise QuantizerError("points must be finite")
    return arr


# ---------------------------------------------------------------------------
# k-means
# ---------------------------------------------------------------------------

def _farthest_point_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Greedy spread-maximizing seeding: random first center, then farthest points."""
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]))
    idx = int(rng.integers(n))
    centers[0] = x[idx]
    d2 = np.sum((x - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        idx = int(np.argmax(d2))
        centers[j] = x[idx]
        d2 = np.minimum(d2, np.sum((x - centers[j]) ** 2, axis=1))
    return centers


def kmeans(
    x: np.ndarray,
    k: int,
    rng: np.random.Generator,
    max_iter: int = 300,
    tol: float = 1e-10,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Lloyd's algorithm with farthest-point seeding.

    Returns (centroids, assignment, objective). The objective (sum of squared
    distances to assigned centroids) is non-increasing across iterations.
    Empty clusters are reseeded at the point currently farthest from its
    centroid, keeping every cluster non-empty.
    """
    n = x.shape[0]
    if k < 1 or k > n:
        raise QuantizerError(f"k={k} invalid for {n} points")
    centers = _farthest_point_init(x, k, rng)
    assign = np.zeros(n, dtype=int)
    prev_obj = math.inf
    for _ in range(max_iter):
        d2 = np.sum((x[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        assign = np.argmin(d2, axis=1)
        point_d2 = d2[np.arange(n), assign]
        for j in range(k):
            mask = assign == j
            if not mask.any():
                far = int(np.argmax(point_d2))
                centers[j] = x[far]
                assign[far] = j
                point_d2[far] = 0.0
                mask = assign == j
            centers[j] = x[mask].mean(axis=0)
        obj = float(
            np.sum((x - centers[assign]) ** 2)
        )
        if prev_obj - obj <= tol:
            prev_obj = obj
            break
        prev_obj = obj
    return centers, assign, prev_obj


def kmeans_best_of(
    x: np.ndarray, k: int, restarts: int, rng: np.random.Generator,
    max_iter: int = 300, tol: float = 1e-10,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Best of `restarts` seeded runs, reduced by (objective, run index)."""
    best: tuple[float, int, np.ndarray, np.ndarray] | None = None
    for r in range(restarts):
        run_rng = np.random.default_rng(rng.integers(2**63))
        centers, assign, obj = kmeans(x, k, run_rng, max_iter=max_iter, tol=tol)
        if best is None or (obj, r) < (best[0], best[1]):
            best = (obj, r, centers, assign)
    assert best is not None
    return best[2], best[3], best[0]


# ---------------------------------------------------------------------------
# silhouette
# ---------------------------------------------------------------------------

def silhouette_score(points: Sequence[AdvPoint] | np.ndarray, assignment: Sequence[int]) -> float:
    """Mean silhouette over points: (b - a) / max(a, b).

    a is the mean intra-cluster distance, b the smallest mean distance to
    another cluster. Singleton clusters and degenerate a = b = 0 points
    contribute 0 (the standard convention).
    """
    x = _as_array(points)
    labels = np.asarray(assignment, dtype=int)
    if labels.shape[0] != x.shape[0]:
        raise QuantizerError("assignment length mismatch")
    uniq = np.unique(labels)
    if uniq.size < 2:
        raise QuantizerError("silhouette requires at least 2 clusters")
    dist = np.sqrt(np.maximum(
        np.sum(x**2, axis=1)[:, None] + np.sum(x**2, axis=1)[None, :] - 2 * (x @ x.T),
        0.0,
    ))
    n = x.shape[0]
    scores = np.zeros(n)
    masks = {int(c): labels == c for c in uniq}
    sizes = {c: int(m.sum()) for c, m in masks.items()}
    for i in range(n):
        own = int(labels[i])
        if sizes[own] == 1:
            continue  # contributes 0
        a = dist[i, masks[own]].sum() / (sizes[own] - 1)
        b = min(
            dist[i, masks[c]].mean() for c in masks if c != own
        )
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0.0 else (b - a) / denom
    return float(scores.mean())


def _subsampled_silhouette(
    x: np.ndarray, assign: np.ndarray, cap: int, rng: np.random.Generator
) -> float:
    if x.shape[0] <= cap:
        return silhouette_score(x, assign)
    idx = rng.choice(x.shape[0], size=cap, replace=False)
    sub_assign = assign[idx]
    if np.unique(sub_assign).size < 2:
        return silhouette_score(x, assign)
    return silhouette_score(x[idx], sub_assign)


# ---------------------------------------------------------------------------
# cluster-count selection
# ---------------------------------------------------------------------------

def select_cluster_count(
    points: Sequence[AdvPoint] | np.ndarray, cfg: QuantizerConfig
) -> tuple[int, dict]:
    """Pick K by a coarse silhouette sweep refined around the best candidates.

    Probes k = 2..K_max (K_max = min(cap, floor(cbrt(N)))) with the configured
    step, running k-means R times per k and recording the mean silhouette and
    its std. The top quarter of candidates by mean silhouette get their
    immediate neighbors probed too; the winner maximizes mean - lambda * std.
    """
    x = _as_array(points)
    n = x.shape[0]
    if n < 8:
        raise QuantizerError("insufficient samples for cube-root K_max rule (need N >= 8)")
    k_max = min(cfg.k_max_cap, int(math.floor(round(n ** (1.0 / 3.0), 9))))
    rng = np.random.default_rng(cfg.rng_seed)

    table: dict[int, tuple[float, float, int]] = {}

    def probe(k: int) -> None:
        if k in table or k < 2 or k > k_max:
            return
        scores = []
        for _ in range(cfg.restarts_R):
            run_rng = np.random.default_rng(rng.integers(2**63))
            _, assign, _ = kmeans(x, k, run_rng, cfg.kmeans_max_iter, cfg.kmeans_tol)
            scores.append(_subsampled_silhouette(x, assign, cfg.silhouette_subsample, rng))
        arr = np.array(scores)
        table[k] = (float(arr.mean()), float(arr.std()), cfg.restarts_R)

    for k in range(2, k_max + 1, cfg.sweep_step_s):
        probe(k)

    ordered = sorted(table, key=lambda k: (-table[k][0], k))
    top = ordered[: math.ceil(len(ordered) / 4)]
    for k in top:
        probe(k - 1)
        probe(k + 1)

    best_k = max(
        table,
        key=lambda k: (table[k][0] - cfg.penalty_lambda * table[k][1], -k),
    )
    report = {
        "N": n,
        "K_max": k_max,
        "selected_K": best_k,
        "candidates": [
            {"k": k, "s_mean": table[k][0], "s_std": table[k][1], "runs": table[k][2]}
            for k in sorted(table)
        ],
    }
    return best_k, report


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def _axis_boundaries(
    order: np.ndarray,
    coords: np.ndarray,
    sizes: np.ndarray,
    variances: np.ndarray,
    threshold: float,
    warnings: list[str],
    axis: str,
) -> list[float]:
    """Table of sorted per-axis centroid coordinates -> K-1 boundaries."""
    sc = coords[order]
    ss = sizes[order]
    sv = variances[order]
    if np.allclose(sc, sc[0], rtol=0.0, atol=0.0):
        raise QuantizerError(f"degenerate axis {axis!r}: all centroid coordinates equal")
    bounds: list[float] = []
    for i in range(len(sc) - 1):
        t_mid = 0.5 * (sc[i] + sc[i + 1])
        t_w = (ss[i] * sc[i] + ss[i + 1] * sc[i + 1]) / (ss[i] + ss[i + 1])
        lo, hi = sv[i], sv[i + 1]
        if min(lo, hi) == 0.0:
            # a zero-variance cluster is maximally unlike its neighbor
            ratio = math.inf
        else:
            ratio = max(lo, hi) / min(lo, hi)
        t = t_mid + (t_w - t_mid) * (1.0 if ratio > threshold else 0.0)
        bounds.append(float(t))
    # strictify near-ties by accumulating tiny offsets
    for i in range(1, len(bounds)):
        if bounds[i] - bounds[i - 1] < 1e-9:
            bounds[i] = bounds[i - 1] + 1e-9
            warnings.append(f"axis {axis}: perturbed boundary {i} to preserve monotonicity")
    return bounds


def fit_quantizer(
    points: Sequence[AdvPoint] | np.ndarray,
    cfg: QuantizerConfig,
    k: int | None = None,
) -> QuantizerModel:
    """Fit the nonlinear binning model.

    When `k` is given the silhouette sweep is skipped and that cluster count
    is used directly (the production setting pins K = 14 per axis).
    """
    x = _as_array(points)
    if k is None:
        k, report = select_cluster_count(x, cfg)
    else:
        report = {"N": int(x.shape[0]), "selected_K": k, "forced": True, "candidates": []}

    rng = np.random.default_rng(cfg.rng_seed + 1)
    centers, assign, obj = kmeans_best_of(
        x, k, cfg.restarts_R, rng, cfg.kmeans_max_iter, cfg.kmeans_tol
    )
    sizes = np.array([int((assign == j).sum()) for j in range(k)])
    variances = {
        c: np.array([float(np.var(x[assign == j, ci])) for j in range(k)])
        for ci, c in enumerate(AXES)
    }

    warnings: list[str] = []
    boundaries: dict[str, list[float]] = {}
    axis_centers: dict[str, list[float]] = {}
    for ci, c in enumerate(AXES):
        coords = centers[:, ci]
        order = np.argsort(coords, kind="stable")
        boundaries[c] = _axis_boundaries(
            order, coords, sizes, variances[c], cfg.variance_ratio_threshold, warnings, c
        )
        axis_centers[c] = [float(v) for v in coords[order]]

    report.update({"kmeans_objective": obj, "warnings": warnings, "kind": "nonlinear"})
    return QuantizerModel(
        K=k,
        boundaries=boundaries,
        axis_centers=axis_centers,
        centroids=[[float(v) for v in row] for row in centers],
        cluster_sizes=[int(s) for s in sizes],
        cluster_axis_variances={c: [float(v) for v in variances[c]] for c in AXES},
        fit_report=report,
    )


def fit_linear_quantizer(points: Sequence[AdvPoint] | np.ndarray | None, m: int) -> QuantizerModel:
    """Equal-width baseline: m - 1 evenly spaced boundaries over [1, 7] per axis."""
    if m < 2:
        raise QuantizerError("m must be >= 2")
    bounds = [1.0 + 6.0 * i / m for i in range(1, m)]
    centers = [1.0 + 6.0 * (i - 0.5) / m for i in range(1, m + 1)]
    n = 0 if points is None else _as_array(points).shape[0]
    return QuantizerModel(
        K=m,
        boundaries={c: list(bounds) for c in AXES},
        axis_centers={c: list(centers) for c in AXES},
        fit_report={"kind": "linear", "N": n, "selected_K": m, "candidates": []},
    )


# ---------------------------------------------------------------------------
# application
# ---------------------------------------------------------------------------

def quantize(p: AdvPoint, model: QuantizerModel) -> AdvTokenTriple:
    """Token per axis = 1 + number of boundaries strictly below the value."""
    toks = []
    for c, value in zip(AXES, p.as_tuple()):
        toks.append(1 + sum(1 for t in model.boundaries[c] if value > t))
    return AdvTokenTriple(toks[0], toks[1], toks[2], m=model.K)


def bin_center(tokens: AdvTokenTriple, model: QuantizerModel) -> AdvPoint:
    """Representative 3-space point assembled from per-axis bin centers."""
    for name, t in zip(("x_a", "x_d", "x_v"), tokens.as_tuple()):
        if not 1 <= t <= model.K:
            raise QuantizerError(f"{name}={t} outside [1, {model.K}]")
    return AdvPoint(
        model.axis_centers["a"][tokens.x_a - 1],
        model.axis_centers["d"][tokens.x_d - 1],
        model.axis_centers["v"][tokens.x_v - 1],
    )


def coverage(points: Sequence[AdvPoint] | np.ndarray, model: QuantizerModel) -> CoverageReport:
    """Quantize every point and report occupied-cell fraction plus a full histogram."""
    total = model.K**3
    hist: dict[tuple[int, int, int], int] = {}
    if len(points) > 0:
        x = _as_array(points)
        tok = np.empty((x.shape[0], 3), dtype=int)
        for ci, c in enumerate(AXES):
            bs = np.array(model.boundaries[c])
            tok[:, ci] = 1 + (x[:, ci][:, None] > bs[None, :]).sum(axis=1)
        for row in tok:
            key = (int(row[0]), int(row[1]), int(row[2]))
            hist[key] = hist.get(key, 0) + 1
    occupied = len(hist)
    return CoverageReport(
        m=model.K,
        occupied_units=occupied,
        total_units=total,
        coverage_rate=occupied / total,
        occupancy_histogram=hist,
    )
