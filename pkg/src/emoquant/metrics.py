"""Rank-agreement and classification statistics for the evaluation protocols."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import stats as sps


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class Ranking:
    """A strict total order: ranks[i] is the 1-based rank of item i.

    Ties are disallowed; mid-rank tie handling is a documented extension
    point, not implemented.
    """

    ranks: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.ranks)
        if n < 2:
            raise MetricError("a ranking needs at least 2 items")
        if sorted(self.ranks) != list(range(1, n + 1)):
            raise MetricError(f"ranks must be a permutation of 1..{n}, got {self.ranks}")

    @property
    def n(self) -> int:
        return len(self.ranks)

    @classmethod
    def of(cls, ranks: Sequence[int]) -> "Ranking":
        return cls(tuple(int(r) for r in ranks))


def spearman_src(r1: Ranking, r2: Ranking) -> float:
    """1 - 6 * sum(d_i^2) / (n (n^2 - 1)) over the per-item rank differences."""
    if r1.n != r2.n:
        raise MetricError(f"ranking sizes differ: {r1.n} vs {r2.n}")
    n = r1.n
    d2 = sum((a - b) ** 2 for a, b in zip(r1.ranks, r2.ranks))
    return 1.0 - 6.0 * d2 / (n * (n * n - 1))


def kendalls_w(rankings: Sequence[Ranking]) -> float:
    """Concordance 12 S / (k^2 (n^3 - n)), with S the sum of squared
    deviations of per-item rank sums from their mean k (n + 1) / 2."""
    if len(rankings) < 2:
        raise MetricError("need at least 2 raters")
    n = rankings[0].n
    if any(r.n != n for r in rankings):
        raise MetricError("all rankings must cover the same items")
    k = len(rankings)
    sums = np.sum([r.ranks for r in rankings], axis=0, dtype=float)
    s = float(np.sum((sums - k * (n + 1) / 2.0) ** 2))
    return 12.0 * s / (k * k * (n**3 - n))


@dataclass(frozen=True)
class MacroPR:
    precision: float
    recall: float
    degenerate_classes: tuple[int, ...] = ()


@dataclass
class ConfusionMatrix:
    """Square count matrix, rows = true class, columns = predicted class."""

    counts: np.ndarray

    def __post_init__(self) -> None:
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 2 or self.counts.shape[0] != self.counts.shape[1]:
            raise MetricError("confusion matrix must be square")
        if np.any(self.counts < 0):
            raise MetricError("counts must be non-negative")

    @property
    def classes(self) -> int:
        return self.counts.shape[0]


def macro_pr(cm: ConfusionMatrix) -> MacroPR:
    """Unweighted class means of per-class precision and recall.

    Classes with an empty row or column contribute 0 and are flagged rather
    than NaN-poisoning the mean.
    """
    counts = cm.counts
    if counts.sum() == 0:
        raise MetricError("confusion matrix is all zero")
    diag = np.diag(counts).astype(float)
    col = counts.sum(axis=0).astype(float)
    row = counts.sum(axis=1).astype(float)
    degenerate: list[int] = []
    prec = np.zeros(cm.classes)
    rec = np.zeros(cm.classes)
    for c in range(cm.classes):
        if col[c] == 0 or row[c] == 0:
            degenerate.append(c)
        prec[c] = diag[c] / col[c] if col[c] > 0 else 0.0
        rec[c] = diag[c] / row[c] if row[c] > 0 else 0.0
    return MacroPR(float(prec.mean()), float(rec.mean()), tuple(degenerate))


def pearson_matrix(
    features: Mapping[str, Sequence[float]],
    adv_tokens: Mapping[str, Sequence[int]],
) -> dict[str, dict[str, float]]:
    """Pearson r per (ADV dimension, feature) pair.

    Returns {axis: {feature_name: r}} for axes "a", "d", "v". Constant
    columns are an error naming the offending column.
    """
    axes = {k: np.asarray(v, dtype=float) for k, v in adv_tokens.items()}
    feats = {k: np.asarray(v, dtype=float) for k, v in features.items()}
    lengths = {arr.shape[0] for arr in list(axes.values()) + list(feats.values())}
    if len(lengths) != 1:
        raise MetricError("all columns must have equal row counts")
    if lengths.pop() < 3:
        raise MetricError("need at least 3 rows")
    for name, arr in {**axes, **feats}.items():
        if np.std(arr) == 0.0:
            raise MetricError(f"column {name!r} is constant")
    out: dict[str, dict[str, float]] = {}
    for axis, av in axes.items():
        out[axis] = {}
        for fname, fv in feats.items():
            r = np.corrcoef(av, fv)[0, 1]
            out[axis][fname] = float(r)
    return out


@dataclass
class PerturbationReport:
    """Mean feature deltas per (emotion, perturbation pattern)."""

    deltas: dict[tuple[str, str], dict[str, float]] = field(default_factory=dict)

    def to_lines(self) -> list[str]:
        feature_names = sorted({f for row in self.deltas.values() for f in row})
        lines = ["emotion\tpattern\t" + "\t".join(feature_names)]
        for (emotion, pattern) in sorted(self.deltas):
            row = self.deltas[(emotion, pattern)]
            cells = [f"{row.get(f, 0.0):+.4f}" for f in feature_names]
            lines.append(f"{emotion}\t{pattern}\t" + "\t".join(cells))
        return lines


def perturbation_deltas(
    baseline: Mapping[str, Mapping[str, Sequence[float]]],
    perturbed: Mapping[tuple[str, str], Mapping[str, Sequence[float]]],
) -> PerturbationReport:
    """Signed mean feature shifts of each perturbed group against its
    emotion's baseline group."""
    report = PerturbationReport()
    for (emotion, pattern), rows in perturbed.items():
        if emotion not in baseline:
            raise MetricError(f"no baseline group for emotion {emotion!r}")
        base = baseline[emotion]
        deltas: dict[str, float] = {}
        for fname, values in rows.items():
            if fname not in base:
                raise MetricError(f"baseline for {emotion!r} lacks feature {fname!r}")
            deltas[fname] = float(np.mean(values) - np.mean(base[fname]))
        report.deltas[(emotion, pattern)] = deltas
    return report


def ttest_pvalue(sample_a: Sequence[float], sample_b: Sequence[float]) -> float:
    """Two-sample t-test p-value (preference-test significance)."""
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if a.size < 2 or b.size < 2:
        raise MetricError("each sample needs at least 2 observations")
    return float(sps.ttest_ind(a, b).pvalue)
