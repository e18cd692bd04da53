"""Manifest loading, cleaning rules, and normalized sample records.

Manifests are line-delimited JSON, one utterance per line, with fields
`id, dataset, dataset_type, speaker, label, adv_a, adv_d, adv_v, duration_s,
text_token_ids` (+ optional `flagged` for upstream audio-level filters).
Absent adv_* fields encode a label-only sample.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .adv import (
    AdvPoint,
    ClampCounter,
    DatasetType,
    LabelVocabulary,
    normalize_adv,
    unify_label,
)

MAX_DURATION_S = 30.0
MIN_SPEAKER_UTTERANCES = 4


class RecordError(ValueError):
    pass


@dataclass
class SampleManifestRow:
    id: str
    dataset: str
    dataset_type: DatasetType
    text_token_ids: list[int]
    speaker: str
    raw_label: str
    raw_adv: tuple[float, float, float] | None
    duration_s: float
    flagged: bool = False


@dataclass
class SampleRecord:
    id: str
    dataset_type: DatasetType
    text_token_ids: list[int]
    speaker_id: int
    label_token: int
    adv: AdvPoint | None


@dataclass
class Rejection:
    row_id: str
    reason: str
    detail: str = ""


@dataclass
class CleanPolicy:
    max_duration_s: float = MAX_DURATION_S
    min_speaker_utterances: int = MIN_SPEAKER_UTTERANCES
    drop_unknown_speaker: bool = True


@dataclass
class CorpusStats:
    total: int
    label_counts: dict[int, int]
    dataset_type_counts: dict[str, int]
    speaker_count: int
    adv_histograms: dict[str, list[int]]
    adv_bin_edges: list[float]


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def parse_manifest_line(line: str) -> SampleManifestRow:
    obj = json.loads(line)
    adv = None
    if any(k in obj for k in ("adv_a", "adv_d", "adv_v")):
        adv = (float(obj["adv_a"]), float(obj["adv_d"]), float(obj["adv_v"]))
    duration = float(obj["duration_s"])
    if duration <= 0:
        raise RecordError(f"row {obj.get('id')!r}: duration_s must be > 0")
    return SampleManifestRow(
        id=str(obj["id"]),
        dataset=str(obj.get("dataset", "")),
        dataset_type=DatasetType(obj["dataset_type"]),
        text_token_ids=[int(t) for t in obj.get("text_token_ids", [])],
        speaker=str(obj["speaker"]),
        raw_label=str(obj.get("label", "")),
        raw_adv=adv,
        duration_s=duration,
        flagged=bool(obj.get("flagged", False)),
    )


def read_manifest(path: str | Path) -> tuple[list[SampleManifestRow], list[Rejection]]:
    """Parse a manifest file; malformed lines are logged, never fatal."""
    rows: list[SampleManifestRow] = []
    rejections: list[Rejection] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append(parse_manifest_line(line))
        except (RecordError, KeyError, ValueError) as exc:
            rejections.append(Rejection(f"line:{lineno}", "MALFORMED", str(exc)))
    return rows, rejections


# ---------------------------------------------------------------------------
# cleaning
# ---------------------------------------------------------------------------

def clean_manifest(
    rows: Iterable[SampleManifestRow], policy: CleanPolicy | None = None
) -> tuple[list[SampleManifestRow], list[Rejection]]:
    """Apply the corpus cleaning rules.

    Drops rows with duration over the cap, empty transcriptions, Unknown
    speakers, and upstream-flagged audio; then iterates the sparse-speaker
    rule to a fixed point, since earlier drops can push a speaker under the
    utterance minimum.
    """
    policy = policy or CleanPolicy()
    kept: list[SampleManifestRow] = []
    rejections: list[Rejection] = []
    for row in rows:
        if row.flagged:
            rejections.append(Rejection(row.id, "UPSTREAM_FLAG"))
        elif row.duration_s > policy.max_duration_s:
            rejections.append(Rejection(row.id, "DURATION", f"{row.duration_s}s"))
        elif not row.text_token_ids:
            rejections.append(Rejection(row.id, "MISSING_TRANSCRIPTION"))
        elif policy.drop_unknown_speaker and row.speaker.strip().casefold() == "unknown":
            rejections.append(Rejection(row.id, "UNKNOWN_SPEAKER"))
        else:
            kept.append(row)

    while True:
        counts: dict[str, int] = {}
        for row in kept:
            counts[row.speaker] = counts.get(row.speaker, 0) + 1
        sparse = {s for s, c in counts.items() if c < policy.min_speaker_utterances}
        if not sparse:
            break
        next_kept = []
        for row in kept:
            if row.speaker in sparse:
                rejections.append(Rejection(row.id, "SPARSE_SPEAKER", row.speaker))
            else:
                next_kept.append(row)
        kept = next_kept
    return kept, rejections


def write_rejection_log(rejections: Iterable[Rejection], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for r in rejections:
            fh.write(json.dumps({"id": r.row_id, "reason": r.reason, "detail": r.detail}) + "\n")


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------

def build_records(
    rows: Iterable[SampleManifestRow],
    vocab: LabelVocabulary,
    axis_ranges: tuple[tuple[float, float], ...] = ((1.0, 7.0), (1.0, 7.0), (1.0, 7.0)),
    clamp_counter: ClampCounter | None = None,
) -> list[SampleRecord]:
    """Normalize kept rows into SampleRecords with dense first-seen speaker ids."""
    speaker_ids: dict[str, int] = {}
    records: list[SampleRecord] = []
    for row in rows:
        if row.dataset_type.has_adv and row.raw_adv is None:
            raise RecordError(f"row {row.id!r}: type {row.dataset_type.value} requires ADV values")
        if not row.dataset_type.has_adv and row.raw_adv is not None:
            raise RecordError(f"row {row.id!r}: type {row.dataset_type.value} forbids ADV values")
        if row.speaker not in speaker_ids:
            speaker_ids[row.speaker] = len(speaker_ids)
        adv = None
        if row.raw_adv is not None:
            adv = normalize_adv(row.raw_adv, axis_ranges, clamp_counter)
        records.append(
            SampleRecord(
                id=row.id,
                dataset_type=row.dataset_type,
                text_token_ids=list(row.text_token_ids),
                speaker_id=speaker_ids[row.speaker],
                label_token=unify_label(row.raw_label, vocab),
                adv=adv,
            )
        )
    return records


def adv_points(records: Iterable[SampleRecord]) -> list[AdvPoint]:
    return [r.adv for r in records if r.adv is not None]


def corpus_stats(records: Iterable[SampleRecord], hist_bins: int = 70) -> CorpusStats:
    """Per-label / per-type counts and per-axis ADV histograms over [1, 7]."""
    records = list(records)
    label_counts: dict[int, int] = {}
    type_counts: dict[str, int] = {}
    speakers: set[int] = set()
    points = []
    for r in records:
        label_counts[r.label_token] = label_counts.get(r.label_token, 0) + 1
        type_counts[r.dataset_type.value] = type_counts.get(r.dataset_type.value, 0) + 1
        speakers.add(r.speaker_id)
        if r.adv is not None:
            points.append(r.adv.as_tuple())
    edges = np.linspace(1.0, 7.0, hist_bins + 1)
    hists: dict[str, list[int]] = {}
    arr = np.array(points) if points else np.empty((0, 3))
    for ci, c in enumerate("adv"):
        h, _ = np.histogram(arr[:, ci], bins=edges) if arr.size else (np.zeros(hist_bins, int), edges)
        hists[c] = [int(v) for v in h]
    return CorpusStats(
        total=len(records),
        label_counts=label_counts,
        dataset_type_counts=type_counts,
        speaker_count=len(speakers),
        adv_histograms=hists,
        adv_bin_edges=[float(e) for e in edges],
    )


def iter_manifest(path: str | Path) -> Iterator[SampleManifestRow]:
    rows, _ = read_manifest(path)
    yield from rows
