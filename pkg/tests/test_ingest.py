import json

import pytest

from emoquant.adv import DatasetType, LabelVocabulary
from emoquant.ingest import (
    CleanPolicy,
    RecordError,
    SampleManifestRow,
    build_records,
    clean_manifest,
    corpus_stats,
    read_manifest,
)


def row(id, speaker="spk1", duration=5.0, dtype=DatasetType.S_L, adv=None, label="Happy",
        text=(1, 2, 3), flagged=False):
    return SampleManifestRow(
        id=id, dataset="toy", dataset_type=dtype, text_token_ids=list(text),
        speaker=speaker, raw_label=label, raw_adv=adv, duration_s=duration, flagged=flagged,
    )


class TestCleanManifest:
    def test_long_duration_rejected(self):
        kept, rej = clean_manifest([row("r1", duration=31.0)] + [row(f"k{i}") for i in range(4)])
        assert {r.row_id: r.reason for r in rej} == {"r1": "DURATION"}
        assert len(kept) == 4

    def test_duration_exactly_30_kept(self):
        kept, rej = clean_manifest([row(f"k{i}", duration=30.0) for i in range(4)])
        assert not rej and len(kept) == 4

    def test_sparse_speaker_rejected(self):
        rows = [row(f"s{i}", speaker="rare") for i in range(3)]
        rows += [row(f"k{i}", speaker="common") for i in range(5)]
        kept, rej = clean_manifest(rows)
        assert sum(1 for r in rej if r.reason == "SPARSE_SPEAKER") == 3
        assert all(r.speaker == "common" for r in kept)

    def test_duration_drop_then_sparse_fixed_point(self):
        # speaker has 5 utterances, one 31 s: the long one drops, 4 remain and are kept
        rows = [row("long", speaker="edge", duration=31.0)]
        rows += [row(f"e{i}", speaker="edge") for i in range(4)]
        kept, rej = clean_manifest(rows)
        assert [r.reason for r in rej] == ["DURATION"]
        assert len(kept) == 4

    def test_fixed_point_cascade(self):
        # dropping the long utterance pushes the speaker below 4 -> all drop
        rows = [row("long", speaker="edge", duration=31.0)]
        rows += [row(f"e{i}", speaker="edge") for i in range(3)]
        kept, rej = clean_manifest(rows)
        assert len(kept) == 0
        reasons = sorted(r.reason for r in rej)
        assert reasons == ["DURATION"] + ["SPARSE_SPEAKER"] * 3

    def test_unknown_speaker_and_empty_text(self):
        rows = [row("u1", speaker="Unknown"), row("t1", text=())]
        rows += [row(f"k{i}") for i in range(4)]
        _, rej = clean_manifest(rows)
        assert {r.row_id: r.reason for r in rej} == {
            "u1": "UNKNOWN_SPEAKER",
            "t1": "MISSING_TRANSCRIPTION",
        }

    def test_upstream_flag(self):
        rows = [row("f1", flagged=True)] + [row(f"k{i}") for i in range(4)]
        _, rej = clean_manifest(rows)
        assert rej[0].reason == "UPSTREAM_FLAG"

    def test_idempotent(self):
        rows = [row(f"k{i}") for i in range(6)] + [row("bad", duration=40.0)]
        kept, _ = clean_manifest(rows)
        kept2, rej2 = clean_manifest(kept)
        assert kept2 == kept and rej2 == []

    def test_counts_partition(self):
        rows = [row(f"k{i}") for i in range(5)] + [row("bad", duration=40.0), row("t", text=())]
        kept, rej = clean_manifest(rows)
        assert len(kept) + len(rej) == len(rows)


class TestBuildRecords:
    def test_adv_on_label_only_row_errors(self):
        with pytest.raises(RecordError, match="e1"):
            build_records([row("e1", dtype=DatasetType.E_L, adv=(2, 2, 2))],
                          LabelVocabulary.default())

    def test_missing_adv_on_al_row_errors(self):
        with pytest.raises(RecordError, match="s1"):
            build_records([row("s1", dtype=DatasetType.S_AL)], LabelVocabulary.default())

    def test_normalization_applied(self):
        recs = build_records(
            [row("s1", dtype=DatasetType.S_AL, adv=(0.0, 5.0, 10.0))],
            LabelVocabulary.default(),
            axis_ranges=((0, 10), (0, 10), (0, 10)),
        )
        assert recs[0].adv.as_tuple() == (1.0, 4.0, 7.0)

    def test_dense_speaker_ids_first_seen(self):
        recs = build_records(
            [row("a", speaker="x"), row("b", speaker="y"), row("c", speaker="x")],
            LabelVocabulary.default(),
        )
        assert [r.speaker_id for r in recs] == [0, 1, 0]

    def test_deterministic_given_row_order(self):
        rows = [row("a", speaker="x"), row("b", speaker="y")]
        r1 = build_records(rows, LabelVocabulary.default())
        r2 = build_records(rows, LabelVocabulary.default())
        assert r1 == r2


class TestCorpusStats:
    def test_empty(self):
        stats = corpus_stats([])
        assert stats.total == 0
        assert all(sum(h) == 0 for h in stats.adv_histograms.values())

    def test_label_counts(self):
        recs = build_records(
            [row("a", label="Happy"), row("b", label="Amused"), row("c", label="Angry")],
            LabelVocabulary.default(),
        )
        stats = corpus_stats(recs)
        assert stats.label_counts == {9: 2, 2: 1}
        assert stats.total == 3

    def test_histograms_sum_to_adv_samples(self):
        rows = [row(f"s{i}", dtype=DatasetType.S_AL, adv=(3.0 + 0.1 * i, 4.0, 5.0))
                for i in range(10)]
        recs = build_records(rows, LabelVocabulary.default())
        stats = corpus_stats(recs)
        assert all(sum(h) == 10 for h in stats.adv_histograms.values())
        assert len(stats.adv_histograms["a"]) == 70


class TestManifestIO:
    def test_round_trip_and_malformed_logged(self, tmp_path):
        path = tmp_path / "manifest.jsonl"
        good = {
            "id": "u1", "dataset": "toy", "dataset_type": "S_AL", "speaker": "spk",
            "label": "Happy", "adv_a": 3.0, "adv_d": 4.0, "adv_v": 5.0,
            "duration_s": 2.5, "text_token_ids": [5, 6],
        }
        path.write_text(json.dumps(good) + "\n" + "{not json}\n", encoding="utf-8")
        rows, rej = read_manifest(path)
        assert len(rows) == 1 and rows[0].raw_adv == (3.0, 4.0, 5.0)
        assert len(rej) == 1 and rej[0].reason == "MALFORMED"

    def test_absent_adv_fields_mean_none(self, tmp_path):
        path = tmp_path / "m.jsonl"
        obj = {"id": "u2", "dataset_type": "E_L", "speaker": "s", "label": "Angry",
               "duration_s": 1.0, "text_token_ids": [1]}
        path.write_text(json.dumps(obj) + "\n", encoding="utf-8")
        rows, _ = read_manifest(path)
        assert rows[0].raw_adv is None
