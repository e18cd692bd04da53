import itertools

import pytest

from emoquant.adv import AdvPoint, DatasetType
from emoquant.ingest import SampleRecord
from emoquant.quantizer import fit_linear_quantizer
from emoquant.sequencing import (
    InferenceMode,
    SequenceError,
    SpecialTokens,
    assemble,
    inference_mode_sequence,
    loss_weight_vector,
    mask_label,
)

TOKENS = SpecialTokens()
MODEL = fit_linear_quantizer(None, 14)


def record(dtype, label=2, adv=None):
    return SampleRecord(
        id="r", dataset_type=dtype, text_token_ids=[1100, 1101],
        speaker_id=3, label_token=label, adv=adv,
    )


class TestSpecialTokens:
    def test_duplicate_ids_rejected(self):
        with pytest.raises(SequenceError):
            SpecialTokens(x_sos=9000, x_eos=9000)

    def test_collision_with_label_range_rejected(self):
        with pytest.raises(SequenceError):
            SpecialTokens(x_ign=5)

    def test_semantic_range_check(self):
        with pytest.raises(SequenceError):
            TOKENS.check_semantic([42])


class TestMaskingTruthTable:
    def test_exhaustive(self):
        # masked iff type is E_L or label is Unknown: 5 distinct cells of 8
        expected = {
            (DatasetType.S_AL, 0): True, (DatasetType.S_AL, 2): False,
            (DatasetType.S_L, 0): True, (DatasetType.S_L, 2): False,
            (DatasetType.E_AL, 0): True, (DatasetType.E_AL, 2): False,
            (DatasetType.E_L, 0): True, (DatasetType.E_L, 2): True,
        }
        for (dtype, label), want in expected.items():
            assert mask_label(dtype, label) is want
        assert sum(expected.values()) == 5


class TestLossWeightVector:
    def test_masked(self):
        assert loss_weight_vector(True, 3) == [0.0, 1.0, 1.0, 1.0, 1.0]

    def test_unmasked(self):
        assert loss_weight_vector(False, 3) == [5.0, 1.0, 1.0, 1.0, 1.0]

    def test_length_is_l_plus_two(self):
        for L in range(1, 10):
            assert len(loss_weight_vector(True, L)) == L + 2

    def test_l_zero_rejected(self):
        with pytest.raises(SequenceError):
            loss_weight_vector(False, 0)


class TestAssemble:
    def test_el_record_masked(self):
        pair = assemble(record(DatasetType.E_L), [2000, 2001], TOKENS, MODEL)
        label_pos = len(pair.output_ids) - 2 - 2  # before sem tokens and eos
        assert pair.output_ids[label_pos] == TOKENS.x_ign
        assert pair.loss_weights[0] == 0.0

    def test_sl_record_kept(self):
        pair = assemble(record(DatasetType.S_L), [2000, 2001, 2002], TOKENS, MODEL)
        label_pos = len(pair.output_ids) - 3 - 2
        assert pair.output_ids[label_pos] == 2
        assert pair.loss_weights[0] == 5.0

    def test_unknown_label_always_masked(self):
        for dtype in DatasetType:
            adv = AdvPoint(4, 4, 4) if dtype.has_adv else None
            pair = assemble(record(dtype, label=0, adv=adv), [2000], TOKENS, MODEL)
            assert pair.loss_weights[0] == 0.0

    def test_adv_slots_quantized_for_al(self):
        pair = assemble(
            record(DatasetType.S_AL, adv=AdvPoint(1.0, 4.0, 7.0)), [2000], TOKENS, MODEL
        )
        # slots follow [sos, text x2, attr, spk]
        assert pair.input_ids[5:8] == [1, 7, 14]

    def test_adv_slots_ignored_for_label_only(self):
        pair = assemble(record(DatasetType.S_L), [2000], TOKENS, MODEL)
        assert pair.input_ids[5:8] == [TOKENS.x_ign] * 3

    def test_output_is_shifted_input(self):
        pair = assemble(record(DatasetType.S_L), [2000, 2001], TOKENS, MODEL)
        assert len(pair.input_ids) == len(pair.output_ids)
        assert pair.output_ids[-1] == TOKENS.x_eos
        # unmasked region of output matches input shifted left by one
        n_sem = 2
        start = len(pair.input_ids) - n_sem - 2
        assert pair.output_ids[start:-1] == pair.input_ids[start + 1:]

    def test_special_tokens_never_inside_semantic_span(self):
        pair = assemble(record(DatasetType.S_L), [2000, 2001, 2002], TOKENS, MODEL)
        sem_span = pair.input_ids[-3:]
        specials = {TOKENS.x_sos, TOKENS.x_eos, TOKENS.x_attr, TOKENS.x_gen, TOKENS.x_ign}
        assert not specials & set(sem_span)

    def test_semantic_collision_rejected(self):
        with pytest.raises(SequenceError):
            assemble(record(DatasetType.S_L), [TOKENS.x_ign], TOKENS, MODEL)

    def test_empty_semantics_rejected(self):
        with pytest.raises(SequenceError):
            assemble(record(DatasetType.S_L), [], TOKENS, MODEL)

    def test_injective_up_to_shared_wire_formats(self):
        # S_AL and E_AL share one sequence format, and S_L/E_L coincide when
        # the Unknown label masks the output; all other cells are distinct
        seen = set()
        for dtype, label in itertools.product(DatasetType, (0, 1, 2)):
            adv = AdvPoint(2, 3, 4) if dtype.has_adv else None
            pair = assemble(record(dtype, label=label, adv=adv), [2000], TOKENS, MODEL)
            seen.add((tuple(pair.input_ids), tuple(pair.output_ids), tuple(pair.loss_weights)))
        assert len(seen) == 8


class TestInferenceModes:
    def test_label_mode_fills_ign_and_label(self):
        prefix = inference_mode_sequence(
            InferenceMode.LABEL_CONTROLLED, [1100], TOKENS, speaker_token=3, label_token=2
        )
        assert prefix[-5:] == [TOKENS.x_ign, TOKENS.x_ign, TOKENS.x_ign, TOKENS.x_gen, 2]

    def test_adv_mode_sets_tokens(self):
        prefix = inference_mode_sequence(
            "adv_controlled", [1100], TOKENS, speaker_token=3, adv_tokens=(14, 7, 7)
        )
        assert prefix[-5:] == [14, 7, 7, TOKENS.x_gen, TOKENS.x_predict]

    def test_end_to_end_same_shape_as_adv(self):
        p2 = inference_mode_sequence(
            "adv_controlled", [1100], TOKENS, speaker_token=3, adv_tokens=(5, 5, 5)
        )
        p3 = inference_mode_sequence(
            "end_to_end", [1100], TOKENS, speaker_token=3, adv_tokens=(5, 5, 5)
        )
        assert len(p2) == len(p3) and p2 == p3

    def test_mode_control_mismatch(self):
        with pytest.raises(SequenceError):
            inference_mode_sequence("label_controlled", [1100], TOKENS, speaker_token=3)
        with pytest.raises(SequenceError):
            inference_mode_sequence(
                "adv_controlled", [1100], TOKENS, speaker_token=3, label_token=2
            )
