"""Unified input/output token sequences and semi-supervised masking.

Input layout: [sos, text..., attr, spk, adv x3 (or ign x3), gen, lbl, sem...].
The output is the input shifted left by one with everything before the label
prediction position replaced by the ignore token, so teacher-forced input and
output have equal length. The loss region covers [lbl, sem..., eos]: length
L + 2 where L is the semantic-token count.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .adv import DatasetType
from .ingest import SampleRecord
from .quantizer import QuantizerModel, quantize

LABEL_MASK_WEIGHT = 0.0
LABEL_KEEP_WEIGHT = 5.0


class SequenceError(ValueError):
    pass


@dataclass(frozen=True)
class SpecialTokens:
    """Fixed control token ids, disjoint from label, ADV, and semantic ranges."""

    x_sos: int = 9000
    x_eos: int = 9001
    x_attr: int = 9002
    x_gen: int = 9003
    x_ign: int = 9004
    x_predict: int = 9005  # inference-only marker for a label slot the model fills
    label_range: tuple[int, int] = (0, 9)
    adv_range: tuple[int, int] = (1, 14)
    semantic_range: tuple[int, int] = (1000, 8999)

    def __post_init__(self) -> None:
        ids = [self.x_sos, self.x_eos, self.x_attr, self.x_gen, self.x_ign, self.x_predict]
        if len(set(ids)) != len(ids):
            raise SequenceError("special token ids must be pairwise distinct")
        for t in ids:
            for lo, hi in (self.label_range, self.adv_range, self.semantic_range):
                if lo <= t <= hi:
                    raise SequenceError(f"special token id {t} collides with range [{lo}, {hi}]")

    def check_semantic(self, sem_tokens: Sequence[int]) -> None:
        lo, hi = self.semantic_range
        for t in sem_tokens:
            if not lo <= t <= hi:
                raise SequenceError(f"semantic token {t} outside [{lo}, {hi}]")


@dataclass
class SequencePair:
    id: str
    input_ids: list[int]
    output_ids: list[int]
    loss_weights: list[float]

    def __post_init__(self) -> None:
        if len(self.input_ids) != len(self.output_ids):
            raise SequenceError("input/output length mismatch")


def mask_label(dataset_type: DatasetType, label_token: int) -> bool:
    """The output label slot is masked iff the sample is elicited-without-ADV
    or carries the Unknown label."""
    return dataset_type is DatasetType.E_L or label_token == 0


def loss_weight_vector(mask: bool, L: int) -> list[float]:
    """Per-position weights over the loss region [lbl, sem..., eos]."""
    if L < 1:
        raise SequenceError("L must be >= 1")
    first = LABEL_MASK_WEIGHT if mask else LABEL_KEEP_WEIGHT
    return [first] + [1.0] * (L + 1)


def assemble(
    record: SampleRecord,
    sem_tokens: Sequence[int],
    tokens: SpecialTokens,
    quantizer: QuantizerModel,
) -> SequencePair:
    """Build the teacher-forced (input, output, loss-weight) triple for one sample."""
    if not sem_tokens:
        raise SequenceError(f"record {record.id!r}: semantic tokens must be non-empty")
    tokens.check_semantic(sem_tokens)

    if record.adv is not None:
        adv_slots = list(quantize(record.adv, quantizer).as_tuple())
    else:
        adv_slots = [tokens.x_ign] * 3

    sem = list(sem_tokens)
    input_ids = (
        [tokens.x_sos]
        + list(record.text_token_ids)
        + [tokens.x_attr, record.speaker_id]
        + adv_slots
        + [tokens.x_gen, record.label_token]
        + sem
    )

    masked = mask_label(record.dataset_type, record.label_token)
    label_out = tokens.x_ign if masked else record.label_token
    prefix_len = len(input_ids) - len(sem) - 2  # everything before the label prediction slot
    output_ids = [tokens.x_ign] * prefix_len + [label_out] + sem + [tokens.x_eos]
    return SequencePair(
        id=record.id,
        input_ids=input_ids,
        output_ids=output_ids,
        loss_weights=loss_weight_vector(masked, len(sem)),
    )


class InferenceMode(str, Enum):
    LABEL_CONTROLLED = "label_controlled"
    ADV_CONTROLLED = "adv_controlled"
    END_TO_END = "end_to_end"


def inference_mode_sequence(
    mode: InferenceMode | str,
    text_ids: Sequence[int],
    tokens: SpecialTokens,
    speaker_token: int,
    label_token: int | None = None,
    adv_tokens: Sequence[int] | None = None,
) -> list[int]:
    """Input prefix for one of the three generation modes.

    Label control fills the ADV slots with the ignore token and sets the
    label; ADV control (and end-to-end, with caller-supplied pseudo-ADV
    tokens) sets the ADV slots and leaves a predict-here marker in the label
    slot for the model to fill.
    """
    mode = InferenceMode(mode)
    if mode is InferenceMode.LABEL_CONTROLLED:
        if label_token is None or adv_tokens is not None:
            raise SequenceError("label-controlled mode takes a label token and no ADV tokens")
        adv_slots = [tokens.x_ign] * 3
        label_slot = label_token
    else:
        if adv_tokens is None or len(adv_tokens) != 3 or label_token is not None:
            raise SequenceError(f"{mode.value} mode takes 3 ADV tokens and no label token")
        adv_slots = [int(t) for t in adv_tokens]
        label_slot = tokens.x_predict
    return (
        [tokens.x_sos]
        + list(text_ids)
        + [tokens.x_attr, speaker_token]
        + adv_slots
        + [tokens.x_gen, label_slot]
    )
