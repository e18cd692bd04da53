"""Non-neural toolkit for ADV-space emotional TTS data pipelines:
nonlinear quantization, semi-supervised sequence construction, training-loss
math, coverage analytics, and rank-based evaluation."""

from .adv import (
    AdvPoint,
    AdvTokenTriple,
    DatasetType,
    LabelVocabulary,
    normalize_adv,
    unify_label,
)
from .flow import FlowConfig, cfm_loss, cosine_timestep, ot_interpolant, ot_target_field, sample_source
from .losses import AdvLossConfig, SmoothingConfig, adv_predictor_loss, emotion_gate, smoothed_sequence_loss
from .metrics import ConfusionMatrix, Ranking, kendalls_w, macro_pr, pearson_matrix, spearman_src
from .quantizer import (
    CoverageReport,
    QuantizerConfig,
    QuantizerModel,
    bin_center,
    coverage,
    fit_linear_quantizer,
    fit_quantizer,
    quantize,
    select_cluster_count,
    silhouette_score,
)
from .sequencing import SequencePair, SpecialTokens, assemble, loss_weight_vector, mask_label

__all__ = [
    "AdvPoint",
    "AdvTokenTriple",
    "DatasetType",
    "LabelVocabulary",
    "normalize_adv",
    "unify_label",
    "QuantizerConfig",
    "QuantizerModel",
    "CoverageReport",
    "select_cluster_count",
    "silhouette_score",
    "fit_quantizer",
    "fit_linear_quantizer",
    "quantize",
    "bin_center",
    "coverage",
    "SpecialTokens",
    "SequencePair",
    "assemble",
    "loss_weight_vector",
    "mask_label",
    "SmoothingConfig",
    "AdvLossConfig",
    "smoothed_sequence_loss",
    "adv_predictor_loss",
    "emotion_gate",
    "FlowConfig",
    "ot_interpolant",
    "ot_target_field",
    "cfm_loss",
    "cosine_timestep",
    "sample_source",
    "Ranking",
    "ConfusionMatrix",
    "spearman_src",
    "kendalls_w",
    "macro_pr",
    "pearson_matrix",
]
