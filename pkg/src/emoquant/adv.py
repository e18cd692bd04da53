"""Core ADV-space types: normalized emotion triples, label vocabulary, dataset taxonomy."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable


class AdvRangeError(ValueError):
    """Raised for a degenerate (max == min) axis range."""


class UnknownLabelError(KeyError):
    """Raised when a raw label string has no vocabulary entry."""

    def __init__(self, raw: str):
        super().__init__(raw)
        self.raw = raw

    def __str__(self) -> str:
        return f"label {self.raw!r} is not in the vocabulary"


class DatasetType(str, Enum):
    """Spontaneous/elicited corpora, with or without dimensional annotations."""

    S_AL = "S_AL"  # spontaneous, label + ADV
    S_L = "S_L"    # spontaneous, label only
    E_AL = "E_AL"  # elicited, label + ADV
    E_L = "E_L"    # elicited, label only

    @property
    def has_adv(self) -> bool:
        return self in (DatasetType.S_AL, DatasetType.E_AL)


@dataclass(frozen=True)
class AdvPoint:
    """A continuous (arousal, dominance, valence) triple on the normalized [1,7] scale."""

    a: float
    d: float
    v: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a, self.d, self.v)


@dataclass(frozen=True)
class AdvTokenTriple:
    """Quantized ADV tokens, each in [1, m]."""

    x_a: int
    x_d: int
    x_v: int
    m: int

    def __post_init__(self) -> None:
        for name in ("x_a", "x_d", "x_v"):
            t = getattr(self, name)
            if not 1 <= t <= self.m:
                raise ValueError(f"{name}={t} outside [1, {self.m}]")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.x_a, self.x_d, self.x_v)


# Default label grouping: semantically similar raw labels share one token;
# token 0 is reserved for Unknown.
DEFAULT_LABEL_GROUPS: dict[int, tuple[str, ...]] = {
    0: ("Unknown",),
    1: ("Sad", "Frustrated", "Hurt"),
    2: ("Angry",),
    3: ("Confused", "Worried"),
    4: ("Disgust", "Contempt"),
    5: ("Fearful",),
    6: ("Sleepiness", "Bored"),
    7: ("Neutral", "Narration"),
    8: ("Surprise", "Excited"),
    9: ("Happy", "Amused", "Laughing"),
}


def _norm_key(raw: str) -> str:
    return raw.strip().casefold()


@dataclass
class LabelVocabulary:
    """Total mapping from raw label strings to group tokens in [0, n].

    Matching is case-insensitive and whitespace-trimmed. Token 0 is always
    the Unknown class and does not count toward n.
    """

    n: int
    entries: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        normalized: dict[str, int] = {}
        for raw, tok in self.entries.items():
            key = _norm_key(raw)
            if key in normalized and normalized[key] != tok:
                raise ValueError(f"label {raw!r} mapped to both {normalized[key]} and {tok}")
            if not 0 <= tok <= self.n:
                raise ValueError(f"token {tok} for {raw!r} outside [0, {self.n}]")
            normalized[key] = tok
        self.entries = normalized

    @classmethod
    def default(cls) -> "LabelVocabulary":
        entries = {raw: tok for tok, names in DEFAULT_LABEL_GROUPS.items() for raw in names}
        return cls(n=max(DEFAULT_LABEL_GROUPS), entries=entries)

    def lookup(self, raw: str) -> int:
        key = _norm_key(raw)
        if key not in self.entries:
            raise UnknownLabelError(raw)
        return self.entries[key]

    def add(self, raw: str, token: int) -> None:
        """Extend the vocabulary with a synonym for an existing token class."""
        if not 0 <= token <= self.n:
            raise ValueError(f"token {token} outside [0, {self.n}]")
        self.entries[_norm_key(raw)] = token

    # -- text serialization: header declaring n, then one `raw -> token` per line --

    def save(self, path: str | Path) -> None:
        lines = [f"n = {self.n}"]
        for raw in sorted(self.entries):
            lines.append(f"{raw} -> {self.entries[raw]}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "LabelVocabulary":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        header = lines[0].replace(" ", "")
        if not header.startswith("n="):
            raise ValueError(f"vocabulary file missing 'n =' header, got {lines[0]!r}")
        n = int(header[2:])
        entries: dict[str, int] = {}
        for line in lines[1:]:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            raw, _, tok = line.rpartition("->")
            entries[raw.strip()] = int(tok.strip())
        return cls(n=n, entries=entries)


def unify_label(raw: str, vocab: LabelVocabulary) -> int:
    """Map a raw label string to its group token.

    Unmapped strings raise; callers that want an explicit Unknown fallback
    must route to token 0 themselves.
    """
    return vocab.lookup(raw)


@dataclass
class ClampCounter:
    """Counts out-of-range raw ADV values clamped during normalization."""

    clamped: int = 0


def normalize_adv(
    raw: Iterable[float],
    axis_ranges: Iterable[tuple[float, float]],
    clamp_counter: ClampCounter | None = None,
) -> AdvPoint:
    """Affine-map a raw (a, d, v) triple onto the [1,7] scale per axis.

    Each coordinate becomes 1 + 6*(x - min)/(max - min). Values outside the
    configured range are clamped (annotation files in the wild overshoot
    slightly); clamps are tallied on `clamp_counter` when given.
    """
    raw = tuple(raw)
    ranges = tuple(axis_ranges)
    if len(raw) != 3 or len(ranges) != 3:
        raise ValueError("expected a 3-value triple and 3 axis ranges")
    out = []
    for axis, (x, (lo, hi)) in zip("adv", zip(raw, ranges)):
        if hi <= lo:
            raise AdvRangeError(f"degenerate range ({lo}, {hi}) on axis {axis!r}")
        if x < lo or x > hi:
            if clamp_counter is not None:
                clamp_counter.clamped += 1
            x = min(max(x, lo), hi)
        out.append(1.0 + 6.0 * (x - lo) / (hi - lo))
    return AdvPoint(*out)
