"""Boolean gate extraction from spike activity.

A spike is logical True. Spikes closer together than the simultaneity window
(3000 s by default) count as one event; a stimulation trial responds True when
an event lands inside the response window after its onset. The response bits
across the input pairs 01, 10, 11 pick one of eight two-input gates. A second
route binarizes period vectors against a fixed threshold and evaluates n-ary
logic over the resulting bit vectors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    InvalidParams,
    LengthMismatch,
    MissingInputPair,
    TooFewInputs,
    UnknownInputLabel,
)
from .model import GateClass, SpikeTrain

#: Spikes closer than this (seconds) are treated as simultaneous; it doubles
#: as the response window after a stimulation onset.
SIMULTANEITY_WINDOW = 3000.0

#: Period binarization cutoff, seconds.
PERIOD_THRESHOLD = 3423.0

#: (s01, s10, s11) -> gate, covering all eight triples.
_GATE_BY_BITS = {
    (True, True, True): GateClass.OR,
    (True, False, True): GateClass.SELECT_Y,
    (True, True, False): GateClass.XOR,
    (False, True, True): GateClass.SELECT_X,
    (True, False, False): GateClass.NOTX_AND_Y,
    (False, True, False): GateClass.X_AND_NOTY,
    (False, False, True): GateClass.AND,
    (False, False, False): GateClass.CONST_FALSE,
}

GATE_EXPRESSIONS = {
    GateClass.OR: "x+y",
    GateClass.SELECT_Y: "y",
    GateClass.XOR: "x⊕y",
    GateClass.SELECT_X: "x",
    GateClass.NOTX_AND_Y: "x̄y",
    GateClass.X_AND_NOTY: "xȳ",
    GateClass.AND: "xy",
    GateClass.CONST_FALSE: "0",
}

INPUT_PAIRS = ("01", "10", "11")


@dataclass(frozen=True)
class StimulusTrial:
    """One stimulation onset and the logical input it presented."""

    onset: float
    input_label: str


@dataclass(frozen=True)
class GateReport:
    """Response bits per input pair plus the classified gate."""

    s01: bool
    s10: bool
    s11: bool
    gate: GateClass
    expression: str

    def __post_init__(self):
        expected = classify_gate(self.s01, self.s10, self.s11)
        if self.gate is not expected or self.expression != GATE_EXPRESSIONS[expected]:
            raise InvalidParams(
                f"gate/expression inconsistent with bits "
                f"({int(self.s01)},{int(self.s10)},{int(self.s11)})"
            )

    @classmethod
    def from_bits(cls, s01: bool, s10: bool, s11: bool) -> "GateReport":
        gate = classify_gate(s01, s10, s11)
        return cls(bool(s01), bool(s10), bool(s11), gate, GATE_EXPRESSIONS[gate])

    def to_json(self) -> str:
        """Fixed-field-order JSON document (golden-test stable)."""
        return json.dumps(
            {
                "s01": self.s01,
                "s10": self.s10,
                "s11": self.s11,
                "gate": self.gate.value,
                "expression": self.expression,
            },
            ensure_ascii=False,
        )


def classify_gate(s01: bool, s10: bool, s11: bool) -> GateClass:
    """Map the (01, 10, 11) response bits onto one of the eight gates."""
    return _GATE_BY_BITS[(bool(s01), bool(s10), bool(s11))]


def group_simultaneous(train: SpikeTrain, window: float = SIMULTANEITY_WINDOW) -> np.ndarray:
    """Collapse spikes within ``window`` of a group's first spike into one event.

    Greedy left-to-right: a spike joins the current group iff its gap to the
    group's FIRST spike is < window, so emitted event times (each group's
    first spike) are always >= window apart.
    """
    if not (math.isfinite(window) and window > 0):
        raise InvalidParams(f"window must be > 0, got {window!r}")
    events = []
    anchor = None
    for t in train.times:
        if anchor is None or t - anchor >= window:
            anchor = float(t)
            events.append(anchor)
    return np.asarray(events, dtype=np.float64)


def response_bit(
    events: Sequence[float], trial: StimulusTrial, window: float = SIMULTANEITY_WINDOW
) -> bool:
    """True iff some event lands in [onset, onset+window)."""
    events = np.asarray(events, dtype=np.float64)
    return bool(np.any((events >= trial.onset) & (events < trial.onset + window)))


def mine_gate(
    train: SpikeTrain,
    trials: Iterable[StimulusTrial],
    window: float = SIMULTANEITY_WINDOW,
) -> GateReport:
    """Classify the gate realized by a spike train under 01/10/11 stimulation.

    Each input pair's bit is the OR over that pair's trials. Every pair needs
    at least one trial.
    """
    trials = list(trials)
    for trial in trials:
        if trial.input_label not in INPUT_PAIRS:
            raise UnknownInputLabel(
                f"input label {trial.input_label!r} not in {INPUT_PAIRS}"
            )
    events = group_simultaneous(train, window)
    bits = {}
    for pair in INPUT_PAIRS:
        pair_trials = [t for t in trials if t.input_label == pair]
        if not pair_trials:
            raise MissingInputPair(f"no trials for input pair ({pair})")
        bits[pair] = any(response_bit(events, t, window) for t in pair_trials)
    return GateReport.from_bits(bits["01"], bits["10"], bits["11"])


def binarize_periods(
    periods,
    threshold: float = PERIOD_THRESHOLD,
    convention: str = "below_is_1",
) -> np.ndarray:
    """Threshold a period vector into bits.

    below_is_1 (default): 1 iff period < threshold (short periods = brisk
    spiking = logical True). above_is_1 flips the reading. The comparison is
    strict either way, so a period equal to the threshold maps to 0.
    """
    if not (math.isfinite(threshold) and threshold > 0):
        raise InvalidParams(f"threshold must be > 0, got {threshold!r}")
    values = np.asarray(periods, dtype=np.float64)
    if convention == "below_is_1":
        bits = values < threshold
    elif convention == "above_is_1":
        bits = values > threshold
    else:
        raise InvalidParams(
            f"convention must be 'below_is_1' or 'above_is_1', got {convention!r}"
        )
    return bits.astype(np.int64)


def eval_logic(inputs: Sequence) -> Mapping[str, np.ndarray]:
    """Elementwise n-ary logic over k >= 2 equal-length bit vectors.

    Returns a dict (fixed key order) with AND (all), OR (any), XOR (odd
    parity), NAND, NOR, XNOR, then NOT_in1..NOT_ink.
    """
    if len(inputs) < 2:
        raise TooFewInputs(f"need at least 2 input vectors, got {len(inputs)}")
    vectors = []
    length = None
    for i, vec in enumerate(inputs, start=1):
        arr = np.asarray(vec)
        if length is None:
            length = arr.size
        elif arr.size != length:
            raise LengthMismatch(
                f"input {i} has length {arr.size}, expected {length}"
            )
        if not np.all((arr == 0) | (arr == 1)):
            raise InvalidParams(f"input {i} contains values other than 0/1")
        vectors.append(arr.astype(bool))

    stack = np.vstack(vectors) if length else np.zeros((len(vectors), 0), dtype=bool)
    conj = np.logical_and.reduce(stack, axis=0)
    disj = np.logical_or.reduce(stack, axis=0)
    parity = np.logical_xor.reduce(stack, axis=0)
    table = {
        "AND": conj,
        "OR": disj,
        "XOR": parity,
        "NAND": ~conj,
        "NOR": ~disj,
        "XNOR": ~parity,
    }
    for i, vec in enumerate(vectors, start=1):
        table[f"NOT_in{i}"] = ~vec
    return {name: bits.astype(np.int64) for name, bits in table.items()}
