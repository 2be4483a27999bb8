"""Stage scoring against ground truth and pipeline timing.

Region-level matching uses bounding-box overlap over union at 0.5 with
greedy one-to-one assignment; pixel-level scoring is a straight confusion
count with foreground as the positive class; character accuracy compares
pre-aligned label sequences under a class scheme.  Timing instruments each
pipeline stage with wall time and the tracemalloc peak above the stage's
starting allocation.
"""

from dataclasses import dataclass, field

import numpy as np


class MetricUndefinedError(ValueError):
    """A metric denominator is zero."""


@dataclass
class EvalCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __add__(self, other):
        return EvalCounts(
            self.tp + other.tp,
            self.fp + other.fp,
            self.tn + other.tn,
            self.fn + other.fn,
        )


@dataclass
class Metrics:
    recall: float     # percent
    precision: float  # percent
    f_measure: float  # percent


def f_measure(recall, precision):
    """Harmonic mean of recall and precision (both in percent)."""
    if recall + precision == 0:
        raise MetricUndefinedError("recall + precision is zero")
    return 2.0 * recall * precision / (recall + precision)


def metrics_from_counts(counts):
    if counts.tp + counts.fn == 0:
        raise MetricUndefinedError("no positives in ground truth (tp + fn = 0)")
    if counts.tp + counts.fp == 0:
        raise MetricUndefinedError("no predicted positives (tp + fp = 0)")
    recall = 100.0 * counts.tp / (counts.tp + counts.fn)
    precision = 100.0 * counts.tp / (counts.tp + counts.fp)
    return Metrics(recall=recall, precision=precision, f_measure=f_measure(recall, precision))


def overlap_over_union(a, b):
    """Box overlap area divided by union area."""
    ix = max(0, min(a.x2, b.x2) - max(a.x, b.x))
    iy = max(0, min(a.y2, b.y2) - max(a.y, b.y))
    inter = ix * iy
    union = a.w * a.h + b.w * b.h - inter
    return inter / union if union else 0.0


MATCH_THRESHOLD = 0.5


def region_eval(predicted, truth, threshold=MATCH_THRESHOLD):
    """Region-level confusion counts.

    `predicted` and `truth` are Region-like objects with .bbox/.rect and
    .kind.  A predicted TR matches a truth TR at overlap/union >= threshold,
    assigned greedily one-to-one by overlap.  Truth NRs count as TN when no
    predicted TR claims them.
    """
    def box(r):
        return r.bbox if hasattr(r, "bbox") else r.rect

    pred_tr = [box(r) for r in predicted if r.kind == "TR"]
    truth_tr = [box(r) for r in truth if r.kind == "TR"]
    truth_nr = [box(r) for r in truth if r.kind == "NR"]

    pairs = []
    for i, p in enumerate(pred_tr):
        for j, t in enumerate(truth_tr):
            oou = overlap_over_union(p, t)
            if oou >= threshold:
                pairs.append((oou, i, j))
    pairs.sort(key=lambda x: (-x[0], x[1], x[2]))
    used_p, used_t = set(), set()
    tp = 0
    for _, i, j in pairs:
        if i in used_p or j in used_t:
            continue
        used_p.add(i)
        used_t.add(j)
        tp += 1
    fp = len(pred_tr) - tp
    fn = len(truth_tr) - tp
    tn = 0
    for nr in truth_nr:
        claimed = any(
            overlap_over_union(pred_tr[i], nr) >= threshold
            for i in range(len(pred_tr))
            if i not in used_p
        )
        if not claimed:
            tn += 1
    return EvalCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def pixel_eval(predicted, truth):
    """Per-pixel confusion counts; foreground (True) is the positive class."""
    if predicted.shape != truth.shape:
        raise ValueError(
            f"dimension mismatch: {predicted.shape} vs {truth.shape}"
        )
    tp = int(np.count_nonzero(predicted & truth))
    fp = int(np.count_nonzero(predicted & ~truth))
    fn = int(np.count_nonzero(~predicted & truth))
    tn = int(np.count_nonzero(~predicted & ~truth))
    return EvalCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def char_accuracy(predicted, truth, scheme):
    """Percent of aligned positions whose scheme-mapped labels agree."""
    if len(predicted) != len(truth):
        raise ValueError(
            f"length mismatch: {len(predicted)} predicted vs {len(truth)} truth"
        )
    if not truth:
        raise ValueError("empty sequences")
    correct = sum(
        1 for p, t in zip(predicted, truth) if scheme.apply(p) == scheme.apply(t)
    )
    return 100.0 * correct / len(truth)


# ---------------------------------------------------------------------------
# timing

STAGES = ("extraction", "skew", "binarize", "segment", "recognize")


@dataclass
class StageTimings:
    times_ms: dict = field(default_factory=dict)
    peak_bytes: dict = field(default_factory=dict)
    input_bytes: int = 0
    runs: int = 1

    @property
    def total_ms(self):
        return sum(self.times_ms.get(s, 0.0) for s in STAGES)

    @property
    def max_peak_bytes(self):
        return max((self.peak_bytes.get(s, 0) for s in STAGES), default=0)


class StageTimer:
    """Wall time and tracemalloc transient-peak accounting per stage."""

    def __init__(self):
        import tracemalloc

        self._tracemalloc = tracemalloc
        self.timings = StageTimings()
        self._owns_trace = not tracemalloc.is_tracing()
        if self._owns_trace:
            tracemalloc.start()

    def run(self, stage, fn):
        import time

        tm = self._tracemalloc
        tm.reset_peak()
        start_current, _ = tm.get_traced_memory()
        t0 = time.perf_counter()
        result = fn()
        elapsed = (time.perf_counter() - t0) * 1000.0
        _, peak = tm.get_traced_memory()
        self.timings.times_ms[stage] = self.timings.times_ms.get(stage, 0.0) + elapsed
        self.timings.peak_bytes[stage] = max(
            self.timings.peak_bytes.get(stage, 0), max(0, peak - start_current)
        )
        return result

    def close(self):
        if self._owns_trace:
            self._tracemalloc.stop()


def format_report(pairs):
    """Machine-diffable report: one 'key=value' line per metric, given
    order preserved; floats carry two decimals."""
    lines = []
    for key, value in pairs:
        if isinstance(value, float):
            lines.append(f"{key}={value:.2f}")
        else:
            lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def timing_report_pairs(timings):
    pairs = []
    for stage in STAGES:
        pairs.append((f"{stage}_ms", float(timings.times_ms.get(stage, 0.0))))
    pairs.append(("total_ms", float(timings.total_ms)))
    for stage in STAGES:
        pairs.append((f"{stage}_peak_bytes", int(timings.peak_bytes.get(stage, 0))))
    pairs.append(("max_peak_bytes", int(timings.max_peak_bytes)))
    pairs.append(("input_bytes", int(timings.input_bytes)))
    pairs.append(("runs", int(timings.runs)))
    return pairs
