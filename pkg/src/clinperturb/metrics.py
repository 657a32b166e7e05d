"""Scoring and statistical functions: accuracy, micro F1, entity-level F1
over decoded BIO spans, Pearson correlation, paired t-test, Fleiss' kappa
with Landis-Koch banding, and majority voting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence


class MetricError(ValueError):
    pass


class UndefinedMetric(MetricError):
    """The metric has no defined value for this input (reported, never 0)."""


def _check_paired(pred: Sequence, gold: Sequence) -> None:
    if len(pred) != len(gold):
        raise MetricError(f"length mismatch: {len(pred)} vs {len(gold)}")
    if not gold:
        raise MetricError("empty input")


def accuracy(pred: Sequence, gold: Sequence) -> float:
    _check_paired(pred, gold)
    return sum(1 for p, g in zip(pred, gold) if p == g) / len(gold)


def micro_f1(pred: Sequence, gold: Sequence,
             classes: Optional[Sequence] = None) -> float:
    _check_paired(pred, gold)
    if classes is None:
        classes = sorted({*pred, *gold}, key=str)
    tp = fp = fn = 0
    for c in classes:
        tp += sum(1 for p, g in zip(pred, gold) if p == c and g == c)
        fp += sum(1 for p, g in zip(pred, gold) if p == c and g != c)
        fn += sum(1 for p, g in zip(pred, gold) if p != c and g == c)
    denom = 2 * tp + fp + fn
    if denom == 0:
        raise UndefinedMetric("micro F1 undefined: no positive decisions")
    return 2 * tp / denom


def decode_bio(labels: Sequence[str]) -> set[tuple[int, int, str]]:
    """Decode a BIO sequence to (start, end, type) spans, end exclusive."""
    spans = set()
    start = None
    etype = None
    for i, lab in enumerate(labels):
        if lab.startswith("B-"):
            if start is not None:
                spans.add((start, i, etype))
            start, etype = i, lab[2:]
        elif lab.startswith("I-"):
            if start is None or lab[2:] != etype:
                raise MetricError(f"malformed BIO at position {i}: {lab!r}")
        else:
            if lab != "O":
                raise MetricError(f"malformed BIO tag {lab!r}")
            if start is not None:
                spans.add((start, i, etype))
                start = None
    if start is not None:
        spans.add((start, len(labels), etype))
    return spans


def entity_f1(pred_bio: Sequence[Sequence[str]],
              gold_bio: Sequence[Sequence[str]]) -> float:
    """Macro-average over entity types of exact span+type F1."""
    _check_paired(pred_bio, gold_bio)
    tp: dict[str, int] = {}
    fp: dict[str, int] = {}
    fn: dict[str, int] = {}
    for pred, gold in zip(pred_bio, gold_bio):
        if len(pred) != len(gold):
            raise MetricError("BIO sequences of one sample differ in length")
        p_spans = decode_bio(pred)
        g_spans = decode_bio(gold)
        for span in p_spans & g_spans:
            tp[span[2]] = tp.get(span[2], 0) + 1
        for span in p_spans - g_spans:
            fp[span[2]] = fp.get(span[2], 0) + 1
        for span in g_spans - p_spans:
            fn[span[2]] = fn.get(span[2], 0) + 1
    types = sorted(set(tp) | set(fp) | set(fn))
    if not types:
        raise UndefinedMetric("entity F1 undefined: no entities in gold or pred")
    scores = []
    for t in types:
        denom = 2 * tp.get(t, 0) + fp.get(t, 0) + fn.get(t, 0)
        scores.append(2 * tp.get(t, 0) / denom if denom else 0.0)
    return sum(scores) / len(scores)


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    _check_paired(x, y)
    n = len(x)
    if n < 2:
        raise MetricError("pearson needs at least 2 points")
    mx = sum(x) / n
    my = sum(y) / n
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    sxx = sum(v * v for v in dx)
    syy = sum(v * v for v in dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedMetric("pearson undefined for constant input")
    r = sum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


# ---------------------------------------------------------------------------
# Paired t-test

@dataclass(frozen=True)
class TTestResult:
    n: int
    mean_diff: float
    sd_diff: float
    t: float
    df: int
    p_two_tailed: float


def _betacf(a: float, b: float, x: float, tol: float = 1e-9,
            max_iter: int = 300) -> float:
    """Continued fraction for the incomplete beta function (Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < tol:
            return h
    raise MetricError("incomplete beta continued fraction did not converge")


def betainc_regularized(a: float, b: float, x: float) -> float:
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log(1.0 - x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_sf_two_tailed(t: float, df: int) -> float:
    """Two-tailed p-value for Student's t."""
    if df < 1:
        raise MetricError("df must be >= 1")
    x = df / (df + t * t)
    return betainc_regularized(df / 2.0, 0.5, x)


def paired_ttest(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    _check_paired(a, b)
    n = len(a)
    if n < 2:
        raise MetricError("paired t-test needs n >= 2")
    diffs = [x - y for x, y in zip(a, b)]
    mean = sum(diffs) / n
    var = sum((d - mean) ** 2 for d in diffs) / (n - 1)
    if var == 0.0:
        raise UndefinedMetric("exact tie: zero-variance differences")
    sd = math.sqrt(var)
    t = mean / (sd / math.sqrt(n))
    p = student_t_sf_two_tailed(t, n - 1)
    return TTestResult(n=n, mean_diff=mean, sd_diff=sd, t=t, df=n - 1,
                       p_two_tailed=p)


# ---------------------------------------------------------------------------
# Agreement

def fleiss_kappa(matrix: Sequence[Sequence[int]]) -> float:
    """Fleiss' kappa for an n_subjects x k_categories count matrix with a
    constant number of raters per subject."""
    if not matrix:
        raise MetricError("empty rating matrix")
    n = len(matrix)
    k = len(matrix[0])
    if any(len(row) != k for row in matrix):
        raise MetricError("ragged rating matrix")
    r = sum(matrix[0])
    if r < 2:
        raise MetricError("need at least 2 raters per subject")
    if any(sum(row) != r for row in matrix):
        raise MetricError("rows must all sum to the same rater count")
    total = n * r
    p_j = [sum(row[j] for row in matrix) / total for j in range(k)]
    p_bar = sum(
        (sum(c * c for c in row) - r) / (r * (r - 1)) for row in matrix
    ) / n
    p_e = sum(p * p for p in p_j)
    if p_e >= 1.0:
        raise UndefinedMetric("kappa undefined: all ratings in one category")
    return (p_bar - p_e) / (1.0 - p_e)


_LANDIS_KOCH = [
    (0.00, "slight"),
    (0.21, "fair"),
    (0.41, "moderate"),
    (0.61, "substantial"),
    (0.81, "almost perfect"),
]


def landis_koch_band(kappa: float) -> str:
    if not (-1.0 <= kappa <= 1.0):
        raise MetricError(f"kappa out of range: {kappa}")
    if kappa < 0.0:
        return "poor"
    band = "slight"
    for lower, name in _LANDIS_KOCH:
        if kappa >= lower:
            band = name
    return band


def majority_vote(counts: dict[str, int]) -> tuple[Optional[str], bool]:
    """Strict-plurality verdict over category counts; ties return (None, True)."""
    if not counts or sum(counts.values()) < 1:
        raise MetricError("majority vote needs at least one rating")
    top = max(counts.values())
    winners = [c for c, v in counts.items() if v == top]
    if len(winners) > 1:
        return None, True
    return winners[0], False


def display_score(value: float) -> str:
    """Scores are reported x100 at 2 decimals (half-up)."""
    scaled = value * 100.0
    return f"{math.floor(scaled * 100 + 0.5) / 100:.2f}"


def round_half_up(value: float, digits: int = 2) -> float:
    factor = 10 ** digits
    return math.floor(abs(value) * factor + 0.5) / factor * (1 if value >= 0 else -1)
