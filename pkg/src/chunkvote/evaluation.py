"""Token accuracy, chunk precision/recall/F, agreement tables and chi-squared tests."""

from __future__ import annotations

from dataclasses import dataclass

# chi-squared critical values, 1 degree of freedom
CRITICAL_VALUES = ((0.001, 10.828), (0.01, 6.635), (0.05, 3.841))


def token_accuracy(pred, gold) -> float:
    if len(pred) != len(gold):
        raise ValueError(f"length mismatch: {len(pred)} predicted vs {len(gold)} gold tags")
    if not gold:
        raise ValueError("accuracy of an empty sequence is undefined")
    return 100.0 * sum(p == g for p, g in zip(pred, gold)) / len(gold)


def f_beta(precision: float, recall: float, beta: float = 1.0) -> float:
    """F-beta of two percentages; 0 when both are 0."""
    b2 = beta * beta
    denom = b2 * precision + recall
    if denom == 0:
        return 0.0
    return (1 + b2) * precision * recall / denom


@dataclass(frozen=True)
class ChunkScore:
    found_correct: int
    found_total: int
    gold_total: int
    beta: float = 1.0

    @property
    def precision(self) -> float:
        return 100.0 * self.found_correct / self.found_total if self.found_total else 0.0

    @property
    def recall(self) -> float:
        return 100.0 * self.found_correct / self.gold_total if self.gold_total else 0.0

    @property
    def f_beta(self) -> float:
        return f_beta(self.precision, self.recall, self.beta)

    def __add__(self, other: "ChunkScore") -> "ChunkScore":
        return ChunkScore(self.found_correct + other.found_correct,
                          self.found_total + other.found_total,
                          self.gold_total + other.gold_total, self.beta)


def chunk_score(pred_spans, gold_spans, beta: float = 1.0) -> ChunkScore:
    """Exact-match chunk scoring; both arguments hold one span collection per sentence."""
    if len(pred_spans) != len(gold_spans):
        raise ValueError(f"{len(pred_spans)} predicted vs {len(gold_spans)} gold sentences")
    correct = found = total = 0
    for pred, gold in zip(pred_spans, gold_spans):
        pred, gold = set(pred), set(gold)
        correct += len(pred & gold)
        found += len(pred)
        total += len(gold)
    return ChunkScore(correct, found, total, beta)


@dataclass(frozen=True)
class AgreementTable:
    all_correct: float
    majority_correct: float
    minority_correct: float
    all_wrong: float

    def as_tuple(self):
        return (self.all_correct, self.majority_correct, self.minority_correct, self.all_wrong)


def agreement_table(streams, gold) -> AgreementTable:
    """Percentage of tokens on which all / most / few / none of the streams are right."""
    streams = [getattr(s, "tags", s) for s in streams]
    if len(streams) < 3:
        raise ValueError(f"agreement needs at least 3 streams, got {len(streams)}")
    n = len(gold)
    if n == 0:
        raise ValueError("agreement of an empty sequence is undefined")
    for s in streams:
        if len(s) != n:
            raise ValueError(f"stream has {len(s)} tags, gold has {n}")
    cells = [0, 0, 0, 0]
    m = len(streams)
    for t in range(n):
        right = sum(s[t] == gold[t] for s in streams)
        if right == m:
            cells[0] += 1
        elif right == 0:
            cells[3] += 1
        elif 2 * right > m:
            cells[1] += 1
        else:
            cells[2] += 1
    return AgreementTable(*(100.0 * c / n for c in cells))


def _significance(statistic: float):
    for level, critical in CRITICAL_VALUES:
        if statistic >= critical:
            return level
    return None


def chi_squared_accuracy_test(a_correct, a_total, b_correct, b_total):
    """Pearson chi-squared on the 2x2 table correct/incorrect x system, no continuity correction.

    Returns ``(statistic, level)`` where level is 0.001, 0.01, 0.05 or None.
    """
    if a_total <= 0 or b_total <= 0:
        raise ValueError("totals must be positive")
    for correct, total in ((a_correct, a_total), (b_correct, b_total)):
        if not 0 <= correct <= total:
            raise ValueError(f"correct count {correct} outside [0, {total}]")
    observed = ((a_correct, a_total - a_correct), (b_correct, b_total - b_correct))
    grand = a_total + b_total
    col = (a_correct + b_correct, grand - a_correct - b_correct)
    rows = (a_total, b_total)
    statistic = 0.0
    for i in range(2):
        for j in range(2):
            expected = rows[i] * col[j] / grand
            if expected > 0:
                statistic += (observed[i][j] - expected) ** 2 / expected
    return statistic, _significance(statistic)


def mcnemar_test(a_flags, b_flags):
    """Paired alternative: McNemar's chi-squared over per-token correctness flags."""
    if len(a_flags) != len(b_flags):
        raise ValueError("paired flags must have equal length")
    only_a = sum(1 for a, b in zip(a_flags, b_flags) if a and not b)
    only_b = sum(1 for a, b in zip(a_flags, b_flags) if b and not a)
    if only_a + only_b == 0:
        return 0.0, None
    statistic = (only_a - only_b) ** 2 / (only_a + only_b)
    return statistic, _significance(statistic)


def format_chunk_line(label: str, score: ChunkScore, accuracy: str = "") -> str:
    return (f"{label:<20} {accuracy:<22} precision: {score.precision:6.2f}%  "
            f"recall: {score.recall:6.2f}%  F(beta={score.beta:g}): {score.f_beta:6.2f}")


def format_chunk_report(score: ChunkScore, n_tokens: int, accuracy=None) -> str:
    """Final chunk score report (accuracy / precision / recall / F)."""
    lines = [
        f"tokens: {n_tokens}; gold chunks: {score.gold_total}; found: {score.found_total}; "
        f"correct: {score.found_correct}",
        f"accuracy: {accuracy:.2f}%" if accuracy is not None else "accuracy: -",
        f"precision: {score.precision:.2f}%",
        f"recall: {score.recall:.2f}%",
        f"F(beta={score.beta:g}): {score.f_beta:.2f}",
    ]
    return "\n".join(lines) + "\n"


def format_agreement(open_table: AgreementTable, close_table: AgreementTable) -> str:
    rows = ("All correct", "Majority correct", "Minority correct", "All wrong")
    lines = [f"{'':<18}{'O':>9}{'C':>9}"]
    for name, o, c in zip(rows, open_table.as_tuple(), close_table.as_tuple()):
        lines.append(f"{name:<18}{o:8.2f}%{c:8.2f}%")
    return "\n".join(lines) + "\n"
