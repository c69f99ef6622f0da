import random

import pytest
from hypothesis import given, strategies as st
from scipy.stats import chi2_contingency

from chunkvote.chunkrepr import ChunkSpan
from chunkvote.evaluation import (
    ChunkScore, agreement_table, chi_squared_accuracy_test, chunk_score, f_beta,
    format_chunk_report, mcnemar_test, token_accuracy,
)


def test_token_accuracy():
    assert token_accuracy(list("ABAB"), list("ABAB")) == 100.0
    assert token_accuracy(list("ABAB"), list("ABBB")) == 75.0
    with pytest.raises(ValueError):
        token_accuracy([], [])
    with pytest.raises(ValueError):
        token_accuracy(["A"], ["A", "B"])


def test_f_score_from_reported_rates():
    assert f_beta(93.63, 92.89) == pytest.approx(93.26, abs=0.01)
    assert f_beta(95.04, 94.75) == pytest.approx(94.90, abs=0.01)


def test_chunk_score_perfect(example):
    score = chunk_score([example.spans], [example.spans])
    assert score.precision == score.recall == score.f_beta == 100.0


def test_chunk_score_nothing_found(example):
    score = chunk_score([[]], [example.spans])
    assert (score.precision, score.recall, score.f_beta) == (0.0, 0.0, 0.0)


def test_chunk_score_exact_match_only():
    gold = [[ChunkSpan(0, 1), ChunkSpan(3, 3)]]
    pred = [[ChunkSpan(0, 2), ChunkSpan(3, 3), ChunkSpan(5, 5)]]
    score = chunk_score(pred, gold)
    assert (score.found_correct, score.found_total, score.gold_total) == (1, 3, 2)
    assert score.precision == pytest.approx(100 / 3)
    assert score.recall == 50.0
    assert chunk_score(pred, [[ChunkSpan(0, 1, "VP"), ChunkSpan(3, 3)]]).found_correct == 1


def test_general_beta():
    score = ChunkScore(1, 2, 4, beta=2.0)
    p, r = 50.0, 25.0
    assert score.f_beta == pytest.approx(5 * p * r / (4 * p + r))


@given(st.floats(0, 100), st.floats(0, 100))
def test_f_properties(p, r):
    f = f_beta(p, r)
    assert f == pytest.approx(f_beta(r, p))
    assert f <= max(p, r) + 1e-9
    if p == r:
        assert f == pytest.approx(p)


def test_chunk_score_sentence_order_invariant():
    rng = random.Random(0)
    gold = [[ChunkSpan(0, rng.randrange(3))] for _ in range(20)]
    pred = [[ChunkSpan(0, rng.randrange(3))] for _ in range(20)]
    idx = list(range(20))
    rng.shuffle(idx)
    assert chunk_score(pred, gold) == chunk_score([pred[i] for i in idx], [gold[i] for i in idx])


def test_agreement_unanimous():
    gold = list("ABAB")
    assert agreement_table([gold] * 5, gold).as_tuple() == (100.0, 0.0, 0.0, 0.0)


def test_agreement_one_token_per_cell():
    gold = list("AAAA")
    # token 0: all right; 1: 3 of 5 right; 2: 1 of 5 right; 3: none right
    columns = ["AAAAA", "AAABB", "ABBBB", "BBBBB"]
    streams = ["".join(col[i] for col in columns) for i in range(5)]
    assert agreement_table(streams, gold).as_tuple() == (25.0, 25.0, 25.0, 25.0)


def test_agreement_needs_three_streams():
    with pytest.raises(ValueError):
        agreement_table(["AB", "AB"], "AB")


@given(st.integers(0, 10**6))
def test_agreement_sums_to_100(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 50)
    gold = [rng.choice("AB") for _ in range(n)]
    streams = [[rng.choice("AB") for _ in range(n)] for _ in range(rng.choice([3, 5, 7]))]
    cells = agreement_table(streams, gold).as_tuple()
    assert all(0 <= c <= 100 for c in cells)
    assert sum(cells) == pytest.approx(100.0, abs=1e-9)


def test_chi_squared_equal_proportions():
    assert chi_squared_accuracy_test(90, 100, 90, 100) == (0.0, None)


def test_chi_squared_hand_example():
    stat, level = chi_squared_accuracy_test(9800, 10000, 9700, 10000)
    # expected cells 9750/250 per row: 2 * (50^2/9750 + 50^2/250)
    assert stat == pytest.approx(2 * (2500 / 9750 + 2500 / 250), rel=1e-12)
    expected = chi2_contingency([[9800, 200], [9700, 300]], correction=False)[0]
    assert stat == pytest.approx(expected, abs=1e-9)  # 20.51
    assert level == 0.001


def test_chi_squared_errors():
    with pytest.raises(ValueError):
        chi_squared_accuracy_test(11, 10, 5, 10)
    with pytest.raises(ValueError):
        chi_squared_accuracy_test(0, 0, 5, 10)


def test_chi_squared_matches_scipy():
    rng = random.Random(42)
    for _ in range(50):
        a_total, b_total = rng.randint(20, 5000), rng.randint(20, 5000)
        a, b = rng.randint(1, a_total - 1), rng.randint(1, b_total - 1)
        stat, _ = chi_squared_accuracy_test(a, a_total, b, b_total)
        expected = chi2_contingency([[a, a_total - a], [b, b_total - b]], correction=False)[0]
        assert stat == pytest.approx(expected, abs=1e-6)
        assert chi_squared_accuracy_test(b, b_total, a, a_total)[0] == pytest.approx(stat)


def test_significance_levels():
    assert chi_squared_accuracy_test(80, 100, 70, 100)[1] is None  # 2.67
    assert chi_squared_accuracy_test(80, 100, 65, 100)[1] == 0.05  # 5.71
    assert chi_squared_accuracy_test(85, 100, 65, 100)[1] == 0.01  # 10.67


def test_mcnemar():
    a = [True] * 30 + [False] * 10
    b = [True] * 20 + [False] * 20
    stat, level = mcnemar_test(a, b)
    assert stat == pytest.approx(10.0)
    assert level == 0.01
    assert mcnemar_test(a, a) == (0.0, None)


def test_report_format():
    text = format_chunk_report(ChunkScore(6, 6, 6), 17, 100.0)
    assert "precision: 100.00%" in text and "recall: 100.00%" in text
    assert "F(beta=1): 100.00" in text
