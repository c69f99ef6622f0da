import random

import pytest
from hypothesis import given, strategies as st

from chunkvote import combine
from chunkvote.combine import (
    OutputStream, VoteWeights, build_stacking_instances, combine_stream, estimate_weights,
    format_weights, train_stacker, vote, weights_from_dict, weights_to_dict,
)
from oracles import brute_majority


def streams(*tag_lists):
    return [OutputStream(f"s{i}", tags) for i, tags in enumerate(tag_lists)]


def test_weighted_vote_worked_example():
    weights = VoteWeights("totprecision", 5, per_classifier=[0.9, 0.4, 0.8, 0.6, 0.6])
    votes = ["npstart", "null", "npstart", "null", "null"]
    scores = combine._scores(votes, weights)
    assert scores["npstart"] == pytest.approx(1.7)
    assert scores["null"] == pytest.approx(1.6)
    assert vote(votes, weights) == "npstart"
    # plain majority goes the other way
    assert vote(votes, VoteWeights.majority(5)) == "null"


def test_estimate_perfect_stream():
    gold = list("AABBA")
    w = estimate_weights(streams(gold), gold, "tagprecision")
    assert w.per_classifier == [1.0]
    assert w.per_tag_precision[0] == {"A": 1.0, "B": 1.0}
    assert w.per_tag_recall[0] == {"A": 1.0, "B": 1.0}


def test_estimate_hand_counts():
    gold = list("AABB")
    w = estimate_weights(streams(list("ABBB")), gold, "precisionrecall")
    assert w.per_classifier == [0.75]
    assert w.per_tag_precision[0]["A"] == 1.0
    assert w.per_tag_precision[0]["B"] == pytest.approx(2 / 3)
    assert w.per_tag_recall[0] == {"A": 0.5, "B": 1.0}


def test_pair_table_hand_counts():
    gold = ["A", "B", "A", "A"]
    w = estimate_weights(streams(["A", "A", "B", "B"], ["A", "A", "B", "A"]), gold, "tagpair")
    table = w.pair_table[(0, 1)]
    assert table[("A", "A")] == {"A": 0.5, "B": 0.5}
    assert table[("B", "B")] == {"A": 1.0}
    for row in table.values():
        assert sum(row.values()) == pytest.approx(1.0, abs=1e-9)


def test_zero_denominator_rates():
    gold = ["A", "A"]
    w = estimate_weights(streams(["A", "A"]), gold, "tagprecision")
    assert w.per_tag_precision[0] == {"A": 1.0}
    w = estimate_weights(streams(["B", "B"]), gold, "tagprecision")
    assert w.per_tag_precision[0] == {"A": 0.0, "B": 0.0}
    assert w.per_tag_recall[0] == {"A": 0.0, "B": 0.0}


def test_estimate_errors():
    with pytest.raises(ValueError):
        estimate_weights(streams("AB", "A"), "AB", "tagprecision")
    with pytest.raises(ValueError):
        estimate_weights(streams("AB"), "ABA", "tagprecision")
    with pytest.raises(ValueError):
        estimate_weights(streams("AB"), "AB", "majority")


def test_vote_stream_count_mismatch():
    with pytest.raises(ValueError):
        vote(["A", "B"], VoteWeights.majority(3))


def _tuning_set(rng, n_streams=5, n=200, error=0.1):
    gold = [rng.choice("AB") for _ in range(n)]
    outs = [[g if rng.random() > error else ("B" if g == "A" else "A") for g in gold]
            for _ in range(n_streams)]
    # make sure every unanimous context was seen with its consensus as gold
    for tag in "AB":
        gold.append(tag)
        for o in outs:
            o.append(tag)
    return streams(*outs), gold


@pytest.mark.parametrize("method", combine.VOTING_METHODS)
def test_unanimity(method):
    rng = random.Random(3)
    outputs, gold = _tuning_set(rng)
    weights = None if method == "majority" else estimate_weights(outputs, gold, method)
    weights = weights or VoteWeights.majority(5)
    for tag in "AB":
        assert vote([tag] * 5, weights) == tag
    same = streams(*(["A", "B", "B"],) * 5)
    assert combine_stream(same, method, weights).tags == ("A", "B", "B")


@given(st.lists(st.lists(st.sampled_from(["O-OPEN", "O-NONE"]), min_size=20, max_size=20),
                min_size=5, max_size=5))
def test_majority_matches_brute_count(tag_lists):
    combined = combine_stream(streams(*tag_lists), "majority")
    for t in range(20):
        assert combined.tags[t] == brute_majority([s[t] for s in tag_lists])


def test_majority_odd_binary_never_ties():
    rng = random.Random(0)
    w = VoteWeights.majority(5)
    for _ in range(200):
        votes = [rng.choice("AB") for _ in range(5)]
        scores = combine._scores(votes, w)
        assert len(set(scores.values())) == len(scores)


def test_uniform_totprecision_equals_majority():
    rng = random.Random(1)
    w = VoteWeights("totprecision", 5, per_classifier=[0.8] * 5)
    for _ in range(100):
        votes = [rng.choice("AB") for _ in range(5)]
        assert vote(votes, w) == vote(votes, VoteWeights.majority(5))


@pytest.mark.parametrize("method", combine.VOTING_METHODS)
def test_vote_is_tokenwise(method):
    rng = random.Random(8)
    outputs, gold = _tuning_set(rng)
    weights = None if method == "majority" else estimate_weights(outputs, gold, method)
    combined = combine_stream(outputs, method, weights).tags
    perm = list(range(len(gold)))
    rng.shuffle(perm)
    permuted = [OutputStream(s.classifier_id, [s.tags[i] for i in perm]) for s in outputs]
    assert combine_stream(permuted, method, weights).tags == tuple(combined[i] for i in perm)


def test_precision_recall_scoring():
    gold = list("AABB")
    outputs = streams(list("ABBB"), list("AABA"), list("AABB"))
    w = estimate_weights(outputs, gold, "precisionrecall")
    scores = combine._scores(["A", "B", "B"], w)
    p, r = w.per_tag_precision, w.per_tag_recall
    assert scores["A"] == pytest.approx(p[0]["A"] + (1 - r[1]["B"]) + (1 - r[2]["B"]))
    assert scores["B"] == pytest.approx((1 - r[0]["A"]) + p[1]["B"] + p[2]["B"])


def test_tagpair_backoff_on_unseen_context():
    gold = list("AAAA")
    w = estimate_weights(streams(list("AAAA"), list("AAAA")), gold, "tagpair")
    w.per_tag_precision[0]["B"] = 0.3
    w.per_tag_precision[1]["B"] = 0.4
    scores = combine._scores(["B", "B"], w)
    assert scores["B"] == pytest.approx(0.7)
    assert vote(["B", "B"], w) == "B"


def test_stacking_instances():
    outs = streams(*(["A", "B"],) * 5)
    inst = build_stacking_instances(outs)
    assert len(inst) == 2 and all(len(i.features) == 5 for i in inst)
    inst = build_stacking_instances(outs, pos=["NN", "DT"], gold=["A", "A"])
    assert inst[1].features == ("B",) * 5 + ("DT",) and inst[1].label == "A"
    assert build_stacking_instances(streams([], [], [])) == []
    with pytest.raises(ValueError):
        build_stacking_instances(outs, pos=["NN"])


@pytest.mark.parametrize("method", combine.STACKING_METHODS)
def test_stacker_memorises_reliable_stream(method):
    rng = random.Random(4)
    gold = [rng.choice("AB") for _ in range(60)]
    noisy = [[rng.choice("AB") for _ in gold] for _ in range(2)]
    outputs = streams(gold, *noisy)
    pos = [rng.choice(["NN", "DT"]) for _ in gold]
    stacker = train_stacker(outputs, gold, method, pos=pos, k=1)
    assert combine_stream(outputs, method, stacker=stacker, pos=pos).tags == tuple(gold)


def test_combine_stream_errors():
    outs = streams("AB", "AB", "AB")
    with pytest.raises(ValueError):
        combine_stream(outs, "tagprecision")
    with pytest.raises(ValueError):
        combine_stream(outs, "stack-ib1ig-tags")
    with pytest.raises(ValueError):
        combine_stream(outs, "borda")
    with pytest.raises(ValueError):
        combine_stream(streams("AB", "A"), "majority")


def test_weights_text_and_round_trip():
    gold = list("AABB")
    outputs = streams(list("ABBB"), list("AABA"))
    w = estimate_weights(outputs, gold, "tagpair")
    text = format_weights(w)
    assert text.splitlines()[1] == "classifier\ttag\tprecision\trecall\taccuracy"
    assert "s0\tB\t0.666667\t1.000000\t0.750000" in text
    assert weights_from_dict(weights_to_dict(w)) == w
