import pytest

from chunkvote.corpus import Dataset, Sentence, Token
from chunkvote.features import (
    PAD_CHUNK, PAD_POS, PAD_WORD, STAGE1, STAGE2, WindowSpec, build_instances,
    stage1_features, stage2_features,
)
from conftest import EXAMPLE_IOB1, EXAMPLE_OPEN

MONDAY = 6


def test_stage1_monday(example):
    feats = stage1_features(example, MONDAY)
    assert feats[:9] == ("trading", "in", "Hong", "Kong", "Monday", ",", "gold", "was", "quoted")
    assert feats[9:] == ("NN", "IN", "NNP", "NNP", "NNP", ",", "NN", "VBD", "VBN")


def test_stage1_padding_single_token():
    s = Sentence([Token("gold", "NN")])
    feats = stage1_features(s, 0)
    assert feats == (PAD_WORD,) * 4 + ("gold",) + (PAD_WORD,) * 4 + (PAD_POS,) * 4 + ("NN",) + (PAD_POS,) * 4


def test_stage1_arity(example):
    assert STAGE1.arity == 18
    assert all(len(stage1_features(example, t)) == 18 for t in range(17))


def test_stage1_out_of_range(example):
    with pytest.raises(IndexError):
        stage1_features(example, 17)


def test_stage2_monday(example):
    feats = stage2_features(example, EXAMPLE_IOB1, MONDAY)
    assert feats[:7] == ("in", "Hong", "Kong", "Monday", ",", "gold", "was")
    assert feats[7:14] == ("IN", "NNP", "NNP", "NNP", ",", "NN", "VBD")
    assert feats[14:] == ("I", "I", "O", "I")


def test_stage2_excludes_focus_tag(example):
    tags = list(EXAMPLE_IOB1)
    tags[MONDAY] = "O"
    assert stage2_features(example, tags, MONDAY) == stage2_features(example, EXAMPLE_IOB1, MONDAY)


def test_stage2_padding():
    s = Sentence([Token("gold", "NN")])
    feats = stage2_features(s, ["I"], 0)
    assert len(feats) == 18 == STAGE2.arity
    assert feats[14:] == (PAD_CHUNK,) * 4


def test_stage2_length_mismatch(example):
    with pytest.raises(ValueError):
        stage2_features(example, ["O"] * 3, 0)


def test_sentinels_are_distinct_and_unforgeable():
    assert len({PAD_WORD, PAD_POS, PAD_CHUNK}) == 3
    for pad in (PAD_WORD, PAD_POS):
        with pytest.raises(ValueError):
            Token(pad, "NN")


def test_window_spec_validation():
    with pytest.raises(ValueError):
        WindowSpec(-1, 2)


def test_build_instances_iob1(example):
    instances = build_instances(Dataset([example]), "IOB1", 1)
    assert [i.label for i in instances] == EXAMPLE_IOB1
    assert all(len(i.features) == 18 for i in instances)


def test_build_instances_oc(example):
    opens, closes = build_instances(Dataset([example]), "O+C", 1)
    assert len(opens) == len(closes) == 17
    assert {t for t, i in enumerate(opens) if i.label == "O-OPEN"} == EXAMPLE_OPEN
    assert {i.label for i in opens} == {"O-OPEN", "O-NONE"}


def test_build_instances_empty():
    assert build_instances(Dataset(), "IOB2", 1) == []


def test_build_instances_stage2_uses_given_context(example):
    context = [["O"] * 17]
    instances = build_instances(Dataset([example]), "IOB1", 2, context)
    assert instances[MONDAY].features[14:] == ("O", "O", "O", "O")
    assert [i.label for i in instances] == EXAMPLE_IOB1


def test_build_instances_stage2_errors(example):
    data = Dataset([example])
    with pytest.raises(ValueError):
        build_instances(data, "IOB1", 2)
    with pytest.raises(ValueError):
        build_instances(data, "O+C", 2, [["O"] * 17])
    with pytest.raises(ValueError):
        build_instances(data, "IOB1", 3)


def test_deterministic(example):
    data = Dataset([example])
    assert build_instances(data, "IOE1") == build_instances(data, "IOE1")
