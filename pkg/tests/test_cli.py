import pytest

from chunkvote import synthetic
from chunkvote.cli import build_parser, main
from chunkvote.corpus import Dataset, write_column_file, write_nested_file
from conftest import EXAMPLE_IOE2


@pytest.fixture
def files(tmp_path, example):
    corpus = synthetic.base_corpus(20, seed=2)
    paths = {
        "example": tmp_path / "example.iob1",
        "train": tmp_path / "train.iob1",
        "test": tmp_path / "test.iob1",
        "nested": tmp_path / "nested.txt",
    }
    paths["example"].write_text(write_column_file(Dataset([example]), "IOB1"))
    paths["train"].write_text(write_column_file(corpus[:15], "IOB1"))
    paths["test"].write_text(write_column_file(corpus[15:], "IOB1"))
    paths["nested"].write_text(write_nested_file(synthetic.nested_corpus(10, seed=1)))
    return paths


def test_convert(files, tmp_path):
    out = tmp_path / "out.ioe2"
    assert main(["convert", "--from", "IOB1", "--to", "IOE2", str(files["example"]), str(out)]) == 0
    assert [line.split()[2] for line in out.read_text().splitlines() if line] == EXAMPLE_IOE2


def test_convert_to_oc(files, tmp_path):
    out = tmp_path / "out.oc"
    assert main(["convert", "--to", "O+C", str(files["example"]), str(out)]) == 0
    first = out.read_text().splitlines()[1].split()
    assert first == ["early", "JJ", "O-OPEN", "C-NONE"]


def test_evaluate_identical(files, capsys):
    assert main(["evaluate", str(files["example"]), str(files["example"])]) == 0
    out = capsys.readouterr().out
    assert "precision: 100.00%" in out and "recall: 100.00%" in out
    assert "F(beta=1): 100.00" in out


def test_evaluate_is_stable(files, capsys):
    main(["evaluate", str(files["test"]), str(files["test"])])
    first = capsys.readouterr().out
    main(["evaluate", str(files["test"]), str(files["test"])])
    assert capsys.readouterr().out == first


def test_evaluate_token_mismatch(files, capsys):
    assert main(["evaluate", str(files["example"]), str(files["test"])]) == 2
    assert str(files["test"]) in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    missing = tmp_path / "nope.txt"
    assert main(["evaluate", str(missing), str(missing)]) == 2
    assert str(missing) in capsys.readouterr().err


def test_malformed_file_names_line(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("a DT I\nb NN\n")
    assert main(["convert", "--to", "IOB2", str(bad), str(tmp_path / "o")]) == 2
    err = capsys.readouterr().err
    assert str(bad) in err and "line 2" in err


def test_usage_errors(capsys):
    assert main([]) == 1
    assert main(["convert", "--to", "BILOU", "a", "b"]) in (1, 2)
    assert main(["frobnicate"]) == 1
    assert main(["experiment", "--stages", "5", "a", "b"]) == 1
    capsys.readouterr()


def test_help_lists_defaults(capsys):
    for command in ("experiment", "crossval", "train", "cascade"):
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args([command, "--help"])
        assert info.value.code == 0
        text = capsys.readouterr().out
        for flag in ("--scheme", "--stages", "--k", "--method", "--folds", "--tuning-fraction",
                     "--max-levels", "--jobs", "--seed", "--config"):
            assert flag in text
        assert text.count("default") >= 10


def test_train_predict_evaluate(files, tmp_path, capsys):
    model = tmp_path / "model.txt"
    pred = tmp_path / "pred.iob1"
    assert main(["train", "--stages", "1", str(files["train"]), str(model)]) == 0
    assert model.read_text().startswith("chunkvote-model 1 basenp")
    assert main(["predict", str(model), str(files["test"]), str(pred)]) == 0
    assert main(["evaluate", str(files["test"]), str(pred)]) == 0
    assert "precision:" in capsys.readouterr().out


def test_predict_rejects_corrupt_model(files, tmp_path, capsys):
    model = tmp_path / "model.txt"
    model.write_text("chunkvote-model 1 basenp sha256=00\n{}\n")
    assert main(["predict", str(model), str(files["test"]), str(tmp_path / "p")]) == 2
    assert str(model) in capsys.readouterr().err


def test_experiment_with_config(files, tmp_path, capsys):
    config = tmp_path / "exp.cfg"
    config.write_text("# small run\nscheme = IOB1,IOE2,O+C\nstages = 1\nk = 1\nmethod = tagprecision\n")
    report = tmp_path / "report.txt"
    output = tmp_path / "pred.txt"
    args = ["experiment", "--config", str(config), "--k", "3", "--report", str(report),
            "--output", str(output), str(files["train"]), str(files["test"])]
    assert main(args) == 0
    text = capsys.readouterr().out
    assert "Combined (tagprecision)" in text and "IOB2" not in text
    assert "method = tagprecision" in report.read_text()
    assert output.read_text().count("\n\n") == 5


def test_experiment_paired_test_and_gain_ratio(files, capsys):
    args = ["experiment", "--scheme", "IOB1,IOB2,O+C", "--stages", "1", "--mcnemar", "--gain-ratio",
            str(files["train"]), str(files["test"])]
    assert main(args) == 0
    text = capsys.readouterr().out
    assert "mcnemar combined vs best (open)" in text and "chi2 " not in text


def test_bad_config_key(files, tmp_path, capsys):
    config = tmp_path / "exp.cfg"
    config.write_text("colour = blue\n")
    assert main(["experiment", "--config", str(config), str(files["train"]), str(files["test"])]) == 2
    assert "line 1" in capsys.readouterr().err


def test_crossval(files, tmp_path, capsys):
    report = tmp_path / "cv.txt"
    assert main(["crossval", "--folds", "3", "--stages", "1", "--report", str(report),
                 str(files["train"])]) == 0
    assert "Representation" in capsys.readouterr().out
    assert "tokens = " in report.read_text()


def test_crossval_too_many_folds(files, capsys):
    assert main(["crossval", "--folds", "99", str(files["train"])]) == 1


def test_cascade(files, tmp_path, capsys):
    out = tmp_path / "nested.out"
    assert main(["cascade", "--k", "1", str(files["nested"]), str(files["nested"]), str(out)]) == 0
    assert out.read_text() == files["nested"].read_text()
    assert "F(beta=1): 100.00" in capsys.readouterr().out
