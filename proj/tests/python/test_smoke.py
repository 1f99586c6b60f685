import json

import pytest

import newscomm


def test_auc_examples():
    assert newscomm.auc([0.8, 0.3, 0.5, 0.1], [1, 1, 0, 0]) == pytest.approx(0.75)
    points, area = newscomm.roc_curve([0.9, 0.1], [1, 0])
    assert points == [(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
    assert area == 1.0
    assert newscomm.auc_band(0.95) == "excellent"


def test_auc_needs_both_classes():
    with pytest.raises(newscomm.UsageError):
        newscomm.auc([0.1, 0.2], [1, 1])
    assert issubclass(newscomm.DataError, newscomm.Error)


def test_schema_spans():
    spans = {name: (first, width) for name, first, width in newscomm.group_spans()}
    assert [w for _, w in spans.values()] == [45, 7, 11, 1, 16, 17, 1]
    assert len(newscomm.feature_names()) == 98


def test_text_helpers():
    assert newscomm.tokenize("Hi, there!") == ["Hi", ",", "there", "!"]
    assert newscomm.count_syllables("table") >= 1
    assert ("Middle East", 2) in newscomm.entities("The Middle East talks. The Middle East waits.")
    values = newscomm.text_features("Run!", "Run now!", "style")
    assert len(values) == 98
    assert any(v != 0 for v in values[:45])
    assert all(v == 0 for v in values[45:])
    with pytest.raises(newscomm.UsageError):
        newscomm.text_features("a", "b", "source")


def test_synth_and_pairwise(tmp_path):
    config = {
        "defaults": {"n_articles": 25, "entities": ["Dorvan Kelts"], "sentences": [2, 3]},
        "communities": [
            {"label": "a", "sources": ["a.com"]},
            {"label": "b", "sources": ["b.com"]},
        ],
    }
    articles = newscomm.synth(json.dumps(config), 3)
    assert len(articles) == 50
    assert articles == newscomm.synth(json.dumps(config), 3)

    path = tmp_path / "corpus.jsonl"
    path.write_text("".join(json.dumps(a) + "\n" for a in articles))
    assert len(newscomm.ingest(str(path))) == 50
    rows = newscomm.pairwise(str(path), groups="source", seed=1, trees=[10], folds=3)
    assert rows == [("a", "b", "source", 1.0)]


def test_cli_exit_codes(tmp_path):
    code, out, _ = newscomm.cli(["--help"])
    assert code == 0 and "matrix" in out
    code, _, err = newscomm.cli(["validate", str(tmp_path / "missing.jsonl")])
    assert code == 2 and "error" in err
    assert newscomm.cli(["no-such-command"])[0] == 1
