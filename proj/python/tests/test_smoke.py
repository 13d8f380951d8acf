import itertools
import json
import math

import pytest

import aigt


def brute_auroc(ai, human):
    pairs = list(itertools.product(ai, human))
    wins = sum(1.0 if a > h else 0.5 if a == h else 0.0 for a, h in pairs)
    return wins / len(pairs)


def test_auroc_matches_pairwise_count():
    ai = [0.9, 0.4, 0.7, 0.7, 0.2]
    human = [0.1, 0.7, 0.3, 0.5]
    assert aigt.auroc(ai, human) == pytest.approx(brute_auroc(ai, human), abs=1e-12)
    assert aigt.auroc(ai, human, "lower_is_ai") == pytest.approx(
        1.0 - brute_auroc(ai, human), abs=1e-12)


def test_calibrate_and_tpr_at_fpr():
    model = aigt.calibrate_threshold([0.1, 0.2, 0.3], [0.7, 0.8, 0.9])
    assert model["threshold"] == pytest.approx(0.5)
    assert model["calibration_accuracy"] == pytest.approx(1.0)
    r = aigt.tpr_at_fpr([0.7, 0.8, 0.9], [0.1, 0.2, 0.3], 0.01)
    assert r["realized_fpr"] <= 0.01
    assert r["tpr"] == pytest.approx(1.0)


def test_mann_whitney_and_effect_band():
    a = [1.0, 2.0, 3.0]
    b = [4.0, 5.0, 6.0]
    u_b, p = aigt.mann_whitney(a, b)
    assert u_b == 9.0
    assert 0.0 < p < 1.0
    r = aigt.rank_biserial(u_b, 3, 3)
    assert r == 1.0
    assert aigt.band(r) == "large"
    assert aigt.band(0.0) == "none"


def test_features_cover_inventory():
    values = aigt.extract_features("I can't believe it's #Friday already! @bob")
    assert set(values) == set(aigt.feature_inventory())
    assert values["hashtags"] > 0
    with pytest.raises(aigt.InvalidArgument):
        aigt.extract_features("   ")


def test_toy_backend_detectors():
    backend = aigt.ToyBackend("toy-a", seed=7)
    text = backend.sample(24, seed=3)
    summaries = backend.score(text)
    assert len(summaries) == len(backend.encode(text))
    loglik = aigt.detect("loglik", text, backend)
    assert loglik == pytest.approx(
        sum(s["observed_logprob"] for s in summaries) / len(summaries))
    assert all(s["exact"] for s in summaries)
    performer = aigt.ToyBackend("toy-b", seed=8)
    assert math.isfinite(aigt.detect("binoculars", text, backend, performer))
    with pytest.raises(aigt.InvalidArgument):
        aigt.detect("binoculars", text, backend)
    assert aigt.orientation_of("loglik") == "higher_is_ai"
    assert "fastdetectgpt" in aigt.metric_detectors()


def test_text_cleanup_and_prompts():
    assert aigt.strip_entities("hi @bob see https://x.co/a").strip() == "hi see"
    prompt = aigt.build_paraphrase_prompt("hello world")
    assert "hello world" in prompt


def test_cli_round_trip(tmp_path):
    code, out, err = aigt.run_cli(["aigt", "--help"])
    assert code == 0
    assert "lingstats" in out
    code, _, err = aigt.run_cli(["aigt", "score", "--config", str(tmp_path / "missing.json")])
    assert code == 2
    assert err
