import json
import math
import os

import pytest

import fablegen


@pytest.fixture(scope="module")
def catalog():
    path = os.environ.get("FABLE_STARTER_CATALOG")
    if not path:
        pytest.skip("FABLE_STARTER_CATALOG not set")
    return fablegen.load_catalog(path)


def test_space_size_of_starter_catalog(catalog):
    assert fablegen.space_size(catalog) == str(8**6)


def test_sampling_is_deterministic_and_distinct(catalog):
    first = fablegen.sample_prompts(catalog, 20, seed=3)
    second = fablegen.sample_prompts(catalog, 20, seed=3)
    assert first == second
    assert len({tuple(t) for t in first}) == 20


def test_rendered_prompt_carries_the_slots(catalog):
    [indices] = fablegen.sample_prompts(catalog, 1, seed=1)
    rendered = fablegen.render_prompt(catalog, indices, age_group="C")
    assert "- Main Character: " in rendered["user"]
    assert catalog.characters[indices[0]] in rendered["user"]
    assert rendered["hash"] == fablegen.sha256_hex(rendered["user"])
    assert rendered["age_group"] == "C"


def test_oversized_target_raises(catalog):
    with pytest.raises(fablegen.FableError):
        fablegen.sample_prompts(catalog, 8**6 + 1)


def test_tokenize_counts():
    doc = fablegen.tokenize("The cat sat.")
    assert doc["tokens"] == ["the", "cat", "sat", "."]
    assert doc["word_count"] == 3
    assert doc["sentence_count"] == 1
    assert doc["syllable_count"] == 3


def test_metric_oracles():
    assert fablegen.distinct_n(["a b a", "b c"], 1) == pytest.approx(0.6)
    same = ["the quick fox jumped over the lazy dog"] * 3
    assert fablegen.self_bleu(same) == 1.0
    assert fablegen.bleu("a b", ["a b c d"], max_n=2) == pytest.approx(math.exp(-1.0))
    assert fablegen.flesch_reading_ease(["The cat sat."]) == pytest.approx(119.19, abs=0.01)


def test_cost_cells():
    assert fablegen.compute_cost(1.80, 924) == 0.46
    assert fablegen.compute_cost(0.80, 6654) == 1.48
    assert fablegen.cost_per_thousand(405.76, 3_000_000) == 0.1353
    assert fablegen.minute_billed_cost(1.80, 924) == 0.48


def test_estimate_tokens():
    assert fablegen.estimate_tokens("") == 0
    assert fablegen.estimate_tokens("Hello, world!") == 4


def test_parse_scores_accepts_fenced_json():
    reply = """Here you go:
```json
{"grammar": 8, "creativity": "7.5", "moral_clarity": 9, "adherence": 6,
 "age_group": "b"}
```"""
    scores = fablegen.parse_scores(reply)
    assert scores["grammar"] == 8.0
    assert scores["creativity"] == 7.5
    assert scores["age_group"] == "B"


def test_rubric_prompt_embeds_the_fable():
    prompt = fablegen.build_rubric_prompt("A fox learned to share.", "Write a fable.")
    assert "A fox learned to share." in prompt
    assert "grammar" in prompt


def test_ranking_orders_by_composite():
    rows = [
        ("weak", [7.0, 5.0, 6.0, 5.0, 0.40, 0.50, 70.0]),
        ("strong", [9.0, 8.0, 9.0, 9.0, 0.30, 0.70, 85.0]),
    ]
    board = fablegen.rank_models(rows)
    assert [entry["model_id"] for entry in board] == ["strong", "weak"]
    assert board[0]["composite"] == pytest.approx(1.0)
    assert board[1]["composite"] == pytest.approx(0.0)


def test_record_round_trip():
    fields = {
        "language": "en",
        "prompt": "tell a story",
        "fable": 'Once upon a time "quotes" and\nnewlines.',
        "hash": fablegen.sha256_hex("tell a story"),
        "llm_name": "model-x",
        "llm_input_tokens": 10,
        "llm_output_tokens": 20,
        "llm_inference_time": 1.25,
        "host_provider": "local",
        "host_dc_provider": "",
        "host_dc_location": "",
        "host_gpu": "A100",
        "host_gpu_vram": "80 GB",
        "host_cost_per_hour": 1.8,
        "generation_datetime": "2026-08-16T00:00:00Z",
        "pipeline_version": fablegen.__version__,
    }
    line = fablegen.record_to_jsonl(fields)
    assert json.loads(line)["fable"] == fields["fable"]
    assert fablegen.parse_record(line) == fields
