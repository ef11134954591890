"""Python surface of the fable generation pipeline core."""

from fablegen._core import (
    Catalog,
    FableError,
    __version__,
    bleu,
    build_rubric_prompt,
    compute_cost,
    cost_per_thousand,
    distinct_n,
    estimate_tokens,
    flesch_reading_ease,
    load_catalog,
    minute_billed_cost,
    normalize_axis,
    parse_record,
    parse_scores,
    rank_models,
    record_to_jsonl,
    render_prompt,
    sample_prompts,
    self_bleu,
    sha256_hex,
    space_size,
    tokenize,
)

__all__ = [
    "Catalog",
    "FableError",
    "__version__",
    "bleu",
    "build_rubric_prompt",
    "compute_cost",
    "cost_per_thousand",
    "distinct_n",
    "estimate_tokens",
    "flesch_reading_ease",
    "load_catalog",
    "minute_billed_cost",
    "normalize_axis",
    "parse_record",
    "parse_scores",
    "rank_models",
    "record_to_jsonl",
    "render_prompt",
    "sample_prompts",
    "self_bleu",
    "sha256_hex",
    "space_size",
    "tokenize",
]
