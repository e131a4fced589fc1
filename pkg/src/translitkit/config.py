"""Flat key-value config files: `key = value` lines, `#` comments, one file per concern.

Paths inside a config resolve relative to the config file's directory.
"""

from __future__ import annotations

import os

from .codespace import UPPER, CodeSpaceProfile
from .errors import ConfigError
from .freqanalysis import ScriptRange
from .langid import DEFAULT_HASH_BUCKETS, TrainingParams
from .pipeline import PipelineConfig


def load_kv(path: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path} line {lineno}: expected 'key = value'")
            key, value = stripped.split("=", 1)
            key = key.strip()
            if key in pairs:
                raise ConfigError(f"{path} line {lineno}: duplicate key {key!r}")
            pairs[key] = value.strip()
    return pairs


def parse_letters(spec: str) -> list[str]:
    """Uppercase letter set: 'A-F', 'ABCDEF' and 'A,B,C' all work; '' is empty."""
    spec = spec.replace(",", "").replace(" ", "")
    if not spec:
        return []
    if "-" in spec:
        lo, _, hi = spec.partition("-")
        if len(lo) == 1 and len(hi) == 1 and lo in UPPER and hi in UPPER and lo <= hi:
            return list(UPPER[UPPER.index(lo) : UPPER.index(hi) + 1])
        raise ConfigError(f"bad letter range {spec!r}")
    for c in spec:
        if c not in UPPER:
            raise ConfigError(f"bad letter {c!r} in {spec!r}")
    return list(spec)


def _get_int(pairs: dict[str, str], key: str, default: int, path: str) -> int:
    if key not in pairs:
        return default
    try:
        return int(pairs[key])
    except ValueError as exc:
        raise ConfigError(f"{path}: key {key!r} must be an integer") from exc


def _get_float(pairs: dict[str, str], key: str, default: float, path: str) -> float:
    if key not in pairs:
        return default
    try:
        return float(pairs[key])
    except ValueError as exc:
        raise ConfigError(f"{path}: key {key!r} must be a number") from exc


def load_profile(path: str) -> CodeSpaceProfile:
    """Keys: max_len, excluded_single_letters, two_char_first_letters."""
    pairs = load_kv(path)
    defaults = CodeSpaceProfile()
    kwargs = {}
    kwargs["max_len"] = _get_int(pairs, "max_len", defaults.max_len, path)
    if "excluded_single_letters" in pairs:
        kwargs["excluded_single_letters"] = frozenset(parse_letters(pairs["excluded_single_letters"]))
    if "two_char_first_letters" in pairs:
        kwargs["two_char_first_letters"] = tuple(parse_letters(pairs["two_char_first_letters"]))
    try:
        return CodeSpaceProfile(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_interval(part: str, path: str) -> tuple[int, int]:
    part = part.strip().removeprefix("U+").replace("U+", "")
    lo, sep, hi = part.partition("-")
    try:
        lo_cp = int(lo, 16)
        hi_cp = int(hi, 16) if sep else lo_cp
    except ValueError as exc:
        raise ConfigError(f"{path}: bad code point interval {part!r}") from exc
    return lo_cp, hi_cp


def load_ranges(path: str) -> list[ScriptRange]:
    """One key per script; values are comma-separated hex intervals like 0F00-0FFF."""
    pairs = load_kv(path)
    if not pairs:
        raise ConfigError(f"{path}: no script ranges defined")
    ranges = []
    for name, value in pairs.items():
        intervals = tuple(_parse_interval(p, path) for p in value.split(",") if p.strip())
        try:
            ranges.append(ScriptRange(name, intervals))
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    return ranges


def load_pipeline_config(path: str) -> PipelineConfig:
    pairs = load_kv(path)
    base = os.path.dirname(os.path.abspath(path))

    def resolve(key: str) -> str | None:
        value = pairs.get(key)
        if not value:
            return None
        return value if os.path.isabs(value) else os.path.join(base, value)

    for required in ("codebook", "input_model", "output_model"):
        if not pairs.get(required):
            raise ConfigError(f"{path}: missing required key {required!r}")
    try:
        return PipelineConfig(
            codebook_path=resolve("codebook"),
            input_model_path=resolve("input_model"),
            output_model_path=resolve("output_model"),
            model_stage=pairs.get("model_stage", "identity"),
            model_command=pairs.get("model_command") or None,
            decode_mode=pairs.get("decode_mode", "strict"),
            confidence_threshold=_get_float(pairs, "confidence_threshold", 0.5, path),
            pinyin_transform_path=resolve("pinyin_transform"),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def load_training_params(path: str) -> tuple[TrainingParams, int]:
    """Returns (params, hash_buckets). Key `preset` picks input/output defaults."""
    pairs = load_kv(path)
    preset = pairs.get("preset", "input")
    if preset == "input":
        base = TrainingParams.input_defaults()
    elif preset == "output":
        base = TrainingParams.output_defaults()
    else:
        raise ConfigError(f"{path}: preset must be 'input' or 'output', got {preset!r}")
    params = TrainingParams(
        learning_rate=_get_float(pairs, "learning_rate", base.learning_rate, path),
        epochs=_get_int(pairs, "epochs", base.epochs, path),
        ngram_range=(
            _get_int(pairs, "ngram_min", base.ngram_range[0], path),
            _get_int(pairs, "ngram_max", base.ngram_range[1], path),
        ),
        min_count=_get_int(pairs, "min_count", base.min_count, path),
        dim=_get_int(pairs, "dim", base.dim, path),
        window=_get_int(pairs, "window", base.window, path),
        seed=_get_int(pairs, "seed", base.seed, path),
    )
    buckets = _get_int(pairs, "hash_buckets", DEFAULT_HASH_BUCKETS, path)
    return params, buckets
