"""Three-stage flow: classify input, transliterate, run a model stage, classify
output, restore script.

The model stage is pluggable: `identity` for testing/measurement, or an
external command taking UTF-8 text on stdin and answering on stdout (exit 0).
Below the confidence threshold text passes through unmodified (fail-open).
"""

from __future__ import annotations

import dataclasses
import json
import subprocess
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from . import codebook as codebook_mod
from . import langid, translit
from .codebook import Codebook
from .errors import StageError, TranslitError
from .langid import LangIdModel

LOW_RESOURCE_TAGS = frozenset({"bo", "mn", "ug"})

#: Default script-range name to language tag correspondence.
SCRIPT_TAGS = {"Tibetan": "bo", "Mongolian": "mn", "Uyghur": "ug", "CJK": "zh"}

MODEL_STAGES = ("identity", "external")


@dataclass
class PipelineConfig:
    codebook_path: str
    input_model_path: str
    output_model_path: str
    model_stage: str = "identity"
    model_command: str | None = None
    decode_mode: str = "strict"
    confidence_threshold: float = 0.5
    pinyin_transform_path: str | None = None

    def __post_init__(self):
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise ValueError(f"confidence_threshold must be in [0,1], got {self.confidence_threshold}")
        if self.model_stage not in MODEL_STAGES:
            raise ValueError(f"model_stage must be one of {MODEL_STAGES}, got {self.model_stage!r}")
        if self.model_stage == "external" and not self.model_command:
            raise ValueError("model_stage 'external' requires model_command")
        if self.decode_mode not in translit.MODES:
            raise ValueError(f"decode_mode must be one of {translit.MODES}")


@dataclass
class PipelineTrace:
    input_label: str
    input_confidence: float
    encoded: bool
    model_stage_output: str
    output_label: str
    output_confidence: float
    restored: bool
    warnings: list[str] = field(default_factory=list)
    error: str | None = None

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), ensure_ascii=False)


class Pipeline:
    def __init__(
        self,
        codebook: Codebook,
        input_model: LangIdModel,
        output_model: LangIdModel,
        *,
        model_stage: str = "identity",
        model_command: str | None = None,
        decode_mode: str = "strict",
        confidence_threshold: float = 0.5,
        pinyin_transform: Mapping[int, str] | None = None,
    ):
        self.codebook = codebook
        self.input_model = input_model
        self.output_model = output_model
        self.model_stage = model_stage
        self.model_command = model_command
        self.decode_mode = decode_mode
        self.threshold = confidence_threshold
        self.pinyin_transform = pinyin_transform
        self._encode = translit.translator(codebook)
        self._encode_pinyin = (
            translit.translator(codebook, pinyin_transform) if pinyin_transform else None
        )

    @classmethod
    def from_config(cls, cfg: PipelineConfig) -> "Pipeline":
        transform = None
        if cfg.pinyin_transform_path:
            transform = codebook_mod.load_transform(cfg.pinyin_transform_path)
        return cls(
            codebook_mod.load_path(cfg.codebook_path),
            langid.load_model(cfg.input_model_path),
            langid.load_model(cfg.output_model_path),
            model_stage=cfg.model_stage,
            model_command=cfg.model_command,
            decode_mode=cfg.decode_mode,
            confidence_threshold=cfg.confidence_threshold,
            pinyin_transform=transform,
        )

    def _run_stage(self, text: str) -> str:
        if self.model_stage == "identity":
            return text
        proc = subprocess.run(
            self.model_command,
            shell=True,
            input=text.encode("utf-8"),
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
        )
        if proc.returncode != 0:
            detail = proc.stderr.decode("utf-8", errors="replace").strip()
            raise StageError(f"model command exited {proc.returncode}: {detail or '(no stderr)'}")
        try:
            out = proc.stdout.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise StageError(f"model command produced invalid UTF-8 at byte {exc.start}") from exc
        # Line filters customarily append one newline; our contract is newline-free.
        return out[:-1] if out.endswith("\n") else out

    def _run(self, text: str) -> tuple[str, PipelineTrace]:
        pred_in = langid.predict(text, self.input_model)
        warnings: list[str] = []
        work = text
        encoded = False
        lossy = False
        if pred_in.confidence >= self.threshold:
            if pred_in.label in LOW_RESOURCE_TAGS:
                work = self._encode(text)
                encoded = True
            elif pred_in.label == "zh" and self._encode_pinyin is not None:
                work = self._encode_pinyin(text)
                encoded = True
                lossy = True
                warnings.append("pinyin transform applied; output is not restorable")

        trace = PipelineTrace(
            input_label=pred_in.label,
            input_confidence=pred_in.confidence,
            encoded=encoded,
            model_stage_output="",
            output_label="",
            output_confidence=0.0,
            restored=False,
            warnings=warnings,
        )
        try:
            stage_out = self._run_stage(work)
        except TranslitError as exc:
            trace.error = f"{type(exc).__name__}: {exc}"
            return text, trace
        trace.model_stage_output = stage_out

        pred_out = langid.predict(stage_out, self.output_model)
        trace.output_label = pred_out.label
        trace.output_confidence = pred_out.confidence
        final = stage_out
        if (
            pred_out.label in LOW_RESOURCE_TAGS
            and pred_out.confidence >= self.threshold
            and not lossy
        ):
            try:
                result = translit.decode(stage_out, self.codebook, self.decode_mode)
            except TranslitError as exc:
                trace.error = f"{type(exc).__name__}: {exc}"
                return stage_out, trace
            final = result.text
            trace.restored = True
            warnings.extend(result.warnings)
            if encoded and pred_out.label != pred_in.label:
                warnings.append(
                    f"classifier disagreement: input {pred_in.label}, output {pred_out.label}"
                )
        return final, trace

    def process(self, text: str) -> tuple[str, PipelineTrace]:
        """Run one text through all stages; raises StageError on stage failure."""
        final, trace = self._run(text)
        if trace.error is not None:
            raise StageError(trace.error)
        return final, trace

    def batch(self, lines: Iterable[str]) -> Iterator[tuple[str, PipelineTrace]]:
        """Per-line processing, order preserved; failures are recorded per line
        in the trace and the stream continues."""
        for line in lines:
            yield self._run(line)
