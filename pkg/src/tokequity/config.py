"""TOML run configuration with validated sections and sane defaults.

Every knob the pipeline honours lives here, so a config file plus the
input data fully determines a run. Relative paths are resolved against
the config file's directory (or the working directory when no file is
given). Unknown sections and keys are rejected rather than ignored.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ValidationError
from .impact import MODE_BY_COUNTRY_CLASS, MODE_BY_LANGUAGE_CLASS
from .tokenizer import BUILTIN_VOCABULARIES

# Human-readable names substituted into the translation prompt.
LANGUAGE_NAMES = {
    "arb": "Standard Arabic",
    "ben": "Bengali",
    "dan": "Danish",
    "deu": "German",
    "dzo": "Dzongkha",
    "eng": "English",
    "fra": "French",
    "hin": "Hindi",
    "ind": "Indonesian",
    "ita": "Italian",
    "jpn": "Japanese",
    "kbp": "Kabiye",
    "kor": "Korean",
    "mar": "Marathi",
    "nld": "Dutch",
    "nus": "Nuer",
    "ory": "Odia",
    "por": "Portuguese",
    "ron": "Romanian",
    "rus": "Russian",
    "sat": "Santali",
    "shn": "Shan",
    "spa": "Spanish",
    "swe": "Swedish",
    "swh": "Swahili",
    "taq": "Tamasheq",
    "tel": "Telugu",
    "tzm": "Central Atlas Tamazight",
    "urd": "Urdu",
    "vie": "Vietnamese",
    "zho": "Chinese",
}

DEFAULT_CORPUS_DIR = "data/corpus/flores200p-desk"
DEFAULT_DEMOGRAPHICS_DIR = "data/demographics"


@dataclass(frozen=True)
class CorpusConfig:
    dir: Path
    split: str = "dev"
    languages: tuple[str, ...] | None = None


@dataclass(frozen=True)
class SelectConfig:
    per_tier: int = 3
    global_top: int = 5
    premium_floor: float = 4.0


@dataclass(frozen=True)
class JudgeConfig:
    endpoint: str
    model: str = "gpt-4o"
    judge_model: str | None = None
    languages: tuple[str, ...] | None = None
    max_sentences: int = 20
    concurrency: int = 4
    max_retries: int = 3
    backoff: float = 0.5
    log: str = "judge_log.jsonl"
    language_names: Mapping[str, str] = field(default_factory=dict)

    def name_of(self, language: str) -> str:
        if language in self.language_names:
            return self.language_names[language]
        return LANGUAGE_NAMES.get(language, language)


@dataclass(frozen=True)
class RunConfig:
    corpus: CorpusConfig
    tokenizers: tuple[str, ...]
    demographics_dir: Path
    impact_mode: str = MODE_BY_COUNTRY_CLASS
    impact_vocabulary: str | None = None
    select: SelectConfig = field(default_factory=SelectConfig)
    judge: JudgeConfig | None = None


def _require_keys(section: str, table: Mapping[str, Any], allowed: set[str]) -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ValidationError(
            f"config section [{section}]: unknown key(s) {', '.join(unknown)}"
        )


def _string_list(section: str, key: str, value: Any) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ValidationError(f"config [{section}] {key} must be a list of strings")
    return tuple(value)


def load_config(path: str | Path | None = None) -> RunConfig:
    """Load a TOML config, or the defaults when no file is given."""
    if path is None:
        base = Path.cwd()
        data: dict[str, Any] = {}
    else:
        path = Path(path)
        if not path.is_file():
            raise ValidationError(f"config file not found: {path}")
        base = path.parent
        try:
            data = tomllib.loads(path.read_text(encoding="utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ValidationError(f"{path}: {exc}")

    _require_keys(
        "root",
        data,
        {"corpus", "tokenizers", "demographics", "impact", "select", "judge"},
    )

    corpus_raw = data.get("corpus", {})
    _require_keys("corpus", corpus_raw, {"dir", "split", "languages"})
    languages = corpus_raw.get("languages")
    # explicit paths resolve against the config file, defaults against cwd
    if "dir" in corpus_raw:
        corpus_dir = (base / corpus_raw["dir"]).resolve()
    else:
        corpus_dir = (Path.cwd() / DEFAULT_CORPUS_DIR).resolve()
    corpus = CorpusConfig(
        dir=corpus_dir,
        split=corpus_raw.get("split", "dev"),
        languages=_string_list("corpus", "languages", languages)
        if languages is not None
        else None,
    )

    tok_raw = data.get("tokenizers", {})
    _require_keys("tokenizers", tok_raw, {"names"})
    names = tok_raw.get("names", list(BUILTIN_VOCABULARIES))
    tokenizers = _string_list("tokenizers", "names", names)
    if not tokenizers:
        raise ValidationError("config [tokenizers] names must not be empty")

    demo_raw = data.get("demographics", {})
    _require_keys("demographics", demo_raw, {"dir"})
    if "dir" in demo_raw:
        demographics_dir = (base / demo_raw["dir"]).resolve()
    else:
        demographics_dir = (Path.cwd() / DEFAULT_DEMOGRAPHICS_DIR).resolve()

    impact_raw = data.get("impact", {})
    _require_keys("impact", impact_raw, {"mode", "vocabulary"})
    impact_mode = impact_raw.get("mode", MODE_BY_COUNTRY_CLASS)
    if impact_mode not in (MODE_BY_COUNTRY_CLASS, MODE_BY_LANGUAGE_CLASS):
        raise ValidationError(f"config [impact] mode: unknown mode {impact_mode!r}")
    impact_vocabulary = impact_raw.get("vocabulary")

    select_raw = data.get("select", {})
    _require_keys("select", select_raw, {"per_tier", "global_top", "premium_floor"})
    select = SelectConfig(
        per_tier=int(select_raw.get("per_tier", 3)),
        global_top=int(select_raw.get("global_top", 5)),
        premium_floor=float(select_raw.get("premium_floor", 4.0)),
    )

    judge: JudgeConfig | None = None
    judge_raw = data.get("judge")
    if judge_raw is not None:
        _require_keys(
            "judge",
            judge_raw,
            {
                "endpoint",
                "model",
                "judge_model",
                "languages",
                "max_sentences",
                "concurrency",
                "max_retries",
                "backoff",
                "log",
                "language_names",
            },
        )
        if "endpoint" not in judge_raw:
            raise ValidationError("config [judge] needs an endpoint")
        judge_langs = judge_raw.get("languages")
        judge = JudgeConfig(
            endpoint=str(judge_raw["endpoint"]),
            model=str(judge_raw.get("model", "gpt-4o")),
            judge_model=judge_raw.get("judge_model"),
            languages=_string_list("judge", "languages", judge_langs)
            if judge_langs is not None
            else None,
            max_sentences=int(judge_raw.get("max_sentences", 20)),
            concurrency=int(judge_raw.get("concurrency", 4)),
            max_retries=int(judge_raw.get("max_retries", 3)),
            backoff=float(judge_raw.get("backoff", 0.5)),
            log=str(judge_raw.get("log", "judge_log.jsonl")),
            language_names=dict(judge_raw.get("language_names", {})),
        )

    return RunConfig(
        corpus=corpus,
        tokenizers=tokenizers,
        demographics_dir=demographics_dir,
        impact_mode=impact_mode,
        impact_vocabulary=impact_vocabulary,
        select=select,
        judge=judge,
    )
