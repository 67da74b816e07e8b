"""Resumable back-translation runs over a parallel corpus.

Every model call is appended to a JSON-lines run log before any
aggregation, keyed by (phase, language, index). Restarting a run replays
finished calls from the log and only issues the missing ones, so an
interrupted run converges to the same outputs as an uninterrupted one.
"""

from __future__ import annotations

import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..errors import TransportError, ValidationError
from . import parsing, prompts
from .client import AuthenticationError, ChatClient, ChatRequest, request_hash

PHASE_TRANSLATE = "translate"
PHASE_BINARY_ZERO_SHOT = "judge_binary_zero_shot"
PHASE_BINARY_COT = "judge_binary_cot"
PHASE_SCALE = "judge_scale"

STATUS_OK = "ok"
STATUS_PARSE_FAILED = "parse_failed"
STATUS_API_FAILED = "api_failed"


@dataclass(frozen=True)
class TranslationResult:
    """Outcome of translating one sentence into English."""

    language: str
    index: int
    raw_response: str | None
    translation: str | None
    status: str


@dataclass(frozen=True)
class JudgeVerdict:
    """All three protocol verdicts for one sentence."""

    language: str
    index: int
    binary_zero_shot: str
    binary_cot: str
    scale: str
    explanations: Mapping[str, str]


class RunLog:
    """Append-only JSONL store of every request and raw response.

    Loading keeps the last record per key, so retried calls simply
    supersede their failed predecessors without rewriting history.
    """

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records: dict[tuple[str, str, int], dict] = {}
        if self.path.exists():
            lines = self.path.read_text(encoding="utf-8").splitlines()
            for number, line in enumerate(lines, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError:
                    # A killed run can leave a half-written final line;
                    # drop it so the request replays. Anything malformed
                    # earlier means the file is corrupt, not interrupted.
                    if number == len(lines):
                        break
                    raise ValidationError(
                        f"{self.path}: malformed log line {number}"
                    ) from None
                self._records[self._key(record)] = record

    @staticmethod
    def _key(record: Mapping) -> tuple[str, str, int]:
        return (record["phase"], record["language"], int(record["index"]))

    def get(self, phase: str, language: str, index: int) -> dict | None:
        return self._records.get((phase, language, index))

    def append(
        self,
        phase: str,
        language: str,
        index: int,
        request: ChatRequest,
        raw_response: str | None,
        parsed: str | None,
    ) -> dict:
        record = {
            "phase": phase,
            "language": language,
            "index": index,
            "request_hash": request_hash(request),
            "raw_response": raw_response,
            "parsed": parsed,
            "timestamp": time.time(),
        }
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")
                handle.flush()
            self._records[self._key(record)] = record
        return record


class JudgeRunner:
    """Drive the four phases for a set of languages with bounded concurrency."""

    def __init__(
        self,
        client: ChatClient,
        log: RunLog,
        *,
        judge_client: ChatClient | None = None,
        concurrency: int = 4,
    ) -> None:
        if concurrency < 1:
            raise ValidationError(f"concurrency must be >= 1, got {concurrency}")
        self.client = client
        self.judge_client = judge_client or client
        self.log = log
        self.concurrency = concurrency

    def _call(
        self,
        client: ChatClient,
        phase: str,
        language: str,
        index: int,
        request: ChatRequest,
        parse,
    ) -> dict:
        cached = self.log.get(phase, language, index)
        if cached is not None and cached["raw_response"] is not None:
            return cached
        try:
            raw = client.complete(request)
        except AuthenticationError:
            # bad credentials poison every remaining call; abort the run
            raise
        except TransportError:
            return self.log.append(phase, language, index, request, None, None)
        return self.log.append(phase, language, index, request, raw, parse(raw))

    def _map(self, work: Sequence) -> list:
        if self.concurrency == 1 or len(work) <= 1:
            return [task() for task in work]
        with ThreadPoolExecutor(max_workers=self.concurrency) as pool:
            return list(pool.map(lambda task: task(), work))

    def translate(
        self, language: str, language_name: str, sentences: Sequence[str]
    ) -> list[TranslationResult]:
        system = prompts.translate_system_prompt(language_name)

        def task(index: int, sentence: str):
            def run() -> TranslationResult:
                request = self.client.request(system, sentence)
                record = self._call(
                    self.client,
                    PHASE_TRANSLATE,
                    language,
                    index,
                    request,
                    parsing.parse_translation,
                )
                raw = record["raw_response"]
                parsed = record["parsed"]
                if raw is None:
                    status = STATUS_API_FAILED
                elif parsed is None:
                    status = STATUS_PARSE_FAILED
                else:
                    status = STATUS_OK
                return TranslationResult(
                    language=language,
                    index=index,
                    raw_response=raw,
                    translation=parsed,
                    status=status,
                )

            return run

        return self._map([task(i, s) for i, s in enumerate(sentences)])

    def judge(
        self,
        language: str,
        originals: Sequence[str],
        translations: Sequence[TranslationResult],
    ) -> list[JudgeVerdict]:
        """Run all three judging protocols against the original sentences."""
        if len(originals) != len(translations):
            raise ValidationError(
                f"{language}: {len(originals)} originals vs "
                f"{len(translations)} translations"
            )
        phases = (
            (PHASE_BINARY_ZERO_SHOT, prompts.BINARY_ZERO_SHOT_SYSTEM_PROMPT, parsing.parse_binary),
            (PHASE_BINARY_COT, prompts.BINARY_COT_SYSTEM_PROMPT, parsing.parse_binary),
            (PHASE_SCALE, prompts.SCALE_SYSTEM_PROMPT, parsing.parse_scale),
        )

        def task(index: int, original: str, translation: TranslationResult):
            def run() -> JudgeVerdict:
                verdicts: dict[str, str] = {}
                explanations: dict[str, str] = {}
                for phase, system, parse in phases:
                    if translation.status != STATUS_OK:
                        # nothing judgeable was produced for this sentence
                        verdicts[phase] = parsing.UNPARSED
                        continue
                    content = prompts.judge_user_content(
                        original, translation.translation
                    )
                    request = self.judge_client.request(system, content)
                    record = self._call(
                        self.judge_client, phase, language, index, request, parse
                    )
                    raw = record["raw_response"]
                    parsed = record["parsed"]
                    verdicts[phase] = parsed if parsed is not None else parsing.UNPARSED
                    if raw is not None:
                        explanations[phase] = raw
                return JudgeVerdict(
                    language=language,
                    index=index,
                    binary_zero_shot=verdicts[PHASE_BINARY_ZERO_SHOT],
                    binary_cot=verdicts[PHASE_BINARY_COT],
                    scale=verdicts[PHASE_SCALE],
                    explanations=explanations,
                )

            return run

        return self._map(
            [task(i, o, t) for i, (o, t) in enumerate(zip(originals, translations))]
        )

    def run_language(
        self,
        language: str,
        language_name: str,
        sentences: Sequence[str],
        originals: Sequence[str],
    ) -> tuple[list[TranslationResult], list[JudgeVerdict]]:
        translations = self.translate(language, language_name, sentences)
        verdicts = self.judge(language, originals, translations)
        return translations, verdicts


def run_backtranslation(
    runner: JudgeRunner,
    sentences_by_language: Mapping[str, Sequence[str]],
    originals: Sequence[str],
    language_names: Mapping[str, str],
    languages: Iterable[str] | None = None,
) -> dict[str, list[JudgeVerdict]]:
    """Translate and judge every language; verdicts keyed by language."""
    chosen = sorted(languages) if languages is not None else sorted(sentences_by_language)
    verdicts: dict[str, list[JudgeVerdict]] = {}
    for language in chosen:
        if language not in sentences_by_language:
            raise ValidationError(f"no sentences for language {language!r}")
        name = language_names.get(language, language)
        _, verdicts[language] = runner.run_language(
            language, name, sentences_by_language[language], originals
        )
    return verdicts
