"""Tokenization premiums over aligned parallel corpora.

A premium compares how many tokens a vocabulary spends on one language's
side of a parallel corpus against another language's side, as the ratio of
corpus token totals. English is the reference side: its premium is 1 by
construction, and a premium of 4 means a text costs four times the tokens
its English counterpart does. Per-sentence ratios are kept as diagnostics
only; the reported number is always the totals ratio.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DataGapError, ValidationError
from .tokenizer import VocabularyTable, count_tokens

ENGLISH = "eng"

_STEM = re.compile(r"^(?P<lang>[a-z]{3})_(?P<script>[A-Za-z]{4})$")


@dataclass(frozen=True)
class ParallelCorpus:
    """Line-aligned sentences for several languages.

    Keys are ISO 639-3 codes. Every language carries the same number of
    sentences and none of them is empty; sentence i in one language is a
    translation of sentence i in every other.
    """

    sentences: Mapping[str, tuple[str, ...]]
    files: Mapping[str, str]
    split: str = "dev"

    def __post_init__(self) -> None:
        lengths = {lang: len(lines) for lang, lines in self.sentences.items()}
        if len(set(lengths.values())) > 1:
            detail = ", ".join(f"{self._name(l)}={n}" for l, n in sorted(lengths.items()))
            raise ValidationError(f"unaligned corpus: sentence counts differ ({detail})")
        for lang, lines in self.sentences.items():
            for index, line in enumerate(lines):
                if not line.strip():
                    raise ValidationError(
                        f"{self._name(lang)}: empty sentence at line {index + 1}"
                    )

    def _name(self, lang: str) -> str:
        return self.files.get(lang, lang)

    @property
    def languages(self) -> tuple[str, ...]:
        return tuple(sorted(self.sentences))

    def __len__(self) -> int:
        if not self.sentences:
            return 0
        return len(next(iter(self.sentences.values())))

    def sentences_for(self, lang: str) -> tuple[str, ...]:
        if lang not in self.sentences:
            raise DataGapError(f"corpus has no language {lang!r}")
        return self.sentences[lang]


def load_parallel_corpus(
    directory: str | Path,
    split: str = "dev",
    languages: Iterable[str] | None = None,
) -> ParallelCorpus:
    """Load a directory of ``<iso639-3>_<Script>.<split>`` files.

    One sentence per line, UTF-8, aligned by line number across files.
    `languages` filters by ISO code (or full ``iso_Script`` stem); by
    default every file of the split is loaded.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise ValidationError(f"corpus directory not found: {directory}")
    wanted = set(languages) if languages is not None else None

    sentences: dict[str, tuple[str, ...]] = {}
    files: dict[str, str] = {}
    for path in sorted(directory.glob(f"*.{split}")):
        match = _STEM.match(path.stem)
        if match is None:
            raise ValidationError(
                f"{path.name}: expected <iso639-3>_<Script>.{split} naming"
            )
        lang = match.group("lang")
        if wanted is not None and lang not in wanted and path.stem not in wanted:
            continue
        if lang in sentences:
            raise ValidationError(
                f"ambiguous corpus: {files[lang]} and {path.name} both map to "
                f"{lang!r}; select one via the languages filter"
            )
        sentences[lang] = tuple(path.read_text(encoding="utf-8").splitlines())
        files[lang] = path.name
    if not sentences:
        raise ValidationError(f"no *.{split} corpus files under {directory}")
    if wanted is not None:
        stems = {Path(name).stem for name in files.values()}
        missing = sorted(wanted - set(sentences) - stems)
        if missing:
            raise DataGapError(f"corpus has no language {', '.join(missing)}")
    return ParallelCorpus(sentences=sentences, files=files, split=split)


@dataclass(frozen=True)
class PremiumRecord:
    """Premium of one language under one vocabulary, relative to English."""

    language: str
    tokenizer: str
    total_tokens_lang: int
    total_tokens_eng: int
    premium: float
    per_sentence_premiums: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.premium <= 0:
            raise ValidationError(
                f"{self.language}/{self.tokenizer}: non-positive premium {self.premium}"
            )


def premium_pair(
    corpus_a: Sequence[str], corpus_b: Sequence[str], table: VocabularyTable
) -> float:
    """Token-total ratio of side A over side B: Σ‖t(a)‖ / Σ‖t(b)‖."""
    if len(corpus_a) != len(corpus_b):
        raise ValidationError(
            f"unaligned sides: {len(corpus_a)} vs {len(corpus_b)} sentences"
        )
    total_a = count_tokens(corpus_a, table).total
    total_b = count_tokens(corpus_b, table).total
    if total_b == 0:
        raise ValidationError("reference side tokenizes to zero tokens")
    return total_a / total_b


def premium_vs_english(
    corpus: ParallelCorpus, lang: str, table: VocabularyTable
) -> PremiumRecord:
    """Premium of `lang` against the corpus's English side."""
    lang_counts = count_tokens(corpus.sentences_for(lang), table)
    eng_counts = count_tokens(corpus.sentences_for(ENGLISH), table)
    if eng_counts.total == 0:
        raise ValidationError("English side tokenizes to zero tokens")
    per_sentence = tuple(
        l / e for l, e in zip(lang_counts.per_sentence, eng_counts.per_sentence)
    )
    return PremiumRecord(
        language=lang,
        tokenizer=table.name,
        total_tokens_lang=lang_counts.total,
        total_tokens_eng=eng_counts.total,
        premium=lang_counts.total / eng_counts.total,
        per_sentence_premiums=per_sentence,
    )


def premium_map(
    premiums: Iterable[PremiumRecord] | Mapping[str, float],
) -> dict[str, float]:
    """Normalize records or a plain mapping into language -> premium.

    Record lists must carry one vocabulary per language; mixed-vocabulary
    lists are ambiguous and rejected.
    """
    if isinstance(premiums, Mapping):
        return dict(premiums)
    out: dict[str, float] = {}
    for record in premiums:
        if record.language in out:
            raise ValidationError(
                f"multiple premiums for {record.language!r}; pass one vocabulary's"
            )
        out[record.language] = record.premium
    return out


def premium_change(p_old: float, p_new: float) -> float:
    """Percent change between two premiums: 100·(p_new − p_old)/p_old."""
    if p_old <= 0:
        raise ValidationError(f"non-positive old premium {p_old}")
    return 100.0 * (p_new - p_old) / p_old


def premium_table(
    corpus: ParallelCorpus,
    tables: Mapping[str, VocabularyTable],
    languages: Iterable[str] | None = None,
) -> list[PremiumRecord]:
    """Premiums for every (language, vocabulary) pair, in deterministic order.

    Languages are sorted; vocabularies keep the `tables` iteration order so
    callers control which one is the baseline for change columns.
    """
    if not tables:
        raise ValidationError("no vocabularies given")
    langs = sorted(languages) if languages is not None else corpus.languages
    records = []
    for lang in langs:
        for name, table in tables.items():
            if table.name != name:
                raise ValidationError(
                    f"vocabulary listed as {name!r} is named {table.name!r}"
                )
            records.append(premium_vs_english(corpus, lang, table))
    return records


def write_premium_report(records: Sequence[PremiumRecord], path: str | Path) -> None:
    """Write `language,tokenizer,total_tokens,premium,premium_change_pct`.

    The change column compares each vocabulary against the first one listed
    for that language; the baseline row leaves it empty. Premiums carry four
    decimals and changes two, so equal inputs produce byte-identical files.
    """
    baseline: dict[str, PremiumRecord] = {}
    rows = []
    for record in records:
        first = baseline.setdefault(record.language, record)
        if first is record:
            change = ""
        else:
            change = f"{premium_change(first.premium, record.premium):.2f}"
        rows.append(
            (
                record.language,
                record.tokenizer,
                str(record.total_tokens_lang),
                f"{record.premium:.4f}",
                change,
            )
        )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            ("language", "tokenizer", "total_tokens", "premium", "premium_change_pct")
        )
        writer.writerows(rows)
