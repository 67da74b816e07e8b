"""Aggregate verdicts into accuracy and concordance tables.

Percentages are always over parsed verdicts; unparsed responses get their
own column so they can never inflate or deflate an accuracy number. The
concordance view row-normalizes binary outcomes within each scale rating.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .parsing import CORRECT, INCORRECT, SCALE_RATINGS, UNPARSED
from .runner import JudgeVerdict

MODE_ZERO_SHOT = "zero_shot"
MODE_CHAIN_OF_THOUGHT = "chain_of_thought"

_MODE_FIELD = {
    MODE_ZERO_SHOT: "binary_zero_shot",
    MODE_CHAIN_OF_THOUGHT: "binary_cot",
}


@dataclass(frozen=True)
class AccuracyRow:
    """Binary accuracy of one language under one prompting mode."""

    language: str
    mode: str
    sentences: int
    parsed: int
    unparsed: int
    correct_pct: float | None
    incorrect_pct: float | None

    @property
    def flagged(self) -> bool:
        return self.parsed == 0


def accuracy_table(
    verdicts_by_language: Mapping[str, Sequence[JudgeVerdict]],
) -> list[AccuracyRow]:
    """Per-language Correct/Incorrect percentages for both binary modes."""
    rows = []
    for language in sorted(verdicts_by_language):
        verdicts = verdicts_by_language[language]
        for mode, field in _MODE_FIELD.items():
            outcomes = [getattr(v, field) for v in verdicts]
            correct = sum(1 for o in outcomes if o == CORRECT)
            incorrect = sum(1 for o in outcomes if o == INCORRECT)
            parsed = correct + incorrect
            rows.append(
                AccuracyRow(
                    language=language,
                    mode=mode,
                    sentences=len(outcomes),
                    parsed=parsed,
                    unparsed=len(outcomes) - parsed,
                    correct_pct=100.0 * correct / parsed if parsed else None,
                    incorrect_pct=100.0 * incorrect / parsed if parsed else None,
                )
            )
    return rows


@dataclass(frozen=True)
class ConcordanceRow:
    """Binary outcome split within one scale rating, row-normalized."""

    mode: str
    scale: str
    total: int
    incorrect_pct: float | None
    correct_pct: float | None


def concordance(verdicts: Iterable[JudgeVerdict]) -> list[ConcordanceRow]:
    """Cross-tab P(binary outcome | scale rating) for both binary modes.

    Sentences whose scale rating is unparsed cannot be placed in a row and
    are left out; within a row, only parsed binary verdicts count. Empty
    rows surface with None percentages rather than fake zeros.
    """
    verdicts = list(verdicts)
    rows = []
    for mode, field in _MODE_FIELD.items():
        for rating in SCALE_RATINGS:
            group = [
                getattr(v, field)
                for v in verdicts
                if v.scale == rating and getattr(v, field) != UNPARSED
            ]
            total = len(group)
            correct = sum(1 for o in group if o == CORRECT)
            rows.append(
                ConcordanceRow(
                    mode=mode,
                    scale=rating,
                    total=total,
                    incorrect_pct=100.0 * (total - correct) / total if total else None,
                    correct_pct=100.0 * correct / total if total else None,
                )
            )
    return rows


def _write_csv(
    path: str | Path, header: Sequence[str], rows: Iterable[Sequence[str]]
) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _pct(value: float | None) -> str:
    return "-" if value is None else f"{value:.2f}"


def write_accuracy_report(rows: Sequence[AccuracyRow], path: str | Path) -> None:
    """CSV: one row per (language, mode); all-unparsed languages annotated."""
    _write_csv(
        path,
        (
            "language",
            "mode",
            "sentences",
            "parsed",
            "unparsed",
            "correct_pct",
            "incorrect_pct",
            "note",
        ),
        (
            (
                row.language,
                row.mode,
                str(row.sentences),
                str(row.parsed),
                str(row.unparsed),
                _pct(row.correct_pct),
                _pct(row.incorrect_pct),
                "all-unparsed" if row.flagged else "",
            )
            for row in rows
        ),
    )


def write_concordance_report(rows: Sequence[ConcordanceRow], path: str | Path) -> None:
    """CSV: 5 scale rows per binary mode; empty rows carry dashes."""
    _write_csv(
        path,
        ("mode", "scale", "total", "incorrect_pct", "correct_pct"),
        (
            (
                row.mode,
                row.scale,
                str(row.total),
                _pct(row.incorrect_pct),
                _pct(row.correct_pct),
            )
            for row in rows
        ),
    )
