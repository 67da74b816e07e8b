"""Derive the evaluation language set from premiums and demographics.

Languages are picked per income tier rather than hand-listed: within the
low and lower-middle tiers, the highest-premium languages and the most
spoken languages that still pay at least a floor premium; globally, the
most spoken languages outright. The union, deduplicated in rule order, is
the evaluation set, and every pick records which rules chose it.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .demographics import IncomeClass, LanguageProfile
from .errors import ValidationError
from .premium import PremiumRecord, premium_map

RULE_LOW_PREMIUM = "low-income:top-premium"
RULE_LOW_POPULATION = "low-income:top-population-with-floor"
RULE_LM_PREMIUM = "lower-middle:top-premium"
RULE_LM_POPULATION = "lower-middle:top-population-with-floor"
RULE_GLOBAL_POPULATION = "global:top-population"

REFERENCE_LANGUAGE = "eng"


@dataclass(frozen=True)
class SelectedLanguage:
    """One evaluation language and the evidence that picked it."""

    language: str
    wealth_class: IncomeClass | None
    premium: float
    total_speakers: float
    rules: tuple[str, ...]


@dataclass(frozen=True)
class SelectionResult:
    """Ordered evaluation set plus the languages that could not compete."""

    selected: tuple[SelectedLanguage, ...]
    orphans: tuple[str, ...]

    @property
    def languages(self) -> tuple[str, ...]:
        return tuple(entry.language for entry in self.selected)


def select_languages(
    profiles: Mapping[str, LanguageProfile],
    premiums: Iterable[PremiumRecord] | Mapping[str, float],
    *,
    per_tier: int = 3,
    global_top: int = 5,
    premium_floor: float = 4.0,
    exclude: Sequence[str] = (REFERENCE_LANGUAGE,),
) -> SelectionResult:
    """Apply the tiered selection rules.

    Rules, in order: top `per_tier` premiums among low-income languages;
    top `per_tier` speaker populations among low-income languages paying at
    least `premium_floor`; the same two rules for the lower-middle tier;
    top `global_top` speaker populations overall. A language's tier is its
    own wealth class. The reference language is excluded by default since
    every premium is measured against it.
    """
    if per_tier < 0 or global_top < 0:
        raise ValidationError("rule sizes must be non-negative")
    by_language = premium_map(premiums)
    excluded = set(exclude)

    candidates: list[tuple[str, LanguageProfile, float]] = []
    orphans: list[str] = []
    for language in sorted(by_language):
        if language in excluded:
            continue
        profile = profiles.get(language)
        if profile is None:
            orphans.append(language)
            continue
        candidates.append((language, profile, by_language[language]))

    def tier(cls: IncomeClass) -> list[tuple[str, LanguageProfile, float]]:
        return [c for c in candidates if c[1].wealth_class is cls]

    def top_premium(pool, n):
        return sorted(pool, key=lambda c: (-c[2], c[0]))[:n]

    def top_population(pool, n):
        return sorted(pool, key=lambda c: (-c[1].total_speakers, c[0]))[:n]

    low = tier(IncomeClass.LOW)
    lower_middle = tier(IncomeClass.LOWER_MIDDLE)
    rules = (
        (RULE_LOW_PREMIUM, top_premium(low, per_tier)),
        (
            RULE_LOW_POPULATION,
            top_population([c for c in low if c[2] >= premium_floor], per_tier),
        ),
        (RULE_LM_PREMIUM, top_premium(lower_middle, per_tier)),
        (
            RULE_LM_POPULATION,
            top_population(
                [c for c in lower_middle if c[2] >= premium_floor], per_tier
            ),
        ),
        (RULE_GLOBAL_POPULATION, top_population(candidates, global_top)),
    )

    picked: dict[str, list[str]] = {}
    order: list[tuple[str, LanguageProfile, float]] = []
    for label, winners in rules:
        for candidate in winners:
            language = candidate[0]
            if language not in picked:
                picked[language] = []
                order.append(candidate)
            picked[language].append(label)

    selected = tuple(
        SelectedLanguage(
            language=language,
            wealth_class=profile.wealth_class,
            premium=premium,
            total_speakers=profile.total_speakers,
            rules=tuple(picked[language]),
        )
        for language, profile, premium in order
    )
    return SelectionResult(selected=selected, orphans=tuple(orphans))


def write_selection_report(result: SelectionResult, path: str | Path) -> None:
    """Write `language,wealth_class,premium,total_speakers,rules` rows.

    Rules are semicolon-joined in application order; rows keep selection
    order so the file doubles as the evaluation roster.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            ("language", "wealth_class", "premium", "total_speakers", "rules")
        )
        for entry in result.selected:
            writer.writerow(
                (
                    entry.language,
                    entry.wealth_class.value if entry.wealth_class else "",
                    f"{entry.premium:.4f}",
                    f"{entry.total_speakers:.2f}",
                    ";".join(entry.rules),
                )
            )
