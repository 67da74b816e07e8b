"""Who pays tokenization premiums, and what they cost in compute.

Populations are bucketed into premium bands per income class, mirroring the
stacked-bar view of affected speakers. Compute cost uses the standard
inference estimate of two FLOPs per parameter per token, which makes the
premium itself the FLOP multiplier for semantically equivalent content.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .demographics import IncomeClass, LanguageProfile
from .errors import ValidationError
from .premium import PremiumRecord, premium_map

MODE_BY_COUNTRY_CLASS = "by-country-class"
MODE_BY_LANGUAGE_CLASS = "by-language-class"


@dataclass(frozen=True)
class PremiumBand:
    """One reporting bucket of premium values.

    Bands are lower-exclusive and upper-inclusive, except the first, which
    is closed so a premium of exactly 1 (English) lands in the lowest band.
    """

    lower: float
    upper: float
    label: str

    def contains(self, premium: float) -> bool:
        if self.lower == 0.0:
            return 0.0 <= premium <= self.upper
        return self.lower < premium <= self.upper


BANDS: tuple[PremiumBand, ...] = (
    PremiumBand(0.0, 1.0, "[0,1]"),
    PremiumBand(1.0, 2.0, "(1,2]"),
    PremiumBand(2.0, 4.0, "(2,4]"),
    PremiumBand(4.0, 6.0, "(4,6]"),
    PremiumBand(6.0, 8.0, "(6,8]"),
    PremiumBand(8.0, 10.0, "(8,10]"),
    PremiumBand(10.0, 16.0, "(10,16]"),
    PremiumBand(16.0, math.inf, "(16,inf)"),
)


def band_of(premium: float) -> PremiumBand:
    """The unique band containing a positive premium."""
    if premium <= 0:
        raise ValidationError(f"non-positive premium {premium}")
    for band in BANDS:
        if band.contains(premium):
            return band
    raise AssertionError(f"bands do not cover {premium}")


@dataclass(frozen=True)
class ImpactCell:
    """Population of one income class inside one premium band."""

    income_class: IncomeClass
    band: PremiumBand
    population: float
    share: float

    def __post_init__(self) -> None:
        if self.population < 0:
            raise ValidationError(
                f"{self.income_class.value}/{self.band.label}: negative population"
            )


@dataclass(frozen=True)
class DistributionResult:
    """Full class-by-band population matrix plus unattributed residuals.

    Cells cover every class and band, zero-populated ones included.
    Orphans are languages that arrived with a premium but no profile;
    unattributed_population is speaker mass whose income class could not
    be resolved. Neither is folded into the matrix.
    """

    mode: str
    cells: tuple[ImpactCell, ...]
    orphans: tuple[str, ...]
    unattributed_population: float

    def cell(self, income_class: IncomeClass, band: PremiumBand) -> ImpactCell:
        for cell in self.cells:
            if cell.income_class is income_class and cell.band == band:
                return cell
        raise KeyError((income_class, band.label))

    def class_total(self, income_class: IncomeClass) -> float:
        return sum(c.population for c in self.cells if c.income_class is income_class)

    @property
    def total_population(self) -> float:
        return sum(c.population for c in self.cells)


def population_distribution(
    profiles: Mapping[str, LanguageProfile],
    premiums: Iterable[PremiumRecord] | Mapping[str, float],
    mode: str = MODE_BY_COUNTRY_CLASS,
    class_of_country: Mapping[str, IncomeClass | None] | None = None,
) -> DistributionResult:
    """Bucket speakers into premium bands per income class.

    by-country-class splits each language across the income classes of the
    countries where it is spoken (the figure semantics); by-language-class
    attributes all speakers to the language's own wealth class. Languages
    with premiums but no profile become orphans; speaker mass without a
    resolvable class is reported, never silently dropped.
    """
    if mode not in (MODE_BY_COUNTRY_CLASS, MODE_BY_LANGUAGE_CLASS):
        raise ValidationError(f"unknown distribution mode {mode!r}")
    if mode == MODE_BY_COUNTRY_CLASS and class_of_country is None:
        raise ValidationError("by-country-class mode needs class_of_country")

    by_language = premium_map(premiums)
    mass: dict[tuple[IncomeClass, str], float] = {}
    orphans: list[str] = []
    unattributed = 0.0

    for language in sorted(by_language):
        premium = by_language[language]
        band = band_of(premium)
        profile = profiles.get(language)
        if profile is None:
            orphans.append(language)
            continue
        if mode == MODE_BY_COUNTRY_CLASS:
            for country, speakers in profile.adjusted_speakers_by_country.items():
                cls = class_of_country.get(country)
                if cls is None:
                    unattributed += speakers
                    continue
                key = (cls, band.label)
                mass[key] = mass.get(key, 0.0) + speakers
        else:
            if profile.wealth_class is None:
                unattributed += profile.total_speakers
                continue
            key = (profile.wealth_class, band.label)
            mass[key] = mass.get(key, 0.0) + profile.total_speakers

    class_totals = {
        cls: sum(mass.get((cls, band.label), 0.0) for band in BANDS)
        for cls in IncomeClass
    }
    cells = []
    for cls in IncomeClass:
        for band in BANDS:
            population = mass.get((cls, band.label), 0.0)
            total = class_totals[cls]
            share = population / total if total > 0 else 0.0
            cells.append(
                ImpactCell(
                    income_class=cls, band=band, population=population, share=share
                )
            )
    return DistributionResult(
        mode=mode,
        cells=tuple(cells),
        orphans=tuple(orphans),
        unattributed_population=unattributed,
    )


@dataclass(frozen=True)
class InferenceCostEstimate:
    """Forward-pass FLOPs for P non-embedding parameters over D tokens."""

    params_P: int
    tokens_D: int
    flops: int


def inference_flops(params_P: int, tokens_D: int) -> InferenceCostEstimate:
    """Estimate inference compute as 2·P·D."""
    if params_P <= 0 or tokens_D <= 0:
        raise ValidationError(
            f"parameter and token counts must be positive, got {params_P} and {tokens_D}"
        )
    return InferenceCostEstimate(
        params_P=params_P, tokens_D=tokens_D, flops=2 * params_P * tokens_D
    )


def fragmentation_multiplier(premium: float) -> float:
    """FLOP multiplier of a premium for semantically equivalent content.

    With cost 2·P·D and D scaled by the premium, the multiplier is the
    premium itself.
    """
    if premium <= 0:
        raise ValidationError(f"non-positive premium {premium}")
    return float(premium)


def write_impact_report(result: DistributionResult, path: str | Path) -> None:
    """Write the matrix as `income_class,band_label,population,share`.

    All 32 cells are emitted in class-then-band order with fixed float
    formatting, so equal results serialize byte-identically.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("income_class", "band_label", "population", "share"))
        for cell in result.cells:
            writer.writerow(
                (
                    cell.income_class.value,
                    cell.band.label,
                    f"{cell.population:.2f}",
                    f"{cell.share:.6f}",
                )
            )


def plot_data(result: DistributionResult) -> dict:
    """Stacked-bar series: one entry per income class, values per band."""
    return {
        "mode": result.mode,
        "bands": [band.label for band in BANDS],
        "series": [
            {
                "income_class": cls.value,
                "populations": [
                    result.cell(cls, band).population for band in BANDS
                ],
                "shares": [result.cell(cls, band).share for band in BANDS],
            }
            for cls in IncomeClass
        ],
        "orphans": list(result.orphans),
        "unattributed_population": result.unattributed_population,
    }


def write_plot_data(result: DistributionResult, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = json.dumps(plot_data(result), indent=2)
    path.write_text(payload + "\n", encoding="utf-8")
