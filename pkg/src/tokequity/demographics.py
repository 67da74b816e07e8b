"""Per-language socio-economic indicators from speaker and country data.

Speaker counts carry a reference year; counts older than the 2022 horizon
are brought forward by compounding the country's annual population growth.
Per-language indicators are population-weighted over the countries where
the language is spoken: total speakers, weighted GDP per capita, the income
class distribution of speakers, and a wealth class assigned from weighted
GDP via fixed thresholds.

Countries missing an indicator are dropped from both the numerator and the
denominator of that indicator only; they still count toward speaker totals.
Missing growth years inside a compounding range are a hard error rather
than an imputation.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DataGapError, ValidationError

HORIZON_YEAR = 2022

# Growth rates outside this band almost certainly indicate unit confusion
# (percent fed where a fraction is expected).
GROWTH_SANITY_BAND = (-0.2, 0.2)


class IncomeClass(enum.Enum):
    """World Bank style four-way income classification."""

    LOW = "Low"
    LOWER_MIDDLE = "LowerMiddle"
    UPPER_MIDDLE = "UpperMiddle"
    HIGH = "High"


# Per-capita GDP thresholds (current USD). The published integer bands leave
# gaps like (1145, 1146) unassigned; midpoint closure makes every real
# classifiable without moving any integer example.
WEALTH_THRESHOLDS = (
    (1145.5, IncomeClass.LOW),
    (4515.5, IncomeClass.LOWER_MIDDLE),
    (14005.5, IncomeClass.UPPER_MIDDLE),
)

_CLASS_ALIASES = {
    "low": IncomeClass.LOW,
    "lowermiddle": IncomeClass.LOWER_MIDDLE,
    "uppermiddle": IncomeClass.UPPER_MIDDLE,
    "high": IncomeClass.HIGH,
}


def parse_income_class(text: str) -> IncomeClass:
    """Parse an income class name, tolerating case, spaces, and hyphens."""
    key = text.strip().lower().replace("-", "").replace("_", "").replace(" ", "")
    key = key.removesuffix("income")
    if key not in _CLASS_ALIASES:
        raise ValidationError(f"unknown income class {text!r}")
    return _CLASS_ALIASES[key]


@dataclass(frozen=True)
class SpeakerRecord:
    """Speakers of one language in one country, counted in ref_year."""

    language: str
    country: str
    count: int
    ref_year: int | None = None

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValidationError(
                f"{self.language}/{self.country}: negative speaker count {self.count}"
            )
        if self.ref_year is not None and not 1900 <= self.ref_year <= 2100:
            raise ValidationError(
                f"{self.language}/{self.country}: implausible ref_year {self.ref_year}"
            )


@dataclass(frozen=True)
class CountrySeries:
    """Per-country data: growth rates by year, 2022 GDP, income class."""

    country: str
    growth: Mapping[int, float]
    gdp_pc_2022: float | None = None
    income_class: IncomeClass | None = None

    def __post_init__(self) -> None:
        lo, hi = GROWTH_SANITY_BAND
        for year, rate in self.growth.items():
            if not lo < rate < hi:
                raise ValidationError(
                    f"{self.country}: growth rate {rate} for {year} outside "
                    f"sanity band ({lo}, {hi}); expected a fraction, not percent"
                )
        if self.gdp_pc_2022 is not None and self.gdp_pc_2022 < 0:
            raise ValidationError(f"{self.country}: negative GDP per capita")


@dataclass(frozen=True)
class LanguageProfile:
    """Aggregated indicators for one language.

    weighted_gdp, income_vector, and wealth_class are None when no country
    with the needed data contributes; such languages stay in the output with
    indicators marked unavailable rather than disappearing.
    """

    language: str
    adjusted_speakers_by_country: Mapping[str, float]
    total_speakers: float
    weighted_gdp: float | None
    income_vector: Mapping[IncomeClass, float] | None
    wealth_class: IncomeClass | None


def adjust_speakers(
    record: SpeakerRecord, series: CountrySeries, horizon: int = HORIZON_YEAR
) -> float:
    """Bring a dated speaker count forward to the horizon year.

    Counts referenced at or after the horizon, or with no reference year,
    pass through unchanged. Older counts compound the country's annual
    growth over ref_year+1 .. horizon.
    """
    if record.ref_year is None or record.ref_year >= horizon:
        return float(record.count)
    value = float(record.count)
    for year in range(record.ref_year + 1, horizon + 1):
        if year not in series.growth:
            raise DataGapError(
                f"{record.language}/{record.country}: no growth rate for {year} "
                f"(needed to adjust a {record.ref_year} count to {horizon})"
            )
        value *= 1.0 + series.growth[year]
    return value


def total_speakers(adjusted: Mapping[str, float]) -> float:
    """Sum adjusted per-country speaker counts."""
    if not adjusted:
        raise DataGapError("language has no speaker data")
    for country, value in adjusted.items():
        if value < 0:
            raise ValidationError(f"{country}: negative adjusted count {value}")
    return float(sum(adjusted.values()))


def weighted_gdp(
    adjusted: Mapping[str, float], gdp: Mapping[str, float | None]
) -> float:
    """Speaker-weighted mean GDP per capita over countries with GDP data."""
    num = 0.0
    den = 0.0
    for country, speakers in adjusted.items():
        value = gdp.get(country)
        if value is None or speakers <= 0:
            continue
        num += speakers * value
        den += speakers
    if den == 0:
        raise DataGapError("no contributing country has GDP data")
    return num / den


def income_vector(
    adjusted: Mapping[str, float], classes: Mapping[str, IncomeClass | None]
) -> dict[IncomeClass, float]:
    """Fraction of speakers in each income class, over classifiable countries."""
    mass: dict[IncomeClass, float] = {cls: 0.0 for cls in IncomeClass}
    total = 0.0
    for country, speakers in adjusted.items():
        cls = classes.get(country)
        if cls is None or speakers <= 0:
            continue
        mass[cls] += speakers
        total += speakers
    if total == 0:
        raise DataGapError("no contributing country has an income class")
    return {cls: value / total for cls, value in mass.items()}


def classify_wealth(w: float) -> IncomeClass:
    """Wealth class of a weighted GDP per capita value."""
    if w < 0:
        raise ValidationError(f"negative weighted GDP {w}")
    for upper, cls in WEALTH_THRESHOLDS:
        if w < upper:
            return cls
    return IncomeClass.HIGH


def build_profile(
    language: str,
    records: Iterable[SpeakerRecord],
    series_by_country: Mapping[str, CountrySeries],
    horizon: int = HORIZON_YEAR,
) -> LanguageProfile:
    """Adjust, aggregate, and classify one language's speaker records.

    A record for a country with no CountrySeries at all is accepted when it
    needs no growth adjustment; the country then simply lacks GDP and class
    data. Indicators that cannot be computed come back as None.
    """
    adjusted: dict[str, float] = {}
    for record in records:
        if record.language != language:
            raise ValidationError(
                f"record for {record.language!r} passed to profile of {language!r}"
            )
        series = series_by_country.get(record.country)
        if series is None:
            series = CountrySeries(country=record.country, growth={})
        value = adjust_speakers(record, series, horizon)
        adjusted[record.country] = adjusted.get(record.country, 0.0) + value

    total = total_speakers(adjusted)

    gdp_map = {
        country: series_by_country[country].gdp_pc_2022
        for country in adjusted
        if country in series_by_country
    }
    class_map = {
        country: series_by_country[country].income_class
        for country in adjusted
        if country in series_by_country
    }
    try:
        gdp = weighted_gdp(adjusted, gdp_map)
    except DataGapError:
        gdp = None
    try:
        vector: Mapping[IncomeClass, float] | None = income_vector(adjusted, class_map)
    except DataGapError:
        vector = None

    return LanguageProfile(
        language=language,
        adjusted_speakers_by_country=adjusted,
        total_speakers=total,
        weighted_gdp=gdp,
        income_vector=vector,
        wealth_class=classify_wealth(gdp) if gdp is not None else None,
    )


def build_profiles(
    records: Iterable[SpeakerRecord],
    series_by_country: Mapping[str, CountrySeries],
    horizon: int = HORIZON_YEAR,
) -> dict[str, LanguageProfile]:
    """Group speaker records by language and build every profile."""
    by_language: dict[str, list[SpeakerRecord]] = {}
    for record in records:
        by_language.setdefault(record.language, []).append(record)
    return {
        language: build_profile(language, recs, series_by_country, horizon)
        for language, recs in sorted(by_language.items())
    }


def _read_rows(path: Path, required: tuple[str, ...]) -> Iterable[dict[str, str]]:
    try:
        handle = path.open(encoding="utf-8", newline="")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}")
    with handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [col for col in required if col not in header]
        if missing:
            raise ValidationError(
                f"{path}: missing required column(s) {', '.join(missing)}"
            )
        yield from reader


def load_speakers(path: str | Path) -> list[SpeakerRecord]:
    """Read a `language,country,count,ref_year` CSV (ref_year may be blank)."""
    path = Path(path)
    records = []
    for lineno, row in enumerate(
        _read_rows(path, ("language", "country", "count", "ref_year")), start=2
    ):
        try:
            year_text = (row["ref_year"] or "").strip()
            records.append(
                SpeakerRecord(
                    language=row["language"].strip(),
                    country=row["country"].strip(),
                    count=int(row["count"]),
                    ref_year=int(year_text) if year_text else None,
                )
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}")
    if not records:
        raise ValidationError(f"{path}: no speaker records")
    return records


def load_growth(path: str | Path) -> dict[str, dict[int, float]]:
    """Read a long-format `country,year,pop_growth_pct` CSV into fractions."""
    path = Path(path)
    growth: dict[str, dict[int, float]] = {}
    for lineno, row in enumerate(
        _read_rows(path, ("country", "year", "pop_growth_pct")), start=2
    ):
        try:
            country = row["country"].strip()
            year = int(row["year"])
            rate = float(row["pop_growth_pct"]) / 100.0
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}")
        series = growth.setdefault(country, {})
        if year in series:
            raise ValidationError(f"{path}:{lineno}: duplicate growth for {country} {year}")
        series[year] = rate
    return growth


def load_economy(
    path: str | Path,
) -> dict[str, tuple[float | None, IncomeClass | None]]:
    """Read a `country,gdp_pc_2022,income_class` CSV; blanks mean unknown."""
    path = Path(path)
    economy: dict[str, tuple[float | None, IncomeClass | None]] = {}
    for lineno, row in enumerate(
        _read_rows(path, ("country", "gdp_pc_2022", "income_class")), start=2
    ):
        country = row["country"].strip()
        if country in economy:
            raise ValidationError(f"{path}:{lineno}: duplicate country {country}")
        gdp_text = (row["gdp_pc_2022"] or "").strip()
        class_text = (row["income_class"] or "").strip()
        try:
            gdp = float(gdp_text) if gdp_text else None
        except ValueError as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}")
        cls = parse_income_class(class_text) if class_text else None
        economy[country] = (gdp, cls)
    return economy


def load_snapshot(
    directory: str | Path,
) -> tuple[list[SpeakerRecord], dict[str, CountrySeries]]:
    """Load the three-file demographic snapshot from a directory.

    Expects speakers.csv, growth.csv, and economy.csv. Countries appearing
    only in growth.csv still get a series (without GDP or class).
    """
    directory = Path(directory)
    speakers = load_speakers(directory / "speakers.csv")
    growth = load_growth(directory / "growth.csv")
    economy = load_economy(directory / "economy.csv")

    series: dict[str, CountrySeries] = {}
    for country in sorted(set(growth) | set(economy)):
        gdp, cls = economy.get(country, (None, None))
        series[country] = CountrySeries(
            country=country,
            growth=growth.get(country, {}),
            gdp_pc_2022=gdp,
            income_class=cls,
        )
    return speakers, series
