"""Sanity-check the packaged demographic snapshot against the desk corpus.

Builds language profiles from data/demographics, computes cl100k premiums
from the corpus, buckets populations into premium bands per income class,
and verifies the totals the acceptance suite will assert.
"""
from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from tokequity.demographics import build_profiles, load_snapshot
from tokequity.tokenizer import builtin_table, count_tokens

CORPUS = REPO / "data" / "corpus" / "flores200p-desk"

BANDS = [
    (0.0, 1.0),
    (1.0, 2.0),
    (2.0, 4.0),
    (4.0, 6.0),
    (6.0, 8.0),
    (8.0, 10.0),
    (10.0, 16.0),
    (16.0, float("inf")),
]


def band_label(lo: float, hi: float) -> str:
    if hi == float("inf"):
        return "(16, inf)"
    if lo == 0.0:
        return "[0, 1]"
    return f"({lo:g}, {hi:g}]"


def band_of(p: float) -> tuple[float, float]:
    if p <= 1.0:
        return BANDS[0]
    for lo, hi in BANDS[1:]:
        if lo < p <= hi:
            return (lo, hi)
    raise AssertionError(p)


def main() -> None:
    table = builtin_table("cl100k_base")
    eng = (CORPUS / "eng_Latn.dev").read_text(encoding="utf-8").splitlines()
    eng_total = count_tokens(eng, table).total

    premiums: dict[str, float] = {}
    for path in sorted(CORPUS.glob("*.dev")):
        lang = path.stem.split("_")[0]
        sentences = path.read_text(encoding="utf-8").splitlines()
        premiums[lang] = count_tokens(sentences, table).total / eng_total

    speakers, series = load_snapshot(REPO / "data" / "demographics")
    by_lang = build_profiles(speakers, series)

    missing = sorted(set(premiums) - set(by_lang))
    orphans = sorted(set(by_lang) - set(premiums))
    print(f"languages: corpus={len(premiums)} snapshot={len(by_lang)}")
    print(f"no demographics: {missing}")
    print(f"no premium: {orphans}")

    # by-country-class aggregation: each country's adjusted speakers go to
    # that country's income class under the language's premium band
    cell: dict[tuple[str, str], float] = {}
    class_total: dict[str, float] = {}
    unclassified = 0.0
    grand = 0.0
    for lang, prof in by_lang.items():
        if lang not in premiums:
            continue
        lo, hi = band_of(premiums[lang])
        label = band_label(lo, hi)
        for country, speakers_adj in prof.adjusted_speakers_by_country.items():
            grand += speakers_adj
            s = series.get(country)
            if s is None or s.income_class is None:
                unclassified += speakers_adj
                continue
            cls = s.income_class.value
            cell[(cls, label)] = cell.get((cls, label), 0.0) + speakers_adj
            class_total[cls] = class_total.get(cls, 0.0) + speakers_adj

    print(f"\ngrand total speakers (corpus langs): {grand:,.0f}")
    print(f"unclassified mass: {unclassified:,.0f}")
    for cls in ("Low", "LowerMiddle", "UpperMiddle", "High"):
        print(f"\n{cls}: total {class_total.get(cls, 0.0):,.0f}")
        share_sum = 0.0
        for (c, label), mass in sorted(cell.items(), key=lambda kv: -kv[1]):
            if c != cls:
                continue
            share = mass / class_total[cls]
            share_sum += share
            print(f"  {label:>10}  {mass:>15,.0f}  {100 * share:6.2f}%")
        print(f"  share sum: {100 * share_sum:.4f}%")

    lm_target = cell.get(("LowerMiddle", "(4, 6]"), 0.0)
    ok = 1.2e9 <= lm_target <= 1.8e9
    print(f"\nLowerMiddle (4, 6] = {lm_target:,.0f}  in [1.2e9, 1.8e9]: {ok}")

    # mass conservation: classified + unclassified == grand
    assert abs((sum(class_total.values()) + unclassified) - grand) < 1e-6
    inf_band = sum(m for (c, label), m in cell.items() if label == "(16, inf)")
    print(f"(16, inf) mass: {inf_band:,.0f} (expect 0)")
    print("\nALL OK" if ok and inf_band == 0 else "\nPROBLEM")


if __name__ == "__main__":
    main()
