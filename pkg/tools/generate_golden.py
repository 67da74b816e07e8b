#!/usr/bin/env python3
"""Regenerate the pinned multilingual golden sample and its token ids.

Builds a deterministic 1,000-sentence sample spanning ~45 scripts plus
punctuation, numeric, emoji, and whitespace edge cases, then encodes it
with the tiktoken reference implementation (install the `oracle` extra)
using the bundled vocabulary files. Outputs land in data/golden/:

    multilingual-1000.json                the sentences
    multilingual-1000.<vocab>.ids.json    reference ids, one list per sentence

The committed outputs are frozen; rerunning must be a no-op unless the
sample definition below changes. Tests compare the package encoder against
these files, so never regenerate them with anything but the reference
implementation.
"""

from __future__ import annotations

import base64
import json
import random
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
OUT = REPO / "data" / "golden"

SEED = 20240822
TARGET = 1000

# One or more short sentences per language or symbol domain. Golden coverage
# only requires realistic byte diversity, not aligned meaning.
BANK = [
    # Latin-script European
    "The quick brown fox jumps over the lazy dog.",
    "She sells seashells by the seashore every summer morning.",
    "A government report published on Tuesday outlined new climate targets.",
    "Le renard brun saute par-dessus le chien paresseux.",
    "Les négociations ont repris mardi après une interruption de deux semaines.",
    "El zorro marrón salta sobre el perro perezoso.",
    "La economía creció un 3,2 % durante el último trimestre del año.",
    "Der schnelle braune Fuchs springt über den faulen Hund.",
    "Die Regierung kündigte gestern umfassende Reformen des Steuersystems an.",
    "O rápido cachorro castanho saltou por cima da cerca velha.",
    "Os cientistas anunciaram a descoberta de uma nova espécie de coral.",
    "La volpe marrone salta rapidamente sopra il cane pigro.",
    "Il consiglio comunale ha approvato il bilancio con una larga maggioranza.",
    "De snelle bruine vos springt over de luie hond heen.",
    "Szybki brązowy lis przeskakuje nad leniwym psem.",
    "Rychlá hnědá liška skáče přes líného psa.",
    "A gyors barna róka átugrik a lusta kutya fölött.",
    "Hızlı kahverengi tilki tembel köpeğin üzerinden atlar.",
    "Nopea ruskea kettu hyppää laiskan koiran yli.",
    "Den raske brune reven hopper over den late hunden.",
    "Vulpea brună sare repede peste câinele leneș.",
    "Nhanh chóng, con cáo nâu nhảy qua con chó lười biếng.",
    "Chính phủ đã công bố kế hoạch phát triển kinh tế mới vào hôm qua.",
    "Rubah cokelat yang cepat melompat di atas anjing yang malas.",
    "Mbweha mwepesi wa kahawia anaruka juu ya mbwa mvivu.",
    "Wannan harshe yana da muhimmanci ga al'ummar kasar gaba daya.",
    "Ede yìí ṣe pàtàkì fún àwọn ènìyàn orílẹ̀-èdè náà.",
    # Cyrillic, Greek, Armenian, Georgian
    "Быстрая коричневая лиса перепрыгивает через ленивую собаку.",
    "Правительство объявило о новой программе поддержки сельского хозяйства.",
    "Швидка руда лисиця перестрибує через ледачого пса.",
    "Бързата кафява лисица прескача мързеливото куче.",
    "Η γρήγορη καφέ αλεπού πηδά πάνω από τον τεμπέλη σκύλο.",
    "Το κοινοβούλιο ενέκρινε τον προϋπολογισμό του επόμενου έτους.",
    "Արագ շագանակագույն աղվեսը ցատկում է ծույլ շան վրայով։",
    "სწრაფი ყავისფერი მელა ხტება ზარმაც ძაღლზე.",
    # Semitic scripts
    "الثعلب البني السريع يقفز فوق الكلب الكسول.",
    "أعلنت الحكومة أمس عن خطة جديدة لتطوير التعليم في المناطق الريفية.",
    "השועל החום המהיר קופץ מעל הכלב העצלן.",
    "روباه قهوه‌ای سریع از روی سگ تنبل می‌پرد.",
    "تیز بھورا لومڑی سست کتے کے اوپر سے چھلانگ لگاتی ہے۔",
    "حکومت نے دیہی علاقوں میں تعلیم کی بہتری کے لیے نیا منصوبہ پیش کیا۔",
    "ቡናማው ፈጣን ቀበሮ በሰነፉ ውሻ ላይ ይዘላል።",
    # Indic scripts
    "तेज़ भूरी लोमड़ी आलसी कुत्ते के ऊपर से कूद जाती है।",
    "सरकार ने ग्रामीण क्षेत्रों में शिक्षा सुधार की नई योजना घोषित की।",
    "দ্রুত বাদামী শিয়াল অলস কুকুরের উপর দিয়ে লাফ দেয়।",
    "সরকার গতকাল নতুন অর্থনৈতিক কর্মসূচির ঘোষণা করেছে।",
    "வேகமான பழுப்பு நரி சோம்பேறி நாயின் மேல் குதிக்கிறது.",
    "வானிலை மையம் இன்று மாலை கனமழை பெய்யும் எனக் கணித்துள்ளது.",
    "వేగవంతమైన గోధుమ నక్క సోమరి కుక్కపై దూకుతుంది.",
    "ప్రభుత్వం కొత్త విద్యా విధానాన్ని ప్రకటించింది.",
    "ಕಂದು ಬಣ್ಣದ ನರಿ ಸೋಮಾರಿ ನಾಯಿಯ ಮೇಲೆ ಜಿಗಿಯುತ್ತದೆ.",
    "വേഗതയുള്ള തവിട്ടു കുറുക്കൻ മടിയനായ നായയുടെ മുകളിലൂടെ ചാടുന്നു.",
    "ଦ୍ରୁତ ବାଦାମୀ ବିଲୁଆ ଅଳସୁଆ କୁକୁର ଉପରେ ଡେଇଁଯାଏ।",
    "ସରକାର ନୂତନ ଶିକ୍ଷା ନୀତି ଘୋଷଣା କରିଛନ୍ତି।",
    "ਤੇਜ਼ ਭੂਰੀ ਲੂੰਬੜੀ ਆਲਸੀ ਕੁੱਤੇ ਦੇ ਉੱਪਰੋਂ ਛਾਲ ਮਾਰਦੀ ਹੈ।",
    "ઝડપી ભૂરી શિયાળ આળસુ કૂતરા પર કૂદી જાય છે.",
    "वेगवान तपकिरी कोल्हा आळशी कुत्र्यावरून उडी मारतो.",
    "চঞ্চল মটিয়া শিয়ালটোৱে এলেহুৱা কুকুৰটোৰ ওপৰেদি জাপ মাৰে।",
    "වේගවත් දුඹුරු නරියා කම්මැලි බල්ලා උඩින් පනියි.",
    "छिटो खैरो फ्याउरो अल्छी कुकुरमाथि हाम फाल्छ।",
    # Tibetan, Dzongkha
    "མགྱོགས་པོའི་ཝ་སྨུག་པོ་དེ་ཁྱི་ལེ་ལོ་ཅན་གྱི་སྒང་ལ་མཆོངས།",
    "འབྲུག་གི་རྒྱལ་ཁབ་ནང་སློབ་གྲྭ་གསར་པ་མང་པོ་བཞེངས་ཡོད།",
    # CJK
    "敏捷的棕色狐狸跳过了那只懒惰的狗。",
    "政府昨天宣布了一项新的农村教育发展计划。",
    "素早い茶色の狐が怠け者の犬を飛び越えた。",
    "気象庁は今夜から明朝にかけて大雨を予報している。",
    "빠른 갈색 여우가 게으른 개를 뛰어넘는다.",
    "정부는 어제 새로운 교육 정책을 발표했다.",
    # Southeast Asian scripts
    "สุนัขจิ้งจอกสีน้ำตาลกระโดดข้ามสุนัขขี้เกียจอย่างรวดเร็ว",
    "รัฐบาลประกาศแผนพัฒนาเศรษฐกิจฉบับใหม่เมื่อวานนี้",
    "ມ້າໄວສີນ້ຳຕານໂດດຂ້າມໝາຂີ້ຄ້ານຕົວນັ້ນ",
    "ការប្រកួតបាល់ទាត់នឹងប្រព្រឹត្តទៅនៅល្ងាចថ្ងៃសៅរ៍នេះ។",
    "မြန်ဆန်သော အညိုရောင်မြေခွေးသည် ပျင်းရိသောခွေးကို ခုန်ကျော်သွားသည်။",
    "ၶၢဝ်းတၢင်းၼႆႉ ၵူၼ်းမိူင်းတင်းၼမ် ဢွၼ်ၵၼ်ႁူမ်ၸူမ်းယူႇယဝ်ႉ။",
    # Ol Chiki, Tifinagh, N'Ko
    "ᱥᱟᱱᱛᱟᱲᱤ ᱯᱟᱹᱨᱥᱤ ᱫᱚ ᱚᱞ ᱪᱤᱠᱤ ᱛᱮ ᱚᱞᱚᱜ ᱠᱟᱱᱟ᱾",
    "ᱢᱤᱫ ᱢᱟᱹᱨᱤ ᱜᱟᱫᱟ ᱟᱲᱮ ᱨᱮ ᱢᱤᱫ ᱟᱛᱳ ᱢᱮᱱᱟᱜᱼᱟ᱾",
    "ⵜⴰⵎⴰⵣⵉⵖⵜ ⵜⴳⴰ ⵜⵓⵜⵍⴰⵢⵜ ⵏ ⵉⵎⴰⵣⵉⵖⵏ ⵏ ⵓⴳⴰⴼⴰ ⵏ ⵉⴼⵔⵉⵇⵢⴰ.",
    "ߒߞߏ ߦߋ߫ ߞߊ߲ߜߍ ߘߏ߫ ߟߋ߬ ߘߌ߫ ߡߍ߲ ߦߋ߫ ߛߓߍߟߌ ߞߍ߫ ߟߊ߫.",
    # African Latin-script with diacritics
    "Ɛsɔ tɩŋa kpelem kɛlɛm kɛlɛm nɛ pɩwɛɛ kele kele.",
    "Thok naath ɛ thok in ŋuan ɛ jiäk in dit ke kuic Sudan.",
    "Awal n tmazight yella deg yidurar n waṭlas wammas.",
    # Misc technical and symbol-heavy lines
    "E = mc^2, and pi is approximately 3.14159265358979.",
    "Order #4821-B shipped on 2024-03-15 at 14:32 UTC (tracking: XK-99-031).",
    "def tokenize(text): return [t for t in text.split() if t]",
    "SELECT name, count(*) FROM users GROUP BY name HAVING count(*) > 10;",
    "Visit https://example.org/path?query=value&lang=en#section for details.",
    "Mixed math: ∑(x_i · y_i) ≤ √(∑x_i²) × √(∑y_i²) holds ∀ vectors.",
    "Chess openings: 1. e4 e5 2. Nf3 Nc6 3. Bb5 a6 4. Ba4 Nf6 5. O-O.",
    "Prices: $19.99, €18,50, £16.75, ¥2,980, ₹1,499.00, ₦8,200.",
    "The 🦊 jumped over the 🐕 while 👨‍👩‍👧‍👦 watched from 🏠.",
    "Emoji run: 😀😃😄😁😆😅😂🤣 and flags 🇧🇹🇮🇳🇳🇬🇵🇪🇫🇷.",
    "Warning ⚠️ temperature ≥ 100°C → shutdown within ≈5 s!",
    "«Quotes», „Gänsefüßchen“, 「かぎかっこ」, ‹single›, and \"plain\".",
    "Tab\tseparated\tfields\tneed\tcare.",
    "Hyphenation test: state-of-the-art re-evaluation entered mid-2020s usage.",
    "CamelCaseIdentifiers and snake_case_names and SCREAMING_CONSTANTS coexist.",
    "A líne with  double  spaces and a trailing blank ",
    "   Leading whitespace survives tokenization intact.",
    "<|endoftext|> appears here as ordinary text, not a control token.",
    "Roman numerals: MMXXIV equals 2024, MCMXCIX equals 1999.",
    "Accented stack: àéîõü ç ñ ż ę ő ș ø å æ œ ß þ ð.",
    "Phonetics: [ˈtoʊkənaɪˌzeɪʃən] vs /fɹæɡmənˈteɪʃən/.",
    "Currency pairs EUR/USD 1.0842, USD/JPY 149.31, GBP/CHF 1.1205.",
]

WRAPPERS = [
    lambda s, r: s,
    lambda s, r: s + " " + r.choice(["Indeed.", "C'est vrai.", "確かに。", "بالفعل.", "Так و есть."]),
    lambda s, r: f"{r.randint(1, 99)}. {s}",
    lambda s, r: f"«{s}»",
    lambda s, r: f"\"{s}\"",
    lambda s, r: s + f" ({r.randint(1900, 2030)})",
    lambda s, r: f"  {s}",
    lambda s, r: s + "   ",
    lambda s, r: s.upper() if s.upper() != s and s.isascii() else f"– {s}",
    lambda s, r: f"{s}\t[{r.randint(0, 9999):04d}]",
]


def build_sample() -> list[str]:
    rng = random.Random(SEED)
    sample: list[str] = list(BANK)
    seen = set(sample)
    while len(sample) < TARGET:
        roll = rng.random()
        if roll < 0.70:
            s = WRAPPERS[rng.randrange(len(WRAPPERS))](rng.choice(BANK), rng)
        elif roll < 0.90:
            a, b = rng.sample(BANK, 2)
            s = a + rng.choice([" ", " / ", "  ", " — ", "\t"]) + b
        else:
            digits = "".join(rng.choice("0123456789") for _ in range(rng.randint(3, 12)))
            s = rng.choice(BANK) + f" ref:{digits}"
        if s not in seen:
            seen.add(s)
            sample.append(s)
    return sample


def reference_encoder(manifest_path: Path):
    import tiktoken

    spec = json.loads(manifest_path.read_text("utf-8"))
    ranks: dict[bytes, int] = {}
    with open(manifest_path.parent / spec["vocabulary"], "rb") as fh:
        for line in fh:
            tok, rank = line.split()
            ranks[base64.b64decode(tok)] = int(rank)
    return tiktoken.Encoding(
        name=spec["name"],
        pat_str=spec["pattern"],
        mergeable_ranks=ranks,
        special_tokens={str(k): int(v) for k, v in spec["special_tokens"].items()},
    )


def main() -> int:
    sample = build_sample()
    assert len(sample) == TARGET and len(set(sample)) == TARGET
    OUT.mkdir(parents=True, exist_ok=True)
    sample_path = OUT / "multilingual-1000.json"
    sample_path.write_text(
        json.dumps(sample, ensure_ascii=False, indent=0) + "\n", "utf-8"
    )
    print(f"wrote {sample_path}")

    vocab_dir = REPO / "src" / "tokequity" / "data" / "vocab"
    for name in ("cl100k_base", "o200k_base"):
        enc = reference_encoder(vocab_dir / f"{name}.json")
        ids = [enc.encode(s, disallowed_special=()) for s in sample]
        ids_path = OUT / f"multilingual-1000.{name}.ids.json"
        ids_path.write_text(json.dumps(ids, separators=(",", ":")) + "\n", "utf-8")
        total = sum(len(row) for row in ids)
        print(f"wrote {ids_path} ({total} tokens)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
