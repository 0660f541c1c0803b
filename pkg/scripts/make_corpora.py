"""Regenerate the bundled trilingual mini-corpora under data/mini/.

Produces three synthetic, deterministic corpora of 1000 utterances each:
Latin-script (en), Hangul-script (ko) and Han-script (zh). Word shapes,
frequencies and the occasional embedded digits or Latin acronyms are
sampled from small built-in inventories with a fixed seed, so the files
are reproducible byte for byte. All characters stay inside the basic
multilingual plane.

Usage: python scripts/make_corpora.py [OUTDIR]
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

SEED = 20240601
LINES_PER_CORPUS = 1000

EN_WORDS = """
the of and to a in is it you that he was for on are with as his they be at
one have this from or had by hot word but what some we can out other were
all there when up use your how said an each she which do their time if will
way about many then them write would like so these her long make thing see
him two has look more day could go come did number sound no most people my
over know water than call first who may down side been now find any new work
part take get place made live where after back little only round man year
came show every good me give our under name very through just form sentence
great think say help low line differ turn cause much mean before move right
boy old too same tell does set three want air well also play small end put
home read hand port large spell add even land here must big high such follow
act why ask men change went light kind off need house picture try us again
animal point mother world near build self earth father head stand own page
should country found answer school grow study still learn plant cover food
sun four between state keep eye never last let thought city tree cross farm
hard start might story saw far sea draw left late run don't while press
close night real life few north open seem together next white children begin
got walk example ease paper group always music those both mark often letter
until mile river car feet care second book carry took science eat room
friend began idea fish mountain stop once base hear horse cut sure watch
color face wood main enough plain girl usual young ready above ever red list
though feel talk bird soon body dog family direct pose leave song measure
door product black short numeral class wind question happen complete ship
area half rock order fire south problem piece told knew pass since top whole
king space heard best hour better true during hundred five remember step
early hold west ground interest reach fast verb sing listen six table travel
less morning ten simple several vowel toward war lay against pattern slow
center love person money serve appear road map rain rule govern pull cold
notice voice unit power town fine certain fly fall lead cry dark machine
note wait plan figure star box noun field rest correct able pound done
beauty drive stood contain front teach week final gave green oh quick
develop ocean warm free minute strong special mind behind clear tail
""".split()

# Common Hangul jamo indices for composed syllables (see Unicode Hangul
# syllable arithmetic): onset L in 0..18, vowel V in 0..20, coda T in 0..27.
KO_ONSETS = [0, 2, 3, 5, 6, 7, 9, 11, 12, 14, 15, 16, 17, 18]
KO_ONSET_WEIGHTS = [9, 6, 7, 6, 6, 6, 8, 12, 8, 3, 2, 3, 2, 7]
KO_VOWELS = [0, 1, 4, 5, 6, 8, 13, 18, 20]
KO_VOWEL_WEIGHTS = [14, 4, 9, 4, 5, 8, 7, 9, 11]
KO_CODAS = [0, 1, 4, 8, 16, 17, 21]
KO_CODA_WEIGHTS = [52, 5, 12, 9, 6, 4, 12]

ZH_CHARS = (
    "的一是不了人我在有他这为之大来以个中上们到说国和地也子时道出而要于就下得可你年生"
    "自会那后能对着事其里所去行过家十用发天如然作方成者多日都三小军二无同么经法当起与好"
    "看学进种将还分此心前面又定见只主没公从问使明力尔把等产或新己制身果加西斯月话合回特"
    "代内信表化老给世位次度门任常先海通教儿原东声提立及比员解水名真论处走义各入几口认条"
    "平系气题活尔更别打女变四神总何电数安少报才结反受目太量再感建务做接必场件计管期市直"
    "德资命山金指克许统区保至队形社便空决治展马科司五基眼书非则听白却界达光放强即像难且"
    "权思王象完设式色路记南品住告类求据程北边死张该交规万取拉格望觉术领共确传师观清今切"
    "院让识候带导争运笑飞风步改收根干造言联持组每济车亲极林服快办议往元英士证近失转夫令"
    "准布始怎呢存未远叫台单影具罗字爱击流备兵连调深商算质团集百需价花党华城石级整府离况"
)

KO_ACRONYMS = ["TV", "PC", "AI", "OK", "KTX"]
ZH_ACRONYMS = ["AI", "GDP", "APP", "GPS"]


def hangul(onset: int, vowel: int, coda: int) -> str:
    return chr(0xAC00 + (onset * 21 + vowel) * 28 + coda)


def zipf_choice(rng: random.Random, items: list, power: float = 1.0):
    weights = [1.0 / (rank + 3) ** power for rank in range(len(items))]
    return rng.choices(items, weights=weights)[0]


def korean_lexicon(rng: random.Random, size: int = 900) -> list[str]:
    words = set()
    out = []
    while len(out) < size:
        n = rng.choices([1, 2, 3, 4], weights=[15, 42, 30, 13])[0]
        word = "".join(
            hangul(
                rng.choices(KO_ONSETS, weights=KO_ONSET_WEIGHTS)[0],
                rng.choices(KO_VOWELS, weights=KO_VOWEL_WEIGHTS)[0],
                rng.choices(KO_CODAS, weights=KO_CODA_WEIGHTS)[0],
            )
            for _ in range(n)
        )
        if word not in words:
            words.add(word)
            out.append(word)
    return out


def chinese_lexicon(rng: random.Random, size: int = 700) -> list[str]:
    chars = list(ZH_CHARS)
    words = set()
    out = []
    while len(out) < size:
        n = rng.choices([1, 2, 3], weights=[30, 55, 15])[0]
        word = "".join(zipf_choice(rng, chars, power=0.8) for _ in range(n))
        if word not in words:
            words.add(word)
            out.append(word)
    return out


def number_token(rng: random.Random) -> str:
    kind = rng.choices(["single", "double", "year"], weights=[60, 30, 10])[0]
    if kind == "single":
        return str(rng.randint(0, 9))
    if kind == "double":
        return str(rng.randint(10, 99))
    return str(rng.randint(1980, 2029))


def english_lines(rng: random.Random) -> list[str]:
    lines = []
    for _ in range(LINES_PER_CORPUS):
        words = [zipf_choice(rng, EN_WORDS) for _ in range(rng.randint(6, 13))]
        if rng.random() < 0.10:
            words.insert(rng.randrange(len(words)), number_token(rng))
        lines.append(" ".join(words))
    return lines


def korean_lines(rng: random.Random) -> list[str]:
    lexicon = korean_lexicon(rng)
    lines = []
    for _ in range(LINES_PER_CORPUS):
        words = [zipf_choice(rng, lexicon) for _ in range(rng.randint(4, 9))]
        if rng.random() < 0.08:
            words.insert(rng.randrange(len(words)), number_token(rng))
        if rng.random() < 0.015:
            words.insert(rng.randrange(len(words)), rng.choice(KO_ACRONYMS))
        lines.append(" ".join(words))
    return lines


def chinese_lines(rng: random.Random) -> list[str]:
    lexicon = chinese_lexicon(rng)
    lines = []
    for _ in range(LINES_PER_CORPUS):
        chunks = [zipf_choice(rng, lexicon) for _ in range(rng.randint(6, 13))]
        line = "".join(chunks)
        # Embedded Latin/digits are space-delimited islands in the Han text.
        if rng.random() < 0.08:
            cut = rng.randrange(1, len(line))
            line = f"{line[:cut]} {number_token(rng)} {line[cut:]}"
        elif rng.random() < 0.02:
            cut = rng.randrange(1, len(line))
            line = f"{line[:cut]} {rng.choice(ZH_ACRONYMS)} {line[cut:]}"
        lines.append(line)
    return lines


def main() -> None:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data/mini")
    outdir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    for name, lines in [
        ("en", english_lines(rng)),
        ("ko", korean_lines(rng)),
        ("zh", chinese_lines(rng)),
    ]:
        assert len(lines) == LINES_PER_CORPUS
        assert all(lines), "no empty utterances"
        assert all(max(map(ord, line)) <= 0xFFFF for line in lines), "BMP only"
        path = outdir / f"{name}.txt"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {path} ({len(lines)} lines)")


if __name__ == "__main__":
    main()
