import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "mini"

# Character pools for randomized multilingual text: ASCII, Hangul, Han,
# Arabic, and two supplementary-plane blocks.
SCRIPT_RANGES = [
    (0x0020, 0x007E),
    (0xAC00, 0xD7A3),
    (0x4E00, 0x9FFF),
    (0x0600, 0x06FF),
    (0x1F300, 0x1F6FF),
    (0x10000, 0x103FF),
]


def random_text(rng: random.Random, max_len: int = 60) -> str:
    chars = []
    for _ in range(rng.randint(0, max_len)):
        if rng.random() < 0.12:
            chars.append(rng.choice(" \t\n"))
        else:
            lo, hi = rng.choice(SCRIPT_RANGES)
            chars.append(chr(rng.randint(lo, hi)))
    return "".join(chars)


@pytest.fixture(scope="session")
def mini_corpora() -> dict[str, list[str]]:
    corpora = {}
    for tag in ("en", "ko", "zh"):
        path = DATA_DIR / f"{tag}.txt"
        assert path.is_file(), f"bundled corpus missing: {path}"
        corpora[tag] = path.read_text(encoding="utf-8").splitlines()
    return corpora
