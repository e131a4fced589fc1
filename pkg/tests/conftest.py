import random

import pytest

from translitkit import build_basic, synth


def make_charset_162() -> list[int]:
    """162 code points across the three default low-resource scripts,
    interleaved so frequency rank mixes scripts like a merged corpus would."""
    pools = [
        list(range(0x0F00, 0x0F6B)),  # Tibetan
        list(range(0x1800, 0x1850)),  # Mongolian
        list(range(0x0620, 0x0650)),  # Uyghur (Arabic)
    ]
    chars: list[int] = []
    i = 0
    while len(chars) < 162:
        pool = pools[i % 3]
        if pool:
            chars.append(pool.pop(0))
        i += 1
    return chars


@pytest.fixture(scope="session")
def chars_162() -> list[int]:
    return make_charset_162()


@pytest.fixture(scope="session")
def default_codebook(chars_162):
    return build_basic(chars_162)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260811)
