"""Synthetic corpus generators for the demo scripts and the test suite.

Character pools sit inside the default script ranges, so corpora generated
here round-trip through the default analysis/codebook path.
"""

from __future__ import annotations

import random

TIBETAN_CHARS = [chr(cp) for cp in range(0x0F40, 0x0F6B)] + [
    chr(cp) for cp in range(0x0F71, 0x0F85)
] + ["་", "།"]

MONGOLIAN_CHARS = [chr(cp) for cp in range(0x1820, 0x1843)] + ["᠃", "᠄", "᠊"]

UYGHUR_CHARS = [
    chr(cp)
    for cp in (
        0x0626, 0x0627, 0x0628, 0x067E, 0x062A, 0x062C, 0x0686, 0x062E,
        0x062F, 0x0631, 0x0632, 0x0698, 0x0633, 0x0634, 0x063A, 0x0641,
        0x0642, 0x0643, 0x06AF, 0x06AD, 0x0644, 0x0645, 0x0646, 0x06BE,
        0x0648, 0x06C7, 0x06C6, 0x06C8, 0x06CB, 0x06D0, 0x064A, 0x0649,
    )
]

CJK_CHARS = [chr(cp) for cp in range(0x4E00, 0x4E00 + 200)]

ENGLISH_WORDS = (
    "the of and to in is was for on that with as his they at be this from have "
    "or by one had not but what all were when we there can an your which their "
    "said if do will each about how up out them then she many some so these "
    "would other into has more her two like him see time could no make than "
    "first been its who now people my made over did down only way find use may "
    "water long little very after words called just where most know"
).split()

SCRIPT_CHARS = {
    "bo": TIBETAN_CHARS,
    "mn": MONGOLIAN_CHARS,
    "ug": UYGHUR_CHARS,
    "zh": CJK_CHARS,
}


def zipf_weights(n: int, s: float = 2.0) -> list[float]:
    """Unnormalised Zipf weights rank^-s for ranks 1..n."""
    return [1.0 / (rank**s) for rank in range(1, n + 1)]


def script_line(rng: random.Random, tag: str, min_len: int = 12, max_len: int = 60) -> str:
    """One script-pure line for a language tag; "other" draws English words."""
    if tag == "other":
        n_words = rng.randint(3, 10)
        return " ".join(rng.choice(ENGLISH_WORDS) for _ in range(n_words))
    chars = SCRIPT_CHARS[tag]
    length = rng.randint(min_len, max_len)
    weights = zipf_weights(len(chars), s=1.2)
    return "".join(rng.choices(chars, weights=weights, k=length))


def labeled_lines(
    rng: random.Random, n_per_label: int, labels=("bo", "mn", "ug", "zh", "other")
) -> list[tuple[str, str]]:
    """Interleaved (text, label) pairs, n_per_label of each."""
    out = []
    for i in range(n_per_label):
        for tag in labels:
            out.append((script_line(rng, tag), tag))
    return out


def mixed_lines(rng: random.Random, n: int, labels=("bo", "mn", "ug", "zh", "other")) -> list[str]:
    """Mixed-language stream with occasional empty lines."""
    out = []
    for _ in range(n):
        if rng.random() < 0.02:
            out.append("")
        else:
            out.append(script_line(rng, rng.choice(labels)))
    return out


def zipf_corpus(
    rng: random.Random,
    chars: list[str],
    n_lines: int,
    line_len: int = 80,
    s: float = 2.0,
) -> list[str]:
    """Lines drawn from a Zipf distribution over `chars` (rank = list position)."""
    weights = zipf_weights(len(chars), s)
    return ["".join(rng.choices(chars, weights=weights, k=line_len)) for _ in range(n_lines)]
