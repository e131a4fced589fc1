#!/usr/bin/env python3
"""Generate synthetic demo corpora: a mixed-language stream plus labeled
training files for both language classifiers.

Writes into --out: corpus.txt, labeled_raw.txt (raw-text classifier) and, once
a codebook exists, `labeled_enc.txt` can be produced with --codebook.
"""

import argparse
import random
from pathlib import Path

from translitkit import codebook as codebook_mod
from translitkit import synth
from translitkit.translit import translator

LABELS = ("bo", "mn", "ug", "zh", "other")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--lines", type=int, default=2000, help="mixed corpus size")
    parser.add_argument("--per-label", type=int, default=800, help="labeled lines per language")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--codebook", help="also write labeled_enc.txt with low-resource lines encoded"
    )
    args = parser.parse_args()

    rng = random.Random(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    lines = synth.mixed_lines(rng, args.lines, LABELS)
    (out / "corpus.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    pairs = synth.labeled_lines(rng, args.per_label, LABELS)
    (out / "labeled_raw.txt").write_text(
        "".join(f"__label__{tag}\t{text}\n" for text, tag in pairs), encoding="utf-8"
    )

    if args.codebook:
        encode = translator(codebook_mod.load_path(args.codebook))
        (out / "labeled_enc.txt").write_text(
            "".join(
                f"__label__{tag}\t{encode(text) if tag in ('bo', 'mn', 'ug') else text}\n"
                for text, tag in pairs
            ),
            encoding="utf-8",
        )
    print(f"wrote demo corpora to {out}")


if __name__ == "__main__":
    main()
