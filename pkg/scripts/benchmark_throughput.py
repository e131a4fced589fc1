#!/usr/bin/env python3
"""Encode/decode throughput harness (acceptance criterion: >= 20 MB/s combined,
non-blocking warning when missed).

Combined MB/s = (original bytes + encoded bytes) / (encode time + decode time).
"""

import argparse
import random
import sys
import time

from translitkit import synth
from translitkit.codebook import build_basic
from translitkit.translit import from_latin, translator

from_conftest_chars = [
    cp
    for pool in (range(0x0F00, 0x0F6B), range(0x1800, 0x1850), range(0x0620, 0x0650))
    for cp in pool
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--megabytes", type=float, default=8.0, help="input size to generate")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--target", type=float, default=20.0, help="combined MB/s target")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    codebook = build_basic(from_conftest_chars[:162])
    chars = [chr(e.codepoint) for e in codebook.entries]
    weights = synth.zipf_weights(len(chars), s=1.5)
    n_chars = int(args.megabytes * 1e6 / 3)  # all pools are 3-byte scripts
    text = "".join(rng.choices(chars, weights=weights, k=n_chars))
    orig_bytes = len(text.encode("utf-8"))

    encode = translator(codebook)
    start = time.monotonic()
    encoded = encode(text)
    t_enc = time.monotonic() - start
    enc_bytes = len(encoded.encode("utf-8"))

    start = time.monotonic()
    restored = from_latin(encoded, codebook)
    t_dec = time.monotonic() - start
    assert restored == text, "roundtrip failure"

    combined = (orig_bytes + enc_bytes) / (t_enc + t_dec) / 1e6
    print(f"input:    {orig_bytes / 1e6:.2f} MB ({n_chars} chars)")
    print(f"encoded:  {enc_bytes / 1e6:.2f} MB (file ratio {orig_bytes / enc_bytes:.2f}x)")
    print(f"encode:   {orig_bytes / t_enc / 1e6:.1f} MB/s")
    print(f"decode:   {enc_bytes / t_dec / 1e6:.1f} MB/s")
    print(f"combined: {combined:.1f} MB/s (target {args.target:.0f})")
    if combined < args.target:
        print(f"WARNING: below {args.target:.0f} MB/s target", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
