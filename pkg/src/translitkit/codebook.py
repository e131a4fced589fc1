"""Bidirectional char-code mappings: the basic, tokenizer-optimized and hybrid builds.

A codebook is a bijection between source code points and Latin codes. Source
code points may never be ASCII letters or '@', which the wire grammar reserves
for codes and preserved runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import IO, Iterable

from .bpe import BpeModel
from .codespace import CodeSpaceProfile, DEFAULT_PROFILE, enumerate_codes, is_valid_code
from .errors import CapacityError, ConfigError, FormatError, IntegrityError

STRATEGIES = ("basic", "tokenizer_opt", "hybrid")

_RESERVED = frozenset(range(ord("A"), ord("Z") + 1)) | frozenset(range(ord("a"), ord("z") + 1)) | {ord("@")}


@dataclass(frozen=True)
class CodebookEntry:
    codepoint: int
    code: str
    rank: int  # 1 = most frequent
    token_count: int  # tokens for `code` under the qualifying model; 0 = unmeasured


@dataclass
class Codebook:
    entries: list[CodebookEntry]
    strategy: str
    source_freq_digest: str = ""
    char_to_code: dict[int, str] = field(init=False, repr=False)
    code_to_char: dict[str, int] = field(init=False, repr=False)
    code_to_text: dict[str, str] = field(init=False, repr=False)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        c2l: dict[int, str] = {}
        l2c: dict[str, int] = {}
        for e in self.entries:
            if not is_valid_code(e.code):
                raise FormatError(f"invalid code {e.code!r} for U+{e.codepoint:04X}")
            if e.codepoint in _RESERVED:
                raise IntegrityError(
                    f"U+{e.codepoint:04X} ({chr(e.codepoint)!r}) is reserved by the wire grammar"
                )
            if e.codepoint in c2l:
                raise IntegrityError(f"duplicate character U+{e.codepoint:04X}")
            if e.code in l2c:
                raise IntegrityError(f"duplicate code {e.code!r}")
            c2l[e.codepoint] = e.code
            l2c[e.code] = e.codepoint
        self.char_to_code = c2l
        self.code_to_char = l2c
        self.code_to_text = {code: chr(cp) for code, cp in l2c.items()}

    def __eq__(self, other):
        if not isinstance(other, Codebook):
            return NotImplemented
        return (
            self.entries == other.entries
            and self.strategy == other.strategy
            and self.source_freq_digest == other.source_freq_digest
        )

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def single_token_count(self) -> int:
        """How many characters got a single-token code (tokenizer-aware builds)."""
        return sum(1 for e in self.entries if e.token_count == 1)

    def with_strategy(self, strategy: str) -> "Codebook":
        return replace(self, entries=list(self.entries), strategy=strategy)


def _check_chars(chars: list[int]) -> None:
    if len(set(chars)) != len(chars):
        raise IntegrityError("character list contains duplicates")


def build_basic(
    chars: Iterable[int],
    profile: CodeSpaceProfile = DEFAULT_PROFILE,
    source_digest: str = "",
) -> Codebook:
    """Assign the i-th code (shortest first) to the i-th most frequent character."""
    chars = list(chars)
    _check_chars(chars)
    codes = enumerate_codes(profile, len(chars))
    entries = [
        CodebookEntry(cp, code, rank=i + 1, token_count=0)
        for i, (cp, code) in enumerate(zip(chars, codes))
    ]
    return Codebook(entries, "basic", source_digest)


def build_tokenizer_optimized(
    chars: Iterable[int],
    profile: CodeSpaceProfile = DEFAULT_PROFILE,
    model: BpeModel | None = None,
    source_digest: str = "",
    strategy: str = "tokenizer_opt",
) -> Codebook:
    """Prefer codes that the model tokenizes to a single token.

    Single-token candidates are handed out in canonical order; if they run out,
    the remaining characters get the lowest-token-count codes still available.
    Each entry records its code's token count.
    """
    if model is None:
        raise ConfigError("tokenizer-optimized build requires a BPE model")
    chars = list(chars)
    _check_chars(chars)
    total = profile.total_slots()
    if len(chars) > total:
        raise CapacityError(
            f"requested {len(chars)} codes but the profile holds at most {total} "
            f"(max_len={profile.max_len})"
        )
    if not chars:
        return Codebook([], strategy, source_digest)
    singles: list[str] = []
    multis: list[tuple[int, int, str]] = []
    counts: dict[str, int] = {}
    exhausted = True
    for idx, code in enumerate(profile.iter_codes()):
        n = len(model.tokenize(code))
        counts[code] = n
        if n == 1:
            singles.append(code)
            if len(singles) == len(chars):
                exhausted = False
                break
        else:
            multis.append((n, idx, code))
    assigned = singles
    if exhausted and len(assigned) < len(chars):
        multis.sort()
        assigned = singles + [code for _, _, code in multis[: len(chars) - len(singles)]]
    entries = [
        CodebookEntry(cp, code, rank=i + 1, token_count=counts[code])
        for i, (cp, code) in enumerate(zip(chars, assigned))
    ]
    return Codebook(entries, strategy, source_digest)


def build_hybrid(
    chars: Iterable[int],
    profile: CodeSpaceProfile = DEFAULT_PROFILE,
    model: BpeModel | None = None,
    source_digest: str = "",
) -> Codebook:
    """Same mapping as the tokenizer-optimized build; pairs with a merged vocabulary."""
    return build_tokenizer_optimized(chars, profile, model, source_digest, strategy="hybrid")


def save(cb: Codebook, out: IO[str]) -> None:
    """TSV: header `#strategy=<s> freq_digest=<hex>`, rows codepoint_hex/code/rank/token_count."""
    out.write(f"#strategy={cb.strategy} freq_digest={cb.source_freq_digest}\n")
    for e in cb.entries:
        out.write(f"{e.codepoint:04X}\t{e.code}\t{e.rank}\t{e.token_count}\n")


def load(src: IO[str]) -> Codebook:
    header = src.readline().rstrip("\n").rstrip("\r")
    if not header.startswith("#strategy="):
        raise FormatError("line 1: expected header '#strategy=<s> freq_digest=<hex>'")
    fields = dict(
        part.split("=", 1) for part in header[1:].split(" ") if "=" in part
    )
    strategy = fields.get("strategy", "")
    digest = fields.get("freq_digest", "")
    entries = []
    seen_chars: dict[int, int] = {}
    seen_codes: dict[str, int] = {}
    for lineno, line in enumerate(src, start=2):
        line = line.rstrip("\n").rstrip("\r")
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise FormatError(f"line {lineno}: expected 4 tab-separated fields")
        try:
            cp = int(cols[0], 16)
            rank = int(cols[2])
            token_count = int(cols[3])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
        code = cols[1]
        if not is_valid_code(code):
            raise FormatError(f"line {lineno}: invalid code {code!r}")
        if cp in seen_chars:
            raise IntegrityError(
                f"line {lineno}: character U+{cp:04X} already mapped on line {seen_chars[cp]}"
            )
        if code in seen_codes:
            raise IntegrityError(
                f"line {lineno}: code {code!r} already mapped on line {seen_codes[code]}"
            )
        seen_chars[cp] = lineno
        seen_codes[code] = lineno
        entries.append(CodebookEntry(cp, code, rank, token_count))
    return Codebook(entries, strategy, digest)


def save_path(cb: Codebook, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        save(cb, fh)


def load_path(path: str) -> Codebook:
    with open(path, encoding="utf-8", newline="") as fh:
        return load(fh)


def load_transform(src: IO[str] | str) -> dict[int, str]:
    """Load a lossy char->string table (e.g. hanzi to pinyin): `codepoint_hex<TAB>replacement`.

    Output of a transform is not restorable; encoders treat it as plain text.
    """
    if isinstance(src, str):
        with open(src, encoding="utf-8", newline="") as fh:
            return load_transform(fh)
    table: dict[int, str] = {}
    for lineno, line in enumerate(src, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2 or not cols[1]:
            raise FormatError(f"line {lineno}: expected 'codepoint_hex<TAB>replacement'")
        try:
            cp = int(cols[0], 16)
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
        if cp in table:
            raise IntegrityError(f"line {lineno}: duplicate codepoint U+{cp:04X}")
        table[cp] = cols[1]
    return table
