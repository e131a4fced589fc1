"""Corpus scanning: per-code-point counts partitioned by Unicode script range."""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable

from .errors import ConfigError, FormatError, InputError, IntegrityError

OTHER = "other"


@dataclass(frozen=True)
class ScriptRange:
    """A named set of inclusive code-point intervals."""

    name: str
    ranges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.name or any(c in self.name for c in "\t\n\r,"):
            raise ValueError(f"bad script name {self.name!r}")
        if self.name == OTHER:
            raise ValueError(f"script name {OTHER!r} is reserved")
        intervals = tuple(sorted((int(lo), int(hi)) for lo, hi in self.ranges))
        for lo, hi in intervals:
            if lo > hi or lo < 0:
                raise ValueError(f"bad interval {lo:#x}-{hi:#x} in {self.name}")
        for (_, hi), (lo, _) in zip(intervals, intervals[1:]):
            if lo <= hi:
                raise ValueError(f"overlapping intervals in script range {self.name}")
        object.__setattr__(self, "ranges", intervals)

    def contains(self, cp: int) -> bool:
        return any(lo <= cp <= hi for lo, hi in self.ranges)


DEFAULT_SCRIPT_RANGES = (
    ScriptRange("Tibetan", ((0x0F00, 0x0FFF),)),
    ScriptRange("Mongolian", ((0x1800, 0x18AF),)),
    ScriptRange("Uyghur", ((0x0600, 0x06FF), (0xFB50, 0xFDFF), (0xFE70, 0xFEFF))),
    ScriptRange("CJK", ((0x4E00, 0x9FFF),)),
)


@dataclass
class FrequencyTable:
    """Code-point counts plus the script each code point was attributed to."""

    counts: dict[int, int] = field(default_factory=dict)
    script_of: dict[int, str] = field(default_factory=dict)
    scripts: frozenset[str] = frozenset()

    @property
    def total_chars(self) -> int:
        return sum(self.counts.values())

    def __add__(self, other: "FrequencyTable") -> "FrequencyTable":
        merged = Counter(self.counts)
        merged.update(other.counts)
        script_of = dict(self.script_of)
        for cp, script in other.script_of.items():
            if script_of.setdefault(cp, script) != script:
                raise IntegrityError(
                    f"tables disagree on script of U+{cp:04X}: "
                    f"{script_of[cp]} vs {script}"
                )
        return FrequencyTable(dict(merged), script_of, self.scripts | other.scripts)

    def digest(self) -> str:
        """Short checksum over the (code point, count) pairs; order-independent."""
        blob = "\n".join(f"{cp}:{n}" for cp, n in sorted(self.counts.items()))
        return hashlib.sha256(blob.encode("ascii")).hexdigest()[:16]


def _assign_script(cp: int, ranges: Iterable[ScriptRange]) -> str:
    for rng in ranges:
        if rng.contains(cp):
            return rng.name
    return OTHER


def scan_corpus(lines: Iterable[str], ranges: Iterable[ScriptRange] = DEFAULT_SCRIPT_RANGES) -> FrequencyTable:
    """Count every code point in `lines`; first matching range wins, else "other".

    Newlines are the caller's concern: pass lines without terminators if they
    should not be counted.
    """
    ranges = tuple(ranges)
    char_counts: Counter[str] = Counter()
    for line in lines:
        char_counts.update(line)
    counts = {ord(ch): n for ch, n in char_counts.items()}
    script_of = {cp: _assign_script(cp, ranges) for cp in counts}
    return FrequencyTable(counts, script_of, frozenset(r.name for r in ranges))


def scan_file(path: str, ranges: Iterable[ScriptRange] = DEFAULT_SCRIPT_RANGES) -> FrequencyTable:
    """scan_corpus over a file, rejecting invalid UTF-8 with its byte offset.

    Line terminators are not counted; a leading BOM is ignored.
    """

    def lines():
        offset = 0
        first = True
        with open(path, "rb") as fh:
            for raw in fh:
                try:
                    line = raw.decode("utf-8")
                except UnicodeDecodeError as exc:
                    raise InputError(
                        f"{path}: invalid UTF-8 at byte offset {offset + exc.start}"
                    ) from exc
                offset += len(raw)
                if first and line.startswith("﻿"):
                    line = line[1:]
                first = False
                yield line.rstrip("\r\n")

    return scan_corpus(lines(), ranges)


def charset_for(freq: FrequencyTable, script: str, min_count: int = 1) -> list[int]:
    """Code points of `script` with count >= min_count, most frequent first.

    Ties break by ascending code point so codebooks are reproducible.
    """
    if script != OTHER and script not in freq.scripts:
        known = ", ".join(sorted(freq.scripts)) or "(none)"
        raise ConfigError(f"unknown script {script!r}; known scripts: {known}")
    chosen = [
        cp
        for cp, n in freq.counts.items()
        if freq.script_of.get(cp) == script and n >= min_count
    ]
    chosen.sort(key=lambda cp: (-freq.counts[cp], cp))
    return chosen


def merged_charset(
    freq: FrequencyTable, min_count: int = 1, scripts: Iterable[str] | None = None
) -> list[int]:
    """In-range code points in one merged frequency order.

    `scripts` restricts which script names participate (default: every script
    except "other").
    """
    if scripts is None:
        wanted = None
    else:
        wanted = set(scripts)
        unknown = wanted - freq.scripts
        if unknown:
            known = ", ".join(sorted(freq.scripts)) or "(none)"
            raise ConfigError(f"unknown scripts {sorted(unknown)}; known scripts: {known}")
    chosen = [
        cp
        for cp, n in freq.counts.items()
        if n >= min_count
        and freq.script_of.get(cp) != OTHER
        and (wanted is None or freq.script_of.get(cp) in wanted)
    ]
    chosen.sort(key=lambda cp: (-freq.counts[cp], cp))
    return chosen


def write_tsv(freq: FrequencyTable, out: IO[str]) -> None:
    """Rows `codepoint<TAB>hex<TAB>script<TAB>count`, most frequent first."""
    out.write("#scripts=" + ",".join(sorted(freq.scripts)) + "\n")
    for cp in sorted(freq.counts, key=lambda cp: (-freq.counts[cp], cp)):
        out.write(f"{cp}\tU+{cp:04X}\t{freq.script_of[cp]}\t{freq.counts[cp]}\n")


def read_tsv(src: IO[str]) -> FrequencyTable:
    counts: dict[int, int] = {}
    script_of: dict[int, str] = {}
    scripts: frozenset[str] = frozenset()
    for lineno, line in enumerate(src, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith("#scripts="):
                names = line[len("#scripts=") :]
                scripts = frozenset(n for n in names.split(",") if n)
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise FormatError(f"line {lineno}: expected 4 tab-separated fields")
        try:
            cp = int(fields[0])
            hexval = int(fields[1].removeprefix("U+"), 16)
            count = int(fields[3])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
        if hexval != cp:
            raise FormatError(f"line {lineno}: hex column U+{hexval:04X} != codepoint {cp}")
        if count <= 0:
            raise FormatError(f"line {lineno}: count must be positive")
        if cp in counts:
            raise IntegrityError(f"line {lineno}: duplicate codepoint U+{cp:04X}")
        counts[cp] = count
        script_of[cp] = fields[2]
    scripts = scripts | frozenset(s for s in script_of.values() if s != OTHER)
    return FrequencyTable(counts, script_of, scripts)
