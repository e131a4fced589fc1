"""Structured Latin code space: validation, capacity, shortest-first enumeration.

A code is one uppercase letter followed by zero or more lowercase letters.
Uppercase letters therefore delimit codes inside any concatenation, which is
what makes greedy decoding unambiguous without a prefix-free code set.
"""

from __future__ import annotations

import itertools
import re
import string
from dataclasses import dataclass
from typing import Iterator

from .errors import CapacityError

UPPER = string.ascii_uppercase
LOWER = string.ascii_lowercase

_CODE_RE = re.compile(r"[A-Z][a-z]*")


def is_valid_code(s: str) -> bool:
    """True iff `s` is one uppercase ASCII letter followed by lowercase ASCII letters."""
    return _CODE_RE.fullmatch(s) is not None


def capacity(length: int) -> int:
    """Number of pattern codes of exactly `length`, with no profile restrictions.

    One of 26 uppercase first letters times 26^(length-1) lowercase tails.
    """
    if length < 1:
        raise ValueError(f"code length must be >= 1, got {length}")
    return 26 * 26 ** (length - 1)


@dataclass(frozen=True)
class CodeSpaceProfile:
    """Restricts and orders the code space used for codebook assignment.

    `excluded_single_letters` removes letters from the length-1 codes only;
    `two_char_first_letters` restricts the first letter of length-2 codes only.
    Lengths 3+ are unrestricted. Both sets are normalised so that enumeration
    order is always (length, text) ascending, independent of input order.
    """

    max_len: int = 2
    excluded_single_letters: frozenset[str] = frozenset("AIOYZ")
    two_char_first_letters: tuple[str, ...] = tuple("ABCDEF")

    def __post_init__(self):
        if self.max_len < 1:
            raise ValueError(f"max_len must be >= 1, got {self.max_len}")
        excluded = frozenset(self.excluded_single_letters)
        firsts = tuple(sorted(set(self.two_char_first_letters)))
        for letter in itertools.chain(excluded, firsts):
            if len(letter) != 1 or letter not in UPPER:
                raise ValueError(f"profile letters must be single uppercase A-Z, got {letter!r}")
        object.__setattr__(self, "excluded_single_letters", excluded)
        object.__setattr__(self, "two_char_first_letters", firsts)

    def single_letters(self) -> list[str]:
        return [c for c in UPPER if c not in self.excluded_single_letters]

    def slots_at(self, length: int) -> int:
        """Codes of exactly `length` this profile can emit."""
        if length < 1 or length > self.max_len:
            return 0
        if length == 1:
            return 26 - len(self.excluded_single_letters)
        if length == 2:
            return 26 * len(self.two_char_first_letters)
        return capacity(length)

    def total_slots(self) -> int:
        return sum(self.slots_at(n) for n in range(1, self.max_len + 1))

    def iter_codes(self) -> Iterator[str]:
        """All codes of this profile, shortest first, lexicographic within a length."""
        yield from self.single_letters()
        if self.max_len >= 2:
            for first in self.two_char_first_letters:
                for tail in LOWER:
                    yield first + tail
        for length in range(3, self.max_len + 1):
            for first in UPPER:
                for tail in itertools.product(LOWER, repeat=length - 1):
                    yield first + "".join(tail)


#: The paper-scale profile: 21 single-letter codes (B-X minus I/O) plus
#: two-letter codes starting A-F. 162 codes end at "Fk".
DEFAULT_PROFILE = CodeSpaceProfile()

#: Unrestricted space up to length 4: 475,254 codes in total.
FULL_PROFILE = CodeSpaceProfile(
    max_len=4, excluded_single_letters=frozenset(), two_char_first_letters=tuple(UPPER)
)


def enumerate_codes(profile: CodeSpaceProfile, count: int) -> list[str]:
    """First `count` codes of `profile` in canonical order.

    Raises CapacityError naming the ceiling when `count` exceeds what the
    profile can provide.
    """
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    total = profile.total_slots()
    if count > total:
        raise CapacityError(
            f"requested {count} codes but the profile holds at most {total} "
            f"(max_len={profile.max_len})"
        )
    return list(itertools.islice(profile.iter_codes(), count))
