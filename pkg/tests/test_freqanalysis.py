import io
import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from translitkit.errors import ConfigError, FormatError, InputError
from translitkit.freqanalysis import (
    DEFAULT_SCRIPT_RANGES,
    FrequencyTable,
    ScriptRange,
    charset_for,
    merged_charset,
    read_tsv,
    scan_corpus,
    scan_file,
    write_tsv,
)

TIBETAN = ScriptRange("Tibetan", ((0x0F00, 0x0FFF),))


def test_scan_counts_and_scripts():
    table = scan_corpus(["ཀཀཁ"], [TIBETAN])
    assert table.counts == {0x0F40: 2, 0x0F41: 1}
    assert table.script_of == {0x0F40: "Tibetan", 0x0F41: "Tibetan"}
    assert table.total_chars == 3


def test_scan_empty():
    table = scan_corpus([], [TIBETAN])
    assert table.counts == {}
    assert table.total_chars == 0
    assert table.scripts == frozenset({"Tibetan"})


def test_scan_assigns_other():
    table = scan_corpus(["ཀx "], [TIBETAN])
    assert table.script_of[ord("x")] == "other"
    assert table.script_of[ord(" ")] == "other"


def test_first_matching_range_wins():
    a = ScriptRange("A", ((0x100, 0x1FF),))
    b = ScriptRange("B", ((0x180, 0x2FF),))
    table = scan_corpus([chr(0x180)], [a, b])
    assert table.script_of[0x180] == "A"


def test_scan_matches_generator_histogram():
    # oracle: the corpus generator's own tallies
    rng = random.Random(99)
    pool = [chr(cp) for cp in range(0x0F40, 0x0F60)]
    expected: Counter[str] = Counter()
    lines = []
    for _ in range(100):
        line = "".join(rng.choice(pool) for _ in range(100))
        expected.update(line)
        lines.append(line)
    table = scan_corpus(lines, [TIBETAN])
    assert table.counts == {ord(ch): n for ch, n in expected.items()}
    assert table.total_chars == 10_000


def test_charset_order_and_tiebreak():
    table = FrequencyTable(
        {0x0F40: 5, 0x0F41: 2, 0x0F42: 2},
        {0x0F40: "Tibetan", 0x0F41: "Tibetan", 0x0F42: "Tibetan"},
        frozenset({"Tibetan"}),
    )
    assert charset_for(table, "Tibetan", 1) == [0x0F40, 0x0F41, 0x0F42]
    assert charset_for(table, "Tibetan", 3) == [0x0F40]


def test_charset_unknown_script():
    table = scan_corpus(["ཀ"], [TIBETAN])
    with pytest.raises(ConfigError, match="Klingon"):
        charset_for(table, "Klingon")


def test_charset_known_but_absent_script_is_empty():
    table = scan_corpus(["ཀ"], DEFAULT_SCRIPT_RANGES)
    assert charset_for(table, "Mongolian") == []


def test_charset_min_count_one_covers_all_in_range():
    table = scan_corpus(["ཀཁགཀ"], [TIBETAN])
    got = charset_for(table, "Tibetan", 1)
    assert sorted(got) == sorted(table.counts)
    assert len(got) == len(set(got))


def test_merged_charset_skips_other():
    table = scan_corpus(["ཀxᠠ"], DEFAULT_SCRIPT_RANGES)
    merged = merged_charset(table)
    assert ord("x") not in merged
    assert set(merged) == {0x0F40, 0x1820}


lines_strategy = st.lists(
    st.text(alphabet=st.sampled_from("ཀཁགabc ᠠᠡ"), max_size=30), max_size=20
)


@given(lines_a=lines_strategy, lines_b=lines_strategy)
def test_additivity(lines_a, lines_b):
    ranges = DEFAULT_SCRIPT_RANGES
    combined = scan_corpus(lines_a + lines_b, ranges)
    summed = scan_corpus(lines_a, ranges) + scan_corpus(lines_b, ranges)
    assert combined.counts == summed.counts
    assert combined.script_of == summed.script_of
    assert combined.scripts == summed.scripts


def test_tsv_roundtrip():
    table = scan_corpus(["ཀཀཁ mixed ᠠ"], DEFAULT_SCRIPT_RANGES)
    buf = io.StringIO()
    write_tsv(table, buf)
    buf.seek(0)
    loaded = read_tsv(buf)
    assert loaded.counts == table.counts
    assert loaded.script_of == table.script_of
    assert loaded.scripts == table.scripts
    assert loaded.digest() == table.digest()


def test_tsv_sorted_by_count():
    table = scan_corpus(["ཀཀཁ"], [TIBETAN])
    buf = io.StringIO()
    write_tsv(table, buf)
    rows = [line for line in buf.getvalue().splitlines() if not line.startswith("#")]
    counts = [int(r.split("\t")[3]) for r in rows]
    assert counts == sorted(counts, reverse=True)


def test_tsv_rejects_duplicates():
    bad = "3904\tU+0F40\tTibetan\t2\n3904\tU+0F40\tTibetan\t1\n"
    with pytest.raises(Exception, match="line 2"):
        read_tsv(io.StringIO(bad))


def test_tsv_rejects_bad_fields():
    with pytest.raises(FormatError):
        read_tsv(io.StringIO("3904\tU+0F41\tTibetan\t2\n"))  # hex mismatch
    with pytest.raises(FormatError):
        read_tsv(io.StringIO("3904\tU+0F40\tTibetan\t0\n"))  # non-positive count


def test_scan_file_reports_byte_offset(tmp_path):
    path = tmp_path / "broken.txt"
    path.write_bytes("ཀ".encode("utf-8") + b"\xff\xfe" + b"abc\n")
    with pytest.raises(InputError, match="byte offset 3"):
        scan_file(str(path), [TIBETAN])


def test_scan_file_skips_bom_and_newlines(tmp_path):
    path = tmp_path / "ok.txt"
    path.write_bytes("﻿ཀཁ\nཀ\n".encode("utf-8"))
    table = scan_file(str(path), [TIBETAN])
    assert table.counts == {0x0F40: 2, 0x0F41: 1}


def test_script_range_validation():
    with pytest.raises(ValueError):
        ScriptRange("Bad", ((0x20, 0x10),))
    with pytest.raises(ValueError):
        ScriptRange("Bad", ((0x10, 0x30), (0x20, 0x40)))
    with pytest.raises(ValueError):
        ScriptRange("other", ((0x10, 0x20),))
