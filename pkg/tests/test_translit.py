import random

import pytest
from hypothesis import given, settings, strategies as st

from translitkit.codebook import build_basic
from translitkit.errors import DecodeError, FormatError
from translitkit.translit import decode, from_latin, to_latin, translator, verify_roundtrip

from reference import ref_decode, ref_encode

CB = build_basic([0x0F40, 0x0F41])  # ཀ -> "B", ཁ -> "C"


def test_direct_mapping():
    assert to_latin("ཀཁཀ", CB) == "BCB"


def test_unmapped_nonascii_passthrough():
    # U+0F0B tsheg is unmapped and not ASCII: passes through bare
    assert to_latin("ཀ་ཁ", CB) == "B་C"
    assert from_latin("B་C", CB) == "ཀ་ཁ"


def test_preserved_run_with_at_doubling():
    # run "a@" wraps to '@' + 'a@@' + '@': 2 + (number of '@') extra chars
    assert to_latin("ཀa@ཁ", CB) == "B@a@@@C"
    assert from_latin("B@a@@@C", CB) == "ཀa@ཁ"


def test_empty_text():
    assert to_latin("", CB) == ""
    assert from_latin("", CB) == ""


def test_maximal_munch_prefers_longest():
    cb = build_basic([0x0F40, 0x0F41], profile_with_ba())
    assert cb.char_to_code == {0x0F40: "B", 0x0F41: "Ba"}
    assert from_latin("BaB", cb) == "ཁཀ"


def profile_with_ba():
    from translitkit.codespace import CodeSpaceProfile

    return CodeSpaceProfile(
        max_len=2,
        excluded_single_letters=frozenset("ACDEFGHIJKLMNOPQRSTUVWXYZ"),
        two_char_first_letters=("B",),
    )


def test_incoherent_double_at_is_rejected():
    for mode in ("strict", "lenient"):
        with pytest.raises(FormatError) as exc:
            from_latin("@@a@", CB, mode)
        assert exc.value.offset == 0


def test_unterminated_run():
    with pytest.raises(FormatError) as exc:
        from_latin("B@abc", CB)
    assert exc.value.offset == 1


def test_stray_lowercase_is_format_error_in_both_modes():
    for mode in ("strict", "lenient"):
        with pytest.raises(FormatError) as exc:
            from_latin("·x", CB, mode)
        assert exc.value.offset == 1


def test_unknown_segment_strict_vs_lenient():
    with pytest.raises(DecodeError) as exc:
        from_latin("BQC", CB, "strict")
    assert exc.value.segment == "Q"
    assert exc.value.offset == 1

    result = decode("BQC", CB, "lenient")
    assert result.text == "ཀQཁ"
    assert len(result.warnings) == 1


def test_residue_strict_vs_lenient():
    with pytest.raises(DecodeError):
        from_latin("Bx", CB, "strict")
    result = decode("Bx", CB, "lenient")
    assert result.text == "ཀx"
    assert len(result.warnings) == 1


def test_bad_mode_rejected():
    with pytest.raises(ValueError):
        decode("B", CB, "fuzzy")


def test_literal_at_roundtrip():
    assert to_latin("@", CB) == "@@@@"
    assert from_latin("@@@@", CB) == "@"


def test_thousand_at_line_matches_reference():
    line = "@" * 1000
    enc = to_latin(line, CB)
    assert enc == ref_encode(line, CB.char_to_code)
    assert from_latin(enc, CB) == ref_decode(enc, CB.code_to_char) == line


def test_run_wrapping_length_invariant():
    for run in ["a", "abc", "a@b", "@@", "XYZ@", "@" * 17]:
        enc = to_latin(run, CB)
        assert len(enc) == len(run) + 2 + run.count("@")


def test_transform_is_lossy_plain_text():
    enc = to_latin("ཀ你ཁ", CB, transform={0x4F60: "ni3"})
    assert enc == "Bni3C"
    # strict decoding refuses the non-reversible residue
    with pytest.raises(Exception):
        from_latin(enc, CB, "strict")


def test_transform_never_shadows_codebook():
    enc = to_latin("ཀ", CB, transform={0x0F40: "ka"})
    assert enc == "B"


def test_translator_reuse_equals_to_latin():
    encode = translator(CB)
    for text in ["", "ཀཁ", "mixed ascii ཀ", "@@@"]:
        assert encode(text) == to_latin(text, CB)


# --- property tests -------------------------------------------------------

MIXED_ALPHABET = (
    "ཀཁགངཅ" "ᠠᠡᠢ" "ابت" "你好" "@Aa Bb zZ" "xyz" "·،༔!?39\n\t" "😀é་"
)


@settings(max_examples=300)
@given(text=st.text(alphabet=MIXED_ALPHABET, max_size=80))
def test_roundtrip_mixed(text, default_codebook):
    assert from_latin(to_latin(text, default_codebook), default_codebook) == text


@settings(max_examples=150)
@given(text=st.text(max_size=60))
def test_roundtrip_arbitrary_unicode(text, default_codebook):
    assert from_latin(to_latin(text, default_codebook), default_codebook) == text


@settings(max_examples=200)
@given(text=st.text(alphabet=MIXED_ALPHABET, max_size=80))
def test_encode_matches_reference(text, default_codebook):
    assert to_latin(text, default_codebook) == ref_encode(text, default_codebook.char_to_code)


@settings(max_examples=200)
@given(text=st.text(alphabet=MIXED_ALPHABET, max_size=80))
def test_decode_matches_reference_on_valid_input(text, default_codebook):
    enc = to_latin(text, default_codebook)
    assert from_latin(enc, default_codebook) == ref_decode(enc, default_codebook.code_to_char)


@settings(max_examples=200)
@given(indices=st.lists(st.sampled_from(range(162)), min_size=1, max_size=8))
def test_code_concatenations_decode_uniquely(indices, default_codebook):
    entries = default_codebook.entries
    enc = "".join(entries[i].code for i in indices)
    expected = "".join(chr(entries[i].codepoint) for i in indices)
    assert from_latin(enc, default_codebook) == expected


def test_verify_roundtrip_counts(default_codebook, rng):
    lines = ["", "ཀ", "@" * 50]
    pool = MIXED_ALPHABET.replace("\n", "")
    for _ in range(200):
        lines.append("".join(rng.choice(pool) for _ in range(rng.randint(0, 60))))
    report = verify_roundtrip(lines, default_codebook)
    assert report.total == len(lines)
    assert report.failures == 0
    assert report.first_failure_offset is None


def test_verify_roundtrip_empty_stream(default_codebook):
    report = verify_roundtrip([], default_codebook)
    assert report.total == 0
    assert report.failures == 0
