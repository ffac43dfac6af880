from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ctrf import kernels
from ctrf.errors import OracleLimitExceeded, ScanLimitExceeded, UnknownStream, WordParseError
from ctrf.words import (
    PeriodicWord,
    absorbs,
    all_words,
    border_array,
    builtin_stream,
    complement,
    extends,
    format_word,
    meet,
    min_repeat_blocks,
    occurrences,
    p0,
    p0_oracle,
    parse_word,
    prefix_periods,
    prefix_periods_z,
    preserving_letter,
    restrict,
    rotations,
)

words = st.text(alphabet="ab", max_size=8)


def test_letters_and_text_format():
    assert complement("a") == "b" and complement("b") == "a"
    assert parse_word("0") == ""
    assert parse_word("abba") == "abba"
    assert format_word("") == "0"
    with pytest.raises(WordParseError):
        parse_word("abx")
    with pytest.raises(WordParseError):
        parse_word("")


def test_all_words_counts():
    assert list(all_words(1)) == ["", "a", "b"]
    assert sum(1 for _ in all_words(10)) == 2**11 - 1
    assert sum(1 for _ in all_words(3, min_len=3)) == 8


def test_restrict():
    assert restrict("abb", 2) == "ab"
    assert restrict("ab", 0) == ""
    assert restrict("ab", 5) == "ab"
    assert restrict(builtin_stream("periodic:ab"), 5) == "ababa"


def test_meet_examples():
    assert meet("ab", "aa") == "a"
    assert meet("abba", "abba") == "abba"
    assert meet(builtin_stream("periodic:a"), builtin_stream("periodic:b")) == ""
    assert meet("abab", builtin_stream("periodic:ab")) == "abab"
    assert meet(builtin_stream("periodic:ab"), "abb") == "ab"


def test_meet_of_equal_streams_needs_a_limit():
    with pytest.raises(ScanLimitExceeded):
        meet(builtin_stream("periodic:ab"), builtin_stream("periodic:ab"), scan_limit=50)


def test_extends():
    assert extends("a", "ab")
    assert all(extends("", w) for w in all_words(4))
    assert not extends("ab", "a")


def test_absorbs():
    assert absorbs(PeriodicWord("ab"), "ba", 4)
    assert not absorbs(PeriodicWord("a"), "b", 10)
    assert absorbs("abba", "bb", 4)
    with pytest.raises(ValueError):
        absorbs("abba", "abb", 2)


def test_periodic_word_needs_primitive_block():
    assert PeriodicWord("aba").period == 3
    with pytest.raises(ValueError):
        PeriodicWord("abab")
    z = PeriodicWord("ab")
    assert [z.letter_at(i) for i in range(1, 5)] == list("abab")


def test_p0_examples():
    assert p0("") == 0
    assert (p0("a"), p0("aa"), p0("ab")) == (1, 1, 2)
    assert p0("aba") == 2
    assert p0("abb") == 3


def test_p0_at_most_length():
    table = kernels.p0_table(14)
    lengths = [c.bit_length() - 1 for c in range(1, table.size)]
    assert all(int(table[c]) <= n for c, n in zip(range(1, table.size), lengths))


def test_oracle_examples_and_limit():
    assert p0_oracle("") == 0
    assert p0_oracle("abb") == 3
    assert p0_oracle("aba") == 2
    with pytest.raises(OracleLimitExceeded):
        p0_oracle("a" * 17)


def test_literal_oracle_matches_fast_path():
    for v in all_words(10):
        assert p0_oracle(v) == p0(v), v


def test_border_array_small():
    assert border_array("abaab") == [0, 0, 0, 1, 1, 2]
    assert border_array("aaaa") == [0, 0, 1, 2, 3]


@given(st.text(alphabet="ab", max_size=60))
def test_prefix_periods_agree(t):
    assert prefix_periods(t) == prefix_periods_z(t) == [p0(t[:i]) for i in range(1, len(t) + 1)]


def test_min_repeat_blocks_examples():
    assert min_repeat_blocks("ab") == {"ab", "ba"}
    assert min_repeat_blocks("aa") == {"a"}
    assert min_repeat_blocks("aba") == {"ab", "ba"}


def test_min_repeat_blocks_are_rotations_and_complete():
    for v in all_words(10, min_len=1):
        blocks = min_repeat_blocks(v)
        first = next(iter(blocks))
        assert blocks <= rotations(first)
        # brute force: every block of length p0(v) whose repetition absorbs v
        p = p0(v)
        found = {r for r in all_words(p, min_len=p)
                 if absorbs((r * (2 + len(v) // p))[: p + len(v)], v)}
        assert found == blocks, v


def test_occurrence_spacing():
    for v in all_words(10, min_len=1):
        for r in min_repeat_blocks(v):
            text = (r * (3 + 2 * len(v)))[: 3 * len(r) + 2 * len(v)]
            pos = occurrences(text, v)
            assert pos, (v, r)
            assert all((q - pos[0]) % len(r) == 0 for q in pos), (v, r)


def test_preserving_letter_examples():
    assert preserving_letter("a") == "a"
    assert preserving_letter("ab") == "b"
    assert p0("bab") == 2 and p0("aab") == 3
    assert preserving_letter("") == "a"


def test_letter_dichotomy_to_length_12():
    for v in all_words(12, min_len=1):
        p = p0(v)
        hits = [c for c in "ab" if p0(c + v) == p]
        assert len(hits) == 1, v
        other = complement(hits[0])
        assert p0(other + v) >= p + 1


def test_monotonicity_under_prefixing():
    for s in all_words(12, min_len=1):
        p = p0(s)
        assert all(p0(s[i:]) <= p for i in range(1, len(s)))


def test_builtin_streams():
    z = builtin_stream("periodic:ab")
    assert [z.letter_at(i) for i in range(1, 5)] == list("abab")
    assert builtin_stream("fibonacci").prefix(5) == "abaab"
    assert builtin_stream("increasing_runs").prefix(6) == "abaaba"
    assert builtin_stream("increasing_runs").prefix(14) == "abaabaaabaaaab"
    with pytest.raises(UnknownStream):
        builtin_stream("nope")
    with pytest.raises(UnknownStream):
        builtin_stream("periodic:")


def test_stream_is_deterministic():
    z = builtin_stream("fibonacci")
    first = z.prefix(300)
    assert z.prefix(300) == first
    assert [z.letter_at(i) for i in (300, 7, 150)] == [first[299], first[6], first[149]]


def test_fibonacci_is_the_substitution_fixed_point():
    w = "a"
    for _ in range(15):
        w = "".join("ab" if c == "a" else "a" for c in w)
    assert builtin_stream("fibonacci").prefix(len(w)) == w


@pytest.mark.parametrize("name", ["fibonacci", "increasing_runs"])
def test_stream_period_lower_bound(name):
    z = builtin_stream(name)
    periods = prefix_periods_z(z.prefix(3000))
    g = z.period_lower_bound
    assert all(p >= g(i) for i, p in enumerate(periods, start=1))


@given(words, words)
def test_meet_properties(u, v):
    m = meet(u, v)
    assert m == meet(v, u)
    assert meet(u, u) == u
    assert extends(m, u) and extends(m, v)
    assert len(m) == len(u) or len(m) == len(v) or u[len(m)] != v[len(m)]
