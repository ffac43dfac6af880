"""Finite and infinite words over the alphabet {a, b}.

Finite words are plain ``str`` values made of the characters ``a`` and
``b``, read left to right; the empty word is ``""`` internally and ``"0"`` in
text form.  Prepending a letter is what the generator maps do, so the first
character is the most recently applied one.

The minimal potential period ``p0(v)`` is the shortest period of an infinite
periodic word in which ``v`` occurs as a factor.  A word is a factor of
``r r r ...`` exactly when it has period ``len(r)``, so ``p0`` equals the
classical smallest period of ``v``, which the border (failure) array yields in
linear time.  :func:`p0_oracle` evaluates the definition literally and is the
reference the fast path is checked against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Union

from .errors import (
    OracleLimitExceeded,
    ScanLimitExceeded,
    UnknownStream,
    WordParseError,
)

Word = str
LETTERS = ("a", "b")
EMPTY: Word = ""
DEFAULT_ORACLE_LIMIT = 16


def complement(c: str) -> str:
    if c == "a":
        return "b"
    if c == "b":
        return "a"
    raise WordParseError(f"not a letter: {c!r}")


def parse_word(text: str) -> Word:
    """Parse the text format: letters ``a``/``b``, or ``0`` for the empty word."""
    text = text.strip()
    if text == "0":
        return EMPTY
    if not text or text.strip("ab"):
        raise WordParseError(f"not a word over {{a,b}}: {text!r}")
    return text


def format_word(w: Word) -> str:
    return w if w else "0"


def all_words(max_len: int, min_len: int = 0) -> Iterator[Word]:
    """Words in shortlex order (by length, then a < b)."""
    for n in range(min_len, max_len + 1):
        for letters in itertools.product(LETTERS, repeat=n):
            yield "".join(letters)


# -- infinite words ---------------------------------------------------------


@dataclass(frozen=True)
class PeriodicWord:
    """The infinite word ``block block block ...`` with a primitive block."""

    block: Word

    def __post_init__(self):
        if not self.block or self.block.strip("ab"):
            raise WordParseError(f"bad repeat block: {self.block!r}")
        if not _is_primitive(self.block):
            raise ValueError(f"repeat block {self.block!r} is not primitive")

    @property
    def period(self) -> int:
        return len(self.block)

    def letter_at(self, n: int) -> str:
        return self.block[(n - 1) % len(self.block)]

    def prefix(self, n: int) -> Word:
        reps = -(-n // len(self.block))
        return (self.block * reps)[:n]


def _is_primitive(r: Word) -> bool:
    # r is a proper power iff it occurs inside rr other than at 0 and len(r)
    return (r + r).find(r, 1) == len(r)


@dataclass(frozen=True)
class InfiniteWordStream:
    """An infinite word given by a deterministic ``letter_at`` (1-based)."""

    letter_at: Callable[[int], str] = field(compare=False)
    description: str
    # Lower bound g(i) <= p0(z|_i), claimed for every i >= 1, and an exact
    # upper bound on sum_{i >= m} 2^-g(i).  Only builtin streams carry them.
    period_lower_bound: Callable[[int], int] | None = field(default=None, compare=False)
    tail_sum_bound: Callable[[int], object] | None = field(default=None, compare=False)
    repeat_block: Word | None = None

    def prefix(self, n: int) -> Word:
        return "".join(self.letter_at(i) for i in range(1, n + 1))


WordLike = Union[Word, InfiniteWordStream, PeriodicWord]


def _fib_prefix_factory():
    cache = ["ab"]

    def letter_at(n: int) -> str:
        s = cache[0]
        if n > len(s):
            prev = "a"
            cur = "ab"
            while len(cur) < n:
                prev, cur = cur, cur + prev
            cache[0] = s = cur
        return s[n - 1]

    return letter_at


def _increasing_runs_letter(n: int) -> str:
    # b sits at positions k(k+3)/2 for k = 1, 2, ...
    k = 1
    while k * (k + 3) // 2 < n:
        k += 1
    return "b" if k * (k + 3) // 2 == n else "a"


def _linear_period_bound(i: int) -> int:
    return i // 3


def _linear_tail(m: int):
    from .dyadic import Dyadic

    # sum_{i>=m} 2^-floor(i/3) <= 3 * sum_{j>=floor(m/3)} 2^-j = 6 * 2^-floor(m/3)
    return Dyadic(6, m // 3)


def builtin_stream(name: str) -> InfiniteWordStream:
    """Named infinite words: ``fibonacci``, ``increasing_runs``, ``periodic:<block>``."""
    if name == "fibonacci":
        return InfiniteWordStream(
            _fib_prefix_factory(), "fibonacci", _linear_period_bound, _linear_tail
        )
    if name == "increasing_runs":
        return InfiniteWordStream(
            _increasing_runs_letter, "increasing_runs", _linear_period_bound, _linear_tail
        )
    if name.startswith("periodic:"):
        block = name.split(":", 1)[1]
        if not block or block.strip("ab"):
            raise UnknownStream(name)
        return InfiniteWordStream(
            lambda n, _b=block: _b[(n - 1) % len(_b)],
            name,
            repeat_block=block,
        )
    raise UnknownStream(name)


def stream_from_periodic(z: PeriodicWord) -> InfiniteWordStream:
    return builtin_stream(f"periodic:{z.block}")


# -- restriction, meet, extension -------------------------------------------


def restrict(w: WordLike, n: int) -> Word:
    """The first ``min(n, len(w))`` letters (first ``n`` for an infinite word)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if isinstance(w, str):
        return w[:n]
    return w.prefix(n)


def meet(u: WordLike, v: WordLike, scan_limit: int = 4096) -> Word:
    """Longest common initial segment of two finite or infinite words."""
    if isinstance(u, str) and isinstance(v, str):
        n = 0
        for cu, cv in zip(u, v):
            if cu != cv:
                break
            n += 1
        return u[:n]
    if not isinstance(u, str) and isinstance(v, str):
        u, v = v, u
    if isinstance(u, str):
        # u finite, v infinite
        n = 0
        for i, c in enumerate(u, start=1):
            if v.letter_at(i) != c:
                break
            n = i
        return u[:n]
    out = []
    for i in range(1, scan_limit + 1):
        c = u.letter_at(i)
        if v.letter_at(i) != c:
            return "".join(out)
        out.append(c)
    raise ScanLimitExceeded(f"streams agree on the first {scan_limit} letters")


def extends(u: Word, v: Word) -> bool:
    """True iff ``v`` extends ``u`` (``u`` is a prefix of ``v``)."""
    return v.startswith(u)


def absorbs(z: Word | PeriodicWord, v: Word, scan_limit: int | None = None) -> bool:
    """True iff ``v`` occurs as a factor of ``z`` within its first ``scan_limit`` letters.

    For a periodic word the default limit ``period + len(v)`` is sufficient.
    """
    if isinstance(z, PeriodicWord):
        if scan_limit is None:
            scan_limit = z.period + len(v)
        text = z.prefix(scan_limit)
    else:
        text = z if scan_limit is None else z[:scan_limit]
    if scan_limit is not None and scan_limit < len(v):
        raise ValueError("scan_limit must be at least len(v)")
    return v in text


# -- periods ----------------------------------------------------------------


def border_array(v: Word) -> list[int]:
    """``f[i]`` = length of the longest proper border of ``v[:i]`` (``f[0] = 0``)."""
    n = len(v)
    f = [0] * (n + 1)
    k = 0
    for i in range(1, n):
        while k and v[i] != v[k]:
            k = f[k]
        if v[i] == v[k]:
            k += 1
        f[i + 1] = k
    return f


def smallest_period(v: Word) -> int:
    return len(v) - border_array(v)[-1] if v else 0


@lru_cache(maxsize=1 << 16)
def p0(v: Word) -> int:
    """Minimal potential period; 0 for the empty word."""
    return smallest_period(v)


def prefix_periods(v: Word) -> list[int]:
    """``[p0(v[:1]), ..., p0(v[:n])]`` from a single border-array pass."""
    f = border_array(v)
    return [i - f[i] for i in range(1, len(v) + 1)]


def z_array(t: Word) -> list[int]:
    """``z[i]`` = length of the longest common prefix of ``t`` and ``t[i:]`` (``z[0] = len(t)``)."""
    n = len(t)
    z = [0] * n
    if n:
        z[0] = n
    lo = hi = 0
    for i in range(1, n):
        k = min(hi - i, z[i - lo]) if i < hi else 0
        while i + k < n and t[k] == t[i + k]:
            k += 1
        z[i] = k
        if i + k > hi:
            lo, hi = i, i + k
    return z


def prefix_periods_z(t: Word) -> list[int]:
    """Same as :func:`prefix_periods`, derived from the Z-array instead of borders.

    ``t[:i]`` has period p iff ``p + z[p] >= i``; the smallest such p never
    decreases as i grows.
    """
    n = len(t)
    z = z_array(t)
    out = []
    p = 1
    for i in range(1, n + 1):
        while p < i and p + z[p] < i:
            p += 1
        out.append(min(p, i))
    return out


def _absorbed_by_block(r: Word, v: Word) -> bool:
    p = len(r)
    for s in range(p):
        if all(r[(s + i) % p] == v[i] for i in range(len(v))):
            return True
    return False


def p0_oracle(v: Word, limit: int = DEFAULT_ORACLE_LIMIT) -> int:
    """``p0`` straight from its definition: try every block of every length."""
    if len(v) > limit:
        raise OracleLimitExceeded(f"len(v)={len(v)} exceeds oracle limit {limit}")
    if not v:
        return 0
    for p in range(1, len(v) + 1):
        for letters in itertools.product(LETTERS, repeat=p):
            if _absorbed_by_block("".join(letters), v):
                return p
    raise AssertionError("v absorbs itself; unreachable")


def rotations(r: Word) -> set[Word]:
    return {r[i:] + r[:i] for i in range(len(r))}


def min_repeat_blocks(v: Word) -> set[Word]:
    """All blocks of length ``p0(v)`` whose repetition absorbs ``v``.

    These are the rotations of ``v[:p0(v)]``.
    """
    if not v:
        raise ValueError("the empty word has no repeat block")
    return rotations(v[: p0(v)])


def occurrences(text: Word, v: Word) -> list[int]:
    out = []
    i = text.find(v)
    while i != -1:
        out.append(i)
        i = text.find(v, i + 1)
    return out


def preserving_letter(v: Word) -> str:
    """The letter ``c`` with ``p0(cv) == p0(v)``; ``a`` by convention for the empty word."""
    if not v:
        return "a"
    p = p0(v)
    keep = [c for c in LETTERS if p0(c + v) == p]
    if len(keep) != 1:
        raise AssertionError(f"letter dichotomy fails at {v!r}: {keep}")
    return keep[0]
