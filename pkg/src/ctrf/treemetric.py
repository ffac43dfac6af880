"""The weighted word tree and its path metric.

The edge between ``w[:-1]`` and ``w`` has weight ``2**-p0(w)``, keyed on the
longer endpoint.  ``l_d(w)`` is the sum of weights from the root to ``w`` and
``rho(u, v) = l_d(u) + l_d(v) - 2 l_d(u ^ v)`` with ``u ^ v`` the meet.

Infinite words enter through :class:`CompletionPoint`.  Their d-length is an
infinite series, so distances involving them come back as intervals whose
width is a certified tail bound, or as an open interval when no bound is
known.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .dyadic import Dyadic, format_dyadic, sum_half_powers
from .errors import EmptyWord, MeetUndetermined, NotInCompletion, ScanLimitExceeded
from .words import (
    InfiniteWordStream,
    Word,
    all_words,
    format_word,
    meet,
    p0,
    prefix_periods,
)

UNKNOWN = "unknown"
INFINITE = "infinite"


@dataclass(frozen=True)
class Edge:
    parent: Word
    child: Word
    weight: Dyadic

    @classmethod
    def to(cls, child: Word) -> Edge:
        return cls(child[:-1], child, edge_weight(child))


def edge_weight(w: Word) -> Dyadic:
    """Weight of the edge ending at ``w``: ``2**-p0(w)``."""
    if not w:
        raise EmptyWord("the root has no parent edge")
    return Dyadic.half_power(p0(w))


def d_length(w: Word) -> Dyadic:
    return sum_half_powers(prefix_periods(w))


def rho(u: Word, v: Word) -> Dyadic:
    m = meet(u, v)
    return d_length(u) + d_length(v) - d_length(m) * 2


def path_edges(u: Word, v: Word) -> list[Edge]:
    """Edges on the tree path from ``u`` up to the meet and down to ``v``."""
    m = len(meet(u, v))
    return [Edge.to(u[:i]) for i in range(len(u), m, -1)] + [
        Edge.to(v[:i]) for i in range(m + 1, len(v) + 1)
    ]


# -- infinite words -----------------------------------------------------------


@dataclass(frozen=True)
class TailCertificate:
    """Exact partial d-length of an infinite word plus a bound on what is left.

    ``tail_bound`` is a :class:`Dyadic` dominating the remaining series, the
    marker ``"infinite"`` (every term is at least ``2**-divergence_witness``)
    or ``"unknown"``.
    """

    depth_checked: int
    partial_sum: Dyadic
    tail_bound: Dyadic | str
    divergence_witness: int | None = None

    @property
    def bounded(self) -> bool:
        return isinstance(self.tail_bound, Dyadic)


def d_length_partial(z: InfiniteWordStream, n: int) -> TailCertificate:
    """``sum_{i<n} d(z|_i, z|_{i+1})`` exactly, with a tail bound when one is certifiable."""
    if n < 1:
        raise ValueError("n must be at least 1")
    periods = prefix_periods(z.prefix(n))
    partial = sum_half_powers(periods)
    if z.repeat_block:
        # every prefix of r r r ... occurs in it, so each term is >= 2^-len(r)
        return TailCertificate(n, partial, INFINITE, len(z.repeat_block))
    g = z.period_lower_bound
    if g is not None and z.tail_sum_bound is not None:
        if all(p >= g(i) for i, p in enumerate(periods, start=1)):
            return TailCertificate(n, partial, z.tail_sum_bound(n + 1))
    return TailCertificate(n, partial, UNKNOWN)


def periodic_divergence_certificate(r: Word, bound: Dyadic) -> int:
    """Smallest N with ``l_d((r r r ...)|_N) > bound``, verified by exact summation.

    Every term is at least ``2**-len(r)``, so ``N <= ceil(bound * 2**len(r)) + 1``.
    """
    if not r:
        raise EmptyWord("repeat block must be nonempty")
    k = len(r)
    # ceil(bound * 2^k) for a dyadic bound
    scaled = bound.mantissa << k
    a_priori = -(-scaled // (1 << bound.exponent)) + 1
    text = (r * (a_priori // k + 1))[:a_priori]
    periods = prefix_periods(text)
    scale = max(periods)
    target = bound.mantissa << scale  # compare total * 2^e against bound * 2^scale
    total = 0
    for n, p in enumerate(periods, start=1):
        total += 1 << (scale - p)
        if total << bound.exponent > target:
            return n
    raise AssertionError(f"partial sum at N={a_priori} does not exceed {bound}")


def periodic_term_threshold(r: Word, horizon: int | None = None) -> int:
    """Least ``i*`` with ``d(z|_i, z|_{i+1}) == 2**-len(r)`` for all ``i*<=i<horizon``.

    ``z = r r r ...`` with ``r`` primitive.  Measured, not assumed.
    """
    if horizon is None:
        horizon = 4 * len(r) + 8
    periods = prefix_periods((r * (horizon // len(r) + 2))[:horizon])
    i = horizon - 1
    while i >= 0 and periods[i] == len(r):
        i -= 1
    return i + 1


@dataclass(frozen=True)
class CompletionPoint:
    """A finite word, or an infinite word read to ``truncation_depth`` letters."""

    word: Word | None = None
    stream: InfiniteWordStream | None = None
    truncation_depth: int = 0

    def __post_init__(self):
        if (self.word is None) == (self.stream is None):
            raise ValueError("exactly one of word/stream must be given")
        if self.stream is not None and self.truncation_depth < 1:
            raise ValueError("truncation_depth must be >= 1")

    @classmethod
    def finite(cls, w: Word) -> CompletionPoint:
        return cls(word=w)

    @classmethod
    def infinite(cls, z: InfiniteWordStream, depth: int) -> CompletionPoint:
        return cls(stream=z, truncation_depth=depth)

    @property
    def is_finite(self) -> bool:
        return self.word is not None


@dataclass(frozen=True)
class DyadicInterval:
    lo: Dyadic
    hi: Dyadic | None  # None: no upper bound certified

    def __contains__(self, x: Dyadic) -> bool:
        return self.lo <= x and (self.hi is None or x <= self.hi)

    @property
    def width(self) -> Dyadic | None:
        return None if self.hi is None else self.hi - self.lo


def _stream_side(z: InfiniteWordStream, depth: int, m: Word) -> tuple[Dyadic, Dyadic | None]:
    cert = d_length_partial(z, max(depth, len(m), 1))
    if cert.tail_bound == INFINITE:
        raise NotInCompletion(f"{z.description} has infinite d-length")
    tail = cert.tail_bound if cert.bounded else None
    return cert.partial_sum - d_length(m), tail


def rho_points(x: CompletionPoint, y: CompletionPoint) -> DyadicInterval:
    """Interval containing ``rho(x, y)``; a single point when both are finite."""
    if x.is_finite and y.is_finite:
        r = rho(x.word, y.word)
        return DyadicInterval(r, r)
    if x.is_finite:
        x, y = y, x
    if y.is_finite:
        m = meet(y.word, x.stream)
        lo, tail = _stream_side(x.stream, x.truncation_depth, m)
        lo = lo + d_length(y.word) - d_length(m)
        return DyadicInterval(lo, None if tail is None else lo + tail)
    limit = min(x.truncation_depth, y.truncation_depth)
    try:
        m = meet(x.stream, y.stream, scan_limit=limit)
    except ScanLimitExceeded as exc:
        raise MeetUndetermined(str(exc)) from None
    lo_x, tail_x = _stream_side(x.stream, x.truncation_depth, m)
    lo_y, tail_y = _stream_side(y.stream, y.truncation_depth, m)
    lo = lo_x + lo_y
    if tail_x is None or tail_y is None:
        return DyadicInterval(lo, None)
    return DyadicInterval(lo, lo + tail_x + tail_y)


# -- sequences ------------------------------------------------------------------


@dataclass(frozen=True)
class EventuallyConstant:
    word: Word
    finite_evidence: bool = True


@dataclass(frozen=True)
class StabilizedPrefix:
    prefix: Word
    finite_evidence: bool = True


@dataclass(frozen=True)
class Undetermined:
    finite_evidence: bool = True


def classify_word_sequence(ws: Sequence[Word], window: int = 3):
    """Finite-evidence verdict on whether a word sequence is eventually constant.

    The last ``window`` elements decide: all equal gives
    :class:`EventuallyConstant`; otherwise their common prefix, if nonempty,
    is reported as :class:`StabilizedPrefix`.
    """
    if not ws:
        raise ValueError("empty sequence")
    if len(ws) < window:
        return Undetermined()
    tail = list(ws[-window:])
    if all(w == tail[0] for w in tail):
        return EventuallyConstant(tail[0])
    common = tail[0]
    for w in tail[1:]:
        common = meet(common, w)
    if not common:
        return Undetermined()
    return StabilizedPrefix(common)


# -- export -----------------------------------------------------------------------


def to_dot(depth: int) -> str:
    """DOT rendering of the tree down to ``depth`` with exact edge weights."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    lines = ["digraph word_tree {", '  node [shape=circle, fontsize=10];']
    for w in all_words(depth):
        lines.append(f'  "{format_word(w)}";')
    for w in all_words(depth, min_len=1):
        label = format_dyadic(edge_weight(w))
        lines.append(f'  "{format_word(w[:-1])}" -> "{w}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
