"""The maps S(w) = aw and T(w) = bw on the word tree, and exhaustive verifiers.

Together S and T contract every pair of distinct points by 3/4, yet no
composition of them has a fixed point.  The verifiers here check, exactly
and exhaustively up to a word length:

* the 3/4 contraction inequality and that 3/4 is attained,
* that both maps are 1-Lipschitz,
* that no composition fixes a finite word, and that the only candidate
  infinite fixed point (a periodic word) has divergent d-length.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import kernels
from .dyadic import Dyadic, dy_sum, format_dyadic, sum_half_powers
from .errors import EqualPoints
from .treemetric import (
    CompletionPoint,
    Edge,
    path_edges,
    periodic_divergence_certificate,
    rho,
)
from .words import (
    InfiniteWordStream,
    Word,
    all_words,
    format_word,
    prefix_periods_z,
    preserving_letter,
)

DEFAULT_MAX_WITNESSES = 128


@dataclass(frozen=True)
class GeneratorMap:
    letter: str

    @property
    def word(self) -> Word:
        return self.letter

    def __call__(self, x):
        return apply(self, x)


@dataclass(frozen=True)
class Composition:
    """``w -> word + w``: the generator maps for ``word[-1]``, ..., ``word[0]`` in turn."""

    word: Word

    def __post_init__(self):
        if not self.word or self.word.strip("ab"):
            raise ValueError(f"bad composition word {self.word!r}")

    @classmethod
    def of(cls, *maps: GeneratorMap) -> Composition:
        """``Composition.of(R_k, ..., R_1)`` is ``R_k o ... o R_1``."""
        return cls("".join(m.letter for m in maps))

    def __call__(self, x):
        return apply(self, x)


S = GeneratorMap("a")
T = GeneratorMap("b")


def _prepend_stream(prefix: Word, z: InfiniteWordStream) -> InfiniteWordStream:
    k = len(prefix)

    def letter_at(n: int) -> str:
        return prefix[n - 1] if n <= k else z.letter_at(n - k)

    block = None
    if z.repeat_block:
        r = z.repeat_block
        if prefix == (r * (k // len(r) + 1))[-k:]:
            block = (prefix + r)[: len(r)]
    g = z.period_lower_bound
    tail = z.tail_sum_bound
    bound = tail_bound = None
    if g is not None and tail is not None:
        # p0(c v) >= p0(v), so the prefix only shifts the bound
        def bound(i: int) -> int:
            return g(i - k) if i > k else 0

        def tail_bound(m: int):
            if m > k:
                return tail(m - k)
            return tail(1) + Dyadic(k - m + 1)

    return InfiniteWordStream(
        letter_at, f"{prefix}.{z.description}", bound, tail_bound, repeat_block=block
    )


def apply(m: GeneratorMap | Composition, x):
    """Prepend the map's word to a finite word, an infinite word or a completion point."""
    prefix = m.word
    if isinstance(x, str):
        return prefix + x
    if isinstance(x, InfiniteWordStream):
        return _prepend_stream(prefix, x)
    if isinstance(x, CompletionPoint):
        if x.is_finite:
            return CompletionPoint.finite(prefix + x.word)
        return CompletionPoint.infinite(
            _prepend_stream(prefix, x.stream), x.truncation_depth + len(prefix)
        )
    raise TypeError(f"cannot apply a word map to {type(x).__name__}")


# -- edge partition and ratios -------------------------------------------------


@dataclass(frozen=True)
class EdgePartition:
    """Edges of the x-y path split by the letter that preserves p0 of their lower end.

    S halves the weight of every edge in ``edges_b``; T halves ``edges_a``.
    """

    edges_a: tuple[Edge, ...]
    edges_b: tuple[Edge, ...]
    sum_a: Dyadic
    sum_b: Dyadic


def classify_edges(x: Word, y: Word) -> EdgePartition:
    if x == y:
        raise EqualPoints("x and y coincide")
    edges = path_edges(x, y)
    ea = tuple(e for e in edges if preserving_letter(e.child) == "a")
    eb = tuple(e for e in edges if preserving_letter(e.child) == "b")
    return EdgePartition(ea, eb, dy_sum(e.weight for e in ea), dy_sum(e.weight for e in eb))


def contraction_ratios(x: Word, y: Word) -> tuple[Fraction, Fraction, str]:
    """Exact ``rho(Mx, My) / rho(x, y)`` for S and T, and the smaller one ("S" on ties)."""
    if x == y:
        raise EqualPoints("x and y coincide")
    r = rho(x, y).as_fraction()
    rs = rho(S(x), S(y)).as_fraction() / r
    rt = rho(T(x), T(y)).as_fraction() / r
    return rs, rt, "S" if rs <= rt else "T"


# -- exhaustive sweeps ------------------------------------------------------------


@dataclass
class SweepReport:
    kind: str
    max_len: int
    pairs_checked: int
    factor_num: int
    factor_den: int
    max_ratio_num: int
    max_ratio_den: int
    max_ratio_attained: bool
    passed: bool
    failures: int
    witness_count: int
    witnesses: list[tuple[Word, Word]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "max_len": self.max_len,
            "pairs_checked": self.pairs_checked,
            "factor": f"{self.factor_num}/{self.factor_den}",
            "passed": self.passed,
            "max_ratio": {"num": self.max_ratio_num, "den": self.max_ratio_den},
            "max_ratio_attained": self.max_ratio_attained,
            "failures": self.failures,
            "witness_count": self.witness_count,
            "witnesses": [[format_word(u), format_word(v)] for u, v in self.witnesses],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def _row_chunks(n_words: int, parts: int) -> list[tuple[int, int]]:
    # rows i have n_words-1-i pairs; cut into pieces of similar pair counts
    total = n_words * (n_words - 1) // 2
    target = max(1, -(-total // parts))
    chunks, lo, acc = [], 0, 0
    for i in range(n_words):
        acc += n_words - 1 - i
        if acc >= target:
            chunks.append((lo, i + 1))
            lo, acc = i + 1, 0
    if lo < n_words:
        chunks.append((lo, n_words))
    return chunks


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("CTRF_WORKERS", "1")))
    except ValueError:
        return 1


def _sweep(kind, max_len, mode, fnum, fden, workers, max_witnesses, use_numba):
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if fnum <= 0 or fden <= 0:
        raise ValueError("factor must be a positive fraction")
    depth = max_len + 1  # images S(w), T(w) are one letter longer
    if 2 * (depth + (2 * depth).bit_length() + max(fnum, fden).bit_length()) > 62:
        raise ValueError(f"max_len={max_len} too large for exact int64 sweep")
    p0tab = kernels.p0_table(depth, use_numba)
    dlen = kernels.dlen_table(p0tab, depth)
    n_words = (1 << (max_len + 1)) - 1
    workers = max(1, workers or 1)
    chunks = _row_chunks(n_words, 4 * workers)

    def run(chunk):
        lo, hi = chunk
        return kernels.sweep_rows(lo, hi, n_words, dlen, mode, fnum, fden, max_witnesses, use_numba)

    if workers == 1:
        results = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run, chunks))

    pairs = sum(r[0] for r in results)
    bn, bd = -1, 1
    for r in results:
        if r[0] and r[1] * bd > bn * r[2]:
            bn, bd = r[1], r[2]
    fails, eqs = [], []
    n_fail = n_eq = 0
    for r in results:
        n_fail += r[3]
        fails.extend(zip(r[4].tolist(), r[5].tolist()))
        if r[0] and r[1] * bd == bn * r[2]:
            n_eq += r[6]
            eqs.extend(zip(r[7].tolist(), r[8].tolist()))
    g = gcd(bn, bd)
    bn, bd = bn // g, bd // g
    passed = n_fail == 0
    chosen = eqs if passed else fails
    witnesses = [(kernels.code_word(a), kernels.code_word(b)) for a, b in chosen[:max_witnesses]]
    return SweepReport(
        kind=kind,
        max_len=max_len,
        pairs_checked=pairs,
        factor_num=fnum // gcd(fnum, fden),
        factor_den=fden // gcd(fnum, fden),
        max_ratio_num=bn,
        max_ratio_den=bd,
        max_ratio_attained=bn * fden == fnum * bd,
        passed=passed,
        failures=n_fail,
        witness_count=n_eq if passed else n_fail,
        witnesses=witnesses,
    )


def verify_contraction(
    max_len: int = 10,
    factor: tuple[int, int] | Fraction = (3, 4),
    workers: int = 1,
    max_witnesses: int = DEFAULT_MAX_WITNESSES,
    use_numba: bool | None = None,
) -> SweepReport:
    """Check ``min(rho(Sx,Sy), rho(Tx,Ty)) <= factor * rho(x,y)`` for all distinct x, y.

    Words range over lengths ``<= max_len``; arithmetic is exact.  Witnesses
    are the pairs attaining the largest ratio, or the failing pairs.
    """
    if isinstance(factor, Fraction):
        factor = (factor.numerator, factor.denominator)
    fnum, fden = factor
    return _sweep("contraction", max_len, kernels.MODE_CONTRACTION, fnum, fden,
                  workers, max_witnesses, use_numba)


def verify_lipschitz(
    max_len: int = 10,
    workers: int = 1,
    max_witnesses: int = DEFAULT_MAX_WITNESSES,
    use_numba: bool | None = None,
) -> SweepReport:
    """Check ``rho(Mx, My) <= rho(x, y)`` for M in {S, T} over all pairs."""
    return _sweep("lipschitz", max_len, kernels.MODE_LIPSCHITZ, 1, 1,
                  workers, max_witnesses, use_numba)


# -- fixed points -------------------------------------------------------------------


@dataclass
class DivergenceCertificate:
    block: Word
    n: int
    partial_sum: Dyadic
    bound: Dyadic

    @property
    def verified(self) -> bool:
        return self.partial_sum > self.bound

    def to_json(self) -> dict:
        return {
            "block": self.block,
            "n": self.n,
            "partial_sum": format_dyadic(self.partial_sum),
            "bound": format_dyadic(self.bound),
            "verified": self.verified,
        }


@dataclass
class NoFixedPointReport:
    max_word_len: int
    max_comp_len: int
    bound: Dyadic
    compositions: int
    finite_checks: int
    finite_failures: list[tuple[Word, Word]]
    certificates: list[DivergenceCertificate]

    @property
    def passed(self) -> bool:
        return not self.finite_failures and all(c.verified for c in self.certificates)

    def to_json(self) -> dict:
        return {
            "kind": "no-fixed-point",
            "max_word_len": self.max_word_len,
            "max_comp_len": self.max_comp_len,
            "bound": format_dyadic(self.bound),
            "compositions": self.compositions,
            "finite_checks": self.finite_checks,
            "finite_failures": [[u, format_word(w)] for u, w in self.finite_failures],
            "certificates": [c.to_json() for c in self.certificates],
            "passed": self.passed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def default_divergence_bound(max_word_len: int) -> Dyadic:
    """Twice the largest d-length among words of length <= max_word_len."""
    tab = kernels.dlen_table(kernels.p0_table(max_word_len), max_word_len)
    return Dyadic(2 * int(tab.max()), max_word_len)


def verify_no_fixed_point(
    max_word_len: int = 10,
    max_comp_len: int = 6,
    bound: Dyadic | None = None,
) -> NoFixedPointReport:
    """No composition of S and T has a fixed point, checked to the given sizes.

    Finite words: ``U(w)`` is longer than ``w``.  Infinite words: ``U(z) = z``
    forces ``z = U U U ...``, whose d-length is shown to exceed ``bound``.
    """
    if max_word_len < 1 or max_comp_len < 1:
        raise ValueError("lengths must be >= 1")
    if bound is None:
        bound = default_divergence_bound(max_word_len)
    words = list(all_words(max_word_len))
    comps = list(all_words(max_comp_len, min_len=1))
    failures = []
    checks = 0
    for u in comps:
        for w in words:
            image = u + w
            checks += 1
            if len(image) <= len(w) or image == w:
                failures.append((u, w))
    certs = []
    for u in comps:
        n = periodic_divergence_certificate(u, bound)
        # re-sum with periods from the Z-array, independent of the border-array pass
        text = (u * (n // len(u) + 1))[:n]
        total = sum_half_powers(prefix_periods_z(text))
        certs.append(DivergenceCertificate(u, n, total, bound))
    return NoFixedPointReport(max_word_len, max_comp_len, bound, len(comps), checks, failures, certs)
