"""Contractive families of maps: an exact counterexample on a word tree and fixed-point solvers.

Two maps on finite binary words, ``S(w) = aw`` and ``T(w) = bw``, together
contract every pair of points of a weighted-tree metric by 3/4, yet no
composition of them has a fixed point in the completion.  For commuting
pairs on a complete space a common fixed point does exist, and
:mod:`ctrf.fixedpoint` computes it.
"""

__version__ = "0.1.0"

from .dyadic import Dyadic, format_dyadic, parse_dyadic
from .words import p0, p0_oracle, parse_word, format_word
from .treemetric import d_length, rho
from .counterexample import S, T, verify_contraction, verify_lipschitz, verify_no_fixed_point

__all__ = [
    "Dyadic",
    "format_dyadic",
    "parse_dyadic",
    "p0",
    "p0_oracle",
    "parse_word",
    "format_word",
    "d_length",
    "rho",
    "S",
    "T",
    "verify_contraction",
    "verify_lipschitz",
    "verify_no_fixed_point",
]
