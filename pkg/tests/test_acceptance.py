"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the lines are repeated
in the terminal summary) or as a script: ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import sys
import time
from functools import lru_cache

import numpy as np
import pytest

from ctrf import kernels
from ctrf.counterexample import (
    contraction_ratios,
    verify_contraction,
    verify_lipschitz,
    verify_no_fixed_point,
)
from ctrf.dyadic import Dyadic, sum_half_powers
from ctrf.fixedpoint import (
    ContractiveFamily,
    bounded_uc_common_fixed_point,
    common_fixed_point_pair,
)
from ctrf.spaces import reflection_pair, three_contractions
from ctrf.treemetric import rho
from ctrf.words import all_words, p0, p0_oracle, prefix_periods

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@lru_cache(maxsize=None)
def contraction_sweep(workers: int):
    t = time.perf_counter()
    rep = verify_contraction(10, (3, 4), workers=workers)
    return rep, time.perf_counter() - t


@lru_cache(maxsize=None)
def lipschitz_sweep(workers: int):
    return verify_lipschitz(10, workers=workers)


def pair_runs():
    ex = reflection_pair()
    S, T = ex.maps
    runs = []
    t = time.perf_counter()
    for x0 in (0.0, 0.1, 1.0):
        point, trace = common_fixed_point_pair(ex.space, S, T, 0.5, x0, tol=1e-9)
        runs.append((x0, point, trace))
    return runs, time.perf_counter() - t


def test_01_contraction_exhaustive():
    rep1, t1 = contraction_sweep(1)
    rep4, t4 = contraction_sweep(4)
    ok = (rep1.passed and rep1.failures == 0 and rep1.pairs_checked == 2_094_081
          and (rep1.factor_num, rep1.factor_den) == (3, 4) and t1 < 120 and t4 < 30)
    report(1, "4*min(rho(Sx,Sy), rho(Tx,Ty)) <= 3*rho(x,y), length <= 10", ok,
           f"{rep1.pairs_checked} pairs, {rep1.failures} failures, "
           f"{t1:.1f}s on 1 worker, {t4:.1f}s on 4")


def test_02_tightness():
    rep, _ = contraction_sweep(1)
    exact = contraction_ratios("a", "b")
    ok = ((rep.max_ratio_num, rep.max_ratio_den) == (3, 4) and rep.max_ratio_attained
          and ("a", "b") in rep.witnesses
          and rho("a", "b") == Dyadic(1)
          and rho("aa", "ab") == rho("ba", "bb") == Dyadic(3, 2)
          and exact[0] == exact[1] == 0.75)
    report(2, "maximum ratio is exactly 3/4, attained at (a, b)", ok,
           f"max ratio {rep.max_ratio_num}/{rep.max_ratio_den}, {rep.witness_count} pairs attain it")


def test_03_lipschitz():
    rep = lipschitz_sweep(1)
    ok = rep.passed and rep.failures == 0 and rep.pairs_checked == 2_094_081
    report(3, "S and T are 1-Lipschitz, length <= 10", ok,
           f"{rep.pairs_checked} pairs, max ratio {rep.max_ratio_num}/{rep.max_ratio_den}")


def test_04_no_fixed_point():
    bound = Dyadic(100)
    rep = verify_no_fixed_point(10, 6, bound)
    rechecked = 0
    for cert in rep.certificates:
        # independent re-sum with the border-array periods
        text = (cert.block * (cert.n // len(cert.block) + 1))[: cert.n]
        total = sum_half_powers(prefix_periods(text))
        rechecked += total == cert.partial_sum and total > bound
    ok = (rep.passed and not rep.finite_failures and rep.compositions == 126
          and rechecked == len(rep.certificates) == 126)
    report(4, "no composition of length <= 6 has a fixed point", ok,
           f"{rep.finite_checks} finite checks, {rechecked}/126 divergence certificates "
           f"exceed 100 after exact re-summation")


def test_05_period_oracle_and_dichotomy():
    t = time.perf_counter()
    oracle = kernels.p0_oracle_table(14)
    words = list(all_words(14))
    fast = [p0(w) for w in words]
    mismatches = sum(int(oracle[kernels.word_code(w)]) != p for w, p in zip(words, fast))
    literal = sum(p0_oracle(w) != p0(w) for w in all_words(8))
    bad_dichotomy = 0
    for w in words[1:]:
        p = p0(w)
        hits = [c for c in "ab" if p0(c + w) == p]
        other = [c for c in "ab" if c not in hits]
        if len(hits) != 1 or p0(other[0] + w) < p + 1:
            bad_dichotomy += 1
    elapsed = time.perf_counter() - t
    ok = len(words) == 2**15 - 1 and mismatches == 0 and literal == 0 and bad_dichotomy == 0 and elapsed < 60
    report(5, "p0 equals the oracle and exactly one letter preserves p0, length <= 14", ok,
           f"{len(words)} words, {mismatches} oracle mismatches, "
           f"{bad_dichotomy} dichotomy failures, {elapsed:.1f}s")


def test_06_metric_axioms():
    words = list(all_words(6))
    n = len(words)
    k = 6  # every edge weight is a multiple of 2^-6 at this depth
    dist = np.zeros((n, n), dtype=np.int64)
    for i, j in itertools.combinations(range(n), 2):
        dist[i, j] = rho(words[i], words[j]).scaled(k)
        dist[j, i] = rho(words[j], words[i]).scaled(k)
    symmetric = bool((dist == dist.T).all())
    identity = bool((np.diag(dist) == 0).all()) and bool((dist + np.eye(n, dtype=np.int64) > 0).all())
    # dist[i, k] <= dist[i, j] + dist[j, k] over every triple
    violations = int((dist[:, None, :] > dist[:, :, None] + dist[None, :, :]).sum())
    ok = symmetric and identity and violations == 0
    report(6, "metric axioms over all triples of words of length <= 6", ok,
           f"{n**3} triples, {violations} triangle violations, symmetric={symmetric}")


def test_07_commuting_pair_solver():
    runs, elapsed = pair_runs()
    errors = [abs(point - 0.5) for _, point, _ in runs]
    decay_ok = True
    for _, _, trace in runs:
        starts = [i for i, s in enumerate(trace.iterates) if s.action == "restart"]
        steps = trace.iterates[starts[-1]:] if starts else trace.iterates
        t_disp = [s.displacements[1] for s in steps]
        decay_ok &= all(b <= 0.5 * a + 1e-12 for a, b in zip(t_disp, t_disp[1:]))
    ok = max(errors) <= 1e-9 and decay_ok and elapsed < 1.0
    report(7, "commuting-pair solver finds 1/2 from 0, 0.1 and 1", ok,
           f"max error {max(errors):.2e}, decay invariant {'holds' if decay_ok else 'BROKEN'}, "
           f"{elapsed * 1000:.1f} ms")


def test_08_cauchy_bound():
    runs, _ = pair_runs()
    checks = [c for _, _, trace in runs for c in trace.bound_checks]
    worst = max(lhs - rhs for _, _, lhs, rhs in checks)
    ok = bool(checks) and worst <= 1e-9
    report(8, "(1-gamma) d(x_p, x_q) <= 2^-p + 2^-q during extraction", ok,
           f"{len(checks)} pairs checked, worst slack {worst:.3e}")


def test_09_bounded_uniform_case():
    ex = three_contractions()
    fam = ContractiveFamily(ex.space, ex.maps, ex.gamma, commuting=True)
    eps = 1e-4
    cert = bounded_uc_common_fixed_point(fam, ex.modulus, ex.diameter, eps, ex.x0)
    plan = cert.details["plan"]
    horizon_ok = all(ex.gamma**m * ex.diameter < e for _, e, m in plan)
    ok = cert.certified and cert.recheck(fam) and horizon_ok
    report(9, "three commuting contractions give a 1e-4 certificate", ok,
           f"point {cert.point:.6f}, max displacement {max(cert.displacements):.2e}, "
           f"m = {[m for _, _, m in plan]}")


def test_10_determinism():
    same_sweep = contraction_sweep(1)[0].dumps() == contraction_sweep(4)[0].dumps()
    same_lip = lipschitz_sweep(1).dumps() == lipschitz_sweep(4).dumps()
    traces_a = [trace.dumps() for _, _, trace in pair_runs()[0]]
    traces_b = [trace.dumps() for _, _, trace in pair_runs()[0]]
    ok = same_sweep and same_lip and traces_a == traces_b
    report(10, "reports identical for 1 and 4 workers, traces identical across reruns", ok,
           f"sweep={same_sweep}, lipschitz={same_lip}, traces={traces_a == traces_b}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
