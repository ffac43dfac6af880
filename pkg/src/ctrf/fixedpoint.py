"""Fixed points of contractive families on an abstract metric space.

A family of self-maps is gamma-contractive when every pair of points is
contracted by at least one member.  This module provides

* plain Banach iteration for a single contraction,
* the commuting-pair solver: walk by T unless the current point is
  sidestepping for T (T fails to contract ``(x, T x)``), in which case step by
  S; the T-displacement then shrinks by gamma every step, and sidestepping
  iterates are approximate common fixed points,
* extraction of an exact fixed point from a stream of approximate ones,
  with the Cauchy bound checked on every pair,
* the bounded / uniformly continuous induction for n commuting maps,
* an exhaustive solver for finite spaces.

Points are arbitrary Python objects; all geometry goes through
``MetricSpace.distance``.  Real arithmetic is floating point, so every
inequality is checked against an explicit tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .errors import (
    CauchyBoundViolated,
    MaxIterExceeded,
    ModulusViolated,
    NoCommonFixedPoint,
    NotClosedUnderMaps,
    NotContractiveWitness,
    OracleFailed,
)

Point = Any


@dataclass(frozen=True)
class MetricSpace:
    distance: Callable[[Point, Point], float]
    tolerance: float = 0.0
    name: str = ""

    def check_axioms(self, points: Sequence[Point]) -> list[str]:
        """Symmetry, identity and triangle violations on ``points`` (4x tolerance slack)."""
        slack = 4 * self.tolerance
        d = self.distance
        problems = []
        for x in points:
            if d(x, x) > self.tolerance:
                problems.append(f"d({x!r},{x!r}) = {d(x, x)!r}")
            for y in points:
                if abs(d(x, y) - d(y, x)) > slack:
                    problems.append(f"asymmetric at ({x!r},{y!r})")
                for z in points:
                    if d(x, z) > d(x, y) + d(y, z) + slack:
                        problems.append(f"triangle fails at ({x!r},{y!r},{z!r})")
        return problems


@dataclass(frozen=True)
class SelfMap:
    apply: Callable[[Point], Point]
    label: str = "f"

    def __call__(self, x: Point) -> Point:
        return self.apply(x)


@dataclass
class ContractiveFamily:
    space: MetricSpace
    maps: list[SelfMap]
    gamma: float
    commuting: bool = False
    # (x, y, chosen index, ratio) for every pointwise contraction check made
    checks: list[tuple] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if not self.maps:
            raise ValueError("a family needs at least one map")
        if not 0 < self.gamma < 1:
            raise ValueError("gamma must lie in (0, 1)")

    def displacements(self, x: Point) -> tuple[float, ...]:
        d = self.space.distance
        return tuple(d(x, f(x)) for f in self.maps)


@dataclass(frozen=True)
class ApproxFixedPointCertificate:
    point: Point
    epsilon: float
    displacements: tuple[float, ...]
    details: dict = field(default_factory=dict, compare=False)

    @property
    def certified(self) -> bool:
        return all(dv <= self.epsilon for dv in self.displacements)

    def recheck(self, family: ContractiveFamily) -> bool:
        """Recompute every displacement from scratch and compare with epsilon."""
        tol = family.space.tolerance
        return all(dv <= self.epsilon + tol for dv in family.displacements(self.point))

    def to_json(self) -> dict:
        return {
            "point": self.point,
            "epsilon": self.epsilon,
            "displacements": list(self.displacements),
            "certified": self.certified,
        }


ACTIONS = ("T-step", "S-step", "restart", "banach-step")


@dataclass(frozen=True)
class TraceStep:
    point: Point
    displacements: tuple[float, ...]
    action: str


@dataclass
class SolverTrace:
    iterates: list[TraceStep] = field(default_factory=list)
    outcome: dict | None = None
    # (p, q, (1-gamma) d(x_p, x_q), 2^-p + 2^-q) for every pair held during extraction
    bound_checks: list[tuple[int, int, float, float]] = field(default_factory=list)

    def record(self, point, displacements, action):
        if action not in ACTIONS:
            raise ValueError(f"unknown action {action!r}")
        self.iterates.append(TraceStep(point, tuple(displacements), action))

    def to_json(self) -> dict:
        return {
            "iterates": [
                {"point": s.point, "displacements": list(s.displacements), "action": s.action}
                for s in self.iterates
            ],
            "outcome": self.outcome,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


# -- single map ---------------------------------------------------------------


def banach_iterations(gamma: float, first_step: float, tol: float) -> int:
    """Steps after which ``d(x_n, f(x_n)) <= gamma**n * first_step <= tol``."""
    if first_step <= tol:
        return 0
    return math.ceil(math.log(tol / first_step) / math.log(gamma))


def banach(
    space: MetricSpace,
    f: SelfMap | Callable,
    gamma: float,
    x0: Point,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    trace: SolverTrace | None = None,
) -> Point:
    """Iterate ``f`` from ``x0`` until it moves the point by at most ``tol``."""
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    d = space.distance
    x = x0
    disp = d(x, f(x))
    # a-priori count plus headroom for rounding
    budget = min(max_iter, banach_iterations(gamma, disp, tol) + 64)
    for _ in range(budget + 1):
        if disp <= tol:
            return x
        x = f(x)
        disp = d(x, f(x))
        if trace is not None:
            trace.record(x, (disp,), "banach-step")
    raise MaxIterExceeded(f"displacement {disp!r} > {tol!r} after {budget} steps", disp, trace)


# -- families -------------------------------------------------------------------


def choose_contracting_map(family: ContractiveFamily, x: Point, y: Point) -> tuple[int, float]:
    """First map (in family order) with ``d(f x, f y) <= gamma d(x, y)``."""
    d = family.space.distance
    dxy = d(x, y)
    if dxy <= family.space.tolerance:
        raise ValueError("points coincide within tolerance")
    ratios = []
    for i, f in enumerate(family.maps):
        ratio = d(f(x), f(y)) / dxy
        ratios.append(ratio)
        if d(f(x), f(y)) <= family.gamma * dxy + family.space.tolerance:
            family.checks.append((x, y, i, ratio))
            return i, ratio
    family.checks.append((x, y, None, min(ratios)))
    raise NotContractiveWitness(x, y, ratios)


def is_sidestepping(
    space: MetricSpace, x: Point, T: SelfMap | Callable, gamma: float, tolerance: float = 0.0
) -> bool:
    """True iff ``d(T x, T T x) > gamma d(x, T x)``: T fails to contract ``(x, T x)``."""
    tx = T(x)
    return space.distance(tx, T(tx)) > gamma * space.distance(x, tx) + tolerance


@dataclass
class PairConfig:
    window: int = 20
    max_iter: int = 100_000
    sidestep_tolerance: float = 0.0
    decay_tolerance: float = 1e-12
    bound_tolerance: float = 1e-9
    max_rounds: int = 80


class CommutingPairRun:
    """One run of the commuting-pair iteration, resumable across epsilon requests.

    Each call to :meth:`approx` continues from the last iterate; the sequence
    is never rebuilt from the starting point.
    """

    def __init__(self, space, S, T, gamma, x0, trace=None, config=None):
        if not 0 < gamma < 1:
            raise ValueError("gamma must lie in (0, 1)")
        self.space = space
        self.S = S
        self.T = T
        self.gamma = gamma
        self.x = x0
        self.trace = trace if trace is not None else SolverTrace()
        self.config = config or PairConfig()
        self.steps = 0
        self._quiet = 0  # consecutive T-steps

    def _disp(self, x):
        d = self.space.distance
        return d(x, self.T(x)), d(x, self.S(x))

    def step(self) -> None:
        x, d = self.x, self.space.distance
        dT = d(x, self.T(x))
        side = is_sidestepping(self.space, x, self.T, self.gamma, self.config.sidestep_tolerance)
        nxt = self.S(x) if side else self.T(x)
        dT_next, dS_next = self._disp(nxt)
        if dT_next > self.gamma * dT + self.config.decay_tolerance:
            # T did not contract (x, Tx) and neither did S, up to commutation
            raise NotContractiveWitness(x, self.T(x), [d(self.S(x), self.S(self.T(x))) / dT, None])
        self.x = nxt
        self.steps += 1
        self._quiet = 0 if side else self._quiet + 1
        self.trace.record(nxt, (dS_next, dT_next), "S-step" if side else "T-step")

    def approx(self, eps: float) -> ApproxFixedPointCertificate:
        """Continue until an eps-approximate common fixed point is found."""
        if eps <= 0:
            raise ValueError("eps must be positive")
        g = self.gamma
        eta = 0.5 * min(eps, eps * (1 - g) ** 2 / (4 - g))
        cfg = self.config
        while True:
            dT, dS = self._disp(self.x)
            if dT < eta:
                side = is_sidestepping(self.space, self.x, self.T, g, cfg.sidestep_tolerance)
                if dS <= eps and (side or dT == 0):
                    return ApproxFixedPointCertificate(self.x, eps, (dS, dT))
                if not side and (dT == 0 or self._quiet >= cfg.window):
                    # orbit branch: T settles with no sidestepping in sight
                    return ApproxFixedPointCertificate(self.x, max(eps, dS, dT), (dS, dT),
                                                       {"orbit_branch": True})
            if self.steps >= cfg.max_iter:
                raise MaxIterExceeded(
                    f"no {eps}-approximate point after {self.steps} steps", dT, self.trace
                )
            self.step()


def approx_common_fixed_point_pair(
    space: MetricSpace,
    S: SelfMap,
    T: SelfMap,
    gamma: float,
    x0: Point,
    eps: float,
    max_iter: int = 100_000,
) -> tuple[ApproxFixedPointCertificate, SolverTrace]:
    """An eps-approximate common fixed point of a commuting contractive pair.

    Displacements in the certificate are ordered ``(S, T)``.
    """
    run = CommutingPairRun(space, S, T, gamma, x0, config=PairConfig(max_iter=max_iter))
    run.trace.record(x0, run._disp(x0)[::-1], "restart")
    cert = run.approx(eps)
    status = "certificate" if cert.certified and cert.epsilon == eps else "orbit"
    run.trace.outcome = {"status": status, "certificate": cert.to_json()}
    return cert, run.trace


def common_fixed_point_from_approx(
    family: ContractiveFamily,
    approx_oracle: Callable[[float], Point],
    tol: float,
    trace: SolverTrace | None = None,
    max_rounds: int = 80,
    bound_tolerance: float = 1e-9,
    min_rounds: int = 0,
) -> Point:
    """Exact common fixed point from arbitrarily good approximate ones.

    Requests ``x_m`` at ``eps = 2**-m`` for m = 0, 1, ...; checks every
    held pair against ``(1 - gamma) d(x_p, x_q) <= 2**-p + 2**-q`` and returns
    the first ``x_m`` (with ``m >= min_rounds``) that every map moves by at
    most ``tol``.  The pair bound is checked before the displacements, so an
    inconsistent oracle is reported as such even when its points look fixed.
    """
    d = family.space.distance
    g = family.gamma
    held: list[tuple[int, Point]] = []
    for m in range(max_rounds):
        eps = 2.0**-m
        x = approx_oracle(eps)
        for p, xp in held:
            lhs = (1 - g) * d(xp, x)
            rhs = 2.0**-p + eps
            if trace is not None:
                trace.bound_checks.append((p, m, lhs, rhs))
            if lhs > rhs + bound_tolerance:
                raise CauchyBoundViolated(p, m, lhs, rhs)
        disp = family.displacements(x)
        if max(disp) > eps + family.space.tolerance:
            raise OracleFailed(f"oracle point {x!r} has displacements {disp} > {eps}")
        held.append((m, x))
        if m >= min_rounds and max(disp) <= tol:
            return x
    raise MaxIterExceeded(f"no tol={tol} point after {max_rounds} rounds")


def _probe_orbit(family, x0, tol, cfg, trace):
    """Follow the T-orbit while it decays geometrically; its limit, or None.

    The orbit is declared Cauchy once ``cfg.window`` consecutive displacements
    shrink by at least ``(1 + gamma) / 2``; a slower step before that aborts.
    """
    d = family.space.distance
    T = family.maps[1]
    x = x0
    prev = d(x, T(x))
    rate = (1 + family.gamma) / 2
    decaying = 0
    for _ in range(cfg.max_iter):
        if prev <= tol:
            return x
        x = T(x)
        disp = family.displacements(x)
        trace.record(x, disp, "T-step")
        cur = disp[1]
        if cur <= rate * prev:
            decaying += 1
        elif decaying < cfg.window:
            return None
        prev = cur
    return None


def common_fixed_point_pair(
    space: MetricSpace,
    S: SelfMap,
    T: SelfMap,
    gamma: float,
    x0: Point,
    tol: float = 1e-9,
    config: PairConfig | None = None,
) -> tuple[Point, SolverTrace]:
    """The common fixed point of a commuting gamma-contractive pair.

    If the T-orbit of ``x0`` settles, its limit is fixed by T and S is a
    gamma-contraction on T's fixed set, so Banach iteration of S finishes.
    Otherwise approximate common fixed points from :class:`CommutingPairRun`
    are fed through :func:`common_fixed_point_from_approx`.
    """
    cfg = config or PairConfig()
    family = ContractiveFamily(space, [S, T], gamma, commuting=True)
    trace = SolverTrace()
    d = space.distance
    y = _probe_orbit(family, x0, tol, cfg, trace)
    if y is not None:
        if d(y, T(y)) > tol:
            raise AssertionError("orbit limit is not fixed by T")
        # S maps the fixed set of T into itself and contracts it by gamma
        z = y
        disp = family.displacements(z)
        for _ in range(cfg.max_iter):
            if disp[0] <= tol:
                break
            z = S(z)
            disp = family.displacements(z)
            trace.record(z, disp, "banach-step")
        if max(disp) <= tol:
            trace.outcome = {"status": "converged", "branch": "orbit", "point": z}
            return z, trace
    trace.record(x0, family.displacements(x0), "restart")
    run = CommutingPairRun(space, S, T, gamma, x0, trace, cfg)
    try:
        point = common_fixed_point_from_approx(
            family, lambda e: run.approx(e).point, tol, trace, cfg.max_rounds, cfg.bound_tolerance
        )
    except (MaxIterExceeded, OracleFailed, CauchyBoundViolated, NotContractiveWitness) as exc:
        trace.outcome = {"status": "failed", "reason": str(exc)}
        raise
    trace.outcome = {"status": "converged", "branch": "approximate", "point": point}
    return point, trace


# -- bounded, uniformly continuous families ---------------------------------------


def horizon(gamma: float, diameter: float, eps: float) -> int:
    """Smallest m with ``gamma**m * diameter < eps``."""
    m = 0
    while gamma**m * diameter >= eps:
        m += 1
    return m


def compose_modulus(moduli: Sequence[Callable[[float], float]]) -> Callable[[int, float], float]:
    """Joint modulus for all words of length <= m from per-map moduli.

    Conservative: applies the worst single-map modulus m times.
    """

    def joint(m: int, eps: float) -> float:
        delta = eps
        for _ in range(m):
            delta = min(mod(delta) for mod in moduli)
        return min(delta, eps)

    return joint


def uc_plan(family, modulus, diameter, eps):
    """Targets per induction level: ``[(k, eps_k, m_k)]`` for k = n .. 1."""
    plan = []
    target = eps
    for k in range(len(family.maps), 0, -1):
        m = horizon(family.gamma, diameter, target)
        plan.append((k, target, m))
        target = modulus(m, target)
        if not target > 0:
            raise ValueError("modulus returned a non-positive delta")
    return plan[::-1]


def bounded_uc_common_fixed_point(
    family: ContractiveFamily,
    modulus: Callable[[int, float], float],
    diameter: float,
    eps: float,
    x0: Point,
) -> ApproxFixedPointCertificate:
    """eps-approximate common fixed point of a bounded, uniformly continuous commuting family.

    Level k starts from a point that the first k-1 maps barely move and
    applies contracting maps to the pair ``(x, T_k x)`` until T_k moves it by
    less than the level target.  Commutativity keeps the images of the
    earlier displacements within the modulus.
    """
    d = family.space.distance
    plan = uc_plan(family, modulus, diameter, eps)
    x = x0
    steps_used = []
    for k, target, m in plan:
        Tk = family.maps[k - 1]
        steps = 0
        while d(x, Tk(x)) >= target:
            if steps >= m:
                raise MaxIterExceeded(f"level {k}: displacement still >= {target} after {m} steps")
            i, _ = choose_contracting_map(family, x, Tk(x))
            x = family.maps[i](x)
            steps += 1
        steps_used.append(steps)
        for j in range(k - 1):
            dj = d(x, family.maps[j](x))
            if dj >= target:
                raise ModulusViolated(f"map {j} moved x by {dj} >= {target} at level {k}")
    disp = family.displacements(x)
    details = {"plan": [list(p) for p in plan], "steps": steps_used}
    return ApproxFixedPointCertificate(x, eps, disp, details)


# -- finite spaces ------------------------------------------------------------------


def check_family(family: ContractiveFamily, points: Sequence[Point]) -> None:
    """Raise NotContractiveWitness unless every distinct pair of ``points`` is contracted."""
    d = family.space.distance
    for i, x in enumerate(points):
        for y in points[i + 1:]:
            if d(x, y) > family.space.tolerance:
                choose_contracting_map(family, x, y)


def finite_space_common_fixed_point(points: Sequence[Point], family: ContractiveFamily) -> Point:
    """Exhaustive search for the common fixed point on a finite space."""
    d = family.space.distance
    tol = family.space.tolerance
    for x in points:
        for f in family.maps:
            fx = f(x)
            if not any(d(fx, p) <= tol for p in points):
                raise NotClosedUnderMaps(f"{f.label}({x!r}) = {fx!r} is not a listed point")
    check_family(family, points)
    table = {repr(x): family.displacements(x) for x in points}
    fixed = [x for x in points if max(family.displacements(x)) <= tol]
    if not fixed:
        raise NoCommonFixedPoint(table)
    return fixed[0]
