"""Named example spaces for the fixed-point solvers.

Each entry bundles a metric, its maps, a contraction constant and a default
start.  ``finite-table:<file>`` reads a finite space from JSON::

    {"points": [0, 1, 2],
     "distance": [[0, 1, 2], [1, 0, 1], [2, 1, 0]],   # optional, else |x - y|
     "gamma": 0.5,
     "maps": {"S": [0, 0, 0], "T": [0, 0, 1]}}         # image index per point
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .errors import NotClosedUnderMaps
from .fixedpoint import MetricSpace, SelfMap

FLOAT_TOL = 1e-15


def _abs_dist(x: float, y: float) -> float:
    return abs(x - y)


@dataclass
class ExampleSpace:
    name: str
    space: MetricSpace
    maps: list[SelfMap]
    gamma: float
    x0: Any
    kind: str  # "banach", "pair", "uniform" or "finite"
    diameter: float | None = None
    modulus: Callable[[int, float], float] | None = None
    points: list = field(default_factory=list)
    answer: Any = None  # known common fixed point, if any


def real_line_affine() -> ExampleSpace:
    sp = MetricSpace(_abs_dist, FLOAT_TOL, "real line")
    f = SelfMap(lambda x: x / 2 + 1, "x/2+1")
    return ExampleSpace("real-line-affine", sp, [f], 0.5, 0.0, "banach", answer=2.0)


def reflection_pair() -> ExampleSpace:
    sp = MetricSpace(_abs_dist, FLOAT_TOL, "[0,1]")
    S = SelfMap(lambda x: 0.5 + (x - 0.5) / 2, "S")
    T = SelfMap(lambda x: 1.0 - x, "T")
    return ExampleSpace("unit-interval-reflection-pair", sp, [S, T], 0.5, 0.0, "pair",
                        diameter=1.0, answer=0.5)


def _shrink_toward_half(i: int) -> SelfMap:
    scale = 2.0**-i
    return SelfMap(lambda x: 0.5 + (x - 0.5) * scale, f"f{i}")


def three_contractions() -> ExampleSpace:
    # each map is 1-Lipschitz, so delta = eps works for every word
    sp = MetricSpace(_abs_dist, FLOAT_TOL, "[0,1]")
    maps = [_shrink_toward_half(i) for i in (1, 2, 3)]
    return ExampleSpace("unit-interval-three-contractions", sp, maps, 0.5, 0.0, "uniform",
                        diameter=1.0, modulus=lambda m, eps: eps, answer=0.5)


def finite_table(path: str | Path) -> ExampleSpace:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    points = list(doc["points"])
    n = len(points)
    if n == 0:
        raise ValueError("finite table has no points")
    index = {json.dumps(p, sort_keys=True): i for i, p in enumerate(points)}
    if len(index) != n:
        raise ValueError("finite table lists a point twice")
    if "distance" in doc:
        table = doc["distance"]
        if len(table) != n or any(len(row) != n for row in table):
            raise ValueError("distance table must be n x n")

        def dist(x, y):
            return float(table[index[json.dumps(x, sort_keys=True)]][index[json.dumps(y, sort_keys=True)]])
    else:
        dist = _abs_dist
    maps = []
    for label, images in sorted(doc["maps"].items()):
        if len(images) != n:
            raise ValueError(f"map {label} must list one image per point")
        for k in images:
            if not (isinstance(k, int) and 0 <= k < n):
                raise NotClosedUnderMaps(f"map {label} sends a point to index {k!r}")
        lookup = {json.dumps(p, sort_keys=True): points[k] for p, k in zip(points, images)}
        maps.append(SelfMap(lambda x, lookup=lookup: lookup[json.dumps(x, sort_keys=True)], label))
    if not maps:
        raise ValueError("finite table defines no maps")
    sp = MetricSpace(dist, 0.0, str(path))
    return ExampleSpace(f"finite-table:{path}", sp, maps, float(doc["gamma"]), points[0],
                        "finite", points=points)


BUILTIN = {
    "real-line-affine": real_line_affine,
    "unit-interval-reflection-pair": reflection_pair,
    "unit-interval-three-contractions": three_contractions,
}


def space_names() -> list[str]:
    return [*BUILTIN, "finite-table:<file>"]


def get_space(name: str) -> ExampleSpace:
    if name.startswith("finite-table:"):
        return finite_table(name.split(":", 1)[1])
    try:
        return BUILTIN[name]()
    except KeyError:
        raise KeyError(f"unknown space {name!r}; choose from {', '.join(space_names())}") from None
