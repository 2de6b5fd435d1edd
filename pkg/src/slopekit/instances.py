"""Instance files, deterministic generators, and dominated-pair constructors.

An instance bundles a metric space, a neighborhood system, and named
scalar fields.  It serializes to a JSON object that round-trips all
numeric data exactly and regenerates bit-identically from
(generator, seed, parameters).  The PRNG is numpy's PCG64, recorded in
the provenance.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .config import resolve_tol
from .errors import FatalFinding, ParameterError
from .metric_space import (MetricSpace, NeighborhoodSystem,
                           all_pairs_neighborhoods, ball_neighborhoods,
                           explicit_neighborhoods, grid_space, metric_closure,
                           shortest_path_space)
from .slope_core import INF, ScalarField, global_slope, scale_field, truncate

PRNG_ALGORITHM = "numpy PCG64"


@dataclass(eq=False)
class Instance:
    space: MetricSpace
    nbhd: NeighborhoodSystem
    fields: dict                      # name -> ScalarField
    seed: int = 0
    provenance: dict = field(default_factory=dict)
    metric_spec: dict = None          # JSON "metric" entry for round-trip
    nbhd_spec: dict = None            # JSON "neighborhoods" entry

    def __post_init__(self):
        if self.metric_spec is None:
            self.metric_spec = {
                "kind": "matrix", "dist": [list(row) for row in self.space.dist]}
        if self.nbhd_spec is None:
            idx = self.space.index
            adj = sorted(
                (idx(p), idx(q))
                for p in self.space.points for q in self.nbhd.of(p) if idx(p) < idx(q))
            self.nbhd_spec = {"kind": "explicit", "adj": [list(e) for e in adj]}

    def field(self, name: str) -> ScalarField:
        try:
            return self.fields[name]
        except KeyError:
            raise ParameterError(f"instance has no field {name!r}; "
                                 f"available: {sorted(self.fields)}")

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.space == other.space
                and self.nbhd == other.nbhd
                and self.fields == other.fields
                and self.seed == other.seed
                and self.provenance == other.provenance)

    def to_dict(self) -> dict:
        return {
            "points": list(self.space.points),
            "metric": self.metric_spec,
            "neighborhoods": self.nbhd_spec,
            "fields": {
                name: ["inf" if v == INF else v for v in f.values]
                for name, f in sorted(self.fields.items())
            },
            "seed": self.seed,
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _space_from_spec(points, spec) -> MetricSpace:
    kind = spec.get("kind")
    if kind == "matrix":
        return MetricSpace(tuple(points), np.asarray(spec["dist"], dtype=float))
    if kind == "graph":
        edges = [(int(i), int(j), float(w)) for i, j, w in spec["edges"]]
        return shortest_path_space(points, edges)
    if kind == "grid":
        p = spec.get("p", 2)
        p = math.inf if p == "inf" else float(p)
        space, _ = grid_space(spec["bounds"], spec["resolution"], p)
        if list(space.points) != list(points):
            raise ParameterError("grid points do not match the points list")
        return space
    raise ParameterError(f"unknown metric kind {kind!r}")


def _nbhd_from_spec(space: MetricSpace, spec, metric_spec) -> NeighborhoodSystem:
    kind = spec.get("kind")
    if kind == "ball":
        return ball_neighborhoods(space, float(spec["r"]))
    if kind == "explicit":
        pairs = [(space.points[int(i)], space.points[int(j)])
                 for i, j in spec["adj"]]
        return explicit_neighborhoods(space, pairs)
    if kind == "all":
        return all_pairs_neighborhoods(space)
    if kind == "grid":
        p = metric_spec.get("p", 2)
        p = math.inf if p == "inf" else float(p)
        _, nbhd = grid_space(metric_spec["bounds"], metric_spec["resolution"], p)
        return nbhd
    raise ParameterError(f"unknown neighborhood kind {kind!r}")


def instance_from_dict(obj: dict) -> Instance:
    points = [str(p) for p in obj["points"]]
    space = _space_from_spec(points, obj["metric"])
    nbhd = _nbhd_from_spec(space, obj["neighborhoods"], obj["metric"])
    fields = {
        name: ScalarField(space, tuple(INF if v == "inf" else float(v)
                                       for v in vals))
        for name, vals in obj.get("fields", {}).items()
    }
    return Instance(space, nbhd, fields,
                    seed=_seed_repr(obj.get("seed", 0)),
                    provenance=obj.get("provenance", {}),
                    metric_spec=obj["metric"],
                    nbhd_spec=obj["neighborhoods"])


def load_instance(path) -> Instance:
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def save_instance(instance: Instance, path):
    with open(path, "w") as fh:
        fh.write(instance.to_json())
        fh.write("\n")


def _seed_repr(seed):
    """Seeds may be ints or lists of ints (numpy seed sequences)."""
    if isinstance(seed, (list, tuple)):
        return [int(s) for s in seed]
    return int(seed)


def _random_field_values(rng, n, p_inf=0.0, low=0.0, high=3.0):
    vals = rng.uniform(low, high, size=n)
    out = [INF if rng.random() < p_inf else float(v) for v in vals]
    if p_inf < 1.0 and all(v == INF for v in out):
        out[int(rng.integers(0, n))] = float(rng.uniform(low, high))
    return tuple(out)


def gen_random_instance(seed, n_points, metric_kind="graph",
                        field_spec=None) -> Instance:
    """Deterministic random instance.

    metric_kind: "graph" (random connected weighted graph),
    "matrix" (random symmetric weights repaired by shortest-path closure),
    or "grid" (1D/2D box grid with a random p-metric).
    field_spec maps field names to {"p_inf": ..., "low": ..., "high": ...}.
    """
    if n_points < 1:
        raise ParameterError(f"need at least one point, got {n_points}")
    if field_spec is None:
        field_spec = {"f": {}, "g": {}}
    rng = np.random.default_rng(seed)

    if metric_kind == "graph":
        points = [f"p{i}" for i in range(n_points)]
        edges = []
        for v in range(1, n_points):
            u = int(rng.integers(0, v))
            edges.append([u, v, float(rng.uniform(0.2, 2.0))])
        extra = int(rng.integers(0, n_points))
        for _ in range(extra):
            i, j = rng.integers(0, n_points, size=2)
            if i != j:
                edges.append([int(i), int(j), float(rng.uniform(0.2, 2.0))])
        if n_points == 1:
            metric_spec = {"kind": "matrix", "dist": [[0.0]]}
            space = MetricSpace(tuple(points), [[0.0]])
        else:
            metric_spec = {"kind": "graph", "edges": edges}
            space = shortest_path_space(points, edges)
    elif metric_kind == "matrix":
        points = [f"p{i}" for i in range(n_points)]
        w = rng.uniform(0.3, 2.0, size=(n_points, n_points))
        d = metric_closure(w) if n_points > 1 else np.zeros((1, 1))
        metric_spec = {"kind": "matrix", "dist": [list(map(float, row)) for row in d]}
        space = MetricSpace(tuple(points), d)
    elif metric_kind == "grid":
        if n_points < 2:
            raise ParameterError("grid instances need at least two points")
        if n_points >= 4 and rng.random() < 0.5:
            r0 = 2
            r1 = max(2, n_points // 2)
            resolution = [r0, r1]
            bounds = [[0.0, 1.0], [0.0, 1.0]]
        else:
            resolution = [n_points]
            bounds = [[0.0, 1.0]]
        p = [1.0, 2.0, math.inf][int(rng.integers(0, 3))]
        space, grid_nbhd = grid_space(bounds, resolution, p)
        metric_spec = {"kind": "grid", "bounds": bounds,
                       "resolution": resolution,
                       "p": "inf" if p == math.inf else p}
    else:
        raise ParameterError(f"unknown metric kind {metric_kind!r}")

    if metric_kind == "grid":
        nbhd = grid_nbhd
        nbhd_spec = {"kind": "grid"}
    elif space.n == 1 or rng.random() < 0.25:
        nbhd = all_pairs_neighborhoods(space)
        nbhd_spec = {"kind": "all"}
    else:
        pos = space.dist[space.dist > 0]
        r = float(np.quantile(pos, rng.uniform(0.3, 0.9)))
        nbhd = ball_neighborhoods(space, r)
        nbhd_spec = {"kind": "ball", "r": r}

    fields = {}
    for name, fs in field_spec.items():
        fields[name] = ScalarField(space, _random_field_values(
            rng, space.n, p_inf=fs.get("p_inf", 0.0),
            low=fs.get("low", 0.0), high=fs.get("high", 3.0)))

    provenance = {
        "generator": "gen_random_instance",
        "algorithm": PRNG_ALGORITHM,
        "params": {"seed": _seed_repr(seed), "n_points": int(n_points),
                   "metric_kind": metric_kind,
                   "field_spec": {k: dict(v) for k, v in field_spec.items()}},
    }
    return Instance(space, nbhd, fields, seed=_seed_repr(seed),
                    provenance=provenance,
                    metric_spec=metric_spec, nbhd_spec=nbhd_spec)


def gen_dominated_pair(seed, f: ScalarField, mode="truncate", tol=None):
    """(f, g) with the global slope of g dominated by that of f on dom f.

    Constructors: "truncate" (g = min(f, lam)), "scale" (g = r f, r in [0,1]),
    "compose" (g = r min(f, lam)).  Domination is re-verified by brute
    force before the pair is returned; a failure would falsify the
    constructor's guarantee and is raised as a fatal finding.
    """
    tol = resolve_tol(tol)
    if not f.is_proper():
        raise ParameterError("base field must be proper")
    rng = np.random.default_rng(seed)
    lo, hi = f.min_finite(), f.max_finite()
    lam = float(rng.uniform(lo, hi)) if hi > lo else lo
    r = float(rng.uniform(0.0, 1.0))
    if mode == "truncate":
        g = truncate(f, lam)
        params = {"mode": mode, "lam": lam}
    elif mode == "scale":
        g = scale_field(f, r)
        params = {"mode": mode, "r": r}
    elif mode == "compose":
        g = scale_field(truncate(f, lam), r)
        params = {"mode": mode, "lam": lam, "r": r}
    else:
        raise ParameterError(f"unknown domination mode {mode!r}")
    for x in f.dom():
        if global_slope(g, x) > global_slope(f, x) + tol:
            raise FatalFinding(
                "domination constructor emitted a non-dominated pair",
                witness={"mode": mode, "params": params, "point": x})
    return g, params


def gen_random_pl(seed, max_knots=6, span=5.0, min_gap=0.05):
    """Random piecewise-linear convex function with well-separated knots."""
    from .convex1d import PLConvex
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, max_knots + 1))
    knots = np.sort(rng.uniform(-span, span, size=k))
    while k > 1 and np.min(np.diff(knots)) < min_gap:
        knots = np.sort(rng.uniform(-span, span, size=k))
    steps = rng.uniform(0.1, 2.0, size=k)
    s0 = float(rng.uniform(-3.0, 1.0))
    slopes = s0 + np.concatenate([[0.0], np.cumsum(steps)])
    anchor = float(rng.uniform(-2.0, 2.0))
    return PLConvex(tuple(map(float, knots)), tuple(map(float, slopes)), anchor)
