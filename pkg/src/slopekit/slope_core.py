"""Extended-real scalar fields and slope calculus on finite metric spaces.

Fields take values in R ∪ {+inf}.  The difference inf - inf is undefined
and every operation that would form it raises instead of adopting a
convention.  The local slope is a max over declared neighbors; the
global slope is a max over all other points.
"""

import math
from dataclasses import dataclass

from .config import resolve_tol
from .errors import (DomainError, FatalFinding, ImproperFieldError,
                     ParameterError, UndefinedArithmeticError)
from .metric_space import MetricSpace, NeighborhoodSystem

INF = math.inf


def pos_part(t: float) -> float:
    """[t]+ = max{0, t}; defined for finite t and +inf."""
    return t if t > 0 else 0.0


@dataclass(eq=False)
class ScalarField:
    space: MetricSpace
    values: tuple   # one float per point; +inf allowed, -inf and nan are not

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) != self.space.n:
            raise ParameterError(
                f"{len(vals)} values for {self.space.n} points")
        for v in vals:
            if math.isnan(v) or v == -INF:
                raise ParameterError(f"field value {v} is not in R ∪ {{+inf}}")
        self.values = vals

    def value(self, x) -> float:
        return self.values[self.space.index(x)]

    def dom(self) -> tuple:
        return tuple(p for p, v in zip(self.space.points, self.values)
                     if math.isfinite(v))

    def is_proper(self) -> bool:
        return any(math.isfinite(v) for v in self.values)

    def min_finite(self) -> float:
        finite = [v for v in self.values if math.isfinite(v)]
        if not finite:
            raise ImproperFieldError("field is identically +inf")
        return min(finite)

    def max_finite(self) -> float:
        finite = [v for v in self.values if math.isfinite(v)]
        if not finite:
            raise ImproperFieldError("field is identically +inf")
        return max(finite)

    def __eq__(self, other):
        if not isinstance(other, ScalarField):
            return NotImplemented
        return self.space == other.space and self.values == other.values


def scale_field(f: ScalarField, r: float) -> ScalarField:
    """r·f for r >= 0.  r = 0 gives the zero field everywhere (so that the
    result is a real-valued constant even off dom f)."""
    if r < 0:
        raise ParameterError(f"scale factor must be nonnegative, got {r}")
    if r == 0:
        return ScalarField(f.space, (0.0,) * f.space.n)
    return ScalarField(f.space, tuple(r * v for v in f.values))


def add_fields(f: ScalarField, g: ScalarField) -> ScalarField:
    if f.space != g.space:
        raise ParameterError("fields live on different spaces")
    return ScalarField(f.space, tuple(a + b for a, b in zip(f.values, g.values)))


def sub_fields(f: ScalarField, g: ScalarField) -> ScalarField:
    """f - g, defined only when it never forms inf - inf."""
    if f.space != g.space:
        raise ParameterError("fields live on different spaces")
    out = []
    for a, b in zip(f.values, g.values):
        if a == INF and b == INF:
            raise UndefinedArithmeticError("inf - inf is undefined")
        if b == INF:
            raise ParameterError("f - g would take the value -inf")
        out.append(a - b)
    return ScalarField(f.space, tuple(out))


def shift_field(f: ScalarField, c: float) -> ScalarField:
    return ScalarField(f.space, tuple(v + c for v in f.values))


def _require_in_dom(f: ScalarField, x) -> int:
    i = f.space.index(x)
    if not math.isfinite(f.values[i]):
        raise DomainError(f"point {x!r} is outside dom f")
    return i


def local_slope(f: ScalarField, nbhd: NeighborhoodSystem, x) -> float:
    """Max over declared neighbors of [f(x)-f(y)]+ / dist(x,y).

    Neighbors outside dom f contribute 0; an empty neighbor set gives 0
    (isolated-point convention).
    """
    i = _require_in_dom(f, x)
    fx = f.values[i]
    best = 0.0
    for y in nbhd.of(x):
        j = f.space.index(y)
        fy = f.values[j]
        if fy == INF:
            continue
        q = pos_part(fx - fy) / f.space.dist[i, j]
        if q > best:
            best = q
    return best


def global_slope(f: ScalarField, x) -> float:
    """Max over all y != x of [f(x)-f(y)]+ / dist(x,y); finite on finite spaces."""
    i = _require_in_dom(f, x)
    fx = f.values[i]
    best = 0.0
    for j in range(f.space.n):
        if j == i:
            continue
        fy = f.values[j]
        if fy == INF:
            continue
        q = pos_part(fx - fy) / f.space.dist[i, j]
        if q > best:
            best = q
    return best


@dataclass
class SlopeProfile:
    local: dict    # point -> local slope, on dom f
    global_: dict  # point -> global slope, on dom f


def slope_profile(f: ScalarField, nbhd: NeighborhoodSystem) -> SlopeProfile:
    dom = f.dom()
    return SlopeProfile(
        local={x: local_slope(f, nbhd, x) for x in dom},
        global_={x: global_slope(f, x) for x in dom})


def eps_argmin(f: ScalarField, eps: float, tol=None) -> tuple:
    """{x : f(x) <= inf f + eps}."""
    tol = resolve_tol(tol)
    if eps < 0:
        raise ParameterError(f"eps must be nonnegative, got {eps}")
    lo = f.min_finite()
    return tuple(p for p, v in zip(f.space.points, f.values)
                 if v <= lo + eps + tol)


def eps_crit(f: ScalarField, nbhd: NeighborhoodSystem, eps: float, tol=None) -> tuple:
    """Sub-level set of the local slope at level eps."""
    tol = resolve_tol(tol)
    if eps < 0:
        raise ParameterError(f"eps must be nonnegative, got {eps}")
    return tuple(x for x in f.dom() if local_slope(f, nbhd, x) <= eps + tol)


def eps_Crit(f: ScalarField, eps: float, tol=None) -> tuple:
    """Sub-level set of the global slope at level eps.

    Members are re-checked against the equivalent pointwise form
    f(y) >= f(x) - eps * dist(y, x) for all y.
    """
    tol = resolve_tol(tol)
    if eps < 0:
        raise ParameterError(f"eps must be nonnegative, got {eps}")
    out = tuple(x for x in f.dom() if global_slope(f, x) <= eps + tol)
    for x in out:
        i = f.space.index(x)
        fx = f.values[i]
        for j, fy in enumerate(f.values):
            if fy < fx - eps * f.space.dist[i, j] - tol * (1 + f.space.dist[i, j]):
                raise FatalFinding(
                    "eps_Crit member fails the pointwise inequality",
                    witness={"x": x, "y": f.space.points[j], "eps": eps})
    return out


def pasch_hausdorff(f: ScalarField, eps: float, tol=None) -> ScalarField:
    """Regularization g(x) = min_y f(y) + eps * dist(y, x).

    g is everywhere finite and eps-Lipschitz; it coincides with f exactly
    on eps_Crit(f, eps).
    """
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    if not f.is_proper():
        raise ImproperFieldError("cannot regularize an improper field")
    out = []
    for i in range(f.space.n):
        out.append(min(fy + eps * f.space.dist[j, i]
                       for j, fy in enumerate(f.values) if fy != INF))
    return ScalarField(f.space, tuple(out))


def truncate(g: ScalarField, lam: float) -> ScalarField:
    """Pointwise min(g, lam).  Never increases either slope."""
    lam = float(lam)
    return ScalarField(g.space, tuple(min(v, lam) for v in g.values))


def log_distance_field(space: MetricSpace, a) -> ScalarField:
    """phi(x) = -log dist(x, a) for x != a, phi(a) = +inf.

    Its global slope is bounded by 1 / dist(x, a) at every x != a.
    """
    if space.n < 2:
        raise ParameterError("log-distance field needs at least two points")
    i = space.index(a)
    vals = tuple(INF if j == i else -math.log(space.dist[j, i])
                 for j in range(space.n))
    return ScalarField(space, vals)


def sublevel_diff(f: ScalarField, g: ScalarField, lam: float, tol=None) -> tuple:
    """{x in dom f : f(x) - g(x) <= lam} under the domain convention.

    The difference is only formed where at least one value is finite; a
    point with f finite and g = +inf has f - g = -inf and is included.
    """
    tol = resolve_tol(tol)
    if f.space != g.space:
        raise ParameterError("fields live on different spaces")
    if not f.is_proper():
        raise ImproperFieldError("f is identically +inf")
    lam = float(lam)
    out = []
    for p, fv, gv in zip(f.space.points, f.values, g.values):
        if fv == INF:
            continue
        if gv == INF or fv - gv <= lam + tol:
            out.append(p)
    return tuple(out)


def restrict(f: ScalarField, subset) -> ScalarField:
    """f restricted to the induced metric subspace on the given points."""
    sub = f.space.subspace(subset)
    return ScalarField(sub, tuple(f.value(p) for p in sub.points))
