"""Property-test driver: every documented invariant over random instances.

Each check takes an instance and returns a list of failure records
(empty means pass).  The driver is deterministic given (seed, config),
aggregates results sorted by instance seed, and archives a replayable
counterexample for every failure.  Deliberate mutations of core
operations can be injected through the config to confirm the suite
actually detects breakage.
"""

import math
import numpy as np

from .config import resolve_tol
from .errors import FatalFinding, HypothesisViolation, ParameterError
from .instances import gen_dominated_pair, gen_random_instance
from .metric_space import NeighborhoodSystem, validate_metric
from .slope_core import (INF, ScalarField, add_fields, eps_Crit,
                         global_slope, local_slope, log_distance_field,
                         pasch_hausdorff, restrict, scale_field, sub_fields,
                         sublevel_diff, truncate)
from .variational import (check_compact, check_lips, check_lsc,
                          check_tz, descent_to_critical, ekeland_point,
                          verify_trace)

SCALING_RTOL = 1e-12


def _fail(detail, **witness):
    return {"detail": detail, "witness": witness}


def default_ops() -> dict:
    return {
        "truncate": truncate,
        "ekeland_point": ekeland_point,
        "nbhd_transform": lambda nbhd: nbhd,
    }


# --- deliberate mutations, used to test the suite's own sensitivity ----

def _broken_truncate(g: ScalarField, lam: float) -> ScalarField:
    # applies the cutoff at a single point only
    vals = list(g.values)
    finite = [i for i, v in enumerate(vals) if v != INF]
    i = max(finite, key=lambda j: vals[j])
    vals[i] = min(vals[i], float(lam))
    return ScalarField(g.space, tuple(vals))


def _noncritical_ekeland(f: ScalarField, x0, lam: float):
    return x0


def _drop_one_direction(nbhd: NeighborhoodSystem) -> NeighborhoodSystem:
    neighbors = {p: set(q) for p, q in nbhd.neighbors.items()}
    for p in nbhd.points:
        if neighbors[p]:
            neighbors[p].remove(min(neighbors[p]))
            break
    return NeighborhoodSystem(nbhd.points, neighbors)


MUTATIONS = {
    "broken_truncate": lambda ops: ops.update(truncate=_broken_truncate),
    "evp_noncritical": lambda ops: ops.update(ekeland_point=_noncritical_ekeland),
    "asymmetric_neighborhood":
        lambda ops: ops.update(nbhd_transform=_drop_one_direction),
}


# --- individual checks -------------------------------------------------

def check_metric_axioms(inst, rng, ops, tol):
    report = validate_metric(inst.space.dist, tol)
    if report.ok:
        return []
    return [_fail("metric axiom violated", report=report.to_dict())]


def check_neighborhood_symmetry(inst, rng, ops, tol):
    try:
        ops["nbhd_transform"](inst.nbhd).validate()
    except ParameterError as exc:
        return [_fail(f"neighborhood system invalid: {exc}")]
    return []


def check_slope_scaling(inst, rng, ops, tol):
    f = inst.field("f")
    failures = []
    for r in (0.0, 0.5, float(rng.uniform(0.0, 3.0))):
        rf = scale_field(f, r)
        for x in f.dom():
            for kind, slope in (("local", lambda h, y: local_slope(h, inst.nbhd, y)),
                                ("global", global_slope)):
                got = slope(rf, x)
                want = r * slope(f, x)
                if abs(got - want) > SCALING_RTOL * max(1.0, abs(want)):
                    failures.append(_fail(
                        f"{kind} slope of {r}*f at {x} is {got}, expected {want}",
                        r=r, x=x))
    return failures


def check_subadditivity(inst, rng, ops, tol):
    f, g = inst.field("f"), inst.field("g")
    h = add_fields(f, g)
    failures = []
    for x in set(f.dom()) & set(g.dom()):
        for kind, slope in (("local", lambda q, y: local_slope(q, inst.nbhd, y)),
                            ("global", global_slope)):
            if slope(h, x) > slope(f, x) + slope(g, x) + tol:
                failures.append(_fail(
                    f"{kind} slope of f+g at {x} exceeds the sum of slopes", x=x))
    return failures


def check_difference_bound(inst, rng, ops, tol):
    f, g = inst.field("f"), inst.field("g")
    g_fin = truncate(g, g.max_finite())   # finite-valued version of g
    d = sub_fields(f, g_fin)
    failures = []
    for x in f.dom():
        for kind, slope in (("local", lambda q, y: local_slope(q, inst.nbhd, y)),
                            ("global", global_slope)):
            if slope(d, x) < slope(f, x) - slope(g_fin, x) - tol:
                failures.append(_fail(
                    f"{kind} slope of f-g at {x} below |slope f| - |slope g|", x=x))
    return failures


def check_global_ge_local(inst, rng, ops, tol):
    f = inst.field("f")
    return [
        _fail(f"global slope below local slope at {x}", x=x)
        for x in f.dom()
        if global_slope(f, x) < local_slope(f, inst.nbhd, x) - tol
    ]


def check_log_bound(inst, rng, ops, tol):
    if inst.space.n < 2:
        return []
    failures = []
    for a in inst.space.points:
        phi = log_distance_field(inst.space, a)
        for x in phi.dom():
            bound = 1.0 / inst.space.distance(x, a)
            if global_slope(phi, x) > bound + tol:
                failures.append(_fail(
                    f"log-distance slope bound fails at {x} (center {a})",
                    a=a, x=x))
    return failures


def check_truncation(inst, rng, ops, tol):
    g = inst.field("g")
    lo, hi = g.min_finite(), g.max_finite()
    failures = []
    for lam in (lo, (lo + hi) / 2.0, float(rng.uniform(lo - 1.0, hi + 1.0))):
        g1 = ops["truncate"](g, lam)
        for x in g.dom():
            for kind, slope in (("local", lambda q, y: local_slope(q, inst.nbhd, y)),
                                ("global", global_slope)):
                if slope(g1, x) > slope(g, x) + tol:
                    failures.append(_fail(
                        f"truncation increased the {kind} slope at {x}",
                        lam=lam, x=x))
    return failures


def check_crit_lipschitz(inst, rng, ops, tol, eps_values=(0.25, 1.0, 3.0)):
    f = inst.field("f")
    failures = []
    for eps in eps_values:
        crit = eps_Crit(f, eps, tol)
        for x in crit:
            for y in crit:
                gap = abs(f.value(x) - f.value(y))
                if gap > eps * inst.space.distance(x, y) + tol:
                    failures.append(_fail(
                        f"f is not {eps}-Lipschitz on {eps}-Crit at ({x}, {y})",
                        eps=eps, x=x, y=y))
    return failures


def check_ph_coincidence(inst, rng, ops, tol, eps_values=(0.25, 1.0, 3.0)):
    f = inst.field("f")
    failures = []
    for eps in eps_values:
        reg = pasch_hausdorff(f, eps, tol)
        coincide = {x for x, fv, rv in
                    zip(inst.space.points, f.values, reg.values)
                    if fv != INF and abs(fv - rv) <= tol}
        crit = set(eps_Crit(f, eps, tol))
        if coincide != crit:
            failures.append(_fail(
                f"coincidence set != {eps}-Crit",
                eps=eps, coincide=sorted(coincide), crit=sorted(crit)))
        # the regularization itself must be eps-Lipschitz
        for i, x in enumerate(inst.space.points):
            for j in range(i):
                gap = abs(reg.values[i] - reg.values[j])
                if gap > eps * inst.space.dist[i, j] + tol:
                    failures.append(_fail(
                        "regularization is not eps-Lipschitz",
                        eps=eps, x=x, y=inst.space.points[j]))
    return failures


def check_restriction_invariance(inst, rng, ops, tol):
    f, g = inst.field("f"), inst.field("g")
    dom_fg = [x for x in f.dom() if g.value(x) != INF]
    if not dom_fg:
        return []
    x0 = dom_fg[int(rng.integers(0, len(dom_fg)))]
    lam = f.value(x0) - g.value(x0)
    m1 = sublevel_diff(f, g, lam, tol)
    f1 = restrict(f, m1)
    nbhd1 = inst.nbhd.restrict(m1)
    failures = []
    for x in m1:
        gv = g.value(x)
        # local-slope invariance on the sub-level set
        ls_f = local_slope(f, inst.nbhd, x)
        ls_g = local_slope(g, inst.nbhd, x) if gv != INF else INF
        if ls_f > ls_g:
            if abs(local_slope(f1, nbhd1, x) - ls_f) > tol:
                failures.append(_fail(
                    f"local slope changed under restriction at {x}", x=x,
                    lam=lam))
        # global-slope invariance on the sub-level set
        gs_f = global_slope(f, x)
        gs_g = global_slope(g, x) if gv != INF else INF
        if gs_f > gs_g:
            if abs(global_slope(f1, x) - gs_f) > tol:
                failures.append(_fail(
                    f"global slope changed under restriction at {x}", x=x,
                    lam=lam))
    # restriction to the sub-level set intersected with an s-critical set
    s = global_slope(f, x0)
    m2 = [x for x in m1 if global_slope(f, x) <= s + tol]
    if m2:
        f2 = restrict(f, m2)
        for x in m2:
            gv = g.value(x)
            gs_f = global_slope(f, x)
            gs_g = global_slope(g, x) if gv != INF else INF
            if gs_f > gs_g:
                if abs(global_slope(f2, x) - gs_f) > tol:
                    failures.append(_fail(
                        f"global slope changed under critical restriction at {x}",
                        x=x, lam=lam, s=s))
    return failures


def check_trivial_inf_dom(inst, rng, ops, tol):
    f, g = inst.field("f"), inst.field("g")
    dom = f.dom()
    finite_slope_dom = [x for x in dom if math.isfinite(global_slope(f, x))]
    if list(dom) != finite_slope_dom:
        return [_fail("global slope not finite on all of dom f")]
    return []


def check_evp(inst, rng, ops, tol):
    f = inst.field("f")
    dom = f.dom()
    failures = []
    x0 = dom[int(rng.integers(0, len(dom)))]
    for lam in (0.3, 1.0, float(rng.uniform(0.05, 5.0))):
        x = ops["ekeland_point"](f, x0, lam)
        d = inst.space.distance(x0, x)
        if global_slope(f, x) > lam + tol:
            failures.append(_fail(
                f"EVP output not {lam}-critical", x0=x0, lam=lam, x=x))
        if f.value(x) > f.value(x0) - lam * d + tol:
            failures.append(_fail(
                "EVP output violates the descent inequality",
                x0=x0, lam=lam, x=x))
        if d > (f.value(x0) - f.min_finite()) / lam + tol:
            failures.append(_fail(
                "EVP output violates the classical distance bound",
                x0=x0, lam=lam, x=x))
    return failures


def check_descent(inst, rng, ops, tol):
    f = inst.field("f")
    r = float(rng.uniform(0.1, 0.9))
    g = scale_field(f, r)
    dom = f.dom()
    x0 = dom[int(rng.integers(0, len(dom)))]
    trace = descent_to_critical(f, g, inst.nbhd, x0, tol=tol)
    failures = [_fail(p, x0=x0, r=r)
                for p in verify_trace(trace, f, g, inst.nbhd, tol)]
    if trace.terminal_flag != "reached-0crit":
        failures.append(_fail("descent did not reach 0crit", x0=x0, r=r))
    if len(trace.points) > inst.space.n:
        failures.append(_fail("descent trace longer than the space",
                              x0=x0, r=r))
    return failures


def check_determination(inst, rng, ops, tol):
    f = inst.field("f")
    failures = []
    f_finite = all(v != INF for v in f.values)
    for mode in ("truncate", "scale", "compose"):
        pair_seed = int(rng.integers(0, 2 ** 62))
        g, params = gen_dominated_pair(pair_seed, f, mode, tol)
        reports = [check_tz(f, g, tol)]
        if f_finite:
            reports.append(check_lips(f, g, 0.5, tol))
        reports.append(check_lsc(f, g, 0.5, 0.5, tol))
        for report in reports:
            if report.hypothesis_ok and not report.conclusion_ok:
                failures.append(_fail(
                    f"{report.name} falsified on a dominated pair",
                    mode=mode, params=params, report=report.to_dict()))
    if f_finite:
        r = float(rng.uniform(0.1, 0.9))
        g = scale_field(f, r)
        report = check_compact(f, g, inst.nbhd, tol)
        if report.hypothesis_ok and not report.conclusion_ok:
            failures.append(_fail("compact falsified on a scaled pair",
                                  r=r, report=report.to_dict()))
    return failures


def check_domination_constructors(inst, rng, ops, tol):
    f = inst.field("f")
    failures = []
    for mode in ("truncate", "scale", "compose"):
        pair_seed = int(rng.integers(0, 2 ** 62))
        g, params = gen_dominated_pair(pair_seed, f, mode, tol)
        # independent re-check, not trusting the constructor's own verification
        for x in f.dom():
            if global_slope(g, x) > global_slope(f, x) + tol:
                failures.append(_fail(
                    f"emitted pair not dominated at {x}", mode=mode,
                    params=params, x=x))
    return failures


CHECKS = {
    "metric_axioms": check_metric_axioms,
    "neighborhood_symmetry": check_neighborhood_symmetry,
    "slope_scaling": check_slope_scaling,
    "subadditivity": check_subadditivity,
    "difference_bound": check_difference_bound,
    "global_ge_local": check_global_ge_local,
    "log_bound": check_log_bound,
    "truncation": check_truncation,
    "crit_lipschitz": check_crit_lipschitz,
    "ph_coincidence": check_ph_coincidence,
    "restriction_invariance": check_restriction_invariance,
    "trivial_inf_dom": check_trivial_inf_dom,
    "evp": check_evp,
    "descent": check_descent,
    "determination": check_determination,
    "domination_constructors": check_domination_constructors,
}

DEFAULT_CONFIG = {
    "seed": 0,
    "instances": 100,
    "max_points": 12,
    "kinds": ["graph", "matrix", "grid"],
    "p_inf": [0.0, 0.2],
    "checks": sorted(CHECKS),
    "mutation": None,
}


def run_suite(config=None, tol=None) -> dict:
    """Run the configured checks over generated instances.

    Returns a deterministic report: per-check pass/fail counts plus a
    counterexample record (serialized instance, check name, details) for
    every failure, sorted by instance seed.
    """
    tol = resolve_tol(tol)
    cfg = dict(DEFAULT_CONFIG)
    cfg.update(config or {})
    unknown = set(cfg["checks"]) - set(CHECKS)
    if unknown:
        raise ParameterError(f"unknown checks: {sorted(unknown)}")
    ops = default_ops()
    if cfg["mutation"]:
        if cfg["mutation"] not in MUTATIONS:
            raise ParameterError(f"unknown mutation {cfg['mutation']!r}")
        MUTATIONS[cfg["mutation"]](ops)

    summary = {name: {"pass": 0, "fail": 0} for name in cfg["checks"]}
    counterexamples = []
    for i in range(int(cfg["instances"])):
        inst_seed = [int(cfg["seed"]), i]
        rng = np.random.default_rng(inst_seed)
        kind = cfg["kinds"][i % len(cfg["kinds"])]
        p_inf = cfg["p_inf"][(i // len(cfg["kinds"])) % len(cfg["p_inf"])]
        n_lo = 2 if kind == "grid" else 1
        n = int(rng.integers(n_lo, int(cfg["max_points"]) + 1))
        inst = gen_random_instance(
            inst_seed, n, metric_kind=kind,
            field_spec={"f": {"p_inf": p_inf}, "g": {"p_inf": p_inf}})
        # mutated neighborhoods flow into every check of this instance
        inst.nbhd = ops["nbhd_transform"](inst.nbhd)
        for name in cfg["checks"]:
            try:
                failures = CHECKS[name](inst, rng, ops, tol)
            except FatalFinding as exc:
                failures = [_fail(f"fatal finding: {exc}", payload=exc.witness)]
            except HypothesisViolation as exc:
                failures = [_fail(f"unexpected hypothesis violation: {exc}",
                                  witnesses=exc.witnesses)]
            if failures:
                summary[name]["fail"] += 1
                for failure in failures:
                    counterexamples.append({
                        "seed": list(inst_seed),
                        "check": name,
                        "detail": failure["detail"],
                        "witness": failure.get("witness", {}),
                        "instance": inst.to_dict(),
                    })
            else:
                summary[name]["pass"] += 1
    counterexamples.sort(key=lambda c: (c["seed"], c["check"]))
    return {
        "config": cfg,
        "summary": summary,
        "counterexamples": counterexamples,
        "ok": not counterexamples,
    }


def summary_csv(report: dict) -> str:
    lines = ["check,pass,fail"]
    for name in sorted(report["summary"]):
        row = report["summary"][name]
        lines.append(f"{name},{row['pass']},{row['fail']}")
    return "\n".join(lines) + "\n"
