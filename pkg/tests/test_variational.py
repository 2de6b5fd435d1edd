import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slopekit import (DomainError, HypothesisViolation,
                      ParameterError, ScalarField, check_compact, check_lips,
                      check_lsc, check_tz, descent_step, descent_to_critical,
                      ekeland_point, gen_random_instance,
                      global_slope, local_slope, scale_field, truncate,
                      verify_trace)

INF = math.inf
TOL = 1e-9


def brute_ekeland_candidates(f, x0, lam):
    """Oracle: all points satisfying both Ekeland conclusions."""
    out = []
    for x in f.dom():
        d = f.space.distance(x0, x)
        if global_slope(f, x) <= lam + TOL and \
                f.value(x) <= f.value(x0) - lam * d + TOL:
            out.append(x)
    return out


class TestEkelandPoint:
    def test_example(self, f013):
        x = ekeland_point(f013, "c", 1.0)
        assert x == "a"
        cands = brute_ekeland_candidates(f013, "c", 1.0)
        assert x in cands
        assert f013.value(x) == min(f013.value(y) for y in cands)

    def test_start_at_minimizer(self, f013):
        assert ekeland_point(f013, "a", 1.0) == "a"

    def test_lambda_above_max_slope(self, f013):
        assert ekeland_point(f013, "c", 10.0) == "c"
        assert "c" in brute_ekeland_candidates(f013, "c", 10.0)

    def test_outside_dom(self, e3):
        f = ScalarField(e3, (0.0, INF, 1.0))
        with pytest.raises(DomainError):
            ekeland_point(f, "b", 1.0)

    def test_nonpositive_lambda(self, f013):
        with pytest.raises(ParameterError):
            ekeland_point(f013, "c", 0.0)

    @given(seed=st.integers(0, 10**6))
    @settings(max_examples=80, deadline=None)
    def test_postconditions_always_hold(self, seed):
        inst = gen_random_instance([seed], 8, field_spec={"f": {"p_inf": 0.15}})
        f = inst.field("f")
        rng = np.random.default_rng(seed)
        dom = f.dom()
        x0 = dom[int(rng.integers(0, len(dom)))]
        lam = float(rng.uniform(0.05, 4.0))
        x = ekeland_point(f, x0, lam)
        d = inst.space.distance(x0, x)
        assert global_slope(f, x) <= lam + TOL
        assert f.value(x) <= f.value(x0) - lam * d + TOL
        # classical EVP bound with eps-hat = f(x0) - inf f
        assert d <= (f.value(x0) - f.min_finite()) / lam + TOL


class TestDescentStep:
    def test_local_mode_example(self, f013, e3_path_nbhd):
        g = scale_field(f013, 0.5)
        x = descent_step(f013, g, e3_path_nbhd, "c", 0.5, mode="local")
        assert x == "a"
        assert local_slope(f013, e3_path_nbhd, x) <= 0.5 + TOL
        assert f013.value(x) <= f013.value("c") - 0.5 * 2.0 + TOL
        assert (f013.value(x) - g.value(x)) <= (f013.value("c") - g.value("c"))

    def test_start_already_critical(self, f013, e3_path_nbhd):
        g = scale_field(f013, 0.5)
        x = descent_step(f013, g, e3_path_nbhd, "a", 0.5, mode="local")
        assert x == "a"

    def test_global_mode_scaled_g(self, f013, e3_path_nbhd):
        # non-strict domination of g becomes strict after scaling by r < 1
        r = 0.5
        rg = scale_field(f013, r)
        x = descent_step(f013, rg, e3_path_nbhd, "c", 0.5, mode="global")
        assert global_slope(f013, x) <= 0.5 + TOL
        assert f013.value(x) <= f013.value("c") - 0.5 * f013.space.distance(x, "c") + TOL
        assert (f013.value("c") - rg.value("c")) >= (f013.value(x) - rg.value(x))

    def test_hypothesis_violation_detected(self, f013, e3_path_nbhd):
        g = scale_field(f013, 2.0)    # slope of g strictly dominates f
        with pytest.raises(HypothesisViolation) as err:
            descent_step(f013, g, e3_path_nbhd, "c", 0.5, mode="local")
        assert err.value.witnesses

    def test_bad_parameters(self, f013, e3_path_nbhd):
        g = scale_field(f013, 0.5)
        with pytest.raises(ParameterError):
            descent_step(f013, g, e3_path_nbhd, "c", -1.0)
        with pytest.raises(ParameterError):
            descent_step(f013, g, e3_path_nbhd, "c", 0.5, mode="sideways")


class TestDescentToCritical:
    def test_example_trace(self, f013, e3_path_nbhd):
        g = scale_field(f013, 0.5)
        trace = descent_to_critical(f013, g, e3_path_nbhd, "c", eps0=1.0)
        assert trace.terminal_flag == "reached-0crit"
        assert trace.points[-1] == "a"
        assert trace.diff_values[0] == 1.5 and trace.diff_values[-1] == 0.0
        assert verify_trace(trace, f013, g, e3_path_nbhd) == []
        budget = sum(e * d for e, d in
                     zip(trace.eps_schedule, trace.step_distances))
        assert budget <= f013.value("c") - f013.min_finite() + TOL

    def test_start_at_critical_point(self, f013, e3_path_nbhd):
        g = scale_field(f013, 0.5)
        trace = descent_to_critical(f013, g, e3_path_nbhd, "a")
        assert trace.points == ["a"]
        assert trace.terminal_flag == "reached-0crit"

    def test_nondecreasing_schedule_rejected(self, f013, e3_path_nbhd):
        g = scale_field(f013, 0.5)
        with pytest.raises(ParameterError):
            descent_to_critical(f013, g, e3_path_nbhd, "c",
                                eps_schedule=[0.5, 0.5])

    @given(seed=st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_traces_always_terminate_critically(self, seed):
        inst = gen_random_instance([seed], 9, field_spec={"f": {"p_inf": 0.1}})
        f = inst.field("f")
        rng = np.random.default_rng(seed)
        g = scale_field(f, float(rng.uniform(0.1, 0.9)))
        dom = f.dom()
        x0 = dom[int(rng.integers(0, len(dom)))]
        trace = descent_to_critical(f, g, inst.nbhd, x0)
        assert trace.terminal_flag == "reached-0crit"
        assert len(trace.points) <= inst.space.n
        assert verify_trace(trace, f, g, inst.nbhd) == []


class TestCheckCompact:
    def test_example(self, e3, f013, e3_path_nbhd):
        g = scale_field(f013, 0.5)
        report = check_compact(f013, g, e3_path_nbhd)
        assert report.hypothesis_ok and report.conclusion_ok
        assert report.witness == "a"

    def test_constant_g(self, f013, e3_path_nbhd):
        g = ScalarField(f013.space, (2.0, 2.0, 2.0))
        report = check_compact(f013, g, e3_path_nbhd)
        assert report.hypothesis_ok and report.conclusion_ok

    def test_constant_f(self, e3, e3_path_nbhd):
        f = ScalarField(e3, (1.0, 1.0, 1.0))
        g = ScalarField(e3, (0.0, 0.2, 0.1))
        report = check_compact(f, g, e3_path_nbhd)
        assert report.hypothesis_ok and report.conclusion_ok

    def test_violating_pair_classified(self, f013, e3_path_nbhd):
        g = scale_field(f013, 2.0)
        report = check_compact(f013, g, e3_path_nbhd)
        assert not report.hypothesis_ok
        assert report.conclusion_ok is None
        assert report.exit_code() == 1


class TestCheckTZ:
    def test_truncated_example(self, f013):
        g = truncate(f013, 1.0)
        report = check_tz(f013, g)
        assert report.hypothesis_ok and report.conclusion_ok
        # pointwise: (0,1,3) >= (0,1,1)
        assert report.slack >= -TOL

    def test_scaled_g(self, f013):
        report = check_tz(f013, scale_field(f013, 0.3))
        assert report.conclusion_ok

    def test_g_equals_f_has_zero_slack(self, f013):
        report = check_tz(f013, f013)
        assert report.conclusion_ok and report.slack == pytest.approx(0.0)

    def test_violating_pair_classified(self, f013):
        report = check_tz(f013, scale_field(f013, 2.0))
        assert not report.hypothesis_ok and report.exit_code() == 1


class TestCheckLips:
    def test_truncated_example(self, f013):
        g = truncate(f013, 1.0)
        report = check_lips(f013, g, 1.0)
        assert report.hypothesis_ok and report.conclusion_ok
        assert report.details["inf_all"] == pytest.approx(0.0)

    def test_g_equals_f(self, f013):
        report = check_lips(f013, f013, 0.5)
        assert report.conclusion_ok and report.slack == pytest.approx(0.0)

    def test_requires_finite_fields(self, e3):
        f = ScalarField(e3, (0.0, INF, 1.0))
        with pytest.raises(ParameterError):
            check_lips(f, f, 0.5)


class TestCheckLSC:
    def test_g_equals_f(self, f013):
        report = check_lsc(f013, f013, 0.5, 0.5)
        assert report.hypothesis_ok and report.conclusion_ok

    def test_truncated_with_large_eps(self, f013):
        g = truncate(f013, 1.0)
        report = check_lsc(f013, g, 0.9, 5.0)
        assert report.conclusion_ok

    def test_r_out_of_range(self, f013):
        with pytest.raises(ParameterError):
            check_lsc(f013, f013, 1.0, 0.5)

    def test_g_with_inf_values(self, e3):
        # g infinite exactly off dom f: hypothesis on dom f still holds
        f = ScalarField(e3, (0.0, 1.0, INF))
        g = scale_field(f, 0.5)
        report = check_lsc(f, g, 0.5, 0.5)
        assert report.hypothesis_ok and report.conclusion_ok

    def test_g_infinite_on_dom_f_is_hypothesis_violation(self, f013):
        g = ScalarField(f013.space, (0.0, INF, 1.0))
        report = check_lsc(f013, g, 0.5, 0.5)
        assert not report.hypothesis_ok
        assert "b" in report.hypothesis_witnesses


@given(seed=st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_determination_never_falsified(seed):
    from slopekit import gen_dominated_pair
    inst = gen_random_instance([seed], 8, field_spec={"f": {"p_inf": 0.1}})
    f = inst.field("f")
    for k, mode in enumerate(("truncate", "scale", "compose")):
        g, _ = gen_dominated_pair([seed, k], f, mode)
        report = check_tz(f, g)
        assert report.hypothesis_ok, report.hypothesis_witnesses
        assert report.conclusion_ok, report.to_dict()
        report = check_lsc(f, g, 0.5, 0.5)
        assert report.hypothesis_ok and report.conclusion_ok, report.to_dict()
