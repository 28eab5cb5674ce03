import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lscran import exponents as ex
from lscran.exponents import (
    AmbiguousRegionError,
    OperationKind,
    Regime,
    ScalingParams,
    ValidationError,
    array_gain,
    backhaul_overhead_exponent,
    classify_regime,
    delta_mrt,
    delta_zf,
    effective_ul_power,
    exponent_report,
    if_optimality_threshold,
    pilot_limited_terms,
    snr_exponent,
    supportable_users,
    supportable_users_numeric,
    table_region,
    tradeoff_grid,
)

TOL = 1e-12


def sp(**kw):
    base = dict(eta_bs=0.5, eta_user=0.5, alpha=4.0)
    base.update(kw)
    return ScalingParams(**base)


# -- validation -------------------------------------------------------------

@pytest.mark.parametrize("kw,field", [
    (dict(alpha=2.0), "alpha"),
    (dict(alpha=2.0 + 1e-10), "alpha"),
    (dict(eta_bs=1.2), "eta_bs"),
    (dict(eta_user=-0.1), "eta_user"),
    (dict(eta_ant=0.6), "eta_ant"),
    (dict(upsilon_pa=0.6), "upsilon_pa"),
    (dict(upsilon_pr=0.7), "upsilon_pr"),
    (dict(rho_ul=math.nan), "rho_ul"),
])
def test_invalid_params_name_the_field(kw, field):
    with pytest.raises(ValidationError) as err:
        sp(**kw)
    assert err.value.field == field


def test_eta_ant_defaults_to_complement():
    assert sp(eta_bs=0.3).eta_ant == pytest.approx(0.7)


# -- regimes and gains --------------------------------------------------------

@pytest.mark.parametrize("rho_ul,regime", [
    (0.2, Regime.EH), (0.0, Regime.EH), (-1.0, Regime.H), (-0.5, Regime.H),
    (-1.0 - 1e-12, Regime.M), (-1.5, Regime.M), (-2.0, Regime.L),
])
def test_regime_boundaries(rho_ul, regime):
    assert classify_regime(sp(rho_ul=rho_ul)) is regime


@pytest.mark.parametrize("rho_ul,xi", [(0.0, 0.5), (-1.25, 0.25), (-2.0, 0.0)])
def test_array_gain_values(rho_ul, xi):
    assert array_gain(sp(rho_ul=rho_ul)) == pytest.approx(xi, abs=TOL)


def test_snr_values():
    assert snr_exponent(sp()) == pytest.approx(1.5, abs=TOL)
    assert snr_exponent(sp(rho_ul=-2.0)) == pytest.approx(1.0, abs=TOL)
    assert snr_exponent(sp(rho_dl=0.7)) == pytest.approx(2.2, abs=TOL)


def test_delta_mrt_values():
    assert delta_mrt(sp()) == pytest.approx(1.0, abs=TOL)
    assert delta_mrt(sp(eta_user=0.0)) == pytest.approx(0.0, abs=TOL)
    assert delta_mrt(sp(eta_bs=0.3, eta_user=0.7)) == pytest.approx(1.0, abs=TOL)


def test_delta_zf_values():
    assert delta_zf(sp()) == pytest.approx(0.5, abs=TOL)
    assert delta_zf(sp(rho_ul=-2.0)) == pytest.approx(1.0, abs=TOL)
    assert delta_zf(sp(rho_ul=1.0)) == pytest.approx(-0.5, abs=TOL)


def test_effective_ul_power_values():
    assert effective_ul_power(sp(upsilon_pa=0.2)) == pytest.approx(-0.6, abs=TOL)
    assert effective_ul_power(sp(upsilon_pa=0.5, rho_ul=-0.3)) == pytest.approx(-0.3, abs=TOL)
    assert effective_ul_power(sp(upsilon_pa=0.2, rho_ul=-2.0)) == pytest.approx(-2.0, abs=TOL)


def test_pilot_limited_terms_values():
    xi, _ = pilot_limited_terms(sp(upsilon_pr=0.5))
    assert xi == pytest.approx(0.5, abs=TOL)
    assert exponent_report("ZF", sp(upsilon_pr=0.5)) == exponent_report("ZF", sp())
    xi, d = pilot_limited_terms(sp(upsilon_pr=0.2))
    assert (xi, d) == (pytest.approx(0.5, abs=TOL), pytest.approx(1.1, abs=TOL))
    r = exponent_report("ZF", sp(upsilon_pr=0.2))
    assert r.delta == pytest.approx(1.1, abs=TOL)
    assert r.sinr == pytest.approx(0.4, abs=TOL)


@pytest.mark.parametrize("op,snr,sir,sinr", [
    ("MRT", 1.5, 0.5, 0.5), ("ZF", 1.5, 1.0, 1.0), ("IF", 1.5, math.inf, 1.5),
])
def test_report_golden(op, snr, sir, sinr):
    r = exponent_report(op, sp())
    assert r.snr == pytest.approx(snr, abs=TOL)
    assert r.sinr == pytest.approx(sinr, abs=TOL)
    if math.isinf(sir):
        assert math.isinf(r.sir) and r.delta is None
        assert r.to_dict()["sir"] == "inf"
    else:
        assert r.sir == pytest.approx(sir, abs=TOL)


def test_partial_association_golden():
    r = exponent_report("ZF", sp(upsilon_pa=0.2))
    assert r.delta == pytest.approx(0.8, abs=TOL)
    assert r.sinr == pytest.approx(0.7, abs=TOL)
    assert exponent_report("MRT", sp(upsilon_pa=0.2)) == exponent_report("MRT", sp())


def test_if_thresholds():
    assert if_optimality_threshold("MRT", sp()) == pytest.approx(-1.0, abs=TOL)
    assert if_optimality_threshold("ZF", sp(rho_ul=1.0)) == pytest.approx(0.5, abs=TOL)
    assert if_optimality_threshold("ZF", sp(rho_ul=-2.0)) == pytest.approx(-1.0, abs=TOL)
    with pytest.raises(ValidationError):
        if_optimality_threshold("IF", sp())


def test_threshold_zeroes_the_gap():
    p = sp(rho_ul=0.3, rho_dl=0.8, eta_user=0.7)
    for op in ("MRT", "ZF"):
        at = p.with_(rho_dl=if_optimality_threshold(op, p))
        assert exponent_report(op, at).delta == pytest.approx(0.0, abs=TOL)


def test_backhaul_overhead():
    assert backhaul_overhead_exponent(sp()) == pytest.approx(1.5, abs=TOL)
    assert backhaul_overhead_exponent(sp(rho_ul=-1.0)) == pytest.approx(1.0, abs=TOL)
    assert backhaul_overhead_exponent(sp(rho_ul=3.0, eta_user=0.2)) == pytest.approx(1.2, abs=TOL)
    # the association term never goes below zero
    assert backhaul_overhead_exponent(sp(rho_ul=-10.0)) == pytest.approx(1.0, abs=TOL)


# -- properties ---------------------------------------------------------------

@st.composite
def params(draw, reuse=True, assoc=True):
    eb = draw(st.floats(0.0, 1.0))
    eu = draw(st.floats(0.0, 1.0))
    kw = dict(
        eta_bs=eb, eta_user=eu, alpha=draw(st.floats(2.05, 8.0)),
        rho_ul=draw(st.floats(-6.0, 4.0)), rho_dl=draw(st.floats(-4.0, 4.0)),
    )
    if assoc and draw(st.booleans()):
        kw["upsilon_pa"] = draw(st.floats(0.0, 1.0)) * eb
    if reuse and draw(st.booleans()):
        kw["upsilon_pr"] = draw(st.floats(0.0, 1.0)) * eu
    return ScalingParams(**kw)


@settings(max_examples=400, deadline=None)
@given(params())
def test_report_invariants(p):
    assert classify_regime(p) in set(Regime)
    for op in OperationKind:
        r = exponent_report(op, p)
        assert math.isfinite(r.snr)
        assert r.sinr == pytest.approx(min(r.snr, r.sir), abs=1e-12)
        if op is OperationKind.IF:
            assert math.isinf(r.sir) and r.sinr == r.snr
        else:
            assert math.isfinite(r.delta)
            assert r.sir == pytest.approx(r.snr - r.delta, abs=1e-12)
    xi = array_gain(p)
    assert -1e-12 <= xi <= p.eta_ant + 1e-12


@settings(max_examples=300, deadline=None)
@given(params(), st.floats(0.0, 2.0))
def test_monotone_in_powers(p, step):
    up = p.with_(rho_ul=p.rho_ul + step)
    assert snr_exponent(up) >= snr_exponent(p) - 1e-12
    assert delta_zf(up) <= delta_zf(p) + 1e-12
    assert delta_mrt(up) == delta_mrt(p)
    dl = p.with_(rho_dl=p.rho_dl + step)
    assert snr_exponent(dl) - snr_exponent(p) == pytest.approx(step, abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(params(reuse=False, assoc=False))
def test_zf_gap_never_exceeds_mrt(p):
    assert delta_zf(p) <= delta_mrt(p) + 1e-12
    if classify_regime(p) in (Regime.M, Regime.L) and \
            p.rho_ul <= -0.5 * p.alpha * min(p.eta_bs, p.eta_user):
        assert delta_zf(p) == pytest.approx(delta_mrt(p), abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(params())
def test_if_zf_mrt_ordering(p):
    s = {op: exponent_report(op, p).sinr for op in OperationKind}
    assert s[OperationKind.IF] >= s[OperationKind.ZF] - 1e-12
    assert s[OperationKind.ZF] >= s[OperationKind.MRT] - 1e-12


def test_mrt_gap_ignores_antenna_exponent():
    # the shared core accepts eta_ant separately from eta_bs
    a = ex._core(OperationKind.MRT, 4.0, 0.5, 0.1, 0.5, 0.5, 0.5, 0.0, 0.0)
    b = ex._core(OperationKind.MRT, 4.0, 0.5, 0.9, 0.5, 0.5, 0.5, 0.0, 0.0)
    assert a[1] == b[1]


@settings(max_examples=200, deadline=None)
@given(params(reuse=False, assoc=False))
def test_continuity_at_regime_boundaries(p):
    eps = 1e-6
    for b in (0.0, -0.5 * p.alpha * p.eta_bs, -0.5 * p.alpha * p.eta_bs - p.eta_ant):
        lo, hi = p.with_(rho_ul=b - eps), p.with_(rho_ul=b + eps)
        for op in (OperationKind.MRT, OperationKind.ZF):
            rl, rh = exponent_report(op, lo), exponent_report(op, hi)
            for f in ("snr", "sir", "sinr"):
                assert abs(getattr(rl, f) - getattr(rh, f)) <= 4 * eps


# -- supportable users ----------------------------------------------------------

def test_table_golden():
    p = sp()
    a = supportable_users("IF", -1.0, -1.0, p)
    assert (a.region, a.zeta_user) == ("A", pytest.approx(1.0, abs=TOL))
    g = supportable_users("ZF", 1.0, 1.0, p)
    assert (g.region, g.zeta_user) == ("G", pytest.approx(0.75, abs=TOL))
    g = supportable_users("MRT", 1.0, 1.0, p)
    assert (g.region, g.zeta_user) == ("G", pytest.approx(0.25, abs=TOL))


@pytest.mark.parametrize("alpha,eta_bs", [(4.0, 0.5), (3.0, 0.5), (4.0, 0.3), (3.5, 0.7)])
@pytest.mark.parametrize("op", list(OperationKind))
def test_table_matches_numeric_supremum_on_grid(alpha, eta_bs, op):
    p = ScalingParams(eta_bs=eta_bs, eta_user=0.5, alpha=alpha)
    for rho in np.linspace(-3, 3, 25):
        for tau in np.linspace(-3, 3, 25):
            pt = supportable_users(op, rho, tau, p)
            num = max(supportable_users_numeric(op, rho, tau, p), 0.0)
            assert pt.zeta_user == pytest.approx(num, abs=1e-6), (rho, tau, pt)
            if pt.region == "infeasible":
                assert num == 0.0


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(list(OperationKind)), st.floats(2.1, 6.0), st.floats(0.05, 0.95),
       st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
def test_table_matches_numeric_supremum_random(op, alpha, eta_bs, rho, tau):
    p = ScalingParams(eta_bs=eta_bs, eta_user=0.5, alpha=alpha)
    pt = supportable_users(op, rho, tau, p)
    num = max(supportable_users_numeric(op, rho, tau, p), 0.0)
    assert pt.zeta_user == pytest.approx(num, abs=1e-6)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(list(OperationKind)), st.floats(2.1, 6.0), st.floats(0.05, 0.95),
       st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
def test_supportable_is_a_supremum(op, alpha, eta_bs, rho, tau):
    p = ScalingParams(eta_bs=eta_bs, eta_user=0.5, alpha=alpha)
    z = supportable_users(op, rho, tau, p).zeta_user
    assume(0.0 < z < 1.0)

    def sinr(eu):
        return exponent_report(op, p.with_(eta_user=eu, rho_ul=rho - eu, rho_dl=rho - eu)).sinr

    assert sinr(z) >= tau - 1e-9
    # sinr falls at most at a bounded rate past the supremum
    assert sinr(min(z + 1e-3, 1.0)) < tau + 1e-3 * 10.0


def test_zf_gap_boundary_takes_first_label():
    # rho + tau equals the ZF F/G corner exactly: neither strict inequality holds
    p = sp()
    pt = supportable_users("ZF", 0.5, 1.0, p)
    assert pt.region == "F"
    assert pt.zeta_user == pytest.approx(0.5, abs=TOL)
    for d in (1e-9, -1e-9):
        near = supportable_users("ZF", 0.5, 1.0 + d, p)
        assert near.zeta_user == pytest.approx(0.5, abs=1e-8)


def test_boundary_labels_keep_zeta_continuous():
    p = sp()
    # IF B/C and MRT/ZF D/E boundaries
    for op, rho, tau in (("IF", 0.0, 0.5), ("MRT", 0.0, -1.5), ("ZF", 0.0, -1.5),
                         ("MRT", -1.0, -0.5)):
        z0 = supportable_users(op, rho, tau, p).zeta_user
        for d in (1e-9, -1e-9):
            assert supportable_users(op, rho, tau + d, p).zeta_user == pytest.approx(z0, abs=1e-8)


def test_two_strict_regions_raise(monkeypatch):
    def overlapping(op, rho, tau, alpha, eb, ea):
        return {"A": ([(1.0, True)], 0.1), "B": ([(1.0, True)], 0.2)}

    monkeypatch.setattr(ex, "_regions", overlapping)
    with pytest.raises(AmbiguousRegionError):
        table_region("ZF", 0.0, 0.0, sp())


def test_infeasible_region():
    pt = supportable_users("ZF", 1.0, 3.0, sp())
    assert (pt.region, pt.zeta_user) == ("infeasible", 0.0)


def test_constrained_variant_uses_numeric_search():
    p = sp(upsilon_pa=0.2)
    pt = supportable_users("ZF", 1.0, 1.0, p)
    assert pt.zeta_user == pytest.approx(supportable_users_numeric("ZF", 1.0, 1.0, p), abs=1e-12)
    assert pt.zeta_user < supportable_users("ZF", 1.0, 1.0, sp()).zeta_user


def test_partial_association_leaves_snr_limited_regions():
    full, part = sp(), sp(upsilon_pa=0.2)
    for rho in np.linspace(-2, 2, 21):
        for tau in np.linspace(-2, 2, 21):
            a = supportable_users("ZF", rho, tau, full)
            if a.region in "ABCDE":
                b = supportable_users("ZF", rho, tau, part)
                assert b.region == a.region
                assert b.zeta_user == pytest.approx(a.zeta_user, abs=1e-9)


def test_grid_shape_and_monotonicity():
    p = sp()
    g = tradeoff_grid("ZF", (0, 1), (0, 1), p, 2)
    assert len(g) == 2 and all(len(r) == 2 for r in g)
    assert [c.rho for c in g[1]] == [1.0, 1.0]
    dense = tradeoff_grid("ZF", (-2, 2), (-2, 2), p, 41)
    z = np.array([[c.zeta_user for c in row] for row in dense])
    assert (np.diff(z, axis=0) >= -1e-12).all()


def test_operations_agree_in_snr_limited_regions():
    p = sp()
    grids = {op: tradeoff_grid(op, (-2, 2), (-2, 2), p, 21) for op in OperationKind}
    for i in range(21):
        for j in range(21):
            cells = {op: grids[op][i][j] for op in OperationKind}
            if cells[OperationKind.MRT].region in ("A", "B", "C") and \
                    cells[OperationKind.ZF].region in ("A", "B", "C"):
                zs = {c.zeta_user for c in cells.values()}
                assert max(zs) - min(zs) <= 1e-12
            assert cells[OperationKind.ZF].zeta_user >= cells[OperationKind.MRT].zeta_user - 1e-12
