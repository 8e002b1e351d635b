import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bpfsynth import (
    ConfigurationError,
    DomainError,
    ElementKind,
    FilterSpec,
    SweepGrid,
    UnvalidatedDesignWarning,
    bandpass_elements,
    build_dual_band_netlist,
    build_single_band_netlist,
    chebyshev_g_values,
    coupling_coefficient,
    external_q,
    extract_band_metrics,
    sweep_sparams,
)

from conftest import F0, FBW, PUBLISHED_G, Z0, make_design


def test_coupling_coefficient_published():
    assert coupling_coefficient(0.034, 0.6648, 0.5445) == pytest.approx(0.0565, abs=5e-5)


def test_coupling_coefficient_unit_g():
    assert coupling_coefficient(0.07, 1.0, 1.0) == pytest.approx(0.07, rel=1e-15)


def test_coupling_coefficient_three_pole():
    assert coupling_coefficient(0.05, 1.0316, 1.1474) == pytest.approx(0.04596, abs=5e-6)


def test_external_q_published():
    assert external_q(0.034, 1.0, 0.6648) == pytest.approx(19.5529, abs=5e-5)


def test_external_q_unit_g():
    assert external_q(0.04, 1.0, 1.0) == pytest.approx(25.0, rel=1e-15)


def test_external_q_three_pole():
    assert external_q(0.05, 1.0, 1.0316) == pytest.approx(20.632, rel=1e-12)


@pytest.mark.parametrize("fn", [coupling_coefficient, external_q])
@pytest.mark.parametrize("args", [(0.0, 1.0, 1.0), (0.1, -1.0, 1.0), (0.1, 1.0, 0.0)])
def test_coupling_domain(fn, args):
    with pytest.raises(DomainError):
        fn(*args)


def test_element_values_from_published_g():
    from bpfsynth.prototype import PrototypeCoefficients

    proto = PrototypeCoefficients(2, 0.0432, PUBLISHED_G)
    spec = FilterSpec(F0, FBW, Z0, 2, 0.0432)
    elems, c = bandpass_elements(spec, proto)
    assert elems.c_res == pytest.approx(44.4564e-12, rel=1e-4)
    assert elems.l_res == pytest.approx(0.2907e-9, rel=2e-4)
    assert elems.l_io == pytest.approx(5.6841e-9, rel=1e-4)
    assert elems.l_inter == pytest.approx(5.1442e-9, rel=1e-4)
    # hand evaluation: b = w0 C = 0.39106, J01 = 0.02000, J12 = b*M
    assert c.b_slope == pytest.approx(0.391059, rel=1e-5)
    assert c.j01 == pytest.approx(0.02000, abs=5e-6)
    assert c.j12 == pytest.approx(0.02210, abs=5e-6)
    assert elems.l_io == pytest.approx(1 / (2 * math.pi * F0 * c.j01), rel=1e-14)


def test_output_inverter_matches_input(single):
    _, elems, c, _ = single
    # g0*g1 = 0.6648 vs g2*g3 = 0.66484 for the published values
    assert c.j_out == pytest.approx(c.j01, rel=1e-3)
    assert elems.l_out == pytest.approx(elems.l_io, rel=1e-3)


def test_frequency_scaling_of_elements(proto):
    _, e1, c1, _ = make_design(proto)
    _, e2, c2, _ = make_design(proto, f0_hz=2 * F0)
    assert e2.c_res == pytest.approx(e1.c_res / 2, rel=1e-14)
    assert e2.l_res == pytest.approx(e1.l_res / 2, rel=1e-14)
    assert c2.j12 == pytest.approx(c1.j12, rel=1e-14)


def test_order_mismatch(proto):
    spec = FilterSpec(F0, FBW, Z0, 3, 0.1)
    with pytest.raises(ConfigurationError):
        bandpass_elements(spec, proto)


@pytest.mark.parametrize(
    "field,value",
    [("f0_hz", 0.0), ("fbw", 0.0), ("fbw", 1.0), ("z0_ohm", -50.0), ("order", 0), ("q_unloaded", 0.0), ("ripple_db", 0.0)],
)
def test_filter_spec_invariants(field, value):
    kw = dict(f0_hz=F0, fbw=FBW, z0_ohm=Z0, order=2, ripple_db=0.05)
    kw[field] = value
    with pytest.raises(DomainError) as exc:
        FilterSpec(**kw)
    assert exc.value.param == field


def test_coupling_identities(single):
    _, _, c, _ = single
    assert c.j12 == c.b_slope * c.m
    assert c.qe == pytest.approx(c.b_slope / (Z0 * c.j01**2), rel=1e-12)
    assert c.m > 0 and c.qe > 0 and c.b_slope > 0


def test_single_band_structure(single):
    _, _, c, nl = single
    assert nl.count(ElementKind.INVERTER) == 3
    assert nl.count(ElementKind.CAPACITOR) == 2
    assert nl.count(ElementKind.RESISTOR) == 0
    assert len(nl.ports) == 2
    inv = {el.name: el.value for el in nl.elements if el.kind is ElementKind.INVERTER}
    assert inv == {"J01": c.j01, "J12": c.j12, "J23": c.j_out}
    assert (inv["J01"], inv["J12"], inv["J23"]) == pytest.approx((0.02000, 0.02210, 0.02000), abs=5e-6)
    assert nl.node_names == ("P1", "A", "B", "P2")


def test_dual_band_structure(dual):
    _, _, c, nl = dual
    assert nl.count(ElementKind.INVERTER) == 5
    assert nl.count(ElementKind.CAPACITOR) == 4
    assert set(nl.node_names) == {"P1", "P2", "A", "B", "A1", "B1"}
    inv = {el.name: el.value for el in nl.elements if el.kind is ElementKind.INVERTER}
    assert inv["JAA1"] == inv["JBB1"] == inv["J12"] == c.j12


def test_topology_mismatch(single, dual):
    spec, elems, c, _ = single
    with pytest.raises(ConfigurationError):
        build_dual_band_netlist(spec, elems, c)
    spec, elems, c, _ = dual
    with pytest.raises(ConfigurationError):
        build_single_band_netlist(spec, elems, c)


def test_lossy_netlist_adds_shunt_conductance(proto):
    _, _, c, nl = make_design(proto, "dual_band", q_unloaded=500.0)
    res = [el for el in nl.elements if el.kind is ElementKind.RESISTOR]
    assert len(res) == 4
    for el in res:
        assert 0 in el.nodes
        assert 1 / el.value == pytest.approx(c.b_slope / 500.0, rel=1e-14)


@pytest.mark.parametrize("topology", ["single_band", "dual_band"])
def test_resonance_identity(proto, topology):
    spec, _, _, nl = make_design(proto, topology)
    caps = {el.nodes[0]: el.value for el in nl.elements if el.kind is ElementKind.CAPACITOR}
    inds = {el.nodes[0]: el.value for el in nl.elements if el.kind is ElementKind.INDUCTOR}
    for node, cval in caps.items():
        f_res = 1 / (2 * math.pi * math.sqrt(inds[node] * cval))
        assert f_res == pytest.approx(spec.f0_hz, rel=1e-9)


def test_zero_side_coupling_equals_single_band(single, dual, design_grid):
    spec, elems, c, _ = dual
    decoupled = build_dual_band_netlist(spec, elems, c, side_j=0.0)
    a = sweep_sparams(single[3], design_grid).s
    b = sweep_sparams(decoupled, design_grid).s
    assert np.max(np.abs(a - b)) < 1e-10


@pytest.mark.parametrize("alpha", [0.5, 2.0, 3.7])
@pytest.mark.parametrize("topology", ["single_band", "dual_band"])
def test_frequency_scaling_covariance(proto, topology, alpha):
    _, _, _, base = make_design(proto, topology)
    _, _, _, scaled = make_design(proto, topology, f0_hz=alpha * F0)
    f = np.linspace(1.25e9, 1.55e9, 301)
    a = sweep_sparams(base, f).s
    b = sweep_sparams(scaled, alpha * f).s
    assert np.max(np.abs(a - b)) < 1e-9


def test_dual_band_splitting_grows_with_bandwidth(proto):
    grid = SweepGrid(1.1e9, 1.7e9, 6001)
    seps = []
    for fbw in (0.02, 0.025, 0.03, 0.034, 0.04, 0.05):
        p = chebyshev_g_values(2, proto.ripple_db)
        _, _, _, nl = make_design(p, "dual_band", fbw=fbw)
        bands = extract_band_metrics(sweep_sparams(nl, grid), 18.0)
        assert len(bands) == 2
        seps.append(bands[1].f_center - bands[0].f_center)
    assert all(b > a for a, b in zip(seps, seps[1:]))


def test_dual_band_splitting_grows_with_side_coupling(dual):
    spec, elems, c, _ = dual
    grid = SweepGrid(1.1e9, 1.7e9, 6001)
    seps = []
    for scale in (0.8, 1.0, 1.25, 1.5):
        nl = build_dual_band_netlist(spec, elems, c, side_j=scale * c.j12)
        bands = extract_band_metrics(sweep_sparams(nl, grid), 18.0)
        assert len(bands) == 2
        seps.append(bands[1].f_center - bands[0].f_center)
    assert all(b > a for a, b in zip(seps, seps[1:]))


def test_inductive_pi_uses_positive_series_inductors(proto, design_grid):
    spec, elems, c, nl = make_design(proto, "single_band", coupling_model="inductive_pi")
    assert nl.count(ElementKind.INVERTER) == 0
    assert all(el.value > 0 for el in nl.elements)
    series = {el.name: el.value for el in nl.elements if el.kind is ElementKind.INDUCTOR and 0 not in el.nodes}
    assert series["J01"] == pytest.approx(elems.l_io, rel=1e-14)
    assert series["J12"] == pytest.approx(elems.l_inter, rel=1e-14)
    # node A carries C plus the susceptance of both series couplings at f0
    w0 = spec.omega0
    c_a = next(el.value for el in nl.elements if el.name == "C_A")
    assert c_a == pytest.approx((1 / elems.l_res + w0 * (c.j01 + c.j12)) / w0**2, rel=1e-12)
    # every resonator's own admittance still vanishes at f0
    from bpfsynth import stamp_admittance

    y = stamp_admittance(nl, F0)
    for node in (2, 3):
        assert abs(y[node - 1, node - 1]) < 1e-12 * w0 * elems.c_res


def test_inductive_pi_port_loading(proto):
    # The port-side arm of each I/O coupling has no resonator to absorb it,
    # so the end resonator sees Z0 in series with w0*L01 instead of the
    # inverter-transformed load J01^2*Z0.
    spec, elems, c, nl = make_design(proto, "single_band", coupling_model="inductive_pi")
    x = spec.omega0 * elems.l_io
    assert Z0 / (Z0**2 + x**2) == pytest.approx(0.5 * c.j01**2 * Z0, rel=1e-3)


def test_inductive_pi_matches_inverter_stamp_at_f0(proto):
    from bpfsynth import stamp_admittance

    _, _, _, ideal = make_design(proto, "dual_band")
    _, _, _, pi = make_design(proto, "dual_band", coupling_model="inductive_pi")
    # ports see series inductors instead of ideal inverters, so compare only
    # resonator-to-resonator couplings and resonator self-admittance
    ya, yb = stamp_admittance(ideal, F0), stamp_admittance(pi, F0)
    res = [1, 2, 4, 5]  # A, B, A1, B1
    np.testing.assert_allclose(yb[np.ix_(res, res)], ya[np.ix_(res, res)], atol=1e-12)


@pytest.mark.parametrize("order", [1, 3, 4])
def test_general_orders_are_flagged(order):
    p = chebyshev_g_values(order, 0.1)
    spec = FilterSpec(F0, FBW, Z0, order, 0.1)
    elems, c = bandpass_elements(spec, p)
    with pytest.warns(UnvalidatedDesignWarning):
        nl = build_single_band_netlist(spec, elems, c)
    assert nl.count(ElementKind.CAPACITOR) == order
    assert nl.count(ElementKind.INVERTER) == order + 1


@settings(max_examples=40, deadline=None)
@given(st.floats(1e8, 2e10), st.floats(0.005, 0.2), st.floats(10.0, 200.0), st.integers(1, 6))
def test_element_invariants(f0, fbw, z0, order):
    p = chebyshev_g_values(order, 0.1)
    spec = FilterSpec(f0, fbw, z0, order, 0.1)
    elems, c = bandpass_elements(spec, p)
    assert 1 / (2 * math.pi * math.sqrt(elems.l_res * elems.c_res)) == pytest.approx(f0, rel=1e-9)
    assert c.j12 == c.b_slope * c.m
    assert c.qe == pytest.approx(c.b_slope / (z0 * c.j01**2), rel=1e-12)
    assert min(elems.c_res, elems.l_res, elems.l_io, elems.l_inter, elems.l_out) > 0
