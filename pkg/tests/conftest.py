import pytest

from bpfsynth import (
    FilterSpec,
    SubstrateSpec,
    SweepGrid,
    bandpass_elements,
    build_netlist,
    chebyshev_g_values,
    fit_ripple_to_g1,
)

# published design data for the 1.4 GHz two-pole filter
F0 = 1.4e9
FBW = 0.034
Z0 = 50.0
G1 = 0.6648
PUBLISHED_G = (1.0, 0.6648, 0.5445, 1.2210)

_acceptance = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def proto():
    return chebyshev_g_values(2, fit_ripple_to_g1(2, G1))


def make_design(proto, topology="single_band", **overrides):
    kw = dict(f0_hz=F0, fbw=FBW, z0_ohm=Z0, order=2, ripple_db=proto.ripple_db, topology=topology)
    kw.update(overrides)
    spec = FilterSpec(**kw)
    if spec.order != proto.order:
        proto = chebyshev_g_values(spec.order, spec.ripple_db)
    elems, coupling = bandpass_elements(spec, proto)
    return spec, elems, coupling, build_netlist(spec, elems, coupling)


@pytest.fixture(scope="session")
def single(proto):
    return make_design(proto, "single_band")


@pytest.fixture(scope="session")
def dual(proto):
    return make_design(proto, "dual_band")


@pytest.fixture(scope="session")
def design_grid():
    return SweepGrid(1.2e9, 1.6e9, 4001)


@pytest.fixture(scope="session")
def substrate():
    return SubstrateSpec(eps_r=10.7, h_m=1.27e-3, tan_delta=0.0023, t_metal_m=35e-6, sigma_s_per_m=5.8e7)


@pytest.fixture
def record_criterion(request):
    """Collects one pass/fail line per acceptance criterion for the summary."""
    lines = request.config.stash.setdefault(_acceptance, [])

    def record(label, ok, detail):
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_acceptance, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
