"""Bandpass synthesis from a lowpass prototype.

All resonators are shunt LC tanks at the band center, coupled through
admittance inverters.  A coupling inductance L is read as the inverter it
realizes at the center frequency, ``J = 1 / (w0 * L)``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .errors import ConfigurationError, DomainError, UnvalidatedDesignWarning
from .netsim import Element, ElementKind, Netlist, Port
from .prototype import PrototypeCoefficients


class Topology(str, enum.Enum):
    SINGLE_BAND = "single_band"
    DUAL_BAND = "dual_band"


class CouplingModel(str, enum.Enum):
    IDEAL_INVERTER = "ideal_inverter"
    INDUCTIVE_PI = "inductive_pi"


@dataclass(frozen=True)
class FilterSpec:
    f0_hz: float
    fbw: float
    z0_ohm: float
    order: int
    ripple_db: float
    topology: Topology = Topology.SINGLE_BAND
    q_unloaded: float | None = None
    coupling_model: CouplingModel = CouplingModel.IDEAL_INVERTER

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology(self.topology))
        object.__setattr__(self, "coupling_model", CouplingModel(self.coupling_model))
        if not self.f0_hz > 0:
            raise DomainError("f0_hz", self.f0_hz, "must be > 0")
        if not 0 < self.fbw < 1:
            raise DomainError("fbw", self.fbw, "must satisfy 0 < fbw < 1")
        if not self.z0_ohm > 0:
            raise DomainError("z0_ohm", self.z0_ohm, "must be > 0")
        if not isinstance(self.order, int) or self.order < 1:
            raise DomainError("order", self.order, "must be an integer >= 1")
        if not self.ripple_db > 0:
            raise DomainError("ripple_db", self.ripple_db, "must be > 0")
        if self.q_unloaded is not None and not self.q_unloaded > 0:
            raise DomainError("q_unloaded", self.q_unloaded, "must be > 0 when given")

    @property
    def omega0(self) -> float:
        return 2.0 * math.pi * self.f0_hz


@dataclass(frozen=True)
class CouplingParams:
    """Coupling coefficients and the inverter admittances that realize them.

    ``m`` and ``j12`` describe the first inter-resonator coupling; higher
    orders carry the full chain in ``m_chain`` / ``j_chain``.  ``j_out`` is
    the output inverter, derived from ``g[n] * g[n+1]``.
    """

    m: float
    qe: float
    b_slope: float
    j01: float
    j12: float
    j_out: float
    m_chain: tuple[float, ...] = ()
    j_chain: tuple[float, ...] = ()


@dataclass(frozen=True)
class BandpassElements:
    c_res: float
    l_res: float
    l_io: float
    l_inter: float
    l_out: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _positive(**kwargs):
    for name, value in kwargs.items():
        if not value > 0:
            raise DomainError(name, value, "must be > 0")


def coupling_coefficient(fbw: float, g1: float, g2: float) -> float:
    """Coupling between adjacent resonators: ``fbw / sqrt(g1 * g2)``."""
    _positive(fbw=fbw, g1=g1, g2=g2)
    return fbw / math.sqrt(g1 * g2)


def external_q(fbw: float, g0: float, g1: float) -> float:
    """Port loading of an end resonator: ``g0 * g1 / fbw``."""
    _positive(fbw=fbw, g0=g0, g1=g1)
    return g0 * g1 / fbw


def bandpass_elements(spec: FilterSpec, proto: PrototypeCoefficients) -> tuple[BandpassElements, CouplingParams]:
    if spec.order != proto.order:
        raise ConfigurationError(f"spec order {spec.order} != prototype order {proto.order}")
    g, n = proto.g, proto.order
    w0, fbw, z0 = spec.omega0, spec.fbw, spec.z0_ohm

    c_res = g[1] / (fbw * w0 * z0)
    l_res = 1.0 / (w0**2 * c_res)
    b = w0 * c_res

    m_chain = tuple(coupling_coefficient(fbw, g[k], g[k + 1]) for k in range(1, n))
    # n == 1 has no inter-resonator coupling; the formal g1/g2 value keeps
    # the side coupling of a one-pole dual-band build defined.
    m = m_chain[0] if m_chain else coupling_coefficient(fbw, g[1], g[2])
    j_chain = tuple(b * mk for mk in m_chain)
    j01 = math.sqrt(b * fbw / (z0 * g[0] * g[1]))
    j_out = math.sqrt(b * fbw / (z0 * g[n] * g[n + 1]))
    j12 = b * m

    coupling = CouplingParams(
        m=m,
        qe=external_q(fbw, g[0], g[1]),
        b_slope=b,
        j01=j01,
        j12=j12,
        j_out=j_out,
        m_chain=m_chain,
        j_chain=j_chain,
    )
    elems = BandpassElements(
        c_res=c_res,
        l_res=l_res,
        l_io=1.0 / (w0 * j01),
        l_inter=1.0 / (w0 * j12),
        l_out=1.0 / (w0 * j_out),
    )
    return elems, coupling


class _Builder:
    """Accumulates resonators and couplings, then emits a Netlist.

    In ``INDUCTIVE_PI`` mode each coupling becomes its series inductor; the
    Pi's negative shunt arms are folded into the resonator capacitances.
    An arm on a port node has no resonator to land in and is dropped, so the
    end resonators see ``Z0 + j*w*L`` rather than the ideal inverter load.
    """

    def __init__(self, spec: FilterSpec, elems: BandpassElements, coupling: CouplingParams):
        self.spec = spec
        self.elems = elems
        self.coupling = coupling
        self.names: list[str] = []
        self.couplings: list[tuple[str, int, int, float]] = []

    def node(self, name: str) -> int:
        self.names.append(name)
        return len(self.names)

    def couple(self, name: str, i: int, j: int, jval: float):
        if jval < 0:
            raise DomainError(f"{name}.J", jval, "must be >= 0")
        if jval > 0:
            self.couplings.append((name, i, j, jval))

    def netlist(self, resonators: list[int], ports: tuple[int, int]) -> Netlist:
        spec, w0 = self.spec, self.spec.omega0
        out: list[Element] = []
        pi_model = spec.coupling_model is CouplingModel.INDUCTIVE_PI

        # Extra node susceptance seen through series coupling inductors.
        loading = {r: 0.0 for r in resonators}
        for name, i, j, jval in self.couplings:
            if pi_model:
                out.append(Element(ElementKind.INDUCTOR, (i, j), 1.0 / (w0 * jval), name))
                for node in (i, j):
                    if node in loading:
                        loading[node] += jval
            else:
                out.append(Element(ElementKind.INVERTER, (i, j), jval, name))

        for r in resonators:
            label = self.names[r - 1]
            c = self.elems.c_res
            if pi_model:
                # retune so the node's own admittance still vanishes at f0
                c = (1.0 / self.elems.l_res + w0 * loading[r]) / w0**2
            out.append(Element(ElementKind.CAPACITOR, (r, 0), c, f"C_{label}"))
            out.append(Element(ElementKind.INDUCTOR, (r, 0), self.elems.l_res, f"L_{label}"))
            if spec.q_unloaded is not None:
                r_loss = spec.q_unloaded / self.coupling.b_slope
                out.append(Element(ElementKind.RESISTOR, (r, 0), r_loss, f"R_{label}"))

        return Netlist(
            node_count=len(self.names),
            elements=tuple(out),
            ports=(Port(ports[0], spec.z0_ohm), Port(ports[1], spec.z0_ohm)),
            node_names=tuple(self.names),
        )


def _main_line(b: _Builder) -> tuple[list[int], int, int]:
    n = b.spec.order
    p1 = b.node("P1")
    main = [b.node(_label(k, n)) for k in range(n)]
    p2 = b.node("P2")
    c = b.coupling
    b.couple("J01", p1, main[0], c.j01)
    for k in range(n - 1):
        b.couple(f"J{k + 1}{k + 2}", main[k], main[k + 1], c.j_chain[k])
    b.couple(f"J{n}{n + 1}", main[-1], p2, c.j_out)
    return main, p1, p2


def _label(k: int, n: int) -> str:
    if n == 2:
        return "AB"[k]
    return f"R{k + 1}"


def build_single_band_netlist(spec: FilterSpec, elems: BandpassElements, coupling: CouplingParams) -> Netlist:
    """Port 1 - J01 - R1 - J12 - ... - Rn - Jout - Port 2, all shunt resonators."""
    if spec.topology is not Topology.SINGLE_BAND:
        raise ConfigurationError(f"single-band builder given topology {spec.topology.value!r}")
    if spec.order != 2:
        warnings.warn(f"single-band order {spec.order} is unvalidated", UnvalidatedDesignWarning, stacklevel=2)
    b = _Builder(spec, elems, coupling)
    main, p1, p2 = _main_line(b)
    return b.netlist(main, (p1, p2))


def build_dual_band_netlist(
    spec: FilterSpec,
    elems: BandpassElements,
    coupling: CouplingParams,
    side_j: float | None = None,
) -> Netlist:
    """Single-band main line plus one side resonator per main resonator.

    Each side resonator (A1 off A, B1 off B for the two-pole case) uses the
    same inverter as the main inter-resonator coupling unless ``side_j``
    overrides it.  ``side_j=0`` leaves the side resonators floating, which
    makes them invisible to the ports.
    """
    if spec.topology is not Topology.DUAL_BAND:
        raise ConfigurationError(f"dual-band builder given topology {spec.topology.value!r}")
    if spec.order != 2:
        warnings.warn(f"dual-band order {spec.order} is unvalidated", UnvalidatedDesignWarning, stacklevel=2)
    jside = coupling.j12 if side_j is None else side_j
    b = _Builder(spec, elems, coupling)
    main, p1, p2 = _main_line(b)
    sides = []
    for r in main:
        label = b.names[r - 1]
        s = b.node(f"{label}1")
        sides.append(s)
        b.couple(f"J{label}{label}1", r, s, jside)
    return b.netlist(main + sides, (p1, p2))


def build_netlist(spec: FilterSpec, elems: BandpassElements, coupling: CouplingParams) -> Netlist:
    if spec.topology is Topology.DUAL_BAND:
        return build_dual_band_netlist(spec, elems, coupling)
    return build_single_band_netlist(spec, elems, coupling)
