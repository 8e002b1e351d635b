"""AC nodal analysis of R/L/C/inverter netlists and two-port S-parameters.

Node 0 is ground. Each port is a node terminated in a real reference
impedance; scattering parameters are power-wave referenced to those
impedances.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError


class ElementKind(str, enum.Enum):
    RESISTOR = "resistor"
    INDUCTOR = "inductor"
    CAPACITOR = "capacitor"
    INVERTER = "inverter"


@dataclass(frozen=True)
class Element:
    kind: ElementKind
    nodes: tuple[int, int]
    value: float  # ohm, henry, farad or siemens by kind
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", ElementKind(self.kind))
        object.__setattr__(self, "nodes", tuple(int(n) for n in self.nodes))
        if not (math.isfinite(self.value) and self.value > 0):
            raise DomainError(f"{self.name or self.kind.value}.value", self.value, "must be finite and > 0")
        i, j = self.nodes
        if i == j:
            raise ConfigurationError(f"element {self.name!r} connects node {i} to itself")
        if self.kind is ElementKind.INVERTER and 0 in self.nodes:
            raise ConfigurationError(f"inverter {self.name!r} must connect two non-ground nodes")


@dataclass(frozen=True)
class Port:
    node: int
    z_ref: float = 50.0

    def __post_init__(self):
        if not self.z_ref > 0:
            raise DomainError("z_ref", self.z_ref, "must be > 0")


@dataclass(frozen=True)
class Netlist:
    """Immutable circuit graph with exactly two ports.

    ``node_names[k - 1]`` labels node ``k``.
    """

    node_count: int
    elements: tuple[Element, ...]
    ports: tuple[Port, Port]
    node_names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "ports", tuple(self.ports))
        if not self.node_names:
            object.__setattr__(self, "node_names", tuple(f"n{k}" for k in range(1, self.node_count + 1)))
        if len(self.node_names) != self.node_count:
            raise ConfigurationError("node_names must label every non-ground node")
        for el in self.elements:
            if max(el.nodes) > self.node_count:
                raise ConfigurationError(f"element {el.name!r} references missing node {max(el.nodes)}")
        if len(self.ports) != 2:
            raise ConfigurationError(f"expected exactly two ports, got {len(self.ports)}")
        p1, p2 = (p.node for p in self.ports)
        for p in (p1, p2):
            if not 1 <= p <= self.node_count:
                raise ConfigurationError(f"port node {p} does not exist")
        if p1 == p2:
            raise ConfigurationError("port nodes must be distinct")
        if p2 not in self._component(p1):
            raise ConfigurationError("ports are not connected through the network")

    def _component(self, start: int) -> set[int]:
        adj: dict[int, set[int]] = {k: set() for k in range(1, self.node_count + 1)}
        for el in self.elements:
            i, j = el.nodes
            if i and j:
                adj[i].add(j)
                adj[j].add(i)
        seen, stack = {start}, [start]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return seen

    def port_connected_nodes(self) -> list[int]:
        """Sorted nodes that share a connected component with port 1."""
        return sorted(self._component(self.ports[0].node))

    def count(self, kind: ElementKind) -> int:
        return sum(1 for el in self.elements if el.kind is ElementKind(kind))

    def to_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "node_names": list(self.node_names),
            "elements": [
                {"name": el.name, "kind": el.kind.value, "nodes": list(el.nodes), "value": el.value}
                for el in self.elements
            ],
            "ports": [{"node": p.node, "z_ref": p.z_ref} for p in self.ports],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Netlist":
        return cls(
            node_count=d["node_count"],
            node_names=tuple(d["node_names"]),
            elements=tuple(Element(ElementKind(e["kind"]), tuple(e["nodes"]), e["value"], e["name"]) for e in d["elements"]),
            ports=tuple(Port(p["node"], p["z_ref"]) for p in d["ports"]),
        )


class Spacing(str, enum.Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class SweepGrid:
    f_start: float
    f_stop: float
    n_points: int
    spacing: Spacing = Spacing.LINEAR

    def __post_init__(self):
        object.__setattr__(self, "spacing", Spacing(self.spacing))
        if not 0 < self.f_start < self.f_stop:
            raise DomainError("f_start/f_stop", (self.f_start, self.f_stop), "need 0 < f_start < f_stop")
        if not isinstance(self.n_points, int) or self.n_points < 2:
            raise DomainError("n_points", self.n_points, "must be an integer >= 2")

    def frequencies(self) -> np.ndarray:
        if self.spacing is Spacing.LOG:
            return np.geomspace(self.f_start, self.f_stop, self.n_points)
        return np.linspace(self.f_start, self.f_stop, self.n_points)


@dataclass(frozen=True, eq=False)
class SParamSweep:
    """2x2 scattering matrices on a frequency grid.

    Samples where the nodal system was singular hold NaN and are listed in
    ``diagnostics`` as ``(index, message)`` pairs.
    """

    freqs: np.ndarray
    s: np.ndarray  # shape (n, 2, 2)
    z_ref: tuple[float, float]
    grid: SweepGrid | None = None
    diagnostics: tuple[tuple[int, str], ...] = field(default=())

    def __post_init__(self):
        freqs = np.array(self.freqs, dtype=float)
        s = np.array(self.s, dtype=complex)
        if freqs.ndim != 1 or len(freqs) == 0:
            raise DomainError("freqs", freqs.shape, "must be a non-empty 1-D array")
        if s.shape != (len(freqs), 2, 2):
            raise DomainError("s", s.shape, f"expected shape ({len(freqs)}, 2, 2)")
        freqs.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "z_ref", tuple(float(z) for z in self.z_ref))

    def __len__(self):
        return len(self.freqs)

    @property
    def s11(self) -> np.ndarray:
        return self.s[:, 0, 0]

    @property
    def s21(self) -> np.ndarray:
        return self.s[:, 1, 0]

    @property
    def s12(self) -> np.ndarray:
        return self.s[:, 0, 1]

    @property
    def s22(self) -> np.ndarray:
        return self.s[:, 1, 1]


def _db(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(np.abs(x))


def _stamp_parts(netlist: Netlist, nodes: list[int]):
    """Real matrices G, C, Gamma (inverse inductance) and J such that
    Y(w) = G + j*(w*C - Gamma/w + J)."""
    index = {node: k for k, node in enumerate(nodes)}
    n = len(nodes)
    G, C, Gam, J = (np.zeros((n, n)) for _ in range(4))
    for el in netlist.elements:
        i, j = (index.get(node) for node in el.nodes)
        if el.kind is ElementKind.INVERTER:
            if i is None or j is None:
                continue
            J[i, j] += el.value
            J[j, i] += el.value
            continue
        target, y = {
            ElementKind.RESISTOR: (G, 1.0 / el.value),
            ElementKind.CAPACITOR: (C, el.value),
            ElementKind.INDUCTOR: (Gam, 1.0 / el.value),
        }[el.kind]
        for a in (i, j):
            if a is not None:
                target[a, a] += y
        if i is not None and j is not None:
            target[i, j] -= y
            target[j, i] -= y
    return G, C, Gam, J


def stamp_admittance(netlist: Netlist, f: float) -> np.ndarray:
    """Complex node-admittance matrix (ground row/column removed) at ``f``.

    Port terminations are not included.
    """
    if not f > 0:
        raise DomainError("f", f, "must be > 0")
    G, C, Gam, J = _stamp_parts(netlist, list(range(1, netlist.node_count + 1)))
    w = 2.0 * math.pi * f
    return G + 1j * (w * C - Gam / w + J)


def sweep_sparams(netlist: Netlist, grid: SweepGrid | np.ndarray) -> SParamSweep:
    """Two-port S-parameters of ``netlist`` over ``grid``.

    Nodes not connected to the ports cannot influence port quantities and
    are dropped before solving.
    """
    if isinstance(grid, SweepGrid):
        freqs = grid.frequencies()
    else:
        freqs = np.asarray(grid, dtype=float)
        grid = None
        if np.any(freqs <= 0):
            raise DomainError("freqs", freqs, "all frequencies must be > 0")

    nodes = netlist.port_connected_nodes()
    G, C, Gam, J = _stamp_parts(netlist, nodes)
    pidx = [nodes.index(p.node) for p in netlist.ports]
    gref = np.array([1.0 / p.z_ref for p in netlist.ports])
    for k, g in zip(pidx, gref):
        G[k, k] += g

    w = 2.0 * math.pi * freqs
    Y = G[None] + 1j * (w[:, None, None] * C[None] - Gam[None] / w[:, None, None] + J[None])
    rhs = np.zeros((len(nodes), 2), dtype=complex)
    rhs[pidx[0], 0] = 1.0
    rhs[pidx[1], 1] = 1.0

    s = np.empty((len(freqs), 2, 2), dtype=complex)
    diagnostics = []
    scale = 2.0 * np.sqrt(np.outer(gref, gref))
    for n in range(len(freqs)):
        try:
            V = np.linalg.solve(Y[n], rhs)
        except np.linalg.LinAlgError as exc:
            s[n] = np.nan
            diagnostics.append((n, f"singular nodal matrix at {freqs[n]:.9g} Hz: {exc}"))
            continue
        s[n] = scale * V[pidx, :] - np.eye(2)
    z_ref = tuple(p.z_ref for p in netlist.ports)
    return SParamSweep(freqs=freqs, s=s, z_ref=z_ref, grid=grid, diagnostics=tuple(diagnostics))


@dataclass(frozen=True)
class BandMetrics:
    f_center: float
    il_db: float
    rl_min_db: float
    f_lo: float
    f_hi: float
    fbw: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _crossing(f0, f1, y0, y1, level):
    if y1 == y0:
        return f0
    return f0 + (level - y0) * (f1 - f0) / (y1 - y0)


def extract_band_metrics(sweep: SParamSweep, rl_threshold_db: float) -> list[BandMetrics]:
    """Passbands as maximal runs where return loss is at least ``rl_threshold_db``.

    Band edges are linearly interpolated in dB between the samples either
    side of the threshold crossing. Runs touching the sweep ends use the end
    sample as the edge.
    """
    if not rl_threshold_db > 0:
        raise DomainError("rl_threshold_db", rl_threshold_db, "must be > 0")
    f = sweep.freqs
    rl = -_db(sweep.s11)
    il = -_db(sweep.s21)
    inside = rl >= rl_threshold_db
    bands = []
    k, n = 0, len(f)
    while k < n:
        if not inside[k]:
            k += 1
            continue
        start = k
        while k < n and inside[k]:
            k += 1
        stop = k - 1
        f_lo = f[start] if start == 0 else _crossing(f[start - 1], f[start], rl[start - 1], rl[start], rl_threshold_db)
        f_hi = f[stop] if stop == n - 1 else _crossing(f[stop], f[stop + 1], rl[stop], rl[stop + 1], rl_threshold_db)
        if f_hi <= f_lo:
            continue
        f_c = 0.5 * (f_lo + f_hi)
        bands.append(
            BandMetrics(
                f_center=float(f_c),
                il_db=float(np.interp(f_c, f, il)),
                rl_min_db=float(np.min(rl[start : stop + 1])),
                f_lo=float(f_lo),
                f_hi=float(f_hi),
                fbw=float((f_hi - f_lo) / f_c),
            )
        )
    return bands
