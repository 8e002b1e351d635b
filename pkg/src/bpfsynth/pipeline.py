"""End-to-end design flow and the JSON design report."""

from __future__ import annotations

import json
import os
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

from . import __version__
from .config import DesignConfig
from .errors import PipelineError
from .export import atomic_write_text, csv_text, touchstone_text
from .microstrip import (
    MicrostripLine,
    SubstrateSpec,
    UShapeGeometry,
    electrical_size,
    synthesize_width,
    u_fold_geometry,
)
from .netsim import BandMetrics, Netlist, SParamSweep, extract_band_metrics, sweep_sparams
from .prototype import PrototypeCoefficients, chebyshev_g_values
from .synthesis import BandpassElements, CouplingParams, bandpass_elements, build_netlist


def _sig6(x: float) -> float:
    return float(f"{x:.5e}")


@dataclass(frozen=True)
class DesignReport:
    version: str
    config: dict[str, Any]
    ripple_source: str
    ripple_input: float
    prototype: PrototypeCoefficients
    coupling: CouplingParams
    elements: BandpassElements
    netlist: Netlist
    rl_threshold_db: float
    bands: tuple[BandMetrics, ...]
    substrate: SubstrateSpec
    line: MicrostripLine
    geometry: UShapeGeometry
    electrical_size: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "ripple_source": self.ripple_source,
            "ripple_input": self.ripple_input,
            "prototype": {"order": self.prototype.order, "ripple_db": self.prototype.ripple_db, "g": list(self.prototype.g)},
            "coupling": {
                **asdict(self.coupling),
                "m_chain": list(self.coupling.m_chain),
                "j_chain": list(self.coupling.j_chain),
            },
            "elements": self.elements.to_dict(),
            "netlist": self.netlist.to_dict(),
            "rl_threshold_db": self.rl_threshold_db,
            "bands": [b.to_dict() for b in self.bands],
            "substrate": self.substrate.to_dict(),
            "line": self.line.to_dict(),
            "geometry": self.geometry.to_dict(),
            "electrical_size": list(self.electrical_size),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "DesignReport":
        c = d["coupling"]
        geo = d["geometry"]
        return cls(
            version=d["version"],
            config=d["config"],
            ripple_source=d["ripple_source"],
            ripple_input=d["ripple_input"],
            prototype=PrototypeCoefficients(d["prototype"]["order"], d["prototype"]["ripple_db"], tuple(d["prototype"]["g"])),
            coupling=CouplingParams(**{**c, "m_chain": tuple(c["m_chain"]), "j_chain": tuple(c["j_chain"])}),
            elements=BandpassElements(**d["elements"]),
            netlist=Netlist.from_dict(d["netlist"]),
            rl_threshold_db=d["rl_threshold_db"],
            bands=tuple(BandMetrics(**b) for b in d["bands"]),
            substrate=SubstrateSpec(**d["substrate"]),
            line=MicrostripLine(**d["line"]),
            geometry=UShapeGeometry(**{**geo, "bbox": tuple(geo["bbox"])}),
            electrical_size=tuple(d["electrical_size"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "DesignReport":
        return cls.from_dict(json.loads(text))


@contextmanager
def stage(name: str):
    try:
        yield
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(name, exc) from exc


@dataclass(frozen=True)
class PipelineResult:
    report: DesignReport
    sweep: SParamSweep
    written: tuple[Path, ...]


def design_geometry(cfg: DesignConfig) -> tuple[MicrostripLine, UShapeGeometry, tuple[float, float]]:
    """Resonator line and U-fold at the band center, rounded to 6 significant figures."""
    line = synthesize_width(cfg.line_z0_ohm, cfg.substrate, cfg.filter.f0_hz)
    geom = u_fold_geometry(line, cfg.filter.f0_hz, cfg.base_fraction)
    size = electrical_size(geom.bbox, line.lambda_g_m)
    line = MicrostripLine(**{k: _sig6(v) for k, v in line.to_dict().items()})
    geom = UShapeGeometry(
        total_length_m=_sig6(geom.total_length_m),
        base_len_m=_sig6(geom.base_len_m),
        arm_len_m=_sig6(geom.arm_len_m),
        trace_width_m=_sig6(geom.trace_width_m),
        bbox=(_sig6(geom.bbox[0]), _sig6(geom.bbox[1])),
    )
    return line, geom, (_sig6(size[0]), _sig6(size[1]))


def run_pipeline(cfg: DesignConfig, write: bool = True) -> PipelineResult:
    """prototype -> synthesis -> netlist -> sweep -> metrics -> geometry -> files.

    Any failure raises :class:`PipelineError` tagged with the stage name.
    Output files are only created once every stage has succeeded, and are
    removed again if writing any of them fails.
    """
    spec = cfg.filter
    with stage("prototype"):
        proto = chebyshev_g_values(spec.order, spec.ripple_db)
    with stage("synthesis"):
        elems, coupling = bandpass_elements(spec, proto)
    with stage("netlist"):
        netlist = build_netlist(spec, elems, coupling)
    with stage("sweep"):
        sweep = sweep_sparams(netlist, cfg.grid)
    with stage("metrics"):
        bands = tuple(extract_band_metrics(sweep, cfg.rl_threshold_db))
    with stage("geometry"):
        line, geom, size = design_geometry(cfg)

    report = DesignReport(
        version=__version__,
        config=cfg.raw,
        ripple_source=cfg.ripple_source,
        ripple_input=cfg.ripple_input,
        prototype=proto,
        coupling=coupling,
        elements=elems,
        netlist=netlist,
        rl_threshold_db=cfg.rl_threshold_db,
        bands=bands,
        substrate=cfg.substrate,
        line=line,
        geometry=geom,
        electrical_size=size,
    )
    written: tuple[Path, ...] = ()
    if write:
        with stage("write"):
            written = write_outputs(cfg.outputs, report, sweep)
    return PipelineResult(report=report, sweep=sweep, written=written)


def write_outputs(outputs: dict[str, str], report: DesignReport | None, sweep: SParamSweep | None) -> tuple[Path, ...]:
    renderers = {
        "report_json": lambda: report.to_json(),
        "touchstone": lambda: touchstone_text(sweep),
        "csv": lambda: csv_text(sweep),
    }
    # render everything first so a formatting error writes nothing
    texts = [(outputs[key], renderers[key]()) for key in renderers if key in outputs]
    written: list[Path] = []
    try:
        for path, text in texts:
            written.append(atomic_write_text(path, text))
    except BaseException:
        for p in written:
            if os.path.exists(p):
                os.unlink(p)
        raise
    return tuple(written)
