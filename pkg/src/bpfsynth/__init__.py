"""Coupled-resonator bandpass filter synthesis and circuit-level simulation.

Single-band inverter-coupled designs are extended to dual-band networks by
hanging a side resonator off each main-line resonator with the same
inter-resonator coupling.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigurationError,
    DomainError,
    NoSolutionError,
    PipelineError,
    UnvalidatedDesignWarning,
    ValidationError,
)
from .prototype import (
    PrototypeCoefficients,
    chebyshev_g_values,
    fit_ripple_to_g1,
    ripple_from_return_loss,
)
from .synthesis import (
    BandpassElements,
    CouplingModel,
    CouplingParams,
    FilterSpec,
    Topology,
    bandpass_elements,
    build_dual_band_netlist,
    build_netlist,
    build_single_band_netlist,
    coupling_coefficient,
    external_q,
)
from .netsim import (
    BandMetrics,
    Element,
    ElementKind,
    Netlist,
    Port,
    SParamSweep,
    Spacing,
    SweepGrid,
    extract_band_metrics,
    stamp_admittance,
    sweep_sparams,
)
from .microstrip import (
    MicrostripLine,
    SubstrateSpec,
    UShapeGeometry,
    analyze_microstrip,
    electrical_size,
    guided_wavelength,
    synthesize_width,
    u_fold_geometry,
)

__all__ = [name for name in dir() if not name.startswith("_")]
