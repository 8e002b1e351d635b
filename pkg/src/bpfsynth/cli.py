"""Command-line entry point.

Typical usage::

    bpfsynth report --config configs/dual_band.json
    bpfsynth sim --config configs/single_band.json --sweep 1.3e9:1.5e9:2001
    bpfsynth prototype --order 3 --ripple 0.1
"""

from __future__ import annotations

import argparse
import copy
import json
import sys
from dataclasses import asdict

from . import __version__
from .config import DesignConfig, load_config, parse_config
from .errors import PipelineError, ValidationError
from .netsim import sweep_sparams, extract_band_metrics
from .pipeline import design_geometry, run_pipeline, stage, write_outputs
from .prototype import chebyshev_g_values, fit_ripple_to_g1, ripple_from_return_loss
from .synthesis import bandpass_elements, build_netlist


def _apply_overrides(args) -> DesignConfig:
    with stage("config"):
        with open(args.config) as fh:
            raw = json.load(fh)
    raw = copy.deepcopy(raw)
    if args.f0 is not None:
        raw.setdefault("filter", {})["f0_hz"] = args.f0
    if args.fbw is not None:
        raw.setdefault("filter", {})["fbw"] = args.fbw
    if args.topology is not None:
        raw.setdefault("filter", {})["topology"] = args.topology
    if args.sweep is not None:
        try:
            start, stop, n = args.sweep.split(":")
            raw["sweep"] = {**raw.get("sweep", {}), "f_start_hz": float(start), "f_stop_hz": float(stop), "n_points": int(n)}
        except ValueError as exc:
            raise ValidationError("--sweep", f"expected START:STOP:N, got {args.sweep!r}") from exc
    return parse_config(raw)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_prototype(args) -> None:
    if args.config:
        cfg = _apply_overrides(args)
        order, ripple, source = cfg.filter.order, cfg.filter.ripple_db, cfg.ripple_source
    else:
        if args.order is None:
            raise ValidationError("--order", "required without --config")
        given = [x is not None for x in (args.ripple, args.return_loss, args.g1)]
        if sum(given) != 1:
            raise ValidationError("--ripple|--return-loss|--g1", "give exactly one")
        order = args.order
        with stage("prototype"):
            if args.ripple is not None:
                ripple, source = args.ripple, "ripple_db"
            elif args.return_loss is not None:
                ripple, source = ripple_from_return_loss(args.return_loss), "return_loss_db"
            else:
                ripple, source = fit_ripple_to_g1(order, args.g1), "g1"
    with stage("prototype"):
        proto = chebyshev_g_values(order, ripple)
    _emit({"order": proto.order, "ripple_db": proto.ripple_db, "ripple_source": source, "g": list(proto.g)})


def cmd_synth(args) -> None:
    cfg = _apply_overrides(args)
    with stage("prototype"):
        proto = chebyshev_g_values(cfg.filter.order, cfg.filter.ripple_db)
    with stage("synthesis"):
        elems, coupling = bandpass_elements(cfg.filter, proto)
    with stage("netlist"):
        netlist = build_netlist(cfg.filter, elems, coupling)
    _emit({"coupling": asdict(coupling), "elements": elems.to_dict(), "netlist": netlist.to_dict()})


def cmd_sim(args) -> None:
    cfg = _apply_overrides(args)
    with stage("prototype"):
        proto = chebyshev_g_values(cfg.filter.order, cfg.filter.ripple_db)
    with stage("synthesis"):
        elems, coupling = bandpass_elements(cfg.filter, proto)
    with stage("netlist"):
        netlist = build_netlist(cfg.filter, elems, coupling)
    with stage("sweep"):
        sweep = sweep_sparams(netlist, cfg.grid)
    with stage("metrics"):
        bands = extract_band_metrics(sweep, cfg.rl_threshold_db)
    outputs = {k: v for k, v in cfg.outputs.items() if k in ("touchstone", "csv")}
    with stage("write"):
        write_outputs(outputs, None, sweep)
    _emit({"rl_threshold_db": cfg.rl_threshold_db, "bands": [b.to_dict() for b in bands]})


def cmd_geom(args) -> None:
    cfg = _apply_overrides(args)
    with stage("geometry"):
        line, geom, size = design_geometry(cfg)
    _emit({"line": line.to_dict(), "geometry": geom.to_dict(), "electrical_size": list(size)})


def cmd_report(args) -> None:
    cfg = _apply_overrides(args)
    result = run_pipeline(cfg)
    if not cfg.outputs.get("report_json"):
        sys.stdout.write(result.report.to_json())
    else:
        for p in result.written:
            print(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bpfsynth", description="Coupled-resonator bandpass filter synthesis.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, config_required=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=config_required, help="JSON design configuration")
        p.add_argument("--f0", type=float, help="override filter.f0_hz")
        p.add_argument("--fbw", type=float, help="override filter.fbw")
        p.add_argument("--topology", choices=["single_band", "dual_band"], help="override filter.topology")
        p.add_argument("--sweep", help="override sweep as START:STOP:N (Hz)")
        p.set_defaults(func=func)
        return p

    p = add("prototype", cmd_prototype, "Chebyshev lowpass prototype g-values", config_required=False)
    p.add_argument("--order", type=int)
    p.add_argument("--ripple", type=float, help="passband ripple in dB")
    p.add_argument("--return-loss", type=float, help="minimum return loss in dB")
    p.add_argument("--g1", type=float, help="fit ripple to this first element value")
    add("synth", cmd_synth, "element values, coupling parameters and netlist")
    add("sim", cmd_sim, "S-parameter sweep and band metrics; writes touchstone/csv outputs")
    add("geom", cmd_geom, "microstrip line and U-shaped resonator geometry")
    add("report", cmd_report, "full pipeline and JSON design report")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"bpfsynth: [config] {exc}", file=sys.stderr)
        return 2
    except PipelineError as exc:
        print(f"bpfsynth: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
