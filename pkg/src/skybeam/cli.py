"""Command-line front end: scenario in, deterministic reports and grids out.

Subcommands: spot, beam-map, link, coverage, econ, safety. Exit codes:
0 ok, 1 runtime error, 2 missing scenario file, 3 parse error, 4 validation
error. Identical scenario and seed give byte-identical outputs; --threads
changes speed only.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import economics as econ
from . import link as link_mod
from .errors import (ScenarioFileError, ScenarioParseError,
                     ScenarioValidationError, SkybeamError)
from .field import (ObservationGrid, evaluate_field_fast, focus_command,
                    first_null_spot_diameter, measure_first_null_radius,
                    spot_report)
from .mission import (FarmNetwork, cruise_power, mission_summary,
                      simulate_mission)
from .scenario import Scenario, parse_scenario

# beam-map guard: a full-scale farm aperture at half-wavelength pitch holds
# ~3e8 elements and is not a desk-scale map evaluation
MAX_MAP_ELEMENTS = 20e6


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _emit(pairs: list[tuple[str, object]], as_json: bool, title: str) -> str:
    if as_json:
        return json.dumps({k: v for k, v in pairs}, indent=2, sort_keys=True) + "\n"
    width = max(len(k) for k, _ in pairs)
    lines = [f"# {title}"]
    lines += [f"{k.ljust(width)} = {_fmt(v)}" for k, v in pairs]
    return "\n".join(lines) + "\n"


def cmd_spot(scn: Scenario, args) -> str:
    report = spot_report(scn.aperture_diameter, scn.rf,
                         float(scn.beam_target[2]), scn.radiated_power())
    fn = report.first_null_diameter
    pairs = [
        ("aperture_diameter_m", scn.aperture_diameter),
        ("wavelength_m", scn.rf.wavelength),
        ("range_m", report.range_m),
        ("radiated_power_W", report.radiated_power),
        ("first_null_spot_diameter_m", fn),
        ("peak_density_W_per_m2", report.peak_density),
        ("encircled_fraction_first_null_disk", report.encircled_fraction_first_null),
        ("encircled_fraction_disk_radius_2x_m", report.encircled_fraction_at(4.0 * fn)),
        ("encircled_fraction_disk_radius_3x_m", report.encircled_fraction_at(6.0 * fn)),
    ]
    return _emit(pairs, args.format == "json", "focal spot (uniform circular aperture theory)")


def cmd_beam_map(scn: Scenario, args) -> str:
    if scn.estimated_element_count() > MAX_MAP_ELEMENTS:
        raise SkybeamError(
            f"array too large for a map run (~{scn.estimated_element_count():.3g} "
            "elements); use a scaled scenario such as spot_scaled")
    layout = scn.build_layout()
    command = focus_command(layout, scn.rf, scn.beam_target, scn.radiated_power())
    grid_n = args.grid_n if args.grid_n else scn.grid_n
    window = scn.map_window
    if window is None:
        spot = first_null_spot_diameter(layout.aperture_diameter, scn.rf,
                                        float(scn.beam_target[2]))
        window = 6.0 * spot
    grid = ObservationGrid.horizontal(scn.beam_target, grid_n, window)
    fmap = evaluate_field_fast(layout, scn.rf, command, grid, threads=args.threads)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "beam_map.csv"
    fmap.to_csv(csv_path)
    written = [str(csv_path)]
    if args.binary:
        bin_path = out_dir / "beam_map.bin"
        fmap.to_binary(bin_path)
        written.append(str(bin_path))

    pairs = [
        ("active_elements", layout.n_active),
        ("grid_n", grid_n),
        ("grid_window_m", window),
        ("peak_density_W_per_m2", fmap.peak_density),
        ("measured_first_null_radius_m", measure_first_null_radius(fmap)),
        ("map_files", ";".join(written)),
    ]
    return _emit(pairs, args.format == "json", "beam map")


def cmd_link(scn: Scenario, args) -> str:
    chain = scn.chain
    delivered = link_mod.delivered_power(scn.beam_input_power, chain)
    surface = link_mod.farm_surface_density(scn.beam_input_power, scn.farm_area)
    spot = first_null_spot_diameter(scn.aperture_diameter, scn.rf,
                                    float(scn.beam_target[2]))
    reflected = link_mod.reflected_ground_density(
        scn.radiated_power(), 2.0 * spot, scn.rf, float(scn.beam_target[2]))
    pairs = [
        ("input_power_W", scn.beam_input_power),
        ("stage_dc_to_rf", chain.dc_to_rf),
        ("stage_beam_collection", chain.beam_collection),
        ("stage_incidence_cosine", chain.incidence_cosine),
        ("stage_rf_to_dc", chain.rf_to_dc),
        ("end_to_end_efficiency", chain.end_to_end),
        ("radiated_power_W", scn.radiated_power()),
        ("delivered_power_W", delivered),
        ("farm_surface_density_W_per_m2", surface),
        ("surface_density_limit_W_per_m2", scn.surface_density_limit),
        ("surface_density_check",
         "PASS" if surface <= scn.surface_density_limit else "FAIL"),
        ("reflected_ground_density_W_per_m2", reflected),
        ("reflected_density_check",
         _reflected_check(reflected, scn.reflected_density_limit)),
    ]
    return _emit(pairs, args.format == "json", "link budget")


def _reflected_check(value: float, limit: float | None) -> str:
    if limit is None:
        return "REPORTED (no configured limit; simple aperture re-radiation model)"
    return "PASS" if value <= limit else "FAIL"


def cmd_coverage(scn: Scenario, args) -> str:
    trace = simulate_mission(scn.plan, scn.aircraft, scn.network, scn.chain)
    baseline = simulate_mission(
        scn.plan, scn.aircraft,
        FarmNetwork.empty(scn.network.max_scan_deg, scn.network.max_slant_range),
        scn.chain)
    summary = mission_summary(trace, baseline)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "mission_trace.csv"
    trace.to_csv(csv_path)
    json_path = out_dir / "mission_summary.json"
    json_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n",
                         encoding="utf-8")

    pairs = [
        ("coverage_fraction", summary["coverage_fraction"]),
        ("duration_s", summary["duration_s"]),
        ("total_fuel_kg", summary["total_fuel_kg"]),
        ("fuel_only_baseline_kg", summary["fuel_only_baseline_kg"]),
        ("fuel_saved_kg", summary["fuel_saved_kg"]),
        ("fuel_saved_fraction", summary["fuel_saved_fraction"]),
        ("fuel_chain_efficiency", summary["fuel_chain_efficiency"]),
        ("reference_cruise_power_W", summary["reference_cruise_power_w"]),
        ("trace_csv", str(csv_path)),
        ("summary_json", str(json_path)),
    ]
    return _emit(pairs, args.format == "json", "mission coverage")


def cmd_econ(scn: Scenario, args) -> str:
    price = econ.beamed_cost(scn.cost)
    p_cruise = cruise_power(scn.aircraft)
    pairs = [
        ("solar_lcoe_usd_per_MWh", scn.cost.solar_lcoe),
        ("rf_uplift_fraction", scn.cost.uplift),
        ("beamed_cost_usd_per_MWh", price),
        ("cruise_power_W", p_cruise),
        ("end_to_end_efficiency", scn.chain.end_to_end),
        ("beamed_cost_usd_per_hour",
         econ.beamed_cost_per_hour(p_cruise, scn.chain.end_to_end, price)),
        ("fuel_cost_usd_per_hour", scn.cost.fuel_cost_per_hour),
        ("breakeven_end_to_end_efficiency",
         econ.breakeven_efficiency(p_cruise, price, scn.cost.fuel_cost_per_hour)),
        ("fuel_price_usd_per_kg",
         econ.fuel_price_per_kg(scn.cost.fuel_cost_per_hour,
                                scn.aircraft.fuel_burn_reference)),
        ("territory_area_km2", scn.territory_area_km2),
        ("farm_area_km2", scn.econ_farm_area_km2),
    ]
    # one farm-count row per configured coverage fraction
    single = len(scn.econ_coverage_fractions) == 1
    for cov in scn.econ_coverage_fractions:
        tag = "" if single else f"_at_{cov:g}"
        estimate = econ.farm_network_estimate(scn.territory_area_km2, cov,
                                              scn.econ_farm_area_km2)
        pairs += [
            (f"territory_coverage_fraction{tag}", cov),
            (f"farm_count{tag}", estimate.farm_count),
            (f"farm_mean_spacing_km{tag}", estimate.mean_spacing_km),
        ]
    return _emit(pairs, args.format == "json", "economics")


def cmd_safety(scn: Scenario, args) -> str:
    surface = link_mod.farm_surface_density(scn.beam_input_power, scn.farm_area)
    spot = first_null_spot_diameter(scn.aperture_diameter, scn.rf,
                                    float(scn.beam_target[2]))
    reflected = link_mod.reflected_ground_density(
        scn.radiated_power(), 2.0 * spot, scn.rf, float(scn.beam_target[2]))
    pairs = [
        ("input_power_W", scn.beam_input_power),
        ("farm_area_m2", scn.farm_area),
        ("farm_surface_density_W_per_m2", surface),
        ("surface_density_limit_W_per_m2", scn.surface_density_limit),
        ("surface_density_check",
         "PASS" if surface <= scn.surface_density_limit else "FAIL"),
        ("worst_case_reflected_power_W", scn.radiated_power()),
        ("reflected_spot_diameter_m", 2.0 * spot),
        ("reflected_ground_density_W_per_m2", reflected),
        ("reflected_density_check",
         _reflected_check(reflected, scn.reflected_density_limit)),
    ]
    return _emit(pairs, args.format == "json", "safety densities")


_COMMANDS = {
    "spot": cmd_spot,
    "beam-map": cmd_beam_map,
    "link": cmd_link,
    "coverage": cmd_coverage,
    "econ": cmd_econ,
    "safety": cmd_safety,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skybeam",
        description="Solar-farm phased-array power-beaming feasibility tool")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--scenario", default="a320_baseline",
                       help="scenario JSON path or bundled scenario name")
        p.add_argument("--out", default=".", help="output directory for files")
        p.add_argument("--grid-n", type=int, default=0,
                       help="override map sample count per axis")
        p.add_argument("--threads", type=int, default=1,
                       help="field-evaluation worker threads (speed only)")
        p.add_argument("--format", choices=("csv", "json"), default="csv",
                       help="report format: csv = aligned text, json = JSON")
        p.add_argument("--binary", action="store_true",
                       help="also write the raw binary grid dump (beam-map)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scn = parse_scenario(args.scenario)
        text = _COMMANDS[args.command](scn, args)
    except ScenarioFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ScenarioParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ScenarioValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except SkybeamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
