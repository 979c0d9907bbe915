"""Achievable-rate modeling and element-count optimization for
omni-DRIS-assisted indoor visible-light links.

The library models the NLoS light-source -> panel-element -> user channel,
collapses the system into the reduced rate form
``f(n) = xi (n - theta) log2(alpha/(n^2 psi) + 1)``, locates the
rate-maximizing element count (stationarity cubic, universal proportional
constant, brute-force oracle) and applies the power-of-two hardware
selection rule.  Scenario files and bundled presets drive sweeps and the
reference-table reproduction reports; ``omnidris`` is the CLI entry point.
"""
from .channel import (
    TETRAHEDRON_PLACEMENTS,
    LinkGeometry,
    PanelSide,
    UserPlacement,
    channel_dc_gain,
    reference_room_geometry,
)
from .optimize import (
    BruteForceResult,
    ClosedFormRoot,
    CubicCoefficients,
    NoInteriorMaximumError,
    OptimumReport,
    Pow2Selection,
    brute_force_argmax,
    build_cubic,
    closed_form_root,
    meaningful_root,
    optimize_fixed_theta,
    optimize_proportional,
    select_power_of_two,
    solve_cubic,
    stationarity_constant,
)
from .rate import (
    E_OVER_2PI,
    AbsorbingMode,
    DegenerateConfigWarning,
    FixedCount,
    Fraction,
    ReducedParams,
    RisConfig,
    SystemParams,
    bits_per_sequence,
    f_series,
    rate_for_config,
    rate_single_link,
    rate_total,
    reduce_params,
    snr_single_link,
)
from .reports import (
    CALIBRATION_NOTE,
    NormalizedTableReport,
    SelectionTableReport,
    reproduce_table1,
    reproduce_table2,
)
from .scenario import (
    CSV_COLUMNS,
    HARDWARE_POWERS_OF_TWO,
    Scenario,
    ScenarioError,
    SweepRow,
    SweepSpec,
    alpha_calibration_for,
    get_preset,
    load_scenario,
    preset_scenarios,
    resolve_scenario,
    run_sweep,
    sweep_to_csv,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # channel
    "LinkGeometry",
    "PanelSide",
    "UserPlacement",
    "TETRAHEDRON_PLACEMENTS",
    "channel_dc_gain",
    "reference_room_geometry",
    # rate
    "E_OVER_2PI",
    "SystemParams",
    "FixedCount",
    "Fraction",
    "AbsorbingMode",
    "RisConfig",
    "ReducedParams",
    "DegenerateConfigWarning",
    "snr_single_link",
    "rate_single_link",
    "reduce_params",
    "rate_total",
    "rate_for_config",
    "f_series",
    "bits_per_sequence",
    # optimize
    "CubicCoefficients",
    "OptimumReport",
    "BruteForceResult",
    "Pow2Selection",
    "ClosedFormRoot",
    "NoInteriorMaximumError",
    "build_cubic",
    "solve_cubic",
    "meaningful_root",
    "brute_force_argmax",
    "select_power_of_two",
    "closed_form_root",
    "stationarity_constant",
    "optimize_fixed_theta",
    "optimize_proportional",
    # scenario
    "Scenario",
    "ScenarioError",
    "SweepSpec",
    "SweepRow",
    "CSV_COLUMNS",
    "HARDWARE_POWERS_OF_TWO",
    "load_scenario",
    "preset_scenarios",
    "get_preset",
    "resolve_scenario",
    "run_sweep",
    "sweep_to_csv",
    "alpha_calibration_for",
    # reports
    "CALIBRATION_NOTE",
    "NormalizedTableReport",
    "SelectionTableReport",
    "reproduce_table1",
    "reproduce_table2",
]
