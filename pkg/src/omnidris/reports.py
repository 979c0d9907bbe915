"""Reproduction reports for the published reference tables.

Two tables anchor the validation story:

* the *normalized scenario table*: for the benchmark combinations C0..C6,
  the element count and rate measured on the exact curve versus the ones
  calculated from the stationarity cubic (rates on the calculated side
  follow the two-term-series convention of the source);
* the *selection table*: which power-of-two panel gets picked around the
  continuous optimum for three active-fraction rows and three noise rows.

Absolute published rates of the selection table are display-only; see
:data:`CALIBRATION_NOTE`.
"""
from __future__ import annotations

from dataclasses import dataclass

from .optimize import (
    build_cubic,
    meaningful_root,
    optimize_fixed_theta,
    optimize_proportional,
    solve_cubic,
)
from .rate import ReducedParams
from .scenario import NORMALIZED_COMBOS, alpha_calibration_for

__all__ = [
    "CALIBRATION_NOTE",
    "PUBLISHED_NORMALIZED_TABLE",
    "PUBLISHED_SELECTION_TABLE",
    "MEASURED_N_ABS_TOL",
    "RATE_REL_TOL",
    "NormalizedRow",
    "NormalizedTableReport",
    "SelectionRow",
    "SelectionTableReport",
    "reproduce_table2",
    "reproduce_table1",
]

CALIBRATION_NOTE = (
    "Absolute rates of the published curves and selection table are not "
    "derivable from the published parameter list: the geometric link budget "
    "yields alpha ~ 2.6e-13 while a rate peak at N = 180 requires "
    "alpha ~ 1.27e5, and the published peak magnitudes additionally match a "
    "rate prefactor of W*L*M instead of W*L*M/2. Calibrated presets therefore "
    "pin alpha so that the fully active family peaks at N = 180 for noise "
    "PSD 2 W/Hz, and only selection patterns and exact active-fraction "
    "ratios are asserted, never absolute Mbps."
)

#: Published normalized-table values: measured (grid) vs calculated (cubic).
#: The C5 calculated N is flagged anomalous: it replicates the C3 root even
#: though the published C5 calculated rate (0.9632 = 3 x 0.3211) is
#: consistent with the C0 root, and the rate scale factor xi cannot move a
#: stationary point.  Scale invariance is property-checked instead.
PUBLISHED_NORMALIZED_TABLE: dict[str, dict[str, float]] = {
    "C0": {"meas_n": 2.2000, "calc_n": 2.2728, "meas_f": 0.3252, "calc_f": 0.3211},
    "C1": {"meas_n": 10.000, "calc_n": 10.0502, "meas_f": 0.3588, "calc_f": 0.3589},
    "C2": {"meas_n": 20.0008, "calc_n": 20.0250, "meas_f": 0.3602, "calc_f": 0.3602},
    "C3": {"meas_n": 2.5000, "calc_n": 2.8406, "meas_f": 0.8484, "calc_f": 0.8037},
    "C4": {"meas_n": 6.1000, "calc_n": 6.0845, "meas_f": 0.1186, "calc_f": 0.1186},
    "C5": {"meas_n": 2.2000, "calc_n": 2.8406, "meas_f": 0.9755, "calc_f": 0.9632},
    "C6": {"meas_n": 2.1000, "calc_n": 2.0865, "meas_f": 0.1156, "calc_f": 0.1154},
}

ANOMALOUS_CALC_N = frozenset({"C5"})

#: Published selection-table rows: (selected N, selected rate in Mbps).
PUBLISHED_SELECTION_TABLE: dict[str, tuple[int, float]] = {
    "zeta = N": (128, 399.59),
    "zeta = 3N/4": (128, 299.69),
    "zeta = N/2": (128, 199.80),
    "noise PSD = 3": (128, 181.34),
    "noise PSD = 5": (128, 146.27),
    "noise PSD = 8": (64, 99.94),
}

MEASURED_N_ABS_TOL = 0.05
RATE_REL_TOL = 1e-3


def _rel_close(value: float, target: float, tol: float = RATE_REL_TOL) -> bool:
    return abs(value - target) <= tol * abs(target)


@dataclass(frozen=True)
class NormalizedRow:
    scenario: str
    meas_n: float
    meas_f: float
    calc_n: float
    calc_f: float
    published_meas_n: float
    published_meas_f: float
    published_calc_n: float
    published_calc_f: float
    meas_n_ok: bool
    meas_f_ok: bool
    calc_n_status: str  # "pass" | "fail" | "anomaly"
    calc_f_ok: bool
    note: str = ""


@dataclass(frozen=True)
class NormalizedTableReport:
    rows: tuple[NormalizedRow, ...]
    scale_invariance_ok: bool

    def all_ok(self) -> bool:
        return self.scale_invariance_ok and all(
            row.meas_n_ok
            and row.meas_f_ok
            and row.calc_f_ok
            and row.calc_n_status in ("pass", "anomaly")
            for row in self.rows
        )

    def to_text(self) -> str:
        header = (
            f"{'scenario':<9}{'meas N':>10}{'(pub)':>9}{'meas f':>9}{'(pub)':>8}"
            f"{'calc N':>10}{'(pub)':>9}{'calc f':>9}{'(pub)':>8}  status"
        )
        lines = ["normalized scenario table: measured (grid) vs calculated (cubic)", header]
        for row in self.rows:
            flags = (
                f"measN:{'ok' if row.meas_n_ok else 'FAIL'} "
                f"measF:{'ok' if row.meas_f_ok else 'FAIL'} "
                f"calcN:{row.calc_n_status} "
                f"calcF:{'ok' if row.calc_f_ok else 'FAIL'}"
            )
            lines.append(
                f"{row.scenario:<9}{row.meas_n:>10.4f}{row.published_meas_n:>9.4f}"
                f"{row.meas_f:>9.4f}{row.published_meas_f:>8.4f}"
                f"{row.calc_n:>10.4f}{row.published_calc_n:>9.4f}"
                f"{row.calc_f:>9.4f}{row.published_calc_f:>8.4f}  {flags}"
            )
            if row.note:
                lines.append(f"{'':9}note: {row.note}")
        lines.append(
            "scale-invariance check (stationary point unmoved by xi): "
            + ("ok" if self.scale_invariance_ok else "FAIL")
        )
        return "\n".join(lines)


def _xi_invariant_root(alpha: float, theta: float, psi: float) -> bool:
    reference = None
    for xi in (1.0, 3.0, 10.0):
        red = ReducedParams(alpha=alpha, psi=psi, xi=xi)
        root = meaningful_root(solve_cubic(build_cubic(red, theta)), red, theta)
        if reference is None:
            reference = root
        elif abs(root - reference) > 1e-9 * abs(reference):
            return False
    return True


def reproduce_table2(grid: int = 100_000) -> NormalizedTableReport:
    """Run C0..C6 and compare against the published normalized table.

    Measured columns come from the brute-force oracle on [1, 50]; the
    calculated columns from the cubic path, with the rate evaluated via the
    two-term series (the published convention).
    """
    rows = []
    for name, (alpha, theta, xi, psi) in NORMALIZED_COMBOS.items():
        red = ReducedParams(alpha=alpha, psi=psi, xi=xi)
        report = optimize_fixed_theta(red, theta, n_max=50.0, grid=grid)
        published = PUBLISHED_NORMALIZED_TABLE[name]

        if name in ANOMALOUS_CALC_N:
            calc_n_status = "anomaly"
            note = (
                "published calculated N replicates the C3 root; the rate scale "
                "factor cannot move the stationary point, so scale invariance "
                "is asserted instead"
            )
        else:
            calc_n_status = (
                "pass" if _rel_close(report.n_star_cubic, published["calc_n"]) else "fail"
            )
            note = ""

        rows.append(
            NormalizedRow(
                scenario=name,
                meas_n=report.n_star_exact,
                meas_f=report.f_at_exact,
                calc_n=report.n_star_cubic,
                calc_f=report.f_at_cubic,
                published_meas_n=published["meas_n"],
                published_meas_f=published["meas_f"],
                published_calc_n=published["calc_n"],
                published_calc_f=published["calc_f"],
                meas_n_ok=abs(report.n_star_exact - published["meas_n"]) <= MEASURED_N_ABS_TOL,
                meas_f_ok=_rel_close(report.f_at_exact, published["meas_f"]),
                calc_n_status=calc_n_status,
                calc_f_ok=_rel_close(report.f_at_cubic, published["calc_f"]),
                note=note,
            )
        )

    alpha, theta, _, psi = NORMALIZED_COMBOS["C5"]
    return NormalizedTableReport(
        rows=tuple(rows),
        scale_invariance_ok=_xi_invariant_root(alpha, theta, psi),
    )


@dataclass(frozen=True)
class SelectionRow:
    label: str
    active_fraction: float
    noise_psd: float
    alpha: float
    n_star: float
    pow2_lower: int
    pow2_upper: int
    rate_lower_bps: float
    rate_upper_bps: float
    rate_at_n_star_bps: float
    selected_n: int
    selected_rate_bps: float
    active_at_selected: int
    absorbing_at_selected: int
    published_selected_n: int
    published_selected_rate_mbps: float
    pattern_ok: bool


@dataclass(frozen=True)
class SelectionTableReport:
    rows: tuple[SelectionRow, ...]
    ratio_3n4: float
    ratio_n2: float
    ratios_ok: bool
    note: str

    def all_ok(self) -> bool:
        return self.ratios_ok and all(row.pattern_ok for row in self.rows)

    def to_text(self) -> str:
        lines = [
            "power-of-two selection table (computed vs published selection)",
            f"{'row':<14}{'N*':>9}{'N-':>6}{'rate':>12}{'N+':>6}{'rate':>12}"
            f"{'sel':>6}{'pub':>6}  ok",
        ]
        for row in self.rows:
            lines.append(
                f"{row.label:<14}{row.n_star:>9.2f}{row.pow2_lower:>6d}"
                f"{row.rate_lower_bps / 1e6:>12.4f}{row.pow2_upper:>6d}"
                f"{row.rate_upper_bps / 1e6:>12.4f}{row.selected_n:>6d}"
                f"{row.published_selected_n:>6d}  "
                f"{'ok' if row.pattern_ok else 'FAIL'}"
            )
        lines.append(
            f"active-fraction rate ratios: 3N/4 -> {self.ratio_3n4:.12f}, "
            f"N/2 -> {self.ratio_n2:.12f} "
            f"({'exact' if self.ratios_ok else 'FAIL'})"
        )
        lines.append("note: " + self.note)
        return "\n".join(lines)


def reproduce_table1(
    calibrated_alpha: float | None = None,
    *,
    bandwidth_hz: float = 1e6,
    num_light_sources: int = 1,
    num_users: int = 1,
) -> SelectionTableReport:
    """Rebuild the selection table rows and check the selection pattern.

    ``calibrated_alpha`` is the alpha at noise PSD 2 W/Hz (defaults to the
    documented peak-at-180 calibration); the noise rows scale it by
    2/noise_psd.  Selection patterns and the exact active-fraction rate
    ratios are asserted; absolute published Mbps figures are display-only.
    """
    if calibrated_alpha is None:
        calibrated_alpha = alpha_calibration_for(2.0)
    links = num_users * num_light_sources
    psi = float(links * links)
    xi = bandwidth_hz * links / 2.0

    layout = [
        ("zeta = N", 1.0, 2.0),
        ("zeta = 3N/4", 0.75, 2.0),
        ("zeta = N/2", 0.5, 2.0),
        ("noise PSD = 3", 0.5, 3.0),
        ("noise PSD = 5", 0.5, 5.0),
        ("noise PSD = 8", 0.5, 8.0),
    ]
    rows = []
    for label, active_fraction, noise_psd in layout:
        alpha = calibrated_alpha * 2.0 / noise_psd
        red = ReducedParams(alpha=alpha, psi=psi, xi=xi)
        report = optimize_proportional(red, active_fraction)
        published_n, published_mbps = PUBLISHED_SELECTION_TABLE[label]
        absorbing = round((1.0 - active_fraction) * report.selected_n)
        rows.append(
            SelectionRow(
                label=label,
                active_fraction=active_fraction,
                noise_psd=noise_psd,
                alpha=alpha,
                n_star=report.n_star_cubic,
                pow2_lower=report.pow2_lower,
                pow2_upper=report.pow2_upper,
                rate_lower_bps=report.rate_pow2_lower,
                rate_upper_bps=report.rate_pow2_upper,
                rate_at_n_star_bps=report.f_at_cubic,
                selected_n=report.selected_n,
                selected_rate_bps=report.selected_rate,
                active_at_selected=report.selected_n - absorbing,
                absorbing_at_selected=absorbing,
                published_selected_n=published_n,
                published_selected_rate_mbps=published_mbps,
                pattern_ok=report.selected_n == published_n,
            )
        )

    full = rows[0].selected_rate_bps
    ratio_3n4 = rows[1].selected_rate_bps / full
    ratio_n2 = rows[2].selected_rate_bps / full
    ratios_ok = abs(ratio_3n4 - 0.75) <= 1e-12 and abs(ratio_n2 - 0.5) <= 1e-12
    return SelectionTableReport(
        rows=tuple(rows),
        ratio_3n4=ratio_3n4,
        ratio_n2=ratio_n2,
        ratios_ok=ratios_ok,
        note=CALIBRATION_NOTE,
    )
