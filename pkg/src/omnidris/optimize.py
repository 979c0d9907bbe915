"""Element-count optimization for the reduced aggregate rate.

Two regimes:

* fixed absorbing count -- the stationarity condition of the two-term
  series form of f(n) reduces to the cubic
  ``2 psi n^3 - 4 psi theta n^2 - 3 alpha n + 4 alpha theta = 0``; the
  meaningful root is located with a direct trigonometric/Cardano solver.
* proportional absorbing share -- the exact stationarity collapses to the
  parameter-free condition ``ln(1 + t) = 2t / (1 + t)``, whose root t*
  puts the optimum at ``n* = sqrt(alpha / (psi t*))`` regardless of the
  active fraction or the rate scale.

Every analytic optimum is cross-checked against a brute-force grid +
golden-section oracle that evaluates the exact rate, never the series.
Hardware realizations are restricted to powers of two; the selection rule
compares the exact rate at the two bracketing candidates.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .rate import Fraction, ReducedParams, f_series, rate_total

__all__ = [
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
]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class NoInteriorMaximumError(ValueError):
    """No cubic root lies above the absorbing count with a series maximum."""


@dataclass(frozen=True)
class CubicCoefficients:
    """Coefficients (c3, c2, c1, c0) of the stationarity cubic."""

    c3: float
    c2: float
    c1: float
    c0: float

    def __post_init__(self) -> None:
        if self.c3 <= 0:
            raise ValueError(f"leading coefficient must be positive, got {self.c3}")

    def __call__(self, x: float) -> float:
        return ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0

    def derivative(self, x: float) -> float:
        return (3.0 * self.c3 * x + 2.0 * self.c2) * x + self.c1


class BruteForceResult(NamedTuple):
    n: float
    f: float
    at_boundary: bool


class Pow2Selection(NamedTuple):
    n: int
    rate: float
    lower: int
    upper: int
    rate_lower: float
    rate_upper: float
    degenerate: bool


class ClosedFormRoot(NamedTuple):
    value: float
    imaginary_residue: float


@dataclass(frozen=True)
class OptimumReport:
    """Everything learned about one optimization run.

    ``n_star_cubic`` is the analytic optimum (cubic root in fixed mode,
    ``sqrt(alpha/(psi t*))`` in proportional mode) and ``n_star_exact``
    the brute-force argmax of the exact rate.  In fixed mode
    ``f_at_cubic`` follows the two-term-series convention of the
    published "calculated" column, while ``f_exact_at_cubic`` is the
    exact rate at the same point; in proportional mode the stationarity
    is exact and the two coincide.
    """

    mode: str
    theta: float | None
    active_fraction: float | None
    n_star_cubic: float
    n_star_exact: float
    f_at_cubic: float
    f_at_exact: float
    f_exact_at_cubic: float
    pow2_lower: int
    pow2_upper: int
    rate_pow2_lower: float
    rate_pow2_upper: float
    selected_n: int
    selected_rate: float
    selected_bits: int
    at_boundary: bool
    used_fallback: bool


def build_cubic(red: ReducedParams, theta: float) -> CubicCoefficients:
    """Stationarity cubic of the two-term series at fixed absorbing count.

    The common factor alpha*xi / (2 ln2 psi^2 n^5) of the derivative never
    vanishes for n > 0 and is discarded; only (2 psi, -4 psi theta,
    -3 alpha, 4 alpha theta) remain.  xi drops out entirely, which is why
    rate scaling cannot move the optimum.
    """
    if theta < 0:
        raise ValueError(f"absorbing count must be >= 0, got {theta}")
    return CubicCoefficients(
        2.0 * red.psi,
        -4.0 * red.psi * theta,
        -3.0 * red.alpha,
        4.0 * red.alpha * theta,
    )


def _real_cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _polish(cubic: CubicCoefficients, x: float) -> float:
    # one Newton step; skipped when it would be unstable (double roots)
    slope = cubic.derivative(x)
    if slope == 0.0:
        return x
    step = cubic(x) / slope
    if math.isfinite(step) and abs(step) <= 1e-2 * (1.0 + abs(x)):
        return x - step
    return x


def solve_cubic(cubic: CubicCoefficients) -> list[float]:
    """All real roots, ascending, with multiplicity.

    Trigonometric form for the three-real-root case (negative
    discriminant, the casus irreducibilis), real Cardano branch for the
    single-real-root case, plus one Newton polish step per root.
    """
    b = cubic.c2 / cubic.c3
    c = cubic.c1 / cubic.c3
    d = cubic.c0 / cubic.c3
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    shift = -b / 3.0

    half_q_sq = (q / 2.0) ** 2
    third_p_cu = (p / 3.0) ** 3
    disc = half_q_sq + third_p_cu
    scale = max(half_q_sq, abs(third_p_cu))

    if scale == 0.0:
        roots = [shift, shift, shift]
    elif disc > 1e-14 * scale:
        s = math.sqrt(disc)
        u = _real_cbrt(-q / 2.0 + s) + _real_cbrt(-q / 2.0 - s)
        roots = [u + shift]
    elif disc < -1e-14 * scale:
        amplitude = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * amplitude)
        phase = math.acos(min(1.0, max(-1.0, arg))) / 3.0
        roots = [
            amplitude * math.cos(phase - 2.0 * math.pi * k / 3.0) + shift
            for k in range(3)
        ]
    else:
        # borderline double root: simple root 3q/p, double root -3q/(2p)
        single = 3.0 * q / p + shift
        double = -3.0 * q / (2.0 * p) + shift
        roots = [single, double, double]

    return sorted(_polish(cubic, x) for x in roots)


def meaningful_root(roots: list[float], red: ReducedParams, theta: float) -> float:
    """Pick the root that is the usable rate maximum.

    Candidates must exceed the absorbing count and be at least 1; among
    them the one with the largest exact rate wins, provided a central
    finite-difference probe (step 1e-6 * n) of the two-term series shows a
    derivative sign change from + to - across it.
    """
    candidates = [root for root in roots if root > theta and root >= 1.0]
    candidates.sort(key=lambda root: rate_total(red, root, theta), reverse=True)
    for root in candidates:
        h = 1e-6 * root

        def probe(x: float) -> float:
            return (
                f_series(red, x + h, theta, 2) - f_series(red, x - h, theta, 2)
            ) / (2.0 * h)

        try:
            if probe(root - h) > 0.0 > probe(root + h):
                return root
        except ValueError:
            continue  # series domain violated near this root; not usable
    raise NoInteriorMaximumError(
        f"no interior maximum: no root above theta={theta} is a series maximum"
    )


def _golden_max(fun, lo: float, hi: float, rel_tol: float = 1e-8) -> float:
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc = fun(c)
    fd = fun(d)
    while (hi - lo) > rel_tol * max(1.0, abs(lo), abs(hi)):
        if fc >= fd:  # ties keep the left interval: deterministic, favors small n
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = fun(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = fun(d)
    return 0.5 * (lo + hi)


def brute_force_argmax(
    red: ReducedParams,
    absorbing,
    n_min: float,
    n_max: float,
    grid: int = 100_000,
) -> BruteForceResult:
    """Verification oracle: exact-rate argmax by grid scan + golden section.

    Evaluates the exact rate (never the series) on a uniform grid, then
    refines inside the best bracketing interval to 1e-8 relative.  Grid
    ties resolve to the smallest index.  An argmax on the range edge is
    returned as-is with ``at_boundary`` set.

    All comparisons run on the xi-normalized profile (xi is a common
    factor of the rate), so rate scaling cannot perturb the argmax even at
    the last float bit; the reported value is at full scale.
    """
    if n_min < 1.0:
        raise ValueError(f"n_min must be at least 1, got {n_min}")
    if not n_max > n_min:
        raise ValueError(f"invalid sweep range [{n_min}, {n_max}]")
    if grid < 1000:
        raise ValueError(f"grid must have at least 1000 points, got {grid}")

    profile_params = ReducedParams(red.alpha, red.psi, 1.0)
    xs = np.linspace(n_min, n_max, int(grid))
    profile = rate_total(profile_params, xs, absorbing)
    best = int(np.argmax(profile))
    if best == 0 or best == len(xs) - 1:
        n_best = float(xs[best])
        return BruteForceResult(n_best, rate_total(red, n_best, absorbing), True)

    refined = _golden_max(
        lambda x: rate_total(profile_params, float(x), absorbing),
        float(xs[best - 1]),
        float(xs[best + 1]),
    )
    if profile[best] > rate_total(profile_params, refined, absorbing):
        refined = float(xs[best])  # never return worse than the grid point
    return BruteForceResult(refined, rate_total(red, refined, absorbing), False)


def select_power_of_two(n_star: float, red: ReducedParams, absorbing=0.0) -> Pow2Selection:
    """Hardware selection between the powers of two bracketing n_star.

    Evaluates the exact rate at 2^floor(log2 n*) and 2^ceil(log2 n*)
    (absorbing count re-derived per candidate in proportional mode) and
    keeps the better one; ties go to the smaller panel.  An optimum below
    one element degenerates to a single element.
    """
    if not math.isfinite(n_star) or n_star <= 0:
        raise ValueError(f"n_star must be positive and finite, got {n_star}")
    if n_star < 1.0:
        rate_one = rate_total(red, 1.0, absorbing)
        return Pow2Selection(1, rate_one, 1, 1, rate_one, rate_one, True)

    exponent = int(math.floor(math.log2(n_star)))
    while (1 << (exponent + 1)) <= n_star:
        exponent += 1
    while (1 << exponent) > n_star:
        exponent -= 1
    lower = 1 << exponent
    upper = lower if float(lower) == n_star else 1 << (exponent + 1)

    rate_lower = rate_total(red, float(lower), absorbing)
    rate_upper = rate_lower if upper == lower else rate_total(red, float(upper), absorbing)
    if rate_upper > rate_lower:
        chosen, chosen_rate = upper, rate_upper
    else:
        chosen, chosen_rate = lower, rate_lower
    return Pow2Selection(chosen, chosen_rate, lower, upper, rate_lower, rate_upper, False)


def closed_form_root(red: ReducedParams, theta: float) -> ClosedFormRoot:
    """Literal radical expression for the meaningful root, for comparison only.

    The inner radicand ``-alpha (128 psi^2 theta^4 + 18 alpha psi theta^2
    + 27 alpha^2) / psi`` is negative for all positive parameters, so the
    expression is evaluated with complex intermediates and the leftover
    imaginary component is reported alongside the real part.  The
    production path is :func:`solve_cubic` + :func:`meaningful_root`.
    """
    if theta <= 0:
        raise ValueError("the closed form degenerates for absorbing count 0")
    a = red.alpha
    p = red.psi
    radicand = -(a * (128.0 * p * p * theta**4 + 18.0 * a * p * theta**2 + 27.0 * a * a)) / p
    inner = (
        cmath.sqrt(complex(radicand, 0.0)) / (6.0**1.5 * p)
        + 8.0 * theta**3 / 27.0
        + (6.0 * a * theta / (2.0 * p) - 6.0 * theta * a / p) / 6.0
    )
    cube = inner ** (1.0 / 3.0)
    linear = -4.0 * theta * theta / 9.0 - 3.0 * a / (6.0 * p)
    value = cube - linear / cube + 2.0 * theta / 3.0
    return ClosedFormRoot(value.real, value.imag)


@lru_cache(maxsize=1)
def stationarity_constant() -> float:
    """Root t* of ln(1 + t) = 2t / (1 + t) on (0, 100].

    t* ~ 3.92155 is the load alpha/(psi n^2) at which any proportionally
    absorbing panel maximizes its rate; the optimum element count is
    sqrt(alpha / (psi t*)) independently of the active fraction.
    Bracketed bisection (the function is negative on (0, t*)) followed by
    two Newton steps.
    """

    def g(t: float) -> float:
        return math.log1p(t) - 2.0 * t / (1.0 + t)

    lo, hi = 1.0, 100.0  # g(1) = ln 2 - 1 < 0, g(100) > 0
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    for _ in range(2):
        slope = (t - 1.0) / (1.0 + t) ** 2
        t -= g(t) / slope
    return t


def _pow2_bits(n: int) -> int:
    return n.bit_length() - 1


def _auto_range_fixed(red: ReducedParams, theta: float) -> float:
    # the optimum sits near max(2 theta, ~0.5 sqrt(alpha/psi)); leave headroom
    return max(50.0, 5.0 * theta + 10.0, 2.0 * math.sqrt(red.alpha / red.psi) + 10.0)


def optimize_fixed_theta(
    red: ReducedParams,
    theta: float,
    *,
    n_max: float | None = None,
    grid: int = 100_000,
) -> OptimumReport:
    """Optimize the element count with a fixed absorbing count.

    Runs the cubic path and the brute-force oracle side by side; if no
    cubic root qualifies, the oracle argmax stands in for the analytic
    value (``used_fallback``).  Power-of-two selection is applied to the
    analytic optimum.
    """
    if theta < 0:
        raise ValueError(f"absorbing count must be >= 0, got {theta}")
    if n_max is None:
        n_max = _auto_range_fixed(red, theta)

    oracle = brute_force_argmax(red, theta, 1.0, n_max, grid)

    used_fallback = False
    try:
        n_cubic = meaningful_root(solve_cubic(build_cubic(red, theta)), red, theta)
        f_cubic = f_series(red, n_cubic, theta, 2)
        f_exact_cubic = rate_total(red, n_cubic, theta)
    except NoInteriorMaximumError:
        used_fallback = True
        n_cubic = oracle.n
        f_cubic = oracle.f
        f_exact_cubic = oracle.f

    selection = select_power_of_two(n_cubic, red, theta)
    return OptimumReport(
        mode="fixed-count",
        theta=theta,
        active_fraction=None,
        n_star_cubic=n_cubic,
        n_star_exact=oracle.n,
        f_at_cubic=f_cubic,
        f_at_exact=oracle.f,
        f_exact_at_cubic=f_exact_cubic,
        pow2_lower=selection.lower,
        pow2_upper=selection.upper,
        rate_pow2_lower=selection.rate_lower,
        rate_pow2_upper=selection.rate_upper,
        selected_n=selection.n,
        selected_rate=selection.rate,
        selected_bits=_pow2_bits(selection.n),
        at_boundary=oracle.at_boundary or selection.degenerate,
        used_fallback=used_fallback,
    )


def optimize_proportional(
    red: ReducedParams,
    active_fraction: float,
    *,
    n_max: float | None = None,
    grid: int = 100_000,
) -> OptimumReport:
    """Optimize the element count with a proportional active share.

    With ``zeta = q n`` the active fraction and the rate scale factor out
    of the stationarity, so the analytic optimum is
    ``n* = sqrt(alpha / (psi t*))`` with the universal constant t*.  This
    is exact (no series truncation), hence ``f_at_cubic`` equals the
    exact rate at n*.
    """
    if not 0.0 < active_fraction <= 1.0:
        raise ValueError(f"active fraction must lie in (0, 1], got {active_fraction}")
    mode = Fraction(1.0 - active_fraction)
    n_analytic = math.sqrt(red.alpha / (red.psi * stationarity_constant()))
    if n_max is None:
        n_max = max(50.0, 4.0 * n_analytic)

    oracle = brute_force_argmax(red, mode, 1.0, n_max, grid)
    f_analytic = rate_total(red, n_analytic, mode)
    selection = select_power_of_two(n_analytic, red, mode)
    return OptimumReport(
        mode="proportional",
        theta=None,
        active_fraction=active_fraction,
        n_star_cubic=n_analytic,
        n_star_exact=oracle.n,
        f_at_cubic=f_analytic,
        f_at_exact=oracle.f,
        f_exact_at_cubic=f_analytic,
        pow2_lower=selection.lower,
        pow2_upper=selection.upper,
        rate_pow2_lower=selection.rate_lower,
        rate_pow2_upper=selection.rate_upper,
        selected_n=selection.n,
        selected_rate=selection.rate,
        selected_bits=_pow2_bits(selection.n),
        at_boundary=oracle.at_boundary or selection.degenerate,
        used_fallback=False,
    )
