"""Per-link SNR and rate, the reduced aggregate rate, and its inversions.

The aggregate rate of the system collapses (equal active links) to a
three-parameter reduced form

    f(n) = xi * (n - theta) * log2(alpha / (n^2 psi) + 1)

with ``alpha`` collecting power, conversion, channel gain and noise,
``psi = (M L)^2`` and ``xi = W L M / 2``.  This module owns that reduced
form, its truncated alternating-series variant, and the inversion that
recovers the number of control-sequence bits from a target rate.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "E_OVER_2PI",
    "LN2",
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
]

#: Capacity lower-bound prefactor e / (2 pi), at full float precision.
E_OVER_2PI = math.e / (2.0 * math.pi)
LN2 = math.log(2.0)


class DegenerateConfigWarning(UserWarning):
    """Raised as a warning when a configuration has no active elements."""


@dataclass(frozen=True)
class SystemParams:
    """Transmitter/receiver-side system parameters.

    ``noise_psd`` is the resultant noise PSD at the user in W/Hz; the noise
    variance entering the SNR is ``noise_psd / 2`` exactly, with no
    bandwidth multiplication.
    """

    bandwidth_hz: float
    transmit_power_w: float
    num_light_sources: int
    num_users: int
    oe_conversion: float
    noise_psd: float

    def __post_init__(self) -> None:
        for field in ("bandwidth_hz", "transmit_power_w", "noise_psd"):
            if getattr(self, field) <= 0:
                raise ValueError(f"{field} must be positive, got {getattr(self, field)}")
        for field in ("num_light_sources", "num_users"):
            value = getattr(self, field)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{field} must be a positive integer, got {value!r}")
        if not 0.0 < self.oe_conversion <= 1.0:
            raise ValueError(
                f"oe_conversion must lie in (0, 1], got {self.oe_conversion}"
            )


@dataclass(frozen=True)
class FixedCount:
    """A fixed number of absorbing elements, independent of the panel size."""

    count: int

    def __post_init__(self) -> None:
        if not isinstance(self.count, int) or self.count < 0:
            raise ValueError(f"absorbing count must be an integer >= 0, got {self.count!r}")

    def theta_at(self, n):
        return float(self.count)


@dataclass(frozen=True)
class Fraction:
    """A fixed absorbing fraction ``q``; the count tracks the panel size.

    The rate math treats the absorbing share continuously (``theta = q*n``),
    which is what makes the active-fraction rate ratios exact at every n.
    Integer hardware counts are recovered with round-half-to-even, see
    :meth:`count_at`.
    """

    q: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.q < 1.0:
            raise ValueError(f"absorbing fraction must lie in [0, 1), got {self.q}")

    def theta_at(self, n):
        return self.q * n

    def count_at(self, num_elements: int) -> int:
        return round(self.q * num_elements)


AbsorbingMode = Union[FixedCount, Fraction]


@dataclass(frozen=True)
class RisConfig:
    """A concrete panel: element count plus its absorbing-element rule.

    A fully absorbing panel (zero active elements) is representable but
    degenerate; see :attr:`is_degenerate`.
    """

    num_elements: int
    absorbing: AbsorbingMode = FixedCount(0)

    def __post_init__(self) -> None:
        if not isinstance(self.num_elements, int) or self.num_elements < 1:
            raise ValueError(
                f"num_elements must be a positive integer, got {self.num_elements!r}"
            )
        if self.absorbing_count > self.num_elements:
            raise ValueError(
                f"absorbing count {self.absorbing_count} exceeds the "
                f"{self.num_elements} available elements"
            )

    @property
    def absorbing_count(self) -> int:
        if isinstance(self.absorbing, FixedCount):
            return self.absorbing.count
        return self.absorbing.count_at(self.num_elements)

    @property
    def active_count(self) -> int:
        return self.num_elements - self.absorbing_count

    @property
    def is_degenerate(self) -> bool:
        return self.active_count == 0

    @property
    def bits_per_sequence(self) -> int | None:
        """log2 of the element count when it is a power of two, else None."""
        n = self.num_elements
        if n & (n - 1) == 0:
            return n.bit_length() - 1
        return None


@dataclass(frozen=True)
class ReducedParams:
    """The (alpha, psi, xi) triple that fully determines the aggregate rate."""

    alpha: float
    psi: float
    xi: float

    def __post_init__(self) -> None:
        for field in ("alpha", "psi", "xi"):
            if getattr(self, field) <= 0:
                raise ValueError(f"{field} must be positive, got {getattr(self, field)}")


def snr_single_link(params: SystemParams, gain: float, num_elements: int) -> float:
    """Electrical SNR of one LS -> element -> user link.

    The total transmit power is split evenly across users, elements and
    light sources, so the per-link share is ``P_t * G / (M n L)`` and

        snr = rho^2 * (P_t G / (M n L))^2 / (noise_psd / 2).
    """
    if gain < 0:
        raise ValueError(f"channel gain must be >= 0, got {gain}")
    if num_elements < 1:
        raise ValueError(
            f"num_elements must be >= 1 (power is divided by it), got {num_elements}"
        )
    share = params.transmit_power_w * gain / (
        params.num_users * num_elements * params.num_light_sources
    )
    return params.oe_conversion**2 * share**2 / (params.noise_psd / 2.0)


def rate_single_link(params: SystemParams, snr: float) -> float:
    """Achievable rate of one link: (W/2) * log2(1 + e/(2 pi) * snr)."""
    if snr < 0:
        raise ValueError(f"snr must be >= 0, got {snr}")
    return params.bandwidth_hz / 2.0 * math.log1p(E_OVER_2PI * snr) / LN2


def reduce_params(params: SystemParams, gain: float) -> ReducedParams:
    """Collapse system parameters and a channel gain into (alpha, psi, xi).

    alpha = e/(2 pi) * rho^2 G^2 P_t^2 / (noise_psd / 2),
    psi = (M L)^2, xi = W L M / 2.
    """
    if gain <= 0:
        raise ValueError("channel gain must be positive to form reduced parameters")
    links = params.num_users * params.num_light_sources
    alpha = (
        E_OVER_2PI
        * params.oe_conversion**2
        * gain**2
        * params.transmit_power_w**2
        / (params.noise_psd / 2.0)
    )
    return ReducedParams(alpha=alpha, psi=float(links * links), xi=params.bandwidth_hz * links / 2.0)


def _theta_of(absorbing, n):
    if isinstance(absorbing, (FixedCount, Fraction)):
        return absorbing.theta_at(n)
    theta = float(absorbing)
    if theta < 0:
        raise ValueError(f"absorbing count must be >= 0, got {theta}")
    return theta


def rate_total(red: ReducedParams, n, absorbing=0.0):
    """Aggregate rate xi * (n - theta) * log2(alpha / (n^2 psi) + 1).

    ``n`` may be a scalar or an ndarray (element counts are treated as a
    continuum; the integer restriction only enters at hardware selection).
    ``absorbing`` is an :data:`AbsorbingMode` or a plain count.  A
    configuration with no active elements yields 0 and, for scalar input,
    a :class:`DegenerateConfigWarning`.
    """
    values = np.asarray(n, dtype=float)
    if np.any(values <= 0):
        raise ValueError("element count must be positive")
    theta = _theta_of(absorbing, values)
    active = values - theta
    load = red.alpha / (red.psi * values * values)
    rate = red.xi * active * np.log1p(load) / LN2
    rate = np.where(active > 0.0, rate, 0.0)
    if np.ndim(n) == 0:
        if float(active) <= 0.0:
            warnings.warn(
                "no active elements (absorbing count >= element count); rate is 0",
                DegenerateConfigWarning,
                stacklevel=2,
            )
        return float(rate)
    return rate


def rate_for_config(red: ReducedParams, config: RisConfig) -> float:
    """Aggregate rate of a concrete panel configuration."""
    return rate_total(red, float(config.num_elements), config.absorbing)


def f_series(red: ReducedParams, n: float, theta: float, terms: int) -> float:
    """Truncated alternating series for the aggregate rate.

        xi (n - theta) / ln 2 * sum_{j=1..terms} (-1)^(j+1) x^j / j,
        x = alpha / (n^2 psi).

    Valid for 0 < x <= 1; the truncation error is bounded by the first
    omitted term, xi (n - theta) / ln2 * x^(terms+1) / (terms + 1), and
    successive partial sums bracket the exact rate.
    """
    if terms < 1:
        raise ValueError(f"terms must be >= 1, got {terms}")
    if n <= 0:
        raise ValueError("element count must be positive")
    x = red.alpha / (red.psi * n * n)
    if x > 1.0:
        raise ValueError(
            f"series requires alpha/(n^2 psi) <= 1, got {x:.6g}: "
            "outside the convergence domain"
        )
    total = 0.0
    power = 1.0
    for j in range(1, terms + 1):
        power *= x
        term = power / j
        total += term if j % 2 == 1 else -term
    return red.xi * (n - theta) / LN2 * total


def bits_per_sequence(red: ReducedParams, rate: float, active: float) -> float:
    """Control-sequence bit count implied by a target aggregate rate.

    Inverts the reduced rate form for ``k = log2 n``:

        k = 1/2 * log2( alpha / (psi * (e^(ln2 * rate / (xi * active)) - 1)) )

    Round-trip law: for a power-of-two panel with a fixed absorbing count,
    ``bits_per_sequence(rate_total(n), n - theta) == log2 n``.
    """
    if active <= 0:
        raise ValueError(f"active element count must be positive, got {active}")
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    exponent = LN2 * rate / (red.xi * active)
    denominator = red.psi * math.expm1(exponent)
    if denominator <= 0:
        raise ValueError("rate inversion produced a non-positive denominator")
    ratio = red.alpha / denominator
    if ratio < 1.0 - 1e-9:
        raise ValueError(
            "rate exceeds single-element capacity for these parameters "
            f"(implied element count {math.sqrt(ratio):.6g} < 1)"
        )
    return 0.5 * math.log2(ratio)
