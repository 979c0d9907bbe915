import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omnidris.channel import channel_dc_gain, reference_room_geometry
from omnidris.rate import (
    LN2,
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

# Frozen from 40-digit evaluations at the reference room parameters.
REFERENCE_GAIN = 1.5409187756393058e-7
REFERENCE_SNR_N128 = 3.6230936784633443e-17
REFERENCE_ALPHA = 2.5681129220781254e-13


def system(**overrides) -> SystemParams:
    base = dict(
        bandwidth_hz=1e6,
        transmit_power_w=10.0,
        num_light_sources=1,
        num_users=1,
        oe_conversion=0.5,
        noise_psd=2.0,
    )
    base.update(overrides)
    return SystemParams(**base)


# --- SNR ----------------------------------------------------------------------


def test_snr_all_unity_normalization():
    params = system(bandwidth_hz=1.0, transmit_power_w=1.0, oe_conversion=1.0)
    assert snr_single_link(params, gain=1.0, num_elements=1) == 1.0


def test_snr_quadratic_in_inverse_element_count():
    params = system()
    one = snr_single_link(params, REFERENCE_GAIN, 64)
    two = snr_single_link(params, REFERENCE_GAIN, 128)
    assert one == 4.0 * two


def test_snr_reference_room_value():
    gain = channel_dc_gain(reference_room_geometry())
    assert snr_single_link(system(), gain, 128) == pytest.approx(
        REFERENCE_SNR_N128, rel=1e-12
    )


def test_snr_rejects_zero_elements_and_negative_gain():
    with pytest.raises(ValueError):
        snr_single_link(system(), 1.0, 0)
    with pytest.raises(ValueError):
        snr_single_link(system(), -1e-9, 4)


# --- per-link rate --------------------------------------------------------------


def test_rate_zero_snr_is_exactly_zero():
    assert rate_single_link(system(), 0.0) == 0.0


def test_rate_unit_cases():
    params = system(bandwidth_hz=2.0)
    assert rate_single_link(params, 2.0 * math.pi / math.e) == pytest.approx(1.0, rel=1e-12)
    params = system(bandwidth_hz=1e6)
    assert rate_single_link(params, 2.0 * math.pi * 3.0 / math.e) == pytest.approx(
        1e6, rel=1e-12
    )


def test_rate_strictly_increasing_in_snr():
    params = system()
    values = [rate_single_link(params, snr) for snr in (0.0, 0.5, 1.0, 5.0, 100.0)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_rate_rejects_negative_snr():
    with pytest.raises(ValueError):
        rate_single_link(system(), -1.0)


# --- reduction -------------------------------------------------------------------


def test_reduce_unit_counts():
    red = reduce_params(system(bandwidth_hz=2.0), gain=1.0)
    assert red.psi == 1.0
    assert red.xi == 1.0


def test_reduce_counts_and_bandwidth():
    red = reduce_params(system(bandwidth_hz=1e6, num_users=2, num_light_sources=3), 1.0)
    assert red.psi == 36.0
    assert red.xi == 3e6


def test_reduce_reference_alpha():
    gain = channel_dc_gain(reference_room_geometry())
    red = reduce_params(system(), gain)
    assert red.alpha == pytest.approx(REFERENCE_ALPHA, rel=1e-12)


def test_reduce_rejects_zero_gain():
    with pytest.raises(ValueError):
        reduce_params(system(), 0.0)


def test_reduced_params_must_be_positive():
    for bad in ({"alpha": 0.0}, {"psi": -1.0}, {"xi": 0.0}):
        kwargs = dict(alpha=1.0, psi=1.0, xi=1.0)
        kwargs.update(bad)
        with pytest.raises(ValueError):
            ReducedParams(**kwargs)


# --- aggregate rate ---------------------------------------------------------------


def test_rate_total_c0_probe():
    red = ReducedParams(1.0, 1.0, 1.0)
    assert rate_total(red, 2.2, 1.0) == pytest.approx(0.3252, abs=5e-5)


def test_rate_total_c1_probe():
    red = ReducedParams(5.0, 5.0, 5.0)
    assert rate_total(red, 10.0, 5.0) == pytest.approx(0.3588, rel=1e-3)


def test_rate_total_all_absorbing_is_zero_and_flagged():
    red = ReducedParams(1.0, 1.0, 1.0)
    with pytest.warns(DegenerateConfigWarning):
        assert rate_total(red, 8.0, 8.0) == 0.0
    with pytest.warns(DegenerateConfigWarning):
        assert rate_for_config(red, RisConfig(8, FixedCount(8))) == 0.0


def test_rate_total_array_path_matches_scalars():
    red = ReducedParams(3.0, 2.0, 7.0)
    ns = np.array([1.0, 2.5, 4.0, 10.0, 64.0])
    vectorized = rate_total(red, ns, 1.0)
    for n, value in zip(ns, vectorized):
        if n > 1.0:
            assert value == rate_total(red, float(n), 1.0)
    assert vectorized[0] == 0.0  # zeta = 0 row zeroed without warning


def test_rate_total_rejects_nonpositive_counts():
    red = ReducedParams(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        rate_total(red, 0.0, 0.0)
    with pytest.raises(ValueError):
        rate_total(red, -2.0, 0.0)
    with pytest.raises(ValueError):
        rate_total(red, 4.0, -1.0)


def test_rate_total_equals_explicit_triple_sum():
    # independent oracle: sum the per-link rate over sources, users, active elements
    params = system(num_light_sources=2, num_users=3)
    gain = channel_dc_gain(reference_room_geometry())
    n, theta = 12, 3
    per_link = rate_single_link(params, snr_single_link(params, gain, n))
    total = 0.0
    for _ in range(params.num_light_sources):
        for _ in range(params.num_users):
            for _ in range(n - theta):
                total += per_link
    red = reduce_params(params, gain)
    assert rate_total(red, float(n), float(theta)) == pytest.approx(total, rel=1e-12)


def test_active_fraction_linearity():
    red = ReducedParams(2.7, 1.3, 4.4)
    for n in (10.0, 37.3, 128.0, 250.0):
        full = rate_total(red, n, Fraction(0.0))
        three_quarters = rate_total(red, n, Fraction(0.25))
        half = rate_total(red, n, Fraction(0.5))
        assert three_quarters == pytest.approx(0.75 * full, rel=1e-12)
        assert half == pytest.approx(0.5 * full, rel=1e-12)


def test_rate_total_monotonicity_in_reduced_params():
    n, theta = 16.0, 2.0
    base = rate_total(ReducedParams(2.0, 3.0, 5.0), n, theta)
    assert rate_total(ReducedParams(4.0, 3.0, 5.0), n, theta) > base
    assert rate_total(ReducedParams(2.0, 3.0, 9.0), n, theta) > base
    assert rate_total(ReducedParams(2.0, 6.0, 5.0), n, theta) < base


# --- series form -------------------------------------------------------------------


def test_f_series_single_term():
    red = ReducedParams(1.0, 1.0, 1.0)
    assert f_series(red, 10.0, 0.0, 1) == pytest.approx(0.1 / LN2, rel=1e-14)
    # with one absorbing element: 9 * 0.01 / ln2 = 0.12984...
    assert f_series(red, 10.0, 1.0, 1) == pytest.approx(0.09 / LN2, rel=1e-14)
    assert f_series(red, 10.0, 1.0, 1) == pytest.approx(0.12984, abs=5e-6)


def test_f_series_converges_to_exact_rate():
    red = ReducedParams(1.125, 1.0, 1.0)  # load x = 1.125 / 1.5^2 = 0.5
    exact = rate_total(red, 1.5, 0.0)
    approx = f_series(red, 1.5, 0.0, 40)
    assert abs(approx - exact) <= 1e-12 * abs(exact)


def test_f_series_partial_sums_bracket_exact_rate():
    red = ReducedParams(2.0, 1.0, 3.0)
    n, theta = 2.0, 0.5  # load x = 0.5
    exact = rate_total(red, n, theta)
    for terms in range(1, 9):
        value = f_series(red, n, theta, terms)
        if terms % 2 == 1:
            assert value >= exact
        else:
            assert value <= exact


def test_f_series_error_bound():
    red = ReducedParams(2.0, 1.0, 3.0)
    n, theta = 2.0, 0.5
    x = red.alpha / (red.psi * n * n)
    exact = rate_total(red, n, theta)
    for terms in (1, 2, 3, 5, 10, 20):
        bound = red.xi * (n - theta) / LN2 * x ** (terms + 1) / (terms + 1)
        assert abs(f_series(red, n, theta, terms) - exact) <= bound * (1.0 + 1e-12)


def test_f_series_rejects_out_of_domain_load():
    red = ReducedParams(10.0, 1.0, 1.0)
    with pytest.raises(ValueError, match="convergence"):
        f_series(red, 2.0, 0.0, 5)  # x = 2.5
    with pytest.raises(ValueError):
        f_series(ReducedParams(1.0, 1.0, 1.0), 10.0, 0.0, 0)


# --- bit-count inversion -------------------------------------------------------------


def test_bits_round_trip_pow2():
    red = ReducedParams(2.5, 4.0, 3.0)
    rate = rate_total(red, 128.0, 3.0)
    assert bits_per_sequence(red, rate, 125.0) == pytest.approx(7.0, abs=1e-9)


def test_bits_single_element():
    red = ReducedParams(1.7, 0.9, 2.2)
    rate = rate_total(red, 1.0, 0.0)
    assert bits_per_sequence(red, rate, 1.0) == pytest.approx(0.0, abs=1e-9)


def test_bits_c0_operating_point():
    red = ReducedParams(1.0, 1.0, 1.0)
    bits = bits_per_sequence(red, 0.3252, 1.2)
    assert bits == pytest.approx(math.log2(2.2), abs=1e-3)


def test_bits_rejects_infeasible_rate():
    red = ReducedParams(1.0, 1.0, 1.0)
    capacity_at_one = rate_total(red, 1.0, 0.0)
    with pytest.raises(ValueError, match="single-element capacity"):
        bits_per_sequence(red, 2.0 * capacity_at_one, 1.0)
    with pytest.raises(ValueError):
        bits_per_sequence(red, 0.0, 1.0)
    with pytest.raises(ValueError):
        bits_per_sequence(red, 1.0, 0.0)


@given(
    log_alpha=st.floats(min_value=-1.0, max_value=4.0),
    log_psi=st.floats(min_value=-1.0, max_value=1.0),
    log_xi=st.floats(min_value=0.0, max_value=6.0),
    bits=st.integers(min_value=1, max_value=9),
    theta_fraction=st.floats(min_value=0.0, max_value=0.9),
)
@settings(derandomize=True, max_examples=200)
def test_bits_round_trip_property(log_alpha, log_psi, log_xi, bits, theta_fraction):
    red = ReducedParams(10.0**log_alpha, 10.0**log_psi, 10.0**log_xi)
    n = 2**bits
    theta = float(int(theta_fraction * n))
    rate = rate_total(red, float(n), theta)
    recovered = bits_per_sequence(red, rate, n - theta)
    assert abs(recovered - bits) <= 1e-9


# --- configuration type ---------------------------------------------------------------


def test_ris_config_bits_property():
    assert RisConfig(128).bits_per_sequence == 7
    assert RisConfig(1).bits_per_sequence == 0
    assert RisConfig(100).bits_per_sequence is None


def test_ris_config_fraction_counts_round_half_to_even():
    config = RisConfig(128, Fraction(0.25))
    assert config.absorbing_count == 32
    assert config.active_count == 96
    # 0.5 * 5 = 2.5 rounds to the even neighbor
    assert RisConfig(5, Fraction(0.5)).absorbing_count == 2


def test_ris_config_validation():
    with pytest.raises(ValueError):
        RisConfig(0)
    with pytest.raises(ValueError):
        RisConfig(4, FixedCount(5))
    with pytest.raises(ValueError):
        FixedCount(-1)
    with pytest.raises(ValueError):
        Fraction(1.0)
    assert RisConfig(4, FixedCount(4)).is_degenerate
    assert not RisConfig(4, FixedCount(3)).is_degenerate


def test_system_params_validation():
    with pytest.raises(ValueError):
        system(bandwidth_hz=0.0)
    with pytest.raises(ValueError):
        system(num_users=0)
    with pytest.raises(ValueError):
        system(oe_conversion=1.5)
    with pytest.raises(ValueError):
        system(noise_psd=-2.0)
