"""Antenna pattern, channel, interference range and scenario derivation."""

import math

import numpy as np
import pytest

from mmwmac.model import (AntennaPattern, Channel, FixedRange,
                          NoInterferenceRange, RangeFromLength, Scenario,
                          channel_60ghz, interference_range,
                          link_length_density, main_lobe_gain,
                          reference_scenario, sector_count)

TWO_PI = 2.0 * math.pi


def test_gain_isotropic_and_no_sidelobe():
    assert main_lobe_gain(AntennaPattern(beamwidth=math.pi / 2)) == pytest.approx(4.0)
    assert main_lobe_gain(AntennaPattern(beamwidth=TWO_PI, side_lobe=0.37)) \
        == pytest.approx(1.0)


def test_gain_power_conservation_identity():
    pat = AntennaPattern(beamwidth=math.radians(20.0), side_lobe=0.05)
    g = main_lobe_gain(pat)
    assert abs(pat.beamwidth * g + (TWO_PI - pat.beamwidth) * pat.side_lobe
               - TWO_PI) < 1e-12


def test_gain_power_conservation_random_grid():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        th = rng.uniform(1e-3, TWO_PI)
        eps = rng.uniform(0.0, 0.999)
        pat = AntennaPattern(beamwidth=th, side_lobe=eps)
        g = pat.main_lobe_gain
        assert g >= eps
        assert abs(th * g + (TWO_PI - th) * eps - TWO_PI) < 1e-12


def test_pattern_validation():
    with pytest.raises(ValueError):
        AntennaPattern(beamwidth=0.0)
    with pytest.raises(ValueError):
        AntennaPattern(beamwidth=1.0, side_lobe=1.0)


def _noise_free_channel(beta, alpha):
    return Channel(tx_power=1.0, ref_attenuation=1.0, pathloss_exp=alpha,
                   sinr_threshold=beta, noise_power=0.0)


def test_interference_range_noise_free():
    pat = AntennaPattern(beamwidth=math.radians(30.0))
    assert interference_range(5.0, _noise_free_channel(1.0, 2.7), pat) \
        == pytest.approx(5.0)
    assert interference_range(5.0, _noise_free_channel(8.0, 3.0), pat) \
        == pytest.approx(10.0)


def test_interference_range_60ghz_calibration():
    # the reference channel puts a 5 m / 20 degree link's range near 15 m
    pat = AntennaPattern(beamwidth=math.radians(20.0))
    d = interference_range(5.0, channel_60ghz(), pat)
    assert 12.0 <= d <= 18.0
    d0 = interference_range(5.0, channel_60ghz(absorption_db_per_km=0.0), pat)
    assert 12.0 <= d0 <= 18.0


def test_interference_range_outage():
    ch = Channel(tx_power=1e-9, ref_attenuation=1e-9, pathloss_exp=2.0,
                 sinr_threshold=10.0, noise_power=1.0)
    with pytest.raises(NoInterferenceRange):
        interference_range(5.0, ch, AntennaPattern(beamwidth=1.0))


def test_interference_range_monotonic():
    pat = AntennaPattern(beamwidth=math.radians(20.0))
    rng = np.random.default_rng(7)
    for _ in range(50):
        alpha = rng.uniform(2.0, 4.0)
        beta = rng.uniform(1.0, 20.0)
        ch = Channel(tx_power=2.5e-3, ref_attenuation=10 ** (-6.8),
                     pathloss_exp=alpha, sinr_threshold=beta,
                     noise_power=1e-11)
        lengths = np.sort(rng.uniform(0.5, 6.0, size=4))
        ds = [interference_range(float(l), ch, pat) for l in lengths]
        assert all(a < b for a, b in zip(ds, ds[1:]))
        # a stricter decoding threshold lets farther interferers cause
        # outage, so the range grows with it (= L*beta^(1/alpha) at zero
        # noise)
        ch_hi = Channel(tx_power=2.5e-3, ref_attenuation=10 ** (-6.8),
                        pathloss_exp=alpha, sinr_threshold=beta * 2.0,
                        noise_power=1e-11)
        assert interference_range(2.0, ch_hi, pat) \
            > interference_range(2.0, ch, pat)


def test_interference_range_root_matches_closed_form():
    # with absorption disabled the bisection path must agree with the
    # closed form
    pat = AntennaPattern(beamwidth=math.radians(20.0))
    rng = np.random.default_rng(99)
    for _ in range(25):
        ch = Channel(tx_power=2.5e-3, ref_attenuation=10 ** (-6.8),
                     pathloss_exp=rng.uniform(2.0, 3.5),
                     sinr_threshold=rng.uniform(2.0, 15.0),
                     noise_power=10 ** rng.uniform(-12, -10.3))
        closed = interference_range(5.0, ch, pat)
        # absorption of 1e-12 dB/km forces the root-finding branch
        ch_root = Channel(tx_power=ch.tx_power, ref_attenuation=ch.ref_attenuation,
                          pathloss_exp=ch.pathloss_exp,
                          sinr_threshold=ch.sinr_threshold,
                          noise_power=ch.noise_power,
                          absorption_db_per_km=1e-12)
        root = interference_range(5.0, ch_root, pat)
        assert abs(root - closed) / closed < 1e-9


def test_link_length_density():
    assert link_length_density(0.0, 15.0) == 0.0
    assert link_length_density(15.0, 15.0) == pytest.approx(2.0 / 15.0)
    with pytest.raises(ValueError):
        link_length_density(16.0, 15.0)
    xs = np.linspace(0.0, 15.0, 20_001)
    total = np.trapezoid([link_length_density(x, 15.0) for x in xs], xs)
    assert abs(total - 1.0) < 1e-6


def test_sector_count_guard():
    assert sector_count(math.radians(20.0), math.radians(5.0)) == 4
    assert sector_count(math.radians(20.0) * (1.0 + 5e-10), math.radians(5.0)) == 4
    assert sector_count(math.radians(21.0), math.radians(5.0)) == 5
    assert sector_count(1e-6, 1e-6) == 1


def test_scenario_derivation():
    scn = reference_scenario(tx_density=1.0 / 9.0, obstacle_density=0.11)
    d = scn.derive()
    assert d.interferer_density == pytest.approx((1 / 9) * math.radians(20) / TWO_PI)
    assert d.dmax == 15.0
    assert d.sector_count == 4
    assert d.sector_area(15.0) == pytest.approx(math.radians(5) * 225.0 / 2.0)
    assert d.interferer_density <= scn.tx_density
    areas = [d.sector_area(x) for x in np.linspace(0.1, 15.0, 30)]
    assert all(a < b for a, b in zip(areas, areas[1:]))


def test_scenario_derived_range_mode():
    scn = reference_scenario(tx_density=0.1, obstacle_density=0.1,
                             dmax_mode=RangeFromLength(5.0))
    assert 12.0 <= scn.derive().dmax <= 18.0


def test_scenario_validation():
    ant = AntennaPattern(beamwidth=math.radians(20.0))
    ch = channel_60ghz()
    with pytest.raises(ValueError):
        Scenario(tx_density=-1.0, obstacle_density=0.1, tx_prob=1.0,
                 coherence_angle=math.radians(5.0), antenna=ant, channel=ch)
    with pytest.raises(ValueError):
        Scenario(tx_density=0.1, obstacle_density=0.1, tx_prob=1.5,
                 coherence_angle=math.radians(5.0), antenna=ant, channel=ch)
    with pytest.raises(ValueError):
        # coherence angle wider than the beam
        Scenario(tx_density=0.1, obstacle_density=0.1, tx_prob=1.0,
                 coherence_angle=math.radians(25.0), antenna=ant, channel=ch)
    with pytest.raises(ValueError):
        FixedRange(0.0)
