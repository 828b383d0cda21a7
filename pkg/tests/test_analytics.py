"""Closed-form collision/throughput expressions against independent
oracles: series-plus-quadrature evaluations of the sector densities, limit
formulas, bound sandwiches and grid-scan optimization."""

import math
from dataclasses import replace

import numpy as np
import pytest

from mmwmac.analytics import (DegenerateDelay, aloha_delay_pmf,
                              aloha_throughput, collision_prob,
                              collision_prob_given_length,
                              conditional_los_prob_nonempty,
                              los_prob_regular_sector, los_prob_tagged_sector,
                              min_distance_joint_density, optimize_tx_prob,
                              success_prob_given_length, tdma_throughput,
                              zero_truncated_poisson_pmf)
from mmwmac.model import FixedRange, reference_scenario

STD_AREA = math.radians(5.0) * 225.0 / 2.0      # one 5-degree sector to 15 m


def _random_scenario(rng, **overrides):
    params = dict(
        tx_density=10 ** rng.uniform(-2, 0.6),
        obstacle_density=10 ** rng.uniform(-3, 0.3),
        tx_prob=rng.uniform(0.05, 1.0),
        beamwidth_deg=rng.uniform(6.0, 60.0),
        coherence_angle_deg=rng.uniform(2.0, 6.0),
        dmax_mode=FixedRange(rng.uniform(5.0, 20.0)),
    )
    params.update(overrides)
    return reference_scenario(**params)


# ---------------------------------------------------------------------------
# sector-level probabilities

def test_regular_sector_no_interferers():
    assert los_prob_regular_sector(0.0, 0.3, STD_AREA) == 0.0


def test_regular_sector_no_obstacles_closed_form():
    lam_i = 0.01
    assert los_prob_regular_sector(lam_i, 0.0, STD_AREA) \
        == pytest.approx(-math.expm1(-lam_i * STD_AREA), rel=1e-12)


def test_regular_sector_saturates_with_interferers():
    # with interferers far denser than obstacles a LoS one is almost sure
    assert los_prob_regular_sector(500.0, 0.05, STD_AREA) > 0.999


def test_conditional_nonempty_requires_both():
    with pytest.raises(ValueError):
        conditional_los_prob_nonempty(0.0, 0.1, STD_AREA)
    with pytest.raises(ValueError):
        conditional_los_prob_nonempty(0.1, 0.0, STD_AREA)


def test_conditional_complementary_on_swap():
    # nearest-interferer-first and nearest-obstacle-first are complementary
    for lam_i, lam_o in ((0.02, 0.07), (0.3, 0.3), (1.1, 0.4)):
        p = conditional_los_prob_nonempty(lam_i, lam_o, STD_AREA)
        q = conditional_los_prob_nonempty(lam_o, lam_i, STD_AREA)
        assert p + q == pytest.approx(1.0, abs=1e-12)


def _nearest_density_sum(x, mu, dmax, terms=200):
    """sum_n pdf(min of n radial samples) * ztp(n); oracle building block."""
    out = np.zeros_like(x)
    for n in range(1, terms + 1):
        w = zero_truncated_poisson_pmf(n, mu)
        out += w * n * (2.0 * x / dmax ** 2) * (1.0 - (x / dmax) ** 2) ** (n - 1)
        if w < 1e-15 and n > mu:
            break
    return out


def _gauss(n, a, b):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def test_conditional_nonempty_matches_quadrature_of_joint_density():
    # brute-force series + 2D quadrature of the nearest-pair density over
    # the region where the interferer comes first
    dmax = 15.0
    for lam_i, lam_o in ((0.05, 0.05), (0.02, 0.15), (0.25, 0.08)):
        ys, wy = _gauss(200, 0.0, dmax)
        sy = _nearest_density_sum(ys, lam_o * STD_AREA, dmax)
        inner = np.empty_like(ys)
        for k, y in enumerate(ys):
            xs, wx = _gauss(200, 0.0, y)
            inner[k] = np.sum(wx * _nearest_density_sum(xs, lam_i * STD_AREA, dmax))
        brute = float(np.sum(wy * sy * inner))
        assert conditional_los_prob_nonempty(lam_i, lam_o, STD_AREA) \
            == pytest.approx(brute, abs=1e-6)


def test_joint_density_normalizes():
    dmax = 15.0
    lam_i, lam_o = 0.04, 0.12
    xs, wx = _gauss(200, 0.0, dmax)
    sx = _nearest_density_sum(xs, lam_i * STD_AREA, dmax)
    sy = _nearest_density_sum(xs, lam_o * STD_AREA, dmax)
    total = float(np.sum(wx * sx) * np.sum(wx * sy))
    assert total == pytest.approx(1.0, abs=1e-6)
    # and the pointwise joint density is the product of its factors
    v = min_distance_joint_density(3.0, 7.0, 2, 4, lam_i, lam_o, STD_AREA, dmax)
    manual = (2 * 2 * 3.0 / dmax ** 2) * (1 - (3.0 / dmax) ** 2) ** 1 \
        * (4 * 2 * 7.0 / dmax ** 2) * (1 - (7.0 / dmax) ** 2) ** 3 \
        * zero_truncated_poisson_pmf(2, lam_i * STD_AREA) \
        * zero_truncated_poisson_pmf(4, lam_o * STD_AREA)
    assert v == pytest.approx(manual, rel=1e-12)


def test_joint_density_single_sample_case():
    dmax = 15.0
    v = min_distance_joint_density(4.0, 9.0, 1, 1, 0.03, 0.08, STD_AREA, dmax)
    manual = (2 * 4.0 / dmax ** 2) * (2 * 9.0 / dmax ** 2) \
        * zero_truncated_poisson_pmf(1, 0.03 * STD_AREA) \
        * zero_truncated_poisson_pmf(1, 0.08 * STD_AREA)
    assert v == pytest.approx(manual, rel=1e-12)


def test_decomposition_identity():
    # conditioning on (no interferer / interferers but no obstacle / both)
    # recomposes to the closed form
    rng = np.random.default_rng(5)
    for _ in range(1000):
        lam_i = 10 ** rng.uniform(-3, 0.5)
        lam_o = 10 ** rng.uniform(-3, 0.5)
        area = rng.uniform(0.1, 30.0)
        p_i = -math.expm1(-lam_i * area)
        p_o = -math.expm1(-lam_o * area)
        composed = p_i * (1.0 - p_o) \
            + conditional_los_prob_nonempty(lam_i, lam_o, area) * p_i * p_o
        assert composed == pytest.approx(
            los_prob_regular_sector(lam_i, lam_o, area), abs=1e-9)


def test_tagged_sector_degenerate_cases():
    assert los_prob_tagged_sector(0.0, 0.3, 2.0, STD_AREA) == 0.0
    assert los_prob_tagged_sector(0.0, 0.0, 0.0, 0.0) == 0.0
    full = los_prob_tagged_sector(0.07, 0.5, STD_AREA, STD_AREA)
    assert full == pytest.approx(-math.expm1(-0.07 * STD_AREA), rel=1e-12)
    with pytest.raises(ValueError):
        los_prob_tagged_sector(0.1, 0.1, STD_AREA + 1.0, STD_AREA)


def test_tagged_sector_matches_raw_expression():
    # the stabilized evaluation equals the textbook composition
    rng = np.random.default_rng(11)
    for _ in range(500):
        lam_i = 10 ** rng.uniform(-3, 0.3)
        lam_o = 10 ** rng.uniform(-3, 0.3)
        area_d = rng.uniform(1.0, 20.0)
        area_l = rng.uniform(0.0, 1.0) * area_d
        s = lam_i + lam_o
        raw = 1.0 - math.exp(-lam_i * area_l) \
            + lam_i * math.exp(lam_o * area_l) / s \
            * (math.exp(-s * area_l) - math.exp(-s * area_d))
        assert los_prob_tagged_sector(lam_i, lam_o, area_l, area_d) \
            == pytest.approx(raw, rel=1e-10, abs=1e-14)


# ---------------------------------------------------------------------------
# collision probability

def test_collision_domain_checks():
    scn = reference_scenario(tx_density=0.1, obstacle_density=0.1)
    with pytest.raises(ValueError):
        collision_prob_given_length(-1.0, scn)
    with pytest.raises(ValueError):
        collision_prob_given_length(15.1, scn)


def test_collision_vanishes_without_interferers():
    scn = reference_scenario(tx_density=1e-15, obstacle_density=0.1)
    assert collision_prob_given_length(5.0, scn) < 1e-12
    res = collision_prob(scn)
    assert res.averaged < 1e-12
    assert res.lower_bound < 1e-12 and res.upper_bound < 1e-12


def test_collision_heavy_blockage_limit():
    # overwhelming obstacle density leaves only the obstacle-free inner
    # sub-sector of the serving sector
    scn = reference_scenario(tx_density=1.0 / 9.0, obstacle_density=1e9)
    d = scn.derive()
    ell = 5.0
    expect = -math.expm1(-d.interferer_density * d.sector_area(ell))
    assert collision_prob_given_length(ell, scn) \
        == pytest.approx(expect, rel=1e-6)


def test_collision_monotone_in_length_density_beamwidth():
    rng = np.random.default_rng(31)
    for _ in range(60):
        scn = _random_scenario(rng, coherence_angle_deg=4.0)
        dmax = scn.derive().dmax
        ells = np.linspace(0.0, dmax, 25)
        vals = [collision_prob_given_length(e, scn) for e in ells]
        assert all(b - a > -1e-12 for a, b in zip(vals, vals[1:]))
        # denser transmitters collide more
        v1 = collision_prob_given_length(dmax / 2, scn)
        v2 = collision_prob_given_length(
            dmax / 2, replace(scn, tx_density=scn.tx_density * 2.0))
        assert v2 >= v1 - 1e-12
    # wider beam (same dmax, coherence angle dividing the beam) collides more
    vals = [collision_prob_given_length(
        7.0, reference_scenario(tx_density=0.3, obstacle_density=0.1,
                                beamwidth_deg=5.0 * m)) for m in (1, 2, 4, 8)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_collision_bounds_sandwich():
    rng = np.random.default_rng(17)
    for _ in range(1000):
        scn = _random_scenario(rng)
        res = collision_prob(scn)
        assert 0.0 <= res.lower_bound <= res.averaged <= res.upper_bound <= 1.0
        assert res.conditional_at(0.0) == pytest.approx(res.lower_bound)


def test_collision_single_sector_composition():
    # with one sector the result is the serving-sector probability alone
    scn = reference_scenario(tx_density=0.4, obstacle_density=0.2,
                             beamwidth_deg=5.0, coherence_angle_deg=5.0)
    d = scn.derive()
    assert d.sector_count == 1
    ell = 6.0
    expect = los_prob_tagged_sector(d.interferer_density, scn.obstacle_density,
                                    d.sector_area(ell), d.area_dmax)
    assert collision_prob_given_length(ell, scn) == pytest.approx(expect, rel=1e-12)


def test_collision_multi_sector_composition():
    # independence across sectors: 1 - (no-LoS regular)^(k-1) * (no-LoS tagged)
    scn = reference_scenario(tx_density=0.5, obstacle_density=0.15)
    d = scn.derive()
    ell = 9.0
    reg = los_prob_regular_sector(d.interferer_density, scn.obstacle_density,
                                  d.area_dmax)
    tag = los_prob_tagged_sector(d.interferer_density, scn.obstacle_density,
                                 d.sector_area(ell), d.area_dmax)
    expect = 1.0 - (1.0 - reg) ** (d.sector_count - 1) * (1.0 - tag)
    assert collision_prob_given_length(ell, scn) == pytest.approx(expect, rel=1e-12)


def test_collision_average_quadrature_self_consistency():
    scn = reference_scenario(tx_density=0.44, obstacle_density=0.11)
    res = collision_prob(scn)
    for nodes in (256, 512):
        xs, ws = _gauss(nodes, 0.0, 15.0)
        fixed = float(np.sum(ws * np.array(
            [res.conditional_at(x) * 2.0 * x / 225.0 for x in xs])))
        assert abs(fixed - res.averaged) < 1e-8


# ---------------------------------------------------------------------------
# throughput, ASE, delay

def test_success_prob_structure():
    scn = reference_scenario(tx_density=0.44, obstacle_density=0.11,
                             tx_prob=0.7)
    assert success_prob_given_length(0.0, scn) == pytest.approx(
        0.7 * (1.0 - collision_prob_given_length(0.0, scn)))
    assert success_prob_given_length(5.0, replace(scn, tx_prob=0.0)) == 0.0


def test_success_prob_monotone_decreasing():
    rng = np.random.default_rng(23)
    for _ in range(100):
        scn = _random_scenario(rng)
        dmax = scn.derive().dmax
        vals = [success_prob_given_length(e, scn)
                for e in np.linspace(0.0, dmax, 50)]
        assert all(b - a < 1e-12 for a, b in zip(vals, vals[1:]))


def test_aloha_throughput_bounds_and_ase():
    rng = np.random.default_rng(29)
    for _ in range(200):
        scn = _random_scenario(rng)
        rep = aloha_throughput(scn)
        assert 0.0 <= rep.lower_bound <= rep.per_link + 1e-12
        assert rep.per_link <= rep.upper_bound + 1e-12
        assert rep.upper_bound <= 1.0
        expect_ase = (1.0 + scn.region_area * scn.tx_density) \
            / scn.region_area * rep.per_link
        assert rep.ase == pytest.approx(expect_ase, rel=1e-12)


def test_aloha_low_density_limit():
    # with no transmitters left, throughput is the pure no-blockage factor
    scn = reference_scenario(tx_density=1e-12, obstacle_density=0.11)
    d = scn.derive()
    x = scn.obstacle_density * d.area_dmax
    expect = -math.expm1(-x) / x
    assert aloha_throughput(scn).per_link == pytest.approx(expect, rel=1e-6)


def test_aloha_no_blockage_no_collision_limit():
    scn = reference_scenario(tx_density=1e-12, obstacle_density=1e-12,
                             tx_prob=0.37)
    assert aloha_throughput(scn).per_link == pytest.approx(0.37, rel=1e-9)


def test_ase_tightly_tracks_density_scaling():
    rng = np.random.default_rng(41)
    for _ in range(50):
        scn = _random_scenario(rng)
        area_links = scn.region_area * scn.tx_density
        if area_links <= 10.0:
            scn = replace(scn, region_area=11.0 / scn.tx_density)
            area_links = scn.region_area * scn.tx_density
        rep = aloha_throughput(scn)
        if rep.ase == 0.0:
            continue
        approx = scn.tx_density * rep.per_link
        assert abs(rep.ase - approx) / rep.ase <= 1.0 / area_links + 1e-12


def test_tdma_throughput_closed_form():
    scn = reference_scenario(tx_density=0.01, obstacle_density=0.11,
                             region_area=100.0)
    d = scn.derive()
    rep = tdma_throughput(scn)
    share = -math.expm1(-1.0) / 1.0
    clear = -math.expm1(-0.11 * d.area_dmax) / (0.11 * d.area_dmax)
    assert rep.per_link == pytest.approx(share * clear, rel=1e-12)
    assert rep.ase == pytest.approx(clear / 100.0, rel=1e-12)


def test_tdma_degenerate_limits():
    scn = reference_scenario(tx_density=1e-15, obstacle_density=1e-15)
    rep = tdma_throughput(scn)
    assert rep.per_link == pytest.approx(1.0, rel=1e-9)


def test_tdma_capacity_bounds():
    rng = np.random.default_rng(43)
    for _ in range(400):
        scn = _random_scenario(rng, region_area=10 ** rng.uniform(1, 4))
        rep = tdma_throughput(scn)
        x = scn.region_area * scn.tx_density
        assert rep.per_link <= -math.expm1(-x) / x + 1e-12
        assert rep.ase <= 1.0 / scn.region_area + 1e-15


def test_common_low_density_limit():
    # ALOHA at full access and TDMA coincide when transmitters vanish
    scn = reference_scenario(tx_density=1e-12, obstacle_density=0.2,
                             tx_prob=1.0)
    a = aloha_throughput(scn).per_link
    t = tdma_throughput(scn).per_link
    assert a == pytest.approx(t, rel=1e-6)


def test_delay_pmf_values():
    scn = reference_scenario(tx_density=1e-12, obstacle_density=1e-12)
    pmf = aloha_delay_pmf(scn)      # success probability 1
    assert pmf.pmf_at(0) == pytest.approx(1.0, rel=1e-9)
    assert pmf.pmf_at(3) == pytest.approx(0.0, abs=1e-9)

    from mmwmac.analytics import DelayPmf
    half = DelayPmf(success_prob=0.5)
    assert half.pmf_at(2) == pytest.approx(0.125)
    assert half.mean_retransmissions == pytest.approx(1.0)
    assert sum(half.pmf_at(n) for n in range(200)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        half.pmf_at(-1)


def test_delay_degenerate():
    scn = reference_scenario(tx_density=0.1, obstacle_density=0.1, tx_prob=0.0)
    with pytest.raises(DegenerateDelay):
        aloha_delay_pmf(scn)


# ---------------------------------------------------------------------------
# access-probability optimization

def test_optimizer_boundary_case():
    scn = reference_scenario(tx_density=0.01, obstacle_density=0.11,
                             beamwidth_deg=25.0)
    rho, thr = optimize_tx_prob(scn)
    assert rho == pytest.approx(1.0, abs=1e-9)
    assert thr == pytest.approx(aloha_throughput(replace(scn, tx_prob=1.0)).per_link)


def test_optimizer_collision_dominated():
    scn = reference_scenario(tx_density=300.0, obstacle_density=0.11)
    rho, thr = optimize_tx_prob(scn)
    assert rho < 0.05
    assert thr < 0.05


def test_optimizer_matches_grid_scan():
    scn = reference_scenario(tx_density=4.0, obstacle_density=0.11)
    rho, thr = optimize_tx_prob(scn)
    assert rho < 1.0
    grid = np.arange(0.0, 1.0 + 1e-12, 1e-3)
    vals = [aloha_throughput(replace(scn, tx_prob=float(r))).per_link
            for r in grid]
    best = int(np.argmax(vals))
    assert abs(rho - grid[best]) <= 1e-3 + 1e-9
    assert thr >= vals[best] - 1e-9
