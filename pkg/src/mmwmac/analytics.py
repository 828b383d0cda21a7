"""Closed-form collision probability, throughput, area spectral efficiency,
bounds, asymptotics, retransmission-delay law, and the access-probability
optimizer for slotted-ALOHA and TDMA under the sectorized blockage model.

All probability compositions are evaluated through expm1/log1p so the
degenerate corners (vanishing densities, huge densities, thousands of
sectors) stay accurate instead of collapsing to 0/0 forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from scipy.integrate import quad

from .model import DerivedParams, Scenario, link_length_density

_QUAD_OPTS = dict(epsabs=1e-10, epsrel=1e-10, limit=200)

_GRID_POINTS = 101       # access-probability pre-scan resolution
_GOLDEN_TOL = 1e-6
_TIE_TOL = 1e-12


class DegenerateDelay(ValueError):
    """Zero success probability: the expected delay is infinite."""


def _one_minus_exp(x: float) -> float:
    """1 - exp(-x), accurate near x = 0."""
    return -math.expm1(-x)


def los_prob_regular_sector(lam_i: float, lam_o: float, area: float) -> float:
    """Probability that a sector holding only random interferers and
    obstacles presents at least one unblocked interferer."""
    if lam_i < 0.0 or lam_o < 0.0 or area < 0.0:
        raise ValueError("densities and area must be >= 0")
    if lam_i == 0.0 or area == 0.0:
        return 0.0
    s = lam_i + lam_o
    return (lam_i / s) * _one_minus_exp(s * area)


def conditional_los_prob_nonempty(lam_i: float, lam_o: float, area: float) -> float:
    """Probability that the nearest interferer precedes the nearest obstacle,
    given at least one of each is present in the sector."""
    if lam_i <= 0.0 or lam_o <= 0.0 or area <= 0.0:
        raise ValueError("conditioning requires lam_i > 0, lam_o > 0, area > 0")
    s = lam_i + lam_o
    p_i = _one_minus_exp(lam_i * area)
    p_o = _one_minus_exp(lam_o * area)
    return lam_o / (p_i * p_o) * (p_o / lam_o - _one_minus_exp(s * area) / s)


def los_prob_tagged_sector(lam_i: float, lam_o: float,
                           area_l: float, area_dmax: float) -> float:
    """Probability of an unblocked interferer in the sector that carries the
    served transmitter, whose inner part (closer than the link) is obstacle
    free by conditioning on the link being up."""
    if area_l < 0.0 or area_dmax < 0.0:
        raise ValueError("areas must be >= 0")
    if area_l > area_dmax:
        raise ValueError(f"area_l={area_l} exceeds area_dmax={area_dmax}")
    if lam_i <= 0.0:
        if lam_i < 0.0:
            raise ValueError("lam_i must be >= 0")
        return 0.0
    s = lam_i + lam_o
    inner = _one_minus_exp(lam_i * area_l)
    outer = math.exp(-lam_i * area_l) * (lam_i / s) * _one_minus_exp(s * (area_dmax - area_l))
    return inner + outer


@dataclass(frozen=True)
class _SectorModel:
    """Per-scenario constants for the sector composition, with the no-LoS
    factors kept in log space."""

    lam_i: float
    lam_o: float
    dmax: float
    coherence_angle: float
    sectors: int

    @classmethod
    def of(cls, scenario: Scenario, derived: DerivedParams | None = None) -> "_SectorModel":
        d = derived if derived is not None else scenario.derive()
        return cls(lam_i=d.interferer_density, lam_o=scenario.obstacle_density,
                   dmax=d.dmax, coherence_angle=d.coherence_angle,
                   sectors=d.sector_count)

    def area(self, d: float) -> float:
        return 0.5 * self.coherence_angle * d * d

    def log_no_los_regular(self) -> float:
        if self.lam_i == 0.0:
            return 0.0
        s = self.lam_i + self.lam_o
        t = (self.lam_i / s) * _one_minus_exp(s * self.area(self.dmax))
        return math.log1p(-t)

    def log_no_los_tagged(self, ell: float) -> float:
        if self.lam_i == 0.0:
            return 0.0
        s = self.lam_i + self.lam_o
        area_l = self.area(ell)
        annulus = self.area(self.dmax) - area_l
        t = (self.lam_i / s) * _one_minus_exp(s * annulus)
        return -self.lam_i * area_l + math.log1p(-t)

    def collision_given_length(self, ell: float) -> float:
        log_clear = (self.sectors - 1) * self.log_no_los_regular() \
            + self.log_no_los_tagged(ell)
        return -math.expm1(log_clear)

    def success_given_length(self, ell: float, tx_prob: float) -> float:
        log_clear = (self.sectors - 1) * self.log_no_los_regular() \
            + self.log_no_los_tagged(ell)
        return tx_prob * math.exp(-self.lam_o * self.area(ell) + log_clear)


def collision_prob_given_length(ell: float, scenario: Scenario) -> float:
    """Collision probability of a link of length ``ell``: the chance that at
    least one sector of the receive beam presents an unblocked, aligned,
    active transmitter within the interference range."""
    model = _SectorModel.of(scenario)
    if not 0.0 <= ell <= model.dmax:
        raise ValueError(f"ell={ell} outside [0, {model.dmax}]")
    return model.collision_given_length(ell)


@dataclass(frozen=True)
class CollisionResult:
    """Collision probability averaged over the link-length law, with the
    monotonicity bounds attained at zero and maximal length."""

    averaged: float
    lower_bound: float
    upper_bound: float
    _model: _SectorModel

    def conditional_at(self, ell: float) -> float:
        if not 0.0 <= ell <= self._model.dmax:
            raise ValueError(f"ell={ell} outside [0, {self._model.dmax}]")
        return self._model.collision_given_length(ell)


def collision_prob(scenario: Scenario) -> CollisionResult:
    """Length-averaged collision probability plus its closed-form bounds."""
    model = _SectorModel.of(scenario)
    dmax = model.dmax

    def integrand(ell: float) -> float:
        return model.collision_given_length(ell) * link_length_density(ell, dmax)

    averaged, _ = quad(integrand, 0.0, dmax, **_QUAD_OPTS)
    lower = model.collision_given_length(0.0)
    upper = model.collision_given_length(dmax)
    # the integrand is increasing in ell, so the endpoint values bound the
    # average exactly; keep quadrature rounding inside them
    return CollisionResult(
        averaged=min(max(averaged, lower), upper),
        lower_bound=lower,
        upper_bound=upper,
        _model=model,
    )


def success_prob_given_length(ell: float, scenario: Scenario) -> float:
    """Per-slot success probability of a link of length ``ell``: active, not
    blocked, and collision free."""
    model = _SectorModel.of(scenario)
    if not 0.0 <= ell <= model.dmax:
        raise ValueError(f"ell={ell} outside [0, {model.dmax}]")
    return model.success_given_length(ell, scenario.tx_prob)


@dataclass(frozen=True)
class ThroughputReport:
    """Per-link throughput in packets/slot with closed-form bounds, plus the
    area spectral efficiency in packets/slot/m^2."""

    per_link: float
    lower_bound: float
    upper_bound: float
    ase: float
    protocol: str


def aloha_throughput(scenario: Scenario) -> ThroughputReport:
    """Average per-link throughput of slotted ALOHA (equal to the average
    per-slot success probability at one packet per slot) and its ASE."""
    model = _SectorModel.of(scenario)
    dmax = model.dmax
    rho_a = scenario.tx_prob

    def integrand(ell: float) -> float:
        return model.success_given_length(ell, rho_a) * link_length_density(ell, dmax)

    per_link, _ = quad(integrand, 0.0, dmax, **_QUAD_OPTS)
    area = scenario.region_area
    return ThroughputReport(
        per_link=per_link,
        lower_bound=model.success_given_length(dmax, rho_a),
        upper_bound=model.success_given_length(0.0, rho_a),
        ase=(1.0 + area * scenario.tx_density) / area * per_link,
        protocol="aloha",
    )


def _shrink_ratio(x: float) -> float:
    """(1 - exp(-x)) / x for x >= 0, continued by its limit 1 at x = 0."""
    if x == 0.0:
        return 1.0
    return _one_minus_exp(x) / x


def tdma_throughput(scenario: Scenario) -> ThroughputReport:
    """Average per-link throughput and ASE under a round-robin schedule that
    activates one link at a time over the whole region."""
    d = scenario.derive()
    area = scenario.region_area
    share = _shrink_ratio(scenario.tx_density * area)
    clear = _shrink_ratio(scenario.obstacle_density * d.area_dmax)
    per_link = share * clear
    return ThroughputReport(
        per_link=per_link,
        lower_bound=per_link,
        upper_bound=share,        # blockage-free capacity of the time share
        ase=clear / area,
        protocol="tdma",
    )


@dataclass(frozen=True)
class DelayPmf:
    """Geometric law for the number of failed slots before a success."""

    success_prob: float

    def pmf_at(self, n: int) -> float:
        if n < 0:
            raise ValueError("retransmission count must be >= 0")
        return self.success_prob * (1.0 - self.success_prob) ** n

    @property
    def mean_retransmissions(self) -> float:
        return (1.0 - self.success_prob) / self.success_prob


def aloha_delay_pmf(scenario: Scenario) -> DelayPmf:
    """Retransmission-count law for slotted ALOHA, driven by the average
    per-slot success probability."""
    rho_s = aloha_throughput(scenario).per_link
    if rho_s <= 0.0:
        raise DegenerateDelay("success probability is zero")
    return DelayPmf(success_prob=rho_s)


def optimize_tx_prob(scenario: Scenario) -> tuple[float, float]:
    """Access probability maximizing the per-link ALOHA throughput.

    Pre-scans a uniform grid, refines the best cell by golden-section search,
    and breaks near-ties toward the larger probability (the simpler
    protocol).
    """
    def objective(rho: float) -> float:
        return aloha_throughput(replace(scenario, tx_prob=rho)).per_link

    grid = [i / (_GRID_POINTS - 1) for i in range(_GRID_POINTS)]
    values = [objective(r) for r in grid]
    best = max(range(_GRID_POINTS), key=lambda i: (values[i], grid[i]))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, _GRID_POINTS - 1)]

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > _GOLDEN_TOL:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = objective(d)
    refined = 0.5 * (a + b)

    candidates = sorted({refined, grid[best], 1.0})
    scored = [(objective(r), r) for r in candidates]
    top = max(v for v, _ in scored)
    rho_star = max(r for v, r in scored if v >= top - _TIE_TOL)
    return rho_star, objective(rho_star)


def zero_truncated_poisson_pmf(n: int, mean: float) -> float:
    """Poisson pmf conditioned on the count being at least one."""
    if n < 1:
        raise ValueError("zero-truncated support starts at 1")
    if mean <= 0.0:
        raise ValueError("mean must be > 0")
    log_p = -mean + n * math.log(mean) - math.lgamma(n + 1)
    return math.exp(log_p) / _one_minus_exp(mean)


def nearest_of_sample_pdf(x: float, n: int, dmax: float) -> float:
    """Density of the minimum of n i.i.d. radial distances with law
    2x/dmax^2 on [0, dmax]."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    if not 0.0 <= x <= dmax:
        raise ValueError(f"x={x} outside [0, {dmax}]")
    u = (x / dmax) ** 2
    return n * (2.0 * x / dmax ** 2) * (1.0 - u) ** (n - 1)


def min_distance_joint_density(x: float, y: float, n: int, m: int,
                               lam_i: float, lam_o: float,
                               area: float, dmax: float) -> float:
    """Joint density of (nearest interferer distance, nearest obstacle
    distance, interferer count, obstacle count) in one sector, conditioned
    on both counts being at least one."""
    return (nearest_of_sample_pdf(x, n, dmax)
            * nearest_of_sample_pdf(y, m, dmax)
            * zero_truncated_poisson_pmf(n, lam_i * area)
            * zero_truncated_poisson_pmf(m, lam_o * area))
