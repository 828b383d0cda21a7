"""Stochastic oracle for the sectorized blockage/interference model.

Samples the radial sector abstraction directly (no closed forms) and
estimates LoS-interference and collision probabilities with binomial
standard errors.

Trials run in fixed-size chunks, each driven by its own counter-based
Philox stream keyed by (seed, chunk index).  Chunk results are integer
counters combined by addition, so an estimate is bit-identical no matter
how many workers the chunks are spread over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Scenario

CHUNK_TRIALS = 1 << 14

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Estimate:
    """Bernoulli estimate with its standard error."""

    mean: float
    std_error: float
    trials: int
    seed: int


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed & _MASK64, chunk & _MASK64]))


def _finish(hits: int, trials: int, seed: int) -> Estimate:
    mean = hits / trials
    return Estimate(mean=mean,
                    std_error=math.sqrt(mean * (1.0 - mean) / trials),
                    trials=trials, seed=seed)


def _chunks(trials: int):
    start = 0
    index = 0
    while start < trials:
        yield index, min(CHUNK_TRIALS, trials - start)
        start += CHUNK_TRIALS
        index += 1


def _min_fraction(counts: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Squared-distance fraction of the nearest of ``counts`` points whose
    squared radius is uniform on [0, 1]; +inf where the count is zero."""
    u = rng.random(counts.shape)
    out = np.full(counts.shape, np.inf)
    occupied = counts > 0
    out[occupied] = 1.0 - u[occupied] ** (1.0 / counts[occupied])
    return out


def sample_sector(lam_i: float, lam_o: float, dmax: float,
                  coherence_angle: float,
                  rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """One sector realization: radial distances of interferers and obstacles.

    Counts are Poisson with mean density*sector_area; distances follow the
    uniform-in-sector radial law (CDF x^2/dmax^2).
    """
    area = 0.5 * coherence_angle * dmax * dmax
    n_i = rng.poisson(lam_i * area)
    n_o = rng.poisson(lam_o * area)
    interferers = dmax * np.sqrt(rng.random(n_i))
    obstacles = dmax * np.sqrt(rng.random(n_o))
    return interferers, obstacles


@dataclass(frozen=True)
class SectorTopology:
    """One sampled realization of the k-sector beam around a receiver.

    The sector holding the served transmitter keeps its inner sub-sector
    obstacle free: the link being up rules out any obstacle closer than the
    transmitter, so obstacles there are drawn on (link_length, dmax] only.
    """

    interferer_distances: list[np.ndarray]
    obstacle_distances: list[np.ndarray]
    tagged_sector: int
    link_length: float
    dmax: float


def sample_sector_topology(scenario: Scenario, rng: np.random.Generator,
                           given_length: float | None = None) -> SectorTopology:
    """Sample all sectors of one trial, honoring the tagged-sector
    conditioning."""
    d = scenario.derive()
    lam_i, lam_o = d.interferer_density, scenario.obstacle_density
    dmax = d.dmax
    if given_length is None:
        length = dmax * math.sqrt(rng.random())
    else:
        if not 0.0 <= given_length <= dmax:
            raise ValueError(f"given_length={given_length} outside [0, {dmax}]")
        length = given_length
    tagged = int(rng.integers(d.sector_count))

    interferers: list[np.ndarray] = []
    obstacles: list[np.ndarray] = []
    area_full = d.area_dmax
    for s in range(d.sector_count):
        n_i = rng.poisson(lam_i * area_full)
        interferers.append(dmax * np.sqrt(rng.random(n_i)))
        if s == tagged:
            annulus = area_full - d.sector_area(length)
            n_o = rng.poisson(lam_o * annulus)
            sq = length ** 2 + (dmax ** 2 - length ** 2) * rng.random(n_o)
            obstacles.append(np.sqrt(sq))
        else:
            n_o = rng.poisson(lam_o * area_full)
            obstacles.append(dmax * np.sqrt(rng.random(n_o)))
    return SectorTopology(interferer_distances=interferers,
                          obstacle_distances=obstacles,
                          tagged_sector=tagged, link_length=length, dmax=dmax)


def collision_in_topology(topo: SectorTopology) -> bool:
    """True when any sector shows an interferer closer than every obstacle
    of that sector (equidistant pairs count as blocked)."""
    for inter, obst in zip(topo.interferer_distances, topo.obstacle_distances):
        if inter.size == 0:
            continue
        nearest_obstacle = obst.min() if obst.size else np.inf
        if inter.min() < nearest_obstacle:
            return True
    return False


def estimate_sector_los_prob(scenario: Scenario, trials: int, seed: int) -> Estimate:
    """Fraction of sampled regular sectors whose nearest interferer precedes
    the nearest obstacle."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    d = scenario.derive()
    mean_i = d.interferer_density * d.area_dmax
    mean_o = scenario.obstacle_density * d.area_dmax

    hits = 0
    for index, size in _chunks(trials):
        rng = _chunk_rng(seed, index)
        n = rng.poisson(mean_i, size)
        m = rng.poisson(mean_o, size)
        xf = _min_fraction(n, rng)
        yf = _min_fraction(m, rng)
        hits += int(np.count_nonzero(xf < yf))
    return _finish(hits, trials, seed)


def estimate_collision_prob(scenario: Scenario, trials: int, seed: int,
                            given_length: float | None = None) -> Estimate:
    """Fraction of sampled beam topologies exhibiting a LoS interferer in
    any sector; the link length is drawn from its radial law unless given."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    d = scenario.derive()
    lam_i, lam_o = d.interferer_density, scenario.obstacle_density
    area_full = d.area_dmax
    if given_length is not None and not 0.0 <= given_length <= d.dmax:
        raise ValueError(f"given_length={given_length} outside [0, {d.dmax}]")

    hits = 0
    for index, size in _chunks(trials):
        rng = _chunk_rng(seed, index)
        if given_length is None:
            len_frac_sq = rng.random(size)        # (L/dmax)^2 is uniform
        else:
            len_frac_sq = np.full(size, (given_length / d.dmax) ** 2)

        # Sector with the served transmitter: interferers everywhere,
        # obstacles only beyond the link length.
        n = rng.poisson(lam_i * area_full, size)
        m = rng.poisson(lam_o * area_full * (1.0 - len_frac_sq))
        xf = _min_fraction(n, rng)
        y_annulus = _min_fraction(m, rng)
        yf = np.where(np.isinf(y_annulus), np.inf,
                      len_frac_sq + (1.0 - len_frac_sq) * y_annulus)
        collided = xf < yf

        for _ in range(d.sector_count - 1):
            n = rng.poisson(lam_i * area_full, size)
            m = rng.poisson(lam_o * area_full, size)
            xf = _min_fraction(n, rng)
            yf = _min_fraction(m, rng)
            collided |= xf < yf
        hits += int(np.count_nonzero(collided))
    return _finish(hits, trials, seed)
