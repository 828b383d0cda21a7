"""Planar topology sampling for the emulator: mutually aligned link pairs
and segment obstacles around a bounded measurement region.

The generation window is the measurement region padded by the interference
range (plus the obstacle reach), and a link is *measured* when its receiver
falls inside the region proper.  Receivers in the region then see their full
interference neighborhood and the measured link lengths follow the radial
law exactly; the measured link count stays Poisson in the region area.
Statistics are reported for measured links only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Scenario

MAX_OBSTACLE_LENGTH_M = 1.0


@dataclass(frozen=True)
class Link:
    """One transmitter-receiver pair; both beams point at each other."""

    tx: tuple[float, float]
    rx: tuple[float, float]

    @property
    def axis(self) -> float:
        """Transmit beam direction (receive beam is the reverse)."""
        return math.atan2(self.rx[1] - self.tx[1], self.rx[0] - self.tx[0])

    @property
    def length(self) -> float:
        return math.hypot(self.rx[0] - self.tx[0], self.rx[1] - self.tx[1])


@dataclass(frozen=True)
class PlanarTopology:
    """Sampled links and segment obstacles on a width x height region.

    ``links`` covers the padded window; ``measured[i]`` marks the links whose
    receiver is inside the region and whose statistics a simulation reports.
    """

    links: list[Link]
    measured: np.ndarray            # bool per link
    obstacles: np.ndarray           # (n, 4) endpoints x1, y1, x2, y2
    region: tuple[float, float]
    pad: float
    beamwidth: float
    dmax: float

    @property
    def area(self) -> float:
        return self.region[0] * self.region[1]

    @property
    def measured_count(self) -> int:
        return int(np.count_nonzero(self.measured))

    def measured_links(self) -> list[Link]:
        return [l for l, m in zip(self.links, self.measured) if m]


def build_topology(scenario: Scenario, region: tuple[float, float],
                   seed: int, pad: float | None = None) -> PlanarTopology:
    """Sample one topology realization.

    Transmitters are Poisson-uniform over the padded window; each receiver
    is placed uniformly within its transmitter's beam disk of radius dmax
    (radial law 2*l/dmax^2).  Obstacle centers are Poisson-uniform over the
    window extended by the obstacle reach, with orientation uniform on
    [0, pi) and length uniform on [0, 1] m.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    width, height = region
    if width <= 0.0 or height <= 0.0:
        raise ValueError("region sides must be > 0")
    d = scenario.derive()
    if pad is None:
        pad = d.dmax
    if pad < 0.0:
        raise ValueError("pad must be >= 0")

    links: list[Link] = []
    gen_w, gen_h = width + 2.0 * pad, height + 2.0 * pad
    n_links = rng.poisson(scenario.tx_density * gen_w * gen_h)
    for _ in range(n_links):
        tx = (rng.random() * gen_w - pad, rng.random() * gen_h - pad)
        theta = rng.random() * 2.0 * math.pi
        length = d.dmax * math.sqrt(rng.random())
        rx = (tx[0] + length * math.cos(theta), tx[1] + length * math.sin(theta))
        links.append(Link(tx=tx, rx=rx))
    measured = np.array([0.0 <= l.rx[0] <= width and 0.0 <= l.rx[1] <= height
                         for l in links], dtype=bool)

    obs_pad = pad + MAX_OBSTACLE_LENGTH_M
    obs_w, obs_h = width + 2.0 * obs_pad, height + 2.0 * obs_pad
    n_obstacles = rng.poisson(scenario.obstacle_density * obs_w * obs_h)
    if n_obstacles:
        cx = rng.random(n_obstacles) * obs_w - obs_pad
        cy = rng.random(n_obstacles) * obs_h - obs_pad
        phi = rng.random(n_obstacles) * math.pi
        half = 0.5 * rng.random(n_obstacles) * MAX_OBSTACLE_LENGTH_M
        dx = half * np.cos(phi)
        dy = half * np.sin(phi)
        obstacles = np.column_stack([cx - dx, cy - dy, cx + dx, cy + dy])
    else:
        obstacles = np.empty((0, 4))

    return PlanarTopology(links=links, measured=measured, obstacles=obstacles,
                          region=region, pad=pad,
                          beamwidth=scenario.antenna.beamwidth, dmax=d.dmax)


def single_link_topology(length: float, beamwidth: float, dmax: float,
                         obstacles: np.ndarray | None = None) -> PlanarTopology:
    """Minimal deterministic topology for protocol-level tests."""
    link = Link(tx=(0.0, 0.0), rx=(length, 0.0))
    return PlanarTopology(
        links=[link], measured=np.array([True]),
        obstacles=obstacles if obstacles is not None else np.empty((0, 4)),
        region=(max(length, 1.0), max(length, 1.0)), pad=0.0,
        beamwidth=beamwidth, dmax=dmax)
