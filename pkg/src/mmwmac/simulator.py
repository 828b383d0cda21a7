"""Discrete-event MAC simulator over planar topologies: slotted ALOHA,
round-robin TDMA, CSMA and CSMA/CA with RTS/CTS reservation.

One data packet occupies exactly one slot; data_rate_bps is nominal and only
enters the control/utilization arithmetic.  Which transmitters can interfere
with which receivers is a static property of the topology, so the qualifying
relation is precomputed once and each slot reduces to Bernoulli activity
draws plus a sparse interference lookup.

Every generated link transmits (contention protocols know nothing about the
measurement region) except under TDMA, which as the coordinated protocol
schedules exactly the measured links; statistics are always reported for
measured links only.

Carrier sensing is idealized (a transmitter defers when its transmission
would fail the collision test against currently active ones); physical
carrier sensing is ill-defined under narrow beams, and this choice isolates
the MAC comparison.  The assumption is recorded in SimStats.meta.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .geometry import angle_of, distance, los_test, los_test_batch, within_beam
from .topology import Link, PlanarTopology

_BLOCK_SLOTS = 1024
_PAIR_CHUNK = 512

# Event ordering within one timestamp: transmission ends settle first, then
# arrivals enqueue, then channel-access attempts observe the result.
_EV_TX_END = 0
_EV_ARRIVAL = 1
_EV_ATTEMPT = 2


class ConfigError(ValueError):
    """Inconsistent MAC timing or protocol parameters."""


@dataclass(frozen=True)
class SlottedAloha:
    tx_prob: float = 1.0


@dataclass(frozen=True)
class Tdma:
    pass


@dataclass(frozen=True)
class Csma:
    cw_min: int = 16
    cw_max: int = 1024


@dataclass(frozen=True)
class CsmaCa:
    cw_min: int = 16
    cw_max: int = 1024


Protocol = SlottedAloha | Tdma | Csma | CsmaCa


@dataclass(frozen=True)
class MacConfig:
    """MAC protocol selection plus the timing/traffic constants.

    cbr_bps may be math.inf for saturated sources (every link always has a
    packet queued).
    """

    protocol: Protocol
    slot_us: float = 50.0
    packet_bytes: int = 10_000
    data_rate_bps: float = 1.5e9
    control_rate_bps: float = 27.7e6
    sifs_us: float = 2.5
    difs_us: float = 5.5
    control_frame_bytes: int = 30
    cbr_bps: float = 384e6
    include_ack: bool = False

    def __post_init__(self):
        if self.slot_us <= 0.0 or self.sifs_us < 0.0 or self.difs_us < 0.0:
            raise ConfigError("slot must be > 0 and guard times >= 0")
        if self.packet_bytes <= 0 or self.control_frame_bytes <= 0:
            raise ConfigError("frame sizes must be > 0")
        if self.data_rate_bps <= 0.0 or self.control_rate_bps <= 0.0:
            raise ConfigError("rates must be > 0")
        if not (self.cbr_bps > 0.0):
            raise ConfigError("cbr_bps must be > 0 (math.inf saturates)")
        if self.control_airtime_us >= self.slot_us:
            raise ConfigError("control frames must be shorter than a slot")
        p = self.protocol
        if isinstance(p, SlottedAloha) and not 0.0 <= p.tx_prob <= 1.0:
            raise ConfigError("tx_prob must be in [0, 1]")
        if isinstance(p, (Csma, CsmaCa)):
            if p.cw_min < 1 or p.cw_max < p.cw_min:
                raise ConfigError("need 1 <= cw_min <= cw_max")

    @property
    def control_airtime_us(self) -> float:
        return self.control_frame_bytes * 8.0 / self.control_rate_bps * 1e6

    @property
    def data_airtime_us(self) -> float:
        """Nominal airtime of one data frame; used for utilization
        arithmetic only (on the air a packet occupies one slot)."""
        return self.packet_bytes * 8.0 / self.data_rate_bps * 1e6

    @property
    def saturated(self) -> bool:
        return math.isinf(self.cbr_bps)

    @property
    def arrivals_per_slot(self) -> float:
        return self.cbr_bps * self.slot_us * 1e-6 / (self.packet_bytes * 8.0)


def csma_ca_cycle_us(mac: MacConfig) -> float:
    """Channel-reservation overhead around each data frame: one RTS, one
    CTS, two SIFS and one DIFS (plus SIFS + ACK when acknowledged)."""
    cycle = mac.difs_us + 2.0 * mac.sifs_us + 2.0 * mac.control_airtime_us
    if mac.include_ack:
        cycle += mac.sifs_us + mac.control_airtime_us
    return cycle


@dataclass
class PerLinkStats:
    delivered: int = 0
    collided: int = 0
    blocked: int = 0
    attempts: int = 0
    mean_delay_slots: float = math.nan


@dataclass
class SimStats:
    """Counters and delay samples for the measured links of one run."""

    per_link: list[PerLinkStats]
    total_slots: int
    network_throughput: float          # delivered packets per slot
    ase: float                         # packets per slot per m^2
    delay_samples: np.ndarray          # slots, successful packets only
    meta: dict = field(default_factory=dict)

    @property
    def per_link_throughput(self) -> float:
        if not self.per_link:
            return 0.0
        return self.network_throughput / len(self.per_link)


def collision_check(receiver: tuple[float, float], intended_tx: tuple[float, float],
                    active_txs: list[Link], topology: PlanarTopology,
                    dmax: float) -> bool:
    """Whether any active transmitter other than the intended one ruins
    reception at ``receiver``: mutual main-lobe alignment, within the
    interference range, line of sight -- or aiming at the same receiver."""
    rx_axis = angle_of(receiver, intended_tx)
    for link in active_txs:
        if link.tx == intended_tx:
            continue
        if link.rx == receiver:
            return True
        if distance(link.tx, receiver) > dmax:
            continue
        if not within_beam(link.axis, topology.beamwidth, link.tx, receiver):
            continue
        if not within_beam(rx_axis, topology.beamwidth, receiver, link.tx):
            continue
        if los_test(link.tx, receiver, topology.obstacles):
            return True
    return False


def interference_map(topology: PlanarTopology) -> tuple[np.ndarray, np.ndarray]:
    """Static qualifying relation of a topology.

    Returns (own_los, qualifies): own_los[i] marks links with an unblocked
    path, qualifies[j, i] marks transmitter j as able to ruin reception at
    receiver i when both are active.
    """
    n = len(topology.links)
    own_los = np.zeros(n, dtype=bool)
    qualifies = np.zeros((n, n), dtype=bool)
    if n == 0:
        return own_los, qualifies

    tx = np.array([l.tx for l in topology.links])
    rx = np.array([l.rx for l in topology.links])
    axes = np.array([l.axis for l in topology.links])
    own_los[:] = los_test_batch(tx, rx, topology.obstacles)

    # Beam membership via dot products: angle(v, axis) <= beamwidth/2 is
    # dot(v, unit_axis) >= |v| * cos(beamwidth/2), cos being decreasing.
    cos_half = math.cos(0.5 * topology.beamwidth)
    ux = np.cos(axes)
    uy = np.sin(axes)

    for j0 in range(0, n, _PAIR_CHUNK):
        j1 = min(j0 + _PAIR_CHUNK, n)
        dx = rx[None, :, 0] - tx[j0:j1, None, 0]          # tx_j -> rx_i
        dy = rx[None, :, 1] - tx[j0:j1, None, 1]
        dist = np.sqrt(dx * dx + dy * dy)
        lim = dist * cos_half
        # transmit beam of j covers rx_i; receive beam of i points back
        # along axis_i, and the vector rx_i -> tx_j is the negated dx, dy,
        # so both conditions share the same dot-product sign.
        dot_tx = dx * ux[j0:j1, None] + dy * uy[j0:j1, None]
        dot_rx = dx * ux[None, :] + dy * uy[None, :]
        cand = (dist <= topology.dmax) & (dot_tx >= lim) & (dot_rx >= lim)
        jj, ii = np.nonzero(cand)
        jj = jj + j0
        keep = jj != ii
        jj, ii = jj[keep], ii[keep]
        if jj.size:
            clear = los_test_batch(tx[jj], rx[ii], topology.obstacles)
            qualifies[jj[clear], ii[clear]] = True
    return own_los, qualifies


def _empty_stats(total_slots: int, area: float, meta: dict) -> SimStats:
    return SimStats(per_link=[], total_slots=total_slots, network_throughput=0.0,
                    ase=0.0, delay_samples=np.empty(0), meta=meta)


def _assemble(topology, delivered, collided, blocked, attempts, delay_sum,
              delay_cnt, delay_samples, total_slots, meta) -> SimStats:
    per_link = []
    for i in np.nonzero(topology.measured)[0]:
        mean_delay = delay_sum[i] / delay_cnt[i] if delay_cnt[i] else math.nan
        per_link.append(PerLinkStats(delivered=int(delivered[i]),
                                     collided=int(collided[i]),
                                     blocked=int(blocked[i]),
                                     attempts=int(attempts[i]),
                                     mean_delay_slots=mean_delay))
    network = float(delivered[topology.measured].sum()) / total_slots
    return SimStats(per_link=per_link, total_slots=total_slots,
                    network_throughput=network, ase=network / topology.area,
                    delay_samples=np.asarray(delay_samples, dtype=float),
                    meta=meta)


def _run_slotted(topology: PlanarTopology, mac: MacConfig, duration_s: float,
                 seed: int, imap=None) -> SimStats:
    slot_us = mac.slot_us
    total_slots = int(round(duration_s * 1e6 / slot_us))
    if total_slots < 1:
        raise ConfigError("duration shorter than one slot")
    n = len(topology.links)
    meta = {"protocol": type(mac.protocol).__name__, "engine": "slotted"}
    if n == 0:
        return _empty_stats(total_slots, topology.area, meta)

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    own_los, qualifies = imap if imap is not None else interference_map(topology)

    delivered = np.zeros(n, dtype=np.int64)
    collided = np.zeros(n, dtype=np.int64)
    blocked = np.zeros(n, dtype=np.int64)
    attempts = np.zeros(n, dtype=np.int64)
    delay_sum = np.zeros(n)
    delay_cnt = np.zeros(n, dtype=np.int64)
    delay_samples: list[float] = []

    aloha = isinstance(mac.protocol, SlottedAloha)

    if aloha and mac.saturated:
        # Saturated ALOHA has no queue coupling: blocks of slots reduce to
        # one Bernoulli matrix and one sparse product, and only the measured
        # receivers' interference columns are needed.
        meas = np.nonzero(topology.measured)[0]
        q_meas_t = sparse.csr_matrix(qualifies[:, meas].T.astype(np.float32))
        own_meas = own_los[meas][:, None]
        rho = mac.protocol.tx_prob
        done = 0
        while done < total_slots:
            size = min(_BLOCK_SLOTS, total_slots - done)
            act = rng.random((n, size), dtype=np.float32) < rho   # (n, slots)
            interfered = (q_meas_t @ act.astype(np.float32)) > 0.0
            act_meas = act[meas]
            ok = act_meas & own_meas
            delivered[meas] += (ok & ~interfered).sum(axis=1)
            collided[meas] += (ok & interfered).sum(axis=1)
            blocked[meas] += (act_meas & ~own_meas).sum(axis=1)
            attempts[meas] += act_meas.sum(axis=1)
            done += size
        return _assemble(topology, delivered, collided, blocked, attempts,
                         delay_sum, delay_cnt, delay_samples, total_slots, meta)

    # interference seen at i from activity vector a is (Q^T a)_i
    q_t = sparse.csr_matrix(qualifies.T.astype(np.float32))

    queue = np.zeros(n, dtype=np.int64)
    credit = np.zeros(n)
    waiting: list[deque] = [deque() for _ in range(n)]
    rate = 0.0 if mac.saturated else mac.arrivals_per_slot
    all_backlogged = np.ones(n, dtype=bool)
    measured_idx = np.nonzero(topology.measured)[0]

    bern_block = np.empty((0, n))
    block_pos = 0
    for s in range(total_slots):
        if not mac.saturated:
            credit += rate
            fresh = np.floor(credit).astype(np.int64)
            credit -= fresh
            if fresh.any():
                queue += fresh
                for i in np.nonzero(fresh)[0]:
                    waiting[i].extend([s] * int(fresh[i]))
        backlogged = all_backlogged if mac.saturated else queue > 0

        if aloha:
            if block_pos >= len(bern_block):
                bern_block = rng.random((_BLOCK_SLOTS, n))
                block_pos = 0
            act = (bern_block[block_pos] < mac.protocol.tx_prob) & backlogged
            block_pos += 1
            interfered = (q_t @ act.astype(np.float32)) > 0.0
            success = act & own_los & ~interfered
            fail_col = act & own_los & interfered
            fail_blk = act & ~own_los
        else:
            # Round-robin TDMA over the measured links, whatever their
            # queues; the coordinated protocol silences everyone else.
            act = np.zeros(n, dtype=bool)
            if measured_idx.size:
                holder = measured_idx[s % measured_idx.size]
                act[holder] = backlogged[holder]
            success = act & own_los
            fail_col = np.zeros(n, dtype=bool)
            fail_blk = act & ~own_los

        attempts += act
        delivered += success
        collided += fail_col
        blocked += fail_blk
        if not mac.saturated and success.any():
            for i in np.nonzero(success)[0]:
                born = waiting[i].popleft()
                d_slots = float(s - born + 1)
                delay_sum[i] += d_slots
                delay_cnt[i] += 1
                if topology.measured[i]:
                    delay_samples.append(d_slots)
            queue[success] -= 1

    return _assemble(topology, delivered, collided, blocked, attempts,
                     delay_sum, delay_cnt, delay_samples, total_slots, meta)


class _CsmaLinkState:
    __slots__ = ("queue", "busy", "stage", "hit")

    def __init__(self):
        self.queue: deque = deque()
        self.busy = False          # committed to a handshake/transmission
        self.stage = 0             # backoff doubling stage
        self.hit = False           # current data frame has seen interference


def _run_csma(topology: PlanarTopology, mac: MacConfig, duration_s: float,
              seed: int, imap=None) -> SimStats:
    with_rts = isinstance(mac.protocol, CsmaCa)
    slot_us = mac.slot_us
    total_slots = int(round(duration_s * 1e6 / slot_us))
    if total_slots < 1:
        raise ConfigError("duration shorter than one slot")
    horizon = total_slots * slot_us
    n = len(topology.links)
    meta = {
        "protocol": type(mac.protocol).__name__,
        "engine": "event",
        "sensing": "ideal: defer when own transmission would fail the "
                   "collision test against active ones",
    }
    if n == 0:
        return _empty_stats(total_slots, topology.area, meta)

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    own_los, qualifies = imap if imap is not None else interference_map(topology)
    cw_min = mac.protocol.cw_min
    cw_max = mac.protocol.cw_max
    t_ctrl = mac.control_airtime_us
    pre_data = 2.0 * mac.sifs_us + 2.0 * t_ctrl + mac.difs_us if with_rts else 0.0
    tail = mac.sifs_us + t_ctrl if (with_rts and mac.include_ack) else 0.0

    delivered = np.zeros(n, dtype=np.int64)
    collided = np.zeros(n, dtype=np.int64)
    blocked = np.zeros(n, dtype=np.int64)
    attempts = np.zeros(n, dtype=np.int64)
    delay_sum = np.zeros(n)
    delay_cnt = np.zeros(n, dtype=np.int64)
    delay_samples: list[float] = []

    states = [_CsmaLinkState() for _ in range(n)]
    # link -> (data_start, data_end); reservations: link -> (resv_start, end)
    active: dict[int, tuple[float, float]] = {}
    reservations: dict[int, tuple[float, float]] = {}

    events: list[tuple[float, int, int, int]] = []
    seq = 0

    def push(time: float, kind: int, link: int):
        nonlocal seq
        heapq.heappush(events, (time, kind, link, seq))
        seq += 1

    if mac.saturated:
        for i in range(n):
            states[i].queue.append(0.0)
            push(0.0, _EV_ATTEMPT, i)
    else:
        interval = mac.packet_bytes * 8.0 / mac.cbr_bps * 1e6
        for i in range(n):
            push(0.0, _EV_ARRIVAL, i)

    def sense_busy(i: int, now: float) -> float | None:
        """Latest end time of whatever forbids i from starting, or None."""
        worst = None
        for j, (start, end) in active.items():
            if j != i and start <= now < end and qualifies[j, i]:
                worst = end if worst is None else max(worst, end)
        if with_rts:
            for j, (start, end) in reservations.items():
                if j != i and start <= now < end \
                        and (qualifies[i, j] or qualifies[j, i]):
                    worst = end if worst is None else max(worst, end)
        return worst

    def start_data(i: int, data_start: float, data_end: float):
        st = states[i]
        st.hit = False
        for j, (start, end) in active.items():
            if start < data_end and data_start < end:
                if qualifies[j, i]:
                    st.hit = True
                if qualifies[i, j]:
                    states[j].hit = True
        active[i] = (data_start, data_end)

    while events:
        time, kind, i, _ = heapq.heappop(events)
        if time >= horizon:
            break
        st = states[i]

        if kind == _EV_ARRIVAL:
            st.queue.append(time)
            push(time + interval, _EV_ARRIVAL, i)
            if not st.busy:
                push(time, _EV_ATTEMPT, i)

        elif kind == _EV_ATTEMPT:
            if st.busy or not st.queue:
                continue
            busy_until = sense_busy(i, time)
            if busy_until is not None:
                st.stage = min(st.stage + 1, 30)
                cw = min(cw_min << st.stage, cw_max)
                back = float(rng.integers(0, cw)) * slot_us
                push(busy_until + back, _EV_ATTEMPT, i)
                continue
            st.busy = True
            data_start = time + pre_data
            data_end = data_start + slot_us
            if with_rts:
                cts_done = time + 2.0 * mac.sifs_us + 2.0 * t_ctrl
                reservations[i] = (cts_done, data_end + tail)
            start_data(i, data_start, data_end)
            push(data_end + tail, _EV_TX_END, i)

        else:  # _EV_TX_END
            attempts[i] += 1
            active.pop(i, None)
            reservations.pop(i, None)
            st.busy = False
            if not own_los[i]:
                blocked[i] += 1
                push(time, _EV_ATTEMPT, i)    # retries forever, stays blocked
            elif st.hit:
                collided[i] += 1
                st.stage = min(st.stage + 1, 30)
                cw = min(cw_min << st.stage, cw_max)
                back = float(rng.integers(0, cw)) * slot_us
                push(time + back, _EV_ATTEMPT, i)
            else:
                delivered[i] += 1
                born = st.queue.popleft()
                d_slots = (time - born) / slot_us
                delay_sum[i] += d_slots
                delay_cnt[i] += 1
                if topology.measured[i]:
                    delay_samples.append(d_slots)
                st.stage = 0
                if mac.saturated:
                    st.queue.append(time)
                if st.queue:
                    push(time, _EV_ATTEMPT, i)

    return _assemble(topology, delivered, collided, blocked, attempts,
                     delay_sum, delay_cnt, delay_samples, total_slots, meta)


def run(topology: PlanarTopology, mac: MacConfig, duration_s: float,
        seed: int, imap: tuple[np.ndarray, np.ndarray] | None = None) -> SimStats:
    """Simulate one topology under one MAC configuration.

    ``imap`` may carry a precomputed interference_map(topology) when several
    runs share a topology.  Identical (topology, mac, duration_s, seed)
    produce identical SimStats.
    """
    if duration_s <= 0.0:
        raise ConfigError("duration must be > 0")
    if isinstance(mac.protocol, (SlottedAloha, Tdma)):
        return _run_slotted(topology, mac, duration_s, seed, imap)
    return _run_csma(topology, mac, duration_s, seed, imap)
