"""Round-synchronous broadcast algorithms over a node field.

Four drivers share one round loop: UDG flooding (BFS), plain flooding under
SNR/MIMO reception, the expanding-disk algorithm (only informed nodes within
the schedule radius r_j transmit in round j), and the two-phase MISO
broadcast (UDG bootstrap of a small disk, then phase-synchronized
expanding-disk MIMO rounds).  Reception in a round is always evaluated
against the complete transmitting set of that round; there is no intra-round
chaining.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .signal_model import SenderSet, SignalParams, received_phasor, snr_received_energy

__all__ = [
    "RoundRecord",
    "RoundLog",
    "BroadcastConfig",
    "BootstrapFailure",
    "run_udg_flood",
    "sector_route",
    "run_expanding_disk",
    "run_flood",
    "run_miso_broadcast",
]

_RECEIVER_CHUNK = 4096


class BootstrapFailure(RuntimeError):
    """Phase 1 of the MISO broadcast could not cover its bootstrap disk."""


@dataclass(frozen=True)
class RoundRecord:
    round_index: int
    newly_informed: list[int]
    frontier_radius: float
    senders_active: int
    disk_radius_r_j: float | None = None


@dataclass
class RoundLog:
    rounds: list[RoundRecord] = field(default_factory=list)
    total_rounds: int = 0
    fully_informed: bool = False
    propagation_time: float = 0.0
    schedule_exhausted: bool = False
    round_cap_hit: bool = False
    phase1_rounds: int | None = None
    phase2_rounds: int | None = None

    def informed_indices(self) -> list[int]:
        out = [0]
        for rec in self.rounds:
            out.extend(rec.newly_informed)
        return out

    def to_json(self) -> str:
        doc = {
            "rounds": [
                {
                    "round_index": r.round_index,
                    "newly_informed": sorted(r.newly_informed),
                    "frontier_radius": r.frontier_radius,
                    "senders_active": r.senders_active,
                    "disk_radius_r_j": r.disk_radius_r_j,
                }
                for r in self.rounds
            ],
            "total_rounds": self.total_rounds,
            "fully_informed": self.fully_informed,
            "propagation_time": self.propagation_time,
            "schedule_exhausted": self.schedule_exhausted,
            "round_cap_hit": self.round_cap_hit,
            "phase1_rounds": self.phase1_rounds,
            "phase2_rounds": self.phase2_rounds,
        }
        return json.dumps(doc, indent=2)


@dataclass(frozen=True)
class BroadcastConfig:
    model: str = "SNR"  # "UDG" | "SNR" | "MIMO"
    schedule: str = "expanding_disk"  # "flood" | "expanding_disk"
    radius_schedule: tuple[float, ...] = ()
    params: SignalParams = field(default_factory=SignalParams)
    phase_rule: str = "none"  # "none" | "random" | "center_sync"

    def __post_init__(self):
        if self.model not in ("UDG", "SNR", "MIMO"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.schedule not in ("flood", "expanding_disk"):
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if self.phase_rule not in ("none", "random", "center_sync"):
            raise ValueError(f"unknown phase rule {self.phase_rule!r}")
        if self.schedule == "expanding_disk":
            radii = self.radius_schedule
            if not radii or any(b <= a for a, b in zip(radii, radii[1:])):
                raise ValueError("expanding_disk needs a nonempty increasing schedule")


def _round_cap(n: int) -> int:
    loglog = math.ceil(math.log2(max(math.log2(max(n, 2)), 1.0)))
    return 10 * max(loglog, 1) + 100


def _phases_for(field_, active: np.ndarray, rule: str, lam: float, round_index: int) -> np.ndarray:
    pos = field_.positions[active]
    if rule == "center_sync":
        return -2.0 * np.pi * np.hypot(pos[:, 0], pos[:, 1]) / lam
    if rule == "random":
        rng = np.random.Generator(np.random.Philox(key=field_.seed, counter=round_index))
        return rng.uniform(0.0, 2.0 * np.pi, size=active.size)
    return np.zeros(active.size)


def _evaluate_reception(
    field_,
    active: np.ndarray,
    uninformed: np.ndarray,
    model: str,
    params: SignalParams,
    phase_rule: str,
    round_index: int,
) -> np.ndarray:
    """Indices (into the field) of uninformed nodes triggered this round."""
    if active.size == 0 or uninformed.size == 0:
        return np.empty(0, dtype=int)
    if model == "UDG":
        tree = cKDTree(field_.positions[active])
        hit = tree.query_ball_point(field_.positions[uninformed], r=1.0, return_length=True)
        return uninformed[hit > 0]
    senders = SenderSet.build(
        field_.positions[active],
        phases=_phases_for(field_, active, phase_rule, params.lam, round_index),
    )
    triggered = np.zeros(uninformed.size, dtype=bool)
    for start in range(0, uninformed.size, _RECEIVER_CHUNK):
        chunk = uninformed[start : start + _RECEIVER_CHUNK]
        pts = field_.positions[chunk]
        if model == "SNR":
            level = snr_received_energy(senders, pts, params)
        else:
            level = np.abs(received_phasor(senders, pts, params)) ** 2
        triggered[start : start + _RECEIVER_CHUNK] = level >= params.beta_N0
    return uninformed[triggered]


def _round_travel(field_, active: np.ndarray, newly: np.ndarray) -> float:
    """Distance the signal travelled this round: the farthest newly informed
    node's distance to its nearest active sender."""
    if newly.size == 0 or active.size == 0:
        return 0.0
    tree = cKDTree(field_.positions[active])
    dists, _ = tree.query(field_.positions[newly])
    return float(np.max(dists))


def run_udg_flood(field_, restrict_radius: float | None = None) -> RoundLog:
    """Synchronous BFS from the center node on the unit-disk graph.

    Round t informs exactly BFS layer t.  With ``restrict_radius`` the flood
    only runs among nodes within that distance of the origin.
    """
    if field_.n < 1:
        raise ValueError("empty field")
    radii = field_.radii
    eligible = np.ones(field_.n, dtype=bool)
    if restrict_radius is not None:
        eligible = radii <= restrict_radius
        eligible[0] = True
    idx = np.flatnonzero(eligible)
    tree = cKDTree(field_.positions[idx])
    informed = np.zeros(field_.n, dtype=bool)
    informed[0] = True
    frontier = np.array([0])
    log = RoundLog()
    cap = _round_cap(field_.n)
    round_index = 0
    while frontier.size and round_index < cap:
        round_index += 1
        local_hits = tree.query_ball_point(field_.positions[frontier], r=1.0)
        hit = idx[np.unique(np.concatenate([np.asarray(h, dtype=int) for h in local_hits]))]
        newly = hit[~informed[hit]]
        if newly.size == 0:
            round_index -= 1
            break
        travel = _round_travel(field_, frontier, newly)
        informed[newly] = True
        log.rounds.append(
            RoundRecord(
                round_index=round_index,
                newly_informed=sorted(int(i) for i in newly),
                frontier_radius=float(radii[informed].max()),
                senders_active=int(frontier.size),
            )
        )
        log.propagation_time += travel
        frontier = newly
    log.total_rounds = len(log.rounds)
    log.round_cap_hit = round_index >= cap and frontier.size > 0
    target = eligible if restrict_radius is not None else np.ones(field_.n, dtype=bool)
    log.fully_informed = bool(np.all(informed[target]))
    return log


def sector_route(field_, src: int, dst: int) -> list[int]:
    """Greedy corridor routing from node ``src`` to ``dst`` along their
    connecting line.

    Each hop picks the unit-disk neighbor inside the width-2 corridor with
    the largest forward progress, requiring an advance of at least 1/4.
    Returns the hop sequence including both endpoints, or [] when stuck.
    """
    if not (0 <= src < field_.n and 0 <= dst < field_.n):
        raise ValueError("route endpoints outside field")
    if src == dst:
        return [src]
    pos = field_.positions
    line = pos[dst] - pos[src]
    length = float(np.hypot(*line))
    u = line / length
    proj = (pos - pos[src]) @ u
    perp = np.abs((pos - pos[src]) @ np.array([-u[1], u[0]]))
    tree = cKDTree(pos)
    path = [src]
    current = src
    while True:
        if np.hypot(*(pos[dst] - pos[current])) <= 1.0:
            path.append(dst)
            return path
        neigh = np.asarray(tree.query_ball_point(pos[current], r=1.0), dtype=int)
        ok = neigh[
            (proj[neigh] >= proj[current] + 0.25)
            & (proj[neigh] <= length)
            & (perp[neigh] <= 1.0)
        ]
        if ok.size == 0:
            return []
        best = ok[np.lexsort((ok, -proj[ok]))][0]
        path.append(int(best))
        current = int(best)


def _run_rounds(
    field_,
    config: BroadcastConfig,
    informed: np.ndarray,
    schedule: list[float] | None,
    log: RoundLog,
    start_round: int = 0,
) -> RoundLog:
    radii = field_.radii
    cap = _round_cap(field_.n)
    round_index = start_round
    j = 0
    while round_index - start_round < cap:
        r_j = schedule[j] if schedule is not None else None
        round_index += 1
        if schedule is None:
            active = np.flatnonzero(informed)
        else:
            active = np.flatnonzero(informed & (radii <= r_j))
        uninformed = np.flatnonzero(~informed)
        newly = _evaluate_reception(
            field_, active, uninformed, config.model, config.params,
            config.phase_rule, round_index,
        )
        if schedule is None and newly.size == 0:
            break
        travel = _round_travel(field_, active, newly)
        informed[newly] = True
        log.rounds.append(
            RoundRecord(
                round_index=round_index,
                newly_informed=sorted(int(i) for i in newly),
                frontier_radius=float(radii[informed].max()),
                senders_active=int(active.size),
                disk_radius_r_j=r_j,
            )
        )
        log.propagation_time += travel
        if np.all(informed):
            break
        if schedule is not None:
            if r_j >= field_.R:
                break
            j += 1
            if j >= len(schedule):
                log.schedule_exhausted = True
                break
        elif newly.size == 0:
            break
    else:
        log.round_cap_hit = True
    log.total_rounds = len(log.rounds)
    log.fully_informed = bool(np.all(informed))
    return log


def run_expanding_disk(field_, config: BroadcastConfig) -> RoundLog:
    """Expanding-disk broadcast: round j activates informed nodes within
    the schedule radius r_j of the origin."""
    if config.schedule != "expanding_disk":
        raise ValueError("config.schedule must be expanding_disk")
    informed = np.zeros(field_.n, dtype=bool)
    informed[0] = True
    log = RoundLog()
    if field_.n == 1:
        log.fully_informed = True
        return log
    return _run_rounds(field_, config, informed, list(config.radius_schedule), log)


def run_flood(
    field_, model: str, params: SignalParams, phase_rule: str = "none"
) -> RoundLog:
    """Unrestricted flooding: every informed node transmits every round."""
    config = BroadcastConfig(model=model, schedule="flood", params=params, phase_rule=phase_rule)
    informed = np.zeros(field_.n, dtype=bool)
    informed[0] = True
    log = RoundLog()
    if field_.n == 1:
        log.fully_informed = True
        return log
    return _run_rounds(field_, config, informed, None, log)


def run_miso_broadcast(
    field_, params: SignalParams, c1: float, c2: float
) -> RoundLog:
    """Two-phase MISO broadcast.

    Phase 1 informs the disk of radius 15 r_1 (r_1 = c2/lam) by UDG flooding
    restricted to that disk.  Phase 2 runs expanding-disk MIMO rounds with
    center-synchronized phases and the schedule
    r_{j+1} = (c1/15) rho lam^(1/2) r_j^(3/2) (the 1/15 safety shrink keeps
    receivers at 15x the sender-disk radius).
    """
    if c1 <= 0 or c2 <= 0:
        raise ValueError("c1 and c2 must be positive")
    r1 = c2 / params.lam
    bootstrap_radius = 15.0 * r1
    phase1 = run_udg_flood(field_, restrict_radius=bootstrap_radius)
    if not phase1.fully_informed:
        raise BootstrapFailure(
            f"UDG bootstrap left nodes uninformed inside radius {bootstrap_radius}"
        )
    log = RoundLog(rounds=list(phase1.rounds), propagation_time=phase1.propagation_time)
    log.phase1_rounds = phase1.total_rounds
    if bootstrap_radius >= field_.R:
        log.total_rounds = phase1.total_rounds
        log.phase2_rounds = 0
        log.fully_informed = True
        return log

    rho = field_.density()
    c_eff = c1 / 15.0
    schedule = [bootstrap_radius]
    while schedule[-1] < field_.R and len(schedule) < _round_cap(field_.n):
        nxt = c_eff * rho * math.sqrt(params.lam) * schedule[-1] ** 1.5
        if nxt <= schedule[-1]:
            break
        schedule.append(nxt)

    informed = np.zeros(field_.n, dtype=bool)
    informed[0] = True
    informed[np.asarray(phase1.informed_indices(), dtype=int)] = True
    config = BroadcastConfig(
        model="MIMO",
        schedule="expanding_disk",
        radius_schedule=tuple(schedule),
        params=params,
        phase_rule="center_sync",
    )
    log = _run_rounds(field_, config, informed, schedule, log, start_round=phase1.total_rounds)
    log.phase1_rounds = phase1.total_rounds
    log.phase2_rounds = log.total_rounds - phase1.total_rounds
    return log
