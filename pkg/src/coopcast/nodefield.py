"""Random node deployments in a disk.

Positions are sampled with the counter-based Philox generator (numpy's
``np.random.Philox``), so a ``(n, R, seed)`` triple reproduces bit-identical
fields on every platform.  Index 0 is always the initiator at the origin.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

__all__ = ["NodeField", "sample_field"]


@dataclass(frozen=True)
class NodeField:
    """Immutable node deployment: positions[0] is the center node."""

    positions: np.ndarray  # (n, 2) float64
    R: float
    seed: int

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise ValueError(f"positions must have shape (n, 2), got {pos.shape}")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @property
    def radii(self) -> np.ndarray:
        return np.hypot(self.positions[:, 0], self.positions[:, 1])

    def density(self) -> float:
        """Node density rho = n / (pi R^2)."""
        return self.n / (np.pi * self.R**2)

    def count_within(self, r: float) -> int:
        """Number of nodes at distance <= r from the origin."""
        if not 0.0 <= r <= self.R:
            raise ValueError(f"r must lie in [0, R], got {r}")
        return int(np.count_nonzero(self.radii <= r))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("index,x,y\n")
        for i, (x, y) in enumerate(self.positions):
            buf.write(f"{i},{float(x)!r},{float(y)!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, R: float, seed: int = 0) -> "NodeField":
        rows = [line.split(",") for line in text.strip().splitlines()[1:]]
        rows.sort(key=lambda row: int(row[0]))
        pos = np.array([[float(r[1]), float(r[2])] for r in rows])
        return cls(positions=pos, R=R, seed=seed)


def sample_field(n: int, R: float, seed: int) -> NodeField:
    """Sample ``n - 1`` i.i.d. uniform points in the disk of radius R plus v0.

    Uniformity via radius = R * sqrt(u), angle = 2 pi v.
    """
    if n < 1:
        raise ValueError(f"need at least the center node, got n={n}")
    if R <= 0:
        raise ValueError(f"disk radius must be positive, got {R}")
    rng = np.random.Generator(np.random.Philox(seed))
    u = rng.random(n - 1)
    v = rng.random(n - 1)
    r = R * np.sqrt(u)
    theta = 2.0 * np.pi * v
    pos = np.empty((n, 2))
    pos[0] = 0.0
    pos[1:, 0] = r * np.cos(theta)
    pos[1:, 1] = r * np.sin(theta)
    return NodeField(positions=pos, R=R, seed=seed)


# Sector construction around a node: the six 60-degree wedges of its unit
# disk, each with the inner disk of radius 1/2 removed, so every sector has
# area (pi - pi/4) / 6 = pi / 8.
_SECTOR_COUNT = 6
_INNER_RADIUS = 0.5


def sector_occupancy(fld: NodeField, center) -> np.ndarray:
    """For each of the six unit-disk sectors around ``center``, whether it
    holds at least one node other than the center itself.

    Returns a boolean array of length 6 (sector k spans angles
    [k*60, (k+1)*60) degrees, radii (1/2, 1]).
    """
    c = np.asarray(center, dtype=float)
    if np.hypot(c[0], c[1]) > fld.R + 1e-12:
        raise ValueError("center lies outside the field disk")
    rel = fld.positions - c
    dist = np.hypot(rel[:, 0], rel[:, 1])
    mask = (dist > _INNER_RADIUS) & (dist <= 1.0)
    ang = np.arctan2(rel[mask, 1], rel[mask, 0]) % (2.0 * np.pi)
    idx = np.minimum((ang / (np.pi / 3.0)).astype(int), _SECTOR_COUNT - 1)
    occupied = np.zeros(_SECTOR_COUNT, dtype=bool)
    occupied[np.unique(idx)] = True
    return occupied
