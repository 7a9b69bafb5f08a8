"""Reception physics for the three communication models.

The MIMO model superposes complex phasors of all senders, the SNR model adds
per-sender received energies, and the UDG model is plain distance <= 1.
Demodulation is evaluated in closed form (the time-domain Fourier integral
collapses to the phasor sum for a steady-state window); the explicit numeric
integral is retained as a test oracle in :func:`demodulate_numeric`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SignalParams",
    "SenderSet",
    "received_phasor",
    "mimo_triggered",
    "snr_received_energy",
    "snr_triggered",
    "udg_triggered",
    "demodulate_numeric",
    "expected_phasor_integral",
    "FieldMap",
    "GridSpec",
    "field_map",
]


@dataclass(frozen=True)
class SignalParams:
    """Physical constants of the channel.

    lam is the wavelength (unit = UDG radius), beta_N0 the product of the
    reception threshold and the noise power, and c_f the near-field cutoff
    multiplier: path-loss denominators are clamped below at c_f * lam.
    """

    lam: float = 0.1
    beta_N0: float = 1.0
    c_f: float = 2.0
    amplitude_default: float = 1.0

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError(f"wavelength must be positive, got {self.lam}")
        if self.c_f * self.lam > 1.0 + 1e-12:
            raise ValueError(
                f"near-field cutoff c_f*lam must not exceed 1, got {self.c_f * self.lam}"
            )
        if self.beta_N0 <= 0:
            raise ValueError(f"beta_N0 must be positive, got {self.beta_N0}")


@dataclass(frozen=True)
class SenderSet:
    """Active transmitters: positions (m, 2), amplitudes (m,), phases (m,)."""

    positions: np.ndarray
    amplitudes: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        pos = np.atleast_2d(np.asarray(self.positions, dtype=float))
        amp = np.asarray(self.amplitudes, dtype=float)
        ph = np.mod(np.asarray(self.phases, dtype=float), 2.0 * np.pi)
        if pos.shape[0] != amp.shape[0] or pos.shape[0] != ph.shape[0]:
            raise ValueError("positions, amplitudes and phases must have equal length")
        if np.any(amp < 0):
            raise ValueError("amplitudes must be nonnegative")
        for name, arr in (("positions", pos), ("amplitudes", amp), ("phases", ph)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def build(cls, positions, amplitudes=None, phases=None) -> "SenderSet":
        pos = np.atleast_2d(np.asarray(positions, dtype=float))
        m = pos.shape[0]
        if amplitudes is None:
            amplitudes = np.ones(m)
        if phases is None:
            phases = np.zeros(m)
        return cls(pos, np.broadcast_to(np.asarray(amplitudes, float), (m,)).copy(),
                   np.broadcast_to(np.asarray(phases, float), (m,)).copy())

    @property
    def m(self) -> int:
        return self.positions.shape[0]


def _clamped_distances(senders: SenderSet, q: np.ndarray, params: SignalParams):
    """(k, m) clamped distances from every receiver to every sender."""
    diff = q[:, None, :] - senders.positions[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    return np.maximum(dist, params.c_f * params.lam), dist


def _receivers(q) -> tuple[np.ndarray, bool]:
    qa = np.asarray(q, dtype=float)
    if qa.ndim == 1:
        return qa[None, :], True
    return qa, False


def received_phasor(senders: SenderSet, q, params: SignalParams):
    """Complex demodulation output z at receiver(s) ``q``.

    z = sum_j (a_j / max(dist_j, c_f lam)) * exp(i(-2 pi dist_j / lam + phi_j)).
    Summation runs in sender-index order with numpy pairwise reduction, so the
    result is reproducible and permutation of equal sender sets is exact after
    canonical sorting.
    """
    qa, single = _receivers(q)
    if senders.m == 0:
        z = np.zeros(qa.shape[0], dtype=complex)
        return complex(z[0]) if single else z
    dclamp, dist = _clamped_distances(senders, qa, params)
    terms = (senders.amplitudes / dclamp) * np.exp(
        1j * (-2.0 * np.pi * dist / params.lam + senders.phases)
    )
    z = terms.sum(axis=1)
    return complex(z[0]) if single else z


def mimo_triggered(senders: SenderSet, q, params: SignalParams):
    """Whether |z|^2 >= beta*N0 (boundary inclusive) at receiver(s) ``q``."""
    z = received_phasor(senders, q, params)
    power = np.abs(np.asarray(z)) ** 2
    out = power >= params.beta_N0
    return bool(out) if np.ndim(z) == 0 else out


def snr_received_energy(senders: SenderSet, q, params: SignalParams):
    """Incoherent received energy RS = sum_j a_j^2 / max(dist_j, c_f lam)^2."""
    qa, single = _receivers(q)
    if senders.m == 0:
        rs = np.zeros(qa.shape[0])
        return float(rs[0]) if single else rs
    dclamp, _ = _clamped_distances(senders, qa, params)
    rs = (senders.amplitudes**2 / dclamp**2).sum(axis=1)
    return float(rs[0]) if single else rs


def snr_triggered(senders: SenderSet, q, params: SignalParams):
    rs = snr_received_energy(senders, q, params)
    out = np.asarray(rs) >= params.beta_N0
    return bool(out) if np.ndim(rs) == 0 else out


def udg_triggered(sender, q) -> bool:
    """Unit-disk reception: distance <= 1."""
    s = np.asarray(sender, dtype=float)
    r = np.asarray(q, dtype=float)
    return bool(np.hypot(*(r - s)) <= 1.0)


def demodulate_numeric(
    senders: SenderSet,
    q,
    params: SignalParams,
    delta: float,
    steps: int = 20_000,
) -> complex:
    """Trapezoidal evaluation of z = (1/delta) int rx(t) e^{-2 pi i t / lam} dt.

    Steady-state oracle for :func:`received_phasor`; requires delta >= 50 lam
    so the window covers many carrier periods, and steps >= 10^4.
    """
    if delta < 50.0 * params.lam:
        raise ValueError(f"integration window delta={delta} must be >= 50*lam")
    if steps < 10_000:
        raise ValueError(f"need at least 10^4 integration steps, got {steps}")
    qa, _ = _receivers(q)
    if senders.m == 0:
        return 0j
    dclamp, dist = _clamped_distances(senders, qa, params)
    # Window chosen in steady state: all senders transmit throughout.
    t = np.linspace(0.0, delta, steps + 1)
    rx = (
        (senders.amplitudes / dclamp[0])[:, None]
        * np.exp(
            1j
            * (
                2.0 * np.pi * (t[None, :] - dist[0][:, None]) / params.lam
                + senders.phases[:, None]
            )
        )
    ).sum(axis=0)
    integrand = rx * np.exp(-1j * 2.0 * np.pi * t / params.lam)
    return complex(np.trapezoid(integrand, t) / delta)


def expected_phasor_integral(
    d_over_r: float,
    lambda_over_r: float,
    initial_cells: int = 256,
    max_refinements: int = 6,
    rel_tol: float = 1e-4,
) -> complex:
    """2-D quadrature of exp(i 2 pi Delta_d / lam) / dist over the unit disk.

    Evaluates s(d/r, lam/r, 1), the expected single-sender phasor integral,
    in polar coordinates with successive grid doubling.  Raises RuntimeError
    if refinements do not converge to ``rel_tol`` relative.
    """
    d = float(d_over_r)
    lam = float(lambda_over_r)
    if d < 15.0:
        raise ValueError(f"d/r must be >= 15, got {d}")
    if lam > 2.0 or lam <= 0.0:
        raise ValueError(f"lambda/r must lie in (0, 2], got {lam}")

    def quad(cells: int) -> complex:
        s = np.linspace(0.0, 1.0, cells + 1)
        theta = np.linspace(0.0, 2.0 * np.pi, 2 * cells, endpoint=False)
        S, T = np.meshgrid(s, theta, indexing="ij")
        x = S * np.cos(T)
        y = S * np.sin(T)
        delta = np.sqrt(x * x + y * y) + np.sqrt((d - x) ** 2 + y * y) - d
        dist = np.sqrt((x - d) ** 2 + y * y)
        integrand = np.exp(1j * 2.0 * np.pi * delta / lam) / dist * S
        # trapezoid in s, midpoint (periodic) in theta
        return complex(np.trapezoid(integrand, s, axis=0).sum() * (2.0 * np.pi / len(theta)))

    prev = quad(initial_cells)
    cells = initial_cells
    for _ in range(max_refinements):
        cells *= 2
        cur = quad(cells)
        if abs(cur - prev) <= rel_tol * abs(cur):
            return cur
        prev = cur
    raise RuntimeError(
        f"phasor-integral quadrature did not converge to {rel_tol} relative "
        f"within {max_refinements} refinements (last cells={cells})"
    )


@dataclass(frozen=True)
class GridSpec:
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid must have at least one cell per axis")
        if self.xmax <= self.xmin or self.ymax <= self.ymin:
            raise ValueError("grid bounds must be nonempty")

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        xs = self.xmin + (np.arange(self.nx) + 0.5) * (self.xmax - self.xmin) / self.nx
        ys = self.ymin + (np.arange(self.ny) + 0.5) * (self.ymax - self.ymin) / self.ny
        return xs, ys


@dataclass(frozen=True)
class FieldMap:
    """Row-major matrix of |z|^2 or RS values at grid cell centers."""

    grid: GridSpec
    values: np.ndarray  # (ny, nx)
    model: str

    def to_csv(self) -> str:
        xs, ys = self.grid.centers()
        lines = ["x,y,value"]
        for iy, yv in enumerate(ys):
            for ix, xv in enumerate(xs):
                lines.append(f"{xv!r},{yv!r},{self.values[iy, ix]!r}")
        return "\n".join(lines) + "\n"

    def to_pgm(self, threshold: float) -> str:
        """Plain (P2) 8-bit PGM, value = round(255 * min(1, v / threshold))."""
        scaled = np.round(255.0 * np.minimum(1.0, self.values / threshold)).astype(int)
        rows = [" ".join(str(v) for v in row) for row in scaled]
        return f"P2\n{self.grid.nx} {self.grid.ny}\n255\n" + "\n".join(rows) + "\n"


def field_map(
    senders: SenderSet, grid: GridSpec, params: SignalParams, model: str = "MIMO"
) -> FieldMap:
    """Sample |z|^2 (MIMO) or RS (SNR) at every grid cell center."""
    if model not in ("MIMO", "SNR"):
        raise ValueError(f"model must be MIMO or SNR, got {model!r}")
    xs, ys = grid.centers()
    X, Y = np.meshgrid(xs, ys)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    if senders.m == 0:
        vals = np.zeros(len(pts))
    elif model == "MIMO":
        vals = np.abs(received_phasor(senders, pts, params)) ** 2
    else:
        vals = snr_received_energy(senders, pts, params)
    return FieldMap(grid=grid, values=vals.reshape(grid.ny, grid.nx), model=model)
