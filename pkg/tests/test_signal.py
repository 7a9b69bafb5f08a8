import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coopcast.signal_model import (
    FieldMap,
    GridSpec,
    SenderSet,
    SignalParams,
    demodulate_numeric,
    expected_phasor_integral,
    field_map,
    mimo_triggered,
    received_phasor,
    snr_received_energy,
    snr_triggered,
    udg_triggered,
)

PARAMS = SignalParams()  # lam=0.1, beta_N0=1, c_f=2


def test_params_validation():
    with pytest.raises(ValueError):
        SignalParams(lam=-0.1)
    with pytest.raises(ValueError):
        SignalParams(lam=0.6, c_f=2.0)  # near-field clamp above 1
    with pytest.raises(ValueError):
        SignalParams(beta_N0=0.0)


def test_single_sender_amplitude():
    # |z| = a / dist beyond the near-field clamp, = a / (c_f lam) inside it.
    s = SenderSet.build([[0.0, 0.0]], amplitudes=[2.0])
    for d in (0.5, 1.0, 3.0):
        z = received_phasor(s, (d, 0.0), PARAMS)
        assert abs(z) == pytest.approx(2.0 / d, rel=1e-12)
    z = received_phasor(s, (0.05, 0.0), PARAMS)
    assert abs(z) == pytest.approx(2.0 / 0.2, rel=1e-12)


def test_single_sender_phase():
    s = SenderSet.build([[0.0, 0.0]])
    d = 1.234
    z = received_phasor(s, (d, 0.0), PARAMS)
    expected = math.e ** (1j * (-2.0 * math.pi * d / PARAMS.lam))
    assert z == pytest.approx(expected / d, rel=1e-12)


def test_model_equivalence_single_sender():
    rng = np.random.Generator(np.random.Philox(5))
    pos = rng.uniform(-2, 2, size=(2000, 2))
    recv = rng.uniform(-2, 2, size=(2000, 2))
    for p, q in zip(pos, recv):
        s = SenderSet.build([p])
        udg = udg_triggered(p, q)
        assert snr_triggered(s, q, PARAMS) == udg
        assert mimo_triggered(s, q, PARAMS) == udg


def test_coherent_equidistant_gain():
    # m aligned senders at equal distance add amplitudes exactly.
    m, d = 7, 3.0
    ang = np.linspace(0, 2 * np.pi, m, endpoint=False)
    pos = d * np.column_stack([np.cos(ang), np.sin(ang)])
    phases = 2.0 * np.pi * d / PARAMS.lam * np.ones(m)
    s = SenderSet.build(pos, phases=phases)
    z = received_phasor(s, (0.0, 0.0), PARAMS)
    assert abs(z) == pytest.approx(m / d, rel=1e-12)


def test_destructive_pair():
    # Two senders offset by half a wavelength cancel almost completely.
    s2 = SenderSet.build([[0.0, 0.0], [0.05, 0.0]])
    s1 = SenderSet.build([[0.0, 0.0]])
    q = (1.025, 0.0)
    power_pair = abs(received_phasor(s2, q, PARAMS)) ** 2
    power_single = abs(received_phasor(s1, q, PARAMS)) ** 2
    assert power_single > 0.9
    assert power_pair < 0.01
    assert mimo_triggered(s1, q, PARAMS) is False  # 1/1.025 < 1 amplitude
    assert snr_received_energy(s2, q, PARAMS) > power_pair


def test_linearity_and_permutation():
    rng = np.random.Generator(np.random.Philox(6))
    pos = rng.uniform(-1, 1, size=(10, 2))
    amp = rng.uniform(0.5, 2.0, size=10)
    ph = rng.uniform(0, 2 * np.pi, size=10)
    q = (4.0, 1.0)
    whole = received_phasor(SenderSet.build(pos, amp, ph), q, PARAMS)
    first = received_phasor(SenderSet.build(pos[:4], amp[:4], ph[:4]), q, PARAMS)
    second = received_phasor(SenderSet.build(pos[4:], amp[4:], ph[4:]), q, PARAMS)
    assert whole == pytest.approx(first + second, rel=1e-12)
    perm = rng.permutation(10)
    shuffled = received_phasor(SenderSet.build(pos[perm], amp[perm], ph[perm]), q, PARAMS)
    assert shuffled == pytest.approx(whole, rel=1e-12)


def test_scaling_identity():
    # Doubling all distances and the wavelength halves the phasor exactly
    # (phases unchanged, amplitudes halved), while clamps stay inactive.
    rng = np.random.Generator(np.random.Philox(12))
    pos = rng.uniform(-1, 1, size=(8, 2))
    ph = rng.uniform(0, 2 * np.pi, size=8)
    q = (5.0, -2.0)
    base = received_phasor(SenderSet.build(pos, phases=ph), q, PARAMS)
    scaled = received_phasor(
        SenderSet.build(2.0 * pos, phases=ph),
        (10.0, -4.0),
        SignalParams(lam=2 * PARAMS.lam, c_f=PARAMS.c_f / 2),
    )
    assert scaled == pytest.approx(base / 2.0, rel=1e-8)


def test_demodulation_oracle():
    rng = np.random.Generator(np.random.Philox(13))
    for _ in range(20):
        m = int(rng.integers(1, 5))
        pos = rng.uniform(-1, 1, size=(m, 2))
        amp = rng.uniform(0.5, 2.0, size=m)
        ph = rng.uniform(0, 2 * np.pi, size=m)
        q = tuple(rng.uniform(2, 5, size=2))
        s = SenderSet.build(pos, amp, ph)
        direct = received_phasor(s, q, PARAMS)
        windowed = demodulate_numeric(s, q, PARAMS, delta=50 * PARAMS.lam, steps=20_000)
        assert windowed == pytest.approx(direct, rel=1e-6)


def test_demodulation_preconditions():
    s = SenderSet.build([[0.0, 0.0]])
    with pytest.raises(ValueError):
        demodulate_numeric(s, (1.0, 0.0), PARAMS, delta=PARAMS.lam)
    with pytest.raises(ValueError):
        demodulate_numeric(s, (1.0, 0.0), PARAMS, delta=50 * PARAMS.lam, steps=100)


def test_random_phase_energy_matches_incoherent_sum():
    rng = np.random.Generator(np.random.Philox(14))
    pos = rng.uniform(-1, 1, size=(30, 2))
    q = (4.0, 0.0)
    target = snr_received_energy(SenderSet.build(pos), q, PARAMS)
    draws = 4000
    phases = rng.uniform(0, 2 * np.pi, size=(draws, 30))
    diff = np.asarray(q) - pos
    dist = np.hypot(diff[:, 0], diff[:, 1])
    base = (1.0 / np.maximum(dist, PARAMS.c_f * PARAMS.lam)) * np.exp(
        -1j * 2.0 * np.pi * dist / PARAMS.lam
    )
    z = (base[None, :] * np.exp(1j * phases)).sum(axis=1)
    mean_power = float(np.mean(np.abs(z) ** 2))
    assert mean_power == pytest.approx(target, rel=0.05)


def test_expected_phasor_integral_converges():
    val = expected_phasor_integral(20.0, 0.5)
    again = expected_phasor_integral(20.0, 0.5)
    assert val == again  # deterministic
    assert abs(val) < math.pi  # |integrand| <= 1/dist, area pi
    with pytest.raises(ValueError):
        expected_phasor_integral(10.0, 0.5)
    with pytest.raises(ValueError):
        expected_phasor_integral(20.0, 3.0)


def test_grid_spec_and_single_cell():
    grid = GridSpec(-1.0, 1.0, -1.0, 1.0, 1, 1)
    xs, ys = grid.centers()
    assert xs.tolist() == [0.0] and ys.tolist() == [0.0]
    fmap = field_map(SenderSet.build([[0.5, 0.0]]), grid, PARAMS, model="SNR")
    assert fmap.values.shape == (1, 1)
    assert fmap.values[0, 0] == pytest.approx(1.0 / 0.5**2)
    with pytest.raises(ValueError):
        GridSpec(1.0, -1.0, 0.0, 1.0, 4, 4)


def test_field_map_angular_contrast():
    # Coherent maps show angular interference structure; incoherent maps are
    # rotationally smooth for the same senders.
    rng = np.random.Generator(np.random.Philox(15))
    pos = rng.uniform(-0.5, 0.5, size=(40, 2))
    s = SenderSet.build(pos)
    ring_r = 3.0
    theta = np.linspace(0, 2 * np.pi, 720, endpoint=False)
    ring = ring_r * np.column_stack([np.cos(theta), np.sin(theta)])
    mimo_vals = np.abs(received_phasor(s, ring, PARAMS)) ** 2
    snr_vals = snr_received_energy(s, ring, PARAMS)
    assert np.std(mimo_vals) / np.mean(mimo_vals) > 5 * np.std(snr_vals) / np.mean(snr_vals)


def test_pgm_output_format():
    grid = GridSpec(-1.0, 1.0, -1.0, 1.0, 4, 3)
    fmap = field_map(SenderSet.build([[0.0, 0.0]]), grid, PARAMS, model="MIMO")
    text = fmap.to_pgm(threshold=1.0)
    lines = text.strip().splitlines()
    assert lines[0] == "P2"
    assert lines[1] == "4 3"
    assert lines[2] == "255"
    values = [int(v) for row in lines[3:] for v in row.split()]
    assert len(values) == 12
    assert all(0 <= v <= 255 for v in values)


def test_field_map_csv():
    grid = GridSpec(0.0, 1.0, 0.0, 1.0, 2, 2)
    fmap = field_map(SenderSet.build([[0.0, 0.0]]), grid, PARAMS, model="SNR")
    lines = fmap.to_csv().strip().splitlines()
    assert lines[0] == "x,y,value"
    assert len(lines) == 5


def test_empty_sender_set():
    s = SenderSet.build(np.empty((0, 2)))
    assert received_phasor(s, (1.0, 0.0), PARAMS) == 0j
    assert snr_received_energy(s, (1.0, 0.0), PARAMS) == 0.0
