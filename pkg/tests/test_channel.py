import numpy as np
import pytest

from fskpnc.channel import (
    LinkBudget,
    complex_noise,
    draw_gain,
    draw_gains,
    ma_stage_dnc,
    ma_stage_lnc,
)
from fskpnc.modem import ModulationConfig, modulate


def test_awgn_gain_unit_amplitude(rng):
    h = draw_gains("awgn", 10_000, rng)
    assert np.allclose(np.abs(h), 1.0)
    g = draw_gain("awgn", rng)
    assert g.alpha == pytest.approx(1.0)
    assert 0 <= g.theta < 2 * np.pi


def test_rayleigh_gain_moments(rng):
    h = draw_gains("rayleigh", 1_000_000, rng)
    a = np.abs(h)
    assert np.mean(a**2) == pytest.approx(1.0, rel=0.01)
    assert np.mean(a) == pytest.approx(np.sqrt(np.pi) / 2, rel=0.01)


@pytest.mark.parametrize("mode", ["awgn", "rayleigh"])
def test_phase_uniform(mode, rng):
    th = np.angle(draw_gains(mode, 200_000, rng)) % (2 * np.pi)
    counts, _ = np.histogram(th, bins=16, range=(0, 2 * np.pi))
    expected = th.size / 16
    chi2 = np.sum((counts - expected) ** 2 / expected)
    assert chi2 < 40  # 15 dof, p ~ 5e-4


def test_gains_independent_per_symbol(rng):
    h = draw_gains("rayleigh", 200_000, rng)
    a2 = np.abs(h) ** 2
    c = np.corrcoef(a2[:-1], a2[1:])[0, 1]
    assert abs(c) < 0.01


def test_noise_covariance(rng):
    N0 = 0.7
    w = complex_noise((100_000, 4), N0, rng)
    cov = (w.conj().T @ w) / w.shape[0]
    assert np.allclose(np.diag(cov).real, N0, rtol=0.02)
    off = cov - np.diag(np.diag(cov))
    assert np.max(np.abs(off)) < 0.02 * N0
    # circular: E[w w^T] = 0
    assert np.max(np.abs((w.T @ w) / w.shape[0])) < 0.02 * N0
    assert np.var(w.real) == pytest.approx(N0 / 2, rel=0.02)


def test_dnc_noiseless_examples(rng):
    cfg = ModulationConfig(2)
    b = LinkBudget(E1=1, E2=1, N0=1e-30)
    y = ma_stage_dnc(modulate(0, cfg), modulate(1, cfg), 1.0, 1.0, b, rng)
    assert np.allclose(y, [1, 1], atol=1e-12)
    y = ma_stage_dnc(modulate(0, cfg), modulate(0, cfg), 1.0, np.exp(1j * np.pi), b, rng)
    assert np.allclose(y, [0, 0], atol=1e-12)


def test_dnc_dimension_mismatch(rng):
    with pytest.raises(ValueError):
        ma_stage_dnc(np.zeros(2), np.zeros(4), 1, 1, LinkBudget(), rng)


def test_dnc_with_silent_terminal_is_single_user():
    cfg = ModulationConfig(4)
    b = LinkBudget(E1=1.3, E2=0.0, N0=0.5)
    q = np.arange(4).repeat(25)
    h = np.exp(1j * np.linspace(0, 6, q.size))
    y1 = ma_stage_dnc(modulate(q, cfg), modulate(q[::-1], cfg), h, h[::-1], b, np.random.default_rng(3))
    y2 = ma_stage_lnc(modulate(q, cfg), h, b, np.random.default_rng(3))
    assert np.allclose(y1, y2)


def test_lnc_moments(rng):
    cfg = ModulationConfig(4)
    b = LinkBudget(E1=2.0, E2=1.0, N0=0.5)
    n = 200_000
    h = draw_gains("rayleigh", n, rng)
    y = ma_stage_lnc(modulate(np.full(n, 1), cfg), h, b, rng)
    assert np.mean(np.abs(y[:, 1]) ** 2) == pytest.approx(2.0 * 1.0 + 0.5, rel=0.01)
    assert np.mean(np.abs(y[:, 0]) ** 2) == pytest.approx(0.5, rel=0.01)
    # terminal 2 uses E2
    y2 = ma_stage_lnc(modulate(np.full(n, 1), cfg), h, b, rng, terminal=2)
    assert np.mean(np.abs(y2[:, 1]) ** 2) == pytest.approx(1.0 + 0.5, rel=0.01)
    quiet = ma_stage_lnc(modulate(2, cfg), 0.8, LinkBudget(E1=1, N0=1e-30), rng)
    assert abs(quiet[2]) == pytest.approx(0.8) and np.allclose(np.delete(quiet, 2), 0, atol=1e-12)


def test_determinism():
    cfg = ModulationConfig(8)
    b = LinkBudget.from_es_n0_db(5.0)
    out = []
    for _ in range(2):
        r = np.random.default_rng(99)
        h1, h2 = draw_gains("rayleigh", 50, r), draw_gains("rayleigh", 50, r)
        q = r.integers(8, size=50)
        out.append(ma_stage_dnc(modulate(q, cfg), modulate(q[::-1], cfg), h1, h2, b, r))
    assert np.array_equal(out[0], out[1])


def test_link_budget_validation():
    with pytest.raises(ValueError):
        LinkBudget(E1=-1)
    with pytest.raises(ValueError):
        LinkBudget(N0=0)
    assert LinkBudget.from_es_n0_db(10.0).N0 == pytest.approx(0.1)
