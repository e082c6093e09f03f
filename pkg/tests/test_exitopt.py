import math

import numpy as np
import pytest

from fskpnc import exitopt
from fskpnc.exitopt import (
    DemodTransfer,
    ExitCurve,
    J,
    J_inv,
    cnd_curve,
    exit_threshold,
    feasible_distributions,
    mutual_information,
    search_distributions,
    synthesize_apriori,
    vnd_demod_curve,
)
from fskpnc.ldpc import OPTIMIZED, InfeasibleDistribution, dvbs2_distribution


def test_J_known_values_and_inverse():
    assert J(0.0) == 0.0
    assert J(exitopt.SIGMA_MAX) == pytest.approx(1.0, abs=1e-12)
    # independent oracle: direct numerical integration over the Gaussian
    from scipy import integrate
    for s in (0.5, 1.0, 2.0, 4.0):
        f = lambda l: np.exp(-(l - s * s / 2) ** 2 / (2 * s * s)) / np.sqrt(2 * np.pi * s * s) \
            * np.logaddexp(0, -l) / np.log(2)
        ref = 1 - integrate.quad(f, -40 - s * s, 40 + s * s, limit=200)[0]
        assert J(s) == pytest.approx(ref, abs=1e-5)
    I = np.linspace(0.01, 0.99, 50)
    assert np.allclose(J(J_inv(I)), I, atol=1e-6)


def test_synthesizer_self_consistent(rng):
    bits = rng.integers(0, 2, 200_000)
    for ia in (0.05, 0.3, 0.6, 0.9, 0.99):
        L = synthesize_apriori(bits, ia, rng)
        assert mutual_information(L, bits) == pytest.approx(ia, abs=0.01)


def test_synthesizer_consistency_condition(rng):
    # p(L | b=1) = e^L p(-L | b=1): compare the histogram at L and -L
    bits = np.ones(2_000_000, dtype=int)
    L = synthesize_apriori(bits, 0.5, rng)
    edges = np.linspace(-3, 3, 25)
    h, _ = np.histogram(L, edges, density=True)
    mids = 0.5 * (edges[1:] + edges[:-1])
    pos = mids > 0.5
    ratio = h[pos] / h[::-1][pos]
    assert np.allclose(np.log(ratio), mids[pos], atol=0.1)


def test_mi_estimate_bounds(rng):
    bits = rng.integers(0, 2, 1000)
    assert mutual_information(-50 * (2 * bits - 1.0), bits) == 0.0  # wrong signs clip at 0
    assert 0.99 < mutual_information(50 * (2 * bits - 1.0), bits) <= 1.0
    assert mutual_information(np.zeros(1000), bits) == pytest.approx(0.0)


def test_cnd_examples():
    g = np.array([0.0, 0.3, 0.6, 1.0])
    c2 = cnd_curve(2, g, trials=20000)
    assert c2.i_e[0] == pytest.approx(0.0, abs=0.01)
    assert c2.i_e[-1] == pytest.approx(1.0, abs=0.01)
    # a degree-2 check passes its single input through
    assert np.allclose(c2.i_e, g, atol=0.01)
    with pytest.raises(ValueError):
        cnd_curve(1)


def test_cnd_higher_degree_is_weaker():
    g = np.linspace(0.05, 0.95, 19)
    c6 = cnd_curve(6, g, trials=20000, rng=np.random.default_rng(1))
    c11 = cnd_curve(11, g, trials=20000, rng=np.random.default_rng(2))
    informative = c6.i_e > 0.02
    assert informative.sum() >= 8
    assert np.all(c11.i_e[informative] < c6.i_e[informative])
    assert np.all(c11.i_e <= c6.i_e + 0.005)


def test_cnd_against_duality_approximation():
    # ten Brink's duality approximation is close for consistent Gaussian inputs
    g = np.linspace(0.1, 0.9, 9)
    c = cnd_curve(6, g, trials=50000)
    approx = 1 - J(np.sqrt(5) * J_inv(1 - g))
    assert np.allclose(c.i_e, approx, atol=0.03)


def test_exit_curve_validation():
    with pytest.raises(ValueError):
        ExitCurve([0.0, 0.5, 0.5], [0, 0, 0])


def test_vnd_curve_examples():
    V = dvbs2_distribution("3/5", 16200)
    g = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    c = vnd_demod_curve(V, {"eb_n0_db": 6.0, "M": 4, "channel": "awgn", "csi": "partial"},
                        g, trials=20000, rng=np.random.default_rng(0))
    assert c.i_e[-1] >= 0.99
    # monotone within MC noise
    assert np.all(np.diff(c.i_e) > -0.01)
    low = vnd_demod_curve(V, {"eb_n0_db": -40.0, "M": 4, "channel": "awgn", "csi": "partial"},
                          np.array([0.0]), trials=20000)
    assert low.i_e[0] < 0.01


@pytest.mark.parametrize("M,channel,csi,eb", [(4, "awgn", "partial", 7.0), (8, "rayleigh", "none", 11.0),
                                             (2, "awgn", "partial", 10.0)])
def test_fast_transfer_matches_monte_carlo(M, channel, csi, eb):
    # two independent routes to the same VND+demod curve
    V = OPTIMIZED[("awgn", "partial", 4, "3/5")][0]
    g = np.linspace(0.0, 0.95, 8)
    mc = vnd_demod_curve(V, {"eb_n0_db": eb, "M": M, "channel": channel, "csi": csi}, g,
                         trials=40000, rng=np.random.default_rng(5))
    tr = DemodTransfer(M, channel, csi, exitopt.es_n0_for(eb, V.rate, int(np.log2(M))), trials=40000)
    fast = tr.vnd_exit(V, g)
    assert np.allclose(fast, mc.i_e, atol=0.015)


def test_threshold_ordering_across_modulation():
    V = dvbs2_distribution("3/5", 16200)
    th = {}
    for M in (4, 8):
        grid = np.round(np.arange(3.0, 9.01, 0.1), 2)
        th[M] = exit_threshold(V, {"M": M, "channel": "awgn", "csi": "partial"}, grid)
        assert th[M].open
    assert th[8].eb_n0_db < th[4].eb_n0_db
    # tunnel stays open above the threshold
    for M in (4, 8):
        grid = np.array([th[M].eb_n0_db, th[M].eb_n0_db + 0.5])
        assert exit_threshold(V, {"M": M, "channel": "awgn", "csi": "partial"}, grid).eb_n0_db == grid[0]


def test_degenerate_distribution_is_flagged():
    cands = feasible_distributions(16200, 9720, 11)
    V = max(cands, key=lambda v: v.degrees[1])  # heaviest information columns
    th = exit_threshold(V, {"M": 2, "channel": "awgn", "csi": "partial"}, np.arange(0.0, 2.01, 0.5))
    assert not th.open and math.isnan(th.eb_n0_db)
    with pytest.raises(ValueError):
        exit_threshold(V, {"M": 2, "channel": "awgn", "csi": "partial"}, [3.0, 2.0])


def test_feasible_set_contents():
    cands = feasible_distributions(16200, 9720, 11)
    labels = {V.entries for V in cands}
    assert ((2, 6480), (3, 7290), (15, 2430)) in labels
    for V in cands:
        assert sum(d * o for d, o in V.entries) == V.d_c * (V.N - V.K)
    even = feasible_distributions(16200, 9720, 11, even_only=True)
    assert {V.entries for V in even} <= labels
    assert len(even) < len(cands)


def test_search_empty_feasible_set():
    with pytest.raises(InfeasibleDistribution):
        # d_c = 2: check edges equal the accumulator's, nothing left for info columns
        search_distributions({"M": 2, "channel": "awgn", "csi": "partial"}, 100, 50, 2, [5.0])


def test_search_ranking_deterministic():
    cfg = {"M": 8, "channel": "awgn", "csi": "partial"}
    grid = np.round(np.arange(4.5, 6.51, 0.1), 2)
    a = search_distributions(cfg, 16200, 9720, 11, grid, seed=3, max_candidates=4)
    b = search_distributions(cfg, 16200, 9720, 11, grid, seed=3, max_candidates=4)
    assert [(V.entries, t.eb_n0_db) for V, t in a] == [(V.entries, t.eb_n0_db) for V, t in b]
    ths = [t.eb_n0_db for _, t in a if t.open]
    assert ths == sorted(ths)
