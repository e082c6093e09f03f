"""EXIT-chart analysis and degree-distribution search for the relay code.

A-priori messages follow the consistent-Gaussian model: an LLR for bit b has
mean ``(2b-1) sigma^2/2`` and variance ``sigma^2``, with sigma set from the
target mutual information through ``J``. Mutual information of LLR samples
is measured with the time-average estimator
``1 - E[log2(1 + exp(-L_signed))]``.

Two routes to the demodulator + variable-node curve:

* :func:`vnd_demod_curve` is a direct Monte Carlo simulation (random
  node degrees per bit, fresh channel draws per I_A point).
* :class:`DemodTransfer` caches demodulator output samples per SNR on a grid
  of demodulator a-priori MI and adds the variable-node Gaussian sum by
  Gauss-Hermite quadrature; the threshold search uses this one.
"""

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import LinkBudget, draw_gains, ma_stage_dnc
from .demod import CsiState, network_coded_logpdf, single_user_somap, supersymbol_logpdf
from .ldpc.distribution import DegreeDistribution, InfeasibleDistribution, solve_node_counts
from .modem import ModulationConfig, modulate, symbol_bits

LN2 = math.log(2.0)
SIGMA_MAX = 40.0
GRID_POINTS = 101
MARGIN = 1e-3

_GH_X, _GH_W = np.polynomial.hermite.hermgauss(64)
_GH_W = _GH_W / np.sqrt(np.pi)


def _J_scalar(sigma):
    if sigma <= 0:
        return 0.0
    L = sigma * sigma / 2.0 + sigma * np.sqrt(2.0) * _GH_X
    return float(1.0 - np.dot(_GH_W, np.logaddexp(0.0, -L)) / LN2)


@functools.lru_cache(maxsize=1)
def _J_table():
    s = np.concatenate([np.linspace(0.0, 1.0, 401)[:-1], np.linspace(1.0, SIGMA_MAX, 4000)])
    j = np.array([_J_scalar(x) for x in s])
    j = np.maximum.accumulate(j)
    return s, j


def J(sigma):
    """MI between a bit and its consistent-Gaussian LLR of std ``sigma``."""
    s, j = _J_table()
    return np.interp(np.asarray(sigma, dtype=float), s, j)


def J_inv(I):
    """Inverse of :func:`J`; I = 1 maps to ``SIGMA_MAX``."""
    s, j = _J_table()
    I = np.clip(np.asarray(I, dtype=float), 0.0, 1.0)
    # strictly increasing part only, for interp
    keep = np.concatenate([[True], np.diff(j) > 0])
    out = np.interp(I, j[keep], s[keep], right=SIGMA_MAX)
    return np.where(I >= j[-1], SIGMA_MAX, out)


def mutual_information(llr, bits, weights=None):
    """Time-average MI estimate, clipped to [0, 1]."""
    llr = np.asarray(llr, dtype=float)
    signed = llr * (2.0 * np.asarray(bits) - 1.0)
    loss = np.logaddexp(0.0, -signed) / LN2
    if weights is None:
        val = 1.0 - loss.mean()
    else:
        w = np.broadcast_to(weights, loss.shape)
        val = 1.0 - np.sum(w * loss) / np.sum(w)
    return float(min(max(val, 0.0), 1.0))


def synthesize_apriori(bits, I_A=None, rng=None, sigma=None):
    """Consistent-Gaussian LLRs for ``bits`` at a-priori MI ``I_A``."""
    if sigma is None:
        sigma = J_inv(I_A)
    bits = np.asarray(bits)
    sigma = np.asarray(sigma, dtype=float)
    sign = 2.0 * bits - 1.0
    return sign * sigma**2 / 2.0 + sigma * rng.standard_normal(bits.shape)


@dataclass
class ExitCurve:
    i_a: np.ndarray
    i_e: np.ndarray
    context: dict = field(default_factory=dict)

    def __post_init__(self):
        self.i_a = np.asarray(self.i_a, dtype=float)
        self.i_e = np.clip(np.asarray(self.i_e, dtype=float), 0.0, 1.0)
        if np.any(np.diff(self.i_a) <= 0):
            raise ValueError("I_A grid must be strictly increasing")


@dataclass
class ExitThreshold:
    eb_n0_db: float
    open: bool
    evaluated: dict = field(default_factory=dict)


def default_grid(n=GRID_POINTS):
    return np.linspace(0.0, 1.0, n)


# ---------------------------------------------------------------- check nodes

def _check_update(llr):
    # extrinsic tanh rule over the last axis, library LLR convention
    lam = -llr
    mag = np.clip(np.abs(lam), 1e-25, 60.0)
    ph = np.log1p(2.0 / np.expm1(mag))
    out = np.log1p(2.0 / np.expm1(np.clip(ph.sum(axis=-1), 1e-25, None)))
    neg = np.sum(lam < 0, axis=-1) & 1
    return -np.where(neg, -out, out)


def cnd_curve(d_c, i_a_grid=None, trials=20000, rng=None):
    """Extrinsic MI of a degree-``d_c`` check node (d_c - 1 inputs)."""
    if d_c < 2:
        raise ValueError("check degree must be >= 2")
    grid = default_grid() if i_a_grid is None else np.asarray(i_a_grid, dtype=float)
    rng = np.random.default_rng(0) if rng is None else rng
    i_e = np.empty(grid.size)
    for n, ia in enumerate(grid):
        bits = rng.integers(0, 2, size=(trials, d_c - 1))
        llr = synthesize_apriori(bits, ia, rng)
        parity = np.bitwise_xor.reduce(bits, axis=-1)
        i_e[n] = mutual_information(_check_update(llr), parity)
    return ExitCurve(grid, i_e, {"d_c": d_c, "trials": trials})


@functools.lru_cache(maxsize=32)
def _cnd_reference(d_c, n_grid, trials, seed):
    c = cnd_curve(d_c, default_grid(n_grid), trials, np.random.default_rng([seed, d_c]))
    i_e = np.maximum.accumulate(c.i_e)
    i_e[0] = 0.0
    return c.i_a, i_e


CND_REF_POINTS = 801
CND_REF_TRIALS = 40_000


def cnd_inverse(d_c, x, trials=CND_REF_TRIALS, seed=0):
    """I_A needed at a check node to emit extrinsic MI ``x``.

    Inverted from a dense cached Monte Carlo curve; the check curve is
    strongly convex near zero, so a coarse grid overstates the need there.
    """
    i_a, i_e = _cnd_reference(d_c, CND_REF_POINTS, trials, seed)
    keep = np.concatenate([[True], np.diff(i_e) > 0])
    return np.interp(x, i_e[keep], i_a[keep], right=1.0)


# ------------------------------------------------------ demodulator + VND

def es_n0_for(eb_n0_db, rate, mu):
    return eb_n0_db + 10.0 * math.log10(rate * mu)


def _observations(cfg, channel, csi, es_n0_db, n, rng):
    budget = LinkBudget.from_es_n0_db(es_n0_db)
    q1 = rng.integers(cfg.M, size=n)
    q2 = rng.integers(cfg.M, size=n)
    h1 = draw_gains(channel, n, rng)
    h2 = draw_gains(channel, n, rng)
    y = ma_stage_dnc(modulate(q1, cfg), modulate(q2, cfg), h1, h2, budget, rng)
    nc = network_coded_logpdf(supersymbol_logpdf(y, CsiState.from_gains(csi, budget, h1, h2)))
    return nc, symbol_bits(q1 ^ q2, cfg)


def vnd_demod_curve(V: DegreeDistribution, cfg, i_a_grid=None, trials=20000, rng=None):
    """Monte Carlo EXIT curve of the relay demodulator joined with the variable nodes.

    ``cfg`` holds ``eb_n0_db``, ``M``, ``csi``, ``channel``. Each bit of a
    symbol is given a variable-node degree drawn by node fraction; its
    demodulator prior is the sum of ``d`` check messages, the emitted edge
    message adds ``d - 1`` of them to the demodulator output, and edges are
    weighted by degree.
    """
    mod = ModulationConfig(cfg["M"])
    grid = default_grid() if i_a_grid is None else np.asarray(i_a_grid, dtype=float)
    rng = np.random.default_rng(0) if rng is None else rng
    es = es_n0_for(cfg["eb_n0_db"], V.rate, mod.mu)
    degs = np.array(V.degrees)
    frac = np.array([o for _, o in V.entries], dtype=float) / V.N
    i_e = np.empty(grid.size)
    for n, ia in enumerate(grid):
        nc, bits = _observations(mod, cfg["channel"], cfg["csi"], es, trials, rng)
        d = rng.choice(degs, size=bits.shape, p=frac)
        sa = J_inv(ia)
        v = synthesize_apriori(bits, rng=rng, sigma=np.sqrt(d) * sa)
        z = single_user_somap(nc, v, mod)
        out = z + synthesize_apriori(bits, rng=rng, sigma=np.sqrt(d - 1) * sa)
        i_e[n] = mutual_information(out, bits, weights=d)
    ctx = dict(cfg, V=V.label(), trials=trials)
    return ExitCurve(grid, i_e, ctx)


class DemodTransfer:
    """Cached demodulator output at one SNR, over a grid of prior MI.

    For each prior MI on ``prior_grid`` the sign-aligned extrinsic LLRs of
    the demodulator are stored as ``n_quantiles`` mid-quantiles.
    """

    def __init__(self, M, channel, csi, es_n0_db, trials=20000, seed=0,
                 prior_grid=None, n_quantiles=512):
        self.cfg = ModulationConfig(M)
        self.es_n0_db = es_n0_db
        if self.cfg.mu == 1:
            prior_grid = np.array([0.0])  # binary: output ignores priors
        elif prior_grid is None:
            prior_grid = np.linspace(0.0, 1.0, 21)
        self.prior_grid = np.asarray(prior_grid, dtype=float)
        key = int(round((es_n0_db + 1000.0) * 1000.0))
        rng = np.random.default_rng([seed, key, M])
        probs = (np.arange(n_quantiles) + 0.5) / n_quantiles
        qs = []
        for ip in self.prior_grid:
            nc, bits = _observations(self.cfg, channel, csi, es_n0_db, trials, rng)
            v = synthesize_apriori(bits, ip, rng)
            z = single_user_somap(nc, v, self.cfg)
            signed = (z * (2.0 * bits - 1.0)).ravel()
            qs.append(np.quantile(signed, probs))
        self.samples = np.array(qs)  # (n_prior, n_quantiles)

    def _vnd_mi(self, k, sigma2_extra):
        # MI of (demod output + Gaussian with variance sigma2_extra, consistent)
        z = self.samples[k][:, None]
        m = sigma2_extra / 2.0
        x = z + m + np.sqrt(sigma2_extra) * np.sqrt(2.0) * _GH_X[None, :]
        loss = np.logaddexp(0.0, -x) / LN2 @ _GH_W
        return 1.0 - loss.mean()

    def prior_mi(self, V, i_a):
        """Demodulator prior MI: node-weighted J(sqrt(d) sigma_A)."""
        sa = J_inv(i_a)
        return sum(o / V.N * J(np.sqrt(d) * sa) for d, o in V.entries)

    def vnd_exit(self, V, i_a_grid):
        """I_E of demodulator + variable nodes at each I_A."""
        sa = J_inv(i_a_grid)
        lam = V.edge_fractions()
        out = np.empty(len(i_a_grid))
        g = self.prior_grid
        for n, (ia, s) in enumerate(zip(i_a_grid, sa)):
            ip = float(self.prior_mi(V, ia))
            if g.size == 1:
                ks, ws = [0], [1.0]
            else:
                hi = int(np.clip(np.searchsorted(g, ip), 1, g.size - 1))
                t = (ip - g[hi - 1]) / (g[hi] - g[hi - 1])
                ks, ws = [hi - 1, hi], [1.0 - t, t]
            val = 0.0
            for d, frac in lam.items():
                s2 = (d - 1) * s * s
                val += frac * sum(w * self._vnd_mi(k, s2) for k, w in zip(ks, ws))
            out[n] = val
        return np.clip(out, 0.0, 1.0)


# ------------------------------------------------------------ thresholds

def tunnel_open(vnd_ie, i_a_grid, d_c, margin=MARGIN, cnd_trials=CND_REF_TRIALS, seed=0):
    """True if the VND curve clears the inverted check curve everywhere.

    The required gap is ``margin * (1 - I_A)``: both curves end at (1, 1),
    so a constant gap cannot be met near the top. Points where the VND
    output already exceeds ``1 - margin`` count as open.
    """
    grid = np.asarray(i_a_grid)
    need = cnd_inverse(d_c, grid, trials=cnd_trials, seed=seed)
    ok = (vnd_ie - need > margin * (1.0 - grid)) | (vnd_ie >= 1.0 - margin)
    return bool(np.all(ok[:-1]))


class TransferCache:
    """Shares :class:`DemodTransfer` objects across candidates and SNRs."""

    def __init__(self, M, channel, csi, trials=20000, seed=0):
        self.M, self.channel, self.csi = M, channel, csi
        self.trials, self.seed = trials, seed
        self._cache = {}

    def get(self, es_n0_db):
        key = round(es_n0_db, 6)
        if key not in self._cache:
            self._cache[key] = DemodTransfer(self.M, self.channel, self.csi, es_n0_db,
                                             self.trials, self.seed)
        return self._cache[key]


def _is_open(V, eb, cache, grid, margin, cnd_trials, seed):
    mu = ModulationConfig(cache.M).mu
    tr = cache.get(es_n0_for(eb, V.rate, mu))
    return tunnel_open(tr.vnd_exit(V, grid), grid, V.d_c, margin, cnd_trials, seed)


def exit_threshold(V, cfg_base, snr_grid, trials=20000, rng=None, cache=None,
                   margin=MARGIN, grid_points=GRID_POINTS, cnd_trials=CND_REF_TRIALS):
    """Lowest Eb/N0 on ``snr_grid`` with an open decoding tunnel.

    Bisection over the sorted grid (openness is monotone in SNR). If the
    tunnel is closed even at the top of the grid the result has
    ``open=False`` and ``eb_n0_db = nan``.
    """
    snr = np.asarray(snr_grid, dtype=float)
    if np.any(np.diff(snr) <= 0):
        raise ValueError("snr_grid must be sorted ascending")
    seed = 0 if rng is None else int(rng.integers(2**31))
    if cache is None:
        cache = TransferCache(cfg_base["M"], cfg_base["channel"], cfg_base["csi"], trials, seed)
    grid = default_grid(grid_points)
    evaluated = {}

    def probe(i):
        if i not in evaluated:
            evaluated[i] = _is_open(V, float(snr[i]), cache, grid, margin, cnd_trials, cache.seed)
        return evaluated[i]

    if not probe(snr.size - 1):
        return ExitThreshold(math.nan, False, {float(snr[k]): v for k, v in evaluated.items()})
    if probe(0):
        return ExitThreshold(float(snr[0]), True, {float(snr[k]): v for k, v in evaluated.items()})
    lo, hi = 0, snr.size - 1  # closed at lo, open at hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if probe(mid):
            hi = mid
        else:
            lo = mid
    return ExitThreshold(float(snr[hi]), True, {float(snr[k]): v for k, v in evaluated.items()})


def candidate_degrees(even_only=False, d2_max=99, d3_span=98):
    """(d2, d3) pairs: d2 in {2..99} (or {2, 4, ..., 98}), d3 in d2+1..d2+98."""
    d2s = range(2, d2_max + 1, 2) if even_only else range(2, d2_max + 1)
    for d2 in d2s:
        for d3 in range(d2 + 1, d2 + d3_span + 1):
            yield d2, d3


def feasible_distributions(N, K, d_c, even_only=False):
    out = []
    for d2, d3 in candidate_degrees(even_only):
        try:
            V = solve_node_counts((2, d2, d3), N, K, d_c)
        except InfeasibleDistribution:
            continue
        if max(V.degrees) > N - K:
            continue
        out.append(V)
    return out


def search_distributions(cfg, N, K, d_c, snr_grid, trials=20000, seed=0,
                         even_only=False, max_candidates=None, progress=None):
    """Rank feasible eIRA distributions by EXIT threshold (ascending).

    Returns a list of ``(V, ExitThreshold)``; closed-tunnel candidates sort
    last. Raises ``InfeasibleDistribution`` if nothing is feasible.
    """
    cands = feasible_distributions(N, K, d_c, even_only)
    if not cands:
        raise InfeasibleDistribution("empty feasible set")
    if max_candidates is not None:
        cands = cands[:max_candidates]
    cache = TransferCache(cfg["M"], cfg["channel"], cfg["csi"], trials, seed)
    ranked = []
    for n, V in enumerate(cands):
        th = exit_threshold(V, cfg, snr_grid, trials, cache=cache)
        ranked.append((V, th))
        if progress:
            progress(n + 1, len(cands), V, th)
    ranked.sort(key=lambda p: (not p[1].open, p[1].eb_n0_db if p[1].open else math.inf,
                               p[0].degrees))
    return ranked
