"""Monte Carlo achievable rates for the MA and BC stages.

Rates are normalised per code bit (bits per symbol divided by mu). DNC::

    R = 1 - gamma E[ max*_{all g} log p(y|g) - max*_{g in g|q} log p(y|g) ]

LNC halves the point-to-point AMI (TDMA); the BC stage is the plain
point-to-point AMI. ``gamma = log2(e)/mu``.
"""

import csv
import math
from dataclasses import asdict, dataclass

import numpy as np

from .channel import LinkBudget, draw_gains, ma_stage_dnc, ma_stage_lnc
from .demod import CsiState, logpdf_single_user, network_coded_logpdf, supersymbol_logpdf
from .modem import ModulationConfig, modulate
from .numerics import logsumexp

PROTOCOLS = ("dnc", "lnc", "bc")
BATCH = 20000


@dataclass
class RatePoint:
    protocol: str
    channel: str
    csi: str
    M: int
    es_n0_db: float
    eb_n0_db: float
    rate: float
    stderr: float
    trials: int
    seed: int = 0


@dataclass
class ExchangeRatePoint:
    R_E: float
    t_m: float
    I_MA: float
    I_BC: float
    t_m_defined: bool = True


def eb_n0_from_es_n0(es_n0_db, rate, mu):
    """Per-information-bit SNR: Es/N0 / (rate * mu), in dB."""
    if rate <= 0:
        return math.inf
    return es_n0_db - 10.0 * math.log10(rate * mu)


def _point_rng(seed, es_n0_db, tag):
    # keyed by SNR so a point is reproducible regardless of the grid around it
    key = int(round((float(es_n0_db) + 1000.0) * 1000.0))
    return np.random.default_rng([int(seed), key, tag])


def _dnc_metric(cfg, channel, csi, budget, n, rng):
    # nats: max*_{all g} - max*_{g|q}, one value per trial
    q1 = rng.integers(cfg.M, size=n)
    q2 = rng.integers(cfg.M, size=n)
    h1 = draw_gains(channel, n, rng)
    h2 = draw_gains(channel, n, rng)
    y = ma_stage_dnc(modulate(q1, cfg), modulate(q2, cfg), h1, h2, budget, rng)
    state = CsiState.from_gains(csi, budget, h1, h2)
    nc = network_coded_logpdf(supersymbol_logpdf(y, state))
    return logsumexp(nc, axis=-1) - nc[np.arange(n), q1 ^ q2]


def _p2p_metric(cfg, channel, csi, budget, n, rng):
    # nats: max*_{q'} log p(y|q') - log p(y|q)
    q = rng.integers(cfg.M, size=n)
    h = draw_gains(channel, n, rng)
    y = ma_stage_lnc(modulate(q, cfg), h, budget, rng)
    state = CsiState.from_gains(csi, budget, h)
    logp = logpdf_single_user(y, state)
    return logsumexp(logp, axis=-1) - logp[np.arange(n), q]


def _mc_mean(metric_fn, trials, rng, *args):
    sums, sqs = [], []
    done = 0
    while done < trials:
        n = min(BATCH, trials - done)
        m = metric_fn(*args, n, rng)
        sums.append(math.fsum(m))
        sqs.append(math.fsum(m * m))
        done += n
    mean = math.fsum(sums) / trials
    var = max(math.fsum(sqs) / trials - mean * mean, 0.0)
    return mean, math.sqrt(var / max(trials - 1, 1))


def _rate_point(protocol, M, channel, csi, es_n0_db, trials, rng=None, seed=0):
    cfg = ModulationConfig(M)
    budget = LinkBudget.from_es_n0_db(es_n0_db)
    if rng is None:
        rng = _point_rng(seed, es_n0_db, PROTOCOLS.index(protocol))
    g = cfg.gamma
    if protocol == "dnc":
        mean, se = _mc_mean(_dnc_metric, trials, rng, cfg, channel, csi, budget)
        rate, err = 1.0 - g * mean, g * se
    else:
        mean, se = _mc_mean(_p2p_metric, trials, rng, cfg, channel, csi, budget)
        scale = 0.5 if protocol == "lnc" else 1.0
        rate, err = scale * (1.0 - g * mean), scale * g * se
    return RatePoint(
        protocol=protocol, channel=channel, csi=csi, M=M, es_n0_db=float(es_n0_db),
        eb_n0_db=eb_n0_from_es_n0(es_n0_db, rate, cfg.mu), rate=float(rate), stderr=float(err),
        trials=trials, seed=seed,
    )


def dnc_ma_rate(M, csi, channel, es_n0_db, trials=100_000, rng=None, seed=0):
    return _rate_point("dnc", M, channel, csi, es_n0_db, trials, rng, seed)


def lnc_ma_rate(M, csi, channel, es_n0_db, trials=100_000, rng=None, seed=0):
    return _rate_point("lnc", M, channel, csi, es_n0_db, trials, rng, seed)


def bc_rate(M, csi, channel, es_n0_db, trials=100_000, rng=None, seed=0):
    return _rate_point("bc", M, channel, csi, es_n0_db, trials, rng, seed)


def rate_curve(protocol, M, channel, csi, es_grid_db, trials=100_000, seed=0):
    return [_rate_point(protocol, M, channel, csi, es, trials, None, seed) for es in es_grid_db]


def min_eb_n0(points):
    """Most energy-efficient point of a rate curve: (rate, eb_n0_db)."""
    best = min((p for p in points if p.rate > 0), key=lambda p: p.eb_n0_db)
    return best.rate, best.eb_n0_db


def exchange_rate(I_MA, I_BC):
    """Best MA/BC time split; equalises t_m I_MA and (1 - t_m) I_BC."""
    if I_MA < 0 or I_BC < 0:
        raise ValueError("AMIs must be nonnegative")
    total = I_MA + I_BC
    if total == 0:
        return ExchangeRatePoint(R_E=0.0, t_m=math.nan, I_MA=0.0, I_BC=0.0, t_m_defined=False)
    return ExchangeRatePoint(R_E=I_MA * I_BC / total, t_m=I_BC / total, I_MA=I_MA, I_BC=I_BC)


def exchange_rate_curve(protocol, M, channel, csi, es_grid_db, trials=100_000, seed=0):
    """Exchange rate versus Es/N0; Eb/N0 is referred to R_E."""
    rows = []
    mu = ModulationConfig(M).mu
    for es in es_grid_db:
        ma = _rate_point(protocol, M, channel, csi, es, trials, None, seed)
        bc = _rate_point("bc", M, channel, csi, es, trials, None, seed)
        ex = exchange_rate(max(ma.rate, 0.0), max(bc.rate, 0.0))
        rows.append({
            "protocol": protocol, "channel": channel, "csi": csi, "M": M,
            "es_n0_db": float(es), "eb_n0_db": eb_n0_from_es_n0(es, ex.R_E, mu),
            "R_E": ex.R_E, "t_m": ex.t_m, "I_MA": ex.I_MA, "I_BC": ex.I_BC,
            "trials": trials, "seed": seed,
        })
    return rows


RATE_COLUMNS = ["protocol", "channel", "csi", "M", "es_n0_db", "eb_n0_db", "rate",
                "stderr", "trials", "seed"]


def write_rate_csv(fh, points, header_comment=None):
    if header_comment:
        fh.write(f"# {header_comment}\n")
    w = csv.DictWriter(fh, fieldnames=RATE_COLUMNS, lineterminator="\n")
    w.writeheader()
    for p in points:
        w.writerow({k: v for k, v in asdict(p).items() if k in RATE_COLUMNS})
