"""Relay soft demodulation for noncoherent M-FSK.

Likelihood tables are stored as log-likelihood ratios against the
noise-only hypothesis, i.e. ``log p(y|g) - log p0(y)`` with
``p0(y) = (pi N0)^-M exp(-||y||^2 / N0)``. That offset is the same for every
hypothesis of one observation, so it cancels in every LLR and every rate
estimate, and it keeps the tables O(SNR) instead of O(||y||^2 / N0).

LLR sign convention, library wide: ``L = log P(b=1) / P(b=0)``.

All functions are vectorised over a leading batch of observations: ``y`` has
shape (..., M); super-symbol tables have shape (..., M, M) indexed [q1, q2];
single-user tables have shape (..., M).
"""

from dataclasses import dataclass

import numpy as np

from .modem import ModulationConfig, _as_cfg
from .numerics import log_bessel_i0, logsumexp

CSI_MODES = ("full", "partial", "none")

# a-priori LLR clamp; keeps the max-star arithmetic finite
LLR_CLAMP = 50.0


@dataclass
class CsiState:
    """Channel knowledge at the relay for a batch of symbol periods.

    ``full`` needs complex ``h1``/``h2``; ``partial`` needs amplitudes
    ``alpha1``/``alpha2``; ``none`` only uses the average energies in
    ``budget``.
    """

    mode: str
    budget: object
    h1: np.ndarray = None
    h2: np.ndarray = None
    alpha1: np.ndarray = None
    alpha2: np.ndarray = None

    def __post_init__(self):
        if self.mode not in CSI_MODES:
            raise ValueError(f"unknown CSI mode {self.mode!r}")
        if self.mode == "full" and (self.h1 is None or self.h2 is None):
            raise ValueError("full CSI requires h1 and h2")
        if self.mode == "partial" and (self.alpha1 is None or self.alpha2 is None):
            raise ValueError("partial CSI requires alpha1 and alpha2")

    @classmethod
    def from_gains(cls, mode, budget, h1, h2=None):
        """Reveal as much of the true gains as ``mode`` allows."""
        h1 = np.asarray(h1)
        h2 = np.zeros_like(h1) if h2 is None else np.asarray(h2)
        if mode == "full":
            return cls(mode, budget, h1=h1, h2=h2)
        if mode == "partial":
            return cls(mode, budget, alpha1=np.abs(h1), alpha2=np.abs(h2))
        return cls(mode, budget)


def _tone_partial(r, amp, N0):
    # log of (1/2pi) int exp(-|y - amp e^{jt}|^2/N0) dt, relative to exp(-|y|^2/N0)
    return -(amp**2) / N0 + log_bessel_i0(2.0 * r * amp / N0)


def _tone_none(r2, E, N0):
    # Rayleigh-averaged version of _tone_partial with E|amp|^2 = E
    return -np.log1p(E / N0) + r2 * E / (N0 * (N0 + E))


def _assemble(diff1, diff2, same, M):
    """Build the (..., M, M) table from per-tone terms.

    ``diff1[..., q]`` is terminal 1's term if it alone occupies tone q,
    ``diff2`` likewise for terminal 2, ``same[..., q]`` the joint term when
    both use tone q.
    """
    table = diff1[..., :, None] + diff2[..., None, :]
    idx = np.arange(M)
    table[..., idx, idx] = same
    return table


def logpdf_full_csi(y, csi):
    """Coherent super-symbol table: ``-||y - m||^2/N0`` up to a shared offset."""
    y = np.asarray(y)
    b = csi.budget
    M = y.shape[-1]
    a1 = (np.sqrt(b.E1) * np.asarray(csi.h1))[..., None]
    a2 = (np.sqrt(b.E2) * np.asarray(csi.h2))[..., None]
    # relative to ||y||^2: occupying tone q with mean a swaps |y_q|^2 for |y_q - a|^2
    r2 = np.abs(y) ** 2
    d1 = (r2 - np.abs(y - a1) ** 2) / b.N0
    d2 = (r2 - np.abs(y - a2) ** 2) / b.N0
    same = (r2 - np.abs(y - a1 - a2) ** 2) / b.N0
    return _assemble(d1, d2, same, M)


def logpdf_partial_csi(y, csi):
    """Phase-marginalised table with known amplitudes.

    Same-tone hypotheses use the composite amplitude
    ``sqrt(E1 a1^2 + E2 a2^2)`` since the relative phase is unknown.
    """
    y = np.asarray(y)
    b = csi.budget
    M = y.shape[-1]
    r = np.abs(y)
    amp1 = (np.sqrt(b.E1) * np.asarray(csi.alpha1, dtype=float))[..., None]
    amp2 = (np.sqrt(b.E2) * np.asarray(csi.alpha2, dtype=float))[..., None]
    ampc = np.sqrt(amp1**2 + amp2**2)
    return _assemble(
        _tone_partial(r, amp1, b.N0),
        _tone_partial(r, amp2, b.N0),
        _tone_partial(r, ampc, b.N0),
        M,
    )


def logpdf_no_csi(y, csi):
    """Rayleigh-marginalised table; only E1, E2, N0 are known."""
    y = np.asarray(y)
    b = csi.budget
    M = y.shape[-1]
    r2 = np.abs(y) ** 2
    return _assemble(
        _tone_none(r2, b.E1, b.N0),
        _tone_none(r2, b.E2, b.N0),
        _tone_none(r2, b.E1 + b.E2, b.N0),
        M,
    )


def supersymbol_logpdf(y, csi):
    """Dispatch on ``csi.mode``."""
    if csi.mode == "full":
        return logpdf_full_csi(y, csi)
    if csi.mode == "partial":
        return logpdf_partial_csi(y, csi)
    return logpdf_no_csi(y, csi)


def logpdf_single_user(y, csi, energy=None, terminal=1):
    """Point-to-point table of shape (..., M) for one terminal.

    ``energy`` defaults to the terminal's energy in ``csi.budget``; the gain
    or amplitude of ``terminal`` is used from ``csi``.
    """
    y = np.asarray(y)
    b = csi.budget
    if energy is None:
        energy = b.E1 if terminal == 1 else b.E2
    if csi.mode == "full":
        h = np.asarray(csi.h1 if terminal == 1 else csi.h2)[..., None]
        r2 = np.abs(y) ** 2
        return (r2 - np.abs(y - np.sqrt(energy) * h) ** 2) / b.N0
    if csi.mode == "partial":
        alpha = np.asarray(csi.alpha1 if terminal == 1 else csi.alpha2, dtype=float)
        return _tone_partial(np.abs(y), (np.sqrt(energy) * alpha)[..., None], b.N0)
    return _tone_none(np.abs(y) ** 2, energy, b.N0)


def network_coded_logpdf(table):
    """Collapse an (..., M, M) super-symbol table to (..., M) over q = q1 ^ q2.

    Entry q is the max-star over the M super-symbols in g|_q.
    """
    table = np.asarray(table)
    M = table.shape[-1]
    q1 = np.arange(M)[:, None]
    q = np.arange(M)[None, :]
    # gathered[..., q1, q] = table[..., q1, q1 ^ q]
    gathered = table[..., q1, q1 ^ q]
    return logsumexp(gathered, axis=-2)


def single_user_somap(logp, v_apriori, cfg):
    """Extrinsic bit LLRs from a per-symbol log-likelihood table.

    ``z_k = max*_{q: b_k=1}[logp(q) + sum_{j!=k} b_j v_j]
          - max*_{q: b_k=0}[...]``
    """
    cfg = _as_cfg(cfg)
    logp = np.asarray(logp, dtype=float)
    v = np.clip(np.asarray(v_apriori, dtype=float), -LLR_CLAMP, LLR_CLAMP)
    if logp.shape[-1] != cfg.M:
        raise ValueError(f"table has {logp.shape[-1]} symbols, expected {cfg.M}")
    if v.shape[-1] != cfg.mu:
        raise ValueError(f"prior has {v.shape[-1]} bits, expected {cfg.mu}")
    bt = cfg.bit_table().astype(float)  # (M, mu)
    v = np.broadcast_to(v, logp.shape[:-1] + (cfg.mu,))
    prior = v @ bt.T  # (..., M): sum_j b_j(q) v_j
    # remove the bit-k term for each k: (..., M, mu)
    metric = (logp + prior)[..., :, None] - bt * v[..., None, :]
    ones = bt.astype(bool)
    neg = -np.inf
    num = logsumexp(np.where(ones, metric, neg), axis=-2)
    den = logsumexp(np.where(~ones, metric, neg), axis=-2)
    return num - den


def dnc_somap(table, v_apriori, cfg):
    """Network-coded bit LLRs from a super-symbol table.

    Because ``b_k(g) = b_k(q1 ^ q2)``, the prior term depends on g only
    through q, so the exact max-star form reduces to a single-user SOMAP over
    the collapsed table.
    """
    cfg = _as_cfg(cfg)
    table = np.asarray(table)
    if table.shape[-2:] != (cfg.M, cfg.M):
        raise ValueError(f"table shape {table.shape} does not match M={cfg.M}")
    return single_user_somap(network_coded_logpdf(table), v_apriori, cfg)


__all__ = [
    "CSI_MODES",
    "CsiState",
    "LLR_CLAMP",
    "ModulationConfig",
    "dnc_somap",
    "logpdf_full_csi",
    "logpdf_no_csi",
    "logpdf_partial_csi",
    "logpdf_single_user",
    "network_coded_logpdf",
    "single_user_somap",
    "supersymbol_logpdf",
]
