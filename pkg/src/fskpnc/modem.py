"""M-ary FSK natural mapping on the matched-filter vector channel.

Bit 0 of every symbol is the most significant bit, so ``d([1, 0]) == 2``.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ModulationConfig:
    M: int
    mu: int = field(init=False)

    def __post_init__(self):
        M = int(self.M)
        if M < 2 or M & (M - 1):
            raise ValueError(f"M must be a power of two >= 2, got {self.M}")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "mu", M.bit_length() - 1)

    @property
    def gamma(self):
        """log2(e) / mu, the rate-estimator scale factor."""
        return np.log2(np.e) / self.mu

    def bit_table(self):
        """(M, mu) array; row q holds the bits of symbol q, MSB first."""
        return symbol_bits(np.arange(self.M), self)


def _as_cfg(cfg):
    return cfg if isinstance(cfg, ModulationConfig) else ModulationConfig(cfg)


def map_bits(bits, cfg):
    """Map bit groups to symbol indices.

    ``bits`` has trailing dimension ``mu`` (a 1-D group gives a scalar).
    """
    cfg = _as_cfg(cfg)
    bits = np.asarray(bits)
    if bits.shape[-1] != cfg.mu:
        raise ValueError(f"expected {cfg.mu} bits per symbol, got {bits.shape[-1]}")
    weights = 1 << np.arange(cfg.mu - 1, -1, -1)
    q = (bits.astype(np.int64) & 1) @ weights
    return int(q) if np.ndim(q) == 0 else q


def symbol_bits(q, cfg):
    """Inverse of :func:`map_bits`; returns an array with trailing dim mu."""
    cfg = _as_cfg(cfg)
    q = np.asarray(q, dtype=np.int64)
    shifts = np.arange(cfg.mu - 1, -1, -1)
    return ((q[..., None] >> shifts) & 1).astype(np.int8)


def bits_to_symbols(bits, cfg):
    """Group a flat bit stream (length multiple of mu) into symbol indices."""
    cfg = _as_cfg(cfg)
    bits = np.asarray(bits)
    if bits.size % cfg.mu:
        raise ValueError("bit stream length is not a multiple of mu")
    return map_bits(bits.reshape(-1, cfg.mu), cfg)


def symbols_to_bits(q, cfg):
    return symbol_bits(q, cfg).reshape(-1)


def network_coded_symbol(q1, q2, cfg=None):
    """Index of d(b(q1) xor b(q2)); under natural mapping this is q1 ^ q2."""
    if cfg is not None:
        cfg = _as_cfg(cfg)
        for q in (q1, q2):
            if np.any(np.asarray(q) < 0) or np.any(np.asarray(q) >= cfg.M):
                raise ValueError("symbol index out of range")
    out = np.bitwise_xor(q1, q2)
    return int(out) if np.ndim(out) == 0 else out


def modulate(q, cfg):
    """One-hot FSK vectors; shape (..., M)."""
    cfg = _as_cfg(cfg)
    q = np.asarray(q, dtype=np.int64)
    if np.any(q < 0) or np.any(q >= cfg.M):
        raise ValueError("symbol index out of range")
    return (q[..., None] == np.arange(cfg.M)).astype(float)


def demap_hard(x):
    """Index of the largest entry (inverse of :func:`modulate`)."""
    return np.argmax(np.abs(np.asarray(x)), axis=-1)
