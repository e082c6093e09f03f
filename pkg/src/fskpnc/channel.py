"""Multiple-access vector channel at the relay.

One observation is the length-M complex matched-filter output for one symbol
period::

    y = sqrt(E1) h1 x1 + sqrt(E2) h2 x2 + w,   w ~ CN(0, N0 I_M)

Gains are i.i.d. per symbol period. ``awgn`` keeps |h| = 1 with a uniform
random phase; ``rayleigh`` draws |h| with E|h|^2 = 1; ``coherent`` (|h| = 1,
zero phase) only exists to exercise the full-CSI demodulator.
"""

from dataclasses import dataclass

import numpy as np

CHANNEL_MODES = ("awgn", "rayleigh", "coherent")


@dataclass(frozen=True)
class LinkBudget:
    E1: float = 1.0
    E2: float = 1.0
    N0: float = 1.0

    def __post_init__(self):
        if self.E1 < 0 or self.E2 < 0:
            raise ValueError("symbol energies must be nonnegative")
        if not self.N0 > 0:
            raise ValueError("N0 must be positive")

    @classmethod
    def from_es_n0_db(cls, es_n0_db, E1=1.0, E2=1.0):
        """Equal-energy terminals; N0 chosen so Es/N0 hits the target (Es = E1)."""
        return cls(E1=E1, E2=E2, N0=E1 / 10.0 ** (es_n0_db / 10.0))


@dataclass(frozen=True)
class ChannelGain:
    alpha: float
    theta: float

    @property
    def h(self):
        return self.alpha * np.exp(1j * self.theta)


def draw_gains(mode, size, rng):
    """Complex gains h = alpha e^{j theta}, shape ``size``."""
    if mode not in CHANNEL_MODES:
        raise ValueError(f"unknown channel mode {mode!r}")
    if mode == "coherent":
        return np.ones(size, dtype=complex)
    theta = rng.uniform(0.0, 2.0 * np.pi, size)
    if mode == "awgn":
        alpha = np.ones(size)
    else:
        # p(alpha) = 2 alpha exp(-alpha^2): the modulus of CN(0, 1)
        alpha = np.sqrt(rng.exponential(1.0, size))
    return alpha * np.exp(1j * theta)


def draw_gain(mode, rng):
    h = complex(draw_gains(mode, (), rng))
    return ChannelGain(alpha=abs(h), theta=float(np.angle(h)) % (2.0 * np.pi))


def complex_noise(shape, N0, rng):
    """Circularly-symmetric Gaussian, real and imaginary parts each N(0, N0/2)."""
    s = np.sqrt(N0 / 2.0)
    return s * rng.standard_normal(shape) + 1j * s * rng.standard_normal(shape)


def ma_stage_dnc(x1, x2, h1, h2, budget, rng):
    """Superposed reception of both terminals.

    ``x1``, ``x2`` are one-hot arrays of shape (..., M); ``h1``, ``h2``
    broadcast against the leading dimensions.
    """
    x1 = np.asarray(x1)
    x2 = np.asarray(x2)
    if x1.shape != x2.shape:
        raise ValueError(f"dimension mismatch: {x1.shape} vs {x2.shape}")
    h1 = np.asarray(h1)[..., None]
    h2 = np.asarray(h2)[..., None]
    y = np.sqrt(budget.E1) * h1 * x1 + np.sqrt(budget.E2) * h2 * x2
    return y + complex_noise(y.shape, budget.N0, rng)


def ma_stage_lnc(x, h, budget, rng, terminal=1):
    """Single-terminal reception in that terminal's LNC time slot."""
    x = np.asarray(x)
    energy = budget.E1 if terminal == 1 else budget.E2
    y = np.sqrt(energy) * np.asarray(h)[..., None] * x
    return y + complex_noise(y.shape, budget.N0, rng)
