"""Iterative relay receiver (BICM-ID).

Per outer iteration: SOMAP with the current priors, deinterleave, ``inner``
decoder sweeps (check messages carried over), subtract the decoder input to
get extrinsic LLRs, interleave them back as the next priors. Priors start
at zero.
"""

from dataclasses import dataclass

import numpy as np

from .demod import dnc_somap, logpdf_single_user, network_coded_logpdf, single_user_somap, supersymbol_logpdf
from .ldpc.codec import SumProductDecoder
from .modem import _as_cfg


class Interleaver:
    """Uniform random permutation of length N.

    ``interleave(x)[i] = x[perm[i]]``; the transmitted bit stream is the
    interleaved codeword.
    """

    def __init__(self, N, seed):
        self.N = int(N)
        self.seed = seed
        self.perm = np.random.default_rng(seed).permutation(self.N)
        self.inv = np.empty_like(self.perm)
        self.inv[self.perm] = np.arange(self.N)

    def interleave(self, x):
        x = np.asarray(x)
        if x.shape[-1] != self.N:
            raise ValueError(f"length {x.shape[-1]} != interleaver length {self.N}")
        return x[..., self.perm]

    def deinterleave(self, x):
        x = np.asarray(x)
        if x.shape[-1] != self.N:
            raise ValueError(f"length {x.shape[-1]} != interleaver length {self.N}")
        return x[..., self.inv]


@dataclass
class ReceiveResult:
    u_hat: np.ndarray
    converged: bool
    iterations: int
    llr_post: np.ndarray
    parts: tuple = None


@dataclass
class ReceiverState:
    v_a: np.ndarray
    z: np.ndarray
    iteration: int = 0


def bicm_id(sym_logp, decoder: SumProductDecoder, pi: Interleaver, cfg, iters=100,
            inner=1, early_exit=True):
    """Run the demod <-> decoder loop on a per-symbol log-likelihood table.

    ``sym_logp`` is (L, M): for DNC the network-coded table, for a single
    user the point-to-point table. Returns a :class:`ReceiveResult`.
    """
    cfg = _as_cfg(cfg)
    sym_logp = np.asarray(sym_logp)
    L = sym_logp.shape[0]
    N = decoder.n
    if L * cfg.mu != N:
        raise ValueError(f"{L} symbols x {cfg.mu} bits != code length {N}")
    if pi.N != N:
        raise ValueError("interleaver length does not match the code")
    if iters < 1:
        raise ValueError("iters must be >= 1")
    K = decoder.pcm.K
    state = ReceiverState(v_a=np.zeros(N), z=np.zeros(N))
    decoder.reset()
    post = None
    converged = False
    for it in range(1, iters + 1):
        state.iteration = it
        state.z = single_user_somap(sym_logp, state.v_a.reshape(L, cfg.mu), cfg).reshape(N)
        z_d = pi.deinterleave(state.z)
        post = decoder.sweep(z_d, inner)
        if early_exit and decoder.syndrome_ok(post):
            converged = True
            break
        if cfg.mu > 1 and it < iters:
            state.v_a = pi.interleave(post - z_d)
    if not early_exit:
        converged = decoder.syndrome_ok(post)
    return ReceiveResult(
        u_hat=(post[:K] > 0).astype(np.int8),
        converged=converged,
        iterations=state.iteration,
        llr_post=post,
    )


def dnc_receive(Y, csi, decoder, pi, cfg, iters=100, inner=1, early_exit=True):
    """Relay estimate of u1 xor u2 from superposed observations ``Y`` (L_M, M)."""
    table = supersymbol_logpdf(Y, csi)
    return bicm_id(network_coded_logpdf(table), decoder, pi, cfg, iters, inner, early_exit)


def single_user_receive(Y, csi, decoder, pi, cfg, terminal=1, iters=100, inner=1,
                        early_exit=True):
    """Point-to-point BICM-ID (LNC half frame, or a terminal in the BC stage)."""
    logp = logpdf_single_user(Y, csi, terminal=terminal)
    return bicm_id(logp, decoder, pi, cfg, iters, inner, early_exit)


def lnc_receive(Y1, Y2, csi1, csi2, decoder, pi, cfg, iters=100, inner=1, early_exit=True):
    """Separate decodes of both half frames, combined as u1_hat xor u2_hat.

    ``csi1`` describes terminal 1's slot (its gain in the ``h1``/``alpha1``
    field), ``csi2`` terminal 2's slot (gain in ``h2``/``alpha2``).
    """
    r1 = single_user_receive(Y1, csi1, decoder, pi, cfg, 1, iters, inner, early_exit)
    r2 = single_user_receive(Y2, csi2, decoder, pi, cfg, 2, iters, inner, early_exit)
    return ReceiveResult(
        u_hat=r1.u_hat ^ r2.u_hat,
        converged=r1.converged and r2.converged,
        iterations=max(r1.iterations, r2.iterations),
        llr_post=np.concatenate([r1.llr_post, r2.llr_post]),
        parts=(r1, r2),
    )


__all__ = [
    "Interleaver",
    "ReceiveResult",
    "ReceiverState",
    "bicm_id",
    "dnc_receive",
    "dnc_somap",
    "lnc_receive",
    "single_user_receive",
]
