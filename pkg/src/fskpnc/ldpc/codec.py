"""Accumulator encoding and log-domain sum-product decoding.

LLRs cross this module's boundary in the library convention
``L = log P(1)/P(0)``. The decoder internally works with the negated
(``log P(0)/P(1)``) values; the flip happens only in :meth:`SumProductDecoder.sweep`.
"""

import numpy as np

from .pcm import ParityCheckMatrix

_MAG_MIN = 1e-25
_MAG_MAX = 60.0
_IN_MAX = 1e4


def encode(u, pcm: ParityCheckMatrix):
    """Systematic eIRA encoding, c = [u | p].

    ``s = H1 u``, then the staircase gives ``p_0 = s_0``,
    ``p_k = p_{k-1} xor s_k``. ``u`` may be (K,) or (batch, K).
    """
    u = np.asarray(u)
    if u.shape[-1] != pcm.K:
        raise ValueError(f"expected {pcm.K} info bits, got {u.shape[-1]}")
    u_int = (u.astype(np.int64) & 1)
    s = (pcm.H1 @ u_int.T).T % 2
    p = np.cumsum(s, axis=-1) % 2
    return np.concatenate([u_int, p], axis=-1).astype(np.int8)


def _phi(x):
    # phi(x) = -log tanh(x/2); its own inverse on (0, inf)
    return np.log1p(2.0 / np.expm1(x))


class SumProductDecoder:
    """Flooding belief propagation over the Tanner graph of ``pcm``.

    Check-to-variable messages persist between calls to :meth:`sweep`, which
    lets the BICM-ID loop interleave demodulation with single sweeps. Call
    :meth:`reset` before each new frame.
    """

    def __init__(self, pcm: ParityCheckMatrix):
        H = pcm.H.tocsr()
        H.sort_indices()
        self.pcm = pcm
        self.n = H.shape[1]
        self.m = H.shape[0]
        self.e_row = np.repeat(np.arange(self.m), np.diff(H.indptr))
        self.e_col = H.indices.astype(np.int64)
        self.c2v = np.zeros(self.e_col.size)

    def reset(self):
        self.c2v[:] = 0.0

    def _col_sum(self, x):
        return np.bincount(self.e_col, weights=x, minlength=self.n)

    def _row_sum(self, x):
        return np.bincount(self.e_row, weights=x, minlength=self.m)

    def sweep(self, llr, n_sweeps=1):
        """Run ``n_sweeps`` flooding iterations; return a-posteriori LLRs.

        ``llr`` are channel (decoder-input) LLRs in the library convention.
        """
        lam = -np.clip(np.nan_to_num(np.asarray(llr, dtype=float)), -_IN_MAX, _IN_MAX)
        c2v = self.c2v
        for _ in range(n_sweeps):
            total = lam + self._col_sum(c2v)
            v2c = total[self.e_col] - c2v
            ph = _phi(np.clip(np.abs(v2c), _MAG_MIN, _MAG_MAX))
            neg = v2c < 0
            zero = v2c == 0
            row_ph = self._row_sum(ph)
            row_neg = self._row_sum(neg).astype(np.int64) & 1
            row_zero = self._row_sum(zero)
            ext = _phi(np.clip(row_ph[self.e_row] - ph, _MAG_MIN, None))
            # an exactly-zero input elsewhere in the row carries no sign: output 0
            ext[row_zero[self.e_row] - zero > 0] = 0.0
            flip = row_neg[self.e_row] ^ neg
            c2v = np.where(flip, -ext, ext)
        self.c2v = c2v
        return -(lam + self._col_sum(c2v))

    def syndrome_ok(self, post):
        """Zero syndrome and no undecided (exactly zero) posterior."""
        post = np.asarray(post)
        if np.any(post == 0):
            return False
        hard = (post > 0).astype(np.int64)
        return not np.any(self._row_sum(hard[self.e_col]).astype(np.int64) & 1)

    def decode(self, llr, max_iter=100, early_exit=True):
        """Fresh decode. Returns (posterior LLRs, hard bits, converged, iterations)."""
        self.reset()
        post = None
        it = 0
        converged = False
        for it in range(1, max_iter + 1):
            post = self.sweep(llr, 1)
            if early_exit and self.syndrome_ok(post):
                converged = True
                break
        if not early_exit:
            converged = self.syndrome_ok(post)
        return post, (post > 0).astype(np.int8), converged, it


def decode(llr_in, pcm, max_iter=100, early_exit=True):
    """One-shot sum-product decode; see :meth:`SumProductDecoder.decode`.

    Returns ``(llr_out, hard, converged)``.
    """
    post, hard, converged, _ = SumProductDecoder(pcm).decode(llr_in, max_iter, early_exit)
    return post, hard, converged
