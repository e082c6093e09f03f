"""Random eIRA parity-check matrices ``H = [H1 | H2]``.

H2 is the (N-K)x(N-K) dual-diagonal accumulator: ones at (i, i) and
(i, i-1), so the last parity column has weight 1.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .distribution import DegreeDistribution


@dataclass(frozen=True)
class ParityCheckMatrix:
    """Sparse binary H in CSR form, plus the info length K.

    Columns [0, K) are H1 (info bits), columns [K, N) the accumulator.
    """

    H: sp.csr_matrix
    K: int

    @property
    def N(self):
        return self.H.shape[1]

    @property
    def M(self):
        return self.H.shape[0]

    @property
    def H1(self):
        return self.H[:, : self.K]

    def column_weights(self):
        return np.asarray(self.H.sum(axis=0)).ravel().astype(int)

    def row_weights(self):
        return np.asarray(self.H.sum(axis=1)).ravel().astype(int)

    def degree_histogram(self, weight1_as_2=True):
        """{degree: count} over all columns.

        The weight-1 final accumulator column is counted in the degree-2
        pool by default, matching how distributions count N-K parity nodes.
        """
        w = self.column_weights()
        if weight1_as_2:
            w = w.copy()
            w[self.K:] = np.maximum(w[self.K:], 2)
        vals, counts = np.unique(w, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}

    def syndrome(self, c):
        c = np.asarray(c, dtype=np.int64)
        return (self.H @ c) % 2

    def has_accumulator(self):
        H2 = self.H[:, self.K:]
        if H2.shape != (self.M, self.M):
            return False
        return (H2 != accumulator(self.M)).nnz == 0

    def __eq__(self, other):
        if not isinstance(other, ParityCheckMatrix):
            return NotImplemented
        return (
            self.K == other.K
            and self.H.shape == other.H.shape
            and (self.H != other.H).nnz == 0
        )

    __hash__ = None


def accumulator(m):
    """Dual-diagonal (staircase) H2 of size m x m."""
    rows = np.concatenate([np.arange(m), np.arange(1, m)])
    cols = np.concatenate([np.arange(m), np.arange(m - 1)])
    return sp.csr_matrix((np.ones(rows.size, dtype=np.uint8), (rows, cols)), shape=(m, m))


def _row_targets(T, m, rng):
    # spread T ones over m rows as evenly as possible, remainders at random rows
    base, rem = divmod(T, m)
    targets = np.full(m, base, dtype=np.int64)
    if rem:
        targets[rng.choice(m, size=rem, replace=False)] += 1
    return targets


def generate_pcm(V: DegreeDistribution, rng, avoid_4cycles=True, max_tries=30):
    """Realise a random eIRA parity-check matrix for distribution ``V``.

    H1 columns get exactly the info-column degrees of ``V``. Ones are drawn
    from a pool holding each row as many times as its even-share target;
    when a column cannot be completed from the pool, rows are drawn
    uniformly at random. 4-cycles are avoided greedily (``max_tries``
    redraws per edge) but not guaranteed. Rows of H1 left with weight 0 or 1
    get extra ones at random zero positions.
    """
    m = V.N - V.K
    K = V.K
    col_deg = np.asarray(V.info_column_degrees(), dtype=np.int64)
    if col_deg.size != K:
        raise ValueError("distribution does not provide K info columns")
    if col_deg.max(initial=0) > m:
        raise ValueError(f"column degree {col_deg.max()} exceeds the {m} available rows")

    T = int(col_deg.sum())
    targets = _row_targets(T, m, rng)
    pool = np.repeat(np.arange(m), targets)
    rng.shuffle(pool)
    pool = pool.tolist()

    # rows joined through a common column; seeded with the staircase links
    nbrs = [set() for _ in range(m)]
    if avoid_4cycles:
        for i in range(1, m):
            nbrs[i].add(i - 1)
            nbrs[i - 1].add(i)

    # place heavy columns first, ties in random order
    order = np.lexsort((rng.permutation(K), -col_deg))
    col_rows = [None] * K
    rand = rng.random
    randint = rng.integers
    for j in order:
        d = int(col_deg[j])
        chosen = []
        chosen_set = set()
        for _ in range(d):
            picked = -1
            n = len(pool)
            fallback = -1
            for _try in range(max_tries if n else 0):
                pos = int(rand() * n)
                r = pool[pos]
                if r in chosen_set:
                    continue
                if avoid_4cycles and not nbrs[r].isdisjoint(chosen_set):
                    if fallback < 0:
                        fallback = pos
                    continue
                picked = pos
                break
            if picked < 0:
                picked = fallback
            if picked < 0 and n:
                # scan for any pool row not yet in the column
                for pos in range(n):
                    if pool[pos] not in chosen_set:
                        picked = pos
                        break
            if picked >= 0:
                r = pool[picked]
                pool[picked] = pool[-1]
                pool.pop()
            else:
                # pool exhausted for this column: random row
                while True:
                    r = int(randint(m))
                    if r not in chosen_set:
                        break
            chosen.append(r)
            chosen_set.add(r)
        if avoid_4cycles:
            for r in chosen:
                nbrs[r].update(chosen_set)
                nbrs[r].discard(r)
        col_rows[j] = chosen

    rows = np.concatenate([np.asarray(col_rows[j], dtype=np.int64) for j in range(K)])
    cols = np.repeat(np.arange(K), col_deg)
    H1 = sp.csr_matrix((np.ones(rows.size, dtype=np.uint8), (rows, cols)), shape=(m, K))

    # repair rows of weight 0 or 1
    w = np.asarray(H1.sum(axis=1)).ravel()
    weak = np.flatnonzero(w < 2)
    if weak.size:
        H1 = H1.tolil()
        for r in weak:
            present = set(H1.rows[r])
            while len(present) < 2:
                c = int(randint(K))
                if c not in present:
                    H1[r, c] = 1
                    present.add(c)
        H1 = H1.tocsr()

    H = sp.hstack([H1, accumulator(m)], format="csr", dtype=np.uint8)
    H.sort_indices()
    return ParityCheckMatrix(H=H, K=K)


def from_dense(H, K):
    H = sp.csr_matrix(np.asarray(H, dtype=np.uint8))
    H.sort_indices()
    return ParityCheckMatrix(H=H, K=int(K))


def count_4cycles(pcm):
    """Number of 4-cycles (pairs of columns sharing two or more rows)."""
    H = pcm.H.astype(np.int64)
    G = (H.T @ H).tocoo()
    mask = G.row < G.col
    s = G.data[mask]
    return int(np.sum(s * (s - 1) // 2))
