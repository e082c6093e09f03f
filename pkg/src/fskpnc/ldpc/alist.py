"""MacKay alist format for sparse binary matrices.

Layout::

    n_cols n_rows
    max_col_weight max_row_weight
    <n_cols column weights>
    <n_rows row weights>
    <n_cols lines: 1-based row indices, zero padded to max_col_weight>
    <n_rows lines: 1-based col indices, zero padded to max_row_weight>

The info length K is not part of the format; eIRA matrices read back with
K = N - M.
"""

import numpy as np
import scipy.sparse as sp

from .pcm import ParityCheckMatrix


def _padded(lists, width):
    lines = []
    for idx in lists:
        vals = [str(i + 1) for i in idx] + ["0"] * (width - len(idx))
        lines.append(" ".join(vals))
    return lines


def dumps(pcm):
    H = pcm.H.tocsc()
    H.sort_indices()
    m, n = H.shape
    col_lists = [H.indices[H.indptr[j]:H.indptr[j + 1]].tolist() for j in range(n)]
    Hr = pcm.H.tocsr()
    Hr.sort_indices()
    row_lists = [Hr.indices[Hr.indptr[i]:Hr.indptr[i + 1]].tolist() for i in range(m)]
    cw = [len(c) for c in col_lists]
    rw = [len(r) for r in row_lists]
    out = [f"{n} {m}", f"{max(cw)} {max(rw)}", " ".join(map(str, cw)), " ".join(map(str, rw))]
    out += _padded(col_lists, max(cw))
    out += _padded(row_lists, max(rw))
    return "\n".join(out) + "\n"


def loads(text, K=None):
    tokens = iter(text.split())
    n, m = int(next(tokens)), int(next(tokens))
    max_cw, max_rw = int(next(tokens)), int(next(tokens))
    cw = [int(next(tokens)) for _ in range(n)]
    rw = [int(next(tokens)) for _ in range(m)]
    rows, cols = [], []
    for j in range(n):
        entries = [int(next(tokens)) for _ in range(max_cw)]
        nz = [e - 1 for e in entries if e]
        if len(nz) != cw[j]:
            raise ValueError(f"alist column {j}: weight {len(nz)} != header {cw[j]}")
        rows.extend(nz)
        cols.extend([j] * len(nz))
    # row section is redundant; verify it rather than trust it
    row_count = np.zeros(m, dtype=np.int64)
    for i in range(m):
        entries = [int(next(tokens)) for _ in range(max_rw)]
        row_count[i] = sum(1 for e in entries if e)
    if not np.array_equal(row_count, rw):
        raise ValueError("alist row section disagrees with row weights")
    H = sp.csr_matrix((np.ones(len(rows), dtype=np.uint8), (rows, cols)), shape=(m, n))
    H.sort_indices()
    if np.any(np.asarray(H.sum(axis=1)).ravel() != rw):
        raise ValueError("alist column and row sections disagree")
    return ParityCheckMatrix(H=H, K=n - m if K is None else int(K))


def write_alist(path, pcm):
    with open(path, "w") as fh:
        fh.write(dumps(pcm))


def read_alist(path, K=None):
    with open(path) as fh:
        return loads(fh.read(), K=K)
