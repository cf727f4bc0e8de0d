"""Pure-numpy kernel backend: batched LAPACK SVD grouped by edge width."""

import numpy as np


def edge_min_singular_values(mat, indices, offsets):
    """Smallest singular value of ``mat[:, S]`` for each flattened edge S.

    Edge e covers column indices ``indices[offsets[e]:offsets[e+1]]``. Edges
    wider than the row count are rank deficient by shape and return zero.
    """
    n_rows = mat.shape[0]
    n_edges = offsets.shape[0] - 1
    out = np.zeros(n_edges)
    widths = np.diff(offsets)
    for width in np.unique(widths):
        if width == 0 or width > n_rows:
            continue
        group = np.nonzero(widths == width)[0]
        cols = np.empty((group.size, width), dtype=np.int64)
        for row, e in enumerate(group):
            cols[row] = indices[offsets[e]:offsets[e + 1]]
        stacked = np.moveaxis(mat[:, cols], 1, 0)
        sv = np.linalg.svd(stacked, compute_uv=False)
        out[group] = sv[:, -1]
    return out
