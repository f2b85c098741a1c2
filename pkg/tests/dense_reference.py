"""Independent dense reference operators used as oracles by the tests.

These builders deliberately share no code with the package: the banded
matrix is filled row by row from the coefficient pattern, and the walk
operator is assembled block by block, so an error in the sparse stepping
code cannot hide here.
"""

import numpy as np


def dense_qca_matrix(a, b, c, d, lo, hi):
    """Dense banded step matrix over sites lo..hi (rows and columns alike)."""
    n = hi - lo + 1
    m = np.zeros((n, n), dtype=complex)
    for row in range(lo, hi + 1):
        if row % 2 == 0:
            k = row // 2
            entries = ((2 * k - 1, a), (2 * k, b), (2 * k + 1, c), (2 * k + 2, d))
        else:
            k = (row - 1) // 2
            entries = ((2 * k - 1, d), (2 * k, c), (2 * k + 1, b), (2 * k + 2, a))
        for col, z in entries:
            if lo <= col <= hi:
                m[row - lo, col - lo] = z
    return m


def field_to_vector(field, lo, hi):
    v = np.zeros(hi - lo + 1, dtype=complex)
    for site, amp in field.items():
        if lo <= site <= hi:
            v[site - lo] = amp
    return v


def vector_to_entries(vec, lo):
    return {lo + i: z for i, z in enumerate(vec) if abs(z) > 0}


def dense_walk_matrix(p, t, q, p_side, lo, hi):
    """Dense block-tridiagonal walk operator over sites lo..hi.

    Row block at site s receives ``p`` from column s + p_side, ``t`` from s
    and ``q`` from s - p_side.
    """
    n = hi - lo + 1
    m = np.zeros((2 * n, 2 * n), dtype=complex)
    for s in range(lo, hi + 1):
        r = 2 * (s - lo)
        m[r : r + 2, r : r + 2] = t
        src = s + p_side
        if lo <= src <= hi:
            cidx = 2 * (src - lo)
            m[r : r + 2, cidx : cidx + 2] = p
        src = s - p_side
        if lo <= src <= hi:
            cidx = 2 * (src - lo)
            m[r : r + 2, cidx : cidx + 2] = q
    return m


def walk_to_vector(state, lo, hi):
    v = np.zeros(2 * (hi - lo + 1), dtype=complex)
    for site, (u, l) in state.items():
        if lo <= site <= hi:
            v[2 * (site - lo)] = u
            v[2 * (site - lo) + 1] = l
    return v
