"""Coined quantum walks on the line, plain and with a stay-put block.

Chirality ordering is explicit state metadata, never an implicit
convention: A-family generalized walks keep the right-moving component on
top, everything else keeps the left-moving component on top.  The block
recurrences likewise differ per family:

    A generalized:  new[k] = Q*old[k+1] + T*old[k] + P*old[k-1]
    B generalized:  new[k] = P*old[k+1] + T*old[k] + Q*old[k-1]
    plain (A or B): new[k] = P*old[k+1] + Q*old[k-1]

``walk_step`` refuses to mix states and blocks written in different
orderings instead of silently reordering.
"""

from __future__ import annotations

import cmath
import math
import operator
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .amplitudes import PRUNE_TOLERANCE, Distribution
from .qca_core import RESIDUAL_TOLERANCE, QcaParams, normalized_qubit

__all__ = [
    "L_UPPER",
    "R_UPPER",
    "CoinMatrix",
    "QubitState",
    "WalkState",
    "CoinBlocks",
    "plain_blocks",
    "generalized_blocks_from_qca",
    "walk_step",
    "walk_distribution",
]

L_UPPER = "L-upper"
R_UPPER = "R-upper"
_ORDERS = (L_UPPER, R_UPPER)


@dataclass(frozen=True)
class CoinMatrix:
    """Validated 2x2 coin unitary with rows (a, b) and (c, d)."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            z = complex(getattr(self, name))
            if not cmath.isfinite(z):
                raise ValueError(f"non-finite coin entry {name}={z!r}")
            object.__setattr__(self, name, z)
        a, b, c, d = self.a, self.b, self.c, self.d
        bad = max(
            abs(abs(a) ** 2 + abs(b) ** 2 - 1.0),
            abs(abs(c) ** 2 + abs(d) ** 2 - 1.0),
            abs(a * c.conjugate() + b * d.conjugate()),
        )
        if bad > RESIDUAL_TOLERANCE:
            raise ValueError(f"coin matrix is not unitary (residual {bad:.3e})")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.complex128)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c


@dataclass(frozen=True)
class QubitState:
    """Normalized internal state (left amplitude, right amplitude)."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        alpha, beta = normalized_qubit((self.alpha, self.beta))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    def __iter__(self):
        return iter((self.alpha, self.beta))


class WalkState:
    """Finitely supported chirality 2-vectors on walk sites.

    ``order`` records which chirality sits in the upper component.
    """

    __slots__ = ("_sites", "order")

    def __init__(self, sites: Mapping[int, tuple[complex, complex]], order: str):
        if order not in _ORDERS:
            raise ValueError(f"unknown chirality order {order!r}")
        stored: dict[int, tuple[complex, complex]] = {}
        items = sites.items() if isinstance(sites, Mapping) else sites
        for site, pair in items:
            u, l = complex(pair[0]), complex(pair[1])
            if not (cmath.isfinite(u) and cmath.isfinite(l)):
                raise ValueError(f"non-finite amplitude at site {site}")
            if abs(u) < PRUNE_TOLERANCE:
                u = 0j
            if abs(l) < PRUNE_TOLERANCE:
                l = 0j
            if u != 0j or l != 0j:
                stored[operator.index(site)] = (u, l)
        self._sites = stored
        self.order = order

    @classmethod
    def origin(cls, qubit, order: str = L_UPPER) -> "WalkState":
        """Walker at site 0 with internal state (left, right) = qubit."""
        alpha, beta = normalized_qubit(qubit)
        pair = (alpha, beta) if order == L_UPPER else (beta, alpha)
        return cls({0: pair}, order)

    def __getitem__(self, site: int) -> tuple[complex, complex]:
        return self._sites.get(site, (0j, 0j))

    def __len__(self) -> int:
        return len(self._sites)

    def __iter__(self) -> Iterator[int]:
        return iter(self._sites)

    def items(self):
        return self._sites.items()

    def support(self) -> set[int]:
        return set(self._sites)

    def norm_sq(self) -> float:
        return math.fsum(
            u.real * u.real + u.imag * u.imag + l.real * l.real + l.imag * l.imag
            for u, l in self._sites.values()
        )

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v!r}" for k, v in sorted(self._sites.items()))
        return f"WalkState({{{inner}}}, order={self.order!r})"


def _as_block(m) -> np.ndarray:
    arr = np.asarray(m, dtype=np.complex128)
    if arr.shape != (2, 2):
        raise ValueError(f"block must be 2x2, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite block entry")
    return arr


@dataclass(frozen=True)
class CoinBlocks:
    """One walk step split into move blocks P, Q and stay block T.

    ``p_side`` fixes the recurrence orientation: the new vector at site k
    collects ``P @ old[k + p_side]`` (and ``Q`` from the opposite
    neighbour).  ``order`` is the chirality ordering the block entries are
    written in.  The assembled step operator must be unitary.
    """

    P: np.ndarray
    T: np.ndarray
    Q: np.ndarray
    family: str
    p_side: int = 1
    order: str = L_UPPER

    def __post_init__(self):
        if self.family not in ("A", "B"):
            raise ValueError(f"family must be 'A' or 'B', got {self.family!r}")
        if self.p_side not in (1, -1):
            raise ValueError(f"p_side must be +1 or -1, got {self.p_side!r}")
        if self.order not in _ORDERS:
            raise ValueError(f"unknown chirality order {self.order!r}")
        p = _as_block(self.P)
        t = _as_block(self.T)
        q = _as_block(self.Q)
        object.__setattr__(self, "P", p)
        object.__setattr__(self, "T", t)
        object.__setattr__(self, "Q", q)
        residual = self.unitarity_residual()
        if residual > RESIDUAL_TOLERANCE:
            raise ValueError(
                f"blocks do not assemble into a unitary step (residual {residual:.3e})"
            )

    def unitarity_residual(self) -> float:
        """Largest entry of the three block-orthogonality defects."""
        p, t, q = self.P, self.T, self.Q
        ph, th, qh = p.conj().T, t.conj().T, q.conj().T
        r1 = np.abs(ph @ p + th @ t + qh @ q - np.eye(2)).max()
        r2 = np.abs(ph @ t + th @ q).max()
        r3 = np.abs(ph @ q).max()
        return float(max(r1, r2, r3))

    @property
    def coin(self) -> np.ndarray:
        """P + Q; equals the coin matrix for plain walks."""
        return self.P + self.Q

    def has_stay(self) -> bool:
        return bool(np.any(self.T != 0))


def plain_blocks(coin: CoinMatrix, family: str) -> CoinBlocks:
    """Split a coin into move blocks with no stay amplitude.

    Family A keeps rows of the coin; family B keeps columns.  Either way
    P + Q reassembles the coin exactly.
    """
    u = coin.matrix
    zero = np.zeros((2, 2), dtype=np.complex128)
    if family == "A":
        p = np.array([[u[0, 0], u[0, 1]], [0, 0]], dtype=np.complex128)
        q = np.array([[0, 0], [u[1, 0], u[1, 1]]], dtype=np.complex128)
    elif family == "B":
        p = np.array([[u[0, 0], 0], [u[1, 0], 0]], dtype=np.complex128)
        q = np.array([[0, u[0, 1]], [0, u[1, 1]]], dtype=np.complex128)
    else:
        raise ValueError(f"family must be 'A' or 'B', got {family!r}")
    return CoinBlocks(p, zero, q, family=family, p_side=1, order=L_UPPER)


def generalized_blocks_from_qca(params: QcaParams, family: str) -> CoinBlocks:
    """Move/stay blocks whose walk reproduces the banded lattice step.

    Family A pairs sites (2k-1, 2k) with the right-moving component on
    top and P feeding from the left neighbour; family B pairs (2k, 2k+1)
    with the left-moving component on top and the plain orientation.
    """
    a, b, c, d = params.astuple()
    if family == "A":
        p = np.array([[d, c], [0, 0]], dtype=np.complex128)
        t = np.array([[b, a], [a, b]], dtype=np.complex128)
        q = np.array([[0, 0], [c, d]], dtype=np.complex128)
        return CoinBlocks(p, t, q, family="A", p_side=-1, order=R_UPPER)
    if family == "B":
        p = np.array([[d, 0], [a, 0]], dtype=np.complex128)
        t = np.array([[b, c], [c, b]], dtype=np.complex128)
        q = np.array([[0, a], [0, d]], dtype=np.complex128)
        return CoinBlocks(p, t, q, family="B", p_side=1, order=L_UPPER)
    raise ValueError(f"family must be 'A' or 'B', got {family!r}")


def walk_step(state: WalkState, blocks: CoinBlocks) -> WalkState:
    """Advance the walk by one step of the block recurrence."""
    if state.order != blocks.order:
        raise ValueError(
            f"state is {state.order} but blocks are written {blocks.order}; "
            "reorder explicitly before stepping"
        )
    p11, p12 = complex(blocks.P[0, 0]), complex(blocks.P[0, 1])
    p21, p22 = complex(blocks.P[1, 0]), complex(blocks.P[1, 1])
    q11, q12 = complex(blocks.Q[0, 0]), complex(blocks.Q[0, 1])
    q21, q22 = complex(blocks.Q[1, 0]), complex(blocks.Q[1, 1])
    has_stay = blocks.has_stay()
    if has_stay:
        t11, t12 = complex(blocks.T[0, 0]), complex(blocks.T[0, 1])
        t21, t22 = complex(blocks.T[1, 0]), complex(blocks.T[1, 1])
    side = blocks.p_side

    acc: dict[int, list[complex]] = {}
    for site, (u, l) in state.items():
        # new[k] takes P from old[k + side]; the entry at `site` therefore
        # lands at site - side through P and at site + side through Q.
        k = site - side
        e = acc.get(k)
        if e is None:
            acc[k] = [p11 * u + p12 * l, p21 * u + p22 * l]
        else:
            e[0] += p11 * u + p12 * l
            e[1] += p21 * u + p22 * l
        if has_stay:
            e = acc.get(site)
            if e is None:
                acc[site] = [t11 * u + t12 * l, t21 * u + t22 * l]
            else:
                e[0] += t11 * u + t12 * l
                e[1] += t21 * u + t22 * l
        k = site + side
        e = acc.get(k)
        if e is None:
            acc[k] = [q11 * u + q12 * l, q21 * u + q22 * l]
        else:
            e[0] += q11 * u + q12 * l
            e[1] += q21 * u + q22 * l
    return WalkState({k: (v[0], v[1]) for k, v in acc.items()}, state.order)


def walk_distribution(state: WalkState) -> Distribution:
    """Site masses: squared modulus of the 2-vector at each site."""
    return Distribution(
        {
            k: u.real * u.real + u.imag * u.imag + l.real * l.real + l.imag * l.imag
            for k, (u, l) in state.items()
        }
    )
