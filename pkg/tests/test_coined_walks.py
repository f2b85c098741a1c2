"""Coin splitting, block validation, and walk stepping against dense oracles."""

import math

import numpy as np
import pytest

from dense_reference import dense_walk_matrix, walk_to_vector
from qcawalk.coined_walks import (
    L_UPPER,
    R_UPPER,
    CoinBlocks,
    CoinMatrix,
    QubitState,
    WalkState,
    generalized_blocks_from_qca,
    plain_blocks,
    walk_distribution,
    walk_step,
)
from qcawalk.qca_core import AngleTriple, QcaParams, params_from_angles

INV_SQRT2 = 1.0 / math.sqrt(2.0)
PATEL = QcaParams(0.5j, 0.5, 0.5j, -0.5)
BALANCED_COIN = CoinMatrix(1j * INV_SQRT2, INV_SQRT2, INV_SQRT2, 1j * INV_SQRT2)


def random_params(rng):
    return params_from_angles(AngleTriple(*rng.uniform(0.0, 2.0 * math.pi, 3)))


def random_qubit(rng):
    chi = rng.uniform(0, math.pi / 2)
    pa, pb = rng.uniform(0, 2 * math.pi, 2)
    return (
        math.cos(chi) * complex(math.cos(pa), math.sin(pa)),
        math.sin(chi) * complex(math.cos(pb), math.sin(pb)),
    )


# ---------------------------------------------------------------------------
# CoinMatrix / QubitState
# ---------------------------------------------------------------------------

def test_coin_matrix_accepts_balanced_coin():
    u = BALANCED_COIN.matrix
    assert np.abs(u.conj().T @ u - np.eye(2)).max() <= 1e-15


def test_coin_matrix_rejects_non_unitary():
    with pytest.raises(ValueError):
        CoinMatrix(1.0, 1.0, 0.0, 1.0)


def test_coin_matrix_determinant_relations():
    rng = np.random.default_rng(2)
    for _ in range(25):
        chi = rng.uniform(0, math.pi / 2)
        pa, pb, pd = rng.uniform(0, 2 * math.pi, 3)
        a = math.cos(chi) * complex(math.cos(pa), math.sin(pa))
        b = math.sin(chi) * complex(math.cos(pb), math.sin(pb))
        det = complex(math.cos(pd), math.sin(pd))
        coin = CoinMatrix(a, b, -det * b.conjugate(), det * a.conjugate())
        assert abs(abs(coin.det) - 1.0) <= 1e-12
        assert abs(coin.c + coin.det * coin.b.conjugate()) <= 1e-12
        assert abs(coin.d - coin.det * coin.a.conjugate()) <= 1e-12


def test_qubit_state_normalization():
    q = QubitState(INV_SQRT2, 1j * INV_SQRT2)
    assert abs(abs(q.alpha) ** 2 + abs(q.beta) ** 2 - 1.0) <= 1e-15
    with pytest.raises(ValueError):
        QubitState(1.0, 1.0)


# ---------------------------------------------------------------------------
# Block construction
# ---------------------------------------------------------------------------

def test_plain_blocks_family_a_rows():
    blocks = plain_blocks(BALANCED_COIN, "A")
    assert np.allclose(blocks.P, [[1j * INV_SQRT2, INV_SQRT2], [0, 0]])
    assert np.allclose(blocks.Q, [[0, 0], [INV_SQRT2, 1j * INV_SQRT2]])
    assert np.allclose(blocks.coin, BALANCED_COIN.matrix)
    assert blocks.p_side == 1 and blocks.order == L_UPPER


def test_plain_blocks_identity_coin():
    blocks = plain_blocks(CoinMatrix(1.0, 0.0, 0.0, 1.0), "A")
    assert np.allclose(blocks.P, [[1, 0], [0, 0]])
    assert np.allclose(blocks.Q, [[0, 0], [0, 1]])


def test_plain_blocks_family_b_columns():
    blocks = plain_blocks(BALANCED_COIN, "B")
    assert np.allclose(blocks.P, [[1j * INV_SQRT2, 0], [INV_SQRT2, 0]])
    assert np.allclose(blocks.Q, [[0, INV_SQRT2], [0, 1j * INV_SQRT2]])


def test_generalized_blocks_family_a_patel():
    blocks = generalized_blocks_from_qca(PATEL, "A")
    assert np.allclose(blocks.P, [[-0.5, 0.5j], [0, 0]])
    assert np.allclose(blocks.T, [[0.5, 0.5j], [0.5j, 0.5]])
    assert np.allclose(blocks.Q, [[0, 0], [0.5j, -0.5]])
    assert blocks.p_side == -1 and blocks.order == R_UPPER


def test_generalized_blocks_type_iii_has_zero_stay():
    params = QcaParams(0.0, 0.0, INV_SQRT2, 1j * INV_SQRT2)
    blocks = generalized_blocks_from_qca(params, "A")
    assert not blocks.has_stay()


def test_generalized_blocks_type_iv_has_zero_stay():
    params = QcaParams(INV_SQRT2, 0.0, 0.0, 1j * INV_SQRT2)
    blocks = generalized_blocks_from_qca(params, "B")
    assert not blocks.has_stay()


def test_generalized_blocks_unitary_for_random_angles():
    rng = np.random.default_rng(7)
    for _ in range(100):
        params = random_params(rng)
        for family in ("A", "B"):
            blocks = generalized_blocks_from_qca(params, family)
            assert blocks.unitarity_residual() <= 1e-12


def test_coin_blocks_reject_non_unitary_assembly():
    bad = np.array([[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        CoinBlocks(bad, np.zeros((2, 2)), bad, family="A")


def test_stay_block_weight_follows_angles():
    # Total stay weight depends only on the first angle; the direct
    # stay-in-place entry grows with the second.
    rng = np.random.default_rng(9)
    for _ in range(10):
        theta, delta = rng.uniform(0.1, 1.4), rng.uniform(0, 2 * math.pi)
        phis = np.linspace(0.1, math.pi / 2 - 0.1, 8)
        diag = []
        for phi in phis:
            blocks = generalized_blocks_from_qca(
                params_from_angles(AngleTriple(theta, phi, delta)), "A"
            )
            fro_sq = float((np.abs(blocks.T) ** 2).sum())
            assert abs(fro_sq - 2 * math.cos(theta) ** 2) <= 1e-12
            diag.append(abs(blocks.T[0, 0]))
        assert all(x < y for x, y in zip(diag, diag[1:]))


# ---------------------------------------------------------------------------
# walk_step
# ---------------------------------------------------------------------------

def test_plain_step_from_origin():
    rng = np.random.default_rng(13)
    alpha, beta = random_qubit(rng)
    blocks = plain_blocks(BALANCED_COIN, "A")
    state = walk_step(WalkState.origin((alpha, beta), L_UPPER), blocks)
    a, b, c, d = BALANCED_COIN.a, BALANCED_COIN.b, BALANCED_COIN.c, BALANCED_COIN.d
    assert state[-1][0] == pytest.approx(a * alpha + b * beta)
    assert state[-1][1] == 0j
    assert state[1][0] == 0j
    assert state[1][1] == pytest.approx(c * alpha + d * beta)


def test_identity_coin_splits_left_right():
    blocks = plain_blocks(CoinMatrix(1.0, 0.0, 0.0, 1.0), "A")
    state = walk_step(WalkState.origin((0.6, 0.8), L_UPPER), blocks)
    assert state[-1] == (0.6, 0j)
    assert state[1] == (0j, 0.8)


def test_step_rejects_order_mismatch():
    blocks = generalized_blocks_from_qca(PATEL, "A")  # written R-upper
    state = WalkState.origin((1.0, 0.0), L_UPPER)
    with pytest.raises(ValueError):
        walk_step(state, blocks)


def test_walk_step_matches_dense_oracle():
    rng = np.random.default_rng(19)
    for _ in range(20):
        params = random_params(rng)
        family = "A" if rng.uniform() < 0.5 else "B"
        blocks = generalized_blocks_from_qca(params, family)
        state = WalkState.origin(random_qubit(rng), blocks.order)
        for _ in range(4):
            state = walk_step(state, blocks)
        lo, hi = -8, 8
        dense = dense_walk_matrix(blocks.P, blocks.T, blocks.Q, blocks.p_side, lo, hi)
        expected = np.linalg.matrix_power(dense, 1) @ walk_to_vector(state, lo, hi)
        stepped = walk_step(state, blocks)
        assert np.abs(walk_to_vector(stepped, lo, hi) - expected).max() <= 1e-12


def test_walk_norm_conservation():
    rng = np.random.default_rng(43)
    for _ in range(10):
        params = random_params(rng)
        family = "A" if rng.uniform() < 0.5 else "B"
        blocks = generalized_blocks_from_qca(params, family)
        state = WalkState.origin(random_qubit(rng), blocks.order)
        for _ in range(30):
            state = walk_step(state, blocks)
        assert abs(state.norm_sq() - 1.0) <= 1e-12


def test_plain_walk_support_and_parity():
    rng = np.random.default_rng(47)
    blocks = plain_blocks(BALANCED_COIN, "A")
    state = WalkState.origin(random_qubit(rng), L_UPPER)
    for n in range(1, 12):
        state = walk_step(state, blocks)
        assert all(-n <= s <= n and (s - n) % 2 == 0 for s in state.support())


def test_generalized_walk_support_bound():
    blocks = generalized_blocks_from_qca(PATEL, "A")
    state = WalkState.origin((1.0, 0.0), R_UPPER)
    for n in range(1, 12):
        state = walk_step(state, blocks)
        assert all(-n <= s <= n for s in state.support())


# ---------------------------------------------------------------------------
# walk_distribution
# ---------------------------------------------------------------------------

def test_distribution_of_origin_state():
    dist = walk_distribution(WalkState.origin((INV_SQRT2, 1j * INV_SQRT2), L_UPPER))
    assert dist.support() == {0}
    assert dist[0] == pytest.approx(1.0)


def test_distribution_split_state():
    state = WalkState({-1: (0.6, 0.0), 1: (0.0, 0.8j)}, L_UPPER)
    dist = walk_distribution(state)
    assert dist[-1] == pytest.approx(0.36)
    assert dist[1] == pytest.approx(0.64)


def test_balanced_coin_symmetric_distribution():
    blocks = plain_blocks(BALANCED_COIN, "A")
    state = WalkState.origin((INV_SQRT2, INV_SQRT2), L_UPPER)
    for _ in range(2):
        state = walk_step(state, blocks)
    dist = walk_distribution(state)
    for k in dist.support():
        assert dist[k] == pytest.approx(dist[-k], abs=1e-12)
