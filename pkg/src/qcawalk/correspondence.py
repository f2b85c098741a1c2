"""Machine checks of every lattice/walk equivalence the package claims.

Site pairing conventions, pinned once:

  * A-family: walk site k holds lattice sites (2k-1, 2k); 2k-1 is the
    right chirality, 2k the left.  The matching branch combination starts
    the second basis field one site to the LEFT of the first.
  * B-family: walk site k holds lattice sites (2k, 2k+1); 2k is the left
    chirality, 2k+1 the right.  The second basis field starts one site to
    the RIGHT.
  * Even half-step: 2x2 blocks on pairs (2k, 2k+1).  Odd half-step:
    blocks on pairs (2k-1, 2k).  The full step is even-after-odd.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .amplitudes import AmplitudeField
from .coined_walks import (
    L_UPPER,
    R_UPPER,
    CoinBlocks,
    WalkState,
    generalized_blocks_from_qca,
    walk_step,
)
from .qca_core import (
    TWO_PI,
    AngleTriple,
    QcaParams,
    normalized_qubit,
    params_from_angles,
    qca_step,
)

__all__ = [
    "TwoStepFactors",
    "PatelParams",
    "CorrespondenceReport",
    "verify_A_correspondence",
    "verify_B_correspondence",
    "two_step_factorize",
    "verify_two_step",
    "patel_coin",
    "patel_even_step",
    "patel_odd_step",
    "patel_factorize",
    "meyer_angles",
]


@dataclass(frozen=True)
class CorrespondenceReport:
    """Outcome of one identity check.

    ``steps_checked`` counts evolution steps for walk/lattice checks and is
    0 for purely algebraic (matrix) identities.
    """

    max_amplitude_error: float
    max_probability_error: float
    steps_checked: int
    identity_name: str

    def max_error(self) -> float:
        return max(self.max_amplitude_error, self.max_probability_error)


def _check_pairing(
    walk: WalkState,
    eta_first: AmplitudeField,
    eta_second: AmplitudeField,
    alpha: complex,
    beta: complex,
    upper_site,
    lower_site,
    site_to_walk,
) -> tuple[float, float]:
    """Compare walk amplitudes/masses against the paired combination fields."""
    ks = set(walk.support())
    for j in eta_first.support() | eta_second.support():
        ks.add(site_to_walk(j))
    amp_err = 0.0
    prob_err = 0.0
    for k in ks:
        u, l = walk[k]
        ju, jl = upper_site(k), lower_site(k)
        want_u = alpha * eta_first[ju] + beta * eta_second[ju]
        want_l = alpha * eta_first[jl] + beta * eta_second[jl]
        amp_err = max(amp_err, abs(u - want_u), abs(l - want_l))
        prob_err = max(
            prob_err,
            abs(abs(want_u) ** 2 - (u.real * u.real + u.imag * u.imag)),
            abs(abs(want_l) ** 2 - (l.real * l.real + l.imag * l.imag)),
        )
    return amp_err, prob_err


def verify_A_correspondence(
    params: QcaParams, qubit, n_max: int
) -> CorrespondenceReport:
    """Certify the A-family walk against the banded lattice evolution.

    The walk starts from the state the pairing identities dictate at step
    zero; both sides are then advanced in lockstep and compared at every
    step up to ``n_max``.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    alpha, beta = normalized_qubit(qubit)
    blocks = generalized_blocks_from_qca(params, "A")
    eta0 = AmplitudeField.delta(0)
    eta_left = AmplitudeField.delta(-1)
    walk = WalkState.origin((alpha, beta), R_UPPER)

    amp_err = 0.0
    prob_err = 0.0
    for n in range(n_max + 1):
        step_amp, step_prob = _check_pairing(
            walk,
            eta0,
            eta_left,
            alpha,
            beta,
            upper_site=lambda k: 2 * k - 1,
            lower_site=lambda k: 2 * k,
            site_to_walk=lambda j: (j + 1) // 2,
        )
        amp_err = max(amp_err, step_amp)
        prob_err = max(prob_err, step_prob)
        if n < n_max:
            eta0 = qca_step(eta0, params)
            eta_left = qca_step(eta_left, params)
            walk = walk_step(walk, blocks)
    return CorrespondenceReport(amp_err, prob_err, n_max, "A-type")


def verify_B_correspondence(
    params: QcaParams, qubit, n_max: int
) -> CorrespondenceReport:
    """Certify the B-family walk against the banded lattice evolution."""
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    alpha, beta = normalized_qubit(qubit)
    blocks = generalized_blocks_from_qca(params, "B")
    eta0 = AmplitudeField.delta(0)
    eta_right = AmplitudeField.delta(1)
    walk = WalkState.origin((alpha, beta), L_UPPER)

    amp_err = 0.0
    prob_err = 0.0
    for n in range(n_max + 1):
        step_amp, step_prob = _check_pairing(
            walk,
            eta0,
            eta_right,
            alpha,
            beta,
            upper_site=lambda k: 2 * k,
            lower_site=lambda k: 2 * k + 1,
            site_to_walk=lambda j: j // 2,
        )
        amp_err = max(amp_err, step_amp)
        prob_err = max(prob_err, step_prob)
        if n < n_max:
            eta0 = qca_step(eta0, params)
            eta_right = qca_step(eta_right, params)
            walk = walk_step(walk, blocks)
    return CorrespondenceReport(amp_err, prob_err, n_max, "B-type")


@dataclass(frozen=True)
class TwoStepFactors:
    """Half-step move blocks whose two-step composition is one lattice step.

    ``coin(n) = P(n) + Q(n)`` is unitary for n = 1, 2, and the same two
    coins underlie both families (A splits them by rows, B by columns).
    """

    P1: np.ndarray
    Q1: np.ndarray
    P2: np.ndarray
    Q2: np.ndarray
    theta1: float
    theta2: float
    family: str

    def __post_init__(self):
        object.__setattr__(self, "P1", np.asarray(self.P1, dtype=np.complex128))
        object.__setattr__(self, "Q1", np.asarray(self.Q1, dtype=np.complex128))
        object.__setattr__(self, "P2", np.asarray(self.P2, dtype=np.complex128))
        object.__setattr__(self, "Q2", np.asarray(self.Q2, dtype=np.complex128))
        object.__setattr__(self, "theta1", float(self.theta1) % TWO_PI)
        object.__setattr__(self, "theta2", float(self.theta2) % TWO_PI)
        if self.family not in ("A", "B"):
            raise ValueError(f"family must be 'A' or 'B', got {self.family!r}")
        for n in (1, 2):
            u = self.coin(n)
            defect = np.abs(u.conj().T @ u - np.eye(2)).max()
            if defect > 1e-12:
                raise ValueError(f"half-step coin {n} is not unitary ({defect:.3e})")

    def coin(self, n: int) -> np.ndarray:
        if n == 1:
            return self.P1 + self.Q1
        if n == 2:
            return self.P2 + self.Q2
        raise ValueError(f"half-step index must be 1 or 2, got {n}")

    def step_blocks(self, n: int) -> CoinBlocks:
        """Plain-walk blocks for half-step ``n``, in the family's ordering."""
        p = self.P1 if n == 1 else self.P2
        q = self.Q1 if n == 1 else self.Q2
        order = R_UPPER if self.family == "A" else L_UPPER
        zero = np.zeros((2, 2), dtype=np.complex128)
        return CoinBlocks(p, zero, q, family=self.family, p_side=1, order=order)


def _half_step_coins(
    angles: AngleTriple, theta1: float, theta2: float
) -> tuple[np.ndarray, np.ndarray]:
    """The two coins whose composed move blocks rebuild a lattice step."""
    ct, st = math.cos(angles.theta), math.sin(angles.theta)
    cp, sp = math.cos(angles.phi), math.sin(angles.phi)
    e1 = complex(math.cos(theta1), math.sin(theta1))
    e2 = complex(math.cos(theta2), math.sin(theta2))
    ed = complex(math.cos(angles.delta), math.sin(angles.delta))
    u1 = np.array(
        [
            [1j * cp * e2, sp * e2],
            [sp * e1, 1j * cp * e1],
        ],
        dtype=np.complex128,
    )
    u2 = ed * np.array(
        [
            [st * e2.conjugate(), -1j * ct * e1.conjugate()],
            [-1j * ct * e2.conjugate(), st * e1.conjugate()],
        ],
        dtype=np.complex128,
    )
    return u1, u2


def two_step_factorize(
    angles: AngleTriple, theta1: float, theta2: float, family: str
) -> TwoStepFactors:
    """Factor the generalized move/stay blocks into two plain half-steps.

    The returned factors satisfy P = P2 @ P1, Q = Q2 @ Q1 and
    T = P2 @ Q1 + Q2 @ P1 against ``generalized_blocks_from_qca`` of the
    tuple generated by ``angles``, for every choice of the two free phase
    angles.
    """
    theta1 = float(theta1) % TWO_PI
    theta2 = float(theta2) % TWO_PI
    u1, u2 = _half_step_coins(angles, theta1, theta2)
    zero_row = np.zeros(2, dtype=np.complex128)
    if family == "A":
        p1 = np.vstack([u1[0], zero_row])
        q1 = np.vstack([zero_row, u1[1]])
        p2 = np.vstack([u2[0], zero_row])
        q2 = np.vstack([zero_row, u2[1]])
    elif family == "B":
        p1 = np.column_stack([u1[:, 0], zero_row])
        q1 = np.column_stack([zero_row, u1[:, 1]])
        p2 = np.column_stack([u2[:, 0], zero_row])
        q2 = np.column_stack([zero_row, u2[:, 1]])
    else:
        raise ValueError(f"family must be 'A' or 'B', got {family!r}")
    return TwoStepFactors(p1, q1, p2, q2, theta1, theta2, family)


def verify_two_step(
    angles: AngleTriple, theta1: float, theta2: float, family: str
) -> CorrespondenceReport:
    """Entry-wise residual of the three half-step product identities."""
    factors = two_step_factorize(angles, theta1, theta2, family)
    blocks = generalized_blocks_from_qca(params_from_angles(angles), family)
    r_p = np.abs(factors.P2 @ factors.P1 - blocks.P).max()
    r_q = np.abs(factors.Q2 @ factors.Q1 - blocks.Q).max()
    r_t = np.abs(factors.P2 @ factors.Q1 + factors.Q2 @ factors.P1 - blocks.T).max()
    err = float(max(r_p, r_q, r_t))
    return CorrespondenceReport(err, 0.0, 0, f"two-step-{family}")


@dataclass(frozen=True)
class PatelParams:
    """Rotation angles of the even and odd half-step pair coins."""

    phi1: float
    phi2: float

    def __post_init__(self):
        for name in ("phi1", "phi2"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"non-finite angle {name}={v!r}")
            object.__setattr__(self, name, v % TWO_PI)


def patel_coin(phi: float) -> np.ndarray:
    """Symmetric 2x2 pair coin with rotation angle ``phi``."""
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=np.complex128)


def _pair_apply(
    field: AmplitudeField, phi: float, top_of_pair
) -> AmplitudeField:
    """Apply the pair coin across disjoint 2-site blocks of the lattice."""
    c, isn = math.cos(phi), 1j * math.sin(phi)
    tops = sorted({top_of_pair(j) for j in field.support()})
    out: dict[int, complex] = {}
    for t in tops:
        zt = field[t]
        zb = field[t + 1]
        out[t] = c * zt + isn * zb
        out[t + 1] = isn * zt + c * zb
    return AmplitudeField(out)


def patel_even_step(field: AmplitudeField, phi1: float) -> AmplitudeField:
    """Half step acting on pairs (2k, 2k+1)."""
    return _pair_apply(field, phi1, lambda j: j & ~1)


def patel_odd_step(field: AmplitudeField, phi2: float) -> AmplitudeField:
    """Half step acting on pairs (2k-1, 2k)."""
    return _pair_apply(field, phi2, lambda j: (j - 1) | 1)


def _pair_diagonal_window(phi: float, top_parity: int, w: int) -> np.ndarray:
    """Dense window of the block-diagonal half step on sites [-w, w]."""
    n = 2 * w + 1
    m = np.zeros((n, n), dtype=np.complex128)
    u = patel_coin(phi)
    start = -w if (-w) % 2 == top_parity else -w + 1
    for top in range(start, w, 2):
        i = top + w
        m[i : i + 2, i : i + 2] = u
    return m


def _banded_window(a: complex, b: complex, c: complex, d: complex, w: int) -> np.ndarray:
    """Dense window of the full banded step on sites [-w, w]."""
    n = 2 * w + 1
    m = np.zeros((n, n), dtype=np.complex128)
    for row in range(-w, w + 1):
        if row % 2 == 0:
            k = row // 2
            coeffs = ((2 * k - 1, a), (2 * k, b), (2 * k + 1, c), (2 * k + 2, d))
        else:
            k = (row - 1) // 2
            coeffs = ((2 * k - 1, d), (2 * k, c), (2 * k + 1, b), (2 * k + 2, a))
        for col, z in coeffs:
            if -w <= col <= w:
                m[row + w, col + w] = z
    return m


def patel_factorize(p: PatelParams) -> tuple[QcaParams, CorrespondenceReport]:
    """Compose the even and odd half steps and extract the banded tuple.

    The product is formed on a finite window, the coefficient tuple is read
    off the central row, and the report carries the worst deviation from
    (i) the closed-form tuple in the two rotation angles, (ii) the angle
    substitution that lands the tuple in the trigonometric parametrization,
    and (iii) the full banded window rebuilt from the extracted tuple.
    """
    w = 8
    even = _pair_diagonal_window(p.phi1, top_parity=0, w=w)
    odd = _pair_diagonal_window(p.phi2, top_parity=1, w=w)
    product = even @ odd

    i0 = w  # row/column index of site 0
    a = complex(product[i0, i0 - 1])
    b = complex(product[i0, i0])
    c = complex(product[i0, i0 + 1])
    d = complex(product[i0, i0 + 2])

    c1, s1 = math.cos(p.phi1), math.sin(p.phi1)
    c2, s2 = math.cos(p.phi2), math.sin(p.phi2)
    closed_form = (1j * c1 * s2, c1 * c2, 1j * s1 * c2, -s1 * s2)
    err_tuple = max(
        abs(a - closed_form[0]),
        abs(b - closed_form[1]),
        abs(c - closed_form[2]),
        abs(d - closed_form[3]),
    )

    mapped = params_from_angles(
        AngleTriple(p.phi1, math.pi / 2 - p.phi2, math.pi / 2)
    )
    err_angles = max(
        abs(a - mapped.a), abs(b - mapped.b), abs(c - mapped.c), abs(d - mapped.d)
    )

    rebuilt = _banded_window(a, b, c, d, w)
    interior = slice(2, 2 * w - 1)  # rows where both windows are exact
    err_window = float(np.abs(product[interior] - rebuilt[interior]).max())

    params = QcaParams(a, b, c, d)
    report = CorrespondenceReport(
        max(err_tuple, err_angles, err_window), 0.0, 0, "even-odd-factorization"
    )
    return params, report


def meyer_angles(rho: float, theta: float) -> AngleTriple:
    """Angle substitution mapping a lattice-gas coin into the parametrization."""
    return AngleTriple(math.pi / 2 + theta, rho, 3 * math.pi / 2)
