import logging
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, sqrt
from typing import Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

Spin = Union[int, float, Fraction]

# largest 2j evaluated through the matrix-coefficient polynomials
POLYNOMIAL_MAX_TWO_J = 20


def two_j_of(j: Spin) -> int:
    """Integer 2j of a spin given as 1/2, 0.5, Fraction(1, 2) or "1/2"."""
    value = Fraction(j) if not isinstance(j, float) else Fraction(j).limit_denominator(2)
    twice = 2 * value
    if twice.denominator != 1 or twice < 0:
        raise ValueError(f"Spin must be a nonnegative half-integer, got {j}")
    return int(twice)


def spin_label(two_j: int) -> str:
    return str(two_j // 2) if two_j % 2 == 0 else f"{two_j}/2"


def spin_values(two_j: int) -> np.ndarray:
    """m = j, j-1, ..., -j; the row order of every Wigner block."""
    return (two_j - 2 * np.arange(two_j + 1)) / 2.0


@lru_cache(maxsize=None)
def angular_momentum(two_j: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin-j matrices (Jx, Jy, Jz) in the Condon-Shortley convention."""
    j = two_j / 2.0
    m = spin_values(two_j)
    n = two_j + 1
    raising = np.zeros((n, n), dtype=complex)
    for k in range(1, n):
        raising[k - 1, k] = sqrt((j - m[k]) * (j + m[k] + 1))
    lowering = raising.conj().T
    jx = (raising + lowering) / 2
    jy = (raising - lowering) / 2j
    jz = np.diag(m).astype(complex)
    for mat in (jx, jy, jz):
        mat.setflags(write=False)
    return jx, jy, jz


@lru_cache(maxsize=None)
def _jy_eigenbasis(two_j: int) -> Tuple[np.ndarray, np.ndarray]:
    _, jy, _ = angular_momentum(two_j)
    values, vectors = np.linalg.eigh(jy)
    values.setflags(write=False)
    vectors.setflags(write=False)
    return values, vectors


def euler_angles(q: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ZYZ angles with q = qz(alpha) qy(beta) qz(gamma), beta in [0, pi].

    Stable at beta = 0 and beta = pi, where only alpha + gamma or alpha - gamma
    is determined and the other combination is set to zero.
    """
    q = np.atleast_2d(np.asarray(q, dtype=float))
    a, b, c, d = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    beta = 2.0 * np.arctan2(np.hypot(b, c), np.hypot(a, d))
    half_sum = np.arctan2(d, a)
    half_diff = np.arctan2(-b, c)
    return half_sum + half_diff, beta, half_sum - half_diff


def small_d(beta: np.ndarray, two_j: int) -> np.ndarray:
    """exp(-i beta Jy) for each beta, shape (N, 2j+1, 2j+1)."""
    values, vectors = _jy_eigenbasis(two_j)
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    phases = np.exp(-1j * beta[:, None] * values[None, :])
    return np.einsum('ak,nk,bk->nab', vectors, phases, vectors.conj())


def wigner_from_euler(alpha: np.ndarray, beta: np.ndarray, gamma: np.ndarray, two_j: int) -> np.ndarray:
    m = spin_values(two_j)
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    gamma = np.atleast_1d(np.asarray(gamma, dtype=float))
    left = np.exp(-1j * alpha[:, None] * m[None, :])
    right = np.exp(-1j * gamma[:, None] * m[None, :])
    return left[:, :, None] * small_d(beta, two_j) * right[:, None, :]


def su2_matrix(q) -> np.ndarray:
    a, b, c, d = (float(x) for x in q)
    return np.array([[a - 1j * d, -c - 1j * b], [c - 1j * b, a + 1j * d]])


def _powers(z: np.ndarray, n: int) -> np.ndarray:
    """z^0, ..., z^(n-1) column by column, shape (N, n)."""
    result = np.ones((len(z), n), dtype=complex)
    for k in range(1, n):
        result[:, k] = result[:, k - 1] * z
    return result


def polynomial_wigner_matrices(quaternions: np.ndarray, two_j: int) -> np.ndarray:
    """Matrix coefficients as polynomials in the SU(2) entries, for a batch of quaternions.

    Action of the group on homogeneous polynomials of degree 2j. Terms grow like
    2^j sqrt(C(2j, j)) before cancelling, so large spins lose accuracy.
    """
    q = np.atleast_2d(np.asarray(quaternions, dtype=float))
    a, b, c, d = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    n = two_j + 1
    u00, u01 = _powers(a - 1j * d, n), _powers(-c - 1j * b, n)
    u10, u11 = _powers(c - 1j * b, n), _powers(a + 1j * d, n)
    result = np.zeros((len(q), n, n), dtype=complex)
    for col in range(n):
        p = two_j - col          # j + m
        s_total = col            # j - m
        for row in range(n):
            target = two_j - row     # j + m'
            norm = sqrt(factorial(target) * factorial(two_j - target) /
                        (factorial(p) * factorial(s_total)))
            value = np.zeros(len(q), dtype=complex)
            for r in range(max(0, target - s_total), min(p, target) + 1):
                s = target - r
                value += (comb(p, r) * comb(s_total, s) * u00[:, r] * u10[:, p - r]
                          * u01[:, s] * u11[:, s_total - s])
            result[:, row, col] = norm * value
    return result


def wigner_matrices(quaternions: np.ndarray, two_j: int) -> np.ndarray:
    """Spin-j representation matrices of a batch of unit quaternions, shape (N, 2j+1, 2j+1).

    The quaternion (a, b, c, d) is identified with a*I - i(b sx + c sy + d sz),
    so spin 1/2 reproduces that SU(2) matrix and D(pq) = D(p) D(q). Spins up to
    POLYNOMIAL_MAX_TWO_J / 2 use the matrix-coefficient polynomials; larger ones
    go through ZYZ angles and the J_y eigenbasis.
    """
    if two_j < 0:
        raise ValueError(f"two_j must be nonnegative, got {two_j}")
    if two_j <= POLYNOMIAL_MAX_TWO_J:
        return polynomial_wigner_matrices(quaternions, two_j)
    alpha, beta, gamma = euler_angles(quaternions)
    return wigner_from_euler(alpha, beta, gamma, two_j)


def wigner_matrix(q, two_j: int) -> np.ndarray:
    return wigner_matrices(np.asarray(q, dtype=float)[None, :], two_j)[0]


def wigner_matrix_polynomial(q, two_j: int) -> np.ndarray:
    return polynomial_wigner_matrices(np.asarray(q, dtype=float)[None, :], two_j)[0]


def character(quaternions: np.ndarray, two_j: int) -> np.ndarray:
    """chi_j = sin((2j+1) t/2) / sin(t/2) with t the SU(2) angle 2*arccos(a)."""
    q = np.atleast_2d(np.asarray(quaternions, dtype=float))
    half_angle = np.arctan2(np.linalg.norm(q[:, 1:], axis=1), q[:, 0])
    sin_half = np.sin(half_angle)
    with np.errstate(invalid='ignore', divide='ignore'):
        chi = np.sin((two_j + 1) * half_angle) / sin_half
    near = np.abs(sin_half) < 1e-12
    if np.any(near):
        sign = np.where(np.cos(half_angle[near]) > 0, 1.0, (-1.0) ** two_j)
        chi[near] = sign * (two_j + 1)
    return chi
