"""Dense two-photon state vectors over the eight output modes.

An independent route to the same detection statistics as the sparse
polynomials: the input biphoton is a symmetric 8x8 tensor T (sum T_ij
m_i^dag m_j^dag |vac>), the interferometer maps it to V^T T V with V built
from the amplitude transfer matrices via a^dag -> sum_o U_oa o^dag, and the
result is read out in the 36-dimensional occupation-number basis.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .interferometer import transfer_matrix
from .modes import BASIS

N_MODES = 8  # port (first/second) x 4 basis modes, BASIS order within a port
PAIRS = list(itertools.combinations_with_replacement(range(N_MODES), 2))
FOCK_DIM = len(PAIRS)  # 36


def mode_index(port_slot: int, basis_pos: int) -> int:
    return 4 * port_slot + basis_pos


def mode_map(delta: float) -> np.ndarray:
    """V[i, o]: coefficient of output creation operator o in input operator i."""
    V = np.zeros((N_MODES, N_MODES), dtype=complex)
    for n, idx in enumerate(BASIS):
        U = transfer_matrix(idx, delta).m
        for p_in in (0, 1):
            for p_out in (0, 1):
                V[mode_index(p_in, n), mode_index(p_out, n)] = U[p_out, p_in]
    return V


def product_tensor(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Symmetric tensor of (u . m^dag)(v . m^dag)."""
    return 0.5 * (np.outer(u, v) + np.outer(v, u))


def biphoton_input_tensor(amps_vector) -> np.ndarray:
    e = np.asarray(amps_vector, dtype=complex)
    z = np.zeros(4, dtype=complex)
    return product_tensor(np.concatenate([e, z]), np.concatenate([z, e]))


def transform(T: np.ndarray, delta: float) -> np.ndarray:
    V = mode_map(delta)
    return V.T @ T @ V


def to_fock_vector(T: np.ndarray) -> np.ndarray:
    """Amplitudes on |1_i 1_j> (i<j) and |2_i>, ordered as PAIRS."""
    out = np.empty(FOCK_DIM, dtype=complex)
    for n, (i, j) in enumerate(PAIRS):
        out[n] = math.sqrt(2) * T[i, i] if i == j else T[i, j] + T[j, i]
    return out


def coincidence_from_fock(vec: np.ndarray) -> float:
    """Weight of outcomes with one photon in each port half of the mode list."""
    p = np.abs(vec) ** 2
    mask = np.array([(i < 4) != (j < 4) for i, j in PAIRS])
    return float(p[mask].sum() / p.sum())


def dense_coincidence(amps_vector, delta: float) -> float:
    return coincidence_from_fock(to_fock_vector(transform(biphoton_input_tensor(amps_vector), delta)))


def tensor_from_terms(terms, mode_of) -> np.ndarray:
    """Symmetric tensor from {monomial: coef} with ``mode_of(label) -> int``."""
    T = np.zeros((N_MODES, N_MODES), dtype=complex)
    for mono, c in terms.items():
        i, j = (mode_of(lab) for lab in mono)
        if i == j:
            T[i, i] += c
        else:
            T[i, j] += c / 2
            T[j, i] += c / 2
    return T
