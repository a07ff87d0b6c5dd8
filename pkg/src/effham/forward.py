"""Forward direction: continued-fraction pivots, the UFL factorization of
the excluded-space block, its factorized resolvent, the scalar element
G(E) and the full effective Hamiltonian, plus a dense brute-force oracle.

The excluded-space block QHQ is the *tail* of the chain (indices 1..K of
the stored arrays); the downward recursion

    f_k = 1 / (a_k - E - b_k f_{k+1} c_{k+1}),   f_{K+1} = 0

produces the reciprocal pivots, and G(E) extends it one level to k = 0:

    G(E) = a_0 - E - rho_0 f_1(E)  =  1 / f_0(E).
"""

from dataclasses import dataclass

import numpy as np

from .errors import NearSingularBlock, PoleProximity
from .model import (FactoredChain, PartitionedHamiltonian, TridiagonalChain,
                    refactorize)

__all__ = [
    "ContinuedFractionState",
    "UFLFactors",
    "continued_fraction",
    "ufl_factorize",
    "resolvent_factored",
    "g_function",
    "effective_hamiltonian",
    "g_function_dense_oracle",
]

PIVOT_TOL = 1e-12  # relative to the local scale of each pivot


@dataclass(frozen=True)
class ContinuedFractionState:
    """Reciprocal pivots f_1..f_{K+1} (last entry exactly 0) together with
    the inverse-factor products alpha_{k+1} = -b_k f_{k+1} (k = 1..K,
    the last is 0 by construction) and beta_j = -c_j f_j (j = 2..K)."""

    f: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    @property
    def K(self):
        return len(self.f) - 1


@dataclass(frozen=True)
class UFLFactors:
    """Entries of the unit-upper x diagonal x unit-lower factorization
    U F L = Q(H - E)Q of the tridiagonal excluded-space block."""

    u_super: np.ndarray  # b_k f_{k+1}, k = 1..K-1
    f_diag: np.ndarray   # 1/f_k,      k = 1..K
    l_sub: np.ndarray    # f_k c_k,    k = 2..K

    @property
    def K(self):
        return len(self.f_diag)

    def u_matrix(self):
        return np.eye(self.K) + np.diag(self.u_super, 1)

    def f_matrix(self):
        return np.diag(self.f_diag)

    def l_matrix(self):
        return np.eye(self.K) + np.diag(self.l_sub, -1)

    def product(self):
        return self.u_matrix() @ self.f_matrix() @ self.l_matrix()


def _as_factored_tail(tail):
    if isinstance(tail, FactoredChain):
        return tail
    if isinstance(tail, TridiagonalChain):
        return refactorize(tail, "unit_subdiagonal")
    raise TypeError(f"expected a chain, got {type(tail).__name__}")


def continued_fraction(tail, E):
    """Run the downward pivot recursion over a factored tail (entries
    a_1..a_K with off-diagonal factors b_k, c_{k+1}).

    Raises :class:`PoleProximity` when a pivot falls below
    ``PIVOT_TOL * (|a_k| + |E| + |coupling| + 1)``: E is at or near an
    eigenvalue of a trailing block of QHQ.
    """
    tail = _as_factored_tail(tail)
    K = tail.K + 1  # number of tail levels a_1..a_K
    if K < 1:
        raise ValueError("tail must contain at least one level")
    a, b, c = tail.a, tail.b, tail.c
    f = np.zeros(K + 1)  # f[k-1] stores f_k; f[K] = f_{K+1} = 0
    for k in range(K, 0, -1):
        coupling = b[k - 1] * f[k] * c[k - 1] if k < K else 0.0
        pivot = a[k - 1] - E - coupling
        scale = abs(a[k - 1]) + abs(E) + abs(coupling) + 1.0
        if abs(pivot) < PIVOT_TOL * scale:
            raise PoleProximity(k)
        f[k - 1] = 1.0 / pivot
    alpha = np.zeros(K)
    alpha[:K - 1] = -b * f[1:K]
    beta = -c * f[1:K]
    return ContinuedFractionState(_ro(f), _ro(alpha), _ro(beta))


def _ro(arr):
    arr = np.asarray(arr, dtype=float)
    arr.flags.writeable = False
    return arr


def ufl_factorize(tail, E):
    """Factor Q(H - E)Q = U F L; U unit upper bidiagonal, F diagonal with
    entries 1/f_k, L unit lower bidiagonal."""
    tail = _as_factored_tail(tail)
    state = continued_fraction(tail, E)
    f = state.f
    K = tail.K + 1
    u_super = tail.b * f[1:K]
    f_diag = 1.0 / f[:K]
    l_sub = f[1:K] * tail.c
    return UFLFactors(_ro(u_super), _ro(f_diag), _ro(l_sub))


def resolvent_factored(tail, E):
    """[Q(H - E)Q]^{-1} as the explicit product L^{-1} F^{-1} U^{-1} built
    from the cumulative alpha/beta products.

    Note the sign convention: callers evaluating Q/(E - QHQ) negate.
    """
    tail = _as_factored_tail(tail)
    state = continued_fraction(tail, E)
    K = tail.K + 1
    alpha, beta, f = state.alpha, state.beta, state.f
    u_inv = np.eye(K)
    for i in range(K):
        prod = 1.0
        for j in range(i + 1, K):
            prod *= alpha[j - 1]       # alpha_{j+1}
            u_inv[i, j] = prod
    l_inv = np.eye(K)
    for j in range(K):
        prod = 1.0
        for i in range(j + 1, K):
            prod *= beta[i - 1]        # beta_{i+1}
            l_inv[i, j] = prod
    return l_inv @ np.diag(f[:K]) @ u_inv


def g_function(chain, E):
    """The scalar energy-dependent element G(E) = a_0 - E - rho_0 f_1(E).

    For a K = 0 chain this is just a_0 - E.
    """
    if chain.K == 0:
        return chain.a[0] - E
    state = continued_fraction(chain.tail(), E)
    return chain.a[0] - E - chain.rho[0] * state.f[0]


def effective_hamiltonian(h, E):
    """The M x M energy-dependent effective Hamiltonian: equal to the model
    block except for the corner entry, which becomes G(E) + E."""
    out = np.array(h.p_block)
    out[-1, -1] = g_function(h.chain, E) + E
    return out


def g_function_dense_oracle(h, E, cond_limit=1e12):
    """Brute-force evaluation of G(E) through a dense solve against the
    assembled excluded-space block:

        G(E) = a_0 - E + rho_0 * [(E - QHQ)^{-1}]_{11}.

    Intended for testing; raises :class:`NearSingularBlock` when the
    conditioning estimate of (E - QHQ) exceeds ``cond_limit``.
    """
    chain = h.chain if isinstance(h, PartitionedHamiltonian) else h
    if chain.K == 0:
        return chain.a[0] - E
    block = E * np.eye(chain.K) - chain.tail().to_dense()
    if np.linalg.cond(block) > cond_limit:
        raise NearSingularBlock(
            f"E - QHQ conditioning exceeds {cond_limit:g} at E = {E}")
    rhs = np.zeros(chain.K)
    rhs[0] = 1.0
    x = np.linalg.solve(block, rhs)
    return chain.a[0] - E + chain.rho[0] * x[0]
