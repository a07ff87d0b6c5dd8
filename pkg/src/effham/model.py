"""Domain types: tridiagonal chains, partitioned doorway Hamiltonians,
their validation, dense assembly and JSON (de)serialization.

Conventions
-----------
A chain stores the diagonal ``a = (a_0, ..., a_K)`` and the superdiagonal
products ``rho = (rho_0, ..., rho_{K-1})`` of the (K+1)x(K+1) tail

    [[a_0, rho_0, 0,   ...],
     [1,   a_1,   rho_1, ...],
     [0,   1,     a_2, ...],
     ...]

with the subdiagonal normalized to ones.  Only the products rho_k are
identifiable from the scalar element G(E); other off-diagonal gauges are
reachable through :func:`refactorize`.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NotSymmetrizable

__all__ = [
    "TridiagonalChain",
    "FactoredChain",
    "PartitionedHamiltonian",
    "GSample",
    "ValidationResult",
    "validate_chain",
    "assemble_dense",
    "refactorize",
    "hamiltonian_to_dict",
    "hamiltonian_from_dict",
    "samples_to_dict",
    "samples_from_dict",
]


def _freeze(arr):
    out = np.array(arr, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class TridiagonalChain:
    """The reconstructable tail: diagonal ``a`` (K+1 entries) and
    superdiagonal products ``rho`` (K entries); unit subdiagonal."""

    a: np.ndarray
    rho: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "a", _freeze(np.atleast_1d(self.a)))
        object.__setattr__(self, "rho", _freeze(np.atleast_1d(self.rho)))

    @property
    def K(self):
        return len(self.a) - 1

    def tail(self):
        """The chain over indices 1..K (the excluded-space block QHQ)."""
        if self.K < 1:
            raise ValueError("K = 0 chain has no tail")
        return TridiagonalChain(self.a[1:], self.rho[1:])

    def to_dense(self):
        """Dense (K+1)x(K+1) matrix with unit subdiagonal."""
        n = self.K + 1
        m = np.diag(self.a)
        if n > 1:
            m += np.diag(self.rho, 1) + np.diag(np.ones(n - 1), -1)
        return m

    def shifted(self, s):
        """Chain with every diagonal entry shifted by ``s``."""
        return TridiagonalChain(self.a + s, self.rho)


@dataclass(frozen=True)
class FactoredChain:
    """A chain with its off-diagonal products split as rho_k = b_k * c_{k+1}."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", _freeze(np.atleast_1d(self.a)))
        object.__setattr__(self, "b", _freeze(np.atleast_1d(self.b)))
        object.__setattr__(self, "c", _freeze(np.atleast_1d(self.c)))
        if len(self.b) != len(self.a) - 1 or len(self.c) != len(self.a) - 1:
            raise ValueError("b and c must have one entry fewer than a")

    @property
    def K(self):
        return len(self.a) - 1

    @property
    def rho(self):
        return self.b * self.c

    def to_chain(self):
        return TridiagonalChain(self.a, self.rho)

    def to_dense(self):
        n = self.K + 1
        m = np.diag(self.a)
        if n > 1:
            m += np.diag(self.b, 1) + np.diag(self.c, -1)
        return m


@dataclass(frozen=True)
class PartitionedHamiltonian:
    """Doorway-form N x N Hamiltonian: a dense M x M model block whose last
    row/column is the only one coupled (via rho_0 and the unit subdiagonal)
    to a tridiagonal tail of length K.

    The chain is the single source of truth for the shared corner entry
    a_0 = H_MM; the constructor copies it into the block.
    """

    p_block: np.ndarray
    chain: TridiagonalChain

    def __post_init__(self):
        block = np.array(np.atleast_2d(self.p_block), dtype=float)
        if block.ndim != 2 or block.shape[0] != block.shape[1]:
            raise ValueError("p_block must be a square matrix")
        block[-1, -1] = self.chain.a[0]
        block.flags.writeable = False
        object.__setattr__(self, "p_block", block)

    @property
    def M(self):
        return self.p_block.shape[0]

    @property
    def K(self):
        return self.chain.K

    @property
    def N(self):
        return self.M + self.K

    @classmethod
    def from_chain(cls, chain):
        """Minimal M = 1 wrapper around a bare chain."""
        return cls(np.array([[chain.a[0]]]), chain)


@dataclass(frozen=True)
class GSample:
    """One probe: energy E_alpha and the sampled value G_alpha = G(E_alpha)."""

    energy: float
    g_value: float


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple = ()

    def __bool__(self):
        return self.ok


def validate_chain(chain):
    """Diagnostic check of the chain invariants; never raises."""
    violations = []
    if len(chain.rho) != len(chain.a) - 1:
        violations.append(
            f"length mismatch: len(rho)={len(chain.rho)} != len(a)-1={len(chain.a) - 1}")
    if len(chain.a) < 1:
        violations.append("chain must have at least one diagonal entry")
    if not np.all(np.isfinite(chain.a)):
        violations.append("non-finite diagonal entries")
    if not np.all(np.isfinite(chain.rho)):
        violations.append("non-finite superdiagonal entries")
    return ValidationResult(not violations, tuple(violations))


def validate_hamiltonian(h):
    """Diagnostic check of the partitioned-Hamiltonian invariants."""
    res = validate_chain(h.chain)
    violations = list(res.violations)
    if h.M < 1:
        violations.append("M must be >= 1")
    if not np.all(np.isfinite(h.p_block)):
        violations.append("non-finite model-block entries")
    return ValidationResult(not violations, tuple(violations))


def assemble_dense(h):
    """The full N x N matrix: model block upper-left, rho_0 at (M, M+1),
    unit subdiagonal and (a_k, rho_k) along the tail, zeros elsewhere."""
    res = validate_hamiltonian(h)
    if not res:
        raise ValueError("invalid Hamiltonian: " + "; ".join(res.violations))
    M, K, N = h.M, h.K, h.N
    out = np.zeros((N, N))
    out[:M, :M] = h.p_block
    chain = h.chain
    for k in range(K):
        out[M - 1 + k, M + k] = chain.rho[k]
        out[M + k, M - 1 + k] = 1.0
        out[M + k, M + k] = chain.a[k + 1]
    return out


def refactorize(chain, style="unit_subdiagonal"):
    """Split each rho_k into b_k * c_{k+1}.

    ``symmetric`` takes b_k = c_{k+1} = sqrt(rho_k) and fails with
    :class:`NotSymmetrizable` when any rho_k < 0 (the quasi-Hermitian case);
    ``unit_subdiagonal`` keeps the stored gauge (c = 1, b = rho).
    """
    if style == "unit_subdiagonal":
        return FactoredChain(chain.a, chain.rho, np.ones(chain.K))
    if style == "symmetric":
        bad = np.nonzero(chain.rho < 0)[0]
        if len(bad):
            raise NotSymmetrizable(bad.tolist())
        roots = np.sqrt(chain.rho)
        return FactoredChain(chain.a, roots, roots.copy())
    raise ValueError(f"unknown refactorization style {style!r}")


# ---------------------------------------------------------------------------
# JSON schemas.  Plain dicts of Python floats round-trip bit-exactly through
# the stdlib json module (repr is shortest-round-trip).

def chain_to_dict(chain):
    return {"a": chain.a.tolist(), "rho": chain.rho.tolist()}


def chain_from_dict(d):
    return TridiagonalChain(np.array(d["a"], dtype=float),
                            np.array(d.get("rho", []), dtype=float))


def hamiltonian_to_dict(h):
    return {"M": h.M,
            "p_block": h.p_block.tolist(),
            "chain": chain_to_dict(h.chain)}


def hamiltonian_from_dict(d):
    block = np.array(d["p_block"], dtype=float)
    if block.shape != (d["M"], d["M"]):
        raise ValueError("p_block shape does not match M")
    return PartitionedHamiltonian(block, chain_from_dict(d["chain"]))


def samples_to_dict(samples):
    return {"samples": [{"E": s.energy, "G": s.g_value} for s in samples]}


def samples_from_dict(d):
    return [GSample(float(s["E"]), float(s["G"])) for s in d["samples"]]
