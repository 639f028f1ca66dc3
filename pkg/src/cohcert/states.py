"""States over the equally spaced (harmonic) energy basis.

Levels are 0-indexed, level n carrying energy n, so the dynamics is
2*pi-periodic.  Everything here is immutable after construction and all
operations are pure functions, safe for concurrent use.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HarmonicBasis",
    "PureState",
    "DensityMatrix",
    "WernerParams",
    "coherence_support",
    "werner_state",
    "l1_norm",
    "w_state",
    "psi_star",
]

NORM_TOL = 1e-12
PSD_FLOOR = -1e-10


@dataclass(frozen=True)
class HarmonicBasis:
    """Energy eigenbasis of dimension ``dim`` with unit level spacing."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"basis dimension must be >= 1, got {self.dim}")


def _readonly(arr):
    arr.setflags(write=False)
    return arr


class PureState:
    """A normalized state vector over the harmonic basis.

    The Euclidean norm must equal 1 within 1e-12; use :meth:`normalized`
    to build a state from an unnormalized amplitude vector.
    """

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes):
        amps = np.array(amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("amplitudes must be a non-empty 1-d vector")
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: |norm - 1| = {abs(nrm - 1.0):.3e}")
        object.__setattr__(self, "amplitudes", _readonly(amps))

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    @classmethod
    def normalized(cls, amplitudes):
        amps = np.asarray(amplitudes, dtype=complex)
        nrm = np.linalg.norm(amps)
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / nrm)

    @property
    def dim(self):
        return self.amplitudes.size

    def density(self):
        """Rank-1 density matrix |psi><psi|."""
        a = self.amplitudes
        return DensityMatrix(np.outer(a, a.conj()))

    def __repr__(self):
        return f"PureState({np.array2string(self.amplitudes, precision=4)})"


class DensityMatrix:
    """A density operator: Hermitian, unit trace, positive semidefinite.

    Hermiticity and trace are enforced within 1e-12; eigenvalues may dip to
    -1e-10 to tolerate round-off in externally supplied matrices.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        mat = np.array(matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise ValueError("density matrix must be square and non-empty")
        if np.abs(mat - mat.conj().T).max() > NORM_TOL:
            raise ValueError("density matrix not Hermitian within 1e-12")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"density matrix trace {tr!r} != 1 within 1e-12")
        evals = np.linalg.eigvalsh(mat)
        if evals.min() < PSD_FLOOR:
            raise ValueError(f"density matrix has eigenvalue {evals.min():.3e} < -1e-10")
        object.__setattr__(self, "matrix", _readonly(mat))

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


@dataclass(frozen=True)
class WernerParams:
    """Mixing parameters of the Werner-like state on ``k`` levels."""

    k: int
    lam: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")


def coherence_support(psi: PureState, tol: float = 1e-10) -> int:
    """Number of amplitudes with modulus above ``tol``.

    A pure state with support q is exactly q-coherent in this basis.  The
    tolerance is exposed because experimentally reconstructed states carry
    noise; there is no canonical cutoff.
    """
    if tol < 0:
        raise ValueError("tol must be >= 0")
    return int(np.count_nonzero(np.abs(psi.amplitudes) > tol))


def w_state(k: int, dim: int | None = None) -> PureState:
    """Equal superposition of the first ``k`` levels, embedded in ``dim`` levels."""
    if k < 1:
        raise ValueError("k must be >= 1")
    d = k if dim is None else dim
    if k > d:
        raise ValueError(f"cannot embed {k} populated levels in dimension {d}")
    amps = np.zeros(d, dtype=complex)
    amps[:k] = 1.0 / np.sqrt(k)
    return PureState(amps)


# Best-known amplitude-squared profiles maximizing R_n over k adjacent
# levels, keyed by (n, k).  Seeds for the optimizer; k > 5 must be computed.
_PSI_STAR_SQUARED = {
    (3, 2): (0.50, 0.50),
    (3, 3): (0.31, 0.38, 0.31),
    (3, 4): (0.22, 0.28, 0.28, 0.22),
    (3, 5): (0.17, 0.21, 0.23, 0.21, 0.17),
    (4, 2): (0.50, 0.50),
    (4, 3): (0.32, 0.36, 0.32),
    (4, 4): (0.23, 0.27, 0.27, 0.23),
    (4, 5): (0.18, 0.21, 0.22, 0.21, 0.18),
    (5, 2): (0.50, 0.50),
    (5, 3): (0.32, 0.36, 0.32),
    (5, 4): (0.24, 0.26, 0.26, 0.24),
    (5, 5): (0.19, 0.21, 0.21, 0.21, 0.19),
}


def psi_star(k: int, order: int = 3, dim: int | None = None) -> PureState:
    """Best-known state maximizing the order-``order`` certifier over k levels.

    Built-in profiles cover order in {3, 4, 5} and k in {2..5}; they are
    renormalized (two of the published rows sum to 1.01 after rounding).
    For larger k run the numeric optimizer instead.
    """
    if k == 1:
        return w_state(1, dim)
    key = (order, k)
    if key not in _PSI_STAR_SQUARED:
        raise ValueError(
            f"no built-in profile for (order={order}, k={k}); "
            "use cohcert.optimize.maximize_rn_over_ck"
        )
    prof = np.array(_PSI_STAR_SQUARED[key], dtype=float)
    prof = prof / prof.sum()
    d = k if dim is None else dim
    if k > d:
        raise ValueError(f"cannot embed {k} populated levels in dimension {d}")
    amps = np.zeros(d, dtype=complex)
    amps[:k] = np.sqrt(prof)
    return PureState(amps)


def werner_state(params: WernerParams, dim: int | None = None) -> DensityMatrix:
    """(1-lam)|W_k><W_k| + (lam/k) I_k, embedded in the first k of ``dim`` levels."""
    k, lam = params.k, params.lam
    d = k if dim is None else dim
    if k > d:
        raise ValueError(f"cannot embed {k} populated levels in dimension {d}")
    block = np.full((k, k), (1.0 - lam) / k, dtype=complex)
    block[np.diag_indices(k)] = 1.0 / k
    mat = np.zeros((d, d), dtype=complex)
    mat[:k, :k] = block
    return DensityMatrix(mat)


def l1_norm(rho: DensityMatrix) -> float:
    """Sum of the moduli of all off-diagonal entries."""
    mat = rho.matrix
    return float(np.abs(mat).sum() - np.abs(np.diagonal(mat)).sum())
