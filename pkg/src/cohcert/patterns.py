"""Interference patterns as trigonometric polynomials with integer frequencies.

A pattern p(t) = c0 + 2 sum_m Re(c_m e^{-imt}) collects the detection
probability over one 2*pi period.  Moments M_n = <p^n> are computed exactly
by coefficient convolution; uniform sampling is kept as an independent
cross-check oracle.
"""

from dataclasses import dataclass

import numpy as np

from .states import DensityMatrix, PureState

__all__ = [
    "PatternCoefficients",
    "OverlapVector",
    "MomentVector",
    "PatternFit",
    "pattern_from_states",
    "pattern_from_overlaps",
    "moment",
    "moments",
    "ratio",
    "moment_by_sampling",
    "fit_pattern_from_samples",
]

RANGE_TOL = 1e-9
SAMPLES_PER_DIM = 16


class PatternCoefficients:
    """DC term c0 plus complex amplitudes c_m for frequencies m = 1..d-1."""

    __slots__ = ("c0", "c")

    def __init__(self, c0, c=()):
        c0 = float(c0)
        carr = np.array(c, dtype=complex)
        if carr.ndim != 1:
            raise ValueError("c must be a 1-d vector of complex coefficients")
        object.__setattr__(self, "c0", c0)
        carr.setflags(write=False)
        object.__setattr__(self, "c", carr)

    def __setattr__(self, name, value):
        raise AttributeError("PatternCoefficients is immutable")

    @property
    def dim(self):
        return self.c.size + 1

    def full_coefficients(self) -> np.ndarray:
        """Coefficients of e^{-imt} over m = -(d-1)..(d-1), DC at the center."""
        d = self.dim
        full = np.zeros(2 * d - 1, dtype=complex)
        full[d - 1] = self.c0
        if d > 1:
            full[d:] = self.c
            full[: d - 1] = self.c[::-1].conj()
        return full

    def evaluate(self, t) -> np.ndarray:
        """p(t) on a scalar or array of times (always real)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        m = np.arange(1, self.dim)
        phases = np.exp(-1j * np.outer(t, m))
        vals = self.c0 + 2.0 * (phases @ self.c).real
        return vals

    def is_physical(self, tol: float = RANGE_TOL) -> bool:
        """Check p(t) stays inside [0, 1] on a dense grid (16 points per level)."""
        grid = np.linspace(0.0, 2 * np.pi, SAMPLES_PER_DIM * self.dim, endpoint=False)
        vals = self.evaluate(grid)
        return bool(vals.min() >= -tol and vals.max() <= 1.0 + tol)

    def __repr__(self):
        return f"PatternCoefficients(c0={self.c0:.6g}, dim={self.dim})"


class OverlapVector:
    """Phase-free parametrization: overlaps a_p >= 0 with phases phi_p.

    The a_p are the moduli of psi_p * conj(chi_p); Cauchy-Schwarz bounds
    their sum by 1, with equality when preparation and projection coincide.
    """

    __slots__ = ("alpha", "phi")

    def __init__(self, alpha, phi=None):
        a = np.array(alpha, dtype=float)
        if a.ndim != 1 or a.size < 1:
            raise ValueError("alpha must be a non-empty 1-d vector")
        if a.min() < 0:
            raise ValueError("alpha entries must be nonnegative")
        if a.sum() > 1.0 + 1e-12:
            raise ValueError(f"sum(alpha) = {a.sum()!r} exceeds the Cauchy-Schwarz bound 1")
        p = np.zeros_like(a) if phi is None else np.array(phi, dtype=float)
        if p.shape != a.shape:
            raise ValueError("phi must match alpha in shape")
        a.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "phi", p)

    def __setattr__(self, name, value):
        raise AttributeError("OverlapVector is immutable")

    @property
    def dim(self):
        return self.alpha.size


@dataclass(frozen=True)
class MomentVector:
    """Moments M_1..M_nmax of a pattern (index with .order(n))."""

    values: np.ndarray

    def order(self, n: int) -> float:
        if not 1 <= n <= len(self.values):
            raise ValueError(f"moment order {n} outside 1..{len(self.values)}")
        return float(self.values[n - 1])


def _as_matrix(state) -> np.ndarray:
    if isinstance(state, DensityMatrix):
        return state.matrix
    if isinstance(state, PureState):
        a = state.amplitudes
        return np.outer(a, a.conj())
    raise TypeError(f"expected DensityMatrix or PureState, got {type(state).__name__}")


def pattern_from_states(rho, sigma) -> PatternCoefficients:
    """Pattern of Tr(e^{-iHt} rho e^{iHt} sigma): c_m = sum_p rho_{p,p-m} sigma_{p-m,p}.

    ``sigma`` may be mixed, covering measurements that fluctuate over a set
    of projections; for pure rho and sigma this is the Ramsey fringe
    |<chi|U(t)|psi>|^2.
    """
    r = _as_matrix(rho)
    s = _as_matrix(sigma)
    if r.shape != s.shape:
        raise ValueError(f"dimension mismatch: {r.shape[0]} vs {s.shape[0]}")
    d = r.shape[0]
    cs = np.array([np.diagonal(r, -m) @ np.diagonal(s, m) for m in range(d)])
    pat = PatternCoefficients(cs[0].real, cs[1:])
    if not pat.is_physical():
        raise ValueError("states produced a pattern outside [0, 1]")
    return pat


def pattern_from_overlaps(ov: OverlapVector) -> PatternCoefficients:
    """Pattern c0 = sum a_p^2, c_m = sum_p a_{p+m} a_p e^{i(phi_{p+m}-phi_p)}."""
    z = ov.alpha * np.exp(1j * ov.phi)
    d = ov.dim
    cs = np.array([np.sum(z[m:] * z[: d - m].conj()) for m in range(d)])
    pat = PatternCoefficients(cs[0].real, cs[1:])
    if not pat.is_physical():
        raise ValueError("overlaps produced a pattern outside [0, 1]")
    return pat


def _moments_from_full(full: np.ndarray, nmax: int) -> np.ndarray:
    """M_1..M_nmax as the DC coefficients of p^n, by repeated convolution."""
    out = np.empty(nmax)
    conv = full
    for n in range(1, nmax + 1):
        out[n - 1] = conv[(len(conv) - 1) // 2].real
        if n < nmax:
            conv = np.convolve(conv, full)
    return out


def moment(pat: PatternCoefficients, n: int) -> float:
    """Exact n-th moment (1/2pi) int p(t)^n dt, no quadrature error."""
    if n < 1:
        raise ValueError(f"moment order must be >= 1, got {n}")
    return float(_moments_from_full(pat.full_coefficients(), n)[n - 1])


def moments(pat: PatternCoefficients, nmax: int) -> MomentVector:
    """All moments M_1..M_nmax in one pass."""
    if nmax < 1:
        raise ValueError(f"nmax must be >= 1, got {nmax}")
    return MomentVector(_moments_from_full(pat.full_coefficients(), nmax))


def ratio(pat: PatternCoefficients, n: int) -> float:
    """Certifier value R_n = M_n / M_1^{n-1}."""
    if n < 2:
        raise ValueError(f"ratio order must be >= 2, got {n}")
    ms = _moments_from_full(pat.full_coefficients(), n)
    m1 = ms[0]
    if m1 <= 0.0:
        raise ValueError("dark pattern: M_1 = 0, ratio undefined")
    return float(ms[n - 1] / m1 ** (n - 1))


def moment_by_sampling(pat: PatternCoefficients, n: int, n_samples: int) -> float:
    """Independent oracle: mean of p(t_j)^n on a uniform grid.

    Exact for band-limited integrands provided no nonzero frequency of p^n
    aliases to DC, which the precondition n_samples > 2 n (d-1) guarantees
    with margin.
    """
    if n < 1:
        raise ValueError(f"moment order must be >= 1, got {n}")
    if n_samples <= 2 * n * (pat.dim - 1):
        raise ValueError(
            f"{n_samples} samples alias: need n_samples > {2 * n * (pat.dim - 1)}"
        )
    grid = np.arange(n_samples) * (2 * np.pi / n_samples)
    return float(np.mean(pat.evaluate(grid) ** n))


@dataclass(frozen=True)
class PatternFit:
    """Least-squares pattern fit: coefficients, RMS residual, conditioning."""

    pattern: PatternCoefficients
    residual: float
    cond: float


def fit_pattern_from_samples(samples, dim: int) -> PatternFit:
    """Ordinary least squares for {c0, Re c_m, Im c_m} from (t, p) samples.

    Needs at least 2*dim - 1 samples with t inside one period [0, 2pi).
    No regularization; the design-matrix condition number is reported
    instead so callers can judge the fit themselves.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("samples must be an (N, 2) array of (t, p) rows")
    t, p = arr[:, 0], arr[:, 1]
    n_unknowns = 2 * dim - 1
    if arr.shape[0] < n_unknowns:
        raise ValueError(f"need at least {n_unknowns} samples for dim={dim}, got {arr.shape[0]}")
    if t.min() < -1e-9 or t.max() >= 2 * np.pi + 1e-9:
        raise ValueError("sample times must lie within one period [0, 2pi)")
    m = np.arange(1, dim)
    design = np.hstack(
        [np.ones((t.size, 1)), 2 * np.cos(np.outer(t, m)), 2 * np.sin(np.outer(t, m))]
    )
    coef, _, rank, svals = np.linalg.lstsq(design, p, rcond=None)
    if rank < n_unknowns:
        raise ValueError(
            f"rank-deficient fit: design rank {rank} < {n_unknowns}; "
            "supply more distinct sample times"
        )
    c0 = coef[0]
    c = coef[1:dim] + 1j * coef[dim:]
    pat = PatternCoefficients(c0, c)
    rms = float(np.sqrt(np.mean((design @ coef - p) ** 2)))
    return PatternFit(pat, rms, float(svals[0] / svals[-1]))
