"""Simulated homodyne data pipeline: quadrature sampling by inverse CDF,
PCA temporal-mode extraction from time traces, and iterative
maximum-likelihood state reconstruction (rho <- N[R rho R]).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DomainError
from .fock import DensityMatrix, as_density_matrix
from .gates import PROJECTION_GRID_BOUND, PROJECTION_GRID_STEP, hermite_functions
from .memory import TemporalMode
from .wigner import marginal

DEFAULT_PHASES_DEG = (0.0, 30.0, 60.0, 90.0, 120.0, 150.0)
MLE_PLATEAU = 1e-9


@dataclass(frozen=True)
class HomodyneDataset:
    """Quadrature samples: frame i was measured at phase thetas[i] (radians)
    with outcome xs[i]."""

    thetas: np.ndarray
    xs: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        th = np.asarray(self.thetas, dtype=float)
        xs = np.asarray(self.xs, dtype=float)
        if th.shape != xs.shape or th.ndim != 1:
            raise DomainError("thetas and xs must be matching 1d arrays")
        object.__setattr__(self, "thetas", th)
        object.__setattr__(self, "xs", xs)

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def phase_set(self) -> np.ndarray:
        return np.unique(self.thetas)


@dataclass(frozen=True)
class TraceMatrix:
    """Homodyne time traces, one frame per row, sample interval dt."""

    data: np.ndarray = field(repr=False)
    dt: float

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2:
            raise DomainError("trace data must be 2d (frames x samples)")
        if not np.all(np.isfinite(data)):
            raise DomainError("trace data must be finite")
        object.__setattr__(self, "data", data)


def _sampling_grid(step: float = PROJECTION_GRID_STEP) -> np.ndarray:
    npts = int(round(2 * PROJECTION_GRID_BOUND / step)) + 1
    return np.linspace(-PROJECTION_GRID_BOUND, PROJECTION_GRID_BOUND, npts)


def sample_homodyne(rho, phases, n_frames: int, seed: int) -> HomodyneDataset:
    """Draw n_frames quadrature samples, cycling round-robin through `phases`
    (radians), each drawn from marginal(rho, theta) by inverse CDF on the
    cached projection grid."""
    rho = as_density_matrix(rho)
    rho.require_normalized()
    phases = np.asarray(phases, dtype=float)
    if phases.ndim != 1 or len(phases) == 0:
        raise DomainError("phases must be a nonempty 1d array")
    grid = _sampling_grid()
    rng = np.random.default_rng(seed)
    frame_phase = np.resize(phases, n_frames)
    xs = np.empty(n_frames)
    for theta in phases:
        sel = frame_phase == theta
        dens = marginal(rho, float(theta), grid)
        cdf = np.cumsum(dens)
        cdf = cdf / cdf[-1]
        u = rng.random(int(np.sum(sel)))
        xs[sel] = np.interp(u, cdf, grid)
    return HomodyneDataset(frame_phase, xs, seed)


def _binned_projectors(data: HomodyneDataset, dim: int, step: float):
    """Bin samples onto the projection grid per phase; returns (bras, counts)
    with bras of shape (dim, n_bins)."""
    bras = []
    counts = []
    for theta in data.phase_set:
        x = data.xs[data.thetas == theta]
        idx = np.round(x / step).astype(np.int64)
        uniq, cnt = np.unique(idx, return_counts=True)
        psi = hermite_functions(uniq * step, dim)
        bras.append(np.exp(1j * np.arange(dim)[:, None] * theta) * psi)
        counts.append(cnt.astype(float))
    return np.concatenate(bras, axis=1), np.concatenate(counts)


def mle_reconstruct(
    data: HomodyneDataset,
    dim: int,
    iterations: int = 300,
    step: float = PROJECTION_GRID_STEP,
) -> DensityMatrix:
    """Expectation-maximization tomography: rho <- N[R rho R] with
    R = sum_frames |x_theta><x_theta| / pr(x_theta).

    Samples are binned onto the projection grid (bin width `step`, far below
    the sampling noise) so R is accumulated by dense matrix products.  The
    log-likelihood is checked to be non-decreasing at every iteration.
    """
    if len(data) < 1000:
        raise DomainError("need >= 1e3 frames for a stable reconstruction")
    if dim > 30:
        raise DomainError("dim > 30 not supported by the reconstruction guard")
    if len(data.phase_set) < 2:
        warnings.warn("single measurement phase: reconstruction is ill-conditioned")
    B, counts = _binned_projectors(data, dim, step)  # (dim, V), (V,)
    rho = np.eye(dim, dtype=complex) / dim
    last_ll = -np.inf
    for _ in range(iterations):
        pr = np.einsum("iv,ij,jv->v", B.conj(), rho, B).real
        pr = np.maximum(pr, 1e-300)
        ll = float(np.sum(counts * np.log(pr)))
        if ll < last_ll - 1e-9 * abs(last_ll):
            raise ContractError("MLE log-likelihood decreased")
        R = (B * (counts / pr)) @ B.conj().T
        rho = R @ rho @ R
        rho = (rho + rho.conj().T) / 2
        rho = rho / np.trace(rho).real
        if np.isfinite(last_ll) and abs(ll - last_ll) < MLE_PLATEAU * abs(ll):
            last_ll = ll
            break
        last_ll = ll
    return DensityMatrix(dim, rho)


def log_likelihood(data: HomodyneDataset, rho: DensityMatrix, step: float = PROJECTION_GRID_STEP) -> float:
    """Binned log-likelihood of `data` under `rho` (same binning as the MLE)."""
    B, counts = _binned_projectors(data, rho.dim, step)
    pr = np.einsum("iv,ij,jv->v", B.conj(), rho.rho, B).real
    return float(np.sum(counts * np.log(np.maximum(pr, 1e-300))))


def simulate_traces(mode: TemporalMode, quad_samples, noise_var: float, seed: int) -> TraceMatrix:
    """trace_i(t) = g(t) * quad_samples[i] + white Gaussian noise of variance
    noise_var/dt per sample (so the matched-filter projection adds noise_var)."""
    if noise_var < 0:
        raise DomainError("noise_var must be >= 0")
    q = np.asarray(quad_samples, dtype=float)
    rng = np.random.default_rng(seed)
    traces = np.outer(q, mode.g)
    if noise_var > 0:
        traces = traces + rng.normal(0.0, np.sqrt(noise_var / mode.dt), traces.shape)
    return TraceMatrix(traces, mode.dt)


def project_traces(traces: TraceMatrix, mode: TemporalMode) -> np.ndarray:
    """Matched filter: quadrature estimate sum_t trace(t) g(t) dt per frame."""
    if traces.data.shape[1] != len(mode.g):
        raise DomainError("trace length does not match mode grid")
    return traces.data @ mode.g * traces.dt


def pca_temporal_mode(traces: TraceMatrix) -> tuple[TemporalMode, np.ndarray]:
    """Leading eigenvector of the empirical trace covariance as a
    TemporalMode (sign fixed: max-magnitude sample positive), plus the full
    eigenvalue spectrum in descending order."""
    frames, samples = traces.data.shape
    if frames < samples:
        raise DomainError("rank-deficient covariance: need frames >= samples")
    centered = traces.data - traces.data.mean(axis=0)
    cov = centered.T @ centered / frames
    w, v = np.linalg.eigh(cov)
    w = w[::-1]
    lead = v[:, -1]
    if lead[np.argmax(np.abs(lead))] < 0:
        lead = -lead
    t = np.arange(samples) * traces.dt
    g = lead / np.sqrt(np.trapezoid(lead**2, t))
    return TemporalMode(t, g), w
