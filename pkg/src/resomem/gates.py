"""Two-mode beamsplitter in the Fock basis and homodyne projection.

Beamsplitter convention (matching the effective resonator relations):
    a'    =  sqrt(T) a + sqrt(1-T) b,
    b_out = -sqrt(1-T) a + sqrt(T) b,
realized by U = exp[theta (a^dag b - a b^dag)] with cos(theta) = sqrt(T).
The unitary conserves total photon number, so it is applied block by block
on the fixed-N subspaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import ContractError, DimensionError, DomainError
from .fock import DensityMatrix, FockVector

PROJECTION_GRID_BOUND = 12.0
PROJECTION_GRID_STEP = 1e-3


@dataclass(frozen=True)
class JointState:
    """Two-mode pure state; amp[nA, nB] is the amplitude of |nA, nB>."""

    dimA: int
    dimB: int
    amp: np.ndarray = field(repr=False)

    def __post_init__(self):
        amp = np.asarray(self.amp, dtype=complex)
        if amp.shape != (self.dimA, self.dimB):
            raise DimensionError(f"amp shape {amp.shape} != ({self.dimA}, {self.dimB})")
        object.__setattr__(self, "amp", amp)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))

    def require_normalized(self, tol: float = 1e-9):
        if abs(self.norm - 1.0) > tol:
            raise ContractError(f"joint state not normalized: |amp|={self.norm}")

    def total_photon_distribution(self) -> np.ndarray:
        """Probability of total photon number N = nA + nB."""
        p2 = np.abs(self.amp) ** 2
        out = np.zeros(self.dimA + self.dimB - 1)
        for na in range(self.dimA):
            out[na : na + self.dimB] += p2[na]
        return out


def _bs_block(N: int, dimA: int, dimB: int, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Rotation on the fixed-N subspace; returns (valid nA indices, block unitary)."""
    na = np.arange(max(0, N - dimB + 1), min(N, dimA - 1) + 1)
    size = len(na)
    gen = np.zeros((size, size))
    for i, n in enumerate(na[:-1]):
        # a^dag b : |n, N-n> -> sqrt((n+1)(N-n)) |n+1, N-n-1>
        c = np.sqrt((n + 1) * (N - n))
        gen[i + 1, i] += c
        gen[i, i + 1] -= c
    return na, expm(theta * gen)


def beamsplitter_apply(a: FockVector, b: FockVector, T: float) -> JointState:
    """Mix two single-mode states on a beamsplitter of transmittance T."""
    if a.dim != b.dim:
        raise DimensionError("input dimensions must match")
    if not 0.0 <= T <= 1.0:
        raise DomainError(f"T={T} outside [0, 1]")
    joint = np.outer(a.amp, b.amp)
    return beamsplitter_apply_joint(JointState(a.dim, b.dim, joint), T)


def beamsplitter_apply_joint(j: JointState, T: float) -> JointState:
    """Apply the beamsplitter unitary to an arbitrary two-mode state."""
    if not 0.0 <= T <= 1.0:
        raise DomainError(f"T={T} outside [0, 1]")
    theta = float(np.arccos(np.sqrt(T)))
    out = np.zeros_like(j.amp)
    for N in range(j.dimA + j.dimB - 1):
        na, block = _bs_block(N, j.dimA, j.dimB, theta)
        vec = j.amp[na, N - na]
        out[na, N - na] = block @ vec
    return JointState(j.dimA, j.dimB, out)


def hermite_functions(x: float | np.ndarray, dim: int) -> np.ndarray:
    """psi_n(x) = pi^{-1/4} (2^n n!)^{-1/2} H_n(x) e^{-x^2/2} via the stable
    three-term recurrence on psi_n directly; shape (dim,) + shape(x)."""
    x = np.asarray(x, dtype=float)
    psi = np.zeros((dim,) + x.shape)
    psi[0] = np.pi ** -0.25 * np.exp(-x * x / 2)
    if dim > 1:
        psi[1] = np.sqrt(2.0) * x * psi[0]
    for n in range(2, dim):
        psi[n] = np.sqrt(2.0 / n) * x * psi[n - 1] - np.sqrt((n - 1) / n) * psi[n - 2]
    return psi


def quadrature_eigenbra(x: float, theta: float, dim: int) -> np.ndarray:
    """Dual vector of the x_theta quadrature eigenvalue x; component n is
    e^{i n theta} psi_n(x). theta = pi/2 turns the x projection into a p
    projection."""
    if dim < 2:
        raise DimensionError("dim must be >= 2")
    psi = hermite_functions(float(x), dim)
    return np.exp(1j * np.arange(dim) * theta) * psi


def homodyne_project(j: JointState, mode: str, theta: float, value: float):
    """Project one mode onto the quadrature eigenvalue `value` at phase theta.

    Returns (unnormalized survivor FockVector, density). The density is the
    squared norm of the projected vector and integrates to 1 over value.
    """
    j.require_normalized()
    dim = _mode_dim(j, mode)
    bra = quadrature_eigenbra(value, theta, dim)
    if mode == "B":
        surv = j.amp @ bra
        sdim = j.dimA
    else:
        surv = j.amp.T @ bra
        sdim = j.dimB
    density = float(np.linalg.norm(surv) ** 2)
    return FockVector(sdim, surv), density


def _mode_dim(j: JointState, mode: str) -> int:
    if mode == "A":
        return j.dimA
    if mode == "B":
        return j.dimB
    raise DomainError(f"mode must be 'A' or 'B', got {mode!r}")


def homodyne_density_grid(j: JointState, mode: str, theta: float, grid: np.ndarray):
    """Vectorized projection onto every value in `grid`.

    Returns (proj, density): proj[i] is the unnormalized surviving vector for
    grid[i], density[i] its squared norm.
    """
    dim = _mode_dim(j, mode)
    psi = hermite_functions(np.asarray(grid, dtype=float), dim)  # (dim, G)
    bras = np.exp(1j * np.arange(dim)[:, None] * theta) * psi
    amp = j.amp if mode == "B" else j.amp.T
    proj = (amp @ bras).T  # (G, surviving dim)
    density = np.sum(np.abs(proj) ** 2, axis=1)
    return proj, density


def window_condition(
    j: JointState,
    mode: str,
    theta: float,
    lo: float,
    hi: float,
    step: float = PROJECTION_GRID_STEP,
):
    """Condition on the quadrature outcome falling in [lo, hi].

    Integrates the projected states over the window by the trapezoid rule and
    returns (normalized DensityMatrix of the survivor, acceptance probability).
    """
    if not lo < hi:
        raise DomainError("empty window: need lo < hi")
    j.require_normalized()
    npts = max(3, int(round((hi - lo) / step)) + 1)
    grid = np.linspace(lo, hi, npts)
    proj, density = homodyne_density_grid(j, mode, theta, grid)
    w = np.full(npts, grid[1] - grid[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    rho = (proj.conj().T * w) @ proj
    acceptance = float(np.sum(w * density))
    rho = rho / np.trace(rho).real
    sdim = j.dimA if mode == "B" else j.dimB
    return DensityMatrix(sdim, rho), acceptance


def full_line_window(j: JointState, mode: str, theta: float, step: float = PROJECTION_GRID_STEP):
    """Window over the full projection grid [-bound, bound]; the survivor is
    the reduced state of the remaining mode."""
    return window_condition(j, mode, theta, -PROJECTION_GRID_BOUND, PROJECTION_GRID_BOUND, step)
