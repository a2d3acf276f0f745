"""Density matrices and their coherence-vector coordinates.

States are plain complex ndarrays (N x N density matrices). The coherence
vector collects the expansion coefficients of a state in a fixed traceless
Hermitian basis; the trace is carried separately so that population
conservation is visible as an invariant rather than an assumption.

For N = 2 the basis is (sigma_x, sigma_y, sigma_z) and the coherence vector
is the usual Bloch vector (x, y, z) = (rho_12 + rho_21, i(rho_12 - rho_21),
rho_11 - rho_22).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UnphysicalStateError

# Hermiticity / trace / positivity tolerance. Double precision accumulates
# error over thousands of propagation steps; 1e-9 leaves headroom.
VALIDITY_TOL = 1e-9


@dataclass(frozen=True)
class CoherenceVector:
    """Real coordinates of a density matrix: basis coefficients plus trace.

    bloch has length N**2 - 1; trace_part is tr(rho), normally 1.
    """

    bloch: np.ndarray
    trace_part: float

    def __post_init__(self):
        object.__setattr__(self, "bloch", np.asarray(self.bloch, dtype=float))
        n2 = self.bloch.size + 1
        dim = int(round(np.sqrt(n2)))
        if dim * dim != n2:
            raise ValueError("bloch length must be N**2 - 1 for integer N")
        object.__setattr__(self, "dim", dim)

    @property
    def norm(self):
        return float(np.linalg.norm(self.bloch))


@lru_cache(maxsize=16)
def gell_mann_basis(dim):
    """Generalized Gell-Mann matrices for the given dimension.

    Ordered symmetric, antisymmetric, then diagonal, and normalized so
    tr(g_a g_b) = 2 delta_ab. For dim = 2 this returns exactly
    (sigma_x, sigma_y, sigma_z).
    """
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    mats = []
    for j in range(dim):
        for k in range(j + 1, dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[j, k] = 1.0
            m[k, j] = 1.0
            mats.append(m)
    for j in range(dim):
        for k in range(j + 1, dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[j, k] = -1.0j
            m[k, j] = 1.0j
            mats.append(m)
    for l in range(1, dim):
        m = np.zeros((dim, dim), dtype=complex)
        for j in range(l):
            m[j, j] = 1.0
        m[l, l] = -float(l)
        m *= np.sqrt(2.0 / (l * (l + 1)))
        mats.append(m)
    return tuple(mats)


def check_density(rho, tol=VALIDITY_TOL):
    """Validate Hermiticity, unit trace and positivity of a density matrix.

    Returns the worst offense as a dict; raises UnphysicalStateError if any
    check exceeds tol.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace = float(abs(np.trace(rho) - 1.0))
    # eigvalsh assumes Hermiticity; symmetrize first so the PSD number is
    # meaningful even when the Hermiticity check is about to fail
    sym = 0.5 * (rho + rho.conj().T)
    mineig = float(np.linalg.eigvalsh(sym)[0])
    worst = {"hermiticity": herm, "trace": trace, "min_eigenvalue": mineig}
    if herm > tol or trace > tol or mineig < -tol:
        raise UnphysicalStateError(
            "unphysical state: hermiticity %.3g, trace offset %.3g, "
            "min eigenvalue %.3g (tol %.3g)" % (herm, trace, mineig, tol),
            worst=worst,
        )
    return worst


def from_pure(amplitudes):
    """Density matrix of the normalized superposition with given amplitudes."""
    c = np.asarray(amplitudes, dtype=complex).reshape(-1)
    nrm = np.linalg.norm(c)
    if nrm == 0.0:
        raise ValueError("degenerate state: zero amplitude vector")
    c = c / nrm
    return np.outer(c, c.conj())


def purity(rho):
    """tr(rho^2), in [1/N, 1]; equals 1 exactly on pure states."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.sum(rho * rho.T)))


def to_coherence_vector(rho):
    """Expand a density matrix over the traceless Hermitian basis.

    Component a is tr(rho g_a); the trace rides along as trace_part.
    """
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    basis = gell_mann_basis(dim)
    bloch = np.array([np.real(np.sum(rho * g.T)) for g in basis])
    return CoherenceVector(bloch=bloch, trace_part=float(np.real(np.trace(rho))))


def from_coherence_vector(v, tol=VALIDITY_TOL):
    """Reassemble the density matrix rho = (s/N) I + (1/2) sum_a v_a g_a.

    Raises UnphysicalStateError when the coordinates do not describe a
    positive matrix (for N = 2: the vector pokes outside the Bloch ball).
    """
    basis = gell_mann_basis(v.dim)
    rho = np.eye(v.dim, dtype=complex) * (v.trace_part / v.dim)
    for coef, g in zip(v.bloch, basis):
        rho += 0.5 * coef * g
    mineig = float(np.linalg.eigvalsh(rho)[0])
    if mineig < -tol:
        raise UnphysicalStateError(
            "unphysical state: coherence vector gives min eigenvalue %.3g"
            % mineig,
            worst={"min_eigenvalue": mineig},
        )
    return rho
