"""Dynamical Lie algebras by commutator closure.

The closure algorithm repeatedly adjoins commutators of basis pairs,
orthonormalizing as it goes, until no new independent direction appears.
Affine generators (A, b) embed as (n+1) x (n+1) matrices [[A, b], [0, 0]],
whose matrix commutator reproduces the semidirect-sum bracket; complex
generators embed as real matrices via [[X, -Y], [Y, X]].
"""

from dataclasses import dataclass

import numpy as np

from .bloch import AffineGenerator, to_affine
from .errors import ClosureError
from .liouville import build_dissipator, commutator_superop

# relative singular-value threshold for rank decisions
CLOSURE_TOL = 1e-10
MAX_DEPTH = 8


@dataclass(frozen=True)
class LieBasis:
    """Orthonormal basis (Frobenius inner product) of a matrix Lie algebra."""

    elements: tuple
    ambient_dim: int

    @property
    def dim(self):
        return len(self.elements)


def affine_embed(gen):
    """[[A, b], [0, 0]] embedding of an affine generator or (A, b) pair."""
    if isinstance(gen, AffineGenerator):
        a, b = gen.a, gen.b
    else:
        a, b = gen
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float).reshape(-1)
    n = b.size
    m = np.zeros((n + 1, n + 1))
    m[:n, :n] = a
    m[:n, n] = b
    return m


def complex_to_real(m):
    """Real 2n x 2n image [[X, -Y], [Y, X]] of a complex n x n matrix.

    The embedding is an injective algebra homomorphism, so commutator
    closures of complex generators can run in real arithmetic.
    """
    m = np.asarray(m, dtype=complex)
    x, y = m.real, m.imag
    return np.block([[x, -y], [y, x]])


def lie_closure(generators, tol=CLOSURE_TOL, max_depth=MAX_DEPTH):
    """Commutator closure of a list of real square matrices.

    New candidates are normalized to unit Frobenius norm before the
    independence test, so rank decisions are not skewed by norm growth with
    depth. Raises ClosureError (with the partial basis attached) when
    max_depth rounds do not reach closure.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    mats = [np.asarray(g, dtype=float) for g in generators]
    if not mats:
        raise ValueError("need at least one generator")
    n = mats[0].shape[0]
    for g in mats:
        if g.shape != (n, n):
            raise ValueError("generators must share a common square shape")

    full = n * n
    basis = []                    # unit-norm matrices
    q = np.empty((full, full))    # orthonormal vectorized copies, row per element

    def try_add(m):
        nrm = np.linalg.norm(m)
        if nrm < 1e-14:
            return False
        m = m / nrm
        v = m.reshape(-1).copy()
        k = len(basis)
        # two projection passes keep the stored rows numerically orthonormal
        for _ in range(2):
            if k:
                v -= q[:k].T @ (q[:k] @ v)
        resid = np.linalg.norm(v)
        if resid <= tol:
            return False
        q[k] = v / resid
        basis.append(q[k].reshape(m.shape).copy())
        return True

    for g in mats:
        try_add(g)
    if not basis:
        raise ValueError("all generators vanish")

    frontier = list(range(len(basis)))
    for _ in range(max_depth):
        if not frontier or len(basis) == full:
            return LieBasis(elements=tuple(basis), ambient_dim=n)
        start = len(basis)
        # commutators are antisymmetric, so unordered pairs suffice; pairs
        # of older elements were exhausted in earlier rounds
        for i in frontier:
            bi = basis[i]
            for j in range(i):
                bj = basis[j]
                try_add(bi @ bj - bj @ bi)
        frontier = list(range(start, len(basis)))
    if not frontier:
        return LieBasis(elements=tuple(basis), ambient_dim=n)
    raise ClosureError(
        "closure not reached within depth %d (dim %d so far)" % (max_depth, len(basis)),
        partial=LieBasis(elements=tuple(basis), ambient_dim=n),
    )


def hamiltonian_algebra(sys, tol=CLOSURE_TOL, max_depth=MAX_DEPTH):
    """Real Lie algebra generated by {i H0 / hbar, i H_m / hbar}."""
    gens = [complex_to_real(1j * sys.h0 / sys.hbar)]
    for h in sys.controls:
        gens.append(complex_to_real(1j * h / sys.hbar))
    return lie_closure(gens, tol=tol, max_depth=max_depth)


def affine_generator_set(sys, spec):
    """Embedded affine generators of the controlled dissipative flow.

    One matrix for the internal drift, one per control Hamiltonian, one for
    the dissipator; their closure is the full dynamical algebra on the
    coherence vector.
    """
    gens = [affine_embed(to_affine(commutator_superop(sys.h0, sys.hbar)))]
    for h in sys.controls:
        gens.append(affine_embed(to_affine(commutator_superop(h, sys.hbar))))
    gens.append(affine_embed(to_affine(build_dissipator(spec))))
    return gens


def decompose_inhomogeneous(basis, tol=CLOSURE_TOL):
    """(homogeneous rank, translation rank) of an affine-embedded basis."""
    if basis.dim == 0:
        return (0, 0)
    n = basis.ambient_dim - 1
    lastrows = np.array([np.max(np.abs(m[n, :])) for m in basis.elements])
    if np.max(lastrows) > tol:
        raise ValueError("affine embedding required: last rows must vanish")
    homog = np.array([m[:n, :n].reshape(-1) for m in basis.elements])
    trans = np.array([m[:n, n] for m in basis.elements])
    s_hom = np.linalg.svd(homog, compute_uv=False)
    s_trans = np.linalg.svd(trans, compute_uv=False)
    # one common scale: a block that is numerically zero relative to the
    # basis as a whole must not inflate its own rank
    scale = max(s_hom[0] if s_hom.size else 0.0, s_trans[0] if s_trans.size else 0.0)
    if scale == 0.0:
        return (0, 0)
    return (
        int(np.sum(s_hom > tol * scale)),
        int(np.sum(s_trans > tol * scale)),
    )
