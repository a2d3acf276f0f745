"""Semigroup evolution, spectra and attractors.

Piecewise-constant fields are propagated exactly: each segment contributes
exp(L dt) factors built once and reused across the sample grid. Sampled
fields go through a classical fixed-step fourth-order integrator instead.
Both routes enforce forward time and state validity along the way.

Steady states come from the affine picture: v* = -A^{-1} b, with the
propagation route available as an independent cross-check, and constant
control sweeps are summarized by a least-squares conic fit in the best-fit
plane of the attractor points.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .bloch import AffineGenerator, to_affine
from .errors import NonUniqueEquilibriumError, SemigroupDomainError, UnphysicalStateError
from .liouville import total_generator, vectorize
from .states import CoherenceVector, check_density, gell_mann_basis

# per-sample state validity allowance along trajectories
PROPAGATION_TOL = 1e-7
# trace conservation is much tighter than positivity drift
TRACE_CONSERVATION_TOL = 1e-9
# spectral flags: real parts above this count as growing modes
SPECTRUM_TOL = 1e-12


def expm(m, t=1.0):
    """exp(m t) by scaling and squaring with a diagonal Pade approximant."""
    m = np.asarray(m)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix exponential of non-finite input")
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    return sla.expm(m * t)


@dataclass(frozen=True)
class Trajectory:
    """Sampled evolution: times, density matrices and coherence coordinates."""

    times: np.ndarray
    rho: np.ndarray
    bloch: np.ndarray
    trace_part: np.ndarray

    @property
    def dim(self):
        return self.rho.shape[1]

    def __len__(self):
        return self.times.size

    def purities(self):
        """tr(rho^2) at every sample."""
        return np.einsum("nij,nji->n", self.rho, self.rho).real

    def final_coherence(self):
        return CoherenceVector(bloch=self.bloch[-1], trace_part=float(self.trace_part[-1]))


def _assemble_trajectory(times, rhos):
    rhos = np.array(rhos)
    dim = rhos.shape[1]
    basis = np.array(gell_mann_basis(dim))
    bloch = np.einsum("aij,nji->na", basis, rhos).real
    trace = np.einsum("nii->n", rhos).real
    return Trajectory(
        times=np.array(times, dtype=float),
        rho=rhos,
        bloch=bloch,
        trace_part=trace,
    )


def _check_sample(rho, t, validity_tol, trace_tol):
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    tr_off = float(abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag))
    mineig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if herm > validity_tol or mineig < -validity_tol or tr_off > trace_tol:
        raise UnphysicalStateError(
            "state left the physical set at t=%.6g: hermiticity %.3g, "
            "trace offset %.3g, min eigenvalue %.3g" % (t, herm, tr_off, mineig),
            worst={"t": t, "hermiticity": herm, "trace": tr_off, "min_eigenvalue": mineig},
        )


def _effective_segments(field, duration):
    """Clip the segment list to the requested duration."""
    if duration is None:
        return list(field.segments)
    if duration < 0:
        raise SemigroupDomainError(
            "semigroup domain: evolution is defined for t >= 0 only"
        )
    total = field.total_duration
    if duration > total * (1 + 1e-12) + 1e-15:
        raise ValueError(
            "field covers [0, %g] but duration %g was requested" % (total, duration)
        )
    segs = []
    left = duration
    for dur, values in field.segments:
        if left <= 0:
            break
        take = min(dur, left)
        if take > 0:
            segs.append((take, values))
        left -= take
    return segs


def default_sample_dt(generators, total_duration, target=0.1):
    """Largest dt with norm(L) dt <= target across the given generators."""
    worst = max((float(np.linalg.norm(g)) for g in generators), default=0.0)
    if worst == 0.0:
        return total_duration
    return min(total_duration, target / worst)


def _sample_constant(apply_step, t0, duration, dt, times, push):
    """Walk one segment on a uniform grid, reusing the step operator.

    apply_step(h) returns a function advancing the state by h; push stores
    a sample. The remainder shorter than dt is folded into the final sample
    at the exact segment end.
    """
    m = int(np.floor(duration / dt + 1e-12))
    r = duration - m * dt
    if r <= 1e-9 * dt:
        r = 0.0
    if m > 0:
        step = apply_step(dt)
        for k in range(1, m + 1):
            step()
            if r == 0.0 and k == m:
                times.append(t0 + duration)
            else:
                times.append(t0 + k * dt)
            push()
    if r > 0.0:
        step = apply_step(r)
        step()
        times.append(t0 + duration)
        push()


def unitary_propagate(sys, field, rho0, sample_dt=None, duration=None):
    """Dissipation-free evolution by ordered products of segment unitaries.

    Each segment contributes exp(-i H(f) dt / hbar); the state is conjugated
    by the accumulated product. Purity is conserved along the way.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    check_density(rho0)
    segs = _effective_segments(field, duration)
    hams = [sys.hamiltonian(values) for _, values in segs]
    if sample_dt is None:
        total = sum(d for d, _ in segs)
        sample_dt = default_sample_dt(
            [h / sys.hbar for h in hams], total if total > 0 else 1.0
        )
    if sample_dt <= 0:
        raise ValueError("sample_dt must be positive")

    rho = rho0.copy()
    times = [0.0]
    rhos = [rho.copy()]
    t0 = 0.0
    for (dur, _), h in zip(segs, hams):
        state = {"rho": rho}

        def apply_step(dt, h=h, state=state):
            u = expm(-1j * h / sys.hbar, dt)
            def advance():
                state["rho"] = u @ state["rho"] @ u.conj().T
            return advance

        def push(state=state):
            _check_sample(state["rho"], times[-1], PROPAGATION_TOL, TRACE_CONSERVATION_TOL)
            rhos.append(state["rho"].copy())

        _sample_constant(apply_step, t0, dur, sample_dt, times, push)
        rho = state["rho"]
        t0 += dur
    return _assemble_trajectory(times, rhos)


def propagate(sys, spec, field, rho0, sample_dt=None, duration=None,
              validity_tol=PROPAGATION_TOL):
    """Evolve a state under the dissipative semigroup exp(Lt).

    Piecewise fields are exponentiated exactly per segment and subsampled at
    sample_dt; sampled fields use fixed fourth-order steps no larger than
    sample_dt. Every sample is checked for validity; the trace must hold to
    1e-9 and Hermiticity/positivity to validity_tol.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    check_density(rho0)
    if sys.dim != spec.dim or sys.dim != rho0.shape[0]:
        raise ValueError("system, dissipation and state dimensions differ")
    segs = _effective_segments(field, duration)
    gens = [total_generator(sys, spec, values) for _, values in segs]
    if sample_dt is None:
        total = sum(d for d, _ in segs)
        sample_dt = default_sample_dt(gens, total if total > 0 else 1.0)
    if sample_dt <= 0:
        raise ValueError("sample_dt must be positive")

    v = vectorize(rho0)
    times = [0.0]
    rhos = [rho0.copy()]
    state = {"v": v}
    dim = sys.dim

    def push():
        rho = state["v"].reshape(dim, dim)
        _check_sample(rho, times[-1], validity_tol, TRACE_CONSERVATION_TOL)
        rhos.append(rho.copy())

    t0 = 0.0
    for (dur, _), gen in zip(segs, gens):
        if field.kind == "piecewise":
            def apply_step(dt, gen=gen):
                p = expm(gen, dt)
                def advance():
                    state["v"] = p @ state["v"]
                return advance

            _sample_constant(apply_step, t0, dur, sample_dt, times, push)
        else:
            # held samples: integrate with the generator frozen per segment,
            # steps chosen to land exactly on the segment end
            n = max(1, int(np.ceil(dur / sample_dt - 1e-12)))
            h = dur / n
            for k in range(1, n + 1):
                state["v"] = _rk4_step(gen, state["v"], h)
                times.append(t0 + dur if k == n else t0 + k * h)
                push()
        t0 += dur
    return _assemble_trajectory(times, rhos)


def _rk4_step(gen, v, h):
    k1 = gen @ v
    k2 = gen @ (v + 0.5 * h * k1)
    k3 = gen @ (v + 0.5 * h * k2)
    k4 = gen @ (v + h * k3)
    return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues of a generator with forward-semigroup flags."""

    eigenvalues: np.ndarray
    max_real_part: float
    forward_bounded: bool
    zero_modes: int
    tol: float

    @property
    def unbounded(self):
        """True when some mode grows forward in time."""
        return not self.forward_bounded


def semigroup_spectrum(gen, tol=SPECTRUM_TOL):
    """Spectrum of a Liouville or affine generator with stability flags.

    forward_bounded means every real part is <= tol: exp(gen t) stays
    bounded for all t >= 0 but generally blows up for t < 0, which is what
    restricts the dynamics to a one-parameter semigroup. zero_modes counts
    steady-state candidates.
    """
    if isinstance(gen, AffineGenerator):
        mat = gen.a
    else:
        mat = np.asarray(gen)
    eig = np.linalg.eigvals(mat)
    order = np.lexsort((eig.imag, -eig.real))
    eig = eig[order]
    max_real = float(np.max(eig.real))
    return SpectrumReport(
        eigenvalues=eig,
        max_real_part=max_real,
        forward_bounded=max_real <= tol,
        zero_modes=int(np.sum(np.abs(eig) <= tol)),
        tol=tol,
    )


def steady_state(sys, spec, f):
    """Fixed point of the affine flow for constant field amplitudes.

    Solves A v* = -b. A singular A means the fixed point is not unique
    (pure rotations, vanishing rates) and is reported as an error carrying
    the null-space dimension.
    """
    aff = to_affine(total_generator(sys, spec, f))
    s = np.linalg.svd(aff.a, compute_uv=False)
    null_dim = int(np.sum(s <= 1e-12 * s[0])) if s[0] > 0 else s.size
    if null_dim > 0:
        raise NonUniqueEquilibriumError(
            "non-unique equilibrium: A has null space dimension %d" % null_dim,
            null_dim=null_dim,
        )
    v = np.linalg.solve(aff.a, -aff.b)
    return CoherenceVector(bloch=v, trace_part=1.0)


@dataclass(frozen=True)
class SweepReport:
    """Steady states over a constant-control sweep and their conic fit.

    points holds one attractor per amplitude. The fit runs in the best-fit
    plane through the points: plane_basis spans it, plane_residual is the
    worst out-of-plane distance, conic_coeffs = (c1..c6) describe
    c1 u^2 + c2 uv + c3 v^2 + c4 u + c5 v + c6 = 0 in plane coordinates with
    norm(c) = 1, and the discriminant c2^2 - 4 c1 c3 classifies the curve.
    Collinear or coincident points are reported as degenerate, not raised.
    """

    amplitudes: np.ndarray
    points: np.ndarray
    center: np.ndarray
    plane_basis: np.ndarray
    plane_residual: float
    conic_coeffs: np.ndarray
    conic_residual: float
    discriminant: float
    kind: str
    max_point_norm: float
    ball_radius: float

    @property
    def strictly_inside(self):
        return self.max_point_norm < self.ball_radius


def steady_state_sweep(sys, spec, control_index, amplitudes):
    """Attractor locus for one control swept over constant amplitudes.

    The remaining controls are held at zero. Needs at least 6 samples to
    pin down a conic.
    """
    amplitudes = np.asarray(amplitudes, dtype=float).reshape(-1)
    if amplitudes.size < 6:
        raise ValueError("need at least 6 amplitudes for a conic fit")
    if not 0 <= control_index < sys.n_controls:
        raise ValueError("control index %d out of range" % control_index)
    points = []
    for amp in amplitudes:
        f = np.zeros(sys.n_controls)
        f[control_index] = amp
        points.append(steady_state(sys, spec, f).bloch)
    points = np.array(points)
    dim = sys.dim
    # pure states sit at this coherence-vector norm; for two levels it is
    # the unit Bloch sphere
    radius = float(np.sqrt(2.0 * (1.0 - 1.0 / dim)))
    max_norm = float(np.max(np.linalg.norm(points, axis=1)))

    center = points.mean(axis=0)
    rel = points - center
    _, s, vt = np.linalg.svd(rel, full_matrices=False)
    degenerate = s.size < 2 or s[1] <= max(1e-12, 1e-12 * s[0])
    if degenerate:
        return SweepReport(
            amplitudes=amplitudes,
            points=points,
            center=center,
            plane_basis=np.zeros((2, points.shape[1])),
            plane_residual=0.0,
            conic_coeffs=np.zeros(6),
            conic_residual=float("nan"),
            discriminant=float("nan"),
            kind="degenerate",
            max_point_norm=max_norm,
            ball_radius=radius,
        )
    basis = vt[:2]
    uv = rel @ basis.T
    out_of_plane = rel - uv @ basis
    plane_residual = float(np.max(np.linalg.norm(out_of_plane, axis=1)))
    design = np.column_stack(
        [uv[:, 0] ** 2, uv[:, 0] * uv[:, 1], uv[:, 1] ** 2, uv[:, 0], uv[:, 1], np.ones(len(uv))]
    )
    _, _, vt6 = np.linalg.svd(design)
    coeffs = vt6[-1]
    lead = np.argmax(np.abs(coeffs))
    if coeffs[lead] < 0:
        coeffs = -coeffs
    residual = float(np.max(np.abs(design @ coeffs)))
    disc = float(coeffs[1] ** 2 - 4.0 * coeffs[0] * coeffs[2])
    if disc < 0:
        kind = "ellipse"
    elif disc > 0:
        kind = "hyperbola"
    else:
        kind = "parabola"
    return SweepReport(
        amplitudes=amplitudes,
        points=points,
        center=center,
        plane_basis=basis,
        plane_residual=plane_residual,
        conic_coeffs=coeffs,
        conic_residual=residual,
        discriminant=disc,
        kind=kind,
        max_point_norm=max_norm,
        ball_radius=radius,
    )
