"""Collective phonon modes of a coupled resonator array."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from namrspin.chain_model import (
    FrequencySample,
    ResonatorSpec,
    build_chain_coupling,
    build_quadratic_form,
    sample_errors,
    trial_stream,
    QuadraticForm,
)
from namrspin.errors import ConvergenceError, InstabilityError, StructuralError

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def symmetric_eigen(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ascending eigenvalues and an orthonormal matrix whose columns are
    the eigenvectors. Each eigenvector is signed so that its largest-magnitude
    component is positive; exactly tied eigenvalues are ordered by their
    eigenvector components.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise StructuralError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    scale = np.max(np.abs(a)) if a.size else 0.0
    if np.max(np.abs(a - a.T), initial=0.0) > 1e-12 * max(scale, np.finfo(float).tiny):
        raise StructuralError("matrix is not symmetric")
    a = (a + a.T) / 2.0
    vecs = np.eye(n)
    norm_f = np.linalg.norm(a)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2))
        if off <= JACOBI_TOL * norm_f:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-20 * norm_f:
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0 / (abs(theta) + np.hypot(theta, 1.0)), theta) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = a[q, p] = 0.0
                vp, vq = vecs[:, p].copy(), vecs[:, q].copy()
                vecs[:, p] = c * vp - s * vq
                vecs[:, q] = s * vp + c * vq
    else:
        raise ConvergenceError(f"Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    values = np.diag(a).copy()
    for k in range(n):
        col = vecs[:, k]
        if col[np.argmax(np.abs(col))] < 0:
            vecs[:, k] = -col
    order = sorted(range(n), key=lambda k: (values[k], *vecs[:, k]))
    return values[order], vecs[:, order]


@dataclass(frozen=True)
class CollectiveModes:
    """Normal modes and the Bogoliubov blocks ``a_i = sum_k u_ik b_k + v_ik b_k^+``."""

    omega: np.ndarray = field(repr=False)
    omega_tilde: np.ndarray = field(repr=False)
    mode_matrix: np.ndarray = field(repr=False)
    u_block: np.ndarray = field(repr=False)
    v_block: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.omega_tilde)

    def permuted(self, order) -> "CollectiveModes":
        """Same modes listed in a different order."""
        order = np.asarray(order)
        return CollectiveModes(self.omega, self.omega_tilde[order], self.mode_matrix[:, order],
                               self.u_block[:, order], self.v_block[:, order])


def bogoliubov_blocks(omega, omega_tilde, mode_matrix) -> tuple[np.ndarray, np.ndarray]:
    ratio = np.sqrt(np.outer(omega, 1.0 / np.asarray(omega_tilde)))
    u = mode_matrix / 2.0 * (ratio + 1.0 / ratio)
    v = mode_matrix / 2.0 * (ratio - 1.0 / ratio)
    return u, v


def collective_frequencies(form: QuadraticForm) -> CollectiveModes:
    values, vecs = symmetric_eigen(form.dynamical)
    bad = np.flatnonzero(values <= 0)
    if bad.size:
        k = int(bad[0])
        raise InstabilityError(f"mode {k} has non-positive squared frequency {values[k]:.6g}", k)
    omega_tilde = np.sqrt(values)
    u, v = bogoliubov_blocks(form.omega, omega_tilde, vecs)
    arrays = [np.array(x) for x in (form.omega, omega_tilde, vecs, u, v)]
    for x in arrays:
        x.setflags(write=False)
    return CollectiveModes(*arrays)


def chain_modes(spec: ResonatorSpec, sample: FrequencySample) -> CollectiveModes:
    return collective_frequencies(build_quadratic_form(sample, build_chain_coupling(spec.n, spec.g)))


def analytic_uniform_dispersion(n: int, omega_r: float, g: float) -> np.ndarray:
    """Closed-form mode frequencies of a disorder-free open chain, ascending.

    ``sqrt(omega_r^2 + 4 omega_r g (1 + cos((k+1) pi / n)))`` for ``k = 0..n-1``.
    """
    k = np.arange(n)
    brace = 1.0 + np.cos((k + 1) * np.pi / n)
    return np.sort(np.sqrt(omega_r**2 + 4.0 * omega_r * g * brace))


@dataclass(frozen=True)
class ModeShiftStats:
    reference: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    single_run: np.ndarray
    trials: int


def mode_shift_statistics(spec: ResonatorSpec, trials: int, seed: int) -> ModeShiftStats:
    """Offsets of the mode frequencies caused by disorder, averaged over trials.

    The offset of mode ``k`` is measured against the disorder-free chain with
    the same index ordering. ``single_run`` is the offset vector of trial 0.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    reference = chain_modes(spec, FrequencySample.uniform(spec)).omega_tilde
    shifts = np.empty((trials, spec.n))
    for k in range(trials):
        sample = sample_errors(spec, trial_stream(seed, k))
        shifts[k] = chain_modes(spec, sample).omega_tilde - reference
    std = shifts.std(axis=0, ddof=1) if trials > 1 else np.zeros(spec.n)
    return ModeShiftStats(reference, shifts.mean(axis=0), std, shifts[0].copy(), trials)
