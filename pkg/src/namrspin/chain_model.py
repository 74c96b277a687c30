"""Physical parameters, frequency disorder and the quadratic form of a resonator array.

All frequencies are angular (rad/s). Conversion from Hz happens only at the
configuration boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.constants

from namrspin.errors import DomainError, StructuralError


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = scipy.constants.hbar
    mu_B: float = scipy.constants.physical_constants["Bohr magneton"][0]
    g_s: float = 2.0

    def __post_init__(self):
        if self.hbar <= 0 or self.mu_B <= 0:
            raise DomainError("physical constants must be strictly positive")
        if self.g_s != 2.0:
            raise DomainError("electron g-factor is fixed at 2")


CONSTANTS = PhysicalConstants()


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=float)
    out.setflags(write=False)
    return out


def zero_point_amplitude(mass: float, omega: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Ground-state position spread ``sqrt(hbar / (2 m omega))`` in metres."""
    if mass <= 0 or omega <= 0:
        raise DomainError(f"mass and omega must be positive (got mass={mass}, omega={omega})")
    return float(np.sqrt(constants.hbar / (2.0 * mass * omega)))


def spin_resonator_coupling(grad: float, a0: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Magnetic spin-resonator coupling ``g_s mu_B G a0 / hbar`` in rad/s.

    ``grad`` is the field gradient at the spin in T/m, ``a0`` the zero-point
    amplitude of the resonator tip in m.
    """
    if a0 <= 0:
        raise DomainError(f"zero-point amplitude must be positive, got {a0}")
    if grad < 0:
        raise DomainError(f"field gradient must be non-negative, got {grad}")
    return constants.g_s * constants.mu_B * grad * a0 / constants.hbar


@dataclass(frozen=True)
class ResonatorSpec:
    """Parameters of a uniform resonator chain.

    Attributes
    ----------
    n : int
        Number of resonators (and spins).
    omega_r : float
        Mean fundamental angular frequency.
    g : float
        Nearest-neighbour link coupling.
    lambda_bar : float
        Spin-resonator coupling of a resonator at exactly ``omega_r``.
    delta_max : float
        Bound on the relative frequency error of each resonator.
    """

    n: int
    omega_r: float
    g: float
    lambda_bar: float
    delta_max: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n}")
        if not self.omega_r > 0:
            raise DomainError(f"omega_r must be positive, got {self.omega_r}")
        if not self.g >= 0:
            raise DomainError(f"g must be non-negative, got {self.g}")
        if not 0 <= self.delta_max < 1:
            raise DomainError(f"delta_max must lie in [0, 1), got {self.delta_max}")
        if not np.isfinite(self.lambda_bar):
            raise DomainError("lambda_bar must be finite")

    def with_changes(self, **changes) -> "ResonatorSpec":
        fields = dict(n=self.n, omega_r=self.omega_r, g=self.g, lambda_bar=self.lambda_bar,
                      delta_max=self.delta_max)
        fields.update(changes)
        return ResonatorSpec(**fields)


@dataclass(frozen=True)
class FrequencySample:
    """One disorder draw: absolute frequency errors around ``omega_r``."""

    omega_r: float
    epsilon: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "epsilon", _frozen(np.atleast_1d(self.epsilon)))
        if self.epsilon.ndim != 1:
            raise StructuralError("epsilon must be one-dimensional")
        if np.any(self.omega <= 0):
            raise DomainError("every resonator frequency must be positive")

    @property
    def n(self) -> int:
        return len(self.epsilon)

    @property
    def omega(self) -> np.ndarray:
        return self.omega_r + self.epsilon

    @property
    def delta(self) -> np.ndarray:
        return self.epsilon / self.omega_r

    @classmethod
    def from_delta(cls, omega_r: float, delta) -> "FrequencySample":
        return cls(omega_r, omega_r * np.asarray(delta, dtype=float))

    @classmethod
    def uniform(cls, spec: ResonatorSpec) -> "FrequencySample":
        return cls(spec.omega_r, np.zeros(spec.n))

    def __eq__(self, other):
        if not isinstance(other, FrequencySample):
            return NotImplemented
        return self.omega_r == other.omega_r and np.array_equal(self.epsilon, other.epsilon)

    def __hash__(self):
        return hash((self.omega_r, self.epsilon.tobytes()))


def trial_stream(seed: int, *key: int) -> np.random.Generator:
    """Independent random stream for ``(seed, *key)``.

    Substreams are derived by key rather than by draw order, so trial ``k``
    sees the same numbers whether trials run serially or in any order.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key)))


def sample_errors(spec: ResonatorSpec, stream: np.random.Generator) -> FrequencySample:
    """Draw independent relative errors uniformly from ``[-delta_max, +delta_max]``."""
    if spec.delta_max == 0:
        return FrequencySample.uniform(spec)
    delta = stream.uniform(-spec.delta_max, spec.delta_max, size=spec.n)
    return FrequencySample.from_delta(spec.omega_r, delta)


@dataclass(frozen=True)
class CouplingGraph:
    """Symmetric couplings ``g_ij`` including the self-couplings on the diagonal."""

    g_matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        g = _frozen(self.g_matrix)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise StructuralError(f"coupling matrix must be square, got shape {g.shape}")
        if not np.array_equal(g, g.T):
            raise StructuralError("coupling matrix must be symmetric")
        object.__setattr__(self, "g_matrix", g)

    @property
    def n(self) -> int:
        return self.g_matrix.shape[0]


def _graph_from_edges(n: int, edges, g: float) -> CouplingGraph:
    mat = np.zeros((n, n))
    for i, j in edges:
        mat[i, j] = mat[j, i] = g
        mat[i, i] += g
        mat[j, j] += g
    return CouplingGraph(mat)


def build_chain_coupling(n: int, g: float) -> CouplingGraph:
    """Open chain: link ``g`` between neighbours, self-coupling ``g`` per attached wire.

    The diagonal is ``(g, 2g, ..., 2g, g)``; a lone resonator has no wire.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if g < 0:
        raise DomainError(f"g must be non-negative, got {g}")
    return _graph_from_edges(n, [(i, i + 1) for i in range(n - 1)], g)


def build_lattice_coupling(rows: int, cols: int, g: float) -> CouplingGraph:
    """Rectangular lattice with 4-neighbour links; sites are numbered row-major."""
    if rows < 1 or cols < 1:
        raise DomainError(f"lattice dimensions must be >= 1, got {rows}x{cols}")
    if g < 0:
        raise DomainError(f"g must be non-negative, got {g}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            site = r * cols + c
            if c + 1 < cols:
                edges.append((site, site + 1))
            if r + 1 < rows:
                edges.append((site, site + cols))
    return _graph_from_edges(rows * cols, edges, g)


@dataclass(frozen=True)
class QuadraticForm:
    """Blocks of the phonon Hamiltonian and its mass-weighted dynamical matrix.

    ``a_block`` and ``b_block`` are the normal and anomalous blocks of
    ``H = a^+ [[A, B], [B, A]] a``; ``dynamical`` has the squared mode
    frequencies as eigenvalues. ``omega`` holds the bare resonator frequencies.
    """

    omega: np.ndarray = field(repr=False)
    a_block: np.ndarray = field(repr=False)
    b_block: np.ndarray = field(repr=False)
    dynamical: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.omega)


def build_quadratic_form(sample: FrequencySample, graph: CouplingGraph) -> QuadraticForm:
    if sample.n != graph.n:
        raise StructuralError(f"sample has {sample.n} resonators but graph has {graph.n}")
    omega = sample.omega
    gm = graph.g_matrix
    n = sample.n
    b = gm / 2.0
    a = b + np.diag(omega / 2.0)
    v = np.diag(omega**2 + 2.0 * np.diag(gm) * omega)
    for i in range(n):
        for j in range(i + 1, n):
            if gm[i, j] != 0.0:
                v[i, j] = v[j, i] = 2.0 * gm[i, j] * np.sqrt(omega[i] * omega[j])
    return QuadraticForm(_frozen(omega), _frozen(a), _frozen(b), _frozen(v))
