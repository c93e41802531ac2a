"""Operator algebra on the two-qubit x truncated-Fock Hilbert space.

Basis convention (qubits-major): index = (2*qA + qB)*(n_max+1) + n with
qA, qB in {0, 1} and Fock level n in [0, n_max].  Qubit pair ordering is
{|00>, |01>, |10>, |11>}.  All operators are dense complex matrices; the
dimensions in this problem stay at a few thousand at most, so sparsity
is not worth the bookkeeping here.

Pauli convention: sigma_z |1> = +|1>, sigma_z |0> = -|0>, i.e. |1> is the
excited state, and sigma_plus = |1><0| raises.  Collective operators are
sums of the corresponding single-qubit operators.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .errors import BadAxis, CutoffOverflow

# Single-qubit matrices in the {|0>, |1>} ordering used everywhere below.
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)

RWA_COUPLING_WARN = 0.2  # g/omega above this leaves the dispersive-free RWA regime
DEFAULT_LEAKAGE_TOL = 1e-8


def coherent_cutoff(z: complex) -> int:
    """Fock cutoff giving < 1e-8 tail leakage for a coherent state of amplitude z."""
    a = abs(z)
    return int(math.ceil(a * a + 8.0 * a + 10.0))


def squeezed_cutoff(r: float) -> int:
    """Even Fock cutoff giving small tail leakage for squeezing parameter r."""
    n = int(math.ceil(6.0 * math.sinh(r) ** 2 + 20.0))
    return n + (n % 2)


@dataclass(frozen=True)
class SystemSpec:
    """Cavity frequency, cavity-qubit coupling and photon cutoff.

    omega and g carry the same (angular-frequency) units; every derived
    time is measured against 1/omega.  n_max >= 2 so that the two-quanta
    exchange path |00;n> -> |Psi+;n-1> -> |11;n-2> fits in the space.
    """

    omega: float
    g: float
    n_max: int

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.g <= 0:
            raise ValueError(f"g must be positive, got {self.g}")
        if int(self.n_max) != self.n_max or self.n_max < 2:
            raise ValueError(f"n_max must be an integer >= 2, got {self.n_max}")
        object.__setattr__(self, "n_max", int(self.n_max))
        if self.g / self.omega >= RWA_COUPLING_WARN:
            warnings.warn(
                f"g/omega = {self.g / self.omega:.3g} is outside the weak-coupling "
                "regime; the rotating-wave coupling model becomes unreliable",
                stacklevel=2,
            )

    @property
    def fock_dim(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return 4 * (self.n_max + 1)

    def index(self, qa: int, qb: int, n: int) -> int:
        """Flat basis index of |qA qB; n>."""
        if not (0 <= n <= self.n_max):
            raise ValueError(f"Fock level {n} outside [0, {self.n_max}]")
        return (2 * qa + qb) * self.fock_dim + n


@dataclass
class PureState:
    """Complex amplitude vector over the qubits x Fock basis."""

    amplitudes: np.ndarray
    spec: SystemSpec

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.spec.dim,):
            raise ValueError(f"state has shape {amp.shape}, expected ({self.spec.dim},)")
        self.amplitudes = amp

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "PureState":
        return PureState(self.amplitudes / self.norm, self.spec)

    def leakage(self) -> float:
        """Population in the top two Fock levels, summed over qubit sectors."""
        grid = self.amplitudes.reshape(4, self.spec.fock_dim)
        return float(np.sum(np.abs(grid[:, -2:]) ** 2))

    def check_leakage(self, tol: float = DEFAULT_LEAKAGE_TOL) -> None:
        leak = self.leakage()
        if leak > tol:
            raise CutoffOverflow(
                f"population {leak:.3e} in top Fock levels exceeds tolerance {tol:.1e}; "
                f"raise n_max (currently {self.spec.n_max})"
            )

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def expectation(self, op: "OperatorMatrix | np.ndarray") -> complex:
        mat = op.matrix if isinstance(op, OperatorMatrix) else op
        return complex(np.vdot(self.amplitudes, mat @ self.amplitudes))

    def mean_photon_number(self) -> float:
        grid = np.abs(self.amplitudes.reshape(4, self.spec.fock_dim)) ** 2
        return float(np.sum(grid @ np.arange(self.spec.fock_dim)))


@dataclass
class OperatorMatrix:
    """Dense operator with a structural flag used for cheap sanity checks."""

    matrix: np.ndarray
    kind: str = "general"  # hermitian | unitary | general
    _HERM_TOL: float = field(default=1e-12, repr=False)
    _UNIT_TOL: float = field(default=1e-10, repr=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator must be square, got shape {mat.shape}")
        self.matrix = mat
        if self.kind == "hermitian":
            defect = np.max(np.abs(mat - mat.conj().T))
            if defect >= self._HERM_TOL:
                raise ValueError(f"hermitian flag violated, |M - M^dag| = {defect:.2e}")
        elif self.kind == "unitary":
            defect = np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])))
            if defect >= self._UNIT_TOL:
                raise ValueError(f"unitary flag violated, |M^dag M - I| = {defect:.2e}")
        elif self.kind != "general":
            raise ValueError(f"unknown operator kind {self.kind!r}")

    @property
    def dag(self) -> np.ndarray:
        return self.matrix.conj().T

    def __matmul__(self, other):
        rhs = other.matrix if isinstance(other, OperatorMatrix) else other
        return self.matrix @ rhs

    def apply(self, state: PureState) -> PureState:
        return PureState(self.matrix @ state.amplitudes, state.spec)


# ---------------------------------------------------------------------------
# elementary constructors
# ---------------------------------------------------------------------------

def fock_annihilation(fock_dim: int) -> np.ndarray:
    """Annihilation operator on the bare Fock factor, <n-1|a|n> = sqrt(n)."""
    a = np.zeros((fock_dim, fock_dim), dtype=complex)
    ns = np.arange(1, fock_dim)
    a[ns - 1, ns] = np.sqrt(ns)
    return a


def qubit_operator(single: np.ndarray, which: str, spec: SystemSpec) -> np.ndarray:
    """Lift a 2x2 operator onto qubit 'a' or 'b', identity elsewhere."""
    if which == "a":
        q = np.kron(single, ID2)
    elif which == "b":
        q = np.kron(ID2, single)
    else:
        raise ValueError(f"which must be 'a' or 'b', got {which!r}")
    return np.kron(q, np.eye(spec.fock_dim, dtype=complex))


def cavity_operator(op_fock: np.ndarray, spec: SystemSpec) -> np.ndarray:
    """Lift a Fock-factor operator to the full space (identity on qubits)."""
    return np.kron(np.eye(4, dtype=complex), op_fock)


def annihilation(spec: SystemSpec) -> OperatorMatrix:
    """Cavity annihilation operator on the full space."""
    return OperatorMatrix(cavity_operator(fock_annihilation(spec.fock_dim), spec))


def creation(spec: SystemSpec) -> OperatorMatrix:
    return OperatorMatrix(annihilation(spec).dag)


def number_operator(spec: SystemSpec) -> OperatorMatrix:
    n = np.diag(np.arange(spec.fock_dim, dtype=complex))
    return OperatorMatrix(cavity_operator(n, spec), kind="hermitian")


_SIGMA_BY_KIND = {
    "plus": SIGMA_PLUS,
    "minus": SIGMA_MINUS,
    "x": SIGMA_X,
    "y": SIGMA_Y,
    "z": SIGMA_Z,
}


def collective_sigma(kind: str, spec: SystemSpec) -> OperatorMatrix:
    """Collective two-qubit Pauli/ladder operator sigma_A + sigma_B."""
    try:
        single = _SIGMA_BY_KIND[kind]
    except KeyError:
        raise ValueError(f"kind must be one of {sorted(_SIGMA_BY_KIND)}, got {kind!r}")
    mat = qubit_operator(single, "a", spec) + qubit_operator(single, "b", spec)
    flag = "hermitian" if kind in ("x", "y", "z") else "general"
    return OperatorMatrix(mat, kind=flag)


def excitation_operator(spec: SystemSpec) -> OperatorMatrix:
    """Total excitation number a^dag a + sum_j sigma_j^+ sigma_j^-."""
    n_q = qubit_operator(SIGMA_PLUS @ SIGMA_MINUS, "a", spec) + qubit_operator(
        SIGMA_PLUS @ SIGMA_MINUS, "b", spec
    )
    return OperatorMatrix(number_operator(spec).matrix + n_q, kind="hermitian")


# ---------------------------------------------------------------------------
# unitaries
# ---------------------------------------------------------------------------

def displacement_op(
    z: complex, spec: SystemSpec, leakage_tol: float = DEFAULT_LEAKAGE_TOL
) -> OperatorMatrix:
    """Displacement exp(z a^dag - z* a) acting on the cavity factor.

    Raises CutoffOverflow when the displaced vacuum leaks more than
    leakage_tol into the top two Fock levels.
    """
    a = fock_annihilation(spec.fock_dim)
    d_fock = expm(z * a.conj().T - np.conj(z) * a)
    full = OperatorMatrix(cavity_operator(d_fock, spec), kind="unitary")
    probe = np.abs(d_fock[:, 0]) ** 2
    if float(np.sum(probe[-2:])) > leakage_tol:
        raise CutoffOverflow(
            f"displacement |z| = {abs(z):.3g} leaks {np.sum(probe[-2:]):.2e} at "
            f"n_max = {spec.n_max}; need n_max >= {coherent_cutoff(z)}"
        )
    return full


def squeeze_op(
    r: float, spec: SystemSpec, leakage_tol: float = DEFAULT_LEAKAGE_TOL
) -> OperatorMatrix:
    """Squeezing exp[(r/2)(a^dag^2 - a^2)] on the cavity factor."""
    if r < 0:
        raise ValueError(f"squeezing parameter must be >= 0, got {r}")
    a = fock_annihilation(spec.fock_dim)
    gen = 0.5 * r * (a.conj().T @ a.conj().T - a @ a)
    s_fock = expm(gen)
    full = OperatorMatrix(cavity_operator(s_fock, spec), kind="unitary")
    probe = np.abs(s_fock[:, 0]) ** 2
    if float(np.sum(probe[-2:])) > leakage_tol:
        raise CutoffOverflow(
            f"squeezing r = {r:.3g} leaks {np.sum(probe[-2:]):.2e} at "
            f"n_max = {spec.n_max}; need n_max >= {squeezed_cutoff(r)}"
        )
    return full


def qubit_rotation(theta: float, axis, spec: SystemSpec) -> OperatorMatrix:
    """Identical rotation of both qubits, exp[-i theta n.(sigma_A+sigma_B)/2]."""
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,) or abs(np.linalg.norm(axis) - 1.0) > 1e-12:
        raise BadAxis(f"axis must be a unit 3-vector, got {axis!r}")
    n_dot_sigma = axis[0] * SIGMA_X + axis[1] * SIGMA_Y + axis[2] * SIGMA_Z
    # exp[-i theta (n.sigma_A + n.sigma_B)/2] factorizes over the qubits
    half = math.cos(theta / 2.0) * ID2 - 1j * math.sin(theta / 2.0) * n_dot_sigma
    qubit_part = np.kron(half, half)
    return OperatorMatrix(
        np.kron(qubit_part, np.eye(spec.fock_dim, dtype=complex)), kind="unitary"
    )


def collective_z_exponential(angle: float, spec: SystemSpec) -> OperatorMatrix:
    """exp[-i angle (sigma_A^z + sigma_B^z)], diagonal in the qubit basis."""
    phases = np.exp(-1j * angle * np.array([-2.0, 0.0, 0.0, 2.0]))
    qubit_part = np.diag(phases)
    return OperatorMatrix(
        np.kron(qubit_part, np.eye(spec.fock_dim, dtype=complex)), kind="unitary"
    )


# ---------------------------------------------------------------------------
# reference states
# ---------------------------------------------------------------------------

def basis_state(spec: SystemSpec, qa: int, qb: int, n: int) -> PureState:
    amp = np.zeros(spec.dim, dtype=complex)
    amp[spec.index(qa, qb, n)] = 1.0
    return PureState(amp, spec)


def vacuum_state(spec: SystemSpec) -> PureState:
    return basis_state(spec, 0, 0, 0)


def product_state(qubit_vec, cavity_vec, spec: SystemSpec) -> PureState:
    qubit_vec = np.asarray(qubit_vec, dtype=complex)
    cavity_vec = np.asarray(cavity_vec, dtype=complex)
    if qubit_vec.shape != (4,) or cavity_vec.shape != (spec.fock_dim,):
        raise ValueError("expected a 4-vector and a Fock-factor vector")
    return PureState(np.kron(qubit_vec, cavity_vec), spec)


def symmetric_qubit_state(sign: int = +1) -> np.ndarray:
    """|Psi+-> = (|01> +- |10|)/sqrt(2) as a 4-vector."""
    v = np.zeros(4, dtype=complex)
    v[1] = 1.0 / math.sqrt(2.0)
    v[2] = sign / math.sqrt(2.0)
    return v


def bright_state(spec: SystemSpec, n: int) -> PureState:
    """|Psi+; n> with the symmetric single-excitation qubit pair."""
    cav = np.zeros(spec.fock_dim, dtype=complex)
    cav[n] = 1.0
    return product_state(symmetric_qubit_state(+1), cav, spec)


def coherent_amplitudes(z: complex, fock_dim: int) -> np.ndarray:
    """Truncated coherent-state amplitudes e^{-|z|^2/2} z^n / sqrt(n!)."""
    amp = np.zeros(fock_dim, dtype=complex)
    if z == 0:
        amp[0] = 1.0
        return amp
    n = np.arange(fock_dim)
    log_amp = -0.5 * abs(z) ** 2 + n * math.log(abs(z)) - 0.5 * gammaln(n + 1.0)
    amp[:] = np.exp(log_amp) * np.exp(1j * n * np.angle(z))
    return amp


def coherent_state(
    z: complex, spec: SystemSpec, leakage_tol: float = DEFAULT_LEAKAGE_TOL
) -> PureState:
    """|00> (x) |z>, built from the closed-form Fock amplitudes."""
    amp = coherent_amplitudes(z, spec.fock_dim)
    tail = 1.0 - float(np.sum(np.abs(amp) ** 2))
    if tail > leakage_tol:
        raise CutoffOverflow(
            f"coherent |z| = {abs(z):.3g} leaves {tail:.2e} beyond n_max = {spec.n_max}"
        )
    qubit = np.zeros(4, dtype=complex)
    qubit[0] = 1.0
    return product_state(qubit, amp / np.linalg.norm(amp), spec)


def squeezed_vacuum_amplitudes(r: float, fock_dim: int) -> np.ndarray:
    """Truncated amplitudes of exp[(r/2)(a^dag^2 - a^2)] |0>.

    Only even levels are populated:
    amp(2k) = (cosh r)^(-1/2) (tanh r)^k sqrt((2k)!) / (2^k k!),
    evaluated in log space so large cutoffs stay finite.
    """
    amp = np.zeros(fock_dim, dtype=complex)
    if r == 0:
        amp[0] = 1.0
        return amp
    k = np.arange((fock_dim - 1) // 2 + 1)
    log_amp = (
        -0.5 * math.log(math.cosh(r))
        + k * math.log(math.tanh(r))
        + 0.5 * gammaln(2 * k + 1.0)
        - k * math.log(2.0)
        - gammaln(k + 1.0)
    )
    amp[2 * k] = np.exp(log_amp)
    return amp


def partial_trace_cavity(state: PureState) -> np.ndarray:
    """Reduced 4x4 density matrix of the qubits, tracing out the cavity."""
    grid = state.amplitudes.reshape(4, state.spec.fock_dim)
    rho = grid @ grid.conj().T
    return 0.5 * (rho + rho.conj().T)
