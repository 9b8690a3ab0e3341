"""Dressed-picture Lindblad dynamics with a coherent resonator drive.

The dissipators use jump operators between exact light-matter eigenstates
(zero-temperature baths, no post-diagonalization rotating-wave step on the
system):  for every pair of dressed levels j < k the cavity channel decays
at kappa * w(w_kj / omega_c) * |<j|(a+a^dag)|k>|^2 and the qubit channel at
gamma * w(w_kj / omega_a) * |<j|C|k>|^2, where C is the qubit coupling
observable and w is the bath spectral weight (ohmic w(x) = x, or flat).

Two drive treatments are provided.  "dressed_rwa" moves to the frame
rotating at the drive frequency, keeps only drive matrix elements within
`resonance_cut` of resonance and yields a time-independent generator whose
steady state is a linear solve.  "full_time" keeps the explicit
cos(omega_d t) modulation and is integrated directly; it serves as the
validation oracle for the first treatment.

Vectorization is column-stacking throughout: vec(A rho B) =
(B^T kron A) vec(rho).
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import engine, models
from .errors import (
    DegenerateSteadyStateError,
    SimulationError,
    UndefinedCorrelationError,
)
from .models import SystemParams
from .operators import solve_linear
from .spectrum import (
    DEGENERACY_CUT,
    DressedBasis,
    PositiveFrequencyOperator,
    continuation_sweep,
    positive_frequency,
)

DEFAULT_N_LEVELS = 12
DEFAULT_RESONANCE_CUT = 0.05
RATE_FLOOR = 1e-18
KERNEL_SV_RTOL = 1e-10


def vectorize(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).flatten(order="F")


def unvectorize(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


def spre(m: np.ndarray) -> np.ndarray:
    return np.kron(np.eye(m.shape[0]), m)


def spost(m: np.ndarray) -> np.ndarray:
    return np.kron(m.T, np.eye(m.shape[0]))


def commutator_generator(h: np.ndarray) -> np.ndarray:
    """Superoperator for -i [h, rho]."""
    return -1j * (spre(h) - spost(h))


def dissipator_generator(c: np.ndarray) -> np.ndarray:
    """Superoperator for c rho c^dag - (1/2){c^dag c, rho}."""
    cdc = c.conj().T @ c
    return spre(c) @ spost(c.conj().T) - 0.5 * (spre(cdc) + spost(cdc))


@dataclass(frozen=True)
class JumpTerm:
    """One dressed decay channel |lower><upper| with its Lindblad rate."""

    rate: float
    lower: int
    upper: int
    channel: str  # "cavity" or "qubit"

    def matrix(self, dim: int) -> np.ndarray:
        m = np.zeros((dim, dim), dtype=complex)
        m[self.lower, self.upper] = 1.0
        return m


@dataclass(frozen=True)
class LindbladGenerator:
    """Assembled generator on a truncated set of dressed levels.

    `superoperator` is the static part (for "dressed_rwa" it already
    contains the retained drive; for "full_time" it is the undriven
    generator and `drive_generator` must be modulated by
    drive_amplitude * cos(drive_frequency * t)).  `effective_drive` holds
    the retained Hamiltonian drive matrix: (amplitude/2) times the kept
    near-resonant elements in "dressed_rwa", the full coupling quadrature
    (unit amplitude) in "full_time".
    """

    dim: int
    superoperator: np.ndarray
    jump_terms: tuple
    effective_drive: np.ndarray | None
    drive_mode: str
    drive_generator: np.ndarray | None
    drive_amplitude: float
    drive_frequency: float
    energies: np.ndarray
    grading: np.ndarray | None
    labels: tuple
    spectral_weight: str

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"state labeled {label!r} not inside the retained levels")


@dataclass(frozen=True)
class DensityState:
    """Hermitian, unit-trace, positive-semidefinite density matrix."""

    matrix: np.ndarray
    hermiticity_tol: float = field(default=1e-10, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        scale = max(np.abs(m).max(), 1e-300)
        if np.abs(m - m.conj().T).max() > self.hermiticity_tol * max(scale, 1.0):
            raise SimulationError("density matrix is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) > 1e-8:
            raise SimulationError(f"density matrix trace {tr} deviates from 1")
        if np.linalg.eigvalsh(m).min() < -1e-8:
            raise SimulationError("density matrix has a significantly negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def populations(self) -> np.ndarray:
        return np.diag(self.matrix).real.copy()


@dataclass(frozen=True)
class CorrelationSeries:
    """Delay grid and normalized two-time correlation values."""

    tau_grid: np.ndarray
    values: np.ndarray
    normalization: float
    metadata: dict

    def __post_init__(self):
        # copy before freezing so caller-owned arrays are never locked
        tau = np.array(self.tau_grid, dtype=float)
        vals = np.array(self.values, dtype=float)
        tau.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "tau_grid", tau)
        object.__setattr__(self, "values", vals)


def _spectral_factor(weight: str, x: float) -> float:
    if weight == "ohmic":
        return x
    if weight == "flat":
        return 1.0
    raise ValueError(f"unknown spectral weight {weight!r}")


def build_liouvillian(
    basis: DressedBasis,
    p: SystemParams,
    drive_mode: str = "dressed_rwa",
    n_levels: int = DEFAULT_N_LEVELS,
    spectral_weight: str = "ohmic",
    resonance_cut: float = DEFAULT_RESONANCE_CUT,
    qubit_coupling: str = "i_theta",
) -> LindbladGenerator:
    """Assemble the dressed-picture generator on the lowest n_levels states."""
    if drive_mode not in ("dressed_rwa", "full_time"):
        raise ValueError(f"unknown drive mode {drive_mode!r}")
    if n_levels < 2 or n_levels > basis.dim:
        raise ValueError("n_levels must lie in [2, basis dimension]")
    if p.drive_amplitude > 0 and p.drive_frequency <= 0:
        raise ValueError("a nonzero drive amplitude requires drive_frequency > 0")

    n = n_levels
    vt = basis.states[:, :n]
    w = basis.energies[:n] - basis.energies[0]
    x_full = vt.conj().T @ models.build_drive_operator(p).entries @ vt
    s_full = vt.conj().T @ models.build_emission_operator(p, qubit_coupling).entries @ vt

    jump_terms = []
    for j in range(n):
        for k in range(j + 1, n):
            wkj = w[k] - w[j]
            if wkj <= DEGENERACY_CUT:
                continue
            rate_c = p.kappa * _spectral_factor(spectral_weight, wkj / p.omega_c) * abs(x_full[j, k]) ** 2
            if rate_c > RATE_FLOOR:
                jump_terms.append(JumpTerm(float(rate_c), j, k, "cavity"))
            rate_q = p.gamma * _spectral_factor(spectral_weight, wkj / p.omega_a) * abs(s_full[j, k]) ** 2
            if rate_q > RATE_FLOOR:
                jump_terms.append(JumpTerm(float(rate_q), j, k, "qubit"))
    if not jump_terms:
        warnings.warn("no dissipative channels survive; the generator is purely coherent")

    dissipator = np.zeros((n * n, n * n), dtype=complex)
    for term in jump_terms:
        dissipator += term.rate * dissipator_generator(term.matrix(n))

    driven = p.drive_amplitude > 0
    if drive_mode == "dressed_rwa":
        kept, grading = _rotating_frame(w, x_full, p, resonance_cut) if driven else ([], np.zeros(n, dtype=int))
        h_eff = np.diag(w - grading * p.drive_frequency).astype(complex)
        drive_matrix = np.zeros((n, n), dtype=complex)
        for j, k in kept:
            drive_matrix[j, k] = 0.5 * p.drive_amplitude * x_full[j, k]
            drive_matrix[k, j] = np.conj(drive_matrix[j, k])
        h_eff += drive_matrix
        superoperator = commutator_generator(h_eff) + dissipator
        return LindbladGenerator(
            dim=n,
            superoperator=superoperator,
            jump_terms=tuple(jump_terms),
            effective_drive=drive_matrix,
            drive_mode=drive_mode,
            drive_generator=None,
            drive_amplitude=p.drive_amplitude,
            drive_frequency=p.drive_frequency,
            energies=w.copy(),
            grading=grading,
            labels=tuple(basis.labels[:n]),
            spectral_weight=spectral_weight,
        )

    h0 = np.diag(w).astype(complex)
    superoperator = commutator_generator(h0) + dissipator
    x_herm = 0.5 * (x_full + x_full.conj().T)
    return LindbladGenerator(
        dim=n,
        superoperator=superoperator,
        jump_terms=tuple(jump_terms),
        effective_drive=x_herm,
        drive_mode=drive_mode,
        drive_generator=commutator_generator(x_herm),
        drive_amplitude=p.drive_amplitude,
        drive_frequency=p.drive_frequency,
        energies=w.copy(),
        grading=None,
        labels=tuple(basis.labels[:n]),
        spectral_weight=spectral_weight,
    )


def _rotating_frame(w, x_full, p: SystemParams, resonance_cut: float):
    """Near-resonant drive elements plus a consistent integer grading.

    Kept elements must connect states whose grading differs by one; edges
    that contradict an already-assigned grading are dropped with a warning
    (they would stay time-dependent in the rotating frame).
    """
    n = len(w)
    x_scale = np.abs(x_full).max()
    candidates = [
        (j, k)
        for j in range(n)
        for k in range(j + 1, n)
        if abs((w[k] - w[j]) - p.drive_frequency) <= resonance_cut
        and abs(x_full[j, k]) > 1e-12 * x_scale
    ]
    grading = np.full(n, -1, dtype=int)
    grading[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for j, k in candidates:
                if j == v and grading[k] < 0:
                    grading[k] = grading[j] + 1
                    nxt.append(k)
                elif k == v and grading[j] < 0:
                    grading[j] = grading[k] - 1
                    nxt.append(j)
        frontier = sorted(nxt)
    for j in range(n):
        if grading[j] < 0:
            grading[j] = int(round(w[j] / p.drive_frequency)) if p.drive_frequency > 0 else 0
    kept = []
    for j, k in candidates:
        if grading[k] - grading[j] == 1:
            kept.append((j, k))
        else:
            warnings.warn(
                f"drive element ({j},{k}) conflicts with the rotating-frame "
                "grading and was dropped"
            )
    return kept, grading


def steady_state(generator: LindbladGenerator) -> DensityState:
    """Unique stationary state of the static generator.

    Verifies that the kernel is one-dimensional (SVD), then solves the
    constrained system obtained by replacing one row with the trace
    functional.  Raises DegenerateSteadyStateError otherwise.
    """
    m = generator.superoperator
    n = generator.dim
    sv = np.linalg.svd(m, compute_uv=False)
    null_dim = int(np.sum(sv < KERNEL_SV_RTOL * max(sv[0], 1e-300)))
    if null_dim != 1:
        raise DegenerateSteadyStateError(
            f"Liouvillian kernel dimension is {null_dim}, expected 1"
        )
    constrained = m.copy()
    constrained[0, :] = 0.0
    constrained[0, :: n + 1] = 1.0  # trace functional on column-stacked rho
    rhs = np.zeros(n * n, dtype=complex)
    rhs[0] = 1.0
    rho = unvectorize(solve_linear(constrained, rhs), n)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    residual = np.linalg.norm(m @ vectorize(rho))
    bound = 1e-9 * np.linalg.norm(m)
    if residual > bound:
        raise SimulationError(
            f"steady-state residual {residual:.3e} exceeds bound {bound:.3e}"
        )
    return DensityState(rho)


def evolve(
    generator: LindbladGenerator,
    rho0: DensityState,
    t_final: float,
    tol: float = 1e-9,
) -> DensityState:
    """Propagate a density matrix to t_final with the adaptive kernel.

    In "full_time" mode the cosine-modulated drive commutator is applied
    explicitly at every stage evaluation.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if t_final < 0:
        raise ValueError("t_final must be >= 0")
    if rho0.dim != generator.dim:
        raise ValueError("state and generator dimensions differ")
    if t_final == 0.0:
        return rho0
    y0 = vectorize(rho0.matrix)
    kwargs = {}
    if generator.drive_mode == "full_time" and generator.drive_amplitude > 0:
        kwargs = dict(
            Ld=generator.drive_generator,
            amp=generator.drive_amplitude,
            freq=generator.drive_frequency,
        )
    ys = engine.propagate(
        generator.superoperator,
        y0,
        np.array([t_final]),
        rtol=tol,
        atol=max(tol * 1e-3, 1e-14),
        **kwargs,
    )
    rho = unvectorize(ys[-1], generator.dim)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > 1e-8:
        raise SimulationError(f"trace drifted to {tr} during evolution")
    return DensityState(0.5 * (rho + rho.conj().T))


def _projected_lowering(generator: LindbladGenerator, oplus: PositiveFrequencyOperator):
    if oplus.dim < generator.dim:
        raise ValueError("operator dimension smaller than the generator's")
    return np.ascontiguousarray(oplus.matrix[: generator.dim, : generator.dim])


def steady_g2_zero(
    generator: LindbladGenerator,
    rho_ss: DensityState,
    oplus: PositiveFrequencyOperator,
) -> float:
    """Zero-delay normalized correlation in the stationary state."""
    op = _projected_lowering(generator, oplus)
    om = op.conj().T
    rho = rho_ss.matrix
    norm = np.trace(om @ op @ rho).real
    if norm < 1e-20:
        raise UndefinedCorrelationError("stationary emission rate vanishes")
    num = np.trace(om @ om @ op @ op @ rho).real
    return float(num / norm**2)


def g2_tau(
    generator: LindbladGenerator,
    rho_ss: DensityState,
    oplus: PositiveFrequencyOperator,
    tau_grid,
    tol: float = 1e-9,
) -> CorrelationSeries:
    """Delayed normalized correlation via the quantum regression theorem.

    values[m] = Tr[O- O+ exp(L tau_m)(O+ rho_ss O-)] / Tr[O- O+ rho_ss]^2,
    computed by propagating the operator-seeded state through the adaptive
    kernel with dense output on the tau grid.  Requires the time-independent
    ("dressed_rwa") generator.
    """
    if generator.drive_mode != "dressed_rwa":
        raise SimulationError(
            "delayed correlations need the time-independent generator; "
            "use drive_mode='dressed_rwa'"
        )
    tau_grid = np.asarray(tau_grid, dtype=float)
    op = _projected_lowering(generator, oplus)
    om = op.conj().T
    rho = rho_ss.matrix
    norm = np.trace(om @ op @ rho).real
    if norm < 1e-20:
        raise UndefinedCorrelationError("stationary emission rate vanishes")
    seed = op @ rho @ om
    measure = om @ op
    ys = engine.propagate(
        generator.superoperator,
        vectorize(seed / norm),
        tau_grid,
        rtol=tol,
        atol=max(tol * 1e-3, 1e-14),
    )
    raw = np.array(
        [np.trace(measure @ unvectorize(y, generator.dim)).real / norm for y in ys]
    )
    clipped = bool(np.any(raw < 0))
    if raw.min() < -1e-8:
        raise SimulationError(
            f"correlation value {raw.min():.3e} is negative beyond tolerance"
        )
    if clipped:
        warnings.warn("small negative correlation values were clipped to zero")
    values = np.clip(raw, 0.0, None)
    return CorrelationSeries(
        tau_grid=tau_grid,
        values=values,
        normalization=float(norm),
        metadata={
            "derivative_order": oplus.derivative_order,
            "drive_amplitude": generator.drive_amplitude,
            "drive_frequency": generator.drive_frequency,
            "spectral_weight": generator.spectral_weight,
            "clipped": clipped,
        },
    )


def sweep_g2_drive(
    p_template: SystemParams,
    epsilon_grid,
    n_levels: int = DEFAULT_N_LEVELS,
    spectral_weight: str = "ohmic",
    resonance_cut: float = DEFAULT_RESONANCE_CUT,
    qubit_coupling: str = "i_theta",
    target_label: str = "1+",
    n_tracked: int = 8,
    max_workers: int | None = None,
):
    """Driven stationary g2(0) and target-state population along a bias grid.

    At every grid point the drive is retuned to the ground -> target
    transition, the stationary state is solved in the rotating frame and the
    emission is read through the first time derivative of the qubit current
    observable.  Label continuation runs once sequentially; the per-point
    generator assembly and solves are dispatched to a thread pool when
    max_workers is given, with rows collected in grid order.

    Returns (column_names, rows) with columns
    (epsilon, g2_zero, pop_<target>, omega_d).
    """
    epsilon_grid = np.asarray(epsilon_grid, dtype=float)
    bases = continuation_sweep(
        p_template, "epsilon", epsilon_grid, n_tracked=n_tracked
    )

    def point(args):
        eps, basis = args
        idx = basis.label_index(target_label)
        if idx >= n_levels:
            raise SimulationError(
                f"target state {target_label!r} lies outside the retained levels"
            )
        omega_d = float(basis.energies[idx] - basis.energies[0])
        p = p_template.with_(epsilon=float(eps), drive_frequency=omega_d)
        oplus = positive_frequency(
            models.build_emission_operator(p, "i_theta"), basis, derivative_order=1
        )
        gen = build_liouvillian(
            basis,
            p,
            drive_mode="dressed_rwa",
            n_levels=n_levels,
            spectral_weight=spectral_weight,
            resonance_cut=resonance_cut,
            qubit_coupling=qubit_coupling,
        )
        rho = steady_state(gen)
        g2 = steady_g2_zero(gen, rho, oplus)
        pop = float(rho.matrix[idx, idx].real)
        return (float(eps), g2, pop, omega_d)

    jobs = list(zip(epsilon_grid, bases))
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(point, jobs))
    else:
        rows = [point(job) for job in jobs]
    pop_name = "pop_" + target_label.replace("+", "plus").replace("-", "minus")
    columns = ["epsilon", "g2_zero", pop_name, "omega_d"]
    return columns, np.array(rows, dtype=float)
