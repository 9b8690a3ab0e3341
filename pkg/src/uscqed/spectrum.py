"""Dressed-state spectroscopy: eigensystem with physical labels attached.

States are labeled by their weak-coupling lineage ("0" for the ground
state, "1-", "1+", "2-", ... for the doublet members), assigned by
adiabatic continuation: the coupling is swept up from nearly zero in small
steps and each eigenvector inherits the label of the previous-step vector
it overlaps most.  For nonzero bias the labels are continued in the bias
at fixed coupling, seeded at zero bias.  Energy order is never used to
resolve labels at a crossing; eigenvector overlap is.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import models, operators as ops
from .errors import LabelAmbiguityError, NoCrossingError, SimulationError
from .models import SystemParams
from .operators import OperatorMatrix

LAMBDA_SEED = 1e-3
CONTINUATION_STEP = 4e-3
OVERLAP_AMBIGUITY = 1e-6
PARITY_PURITY_TOL = 1e-8
DEGENERACY_CUT = 1e-9
DEFAULT_N_TRACKED = 8


@dataclass(frozen=True)
class DressedBasis:
    """Sorted eigensystem of one Hamiltonian with lineage labels and parity tags."""

    energies: np.ndarray
    states: np.ndarray  # column k is eigenvector k
    labels: tuple  # str or None per state
    parities: tuple  # +1, -1 or None per state
    params: SystemParams

    def __post_init__(self):
        # copy before freezing so caller-owned arrays are never locked
        energies = np.array(self.energies, dtype=float)
        states = np.array(self.states, dtype=complex)
        energies.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "states", states)

    @property
    def dim(self) -> int:
        return len(self.energies)

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"state labeled {label!r} is not tracked in this basis")

    def transition_frequency(self, label_lo: str, label_hi: str) -> float:
        return float(
            self.energies[self.label_index(label_hi)]
            - self.energies[self.label_index(label_lo)]
        )


@dataclass(frozen=True)
class PositiveFrequencyOperator:
    """Lowering part of an observable in the dressed basis.

    Entry (i, j) equals (-i w_ji)^derivative_order * O_ij for w_j > w_i and
    zero otherwise, so the matrix is strictly upper triangular in energy
    order; the negative-frequency partner is the conjugate transpose.
    """

    matrix: np.ndarray
    derivative_order: int
    energies: np.ndarray

    def __post_init__(self):
        # copy before freezing so caller-owned arrays are never locked
        matrix = np.array(self.matrix, dtype=complex)
        energies = np.array(self.energies, dtype=float)
        matrix.setflags(write=False)
        energies.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "energies", energies)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def negative(self) -> np.ndarray:
        return self.matrix.conj().T


def _number_operator(n_max: int) -> np.ndarray:
    qubit_exc = np.diag([1.0, 0.0])  # |e><e|
    return np.kron(qubit_exc, np.eye(n_max + 1)) + np.kron(
        np.eye(2), np.diag(np.arange(n_max + 1, dtype=float))
    )


def _seed_labels(decomp, n_max: int, n_tracked: int) -> dict:
    """Label eigenstates of a (nearly) decoupled model by excitation number.

    The ground state is "0"; for each excitation multiplet the lower state
    is "N-" and the upper "N+".  Fails loudly when a multiplet is internally
    degenerate (the +/- split is then undefined).
    """
    nop = _number_operator(n_max)
    values, vectors = decomp.values, decomp.vectors
    dim = len(values)
    exc = np.real(np.einsum("ij,ik,kj->j", vectors.conj(), nop, vectors))
    labels = {}
    n_multiplets = (max(n_tracked, 1) + 1) // 2 + 1
    ground = [k for k in range(dim) if abs(exc[k]) < 0.25]
    if len(ground) != 1:
        raise LabelAmbiguityError("could not identify a unique ground state at seed")
    labels[ground[0]] = "0"
    for mult in range(1, n_multiplets + 1):
        members = [k for k in range(dim) if abs(exc[k] - mult) < 0.25]
        if len(members) != 2:
            continue
        lo, hi = sorted(members, key=lambda k: values[k])
        if values[hi] - values[lo] < 1e-10:
            raise LabelAmbiguityError(
                f"multiplet {mult} is degenerate at the seed point; "
                "the +/- lineage is undefined"
            )
        labels[lo] = f"{mult}-"
        labels[hi] = f"{mult}+"
    return labels


def _transfer_labels(prev_vectors, labels: dict, vectors) -> dict:
    """Carry labels across one continuation step by maximal overlap."""
    overlaps = np.abs(prev_vectors.conj().T @ vectors)
    new_labels: dict = {}
    claimed: dict = {}
    for old_index, label in labels.items():
        row = overlaps[old_index]
        order = np.argsort(row)
        best, runner_up = int(order[-1]), int(order[-2])
        if row[best] - row[runner_up] < OVERLAP_AMBIGUITY:
            raise LabelAmbiguityError(
                f"label {label!r}: two successor overlaps within "
                f"{OVERLAP_AMBIGUITY:g} ({row[best]:.8f} vs {row[runner_up]:.8f})"
            )
        if best in claimed:
            raise LabelAmbiguityError(
                f"states {claimed[best]!r} and {label!r} both map onto "
                f"successor index {best}"
            )
        claimed[best] = label
        new_labels[best] = label
    return new_labels


def _steps_between(start: float, stop: float, step: float) -> np.ndarray:
    if stop == start:
        return np.array([stop])
    n = max(1, int(np.ceil(abs(stop - start) / step)))
    return np.linspace(start, stop, n + 1)[1:]


def _purify_parity(values, vectors, parity_matrix):
    """Rotate near-degenerate eigenvector pairs onto parity eigenstates."""
    vectors = vectors.copy()
    dim = len(values)
    i = 0
    while i < dim - 1:
        if values[i + 1] - values[i] < 1e-10:
            block = vectors[:, i : i + 2]
            sub = block.conj().T @ parity_matrix @ block
            _, rot = np.linalg.eigh(0.5 * (sub + sub.conj().T))
            vectors[:, i : i + 2] = block @ rot
            i += 2
        else:
            i += 1
    return vectors


class _ContinuationTracker:
    """Walks a parameter path, carrying labels by eigenvector overlap."""

    def __init__(self, p_template: SystemParams, n_tracked: int):
        self.template = p_template
        self.n_tracked = n_tracked
        self.decomp = None
        self.labels: dict = {}
        self.lam = None
        self.epsilon = None

    def _diagonalize(self, lam: float, epsilon: float):
        p = self.template.with_(lam=lam, epsilon=epsilon)
        return eig_dressed(p)

    def start(self, lam: float, epsilon: float = 0.0):
        self.decomp = self._diagonalize(lam, epsilon)
        self.labels = _seed_labels(self.decomp, self.template.n_max, self.n_tracked)
        self.lam = lam
        self.epsilon = epsilon

    def advance(self, lam: float, epsilon: float):
        decomp = self._diagonalize(lam, epsilon)
        self.labels = _transfer_labels(self.decomp.vectors, self.labels, decomp.vectors)
        self.decomp = decomp
        self.lam = lam
        self.epsilon = epsilon

    def walk_lambda(self, lam_target: float):
        if lam_target == self.lam:
            return
        for lam in _steps_between(self.lam, lam_target, CONTINUATION_STEP):
            self.advance(lam, self.epsilon)

    def walk_epsilon(self, eps_target: float):
        if eps_target == self.epsilon:
            return
        for eps in _steps_between(self.epsilon, eps_target, CONTINUATION_STEP):
            self.advance(self.lam, eps)

    def as_basis(self) -> DressedBasis:
        p = self.template.with_(lam=self.lam, epsilon=self.epsilon)
        return _finalize_basis(self.decomp, self.labels, p)


def eig_dressed(p: SystemParams):
    """Plain labeled-free eigensystem of the model Hamiltonian."""
    return ops.eig_hermitian(models.build_hamiltonian(p))


def _finalize_basis(decomp, labels: dict, p: SystemParams) -> DressedBasis:
    values, vectors = decomp.values, decomp.vectors
    dim = len(values)
    if p.epsilon == 0.0:
        pmat = models.parity_operator(p.n_max).entries
        expect = np.real(np.einsum("ij,ik,kj->j", vectors.conj(), pmat, vectors))
        if np.any(np.abs(expect) < 1 - PARITY_PURITY_TOL):
            vectors = _purify_parity(values, vectors, pmat)
            expect = np.real(
                np.einsum("ij,ik,kj->j", vectors.conj(), pmat, vectors)
            )
        parities = tuple(
            int(np.sign(e)) if abs(e) >= 1 - PARITY_PURITY_TOL else None
            for e in expect
        )
    else:
        parities = (None,) * dim
    label_list = tuple(labels.get(k) for k in range(dim))
    return DressedBasis(values, vectors, label_list, parities, p)


def diagonalize_labeled(
    p: SystemParams, n_tracked: int = DEFAULT_N_TRACKED
) -> DressedBasis:
    """Eigensystem of the model with lineage labels and parity tags.

    Labels are assigned by adiabatic continuation from the weak-coupling
    seed (coupling swept first, bias second).  n_tracked bounds how many
    low-lying states receive labels.
    """
    if n_tracked > p.dim:
        raise ValueError("n_tracked exceeds the Hilbert-space dimension")
    tracker = _ContinuationTracker(p, n_tracked)
    if p.lam <= LAMBDA_SEED:
        tracker.start(p.lam)
    else:
        tracker.start(LAMBDA_SEED)
        tracker.walk_lambda(p.lam)
    if p.epsilon != 0.0:
        tracker.walk_epsilon(p.epsilon)
    return tracker.as_basis()


def continuation_sweep(
    p_template: SystemParams,
    axis: str,
    grid,
    n_tracked: int = DEFAULT_N_TRACKED,
):
    """Labeled bases along a sorted parameter grid, sharing one continuation.

    axis is "lam" or "epsilon"; for "epsilon" the template coupling is
    reached first at zero bias, then the bias walks the grid.  Grid spacing
    larger than the continuation step is refined internally.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise ValueError("grid must be a non-empty 1-D array")
    if np.any(np.diff(grid) <= 0) and len(grid) > 1:
        raise ValueError("grid must be sorted strictly ascending")
    tracker = _ContinuationTracker(p_template, n_tracked)
    out = []
    if axis == "lam":
        first = grid[0]
        if first <= LAMBDA_SEED:
            tracker.start(first)
        else:
            tracker.start(LAMBDA_SEED)
            tracker.walk_lambda(first)
        out.append(tracker.as_basis())
        for lam in grid[1:]:
            tracker.walk_lambda(lam)
            out.append(tracker.as_basis())
    elif axis == "epsilon":
        if p_template.lam <= LAMBDA_SEED:
            tracker.start(p_template.lam)
        else:
            tracker.start(LAMBDA_SEED)
            tracker.walk_lambda(p_template.lam)
        tracker.walk_epsilon(grid[0])
        out.append(tracker.as_basis())
        for eps in grid[1:]:
            tracker.walk_epsilon(eps)
            out.append(tracker.as_basis())
    else:
        raise ValueError(f"unknown sweep axis {axis!r}")
    return out


def find_crossing(
    p_template: SystemParams,
    label_a: str,
    label_b: str,
    lam_range=(LAMBDA_SEED, 1.0),
    tol: float = 1e-4,
) -> float:
    """Coupling at which two labeled levels cross, refined by bisection.

    Scans the range with the continuation tracker, brackets the first sign
    change of E_a - E_b and bisects to absolute tolerance `tol`.  Raises
    NoCrossingError when the gap never changes sign.
    """
    lo, hi = float(lam_range[0]), float(lam_range[1])
    if not (0 <= lo < hi):
        raise ValueError("lam_range must satisfy 0 <= lo < hi")
    needed = _required_tracked(label_a, label_b)
    tracker = _ContinuationTracker(p_template, needed)
    # Seeding happens at the weak-coupling point; distinct lineages cannot
    # cross below it, so scanning effectively starts at max(lo, seed).
    tracker.start(LAMBDA_SEED)
    if p_template.epsilon != 0.0:
        tracker.walk_epsilon(p_template.epsilon)
    lo = max(lo, LAMBDA_SEED)

    def gap_of(tracker_state) -> float:
        inv = {v: k for k, v in tracker_state.labels.items()}
        for lbl in (label_a, label_b):
            if lbl not in inv:
                raise SimulationError(f"label {lbl!r} lost during crossing scan")
        e = tracker_state.decomp.values
        return float(e[inv[label_a]] - e[inv[label_b]])

    if tracker.lam < lo:
        tracker.walk_lambda(lo)
    prev_lam, prev_gap = tracker.lam, gap_of(tracker)
    bracket = None
    for lam in _steps_between(tracker.lam, hi, CONTINUATION_STEP):
        tracker.advance(lam, tracker.epsilon)
        gap = gap_of(tracker)
        if gap == 0.0:
            return float(lam)
        if np.sign(gap) != np.sign(prev_gap):
            bracket = (prev_lam, prev_gap, lam, gap)
            break
        prev_lam, prev_gap = lam, gap
    if bracket is None:
        raise NoCrossingError(
            f"no crossing of ({label_a}, {label_b}) in lam range [{lo}, {hi}]"
        )

    lam_lo, gap_lo, lam_hi, _ = bracket
    anchor = tracker  # currently at lam_hi
    while lam_hi - lam_lo > tol:
        mid = 0.5 * (lam_lo + lam_hi)
        probe = _ContinuationTracker(p_template, needed)
        probe.decomp = anchor.decomp
        probe.labels = dict(anchor.labels)
        probe.lam, probe.epsilon = anchor.lam, anchor.epsilon
        probe.advance(mid, anchor.epsilon)
        gap_mid = gap_of(probe)
        if gap_mid == 0.0:
            return float(mid)
        if np.sign(gap_mid) == np.sign(gap_lo):
            lam_lo, gap_lo = mid, gap_mid
        else:
            lam_hi = mid
        anchor = probe
    return 0.5 * (lam_lo + lam_hi)


def _required_tracked(*labels: str) -> int:
    mult = 1
    for lbl in labels:
        digits = "".join(ch for ch in lbl if ch.isdigit())
        if digits:
            mult = max(mult, int(digits))
    return 2 * mult + 4


def positive_frequency(
    o_bare: OperatorMatrix,
    basis: DressedBasis,
    derivative_order: int = 0,
    degeneracy_cut: float = DEGENERACY_CUT,
) -> PositiveFrequencyOperator:
    """Positive-frequency (lowering) part of a bare observable.

    Transforms the observable to the dressed basis and keeps only the
    elements connecting to strictly lower-energy states, weighting each by
    (-i w_ji)^derivative_order.  Transitions with |w_ji| below
    `degeneracy_cut` carry no frequency sign and are excluded.
    """
    if derivative_order not in (0, 1, 2):
        raise ValueError("derivative_order must be 0, 1 or 2")
    if o_bare.dim != basis.dim:
        raise ValueError("observable and basis dimensions differ")
    v = basis.states
    dressed = v.conj().T @ o_bare.entries @ v
    e = basis.energies
    w = e[None, :] - e[:, None]  # w[i, j] = E_j - E_i
    keep = w > degeneracy_cut
    weight = np.ones_like(dressed)
    if derivative_order:
        weight = np.where(keep, (-1j * w) ** derivative_order, 0.0)
    matrix = np.where(keep, weight * dressed, 0.0)
    return PositiveFrequencyOperator(matrix, derivative_order, e)


def dressed_diagonal(o_bare: OperatorMatrix, basis: DressedBasis) -> np.ndarray:
    """Diagonal (zero-frequency) part of the dressed-basis observable."""
    v = basis.states
    dressed = v.conj().T @ o_bare.entries @ v
    return np.diag(np.diag(dressed))


def spectrum_rows(bases, sweep_values):
    """Flatten labeled bases into (sweep_value, index, label, energy, parity)
    rows; energies are reported relative to the ground state."""
    rows = []
    for x, basis in zip(sweep_values, bases):
        e0 = basis.energies[0]
        for k in range(basis.dim):
            rows.append(
                (
                    float(x),
                    k,
                    basis.labels[k] or "",
                    float(basis.energies[k] - e0),
                    basis.parities[k] if basis.parities[k] is not None else "",
                )
            )
    return rows
