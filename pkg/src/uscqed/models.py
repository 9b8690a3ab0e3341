"""Model builders: the bare-resonator/qubit Hamiltonians, the drive quadrature
and the emission observables, all parametrized by `SystemParams`.

Units: the resonator frequency is the unit of energy (omega_c = 1), so every
field of `SystemParams` is a dimensionless ratio.  The qubit basis is
(|e>, |g>); the composite ordering is qubit (x) Fock.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import operators as ops
from .operators import OperatorMatrix

DEFAULT_N_MAX_STATIC = 20
DEFAULT_N_MAX_DYNAMICS = 16


@dataclass(frozen=True)
class SystemParams:
    """All model constants, in units of the resonator frequency.

    The qubit splitting is omega_a = sqrt(delta^2 + epsilon^2) with mixing
    angle sin(theta) = epsilon / omega_a; epsilon is the longitudinal bias
    and delta the transverse gap.  `diamagnetic` adds the quadratic field
    term with coefficient lam^2 / omega_a.
    """

    delta: float = 1.0
    epsilon: float = 0.0
    lam: float = 0.0
    omega_c: float = 1.0
    diamagnetic: bool = False
    n_max: int = DEFAULT_N_MAX_STATIC
    kappa: float = 0.0
    gamma: float = 0.0
    drive_amplitude: float = 0.0
    drive_frequency: float = 0.0

    def __post_init__(self):
        if self.omega_c != 1.0:
            raise ValueError("omega_c is the unit of energy and must be 1.0")
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.lam < 0:
            raise ValueError("lam must be >= 0")
        if not isinstance(self.n_max, (int, np.integer)) or self.n_max < 4:
            raise ValueError("n_max must be an integer >= 4")
        for name in ("kappa", "gamma", "drive_amplitude", "drive_frequency"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.omega_a == 0.0:
            raise ValueError(
                "omega_a = sqrt(delta^2 + epsilon^2) vanishes; the qubit term "
                "and mixing angle are undefined"
            )

    @property
    def omega_a(self) -> float:
        return float(np.hypot(self.delta, self.epsilon))

    @property
    def sin_theta(self) -> float:
        return self.epsilon / self.omega_a

    @property
    def cos_theta(self) -> float:
        return self.delta / self.omega_a

    @property
    def diamagnetic_coefficient(self) -> float:
        return self.lam**2 / self.omega_a if self.diamagnetic else 0.0

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)

    def with_(self, **kwargs) -> "SystemParams":
        return replace(self, **kwargs)


def qubit_coupling_matrix(p: SystemParams) -> np.ndarray:
    """cos(theta) sigma_x + sin(theta) sigma_z on the qubit factor."""
    return p.cos_theta * ops.sigma_x().entries + p.sin_theta * ops.sigma_z().entries


def build_hamiltonian(p: SystemParams) -> OperatorMatrix:
    """Composite Hamiltonian: qubit splitting + resonator + bilinear coupling,
    optionally extended by the diamagnetic (field-squared) term."""
    a = ops.fock_annihilation(p.n_max).entries
    x = a + a.conj().T
    number = a.conj().T @ a
    i2 = np.eye(2)
    i_f = np.eye(p.n_max + 1)
    h = (
        0.5 * p.omega_a * np.kron(ops.sigma_z().entries, i_f)
        + p.omega_c * np.kron(i2, number)
        + p.lam * np.kron(qubit_coupling_matrix(p), x)
    )
    if p.diamagnetic:
        h = h + p.diamagnetic_coefficient * np.kron(i2, x @ x)
    return OperatorMatrix(h, "composite")


def build_drive_operator(p: SystemParams) -> OperatorMatrix:
    """Resonator quadrature (a + a^dag) on the composite space.

    Amplitude and frequency stay in the params; the time dependence
    cos(drive_frequency * t) is applied by the dynamics layer.
    """
    a = ops.fock_annihilation(p.n_max).entries
    return OperatorMatrix(np.kron(np.eye(2), a + a.conj().T), "composite")


def build_emission_operator(p: SystemParams, kind: str = "sigma_x") -> OperatorMatrix:
    """Bare-basis emission observable whose positive-frequency part is the
    detected field.

    kind="sigma_x": transverse qubit dipole.  kind="i_theta": the persistent
    current observable cos(theta) sigma_x + sin(theta) sigma_z.  Overall
    prefactors are dropped: they cancel in every normalized correlation.
    """
    i_f = np.eye(p.n_max + 1)
    if kind == "sigma_x":
        q = ops.sigma_x().entries
    elif kind == "i_theta":
        q = qubit_coupling_matrix(p)
    else:
        raise ValueError(f"unknown emission operator kind {kind!r}")
    return OperatorMatrix(np.kron(q, i_f), "composite")


def parity_operator(n_max: int) -> OperatorMatrix:
    """exp(i pi N) with N the total excitation number.

    On the composite basis this is (-sigma_z) (x) (-1)^(a^dag a): the ground
    multiplet |g,0> has parity +1 and the one-excitation doublet parity -1.
    Commutes with the Hamiltonian whenever epsilon = 0.
    """
    photon = np.diag((-1.0) ** np.arange(n_max + 1))
    return OperatorMatrix(np.kron(-ops.sigma_z().entries, photon), "composite")
