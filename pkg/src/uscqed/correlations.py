"""Zero-delay second-order correlations for a system prepared in a dressed
eigenstate or a weak ground/excited superposition.

For an initial state |k> and lowering operator O+ the normalized value is

    g2(0) = <k| O- O- O+ O+ |k> / <k| O- O+ |k>^2
          = sum_f |sum_i O_fi O_ik|^2 / (sum_i |O_ik|^2)^2

with i running over intermediate and f over final dressed states.  The
numerator is kept as per-channel amplitudes O_fi * O_ik so the interference
between decay paths stays inspectable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import models
from .errors import UndefinedCorrelationError
from .models import SystemParams
from .spectrum import (
    DressedBasis,
    PositiveFrequencyOperator,
    continuation_sweep,
    positive_frequency,
)

DARK_DENOMINATOR = 1e-20
CHANNEL_REPORT_RTOL = 1e-8  # legs below this fraction of max|O| are parity junk


@dataclass(frozen=True)
class ChannelTerm:
    """One two-step decay amplitude O_{final,mid} * O_{mid,initial}."""

    final_index: int
    intermediate_index: int
    final_label: str | None
    intermediate_label: str | None
    amplitude: complex


@dataclass(frozen=True)
class ChannelDecomposition:
    """g2(0) together with the channel amplitudes that built it."""

    initial_label: str
    initial_index: int
    terms: tuple
    final_indices: tuple
    numerator: float
    denominator: float
    g2_value: float | None
    undefined: bool

    def open_channels(self):
        """Terms whose both legs clear the reporting threshold."""
        if not self.terms:
            return ()
        scale = max(abs(t.amplitude) for t in self.terms)
        if scale == 0.0:
            return ()
        return tuple(
            t for t in self.terms if abs(t.amplitude) > (CHANNEL_REPORT_RTOL**2) * scale
        )

    def numerator_from_terms(self) -> float:
        """Recompute |sum of channel amplitudes|^2 summed over final states."""
        acc = {}
        for t in self.terms:
            acc[t.final_index] = acc.get(t.final_index, 0.0) + t.amplitude
        return float(sum(abs(a) ** 2 for a in acc.values()))


def g2_zero_eigenstate(
    oplus: PositiveFrequencyOperator,
    basis: DressedBasis,
    initial_label: str = "2-",
) -> ChannelDecomposition:
    """Zero-delay correlation for the system prepared in one dressed state.

    Sums over every intermediate and final dressed state.  A dark initial
    state (vanishing single-emission amplitude) yields undefined=True with
    g2_value=None rather than NaN.
    """
    k = basis.label_index(initial_label)
    m = oplus.matrix
    first_leg = m[:, k]  # O+ |k>
    single = float(np.sum(np.abs(first_leg) ** 2))
    denominator = single**2

    terms = []
    finals = set()
    for i in np.nonzero(first_leg)[0]:
        second = m[:, i] * first_leg[i]
        for f in np.nonzero(second)[0]:
            terms.append(
                ChannelTerm(
                    final_index=int(f),
                    intermediate_index=int(i),
                    final_label=basis.labels[f],
                    intermediate_label=basis.labels[i],
                    amplitude=complex(second[f]),
                )
            )
            finals.add(int(f))

    per_final: dict = {}
    for t in terms:
        per_final[t.final_index] = per_final.get(t.final_index, 0.0) + t.amplitude
    numerator = float(sum(abs(a) ** 2 for a in per_final.values()))
    undefined = denominator < DARK_DENOMINATOR
    return ChannelDecomposition(
        initial_label=initial_label,
        initial_index=k,
        terms=tuple(terms),
        final_indices=tuple(sorted(finals)),
        numerator=numerator,
        denominator=denominator,
        g2_value=None if undefined else numerator / denominator,
        undefined=undefined,
    )


def g2_zero_superposition(
    oplus: PositiveFrequencyOperator,
    basis: DressedBasis,
    alpha: complex,
    initial_label: str = "2-",
) -> float:
    """Zero-delay correlation for sqrt(1-|alpha|^2)|ground> + alpha|initial>.

    Evaluated exactly on the superposition (no small-alpha expansion).
    """
    a = complex(alpha)
    mag = abs(a)
    if mag == 0.0:
        raise UndefinedCorrelationError("alpha = 0 leaves only the dark ground state")
    if mag > 1.0:
        raise ValueError("|alpha| must not exceed 1")
    k = basis.label_index(initial_label)
    ground = basis.label_index("0")
    psi = np.zeros(basis.dim, dtype=complex)
    psi[ground] = np.sqrt(1.0 - mag**2)
    psi[k] = a
    m = oplus.matrix
    v1 = m @ psi
    single = float(np.sum(np.abs(v1) ** 2))
    if single**2 < DARK_DENOMINATOR:
        raise UndefinedCorrelationError("superposition state is dark")
    v2 = m @ v1
    return float(np.sum(np.abs(v2) ** 2) / single**2)


_OPERATOR_COLUMN = {0: "g2_{kind}", 1: "g2_d_{kind}", 2: "g2_dd_{kind}"}


def operator_column_name(kind: str, order: int) -> str:
    return _OPERATOR_COLUMN[order].format(kind=kind)


def sweep_g2_zero(
    p_template: SystemParams,
    lam_grid,
    operator_specs=(("sigma_x", 0), ("sigma_x", 1), ("sigma_x", 2)),
    initial_label: str = "2-",
    n_tracked: int = 8,
):
    """g2(0) along a coupling grid for each requested (observable, order).

    Returns (column_names, rows) with one row per grid point; the dressed
    basis is rebuilt with label continuation shared along the sweep.
    """
    lam_grid = np.asarray(lam_grid, dtype=float)
    bases = continuation_sweep(p_template, "lam", lam_grid, n_tracked=n_tracked)
    columns = ["lambda"] + [operator_column_name(k, d) for k, d in operator_specs]
    rows = np.empty((len(lam_grid), len(columns)))
    for row, (lam, basis) in enumerate(zip(lam_grid, bases)):
        rows[row, 0] = lam
        for col, (kind, order) in enumerate(operator_specs, start=1):
            o_bare = models.build_emission_operator(basis.params, kind)
            pf = positive_frequency(o_bare, basis, order)
            dec = g2_zero_eigenstate(pf, basis, initial_label)
            if dec.undefined:
                raise UndefinedCorrelationError(
                    f"dark initial state {initial_label!r} at lam={lam}"
                )
            rows[row, col] = dec.g2_value
    return columns, rows
