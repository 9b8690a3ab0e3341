"""Dressed-basis tests: labeling, crossings, positive-frequency operators."""

import numpy as np
import pytest

from uscqed import models, spectrum
from uscqed.errors import LabelAmbiguityError, NoCrossingError
from uscqed.models import SystemParams
from uscqed.spectrum import (
    continuation_sweep,
    diagonalize_labeled,
    find_crossing,
    positive_frequency,
)

RESONANT = dict(delta=1.0, epsilon=0.0, n_max=20)


class TestLabeling:
    def test_vacuum_doublet_splitting(self):
        lam = 0.01
        basis = diagonalize_labeled(SystemParams(lam=lam, **RESONANT))
        split = basis.transition_frequency("1-", "1+")
        assert abs(split - 2 * lam) < 2e-4  # counter-rotating shift is O(lam^2)
        center = 0.5 * (
            basis.energies[basis.label_index("1-")]
            + basis.energies[basis.label_index("1+")]
        ) - basis.energies[basis.label_index("0")]
        assert abs(center - 1.0) < 1e-3

    def test_ground_state_is_first(self):
        basis = diagonalize_labeled(SystemParams(lam=0.3, **RESONANT))
        assert basis.labels[0] == "0"

    def test_order_swap_past_crossing(self):
        basis = diagonalize_labeled(SystemParams(lam=0.5, **RESONANT))
        assert (
            basis.energies[basis.label_index("2-")]
            < basis.energies[basis.label_index("1+")]
        )

    def test_parity_sequence_weak_coupling(self):
        # Independent check: apply the parity operator to the eigenvectors.
        p = SystemParams(lam=0.01, **RESONANT)
        basis = diagonalize_labeled(p)
        pi = models.parity_operator(p.n_max).entries
        signs = {}
        for label in ("0", "1-", "1+", "2-"):
            v = basis.states[:, basis.label_index(label)]
            signs[label] = float((v.conj() @ pi @ v).real)
        assert signs["0"] > 0.999
        assert signs["1-"] < -0.999
        assert signs["1+"] < -0.999
        assert signs["2-"] > 0.999
        for label in ("0", "1-", "1+", "2-"):
            k = basis.label_index(label)
            assert basis.parities[k] == int(np.sign(signs[label]))

    def test_label_continuity_along_sweep(self):
        grid = np.arange(0.01, 1.001, 0.05)
        bases = continuation_sweep(SystemParams(lam=0.01, **RESONANT), "lam", grid)
        tracked = [lbl for lbl in bases[0].labels if lbl]
        for prev, cur in zip(bases, bases[1:]):
            for label in tracked:
                a = prev.states[:, prev.label_index(label)]
                b = cur.states[:, cur.label_index(label)]
                # grid spacing 0.05 is refined internally to <= 0.004 steps;
                # adjacent emitted bases must still overlap strongly
                assert abs(a.conj() @ b) >= 0.9

    def test_bias_continuation(self):
        p = SystemParams(delta=0.5, epsilon=0.35, lam=0.2, n_max=16)
        basis = diagonalize_labeled(p)
        assert basis.labels[0] == "0"
        assert "1+" in basis.labels and "1-" in basis.labels
        assert all(par is None for par in basis.parities)

    def test_ambiguity_reported(self):
        vectors = np.eye(4, dtype=complex)
        labels = {0: "0", 1: "1-"}
        rot = np.eye(4, dtype=complex)
        # successor overlapping two old states equally -> ambiguous
        rot[:2, 0] = [np.sqrt(0.5), np.sqrt(0.5)]
        rot[:2, 1] = [np.sqrt(0.5), -np.sqrt(0.5)]
        with pytest.raises(LabelAmbiguityError):
            spectrum._transfer_labels(vectors, labels, rot)

    def test_degenerate_seed_rejected(self):
        # at exact resonance and zero coupling the doublets are degenerate
        with pytest.raises(LabelAmbiguityError):
            diagonalize_labeled(SystemParams(lam=0.0, **RESONANT))


class TestFindCrossing:
    def test_transverse_model_crossing_location(self):
        p = SystemParams(lam=0.1, **RESONANT)
        gc = find_crossing(p, "2-", "1+", (0.0, 1.0), tol=1e-4)
        # Independent oracle: this degeneracy lies on the displaced-photon
        # baseline, so its energy must equal omega_c - gc^2 exactly and the
        # converged location is sqrt(3)/4 (stable under n_max refinement).
        assert abs(gc - np.sqrt(3.0) / 4.0) < 5e-4
        basis = diagonalize_labeled(p.with_(lam=gc))
        e_cross = basis.energies[basis.label_index("2-")]
        assert abs(e_cross - (1.0 - gc**2)) < 1e-3

    def test_crossing_stable_under_truncation(self):
        a = find_crossing(SystemParams(lam=0.1, **RESONANT), "2-", "1+", (0.3, 0.6))
        b = find_crossing(
            SystemParams(lam=0.1, delta=1.0, epsilon=0.0, n_max=28), "2-", "1+", (0.3, 0.6)
        )
        assert abs(a - b) < 2e-4

    def test_diamagnetic_model_has_no_crossing(self):
        p = SystemParams(lam=0.1, diamagnetic=True, **RESONANT)
        with pytest.raises(NoCrossingError):
            find_crossing(p, "2-", "1+", (0.0, 1.0))

    def test_vacuum_doublet_never_crosses(self):
        p = SystemParams(lam=0.1, **RESONANT)
        with pytest.raises(NoCrossingError):
            find_crossing(p, "1-", "1+", (0.0, 1.0))


class TestPositiveFrequency:
    @staticmethod
    def _lowering_deviation(lam, block=3):
        # deviation of the positive-frequency transverse dipole from the bare
        # qubit lowering operator, both expressed in the dressed basis
        from uscqed import operators as ops

        p = SystemParams(delta=1.0, epsilon=0.0, lam=lam, n_max=12)
        basis = diagonalize_labeled(p)
        pf = positive_frequency(
            models.build_emission_operator(p, "sigma_x"), basis, 0
        )
        sminus = np.kron(ops.sigma_minus().entries, np.eye(p.n_max + 1))
        dressed = basis.states.conj().T @ sminus @ basis.states
        keep = np.abs(pf.matrix) > 0
        diff = np.abs(pf.matrix - np.where(keep, dressed, 0))
        return diff[:block, :block].max()

    def test_weak_coupling_limit_is_lowering_operator(self):
        # emitter sector (ground + vacuum-Rabi doublet) at lam = 1e-3
        assert self._lowering_deviation(0.001) <= 1e-3

    def test_weak_coupling_limit_converges_linearly(self):
        # the deviation is first order in the coupling, so halving the
        # coupling must halve it (within 20%)
        d1 = self._lowering_deviation(0.001)
        d2 = self._lowering_deviation(0.0005)
        assert d2 < d1
        assert abs(d1 / d2 - 2.0) < 0.4

    def test_second_derivative_weights(self):
        p = SystemParams(lam=0.4, **RESONANT)
        basis = diagonalize_labeled(p)
        o = models.build_emission_operator(p, "sigma_x")
        pf0 = positive_frequency(o, basis, 0)
        pf2 = positive_frequency(o, basis, 2)
        e = basis.energies
        w = e[None, :] - e[:, None]
        np.testing.assert_allclose(
            pf2.matrix, -(w**2) * pf0.matrix, atol=1e-12
        )

    def test_first_derivative_weights(self):
        p = SystemParams(lam=0.4, **RESONANT)
        basis = diagonalize_labeled(p)
        o = models.build_emission_operator(p, "sigma_x")
        pf0 = positive_frequency(o, basis, 0)
        pf1 = positive_frequency(o, basis, 1)
        e = basis.energies
        w = e[None, :] - e[:, None]
        np.testing.assert_allclose(pf1.matrix, -1j * w * pf0.matrix, atol=1e-12)

    def test_parity_selection_rule(self):
        p = SystemParams(lam=0.35, **RESONANT)
        basis = diagonalize_labeled(p)
        pf = positive_frequency(
            models.build_emission_operator(p, "sigma_x"), basis, 0
        )
        scale = np.abs(pf.matrix).max()
        par = np.array([1 if x == 1 else -1 for x in basis.parities])
        same_parity = (par[:, None] * par[None, :]) == 1
        assert np.abs(pf.matrix[same_parity]).max() <= 1e-12 * scale

    def test_strictly_upper_triangular(self):
        p = SystemParams(lam=0.6, **RESONANT)
        basis = diagonalize_labeled(p)
        pf = positive_frequency(
            models.build_emission_operator(p, "sigma_x"), basis, 1
        )
        assert np.abs(np.tril(pf.matrix)).max() == 0.0

    def test_sum_rule_decomposition(self):
        # O+ plus its conjugate plus the diagonal part reproduces the full
        # dressed-basis observable exactly
        p = SystemParams(delta=0.5, epsilon=0.2, lam=0.45, n_max=14)
        basis = diagonalize_labeled(p)
        o = models.build_emission_operator(p, "i_theta")
        pf = positive_frequency(o, basis, 0)
        diag = spectrum.dressed_diagonal(o, basis)
        full = basis.states.conj().T @ o.entries @ basis.states
        rebuilt = pf.matrix + pf.matrix.conj().T + diag
        assert np.abs(rebuilt - full).max() <= 1e-12 * np.abs(full).max()

    def test_derivative_frequencies_positive(self):
        p = SystemParams(lam=0.3, **RESONANT)
        basis = diagonalize_labeled(p)
        pf1 = positive_frequency(
            models.build_emission_operator(p, "sigma_x"), basis, 1
        )
        rows, cols = np.nonzero(pf1.matrix)
        w = basis.energies[cols] - basis.energies[rows]
        assert np.all(w > 0)

    def test_rejects_bad_order(self):
        p = SystemParams(lam=0.3, **RESONANT)
        basis = diagonalize_labeled(p)
        with pytest.raises(ValueError):
            positive_frequency(
                models.build_emission_operator(p, "sigma_x"), basis, 3
            )


class TestSpectrumRows:
    def test_rows_relative_to_ground(self):
        grid = np.array([0.1, 0.2])
        bases = continuation_sweep(SystemParams(lam=0.1, **RESONANT), "lam", grid)
        rows = spectrum.spectrum_rows(bases, grid)
        assert rows[0][:2] == (0.1, 0)
        assert rows[0][3] == 0.0  # ground energy relative to itself
        by_point = [r for r in rows if r[0] == 0.2]
        assert len(by_point) == bases[1].dim
