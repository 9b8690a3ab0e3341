"""Static correlation tests, anchored on a brute-force dense oracle."""

import numpy as np
import pytest

from uscqed import correlations, models
from uscqed.correlations import (
    g2_zero_eigenstate,
    g2_zero_superposition,
    sweep_g2_zero,
)
from uscqed.errors import UndefinedCorrelationError
from uscqed.models import SystemParams
from uscqed.spectrum import diagonalize_labeled, positive_frequency

RESONANT = dict(delta=1.0, epsilon=0.0, n_max=20)


def dressed_g2_setup(p, kind="sigma_x", order=0, n_tracked=8):
    basis = diagonalize_labeled(p, n_tracked=n_tracked)
    pf = positive_frequency(models.build_emission_operator(p, kind), basis, order)
    return basis, pf


def brute_force_g2(pf, basis, initial_label):
    """Dense-product evaluation: <psi|O- O- O+ O+|psi> / <psi|O- O+|psi>^2."""
    k = basis.label_index(initial_label)
    psi = np.zeros(basis.dim, dtype=complex)
    psi[k] = 1.0
    op = pf.matrix
    om = op.conj().T
    four = om @ om @ op @ op
    two = om @ op
    num = (psi.conj() @ four @ psi).real
    den = (psi.conj() @ two @ psi).real ** 2
    return num / den


class TestBruteForceOracle:
    @pytest.mark.parametrize(
        "kwargs,kind,order",
        [
            (dict(delta=1.0, epsilon=0.0, lam=0.3), "sigma_x", 0),
            (dict(delta=1.0, epsilon=0.0, lam=0.6), "sigma_x", 0),
            (dict(delta=1.0, epsilon=0.0, lam=0.45, diamagnetic=True), "sigma_x", 1),
            (dict(delta=0.5, epsilon=0.3, lam=0.4), "i_theta", 1),
            (dict(delta=1.0, epsilon=0.0, lam=0.5), "sigma_x", 2),
        ],
    )
    def test_channel_sum_matches_dense_products(self, kwargs, kind, order):
        # smallest admissible Fock truncation, so every state participates
        p = SystemParams(n_max=4, **kwargs)
        basis, pf = dressed_g2_setup(p, kind, order, n_tracked=4)
        dec = g2_zero_eigenstate(pf, basis, "2-")
        oracle = brute_force_g2(pf, basis, "2-")
        assert dec.g2_value == pytest.approx(oracle, rel=1e-10)

    def test_oracle_matches_at_production_truncation(self):
        p = SystemParams(lam=0.5, **RESONANT)
        basis, pf = dressed_g2_setup(p)
        dec = g2_zero_eigenstate(pf, basis, "2-")
        oracle = brute_force_g2(pf, basis, "2-")
        assert dec.g2_value == pytest.approx(oracle, rel=1e-10)

    def test_randomized_parameter_battery(self):
        # random admissible parameter points: the channel sum must match the
        # dense correlator and stay invariant under operator rescaling
        rng = np.random.default_rng(314)
        for _ in range(12):
            p = SystemParams(
                delta=float(rng.uniform(0.3, 1.2)),
                epsilon=float(rng.uniform(-0.5, 0.5)),
                lam=float(rng.uniform(0.05, 0.7)),
                diamagnetic=bool(rng.integers(2)),
                n_max=6,
            )
            kind = "i_theta" if rng.integers(2) else "sigma_x"
            order = int(rng.integers(3))
            basis, pf = dressed_g2_setup(p, kind, order, n_tracked=6)
            dec = g2_zero_eigenstate(pf, basis, "2-")
            if dec.undefined:
                continue
            oracle = brute_force_g2(pf, basis, "2-")
            assert dec.g2_value == pytest.approx(oracle, rel=1e-9, abs=1e-14)
            assert dec.numerator == pytest.approx(
                dec.numerator_from_terms(), rel=1e-12, abs=1e-300
            )
            # strict upper-triangularity in energy order
            assert np.abs(np.tril(pf.matrix)).max() == 0.0


class TestEigenstateG2:
    def test_weak_coupling_destructive_interference(self):
        basis, pf = dressed_g2_setup(SystemParams(lam=0.01, **RESONANT))
        dec = g2_zero_eigenstate(pf, basis, "2-")
        assert dec.g2_value <= 1e-6
        # the two channel products are equal in magnitude (1/(2 sqrt 2) in
        # this normalization), opposite in sign, and cancel almost exactly
        amps = {}
        for t in dec.open_channels():
            if t.final_label == "0":
                amps[t.intermediate_label] = t.amplitude
        mag = 1 / (2 * np.sqrt(2))
        assert abs(abs(amps["1+"]) - mag) < 2e-3
        assert abs(abs(amps["1-"]) - mag) < 2e-3
        assert abs(amps["1+"] + amps["1-"]) < 1e-3

    def test_bunching_past_crossing(self):
        basis, pf = dressed_g2_setup(SystemParams(lam=0.5, **RESONANT))
        dec = g2_zero_eigenstate(pf, basis, "2-")
        assert 2.5 <= dec.g2_value <= 3.5

    def test_diamagnetic_suppression_profile(self):
        # pinned converged values (stable under n_max 20 -> 120); the
        # suppression stays orders of magnitude below the bare-model jump
        expected = {0.2: 1.2323e-4, 0.5: 3.3285e-4, 0.9: 1.0021e-4}
        for lam, ref in expected.items():
            p = SystemParams(lam=lam, diamagnetic=True, **RESONANT)
            basis, pf = dressed_g2_setup(p)
            dec = g2_zero_eigenstate(pf, basis, "2-")
            assert dec.g2_value == pytest.approx(ref, rel=1e-3)

    def test_single_channel_reduction_past_crossing(self):
        # with one open intermediate channel the ratio collapses to
        # |O_{0,1-}|^2 / |O_{1-,2-}|^2
        p = SystemParams(lam=0.6, **RESONANT)
        basis, pf = dressed_g2_setup(p)
        dec = g2_zero_eigenstate(pf, basis, "2-")
        m = pf.matrix
        i0 = basis.label_index("0")
        i1m = basis.label_index("1-")
        i2m = basis.label_index("2-")
        i1p = basis.label_index("1+")
        # the 1+ channel is closed: 1+ lies below 2- here, but the second
        # leg 1+ -> final states dominates nothing; verify directly that the
        # numerator is the single-path product within the open-channel set
        amp_main = m[i0, i1m] * m[i1m, i2m]
        single = abs(m[i0, i1m]) ** 2 / abs(m[i1m, i2m]) ** 2
        # ratio check holds only when the 1- path carries the numerator
        numer_from_path = abs(amp_main) ** 2
        alt = abs(m[i0, i1p] * m[i1p, i2m]) ** 2
        assert alt < 1e-3 * numer_from_path
        assert dec.g2_value == pytest.approx(
            single * (abs(m[i1m, i2m]) ** 4)
            / (abs(m[i1m, i2m]) ** 2 + abs(m[i1p, i2m]) ** 2) ** 2,
            rel=1e-6,
        )

    def test_dark_state_flagged(self):
        basis, pf = dressed_g2_setup(SystemParams(lam=0.3, **RESONANT))
        dec = g2_zero_eigenstate(pf, basis, "0")  # ground state emits nothing
        assert dec.undefined
        assert dec.g2_value is None
        assert not np.isnan(dec.numerator)

    def test_channel_interference_identity(self):
        basis, pf = dressed_g2_setup(SystemParams(lam=0.42, **RESONANT))
        dec = g2_zero_eigenstate(pf, basis, "2-")
        assert dec.numerator == pytest.approx(dec.numerator_from_terms(), rel=1e-12)

    def test_scale_invariance(self):
        from uscqed.spectrum import PositiveFrequencyOperator

        basis, pf = dressed_g2_setup(SystemParams(lam=0.37, **RESONANT))
        ref = g2_zero_eigenstate(pf, basis, "2-").g2_value
        scaled = PositiveFrequencyOperator(
            (1.7 - 0.3j) * pf.matrix, pf.derivative_order, pf.energies
        )
        out = g2_zero_eigenstate(scaled, basis, "2-").g2_value
        assert out == pytest.approx(ref, rel=1e-12)

    def test_derivative_order_substitution_identity(self):
        # replacing entries by (-i w)^d and evaluating at order 0 must equal
        # requesting order d directly
        from uscqed.spectrum import PositiveFrequencyOperator

        p = SystemParams(lam=0.33, **RESONANT)
        basis, pf0 = dressed_g2_setup(p, order=0)
        _, pf2 = dressed_g2_setup(p, order=2)
        e = basis.energies
        w = e[None, :] - e[:, None]
        manual = PositiveFrequencyOperator(
            np.where(np.abs(pf0.matrix) > 0, ((-1j * w) ** 2) * pf0.matrix, 0.0),
            0,
            e,
        )
        a = g2_zero_eigenstate(manual, basis, "2-").g2_value
        b = g2_zero_eigenstate(pf2, basis, "2-").g2_value
        assert a == pytest.approx(b, rel=1e-12)


class TestSuperpositionG2:
    def test_alpha_one_equals_eigenstate(self):
        basis, pf = dressed_g2_setup(SystemParams(lam=0.4, **RESONANT))
        eig = g2_zero_eigenstate(pf, basis, "2-").g2_value
        sup = g2_zero_superposition(pf, basis, 1.0, "2-")
        assert sup == pytest.approx(eig, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5 + 0.2j])
    def test_inverse_square_amplitude_law(self, alpha):
        basis, pf = dressed_g2_setup(SystemParams(lam=0.4, **RESONANT))
        eig = g2_zero_eigenstate(pf, basis, "2-").g2_value
        sup = g2_zero_superposition(pf, basis, alpha, "2-")
        # exact here: the lowering operator annihilates the ground component
        assert sup == pytest.approx(eig / abs(alpha) ** 2, rel=1e-10)

    def test_alpha_zero_undefined(self):
        basis, pf = dressed_g2_setup(SystemParams(lam=0.4, **RESONANT))
        with pytest.raises(UndefinedCorrelationError):
            g2_zero_superposition(pf, basis, 0.0, "2-")

    def test_alpha_above_one_rejected(self):
        basis, pf = dressed_g2_setup(SystemParams(lam=0.4, **RESONANT))
        with pytest.raises(ValueError):
            g2_zero_superposition(pf, basis, 1.2, "2-")


class TestSweep:
    def test_sweep_matches_pointwise_and_shows_early_departure(self):
        grid = np.array([0.01, 0.14, 0.19, 0.3])
        columns, rows = sweep_g2_zero(SystemParams(lam=0.01, **RESONANT), grid)
        assert columns == ["lambda", "g2_sigma_x", "g2_d_sigma_x", "g2_dd_sigma_x"]
        # pointwise recomputation agrees
        for i, lam in enumerate(grid):
            p = SystemParams(lam=float(lam), **RESONANT)
            basis, pf = dressed_g2_setup(p, order=1)
            direct = g2_zero_eigenstate(pf, basis, "2-").g2_value
            assert rows[i, 2] == pytest.approx(direct, rel=1e-9)
        # weak-coupling row: every operator deeply antibunched
        assert np.all(rows[0, 1:] < 1e-6)
        # derivative operators depart from zero well before the transverse
        # dipole does
        assert rows[2, 2] > 0.01 and rows[2, 1] < 1e-3
        assert rows[1, 3] > 0.01 and rows[1, 1] < 1e-3

    def test_sweep_rejects_unsorted_grid(self):
        with pytest.raises(ValueError):
            sweep_g2_zero(SystemParams(lam=0.1, **RESONANT), [0.3, 0.1])
