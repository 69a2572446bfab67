import json

import numpy as np
import pytest

from quasitur.ensembles import random_hermitian, random_instance, random_model, random_state
from quasitur.errors import DegeneratePairError, DimMismatchError, NotHermitianError
from quasitur.lindblad import (
    JumpPair,
    LindbladModel,
    QuantumState,
    apply_adjoint_liouvillian,
    apply_dissipator,
    apply_liouvillian,
    decompose_pair,
    heisenberg_propagate,
    load_model,
    model_from_dict,
    model_to_dict,
    propagate,
    save_model,
    validate_local_detailed_balance,
)
from quasitur.operators import hs_inner_product

from oracles import SIGMA_MINUS, SIGMA_PLUS, decay_qubit, excited_state, gibbs_state, thermal_qubit


class TestDetailedBalance:
    def test_thermal_pair_residual_zero(self):
        report = validate_local_detailed_balance(thermal_qubit(0.8, 0.3))
        assert report.max_residual <= 1e-12
        assert report.passed

    def test_hermitian_self_pair(self):
        rng = np.random.default_rng(1)
        l_op = random_hermitian(rng, 3)
        pair = JumpPair(forward=l_op, backward=l_op, entropy_current=0.0)
        model = LindbladModel(np.zeros((3, 3), complex), (pair,))
        assert validate_local_detailed_balance(model).max_residual <= 1e-12

    def test_perturbed_entropy_current_fails(self):
        gp, gm = 0.8, 0.3
        s_wrong = np.log(gp / gm) + 0.1
        pair = JumpPair(np.sqrt(gp) * SIGMA_PLUS, np.sqrt(gm) * SIGMA_MINUS, s_wrong)
        model = LindbladModel(np.zeros((2, 2), complex), (pair,))
        report = validate_local_detailed_balance(model, tol=1e-8)
        # direct evaluation: || sqrt(gp) s+ - e^{s/2} sqrt(gm) s+ || = sqrt(gp) |e^{0.05} - 1|
        expected = np.sqrt(gp) * abs(np.exp(0.05) - 1.0)
        assert report.residuals[0] == pytest.approx(expected, rel=1e-12)
        assert not report.passed


class TestDecomposePair:
    def test_read_off_normalization(self):
        pair = JumpPair(np.sqrt(2.0) * SIGMA_PLUS, SIGMA_MINUS, np.log(2.0))
        gamma_f, gamma_b, direction = decompose_pair(pair)
        assert gamma_f == pytest.approx(2.0)
        assert gamma_b == pytest.approx(1.0)
        np.testing.assert_allclose(direction, SIGMA_PLUS, atol=1e-12)

    def test_symmetric_split(self):
        rng = np.random.default_rng(2)
        l_op = random_hermitian(rng, 3)
        pair = JumpPair(l_op, l_op, 0.0)
        gamma_f, gamma_b, _ = decompose_pair(pair)
        norm_sq = np.linalg.norm(l_op) ** 2
        assert gamma_f == pytest.approx(norm_sq)
        assert gamma_b == pytest.approx(norm_sq)

    def test_scaling_homogeneity(self):
        pair = JumpPair(np.sqrt(2.0) * SIGMA_PLUS, SIGMA_MINUS, np.log(2.0))
        scaled = JumpPair(3.0 * pair.forward, 3.0 * pair.backward, pair.entropy_current)
        gf0, gb0, dir0 = decompose_pair(pair)
        gf1, gb1, dir1 = decompose_pair(scaled)
        assert gf1 == pytest.approx(9.0 * gf0)
        assert gb1 == pytest.approx(9.0 * gb0)
        np.testing.assert_allclose(dir0, dir1, atol=1e-12)

    def test_zero_operator(self):
        pair = JumpPair(np.zeros((2, 2)), np.zeros((2, 2)), 0.0)
        with pytest.raises(DegeneratePairError):
            decompose_pair(pair)

    def test_ratio_matches_entropy_current(self):
        rng = np.random.default_rng(3)
        model = random_model(rng, 4, 2)
        for pair in model.jump_pairs:
            gamma_f, gamma_b, _ = decompose_pair(pair)
            assert np.log(gamma_f / gamma_b) == pytest.approx(pair.entropy_current, abs=1e-10)


class TestGeneratorApplication:
    def test_dissipator_zero_at_steady_state(self):
        model = thermal_qubit(0.4, 1.1)
        out = apply_dissipator(model, gibbs_state(0.4, 1.1))
        assert np.linalg.norm(out) <= 1e-12

    def test_no_jumps(self):
        model = LindbladModel(np.diag([0.0, 1.0]).astype(complex), ())
        state = random_state(np.random.default_rng(4), 2)
        assert np.linalg.norm(apply_dissipator(model, state)) == 0.0

    def test_decay_from_excited(self):
        gamma = 0.7
        model = decay_qubit(gamma)
        out = apply_dissipator(model, excited_state())
        expected = gamma * np.diag([1.0, -1.0])
        np.testing.assert_allclose(out, expected, atol=1e-12)

    def test_adjoint_unital(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            model = random_model(rng, int(rng.integers(2, 6)), 2)
            out = apply_adjoint_liouvillian(model, np.eye(model.dim, dtype=complex))
            assert np.linalg.norm(out) <= 1e-12

    def test_trace_preservation(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            model, state, _ = random_instance(rng)
            assert abs(np.trace(apply_liouvillian(model, state))) <= 1e-12

    def test_hamiltonian_commutes_with_itself(self):
        ham = np.diag([0.0, 1.0, 2.5]).astype(complex)
        model = LindbladModel(ham, ())
        assert np.linalg.norm(apply_adjoint_liouvillian(model, ham)) == 0.0

    def test_adjointness(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            model, state, _ = random_instance(rng)
            a = random_hermitian(rng, model.dim) + 1j * random_hermitian(rng, model.dim)
            lhs = hs_inner_product(a, apply_liouvillian(model, state))
            rhs = hs_inner_product(apply_adjoint_liouvillian(model, a), state.rho)
            scale = np.linalg.norm(a) * np.linalg.norm(state.rho)
            assert abs(lhs - rhs) <= 1e-10 * scale


class TestPropagation:
    def test_zero_time_identity(self):
        model = thermal_qubit()
        state = excited_state()
        assert propagate(model, state, 0.0) is state

    def test_analytic_decay(self):
        gamma = 0.6
        model = decay_qubit(gamma)
        for t in (0.1, 0.5, 2.0):
            final = propagate(model, excited_state(), t)
            assert final.rho[1, 1].real == pytest.approx(np.exp(-gamma * t), abs=1e-8)

    def test_positivity(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            model, state, _ = random_instance(rng)
            final = propagate(model, state, float(rng.uniform(0, 2)))
            assert np.linalg.eigvalsh(final.rho)[0] >= -1e-8

    def test_semigroup(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            model, state, _ = random_instance(rng)
            one_shot = propagate(model, state, 0.9)
            two_step = propagate(model, propagate(model, state, 0.4), 0.5)
            assert np.linalg.norm(one_shot.rho - two_step.rho) <= 1e-8

    def test_integrator_matches_exponential(self):
        rng = np.random.default_rng(10)
        model, state, _ = random_instance(rng)
        via_expm = propagate(model, state, 0.7, method="expm")
        via_ivp = propagate(model, state, 0.7, method="ivp")
        assert np.linalg.norm(via_expm.rho - via_ivp.rho) <= 1e-8

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            propagate(thermal_qubit(), excited_state(), -0.1)

    def test_bulk_invariants(self):
        # 1000 random models and full-rank states: trace preservation,
        # Hermiticity of L(rho), and valid propagated states
        rng = np.random.default_rng(11)
        for _ in range(1000):
            model, state, _ = random_instance(rng, max_dim=6, max_pairs=3)
            drho = apply_liouvillian(model, state)
            assert abs(np.trace(drho)) <= 1e-11
            assert np.linalg.norm(drho - drho.conj().T) <= 1e-11 * max(np.linalg.norm(drho), 1.0)
            final = propagate(model, state, float(rng.uniform(0.0, 1.0)))
            assert abs(np.trace(final.rho).real - 1.0) <= 1e-9
            assert np.linalg.norm(final.rho - final.rho.conj().T) <= 1e-9
            assert np.linalg.eigvalsh(final.rho)[0] >= -1e-8


class TestLargeDimensionPath:
    def test_integrator_takes_over_beyond_exponential_limit(self):
        # dimension 70 routes through the adaptive integrator automatically
        from quasitur.degeneracy import (
            CollectiveModelParams,
            build_collective_model,
            build_plus_minus_state,
        )
        params = CollectiveModelParams(n_levels=35)
        model = build_collective_model(params)
        state = build_plus_minus_state(params, "+")
        evolved = propagate(model, state, 0.05)
        assert abs(np.trace(evolved.rho).real - 1.0) <= 1e-9
        assert np.linalg.eigvalsh(evolved.rho)[0] >= -1e-8
        x = np.diag(np.linspace(-1.0, 1.0, model.dim)).astype(complex)
        lhs = np.trace(heisenberg_propagate(model, x, 0.05) @ state.rho)
        rhs = np.trace(x @ evolved.rho)
        assert abs(lhs - rhs) <= 1e-9


class TestHeisenbergPropagation:
    def test_identity_fixed_point(self):
        model = thermal_qubit()
        for dt in (0.0, 0.3, 1.7):
            out = heisenberg_propagate(model, np.eye(2, dtype=complex), dt)
            np.testing.assert_allclose(out, np.eye(2), atol=1e-10)

    def test_zero_time(self):
        model = thermal_qubit()
        x = random_hermitian(np.random.default_rng(12), 2)
        np.testing.assert_allclose(heisenberg_propagate(model, x, 0.0), x, atol=1e-14)

    def test_duality(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            model, state, _ = random_instance(rng)
            x = random_hermitian(rng, model.dim)
            dt = float(rng.uniform(0, 1))
            lhs = np.trace(heisenberg_propagate(model, x, dt) @ state.rho)
            rhs = np.trace(x @ propagate(model, state, dt).rho)
            assert abs(lhs - rhs) <= 1e-9


class TestStateValidation:
    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            QuantumState(np.array([[0.5, 0.5], [0.0, 0.5]], dtype=complex))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValueError):
            QuantumState(np.diag([1.2, -0.2]).astype(complex))

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError):
            QuantumState(np.diag([0.7, 0.7]).astype(complex))

    def test_pure_state(self):
        state = QuantumState.pure([1.0, 1.0])
        np.testing.assert_allclose(state.rho, 0.5 * np.ones((2, 2)), atol=1e-12)


class TestModelFiles:
    def test_round_trip(self, tmp_path):
        model = thermal_qubit(0.8, 0.3, omega=2.0)
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        np.testing.assert_allclose(loaded.hamiltonian, model.hamiltonian, atol=0)
        assert len(loaded.jump_pairs) == 1
        np.testing.assert_allclose(loaded.jump_pairs[0].forward, model.jump_pairs[0].forward, atol=0)
        assert loaded.jump_pairs[0].entropy_current == model.jump_pairs[0].entropy_current

    def test_schema_shape(self):
        data = model_to_dict(thermal_qubit())
        assert set(data) == {"dim", "hamiltonian", "jump_pairs"}
        assert data["dim"] == 2
        entry = data["hamiltonian"][0][0]
        assert isinstance(entry, list) and len(entry) == 2
        pair = data["jump_pairs"][0]
        assert set(pair) == {"forward", "backward", "entropy_current"}
        # valid JSON end to end
        rebuilt = model_from_dict(json.loads(json.dumps(data)))
        np.testing.assert_allclose(rebuilt.hamiltonian, thermal_qubit().hamiltonian)

    def test_dim_mismatch_rejected(self):
        data = model_to_dict(thermal_qubit())
        data["dim"] = 3
        with pytest.raises(DimMismatchError):
            model_from_dict(data)
