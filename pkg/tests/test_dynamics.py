import numpy as np
import pytest

from icqt.dynamics import (
    FactorizationPreconditionError,
    ProgrammedBlockStructure,
    TrinaryHamiltonian,
    check_pmc,
    check_sapmc,
    entanglement_trajectory,
    evolve,
    evolve_factorized,
    evolve_full,
    evolve_programmed_block,
    evolve_schedule,
    evolve_swapped_factorized,
    random_block_structure,
    random_trinary_hamiltonian,
    swapped_full_operator,
)
from icqt.linalg import (
    HermiticityError,
    Operator,
    StateVector,
    hermitian_propagator,
    seeded_random,
)
from icqt.trinary import TrinaryDims, TrinaryState, standard_basis
from oracles import dense_trinary_hamiltonian, expm_hermitian

DIMS = TrinaryDims(2, 2, 4)


def random_state(dims, seed):
    return TrinaryState.from_dense(dims, seeded_random("state", dims.total, seed))


def separable_state(dims, seed):
    return TrinaryState.from_product(
        dims,
        seeded_random("state", dims.d_p, seed),
        seeded_random("state", dims.d_s, seed + 1),
        seeded_random("state", dims.d_a, seed + 2),
    )


def sigma(which):
    return {
        "x": np.array([[0, 1], [1, 0]], dtype=complex),
        "z": np.array([[1, 0], [0, -1]], dtype=complex),
    }[which]


class TestTrinaryHamiltonian:
    def test_full_operator_matches_oracle(self):
        h = random_trinary_hamiltonian(DIMS, 3, kind="pmc")
        want = dense_trinary_hamiltonian(
            h.h_p.entries, [b.entries for b in h.blocks]
        )
        assert np.max(np.abs(h.full_operator().entries - want)) < 1e-14

    def test_full_operator_hermitian(self):
        h = random_trinary_hamiltonian(DIMS, 4, kind="violating")
        f = h.full_operator().entries
        assert np.max(np.abs(f - f.conj().T)) <= 1e-12

    def test_rejects_non_hermitian_block(self):
        with pytest.raises(HermiticityError):
            TrinaryHamiltonian(
                dims=DIMS,
                h_p=Operator(np.zeros((4, 4))),
                blocks=tuple(
                    [Operator(np.triu(np.ones((4, 4))))] + [Operator.identity(4)] * 3
                ),
            )

    def test_custom_programming_basis(self):
        basis = seeded_random("unitary", 4, 8).entries
        h = TrinaryHamiltonian(
            dims=DIMS,
            h_p=Operator(np.zeros((4, 4))),
            blocks=tuple(seeded_random("hermitian", 4, 20 + n) for n in range(4)),
            programming_basis=basis,
        )
        want = dense_trinary_hamiltonian(
            np.zeros((4, 4)), [b.entries for b in h.blocks], basis
        )
        assert np.max(np.abs(h.full_operator().entries - want)) < 1e-12


class TestCheckPmc:
    def test_diagonal_h_p_satisfied(self):
        h = random_trinary_hamiltonian(DIMS, 1, kind="pmc")
        chk = check_pmc(h)
        assert chk.satisfied and chk.commutator_norm == 0.0

    def test_offdiagonal_coupling_violates(self):
        h_p = np.zeros((4, 4), dtype=complex)
        h_p[0, 1] = h_p[1, 0] = 1.0
        h = TrinaryHamiltonian(
            dims=DIMS,
            h_p=Operator(h_p),
            blocks=tuple(seeded_random("hermitian", 4, 30 + n) for n in range(4)),
        )
        chk = check_pmc(h)
        assert not chk.satisfied and chk.commutator_norm > 0

    def test_equal_blocks_commute_with_anything(self):
        shared = seeded_random("hermitian", 4, 5)
        h = TrinaryHamiltonian(
            dims=DIMS,
            h_p=seeded_random("hermitian", 4, 6),
            blocks=(shared,) * 4,
        )
        assert check_pmc(h).satisfied


class TestCheckSapmc:
    def test_diagonal_h_s_satisfied(self):
        block = random_block_structure(2, 2, 1, kind="sapmc")
        assert check_sapmc(block).satisfied

    def test_sigma_x_against_z_basis_violates(self):
        block = ProgrammedBlockStructure(
            s_basis=standard_basis("Z", 2),
            a_generators=(seeded_random("hermitian", 2, 1), seeded_random("hermitian", 2, 2)),
            h_s=Operator(sigma("x")),
        )
        assert not check_sapmc(block).satisfied

    def test_shared_generators_satisfied(self):
        shared = seeded_random("hermitian", 2, 3)
        block = ProgrammedBlockStructure(
            s_basis=standard_basis("Z", 2),
            a_generators=(shared, shared),
            h_s=seeded_random("hermitian", 2, 4),
        )
        assert check_sapmc(block).satisfied

    def test_assembled_matches_definition(self):
        block = random_block_structure(3, 3, 7, kind="sapmc")
        want = np.kron(block.h_s.entries, np.eye(3))
        for i in range(3):
            proj = np.outer(block.s_basis[:, i], block.s_basis[:, i].conj())
            want = want + np.kron(proj, block.a_generators[i].entries)
        assert np.max(np.abs(block.assemble().entries - want)) <= 1e-12


class TestEvolveFull:
    def test_t_zero_identity(self):
        h = random_trinary_hamiltonian(DIMS, 2, kind="violating")
        state = random_state(DIMS, 3)
        out = evolve_full(h, state, 0.0)
        assert np.max(np.abs(out.dense.amplitudes - state.dense.amplitudes)) < 1e-12

    def test_zero_hamiltonian(self):
        h = TrinaryHamiltonian(
            dims=DIMS,
            h_p=Operator(np.zeros((4, 4))),
            blocks=(Operator(np.zeros((4, 4))),) * 4,
        )
        state = random_state(DIMS, 5)
        out = evolve_full(h, state, 1.7)
        assert np.max(np.abs(out.dense.amplitudes - state.dense.amplitudes)) < 1e-12

    def test_norm_preserved(self):
        h = random_trinary_hamiltonian(DIMS, 6, kind="pmc")
        out = evolve_full(h, random_state(DIMS, 7), 1.0)
        assert abs(np.linalg.norm(out.dense.amplitudes) - 1) <= 1e-10

    def test_matches_eigendecomposition_oracle(self):
        h = random_trinary_hamiltonian(DIMS, 8, kind="violating")
        state = random_state(DIMS, 9)
        want = expm_hermitian(h.full_operator().entries, 0.9) @ state.dense.amplitudes
        out = evolve_full(h, state, 0.9)
        assert np.max(np.abs(out.dense.amplitudes - want)) < 1e-12


class TestEvolveFactorized:
    def test_single_branch_reduces_to_bipartite(self):
        dims = TrinaryDims(2, 2, 1)
        h = random_trinary_hamiltonian(dims, 10, kind="pmc")
        state = random_state(dims, 11)
        a = evolve_full(h, state, 1.3)
        b = evolve_factorized(h, state, 1.3)
        assert np.max(np.abs(a.dense.amplitudes - b.dense.amplitudes)) <= 1e-10

    @pytest.mark.parametrize("kind", ["pmc", "coupled"])
    @pytest.mark.parametrize("t", [0.1, 0.7, 2.0])
    def test_matches_full(self, kind, t):
        h = random_trinary_hamiltonian(DIMS, 12, kind=kind)
        state = random_state(DIMS, 13)
        a = evolve_full(h, state, t)
        b = evolve_factorized(h, state, t)
        assert np.max(np.abs(a.dense.amplitudes - b.dense.amplitudes)) <= 1e-9

    def test_custom_programming_basis_matches_full(self):
        basis = seeded_random("unitary", 4, 44).entries
        h = TrinaryHamiltonian(
            dims=DIMS,
            h_p=Operator(
                basis @ np.diag([0.3, -1.2, 0.5, 2.0]).astype(complex) @ basis.conj().T
            ),
            blocks=tuple(seeded_random("hermitian", 4, 50 + n) for n in range(4)),
            programming_basis=basis,
        )
        assert check_pmc(h).satisfied
        state = random_state(DIMS, 14)
        a = evolve_full(h, state, 0.8)
        b = evolve_factorized(h, state, 0.8)
        assert np.max(np.abs(a.dense.amplitudes - b.dense.amplitudes)) <= 1e-9

    def test_precondition_enforced(self):
        h = random_trinary_hamiltonian(DIMS, 15, kind="violating")
        with pytest.raises(FactorizationPreconditionError):
            evolve_factorized(h, random_state(DIMS, 16), 1.0)

    def test_forced_differs_when_pmc_violated(self):
        h = random_trinary_hamiltonian(DIMS, 17, kind="violating")
        state = random_state(DIMS, 18)
        a = evolve_full(h, state, 1.0)
        b = evolve_factorized(h, state, 1.0, force=True)
        assert np.max(np.abs(a.dense.amplitudes - b.dense.amplitudes)) > 1e-6

    def test_entanglement_creation_from_separable(self):
        h = random_trinary_hamiltonian(DIMS, 19, kind="pmc")
        state = separable_state(DIMS, 100)
        out = evolve_factorized(h, state, 0.1)
        from icqt.trinary import dual_entropies

        s_psa, _ = dual_entropies(out)
        assert s_psa > 1e-6

    def test_block_locality_exact(self):
        # a single-component input never leaks into other programming components
        h = random_trinary_hamiltonian(DIMS, 20, kind="pmc")
        sa = seeded_random("state", 4, 21)
        state = TrinaryState.from_branches(DIMS, [(1.0, sa)] + [(0.0, sa)] * 3)
        out = evolve_factorized(h, state, 1.1)
        rows = out.as_matrix()
        assert np.all(rows[1:] == 0)

    def test_composition(self):
        h = random_trinary_hamiltonian(DIMS, 22, kind="pmc")
        state = random_state(DIMS, 23)
        two_step = evolve_factorized(h, evolve_factorized(h, state, 0.4), 0.8)
        one_step = evolve_factorized(h, state, 1.2)
        assert np.max(np.abs(two_step.dense.amplitudes - one_step.dense.amplitudes)) <= 1e-9

    def test_norm_preserved(self):
        h = random_trinary_hamiltonian(DIMS, 24, kind="coupled")
        out = evolve_factorized(h, random_state(DIMS, 25), 2.0)
        assert abs(np.linalg.norm(out.dense.amplitudes) - 1) <= 1e-10


class TestEvolveProgrammedBlock:
    def test_zero_generators_pure_s_evolution(self):
        d = 2
        block = ProgrammedBlockStructure(
            s_basis=standard_basis("Z", d),
            a_generators=(Operator(np.zeros((d, d))),) * d,
            h_s=Operator(np.diag([0.0, 1.3]).astype(complex)),
        )
        psi = seeded_random("state", d, 1)
        phi = seeded_random("state", d, 2)
        sa = StateVector(np.kron(psi.amplitudes, phi.amplitudes))
        out = evolve_programmed_block(block, sa, 0.9)
        want = np.kron(
            expm_hermitian(block.h_s.entries, 0.9) @ psi.amplitudes, phi.amplitudes
        )
        assert np.max(np.abs(out.amplitudes - want)) < 1e-12

    def test_conditional_evolution_creates_entanglement(self):
        from icqt.linalg import entanglement_entropy

        block = ProgrammedBlockStructure(
            s_basis=standard_basis("Z", 2),
            a_generators=(
                Operator(np.zeros((2, 2))),
                Operator(np.pi / 2 * sigma("x")),
            ),
            h_s=Operator(np.zeros((2, 2))),
        )
        sa = StateVector(np.kron([1, 1] / np.sqrt(2), [1, 0]).astype(complex))
        out = evolve_programmed_block(block, sa, 1.0)
        want = expm_hermitian(block.assemble().entries, 1.0) @ sa.amplitudes
        assert np.max(np.abs(out.amplitudes - want)) <= 1e-9
        assert entanglement_entropy(out, (2, 2)) > 0.1

    def test_t_zero(self):
        block = random_block_structure(3, 3, 3, kind="sapmc")
        sa = seeded_random("state", 9, 4)
        out = evolve_programmed_block(block, sa, 0.0)
        assert np.max(np.abs(out.amplitudes - sa.amplitudes)) < 1e-12

    @pytest.mark.parametrize("d", [2, 3])
    @pytest.mark.parametrize("kind", ["sapmc", "shared"])
    def test_matches_dense_exponential(self, d, kind):
        block = random_block_structure(d, d, 5, kind=kind)
        sa = seeded_random("state", d * d, 6)
        out = evolve_programmed_block(block, sa, 1.4)
        want = expm_hermitian(block.assemble().entries, 1.4) @ sa.amplitudes
        assert np.max(np.abs(out.amplitudes - want)) <= 1e-9

    def test_precondition_enforced(self):
        block = random_block_structure(2, 2, 7, kind="violating")
        assert not check_sapmc(block).satisfied
        with pytest.raises(FactorizationPreconditionError):
            evolve_programmed_block(block, seeded_random("state", 4, 8), 1.0)


class TestTrajectory:
    def test_zero_hamiltonian_constant(self):
        h = TrinaryHamiltonian(
            dims=DIMS,
            h_p=Operator(np.zeros((4, 4))),
            blocks=(Operator(np.zeros((4, 4))),) * 4,
        )
        state = random_state(DIMS, 9)
        traj = entanglement_trajectory(h, state, [0.0, 0.5, 1.0])
        assert np.max(np.abs(traj.s_psa - traj.s_psa[0])) < 1e-10
        assert np.max(np.abs(traj.s_sa_branches - traj.s_sa_branches[0])) < 1e-10

    def test_creation_from_separable(self):
        h = random_trinary_hamiltonian(DIMS, 26, kind="pmc")
        traj = entanglement_trajectory(h, separable_state(DIMS, 27), [0.0, 0.1])
        assert traj.s_psa[0] < 1e-9
        assert traj.s_psa[1] > 1e-6

    def test_bounds_hold_from_entangled_start(self):
        # maximally entangled P|(SA) start stays within the ln d_p bound
        basis_sa = seeded_random("unitary", 4, 28).entries
        pairs = [(0.5 + 0j, StateVector(basis_sa[:, r])) for r in range(4)]
        state = TrinaryState.from_branches(DIMS, pairs)
        h = random_trinary_hamiltonian(DIMS, 29, kind="pmc")
        traj = entanglement_trajectory(h, state, [0.0, 0.3, 0.9])
        assert np.all(traj.s_psa <= np.log(4) + 1e-9)
        assert abs(traj.s_psa[0] - np.log(4)) < 1e-9

    def test_times_validation(self):
        h = random_trinary_hamiltonian(DIMS, 30, kind="pmc")
        state = random_state(DIMS, 31)
        with pytest.raises(ValueError):
            entanglement_trajectory(h, state, [0.1, 0.5])
        with pytest.raises(ValueError):
            entanglement_trajectory(h, state, [0.0, 0.5, 0.2])

    def test_dense_fallback_when_pmc_violated(self):
        h = random_trinary_hamiltonian(DIMS, 32, kind="violating")
        traj = entanglement_trajectory(h, random_state(DIMS, 33), [0.0, 0.2])
        assert not traj.used_factorized

    def test_custom_programming_basis_matches_pointwise_full(self):
        from icqt.trinary import dual_entropies

        basis = seeded_random("unitary", 4, 80).entries
        h = TrinaryHamiltonian(
            dims=DIMS,
            h_p=Operator(
                basis @ np.diag([0.1, 0.9, -0.4, 1.5]).astype(complex) @ basis.conj().T
            ),
            blocks=tuple(seeded_random("hermitian", 4, 81 + n) for n in range(4)),
            programming_basis=basis,
        )
        state = random_state(DIMS, 82)
        times = [0.0, 0.3, 0.8]
        traj = entanglement_trajectory(h, state, times)
        assert traj.used_factorized
        for k, t in enumerate(times):
            s_psa, s_branches = dual_entropies(evolve_full(h, state, t))
            assert abs(traj.s_psa[k] - s_psa) <= 1e-9
            assert np.max(np.abs(traj.s_sa_branches[k] - s_branches)) <= 1e-9


class TestEvolveDispatch:
    def test_picks_factorized_when_condition_holds(self):
        h = random_trinary_hamiltonian(DIMS, 90, kind="pmc")
        state = random_state(DIMS, 91)
        a = evolve(h, state, 0.6)
        b = evolve_factorized(h, state, 0.6)
        assert np.array_equal(a.dense.amplitudes, b.dense.amplitudes)

    def test_falls_back_to_dense(self):
        h = random_trinary_hamiltonian(DIMS, 92, kind="violating")
        state = random_state(DIMS, 93)
        a = evolve(h, state, 0.6)
        b = evolve_full(h, state, 0.6)
        assert np.array_equal(a.dense.amplitudes, b.dense.amplitudes)


class TestSchedule:
    def test_two_segments_match_manual(self):
        h1 = random_trinary_hamiltonian(DIMS, 34, kind="pmc")
        h2 = random_trinary_hamiltonian(DIMS, 35, kind="pmc")
        state = random_state(DIMS, 36)
        out = evolve_schedule([(0.5, h1), (0.7, h2)], state)
        want = evolve(h2, evolve(h1, state, 0.5), 0.7)
        assert np.max(np.abs(out.dense.amplitudes - want.dense.amplitudes)) < 1e-12

    def test_rejects_negative_duration(self):
        h = random_trinary_hamiltonian(DIMS, 37, kind="pmc")
        with pytest.raises(ValueError):
            evolve_schedule([(-0.1, h)], random_state(DIMS, 38))

    def test_violating_segment_evolves_densely(self):
        h_ok = random_trinary_hamiltonian(DIMS, 41, kind="pmc")
        h_bad = random_trinary_hamiltonian(DIMS, 42, kind="violating")
        state = random_state(DIMS, 43)
        out = evolve_schedule([(0.3, h_ok), (0.4, h_bad)], state)
        want = evolve_full(h_bad, evolve_full(h_ok, state, 0.3), 0.4)
        assert np.max(np.abs(out.dense.amplitudes - want.dense.amplitudes)) <= 1e-9


class TestSwappedRoles:
    def test_matches_dense_oracle(self):
        h_sa = Operator(np.diag(np.arange(4.0)).astype(complex))
        blocks_p = tuple(seeded_random("hermitian", 4, 60 + m) for m in range(4))
        state = random_state(DIMS, 39)
        out = evolve_swapped_factorized(h_sa, blocks_p, state, 0.6)
        full = swapped_full_operator(h_sa, blocks_p, DIMS)
        want = hermitian_propagator(full, 0.6).apply(state.dense)
        assert np.max(np.abs(out.dense.amplitudes - want.amplitudes)) <= 1e-9

    def test_precondition_enforced(self):
        h_sa = seeded_random("hermitian", 4, 61)
        blocks_p = tuple(seeded_random("hermitian", 4, 70 + m) for m in range(4))
        with pytest.raises(FactorizationPreconditionError):
            evolve_swapped_factorized(h_sa, blocks_p, random_state(DIMS, 40), 1.0)
