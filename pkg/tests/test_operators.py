import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeeman_pair.coupling import DIPOLES, CouplingSet, Geometry, coupling_from_tensor
from zeeman_pair.operators import (
    DIM,
    Dissipator,
    SystemParams,
    angular_momentum,
    dipole_operator,
    dissipator,
    hamiltonian_atomic,
    hamiltonian_dipole,
    hamiltonian_laser,
    index,
    ket,
    projector,
    rotation_operator,
    single_atom_angular_momentum,
    spatial_rotation,
    transition_operator,
)
from zeeman_pair.spectra import hamiltonian_rotation_residual

from .helpers import random_density_matrix, random_hermitian, unit_vectors


def comm(a, b):
    return a @ b - b @ a


def test_basis_ordering():
    assert index(1, 1) == 0 and index(4, 4) == 15 and index(3, 4) == 11
    assert ket(2, 3)[index(2, 3)] == 1 and np.count_nonzero(ket(2, 3)) == 1


class TestSystemParams:
    def test_rejects_negative_drive(self):
        with pytest.raises(ValueError):
            SystemParams(omega_L=-1.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            SystemParams(delta=float("nan"))


class TestTransitionOperators:
    def test_raise_from_ground(self):
        s = transition_operator(1, 3, "raise")
        np.testing.assert_array_equal(s @ ket(4, 4), ket(3, 4))

    def test_nilpotent(self):
        s = transition_operator(1, 3, "raise")
        assert not np.any(s @ s)

    @pytest.mark.parametrize("atom", [1, 2])
    @pytest.mark.parametrize("level", [1, 2, 3])
    def test_adjoint_and_projector(self, atom, level):
        up = transition_operator(atom, level, "raise")
        down = transition_operator(atom, level, "lower")
        np.testing.assert_array_equal(up, down.conj().T)
        states = [(level, j) if atom == 1 else (j, level) for j in range(1, 5)]
        np.testing.assert_array_equal(up @ down, projector([index(*s) for s in states]))

    def test_rejects_bad_arguments(self):
        with pytest.raises(IndexError):
            transition_operator(1, 4)
        with pytest.raises(IndexError):
            transition_operator(3, 1)
        with pytest.raises(ValueError):
            transition_operator(1, 1, "sideways")


class TestHamiltonians:
    def test_atomic_degenerate_frame(self):
        h = hamiltonian_atomic(SystemParams())
        assert not np.any(h)

    def test_atomic_zeeman_ladder(self):
        h = hamiltonian_atomic(SystemParams(delta=2.0))
        assert h[index(3, 4), index(3, 4)] == 2.0
        assert h[index(1, 4), index(1, 4)] == -2.0
        assert h[index(2, 4), index(2, 4)] == 0.0

    def test_atomic_detuning(self):
        h = hamiltonian_atomic(SystemParams(detuning=0.58, laser_on=True))
        for i in (1, 2, 3):
            assert h[index(i, 4), index(i, 4)] == pytest.approx(-0.58)
            assert h[index(4, i), index(4, i)] == pytest.approx(-0.58)
            for j in (1, 2, 3):
                assert h[index(i, j), index(i, j)] == pytest.approx(-1.16)
        assert h[index(4, 4), index(4, 4)] == 0.0

    def test_detuning_ignored_without_laser(self):
        assert not np.any(hamiltonian_atomic(SystemParams(detuning=0.58)))

    def test_dipole_zero_couplings(self):
        assert not np.any(hamiltonian_dipole(CouplingSet.zero()))

    @settings(deadline=None)
    @given(st.floats(0.05, 5.0), st.floats(0.0, math.pi), st.floats(0.0, 6.28))
    def test_dipole_structure(self, R, theta, phi):
        h = hamiltonian_dipole(coupling_from_tensor(Geometry(R, theta, phi)))
        assert np.abs(h - h.conj().T).max() < 1e-14
        single = [index(i, 4) for i in (1, 2, 3)] + [index(4, i) for i in (1, 2, 3)]
        others = [k for k in range(DIM) if k not in single]
        assert not np.any(h[others, :]) and not np.any(h[:, others])

    def test_laser(self):
        assert not np.any(hamiltonian_laser(SystemParams(omega_L=0.0, laser_on=True)))
        assert not np.any(hamiltonian_laser(SystemParams(omega_L=2.0)))
        h = hamiltonian_laser(SystemParams(omega_L=2.0, laser_on=True))
        assert h[index(3, 4), index(4, 4)] == 2.0
        assert h[index(4, 3), index(4, 4)] == 2.0
        assert h[index(1, 4), index(4, 4)] == 0.0
        np.testing.assert_array_equal(h, h.conj().T)


class TestDissipator:
    def test_ground_dark(self, generic_couplings):
        rho = np.outer(ket(4, 4), ket(4, 4))
        assert not np.any(dissipator(rho, generic_couplings))

    def test_single_atom_decay(self):
        rho = np.outer(ket(3, 4), ket(3, 4)).astype(complex)
        out = dissipator(rho, CouplingSet.zero())
        assert out[index(4, 4), index(4, 4)] == pytest.approx(2.0)
        assert out[index(3, 4), index(3, 4)] == pytest.approx(-2.0)
        assert abs(np.trace(out)) < 1e-15

    def test_hermitian_traceless(self, generic_couplings, rng):
        d = Dissipator(generic_couplings)
        for _ in range(20):
            rho = random_density_matrix(rng)
            out = d(rho)
            assert abs(np.trace(out)) < 1e-12
            assert np.abs(out - out.conj().T).max() < 1e-13

    def test_matches_plain_sum(self, generic_couplings, rng):
        # literal double sum over decay channels as an oracle
        c = generic_couplings
        rho = random_density_matrix(rng)
        ops = [(mu, i) for mu in (1, 2) for i in (1, 2, 3)]
        expected = np.zeros((DIM, DIM), dtype=complex)
        for mu, i in ops:
            for nu, j in ops:
                if mu == nu:
                    rate = 1.0 if i == j else 0.0
                else:
                    rate = c.gamma[j - 1, i - 1]
                if rate == 0:
                    continue
                la = transition_operator(mu, i, "lower")
                lb = transition_operator(nu, j, "lower")
                lbd = lb.conj().T
                expected += rate * (2 * la @ rho @ lbd - lbd @ la @ rho - rho @ lbd @ la)
        np.testing.assert_allclose(Dissipator(c)(rho), expected, atol=1e-14)

    def test_shape_check(self, generic_couplings):
        with pytest.raises(ValueError):
            Dissipator(generic_couplings)(np.eye(4))


class TestAngularMomentum:
    def test_jz_eigenvalues(self):
        jz = angular_momentum("z", 1)
        np.testing.assert_array_equal(jz @ ket(3, 4), ket(3, 4))
        assert not np.any(jz @ ket(4, 2))

    @pytest.mark.parametrize("atom", [1, 2])
    def test_algebra(self, atom):
        jx, jy, jz = (angular_momentum(c, atom) for c in "xyz")
        assert np.abs(comm(jx, jy) - 1j * jz).max() < 1e-14
        assert np.abs(comm(jy, jz) - 1j * jx).max() < 1e-14
        assert np.abs(comm(jz, jx) - 1j * jy).max() < 1e-14

    def test_casimir(self):
        j2 = sum(single_atom_angular_momentum(c) @ single_atom_angular_momentum(c) for c in "xyz")
        np.testing.assert_allclose(j2, np.diag([2, 2, 2, 0]), atol=1e-14)

    def test_atoms_commute(self):
        assert not np.any(comm(angular_momentum("x", 1), angular_momentum("y", 2)))

    def test_bad_component(self):
        with pytest.raises(ValueError):
            single_atom_angular_momentum("w")


class TestRotation:
    def test_identity(self):
        np.testing.assert_allclose(rotation_operator([0, 0, 1], 0.0), np.eye(DIM), atol=1e-15)

    def test_z_phases(self):
        alpha = 0.7
        w = rotation_operator([0, 0, 1], alpha)
        np.testing.assert_allclose(w @ ket(3, 4), np.exp(-1j * alpha) * ket(3, 4), atol=1e-15)
        np.testing.assert_allclose(w @ ket(4, 4), ket(4, 4), atol=1e-15)

    @given(unit_vectors, st.floats(-7, 7), st.floats(-7, 7))
    def test_unitary_and_composition(self, u, a, b):
        wa, wb = rotation_operator(u, a), rotation_operator(u, b)
        assert np.abs(wa @ wa.conj().T - np.eye(DIM)).max() < 1e-12
        assert np.abs(wa @ wb - rotation_operator(u, a + b)).max() < 1e-12
        # ground level of each atom is invariant
        assert np.abs(wa @ ket(4, 4) - ket(4, 4)).max() < 1e-15

    @given(unit_vectors, st.floats(-7, 7))
    def test_spatial_rotation_orthogonal(self, u, a):
        d = spatial_rotation(u, a)
        assert np.abs(d @ d.T - np.eye(3)).max() < 1e-14
        assert abs(np.linalg.det(d) - 1) < 1e-13
        np.testing.assert_allclose(d @ u, u, atol=1e-14)

    def test_rejects_non_unit_axis(self):
        with pytest.raises(ValueError):
            rotation_operator([1, 1, 0], 0.3)

    @given(unit_vectors, st.floats(-7, 7))
    def test_dipole_transformation(self, u, a):
        # W d W^+ is the dipole operator assembled from D^-1 d_i
        w = rotation_operator(u, a)
        dinv = spatial_rotation(u, a).T
        d = DIPOLES.as_array()
        rotated = type(DIPOLES)(*(dinv @ d[i] for i in range(3)))
        for atom in (1, 2):
            lhs = np.einsum("ij,kjl,lm->kim", w, dipole_operator(atom), w.conj().T)
            assert np.abs(lhs - dipole_operator(atom, rotated)).max() < 1e-12


class TestCommutationWithAtomicHamiltonian:
    def test_delta_zero_any_axis(self, rng):
        h = hamiltonian_atomic(SystemParams(detuning=0.58, laser_on=True))
        for _ in range(20):
            u = rng.normal(size=3)
            w = rotation_operator(u / np.linalg.norm(u), rng.uniform(0, 6.3))
            assert np.abs(comm(h, w)).max() < 1e-12

    def test_z_axis_with_splitting(self):
        h = hamiltonian_atomic(SystemParams(delta=2.0))
        assert np.abs(comm(h, rotation_operator([0, 0, 1], 1.1))).max() < 1e-12

    @pytest.mark.parametrize("axis", [[1, 0, 0], [0, 1, 0], [0.6, 0, 0.8]])
    def test_generic_axis_with_splitting(self, axis):
        h = hamiltonian_atomic(SystemParams(delta=2.0))
        assert np.abs(comm(h, rotation_operator(axis, 1.1))).max() > 0.1


class TestTheorem:
    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.05, 5.0), st.floats(0.0, math.pi), st.floats(0.0, 6.28), unit_vectors,
           st.floats(0.0, 2 * math.pi))
    def test_hamiltonian_conjugation(self, R, theta, phi, u, alpha):
        assert hamiltonian_rotation_residual(Geometry(R, theta, phi), u, alpha) < 1e-10

    def test_invariant_states(self, generic_couplings):
        h = hamiltonian_dipole(generic_couplings)
        for i in (1, 2, 3, 4):
            for j in (1, 2, 3):
                if i == 4:
                    continue
                assert not np.any(h @ ket(i, j))
        assert not np.any(h @ ket(4, 4))


def test_random_hermitian_helper(rng):
    h = random_hermitian(rng)
    np.testing.assert_array_equal(h, h.conj().T)
