import numpy as np
import pytest

from ifs_spectra.errors import (
    FiberCountMismatchError,
    NotInvariantError,
    NotUnimodularError,
    SizeMismatchError,
)
from ifs_spectra.lattice import IntMatrix
from ifs_spectra.measure import FourierEvaluator, WeightFunction
from ifs_spectra.triple import (
    HadamardTriple,
    conjugate,
    factor_along,
    is_complete_residue_system,
    validate_hadamard,
)


class TestValidate:
    def test_reference_2d(self, T2):
        res = T2.validate()
        assert res.ok
        assert res.unitarity_residual < 1e-10

    def test_sub_pair(self, T1):
        assert T1.validate().ok

    def test_binary_fourier(self):
        assert validate_hadamard(IntMatrix([[2]]), [(0,), (1,)], [(0,), (1,)]).ok

    def test_cantor_pair_fails(self):
        res = validate_hadamard(IntMatrix([[3]]), [(0,), (2,)], [(0,), (1,)])
        assert not res.ok
        assert res.witness_pair is not None

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatchError):
            validate_hadamard(IntMatrix([[2]]), [(0,), (1,)], [(0,)])

    def test_congruent_digits_reported(self):
        res = validate_hadamard(IntMatrix([[2]]), [(0,), (2,)], [(0,), (1,)])
        assert ((0,), (2,)) in res.b_congruence_violations
        assert not res.ok


class TestConjugate:
    def test_identity(self, T2):
        Tc = conjugate(T2, IntMatrix([[1, 0], [0, 1]]))
        assert Tc.R.entries == T2.R.entries
        assert Tc.B == T2.B and Tc.L == T2.L

    def test_shear_preserves_hadamard(self, T2):
        Tc = conjugate(T2, IntMatrix([[1, 1], [0, 1]]))
        assert Tc.validate().ok

    def test_sign_flip_1d(self, T1):
        Tc = conjugate(T1, IntMatrix([[-1]]))
        assert set(Tc.B) == {(0,), (-1,)}
        assert set(Tc.L) == {(0,), (-2,)}
        assert Tc.validate().ok

    def test_non_unimodular_rejected(self, T2):
        with pytest.raises(NotUnimodularError):
            conjugate(T2, IntMatrix([[2, 0], [0, 1]]))

    def test_weight_transport(self, T2):
        # W of the conjugated digits at x equals W of the originals at M^T x
        M = IntMatrix([[1, 1], [0, 1]])
        Tc = conjugate(T2, M)
        W1, W2 = WeightFunction(T2.B), WeightFunction(Tc.B)
        rng = np.random.default_rng(0)
        xs = rng.uniform(-3, 3, size=(100, 2))
        # row-vector form of M^T x is x @ M
        assert np.abs(W2.batch(xs) - W1.batch(xs @ M.to_float())).max() < 1e-12

    def test_fourier_transport(self, T2):
        M = IntMatrix([[1, 1], [0, 1]])
        Tc = conjugate(T2, M)
        E1 = FourierEvaluator.for_triple(T2)
        E2 = FourierEvaluator.for_triple(Tc)
        MT = M.transpose().to_float()
        rng = np.random.default_rng(1)
        for x in rng.uniform(-2, 2, size=(10, 2)):
            v2, err2 = E2.mu_hat(x)
            v1, err1 = E1.mu_hat(MT @ x)
            assert abs(abs(v2) - abs(v1)) < err1 + err2 + 1e-12


class TestFactor:
    def test_reference_blocks(self, T2):
        F = factor_along(T2, 1)
        assert F.S1.entries == ((4,),) and F.S2.entries == ((4,),)
        assert F.C == ((1,),)
        assert F.A1.entries == ((4,),) and F.A2.entries == ((4,),)
        assert F.Cstar == ((1,),)
        assert F.r_digits == ((0,), (1,))
        assert F.eta == (((0,), (3,)), ((0,), (3,)))
        assert F.s_digits == ((0,), (2,))
        assert F.gamma == (((0,), (2,)), ((0,), (2,)))
        assert F.eta_constant

    def test_reassembly(self, T2):
        F = factor_along(T2, 1)
        B, L = F.reassembled_digits()
        assert set(B) == set(T2.B)
        assert set(L) == set(T2.L)

    def test_sub_triples_valid(self, T2):
        F = factor_along(T2, 1)
        assert F.first_triple().validate().ok
        assert F.second_triple().validate().ok

    def test_block_diagonal_product(self):
        T = HadamardTriple(
            [[4, 0], [0, 4]],
            [(0, 0), (0, 3), (1, 0), (1, 3)],
            [(0, 0), (2, 0), (0, 2), (2, 2)],
        )
        F = factor_along(T, 1)
        assert F.C == ((0,),)
        assert F.first_triple().validate().ok

    def test_wrong_subspace_rejected(self, T2):
        # splitting along {0} x R means conjugating by the swap first
        swapped = conjugate(T2, IntMatrix([[0, 1], [1, 0]]))
        with pytest.raises(NotInvariantError):
            factor_along(swapped, 1)

    def test_unequal_fibers_rejected(self):
        T = HadamardTriple(
            [[4, 0], [0, 4]],
            [(0, 0), (0, 3), (1, 0), (2, 1)],
            [(0, 0), (2, 0), (0, 2), (2, 2)],
        )
        with pytest.raises(FiberCountMismatchError):
            factor_along(T, 1)


class TestResidueSystem:
    def test_binary(self):
        assert is_complete_residue_system(IntMatrix([[2]]), [(0,), (1,)])

    def test_reference_is_not(self, T2):
        assert not is_complete_residue_system(T2.R, T2.B)

    def test_shifted_residues(self):
        assert is_complete_residue_system(IntMatrix([[3]]), [(0,), (1,), (5,)])
