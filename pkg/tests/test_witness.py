import unittest

import numpy
from numpy.testing import assert_allclose

from mubwit_helper_classes import WitnessSpec, WitnessSpecError, ContractError, DomainError
from mubwit_linalg import partial_transpose, eig_hermitian, eigvals_hermitian
from mubwit_mubs import complete_set, heisenberg_weyl_set, d3_fixture
from mubwit_witness import (
    flip,
    sym_projector,
    asym_projector,
    max_entangled,
    shift_projector,
    reduction_map,
    choi_matrix,
    reduction_witness,
    witness_bound,
    weyl_op,
    bell_basis,
    bell_witness,
    two_design_sum,
    build_B,
    build_B_gamma,
    build_W,
    shift_identity_check,
    universal_elements,
    universal_deviation,
    check_universal,
    witness_label,
)
from mubwit_reference import reference_matrix
from mubwit_analysis import product_probe
from .doubles import hw_witness, random_hermitian


class TestOperators(unittest.TestCase):
    def test_flip_and_projectors(self):
        d = 3
        assert_allclose(flip(d) @ flip(d), numpy.eye(d * d))
        assert_allclose(sym_projector(d) + asym_projector(d), numpy.eye(d * d))
        self.assertAlmostEqual(numpy.trace(asym_projector(d)).real, d * (d - 1) / 2)
        self.assertAlmostEqual(numpy.trace(max_entangled(d)).real, 1.0)

    def test_shift_projector(self):
        pi = shift_projector(4, 1)
        self.assertEqual(numpy.trace(pi).real, 4)
        # |0>|1> is at 0*4 + 1
        self.assertEqual(pi[1, 1], 1)
        with self.assertRaises(DomainError):
            shift_projector(4, 4)

    def test_reduction_choi(self):
        for d in (2, 3, 4):
            assert_allclose(choi_matrix(reduction_map, d), reduction_witness(d), atol=1e-12)

    def test_max_entangled_transposes_to_flip(self):
        for d in (2, 3, 4):
            assert_allclose(partial_transpose(d * max_entangled(d), d), flip(d), atol=1e-12)

    def test_spectra(self):
        values = eig_hermitian(2 * asym_projector(3)).eigenvalues
        assert_allclose(values, [0.0] * 6 + [2.0] * 3, atol=1e-12)
        values = eig_hermitian(numpy.eye(9) - 3 * max_entangled(3)).eigenvalues
        assert_allclose(values, [-2.0] + [1.0] * 8, atol=1e-12)

    def test_witness_bound(self):
        self.assertEqual(witness_bound(3, 4), 2.0)
        self.assertEqual(witness_bound(4, 3), 1.5)


class TestWeylAndBell(unittest.TestCase):
    def test_adjoint_relation(self):
        d = 5
        for k in range(d):
            for l in range(d):
                omega = numpy.exp(2j * numpy.pi * k * l / d)
                assert_allclose(weyl_op(d, k, l).conj().T, omega * weyl_op(d, -k, -l), atol=1e-12)

    def test_composition(self):
        d = 5
        for m in range(d):
            for n in range(d):
                for k in range(d):
                    for l in range(d):
                        omega = numpy.exp(2j * numpy.pi * n * k / d)
                        assert_allclose(
                            weyl_op(d, m, n) @ weyl_op(d, k, l),
                            omega * weyl_op(d, m + k, n + l),
                            atol=1e-12,
                        )

    def test_trace_orthogonality(self):
        d = 3
        ops = [weyl_op(d, k, l) for k in range(d) for l in range(d)]
        gram = numpy.array([[numpy.trace(a.conj().T @ b) for b in ops] for a in ops])
        assert_allclose(gram, d * numpy.eye(d * d), atol=1e-12)

    def test_bell_basis(self):
        d = 3
        bell = bell_basis(d)
        vectors = bell.vectors.reshape(d * d, d * d)
        assert_allclose(vectors @ vectors.conj().T, numpy.eye(d * d), atol=1e-12)
        assert_allclose(bell.projector(0, 0), max_entangled(d), atol=1e-12)
        for l in range(d):
            assert_allclose(bell.shift_sum(l), shift_projector(d, l), atol=1e-12)

    def test_bell_witness_is_mub_witness(self):
        for d in (3, 5):
            mub_set = complete_set(d)
            for s in range(d):
                spec = WitnessSpec.covering(mub_set, s, gamma=True)
                assert_allclose(bell_witness(d, s), build_W(spec, mub_set), atol=1e-12)


    def test_bell_witness_is_bell_diagonal(self):
        for d in (2, 3, 5):
            rows = bell_basis(d).vectors.reshape(d * d, d * d)
            for s in range(1, d):
                frame = rows.conj() @ bell_witness(d, s) @ rows.T
                expected = numpy.ones((d, d))
                expected[:, 0] += 1
                expected[:, s] -= 1
                expected[0, 0] -= d
                # entry (k, l) of the diagonal is the eigenvalue on psi_kl
                assert_allclose(frame, numpy.diag(expected.ravel()), atol=1e-12)


class TestMubWitness(unittest.TestCase):
    def test_zero_shift_collapse(self):
        for d in (2, 3, 5):
            mub_set = complete_set(d)
            w = build_W(WitnessSpec.covering(mub_set, 0), mub_set)
            assert_allclose(w, 2 * asym_projector(d), atol=1e-12)
            w_gamma = build_W(WitnessSpec.covering(mub_set, 0, gamma=True), mub_set)
            assert_allclose(w_gamma, numpy.eye(d * d) - d * max_entangled(d), atol=1e-12)

    def test_complete_set_with_shift(self):
        for d in (2, 3, 5):
            mub_set = complete_set(d)
            for s in range(d):
                w = build_W(WitnessSpec.covering(mub_set, s), mub_set)
                expected = 2 * asym_projector(d) + shift_projector(d, 0) - shift_projector(d, s)
                assert_allclose(w, expected, atol=1e-12)

    def test_two_design_sum(self):
        d = 3
        assert_allclose(two_design_sum(complete_set(d)), 2 * sym_projector(d), atol=1e-12)

    def test_gamma_built_directly(self):
        mub_set = heisenberg_weyl_set(5)
        b = build_B(mub_set, ["0", "1", "3"], s=2)
        assert_allclose(build_B_gamma(mub_set, ["0", "1", "3"], s=2), partial_transpose(b, 5), atol=1e-12)

    def test_trace_and_hermiticity(self):
        for m in (2, 3, 4):
            w = hw_witness(3, m, 1, gamma=False)
            self.assertAlmostEqual(numpy.trace(w).real, 3 * 2)
            assert_allclose(w, w.conj().T, atol=1e-14)

    def test_trace_of_B(self):
        mub_set = heisenberg_weyl_set(5)
        for m in range(1, 7):
            for s in (0, 2):
                b = build_B(mub_set, list(range(m)), s)
                self.assertAlmostEqual(numpy.trace(b).real, m * 5)

    def test_printed_d3_witnesses(self):
        assert_allclose(hw_witness(3, 3, 1), reference_matrix("W_012"), atol=1e-12)
        fixture = d3_fixture()
        for name, selection in (("W_013", (0, 1, 3)), ("W_023", (0, 2, 3)), ("W_02", (0, 2))):
            spec = WitnessSpec(3, selection, 1, gamma=True)
            assert_allclose(build_W(spec, fixture), reference_matrix(name), atol=1e-12)

    def test_canonical_basis_required_once(self):
        mub_set = heisenberg_weyl_set(3)
        with self.assertRaises(WitnessSpecError):
            build_W(WitnessSpec(3, (1, 2), 1), mub_set)
        with self.assertRaises(WitnessSpecError):
            build_W(WitnessSpec(3, (0, 0, 1), 1), mub_set)
        with self.assertRaises(WitnessSpecError):
            build_W(WitnessSpec(5, (0, 1), 1), mub_set)

    def test_canonical_basis_moves_first(self):
        mub_set = heisenberg_weyl_set(3)
        assert_allclose(
            build_W(WitnessSpec(3, (2, 0, 1), 1), mub_set),
            build_W(WitnessSpec(3, (0, 1, 2), 1), mub_set),
            atol=1e-14,
        )

    def test_nonnegative_on_product_states(self):
        for gamma in (False, True):
            w = hw_witness(5, 4, 2, gamma)
            self.assertGreater(product_probe(w, 5, samples=2000, seed=3), -1e-10)

    def test_witness_is_not_positive(self):
        self.assertLess(eigvals_hermitian(hw_witness(3, 4, 1))[0], -1e-3)

    def test_shift_identity(self):
        for d, s in ((2, 1), (3, 1), (5, 2), (7, 3)):
            self.assertTrue(shift_identity_check(d, s))


class TestUniversalElements(unittest.TestCase):
    def test_element_table(self):
        elements = universal_elements(3, 1, 3)
        self.assertEqual(elements[(0, 0, 1, 1)], 0.0)
        self.assertEqual(elements[(0, 0, 2, 2)], 1.0)
        self.assertAlmostEqual(elements[(0, 1, 0, 1)], -2 / 3)
        self.assertEqual(len(elements), 9 + 6)

    def test_every_set_shares_them(self):
        for d, m, s in ((3, 2, 1), (5, 3, 2), (5, 6, 4), (7, 4, 1)):
            w = hw_witness(d, m, s, gamma=False)
            self.assertLess(universal_deviation(w, d, s, m), 1e-12)
            self.assertLess(check_universal(w, d, s, m), 1e-12)

    def test_random_matrix_fails(self):
        h = random_hermitian(numpy.random.default_rng(5), 9)
        with self.assertRaises(ContractError):
            check_universal(h, 3, 1, 3)

    def test_label(self):
        mub_set = heisenberg_weyl_set(3)
        self.assertEqual(witness_label(WitnessSpec(3, ("B2", "B0"), 1, True), mub_set), "W(0,2;s=1)^G")
        self.assertEqual(witness_label(WitnessSpec(3, (1,), 1), mub_set), "W(1;s=1)")
