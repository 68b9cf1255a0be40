import unittest

import numpy
from numpy.testing import assert_allclose

from mubwit_helper_classes import (
    BipartiteIndex,
    ShapeError,
    SizeError,
    ContractError,
    DomainError,
    ConvergenceError,
)
from mubwit_linalg import (
    as_cmatrix,
    local_dim,
    kron,
    partial_transpose,
    partial_trace,
    w_elem,
    hermiticity_residual,
    check_hermitian,
    jacobi_eigh,
    eig_hermitian,
    eigvals_hermitian,
    is_psd,
    set_eigen_method,
    get_eigen_method,
    matrix_to_dict,
    matrix_from_dict,
)
from .doubles import random_hermitian, random_matrix, unit


class TestShapes(unittest.TestCase):
    def test_as_cmatrix(self):
        self.assertEqual(as_cmatrix([[1, 2], [3, 4]]).dtype, complex)
        with self.assertRaises(ShapeError):
            as_cmatrix(numpy.zeros((2, 3)))
        with self.assertRaises(ContractError):
            as_cmatrix([[numpy.nan, 0], [0, 1]])

    def test_local_dim(self):
        self.assertEqual(local_dim(numpy.eye(9)), 3)
        with self.assertRaises(ShapeError):
            local_dim(numpy.eye(5))

    def test_kron_limit(self):
        self.assertEqual(kron(numpy.eye(3), numpy.eye(4)).shape, (12, 12))
        with self.assertRaises(SizeError):
            kron(numpy.eye(8), numpy.eye(8), max_dim=32)

    def test_kron_trace_and_associativity(self):
        rng = numpy.random.default_rng(3)
        # integer entries keep every product exact
        a, b, c = (
            rng.integers(-5, 6, (n, n)) + 1j * rng.integers(-5, 6, (n, n)) for n in (2, 3, 4)
        )
        self.assertAlmostEqual(numpy.trace(kron(a, b)), numpy.trace(a) * numpy.trace(b), places=12)
        self.assertTrue(numpy.array_equal(kron(kron(a, b), c), kron(a, kron(b, c))))

    def test_bipartite_index(self):
        index = BipartiteIndex(4)
        for i in range(4):
            for l in range(4):
                self.assertEqual(index.split(index.join(i, l)), (i, l))
        self.assertEqual(index.join(5, -1), index.join(1, 3))
        with self.assertRaises(DomainError):
            index.split(16)

    def test_errors_are_value_errors(self):
        with self.assertRaises(ValueError):
            local_dim(numpy.eye(7))


class TestPartialOperations(unittest.TestCase):
    def setUp(self):
        self.rng = numpy.random.default_rng(7)

    def test_partial_transpose_of_product(self):
        a = random_matrix(self.rng, 3)
        b = random_matrix(self.rng, 3)
        assert_allclose(partial_transpose(numpy.kron(a, b), 3), numpy.kron(a, b.T))

    def test_partial_transpose_is_involution(self):
        m = random_matrix(self.rng, 16)
        assert_allclose(partial_transpose(partial_transpose(m, 4), 4), m)
        with self.assertRaises(ShapeError):
            partial_transpose(m, 3)

    def test_partial_trace(self):
        a = random_matrix(self.rng, 3)
        b = random_matrix(self.rng, 3)
        ab = numpy.kron(a, b)
        assert_allclose(partial_trace(ab, 3, keep=0), a * numpy.trace(b))
        assert_allclose(partial_trace(ab, 3, keep=1), numpy.trace(a) * b)
        with self.assertRaises(DomainError):
            partial_trace(ab, 3, keep=2)

    def test_w_elem(self):
        d = 3
        # |i><j| (x) |l><k|
        m = numpy.kron(unit(d, 0, 2), unit(d, 1, 2))
        self.assertEqual(w_elem(m, d, 0, 2, 2, 1), 1)
        self.assertEqual(numpy.count_nonzero(m), 1)


class TestEigensolvers(unittest.TestCase):
    def setUp(self):
        self.rng = numpy.random.default_rng(11)

    def tearDown(self):
        set_eigen_method("lapack")

    def test_hermiticity(self):
        h = random_hermitian(self.rng, 4)
        self.assertEqual(hermiticity_residual(h), 0.0)
        m = h.copy()
        m[0, 1] += 1e-3
        self.assertAlmostEqual(hermiticity_residual(m), 1e-3)
        with self.assertRaises(ContractError):
            check_hermitian(m)

    def test_jacobi_matches_lapack(self):
        h = random_hermitian(self.rng, 9)
        result = jacobi_eigh(h)
        assert_allclose(result.eigenvalues, numpy.linalg.eigvalsh(h), atol=1e-10)
        v = result.eigenvectors
        assert_allclose(v @ numpy.diag(result.eigenvalues) @ v.conj().T, h, atol=1e-10)
        assert_allclose(v.conj().T @ v, numpy.eye(9), atol=1e-10)

    def test_jacobi_dim_64(self):
        h = random_hermitian(self.rng, 64)
        result = jacobi_eigh(h)
        v = result.eigenvectors
        reconstructed = (v * result.eigenvalues) @ v.conj().T
        self.assertLess(numpy.max(numpy.abs(reconstructed - h)), 1e-9)

    def test_jacobi_sweep_cap(self):
        h = random_hermitian(self.rng, 4)
        with self.assertRaises(ConvergenceError):
            jacobi_eigh(h, max_sweeps=0)

    def test_jacobi_on_diagonal_input(self):
        result = jacobi_eigh(numpy.diag([3.0, 1.0, 2.0]))
        assert_allclose(result.eigenvalues, [1.0, 2.0, 3.0])

    def test_method_selection(self):
        h = random_hermitian(self.rng, 6)
        expected = numpy.linalg.eigvalsh(h)
        assert_allclose(eigvals_hermitian(h, method="jacobi"), expected, atol=1e-10)
        set_eigen_method("jacobi")
        self.assertEqual(get_eigen_method(), "jacobi")
        assert_allclose(eig_hermitian(h).eigenvalues, expected, atol=1e-10)
        with self.assertRaises(DomainError):
            set_eigen_method("qr")

    def test_is_psd(self):
        psd, min_eig = is_psd(numpy.diag([0.0, 1.0]))
        self.assertTrue(psd)
        self.assertEqual(min_eig, 0.0)
        psd, min_eig = is_psd(numpy.diag([-1e-3, 1.0]))
        self.assertFalse(psd)
        self.assertAlmostEqual(min_eig, -1e-3)

    def test_is_psd_equicorrelated_block(self):
        # [[1, a, a], [a, 1, a], [a, a, 1]] has eigenvalues 1 + 2a and 1 - a
        for d, m in ((3, 2), (4, 3), (5, 3), (5, 4), (3, 4), (7, 5)):
            a = -(m - 1) / d
            block = (1 - a) * numpy.eye(3) + a * numpy.ones((3, 3))
            self.assertEqual(is_psd(block, 1e-10)[0], a >= -0.5, (d, m))


class TestMatrixJson(unittest.TestCase):
    def test_dict_form(self):
        m = numpy.array([[1, 2j], [-2j, 3]])
        data = matrix_to_dict(m)
        self.assertEqual(data, {"dim": 2, "re": [1.0, 0.0, 0.0, 3.0], "im": [0.0, 2.0, -2.0, 0.0]})
        assert_allclose(matrix_from_dict(data), m)

    def test_malformed(self):
        with self.assertRaises(ShapeError):
            matrix_from_dict({"dim": 2, "re": [1, 2, 3], "im": [0, 0, 0]})
        with self.assertRaises(ShapeError):
            matrix_from_dict({"re": [1], "im": [0]})
