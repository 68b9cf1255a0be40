# coding: utf-8
"""
Dense complex matrix helpers for bipartite operators on C^d (x) C^d.

Composite index convention: |i>|l> is row/column i*d + l, the layout of
numpy.kron. The second tensor factor is the one partial_transpose acts on.
"""
import math
import time

import numpy

from mubwit_globals import (
    LOGGER,
    MAX_DIM,
    HERMITIAN_TOL,
    PSD_TOL,
    EIGEN_METHOD,
    EIGEN_METHODS,
    JACOBI_THRESHOLD,
    JACOBI_MAX_SWEEPS,
)
from mubwit_helper_classes import (
    EigenResult,
    ShapeError,
    SizeError,
    ContractError,
    DomainError,
    ConvergenceError,
)

# Process-wide default, switched by the CLI's --eigensolver flag
_eigen_method = EIGEN_METHOD


def set_eigen_method(method):
    global _eigen_method  # pylint: disable=global-statement
    if method not in EIGEN_METHODS:
        raise DomainError(
            "unknown eigensolver '{}'; expected one of {}".format(
                method, ", ".join(EIGEN_METHODS)
            )
        )
    _eigen_method = method


def get_eigen_method():
    return _eigen_method


def as_cmatrix(m, name="matrix"):
    """Returns 'm' as a complex128 square array, checking shape, size and finiteness."""
    m = numpy.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError("{} must be square, got shape {}".format(name, m.shape))
    if m.shape[0] > MAX_DIM:
        raise SizeError(
            "{} has dim {}, above the maximum of {}".format(name, m.shape[0], MAX_DIM)
        )
    if not numpy.all(numpy.isfinite(m)):
        raise ContractError("{} has non-finite entries".format(name))
    return m


def local_dim(m):
    """Returns d for an operator on C^d (x) C^d."""
    n = m.shape[0]
    d = math.isqrt(n)
    if d * d != n:
        raise ShapeError("dim {} is not a perfect square".format(n))
    return d


def _check_bipartite(m, d):
    if m.shape[0] != d * d:
        raise ShapeError(
            "matrix of dim {} is not an operator on C^{} (x) C^{}".format(
                m.shape[0], d, d
            )
        )


def kron(a, b, max_dim=MAX_DIM):
    """(a (x) b)[(i*db + k), (j*db + l)] = a[i,j] * b[k,l]."""
    a = as_cmatrix(a, "left factor")
    b = as_cmatrix(b, "right factor")
    dim = a.shape[0] * b.shape[0]
    if dim > max_dim:
        raise SizeError(
            "kron of dims {} and {} gives {}, above the maximum of {}".format(
                a.shape[0], b.shape[0], dim, max_dim
            )
        )
    return numpy.kron(a, b)


def partial_transpose(m, d):
    """
    Transposes the second tensor factor in the canonical basis:
    out[(i*d + l), (j*d + k)] = m[(i*d + k), (j*d + l)].
    """
    m = as_cmatrix(m)
    _check_bipartite(m, d)
    # axes are [i, k, j, l]; swapping k and l transposes the second factor
    return m.reshape(d, d, d, d).transpose(0, 3, 2, 1).reshape(d * d, d * d).copy()


def partial_trace(m, d, keep=0):
    """Traces out one factor of an operator on C^d (x) C^d, keeping factor 'keep' (0 or 1)."""
    m = as_cmatrix(m)
    _check_bipartite(m, d)
    t = m.reshape(d, d, d, d)
    if keep == 0:
        return numpy.einsum("ikjk->ij", t)
    if keep == 1:
        return numpy.einsum("kikj->ij", t)
    raise DomainError("keep must be 0 or 1, got {}".format(keep))


def w_elem(m, d, i, j, k, l):
    """
    Returns W_{ij;kl}, the coefficient of |i><j| (x) |l><k| in m. Note the
    second-factor ket carries l and the bra carries k.
    """
    return m[(i % d) * d + (l % d), (j % d) * d + (k % d)]


def hermiticity_residual(m):
    """Returns max |m - m^H| over all entries."""
    m = numpy.asarray(m)
    if m.size == 0:
        return 0.0
    return float(numpy.max(numpy.abs(m - m.conj().T)))


def check_hermitian(m, tol=HERMITIAN_TOL, name="matrix"):
    m = as_cmatrix(m, name)
    residual = hermiticity_residual(m)
    if residual > tol:
        raise ContractError(
            "{} is not Hermitian: max |m - m^H| = {:.3g} > {:.3g}".format(
                name, residual, tol
            )
        )
    return (m + m.conj().T) / 2


def max_abs_diff(a, b):
    a = numpy.asarray(a)
    b = numpy.asarray(b)
    if a.shape != b.shape:
        raise ShapeError("shapes {} and {} differ".format(a.shape, b.shape))
    return float(numpy.max(numpy.abs(a - b))) if a.size else 0.0


def projector(vec):
    """|v><v| for a column vector v."""
    vec = numpy.asarray(vec, dtype=complex)
    return numpy.outer(vec, vec.conj())


def jacobi_eigh(
    h, threshold=JACOBI_THRESHOLD, max_sweeps=JACOBI_MAX_SWEEPS
):  # pylint: disable=too-many-locals
    """
    Cyclic Jacobi diagonalization of a Hermitian matrix with complex rotations.

    Each (p, q) rotation first removes the phase of h[p, q] with
    diag(1, exp(-i phi)) and then applies the real symmetric Jacobi rotation.
    Sweeps stop once the off-diagonal Frobenius norm drops below
    threshold * max(1, ||h||_F).
    """
    a = numpy.array(h, dtype=complex)
    n = a.shape[0]
    v = numpy.eye(n, dtype=complex)
    scale = max(1.0, numpy.linalg.norm(a))

    def off_norm():
        return math.sqrt(
            max(0.0, numpy.sum(numpy.abs(a) ** 2) - numpy.sum(numpy.abs(numpy.diag(a)) ** 2))
        )

    sweeps = 0
    while off_norm() > threshold * scale:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                "Jacobi eigensolver did not converge in {} sweeps (off-diagonal norm {:.3g})".format(
                    max_sweeps, off_norm()
                )
            )
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                g = numpy.array(
                    [[c, s], [-s * phase.conjugate(), c * phase.conjugate()]]
                )
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ g
                a[p, q] = a[q, p] = 0.0

    LOGGER.debug("Jacobi eigensolver converged in %d sweeps for dim %d", sweeps, n)
    eigenvalues = numpy.real(numpy.diag(a))
    order = numpy.argsort(eigenvalues, kind="stable")
    return EigenResult(eigenvalues[order], v[:, order])


def eig_hermitian(m, tol=HERMITIAN_TOL, method=None):
    """
    Eigendecomposition of a Hermitian matrix with eigenvalues in ascending
    order. 'method' is "lapack" (numpy.linalg.eigh) or "jacobi"; None uses
    the process default.
    """
    h = check_hermitian(m, tol)
    method = method or _eigen_method
    start = time.perf_counter()
    if method == "lapack":
        eigenvalues, eigenvectors = numpy.linalg.eigh(h)
        result = EigenResult(eigenvalues, eigenvectors)
    elif method == "jacobi":
        result = jacobi_eigh(h)
    else:
        raise DomainError("unknown eigensolver '{}'".format(method))
    if h.shape[0] >= 64:
        LOGGER.debug(
            "Diagonalized dim %d with %s in %f seconds",
            h.shape[0],
            method,
            time.perf_counter() - start,
        )
    return result


def eigvals_hermitian(m, tol=HERMITIAN_TOL, method=None):
    method = method or _eigen_method
    if method == "lapack":
        return numpy.linalg.eigvalsh(check_hermitian(m, tol))
    return eig_hermitian(m, tol, method).eigenvalues


def is_psd(m, tol=PSD_TOL, herm_tol=HERMITIAN_TOL, method=None):
    """Returns (min eigenvalue >= -tol, min eigenvalue)."""
    min_eig = float(eigvals_hermitian(m, herm_tol, method)[0])
    return min_eig >= -tol, min_eig


def matrix_to_dict(m):
    """Matrix JSON: {"dim": n, "re": [...], "im": [...]}, row-major."""
    m = numpy.asarray(m, dtype=complex)
    return {
        "dim": int(m.shape[0]),
        "re": m.real.ravel().tolist(),
        "im": m.imag.ravel().tolist(),
    }


def matrix_from_dict(data, name="matrix"):
    try:
        dim = int(data["dim"])
        re = numpy.asarray(data["re"], dtype=float)
        im = numpy.asarray(data["im"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ShapeError("{} JSON needs 'dim', 're' and 'im'".format(name)) from exc
    if dim < 1 or re.shape != (dim * dim,) or im.shape != (dim * dim,):
        raise ShapeError(
            "{} JSON with dim {} needs {} real and imaginary entries".format(
                name, dim, dim * dim
            )
        )
    return as_cmatrix((re + 1j * im).reshape(dim, dim), name)
