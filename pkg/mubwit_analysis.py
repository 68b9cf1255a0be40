# coding: utf-8
"""
Verification pipeline: witness evaluation, see-saw estimates of the
product-state maximum, the principal-submatrix obstruction to
decomposability, explicit decompositions W = A + B^G and parameter scans.
"""
import collections
import itertools
import time

import numpy

from mubwit_globals import (
    LOGGER,
    VERDICT_TOL,
    IMAG_TOL,
    HERMITIAN_TOL,
    OBSTRUCTION_TOL,
    UNIVERSAL_TOL,
    SEESAW_RESTARTS,
    SEESAW_ITERS,
    SEESAW_CHANGE,
    PRODUCT_PROBES,
    PSD_TOL,
)
from mubwit_helper_classes import (
    BipartiteIndex,
    DetectionReport,
    Decomposition,
    ObstructionReport,
    SeesawResult,
    WitnessSpec,
    ShapeError,
    ContractError,
    DomainError,
    UnsupportedError,
    MubwitError,
)
from mubwit_linalg import (
    as_cmatrix,
    check_hermitian,
    eig_hermitian,
    eigvals_hermitian,
    is_psd,
    local_dim,
    partial_transpose,
    w_elem,
    projector,
)
from mubwit_mubs import fourier_pair
from mubwit_states import is_ppt, make_state, random_unit_vectors
from mubwit_witness import bell_witness, build_W, check_universal, shift_projector


# Evaluation ------------------------------------------------------------------------------------------------------------
def expectation(witness, matrix, imag_tol=IMAG_TOL):
    """Real part of tr[W rho]; a non-negligible imaginary part is a contract error."""
    witness = as_cmatrix(witness, "witness")
    matrix = as_cmatrix(matrix, "state")
    if witness.shape != matrix.shape:
        raise ShapeError(
            "witness has dim {} but the state has dim {}".format(
                witness.shape[0], matrix.shape[0]
            )
        )
    value = numpy.einsum("ij,ji->", witness, matrix)
    if abs(value.imag) >= imag_tol:
        raise ContractError(
            "tr[W rho] has imaginary part {:.3g}; is W Hermitian?".format(value.imag)
        )
    return float(value.real)


def evaluate(witness, state, tol=VERDICT_TOL, label="W", s=None, m=None):
    """Evaluates tr[W rho] and classifies it together with the PPT status of rho."""
    value = expectation(witness, state.matrix)
    ppt, min_eig_pt = is_ppt(state)
    report = DetectionReport(label, state, value, ppt, min_eig_pt, tol, s=s, m=m)
    LOGGER.debug("%s", report)
    return report


def rho_x_expectation(d, m, x):
    """
    tr[W^G(M_m, s) rho_x] for any m MUBs: the two operators overlap only on
    universal elements, giving (d(d - 2) + d x - (m - 1)(d - 1)) / N.
    """
    normalization = d * d - 2 * d + d / x + d * x
    return (d * (d - 2) + d * x - (m - 1) * (d - 1)) / normalization


def rho_x_detection_threshold(d, m):
    """rho_x is detected by W^G(M_m, s) exactly for x below this value."""
    return ((m - 1) * (d - 1) - d * (d - 2)) / d


# Product states --------------------------------------------------------------------------------------------------------
def _product_value(b4, a, b):
    return float(numpy.einsum("ikjl,i,k,j,l->", b4, a.conj(), b.conj(), a, b).real)


def _top_eigvector(m):
    result = eig_hermitian((m + m.conj().T) / 2)
    return result.eigenvalues[-1], result.eigenvectors[:, -1]


def seesaw_bound(
    B,
    d,
    restarts=SEESAW_RESTARTS,
    iters=SEESAW_ITERS,
    seed=0,
    change=SEESAW_CHANGE,
):  # pylint: disable=too-many-arguments,too-many-locals
    """
    Maximizes <ab|B|ab> over product vectors by alternating eigenvector
    steps. Restart r draws its starting vectors from default_rng([seed, r]),
    so the result depends only on (seed, restarts, iters).
    """
    if restarts < 1 or iters < 0:
        raise DomainError(
            "see-saw needs restarts >= 1 and iters >= 0, got {} and {}".format(
                restarts, iters
            )
        )
    B = check_hermitian(B, HERMITIAN_TOL, "B")
    if B.shape[0] != d * d:
        raise ShapeError("B has dim {}, expected {}".format(B.shape[0], d * d))
    # axes [i, k, j, l] for rows |ik> and columns |jl>
    b4 = B.reshape(d, d, d, d)
    start = time.perf_counter()
    best = None
    for restart in range(restarts):
        rng = numpy.random.default_rng([seed, restart])
        a, b = random_unit_vectors(rng, 2, d)
        value = _product_value(b4, a, b)
        iteration = 0
        for iteration in range(1, iters + 1):
            _, a = _top_eigvector(numpy.einsum("ikjl,k,l->ij", b4, b.conj(), b))
            new_value, b = _top_eigvector(numpy.einsum("ikjl,i,j->kl", b4, a.conj(), a))
            converged = abs(new_value - value) < change
            value = new_value
            if converged:
                break
        LOGGER.debug(
            "see-saw restart %d: %.12g after %d iterations", restart, value, iteration
        )
        if best is None or value > best.value:
            best = SeesawResult(value, a, b, restart, iteration)
    LOGGER.info(
        "See-saw over %d restarts found %.12g in %f seconds",
        restarts,
        best.value,
        time.perf_counter() - start,
    )
    return best


def product_probe(witness, d, samples=PRODUCT_PROBES, seed=0):
    """Returns the smallest <ab|W|ab> over 'samples' Haar-random product vectors."""
    witness = as_cmatrix(witness, "witness")
    if witness.shape[0] != d * d:
        raise ShapeError(
            "witness has dim {}, expected {}".format(witness.shape[0], d * d)
        )
    rng = numpy.random.default_rng([seed, samples])
    a = random_unit_vectors(rng, samples, d)
    b = random_unit_vectors(rng, samples, d)
    w4 = witness.reshape(d, d, d, d)
    half = numpy.einsum("ikjl,nj,nl->nik", w4, a, b)
    values = numpy.einsum("ni,nk,nik->n", a.conj(), b.conj(), half).real
    return float(values.min())


# Obstruction -----------------------------------------------------------------------------------------------------------
def obstruction_test(
    W, d, s, m, transposed=True, tol=OBSTRUCTION_TOL, universal_tol=UNIVERSAL_TOL
):  # pylint: disable=too-many-arguments,too-many-locals
    """
    Looks for the principal-submatrix obstruction to W = A + B^G with A, B >= 0.

    'W' is the witness under test. With transposed=True (the default) it is
    W^G(M_m, s) and the blocks are read from its partial transpose, where the
    set-independent elements of W(M_m, s) live; pass transposed=False for the
    untransposed operator. The universal elements are checked first.
    """
    W = as_cmatrix(W, "witness")
    if W.shape[0] != d * d:
        raise ShapeError("witness has dim {}, expected {}".format(W.shape[0], d * d))
    s %= d
    if s == 0 or 2 * s == d:
        raise UnsupportedError(
            "the obstruction needs s != 0 and 2s != d; got d={} s={}".format(d, s)
        )
    x = partial_transpose(W, d) if transposed else W
    check_universal(x, d, s, m, universal_tol)

    r = d - s
    a = -(m - 1) / d

    def elem(i, j, k, l):
        return w_elem(x, d, i, j, k, l)

    def block(p, q):
        return numpy.array(
            [
                [elem(p, p, q, q), elem(p, q, p, q)],
                [elem(q, p, q, p), elem(q, q, p, p)],
            ]
        )

    blocks = (block(0, s), block(0, r), block(s, r))
    points = (0, s, r)
    # off-diagonal W_{pq;pq} = a, diagonal W_{pp;pp} = 1
    b3 = numpy.array([[elem(p, q, p, q) for q in points] for p in points])

    block_min_eigs = []
    for blk in blocks:
        eigs = eigvals_hermitian(blk)
        block_min_eigs.append((float(eigs[0]), float(eigs[-1])))
    b3_min_eig = float(eigvals_hermitian(b3)[0])

    report = ObstructionReport(
        d, s, m, a, blocks, b3, tuple(block_min_eigs), b3_min_eig, tol
    )
    LOGGER.info("Obstruction test: %s", report)
    return report


# Decompositions --------------------------------------------------------------------------------------------------------
def verify_decomposition(target, A, B, label="", b_terms=None, tol=PSD_TOL):
    """Measures max |A + B^G - target| and the smallest eigenvalues of A and B."""
    target = as_cmatrix(target, "target")
    A = as_cmatrix(A, "A")
    B = as_cmatrix(B, "B")
    if not target.shape == A.shape == B.shape:
        raise ShapeError(
            "target, A and B have dims {}, {} and {}".format(
                target.shape[0], A.shape[0], B.shape[0]
            )
        )
    d = local_dim(target)
    residual = float(numpy.max(numpy.abs(A + partial_transpose(B, d) - target)))
    _, min_eig_a = is_psd(A, tol)
    _, min_eig_b = is_psd(B, tol)
    decomposition = Decomposition(
        A, B, target, residual, min_eig_a, min_eig_b, label, b_terms
    )
    LOGGER.debug("%s", decomposition)
    return decomposition


def half_shift_decomposition(d, s=None):
    """
    W_Bell(d/2) = A + B^G for even d with
        A = sum_{n < d/2} P(|nn> - |n+s,n+s>)
        B = sum_{i < j, j != i + s} P(|ij> - |ji>).
    """
    if d < 2 or d % 2:
        raise UnsupportedError("the half-shift decomposition needs even d, got {}".format(d))
    half = d // 2
    if s is None:
        s = half
    if s != half:
        raise UnsupportedError(
            "the half-shift decomposition needs s = d/2 = {}, got {}".format(half, s)
        )
    index = BipartiteIndex(d)
    A = numpy.zeros((d * d, d * d), dtype=complex)
    for n in range(half):
        A += projector(index.ket(n, n) - index.ket(n + s, n + s))
    B = numpy.zeros((d * d, d * d), dtype=complex)
    terms = 0
    for i in range(d):
        for j in range(i + 1, d):
            if j != i + s:
                B += projector(index.ket(i, j) - index.ket(j, i))
                terms += 1
    return verify_decomposition(
        bell_witness(d, s), A, B, "W_Bell(%d), d=%d" % (s, d), terms
    )


def fourier_pair_vectors(d):
    """
    The d(d-1)/2 vectors |r, r+t> - |r+t-1, r+1> (t = 2 .. d-r, indices mod d)
    whose projectors make up B(1) of the Fourier-pair decomposition.
    """
    index = BipartiteIndex(d)
    vectors = []
    for r in range(d - 1):
        for t in range(2, d - r + 1):
            vectors.append(index.ket(r, r + t) - index.ket(r + t - 1, r + 1))
    return vectors


def fourier_pair_decomposition(d, s=1):
    """
    d W^G({B0, F}, 1) = A(1) + B(1)^G with
        A(1) = (d - 1)(1 - Pi_1) - sum_{n != 1} sum_{i != j} |i><j| (x) |i+n><j+n|
        B(1) = sum of the projectors onto fourier_pair_vectors(d).
    """
    if s != 1:
        raise UnsupportedError(
            "the Fourier-pair decomposition is constructed for s=1 only, got s={}".format(s)
        )
    if d < 3:
        raise DomainError("the Fourier-pair decomposition needs d >= 3, got {}".format(d))
    index = BipartiteIndex(d)
    A = (d - 1) * (numpy.eye(d * d) - shift_projector(d, s))
    for n in range(d):
        if n == s:
            continue
        for i in range(d):
            for j in range(d):
                if i != j:
                    A[index.join(i, i + n), index.join(j, j + n)] -= 1.0
    vectors = fourier_pair_vectors(d)
    B = sum(projector(vec) for vec in vectors)
    pair = fourier_pair(d)
    target = d * build_W(WitnessSpec(d, [0, 1], s, gamma=True), pair)
    return verify_decomposition(
        target, A, B, "d*W^G(B0,F;s=1), d=%d" % d, len(vectors)
    )


# Scans -----------------------------------------------------------------------------------------------------------------
ScanWitness = collections.namedtuple("ScanWitness", ["label", "matrix", "s", "m"])


def expand_grid(grid):
    """Lexicographic product of a {name: [values]} grid, names in sorted order."""
    names = sorted(grid)
    for values in itertools.product(*(grid[name] for name in names)):
        yield dict(zip(names, values))


def scan(witnesses, family, grid, fixed=None, tol=VERDICT_TOL):
    """
    Evaluates every witness against 'family' at every grid point. Rows come
    witness by witness, grid points in lexicographic order.
    """
    if isinstance(witnesses, ScanWitness):
        witnesses = [witnesses]
    fixed = dict(fixed or {})
    points = list(expand_grid(grid))
    if not points:
        raise DomainError("the scan grid is empty")
    start = time.perf_counter()
    reports = []
    for witness in witnesses:
        for point in points:
            params = dict(fixed, **point)
            try:
                state = make_state(family, params)
                reports.append(
                    evaluate(
                        witness.matrix,
                        state,
                        tol,
                        label=witness.label,
                        s=witness.s,
                        m=witness.m,
                    )
                )
            except MubwitError as exc:
                raise type(exc)(
                    "{} at {} {}: {}".format(witness.label, family, point, exc)
                ) from exc
    LOGGER.info(
        "Scanned %d points in %f seconds", len(reports), time.perf_counter() - start
    )
    return reports
