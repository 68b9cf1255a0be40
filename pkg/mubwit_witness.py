# coding: utf-8
"""
Witness operators built from mutually unbiased bases.

    B(M_m, s)   = Pi_s + sum_{a >= 1} sum_i |i_a><i_a| (x) |i_a><i_a|
    W(M_m, s)   = (d + m - 1)/d * 1 - B(M_m, s)

The canonical basis B0 carries the shift s through Pi_s. W^G is the partial
transpose on the second factor; B^G is built directly by conjugating the
second-factor vectors and must agree with partial_transpose(B).
"""
import time

import numpy

from mubwit_globals import LOGGER, HERMITIAN_TOL, UNIVERSAL_TOL
from mubwit_helper_classes import (
    BellBasis,
    BipartiteIndex,
    WitnessSpec,
    ContractError,
    DomainError,
    WitnessSpecError,
)
from mubwit_linalg import kron, max_abs_diff, w_elem
from mubwit_mubs import omega_power, complete_set


def _check_dim(d):
    if int(d) != d or d < 2:
        raise DomainError("d must be an integer >= 2, got {}".format(d))


# Fixed operators -------------------------------------------------------------------------------------------------------
def flip(d):
    """The swap F|i>|l> = |l>|i>."""
    _check_dim(d)
    index = BipartiteIndex(d)
    out = numpy.zeros((d * d, d * d), dtype=complex)
    for n in range(d * d):
        i, l = index.split(n)
        out[index.join(l, i), n] = 1.0
    return out


def sym_projector(d):
    return (numpy.eye(d * d) + flip(d)) / 2


def asym_projector(d):
    return (numpy.eye(d * d) - flip(d)) / 2


def max_entangled(d):
    """P+ = |psi+><psi+| with |psi+> = sum_i |ii> / sqrt(d)."""
    _check_dim(d)
    vec = numpy.eye(d).reshape(d * d) / numpy.sqrt(d)
    return numpy.outer(vec, vec).astype(complex)


def shift_projector(d, s):
    """Pi_s = sum_i |i><i| (x) |i+s><i+s|."""
    _check_dim(d)
    if not 0 <= s < d:
        raise DomainError("shift must satisfy 0 <= s < {}, got {}".format(d, s))
    index = BipartiteIndex(d)
    diag = numpy.zeros(d * d)
    for i in range(d):
        diag[index.join(i, i + s)] = 1.0
    return numpy.diag(diag).astype(complex)


def reduction_map(x):
    """R(X) = 1 tr X - X."""
    x = numpy.asarray(x, dtype=complex)
    return numpy.trace(x) * numpy.eye(x.shape[0]) - x


def choi_matrix(channel, d):
    """sum_ij |i><j| (x) channel(|i><j|)."""
    _check_dim(d)
    out = numpy.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            unit = numpy.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            out += kron(unit, channel(unit))
    return out


def witness_bound(d, m):
    """(d + m - 1) / d, the largest value of <B(M_m, s)> on product states."""
    return (d + m - 1) / d


# Weyl operators and Bell basis -----------------------------------------------------------------------------------------
def weyl_op(d, k, l):
    """U_kl |n> = w^{k(n - l)} |n - l>."""
    _check_dim(d)
    out = numpy.zeros((d, d), dtype=complex)
    for n in range(d):
        out[(n - l) % d, n] = omega_power(d, k * (n - l))
    return out


def bell_vector(d, k, l):
    """
    |psi_kl> = (1 (x) U_{k,-l}) |psi+> = sum_n w^{k(n + l)} |n, n + l> / sqrt(d),
    labelled so that sum_k P_kl is the shift projector Pi_l.
    """
    index = BipartiteIndex(d)
    vec = numpy.zeros(d * d, dtype=complex)
    for n in range(d):
        vec[index.join(n, n + l)] = omega_power(d, k * (n + l))
    return vec / numpy.sqrt(d)


def bell_basis(d):
    _check_dim(d)
    vectors = numpy.array(
        [[bell_vector(d, k, l) for l in range(d)] for k in range(d)]
    )
    return BellBasis(d, vectors)


def bell_witness(d, s):
    """W_Bell(s) = 1 + sum_k (P_k0 - P_ks) - d P_00."""
    _check_dim(d)
    if not 0 <= s < d:
        raise DomainError("shift must satisfy 0 <= s < {}, got {}".format(d, s))
    bell = bell_basis(d)
    return (
        numpy.eye(d * d)
        + bell.shift_sum(0)
        - bell.shift_sum(s)
        - d * bell.projector(0, 0)
    )


def reduction_witness(d):
    """1 - d P+, the Choi matrix of the reduction map."""
    return numpy.eye(d * d) - d * max_entangled(d)


# MUB witnesses ---------------------------------------------------------------------------------------------------------
def _mub_sum(d, bases, conjugate):
    """sum over bases and vectors of |v><v| (x) |v><v|, or |v*><v*| on the right."""
    out = numpy.zeros((d * d, d * d), dtype=complex)
    for basis in bases:
        vecs = basis.vectors
        right = vecs.conj() if conjugate else vecs
        # column i is |v_i> (x) |v_i> (or |v_i*>)
        doubled = numpy.einsum("ai,bi->abi", vecs, right).reshape(d * d, d)
        out += doubled @ doubled.conj().T
    return out


def two_design_sum(mub_set):
    """sum over every basis (canonical included) of |i><i| (x) |i><i|."""
    return _mub_sum(mub_set.d, mub_set.bases, conjugate=False)


def _selected(mub_set, selection, s):
    if selection is None or selection == "all":
        spec = WitnessSpec.covering(mub_set, s)
    else:
        spec = WitnessSpec(mub_set.d, selection, s)
    return spec, spec.resolve(mub_set)


def build_B(mub_set, selection=None, s=0):
    """B(M_m, s) for the bases of 'mub_set' named by 'selection' (default: all)."""
    spec, chosen = _selected(mub_set, selection, s)
    return shift_projector(spec.d, spec.s) + _mub_sum(spec.d, chosen.bases[1:], conjugate=False)


def build_B_gamma(mub_set, selection=None, s=0):
    """B^G(M_m, s), assembled from |i_a><i_a| (x) |i_a*><i_a*|."""
    spec, chosen = _selected(mub_set, selection, s)
    # Pi_s is diagonal in the canonical basis and therefore fixed by G
    return shift_projector(spec.d, spec.s) + _mub_sum(spec.d, chosen.bases[1:], conjugate=True)


def build_W(spec, mub_set):
    """W(M_m, s) = (d + m - 1)/d * 1 - B, partially transposed when spec.gamma."""
    start = time.perf_counter()
    chosen = spec.resolve(mub_set)
    d, m = spec.d, chosen.m
    builder = build_B_gamma if spec.gamma else build_B
    b = builder(chosen, None, spec.s)
    w = witness_bound(d, m) * numpy.eye(d * d) - b
    LOGGER.debug(
        "Built %s from %s in %f seconds", spec, mub_set, time.perf_counter() - start
    )
    return w


def shift_identity_check(d, s, tol=HERMITIAN_TOL):
    """W(M_{d+1}, s) + Pi_s == W(M_{d+1}, 0) + Pi_0 for a complete set, entrywise."""
    mub_set = complete_set(d)
    shifted = build_W(WitnessSpec.covering(mub_set, s), mub_set) + shift_projector(
        d, s % d
    )
    unshifted = build_W(WitnessSpec.covering(mub_set, 0), mub_set) + shift_projector(
        d, 0
    )
    residual = max_abs_diff(shifted, unshifted)
    LOGGER.debug("Shift identity d=%d s=%d residual %.3g", d, s, residual)
    return residual <= tol


# Universal matrix elements ---------------------------------------------------------------------------------------------
def universal_elements(d, s, m):
    """
    The elements of W(M_m, s) shared by every set of m MUBs containing the
    canonical basis, as {(i, j, k, l): value} in w_elem indexing:
    W_{ii;jj} is 0 for j = i + s and 1 otherwise, W_{ij;ij} = -(m - 1)/d.
    """
    elements = {}
    a = -(m - 1) / d
    for i in range(d):
        for j in range(d):
            elements[(i, i, j, j)] = 0.0 if j == (i + s) % d else 1.0
            if i != j:
                elements[(i, j, i, j)] = a
    return elements


def universal_deviation(w, d, s, m):
    """Largest |w_elem(w, ...) - expected| over the universal elements of W(M_m, s)."""
    w = numpy.asarray(w)
    return max(
        abs(w_elem(w, d, *key) - value)
        for key, value in universal_elements(d, s % d, m).items()
    )


def check_universal(w, d, s, m, tol=UNIVERSAL_TOL):
    deviation = universal_deviation(w, d, s, m)
    if deviation > tol:
        raise ContractError(
            "operator is not a W(M_{}, {}) witness for d={}: universal elements deviate by {:.3g}".format(
                m, s, d, deviation
            )
        )
    return deviation


def witness_label(spec, mub_set):
    """Short label such as W(0,1,2) used in reports."""
    try:
        chosen = spec.resolve(mub_set)
    except WitnessSpecError:
        return spec.label()
    names = [str(mub_set.index_of(b.label)) for b in chosen.bases]
    text = "W(%s;s=%d)" % (",".join(names), spec.s)
    return text + "^G" if spec.gamma else text

