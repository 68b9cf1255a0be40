# coding: utf-8
"""
PPT state families tested against the MUB witnesses: rho_x on C^d (x) C^d,
rho_a and rho_b on C^4 (x) C^4, and the isotropic states. Each family is
assembled unnormalized and divided by its own trace.
"""
import numpy

from mubwit_globals import LOGGER, PSD_TOL, STATE_FAMILIES
from mubwit_helper_classes import (
    BipartiteIndex,
    DensityState,
    ConstructionError,
    DomainError,
)
from mubwit_linalg import kron, partial_transpose, is_psd, max_abs_diff
from mubwit_witness import shift_projector, max_entangled


def _normalized(d, unnormalized, family, params):
    normalization = float(numpy.trace(unnormalized).real)
    LOGGER.debug("%s%s: normalization %.12g", family, params, normalization)
    return DensityState(
        d, unnormalized / normalization, family, params, normalization=normalization
    )


def rho_x_unnormalized(d, s, x):
    """(1 - Pi_0 - Pi_s - Pi_{d-s}) + Pi_s / x + x Pi_{d-s} + d P+."""
    if int(d) != d or d < 3:
        raise DomainError("rho_x needs d >= 3, got {}".format(d))
    if x <= 0:
        raise DomainError("rho_x needs x > 0, got {}".format(x))
    s = int(s)
    if s % d == 0 or (2 * s) % d == 0:
        raise ConstructionError(
            "rho_x needs s != 0 and s != d - s (mod d); got d={} s={}".format(d, s)
        )
    s %= d
    pi_0 = shift_projector(d, 0)
    pi_s = shift_projector(d, s)
    pi_r = shift_projector(d, d - s)
    rest = numpy.eye(d * d) - pi_0 - pi_s - pi_r
    return rest + pi_s / x + x * pi_r + d * max_entangled(d)


def rho_x(d, s, x):
    return _normalized(
        d, rho_x_unnormalized(d, s, x), "rho_x", {"d": d, "s": int(s) % d, "x": x}
    )


# Rank-one pairs of the d = 4 families: (|p>, |q>, e) adds the projector onto
# t^{e/2} |p> + t^{-e/2} |q>, i.e. t^e and t^-e on the diagonal and 1 between.
RHO_A_PAIRS = [
    ((0, 1), (3, 2), -1),
    ((0, 2), (2, 0), 0),
    ((0, 3), (1, 2), 1),
    ((1, 0), (2, 3), 1),
    ((1, 3), (3, 1), 0),
    ((2, 1), (3, 0), 1),
]

RHO_B_PAIRS = [
    ((0, 1), (1, 0), -1),
    ((0, 2), (2, 0), 0),
    ((0, 3), (3, 0), 1),
    ((1, 2), (2, 1), -1),
    ((1, 3), (3, 1), 0),
    ((2, 3), (3, 2), -1),
]


def _d4_unnormalized(t, pairs, name):
    if t <= 0:
        raise DomainError("{} needs a positive parameter, got {}".format(name, t))
    d = 4
    index = BipartiteIndex(d)
    out = d * max_entangled(d)
    for p, q, e in pairs:
        vec = t ** (e / 2) * index.ket(*p) + t ** (-e / 2) * index.ket(*q)
        out = out + numpy.outer(vec, vec.conj())
    return out


def rho_a_unnormalized(a):
    return _d4_unnormalized(a, RHO_A_PAIRS, "rho_a")


def rho_b_unnormalized(b):
    return _d4_unnormalized(b, RHO_B_PAIRS, "rho_b")


def rho_a(a):
    return _normalized(4, rho_a_unnormalized(a), "rho_a", {"a": a})


def rho_b(b):
    return _normalized(4, rho_b_unnormalized(b), "rho_b", {"b": b})


def isotropic(d, p):
    """(1 - p)/d^2 * 1 + p P+, physical for -1/(d^2 - 1) <= p <= 1."""
    if int(d) != d or d < 2:
        raise DomainError("d must be an integer >= 2, got {}".format(d))
    low = -1.0 / (d * d - 1)
    if not low <= p <= 1:
        raise DomainError(
            "isotropic states need {:.6g} <= p <= 1, got {}".format(low, p)
        )
    matrix = (1 - p) / (d * d) * numpy.eye(d * d) + p * max_entangled(d)
    return DensityState(d, matrix, "isotropic", {"d": d, "p": p}, normalization=1.0)


def isotropic_threshold(d):
    """Isotropic states are entangled exactly for p > 1/(d + 1)."""
    return 1.0 / (d + 1)


def product_state(a, b):
    """|ab><ab| for local vectors a and b (normalized here)."""
    a = numpy.asarray(a, dtype=complex)
    b = numpy.asarray(b, dtype=complex)
    if a.shape != b.shape or a.ndim != 1:
        raise DomainError("product states need two vectors of the same length")
    a = a / numpy.linalg.norm(a)
    b = b / numpy.linalg.norm(b)
    matrix = kron(numpy.outer(a, a.conj()), numpy.outer(b, b.conj()))
    return DensityState(a.shape[0], matrix, "product", {})


def random_unit_vectors(rng, count, d):
    """'count' Haar-random unit vectors of C^d as rows, from complex Gaussians."""
    vecs = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return vecs / numpy.linalg.norm(vecs, axis=1, keepdims=True)


def is_ppt(state, tol=PSD_TOL):
    """Returns (rho^G >= -tol, min eigenvalue of rho^G)."""
    return is_psd(partial_transpose(state.matrix, state.d), tol)


def is_symmetric_under_transpose(state, tol=1e-12):
    """True when rho^G equals rho entrywise."""
    return max_abs_diff(partial_transpose(state.matrix, state.d), state.matrix) <= tol


def make_state(family, params):
    """Builds a state from a family name and a parameter dict (as parsed by the CLI)."""
    try:
        if family == "rho_x":
            return rho_x(int(params["d"]), int(params["s"]), float(params["x"]))
        if family == "rho_a":
            return rho_a(float(params["a"]))
        if family == "rho_b":
            return rho_b(float(params["b"]))
        if family == "isotropic":
            return isotropic(int(params["d"]), float(params["p"]))
    except KeyError as exc:
        raise DomainError(
            "state family '{}' needs parameter {}".format(family, exc)
        ) from exc
    raise DomainError(
        "unknown state family '{}'; available: {}".format(
            family, ", ".join(STATE_FAMILIES)
        )
    )
