# coding: utf-8
import collections

import numpy

from mubwit_globals import (
    ORTHONORMAL_TOL,
    HERMITIAN_TOL,
    PSD_TOL,
    STATE_TRACE_TOL,
    VERDICT_BOUND,
    VERDICT_ENTANGLED,
    VERDICT_NONE,
    CERTIFY_TOL,
    CSV_DIGITS,
)


# Exceptions ------------------------------------------------------------------------------------------------------------
class MubwitError(Exception):
    """Base class of every error raised by mubwit."""


class ShapeError(MubwitError, ValueError):
    """A matrix or vector does not have the dimensions an operation needs."""


class SizeError(MubwitError, ValueError):
    """A construction would exceed the configured maximum dimension."""


class ContractError(MubwitError, ValueError):
    """An input violates a numerical precondition (Hermiticity, universal elements, ...)."""


class DomainError(MubwitError, ValueError):
    """A parameter lies outside its admissible range."""


class WitnessSpecError(MubwitError, ValueError):
    """A basis selection cannot define a witness."""


class UnsupportedError(MubwitError, ValueError):
    """The requested construction is not available for these parameters."""


class ConstructionError(MubwitError, ValueError):
    """A constructed object failed its own validation."""


class ConvergenceError(MubwitError, ArithmeticError):
    """An iterative solver did not converge."""


EigenResult = collections.namedtuple("EigenResult", ["eigenvalues", "eigenvectors"])
MubReport = collections.namedtuple("MubReport", ["max_deviation", "passed", "worst_pair"])
SeesawResult = collections.namedtuple(
    "SeesawResult", ["value", "a", "b", "restart", "iterations"]
)


class BipartiteIndex:
    """
    Composite indexing of C^d (x) C^d: |i>|l> sits at i*d + l, first factor
    major, which is also the layout numpy.kron produces.
    """

    def __init__(self, d):
        if d < 1:
            raise DomainError("local dimension must be positive, got {}".format(d))
        self.d = d

    def join(self, i, l):
        return (i % self.d) * self.d + (l % self.d)

    def split(self, n):
        if not 0 <= n < self.d * self.d:
            raise DomainError(
                "composite index {} out of range for d={}".format(n, self.d)
            )
        return divmod(n, self.d)

    def ket(self, i, l):
        """Returns |i>|l> as a column vector."""
        vec = numpy.zeros(self.d * self.d, dtype=complex)
        vec[self.join(i, l)] = 1.0
        return vec


class Basis:
    """An orthonormal basis of C^d, stored as the columns of a d x d matrix."""

    def __init__(self, vectors, label="", tol=ORTHONORMAL_TOL):
        vectors = numpy.array(vectors, dtype=complex)
        if vectors.ndim != 2 or vectors.shape[0] != vectors.shape[1]:
            raise ShapeError(
                "basis vectors must form a square matrix, got shape {}".format(
                    vectors.shape
                )
            )
        if not numpy.all(numpy.isfinite(vectors)):
            raise ConstructionError("basis '{}' has non-finite entries".format(label))

        gram = vectors.conj().T @ vectors
        deviation = numpy.max(numpy.abs(gram - numpy.eye(vectors.shape[0])))
        if deviation > tol:
            raise ConstructionError(
                "basis '{}' is not orthonormal: max |<v_i|v_j> - delta_ij| = {:.3g}".format(
                    label, deviation
                )
            )

        vectors.setflags(write=False)
        self.vectors = vectors
        self.d = vectors.shape[0]
        self.label = label

    def is_canonical(self):
        return numpy.array_equal(self.vectors, numpy.eye(self.d))

    def is_real(self):
        return not numpy.any(self.vectors.imag)

    def conj(self, label=None):
        return Basis(self.vectors.conj(), label or self.label + "*")

    def to_dict(self):
        return {
            "label": self.label,
            "vectors": [
                {
                    "dim": self.d,
                    "re": self.vectors[:, i].real.tolist(),
                    "im": self.vectors[:, i].imag.tolist(),
                }
                for i in range(self.d)
            ],
        }

    def __str__(self):
        return "Basis '%s' d=%d" % (self.label, self.d)


class MubSet:
    """
    An ordered collection of bases of C^d. Index 0 holds the canonical basis
    when the set has one. Unbiasedness is checked by mubs.verify_mub, not here,
    so that invalid sets can still be represented and reported on.
    """

    def __init__(self, bases, name=""):
        bases = list(bases)
        if not bases:
            raise ShapeError("a basis set needs at least one basis")
        d = bases[0].d
        for basis in bases:
            if basis.d != d:
                raise ShapeError(
                    "basis '{}' has d={}, expected {}".format(basis.label, basis.d, d)
                )
        self.bases = tuple(bases)
        self.d = d
        self.name = name

    @property
    def m(self):
        return len(self.bases)

    @property
    def labels(self):
        return [basis.label for basis in self.bases]

    def index_of(self, key):
        """Resolves a basis number or label to its position in the set."""
        if isinstance(key, str) and key.lstrip("-").isdigit():
            key = int(key)
        if isinstance(key, (int, numpy.integer)):
            if not 0 <= key < self.m:
                raise WitnessSpecError(
                    "basis number {} out of range for a set of {}".format(key, self.m)
                )
            return int(key)
        for i, basis in enumerate(self.bases):
            if basis.label == key:
                return i
        raise WitnessSpecError(
            "unknown basis '{}'; available: {}".format(key, ", ".join(self.labels))
        )

    def basis(self, key):
        return self.bases[self.index_of(key)]

    def select(self, selection=None):
        """Returns the sub-set named by 'selection' (None or "all" keeps every basis)."""
        if selection is None or selection == "all":
            return self
        return MubSet([self.basis(key) for key in selection], self.name)

    def canonical_positions(self):
        return [i for i, basis in enumerate(self.bases) if basis.is_canonical()]

    def is_real(self):
        return all(basis.is_real() for basis in self.bases)

    def to_dict(self):
        return {"d": self.d, "bases": [basis.to_dict() for basis in self.bases]}

    def __len__(self):
        return self.m

    def __iter__(self):
        return iter(self.bases)

    def __str__(self):
        return "MubSet '%s' d=%d m=%d [%s]" % (
            self.name,
            self.d,
            self.m,
            ",".join(self.labels),
        )


class WitnessSpec:
    """Identifies W(M_m, s): dimension, basis selection, shift and transpose flag."""

    def __init__(self, d, basis_labels, s=0, gamma=False):
        if d < 2:
            raise DomainError("d must be at least 2, got {}".format(d))
        self.d = int(d)
        self.basis_labels = tuple(basis_labels)
        self.s = int(s) % self.d
        self.gamma = bool(gamma)

    @staticmethod
    def covering(mub_set, s=0, gamma=False):
        """The spec that selects every basis of 'mub_set'."""
        return WitnessSpec(mub_set.d, range(mub_set.m), s, gamma)

    @property
    def m(self):
        return len(self.basis_labels)

    def resolve(self, mub_set):
        """
        Returns the selected bases with the canonical basis moved to the front.
        The canonical basis carries the shift, so it must be selected exactly once.
        """
        if mub_set.d != self.d:
            raise WitnessSpecError(
                "witness is for d={} but the basis set has d={}".format(
                    self.d, mub_set.d
                )
            )
        selected = mub_set.select(self.basis_labels)
        canonical = selected.canonical_positions()
        if len(canonical) != 1:
            raise WitnessSpecError(
                "the selection must contain the canonical basis exactly once, found {}".format(
                    len(canonical)
                )
            )
        order = canonical + [i for i in range(selected.m) if i != canonical[0]]
        return MubSet([selected.bases[i] for i in order], selected.name)

    def label(self):
        text = "W(%s;s=%d)" % (",".join(str(l) for l in self.basis_labels), self.s)
        return text + "^G" if self.gamma else text

    def to_dict(self):
        return {
            "d": self.d,
            "bases": list(self.basis_labels),
            "s": self.s,
            "gamma": self.gamma,
        }

    @staticmethod
    def from_dict(data):
        try:
            return WitnessSpec(data["d"], data["bases"], data["s"], data["gamma"])
        except KeyError as exc:
            raise WitnessSpecError("witness spec is missing {}".format(exc)) from exc

    def __str__(self):
        return self.label()


class BellBasis:
    """The d^2 generalized Bell projectors P_kl, indexed [k, l]."""

    def __init__(self, d, vectors):
        self.d = d
        # vectors[k, l] is |psi_kl>
        self.vectors = vectors
        self.projectors = numpy.einsum("kla,klb->klab", vectors, vectors.conj())

    def projector(self, k, l):
        return self.projectors[k % self.d, l % self.d]

    def shift_sum(self, l):
        """Returns sum_k P_kl."""
        return self.projectors[:, l % self.d].sum(axis=0)


class DensityState:
    """A normalized bipartite state on C^d (x) C^d with its family and parameters."""

    def __init__(self, d, matrix, family, params=None, normalization=None):
        # imported here: mubwit_linalg depends on this module for its errors
        from mubwit_linalg import as_cmatrix, is_psd

        matrix = as_cmatrix(matrix, "state")
        if matrix.shape[0] != d * d:
            raise ShapeError(
                "state matrix has dim {}, expected {}".format(matrix.shape[0], d * d)
            )
        trace = numpy.trace(matrix)
        if abs(trace - 1) > STATE_TRACE_TOL:
            raise ConstructionError("state trace is {}, expected 1".format(trace))
        psd, min_eig = is_psd(matrix, PSD_TOL, HERMITIAN_TOL)
        if not psd:
            raise ConstructionError(
                "state is not positive semidefinite: min eigenvalue {:.3g}".format(
                    min_eig
                )
            )
        matrix.setflags(write=False)
        self.d = d
        self.matrix = matrix
        self.family = family
        self.params = dict(params or {})
        self.normalization = normalization
        self.min_eig = min_eig

    @property
    def label(self):
        return self.family

    def param_string(self):
        return ";".join("%s=%s" % (k, _fmt(v)) for k, v in sorted(self.params.items()))

    def to_dict(self):
        from mubwit_linalg import matrix_to_dict

        data = matrix_to_dict(self.matrix)
        data["family"] = self.family
        data["params"] = dict(self.params)
        return data

    def __str__(self):
        return "%s(%s)" % (self.family, self.param_string())


def _fmt(value):
    if isinstance(value, float):
        return "%.*g" % (CSV_DIGITS, value)
    return str(value)


class DetectionReport:  # pylint: disable=too-many-instance-attributes
    """The value of tr[W rho] with the PPT status of rho and the resulting verdict."""

    def __init__(
        self, witness, state, value, ppt, min_eig_pt, tol, s=None, m=None
    ):  # pylint: disable=too-many-arguments
        self.witness = witness
        self.state_family = state.family
        self.state_params = dict(state.params)
        self.param = state.param_string()
        self.value = value
        self.ppt = ppt
        self.min_eig_pt = min_eig_pt
        self.s = s
        self.m = m
        self.verdict = DetectionReport.verdict_for(value, ppt, tol)

    @staticmethod
    def verdict_for(value, ppt, tol):
        if value < -tol:
            return VERDICT_BOUND if ppt else VERDICT_ENTANGLED
        return VERDICT_NONE

    @property
    def detected(self):
        return self.verdict != VERDICT_NONE

    def to_dict(self):
        return {
            "witness": self.witness,
            "family": self.state_family,
            "params": self.state_params,
            "s": self.s,
            "m": self.m,
            "value": self.value,
            "ppt": self.ppt,
            "min_eig_pt": self.min_eig_pt,
            "verdict": self.verdict,
        }

    def csv_row(self):
        return [
            self.state_family,
            self.param,
            self.witness,
            "" if self.s is None else str(self.s),
            "" if self.m is None else str(self.m),
            "%.*g" % (CSV_DIGITS, self.value),
            "true" if self.ppt else "false",
            self.verdict,
        ]

    def __str__(self):
        return "%s on %s: value=%.12g ppt=%s -> %s" % (
            self.witness,
            self.state_family + "(" + self.param + ")",
            self.value,
            self.ppt,
            self.verdict,
        )


class Decomposition:  # pylint: disable=too-many-instance-attributes
    """A candidate W = A + B^G with the measured residual and minimum eigenvalues."""

    def __init__(
        self, A, B, target, residual, min_eig_a, min_eig_b, label="", b_terms=None
    ):  # pylint: disable=too-many-arguments
        self.A = A
        self.B = B
        self.target = target
        self.residual = residual
        self.min_eig_a = min_eig_a
        self.min_eig_b = min_eig_b
        self.label = label
        self.b_terms = b_terms

    def is_certified(self, tol=CERTIFY_TOL):
        return (
            self.residual <= tol and self.min_eig_a >= -tol and self.min_eig_b >= -tol
        )

    @property
    def certified(self):
        return self.is_certified()

    def to_dict(self):
        from mubwit_linalg import matrix_to_dict

        return {
            "label": self.label,
            "A": matrix_to_dict(self.A),
            "B": matrix_to_dict(self.B),
            "target": matrix_to_dict(self.target),
            "residual": self.residual,
            "min_eig_a": self.min_eig_a,
            "min_eig_b": self.min_eig_b,
            "certified": self.certified,
        }

    def __str__(self):
        return "%s: residual=%.3g minEig(A)=%.3g minEig(B)=%.3g certified=%s" % (
            self.label or "decomposition",
            self.residual,
            self.min_eig_a,
            self.min_eig_b,
            self.certified,
        )


class ObstructionReport:  # pylint: disable=too-many-instance-attributes
    """
    Principal submatrices of a witness that rule out W = A + B^G with A, B >= 0.

    A1 couples (0,s) with (s,0), A2 couples (0,r) with (r,0) and A3 couples
    (s,r) with (r,s), r = d - s. An indefinite 2x2 block forces the matching
    off-diagonal element onto B, and B3x3 collects those elements.
    """

    def __init__(
        self, d, s, m, a, blocks, b3, block_min_eigs, b3_min_eig, tol
    ):  # pylint: disable=too-many-arguments
        self.d = d
        self.s = s
        self.m = m
        self.a = a
        self.blocks = blocks
        self.b3 = b3
        self.block_min_eigs = block_min_eigs
        self.b3_min_eig = b3_min_eig
        self.blocks_indefinite = tuple(
            bool(low < -tol and high > tol) for low, high in block_min_eigs
        )
        self.obstruction_found = bool(
            self.blocks_indefinite[0]
            and self.blocks_indefinite[1]
            and b3_min_eig < -tol
        )
        self.all_blocks_indefinite = all(self.blocks_indefinite)

    @property
    def verdict(self):
        return "non-decomposable" if self.obstruction_found else "inconclusive"

    @property
    def caveat(self):
        if not self.obstruction_found:
            return (
                "no obstruction found; the criterion is necessary only, "
                "so this says nothing about decomposability"
            )
        if not self.all_blocks_indefinite:
            return (
                "A3 is not indefinite for this shift (3s != 0 mod d); "
                "the (s,r) element of B3x3 is not forced"
            )
        return ""

    def to_dict(self):
        return {
            "d": self.d,
            "s": self.s,
            "m": self.m,
            "a": self.a,
            "blocks": [b.real.tolist() for b in self.blocks],
            "b3": self.b3.real.tolist(),
            "blocks_indefinite": list(self.blocks_indefinite),
            "b3_min_eig": self.b3_min_eig,
            "obstruction_found": self.obstruction_found,
            "verdict": self.verdict,
            "caveat": self.caveat,
        }

    def __str__(self):
        text = "d=%d s=%d m=%d a=%.6g minEig(B3x3)=%.6g -> %s" % (
            self.d,
            self.s,
            self.m,
            self.a,
            self.b3_min_eig,
            self.verdict,
        )
        if self.caveat:
            text += " (" + self.caveat + ")"
        return text
