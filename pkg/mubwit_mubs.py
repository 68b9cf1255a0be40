# coding: utf-8
"""
Mutually unbiased bases: the canonical and Fourier bases, complete
Heisenberg-Weyl sets for odd prime d, the Pauli eigenbases for d = 2 and the
printed d = 3 and d = 4 basis sets. Bases are stored column-wise.
"""
import json

import numpy

from mubwit_globals import LOGGER, MUB_TOL
from mubwit_helper_classes import (
    Basis,
    MubSet,
    MubReport,
    DomainError,
    UnsupportedError,
    ConstructionError,
    ShapeError,
)


def omega_power(d, n):
    """exp(2 pi i n / d) with the exponent reduced mod d first."""
    return numpy.exp(2j * numpy.pi * (numpy.asarray(n) % d) / d)


def is_odd_prime(n):
    if n < 3 or n % 2 == 0:
        return False
    return all(n % f for f in range(3, int(n**0.5) + 1, 2))


def _check_dim(d):
    if int(d) != d or d < 2:
        raise DomainError("d must be an integer >= 2, got {}".format(d))


def canonical_basis(d, label="B0"):
    _check_dim(d)
    return Basis(numpy.eye(d), label)


def fourier_basis(d, label="F"):
    """|k~>_j = w^{kj} / sqrt(d)."""
    _check_dim(d)
    j, k = numpy.meshgrid(numpy.arange(d), numpy.arange(d), indexing="ij")
    return Basis(omega_power(d, j * k) / numpy.sqrt(d), label)


def heisenberg_weyl_basis(d, alpha, label=None):
    """|i_alpha>_j = w^{alpha j^2 + i j} / sqrt(d); alpha = 0 is the Fourier basis."""
    j, i = numpy.meshgrid(numpy.arange(d), numpy.arange(d), indexing="ij")
    return Basis(
        omega_power(d, alpha * j * j + i * j) / numpy.sqrt(d),
        label or "B%d" % (alpha + 1),
    )


def heisenberg_weyl_set(d, tol=MUB_TOL):
    """
    The canonical basis followed by the d Heisenberg-Weyl bases, numbered
    B0 .. Bd, for an odd prime d.
    """
    if not is_odd_prime(d):
        raise DomainError(
            "Heisenberg-Weyl sets need an odd prime d, got {}".format(d)
        )
    bases = [canonical_basis(d)]
    bases += [heisenberg_weyl_basis(d, alpha) for alpha in range(d)]
    return _verified(MubSet(bases, "hw%d" % d), tol)


def d2_complete(tol=MUB_TOL):
    """Eigenbases of Z, X and Y, first amplitude real and positive."""
    r = 1 / numpy.sqrt(2)
    bases = [
        canonical_basis(2),
        Basis([[r, r], [r, -r]], "B1"),
        Basis([[r, r], [1j * r, -1j * r]], "B2"),
    ]
    return _verified(MubSet(bases, "pauli"), tol)


def d3_fixture(tol=MUB_TOL):
    """The four printed d = 3 bases; B3 is the complex conjugate of B2."""
    w = omega_power(3, 1)
    wc = w.conjugate()
    b1 = numpy.array([[1, 1, 1], [1, w, wc], [1, wc, w]]) / numpy.sqrt(3)
    b2 = numpy.array([[1, 1, 1], [1, w, wc], [wc, w, 1]]) / numpy.sqrt(3)
    bases = [
        canonical_basis(3),
        Basis(b1, "B1"),
        Basis(b2, "B2"),
        Basis(b2.conj(), "B3"),
    ]
    return _verified(MubSet(bases, "fixture3"), tol)


# Rows of the printed d = 4 bases, in units of 1/2. Columns are basis vectors.
D4_B1 = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, -1, 1], [1, -1, 1, -1]]
D4_BEXT = [[1, 1, 1, 1], [1j, -1j, 1j, -1j], [-1, -1, 1, 1], [1j, -1j, -1j, 1j]]
D4_BUNEXT = [[1, 1, 1, 1], [1, 1, -1, -1], [-1, 1, 1, -1], [1, -1, 1, -1]]


def d4_fixtures(tol=MUB_TOL):
    """Returns the extendible triple {B0, B1, Bext} and the unextendible {B0, B1, Bunext}."""
    b0 = canonical_basis(4)
    b1 = Basis(numpy.array(D4_B1) / 2, "B1")
    ext = MubSet([b0, b1, Basis(numpy.array(D4_BEXT) / 2, "Bext")], "ext")
    unext = MubSet([b0, b1, Basis(numpy.array(D4_BUNEXT) / 2, "Bunext")], "unext")
    return _verified(ext, tol), _verified(unext, tol)


def fourier_pair(d):
    """{canonical, Fourier} for any d >= 2."""
    return MubSet([canonical_basis(d), fourier_basis(d)], "fourier%d" % d)


def complete_set(d):
    """A complete set of d + 1 MUBs where one is constructed here."""
    if d == 2:
        return d2_complete()
    if is_odd_prime(d):
        return heisenberg_weyl_set(d)
    raise UnsupportedError(
        "no complete MUB set is constructed for d={} (needs d=2 or an odd prime)".format(
            d
        )
    )


def named_set(family, d):
    """
    Resolves a basis-set family name: 'hw' (complete set), 'fourier',
    'fixture' (d=3), 'fixture:ext' or 'fixture:unext' (d=4).
    """
    if family == "hw":
        return complete_set(d)
    if family == "fourier":
        return fourier_pair(d)
    if family.startswith("fixture"):
        variant = family.partition(":")[2]
        if d == 3 and variant == "":
            return d3_fixture()
        if d == 4 and variant in ("ext", "unext"):
            ext, unext = d4_fixtures()
            return ext if variant == "ext" else unext
        raise UnsupportedError(
            "fixture sets exist for d=3 ('fixture') and d=4 ('fixture:ext', "
            "'fixture:unext'); got '{}' with d={}".format(family, d)
        )
    raise DomainError("unknown basis family '{}'".format(family))


def overlap_table(basis_a, basis_b):
    """|<i_a|j_b>|^2 for all i, j."""
    return numpy.abs(basis_a.vectors.conj().T @ basis_b.vectors) ** 2


def verify_mub(mub_set, tol=MUB_TOL):
    """Reports the worst | |<i_a|j_b>|^2 - 1/d | over all pairs of distinct bases."""
    worst = 0.0
    worst_pair = None
    for a in range(mub_set.m):
        for b in range(a + 1, mub_set.m):
            deviation = float(
                numpy.max(
                    numpy.abs(
                        overlap_table(mub_set.bases[a], mub_set.bases[b])
                        - 1.0 / mub_set.d
                    )
                )
            )
            if worst_pair is None or deviation > worst:
                worst = deviation
                worst_pair = (mub_set.bases[a].label, mub_set.bases[b].label)
    return MubReport(worst, worst <= tol, worst_pair)


def _verified(mub_set, tol):
    report = verify_mub(mub_set, tol)
    if not report.passed:
        raise ConstructionError(
            "{} is not mutually unbiased: deviation {:.3g} between {}".format(
                mub_set, report.max_deviation, report.worst_pair
            )
        )
    LOGGER.debug("Verified %s (max deviation %.3g)", mub_set, report.max_deviation)
    return mub_set


def mubset_from_dict(data):
    """Loads MubSet JSON: {"d": n, "bases": [{"label": s, "vectors": [vector JSON]}]}."""
    try:
        d = int(data["d"])
        bases = []
        for entry in data["bases"]:
            columns = []
            for vec in entry["vectors"]:
                if int(vec["dim"]) != d or len(vec["re"]) != d or len(vec["im"]) != d:
                    raise ShapeError(
                        "basis '{}' has a vector of the wrong length".format(
                            entry.get("label")
                        )
                    )
                columns.append(
                    numpy.asarray(vec["re"], dtype=float)
                    + 1j * numpy.asarray(vec["im"], dtype=float)
                )
            if len(columns) != d:
                raise ShapeError(
                    "basis '{}' has {} vectors, expected {}".format(
                        entry.get("label"), len(columns), d
                    )
                )
            bases.append(Basis(numpy.column_stack(columns), entry.get("label", "")))
    except (KeyError, TypeError) as exc:
        raise ShapeError("malformed MubSet JSON: missing {}".format(exc)) from exc
    return MubSet(bases, data.get("name", ""))


def load_mubset(path):
    with open(path, encoding="utf-8") as infile:
        return mubset_from_dict(json.load(infile))
