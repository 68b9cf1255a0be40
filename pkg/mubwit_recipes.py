# coding: utf-8
"""
Canned reproductions run by 'mubwit.py verify --recipe NAME'. Each recipe
returns a list of Check tuples; the CLI prints them as PASS/FAIL lines.
"""
import collections
import time

import numpy

from mubwit_globals import (
    LOGGER,
    SEESAW_RESTARTS,
    PRODUCT_PROBES,
    CERTIFY_TOL,
    VERDICT_TOL,
    GROUP_WITNESSES,
    GROUP_STATES,
    GROUP_DECOMPOSITIONS,
    GROUP_BASES,
)
from mubwit_helper_classes import WitnessSpec, DomainError
from mubwit_linalg import max_abs_diff, partial_transpose
from mubwit_mubs import (
    complete_set,
    d3_fixture,
    d4_fixtures,
    fourier_pair,
    heisenberg_weyl_set,
)
from mubwit_witness import (
    asym_projector,
    bell_witness,
    build_B,
    build_W,
    choi_matrix,
    max_entangled,
    reduction_map,
    universal_deviation,
    witness_bound,
)
from mubwit_states import rho_x, rho_a, rho_b, is_ppt, is_symmetric_under_transpose
from mubwit_analysis import (
    expectation,
    obstruction_test,
    verify_decomposition,
    half_shift_decomposition,
    fourier_pair_decomposition,
    rho_x_expectation,
    seesaw_bound,
    product_probe,
)
from mubwit_reference import reference_matrix

Check = collections.namedtuple("Check", ["name", "passed", "measured"])

X_GRID = [round(0.1 * i, 1) for i in range(1, 21)]
AB_GRID = [0.25 * i for i in range(1, 8)]

# name -> (basis numbers in the d = 3 fixture set); all with s = 1 and G applied
D3_WITNESSES = {
    "W_012": (0, 1, 2),
    "W_013": (0, 1, 3),
    "W_023": (0, 2, 3),
    "W_01": (0, 1),
    "W_02": (0, 2),
    "W_03": (0, 3),
}


def _max_check(name, measured, tol):
    return Check(name, measured <= tol, measured)


def recipe_s0_collapse():
    """Complete sets at s = 0: W = 2 Pi_asym and W^G = 1 - d P+ (the reduction map)."""
    checks = []
    for d in (2, 3, 5):
        mub_set = complete_set(d)
        w = build_W(WitnessSpec.covering(mub_set, 0), mub_set)
        w_gamma = build_W(WitnessSpec.covering(mub_set, 0, gamma=True), mub_set)
        reduction = numpy.eye(d * d) - d * max_entangled(d)
        checks.append(
            _max_check("d=%d W = 2 Pi_asym" % d, max_abs_diff(w, 2 * asym_projector(d)), 1e-10)
        )
        checks.append(
            _max_check("d=%d W^G = 1 - d P+" % d, max_abs_diff(w_gamma, reduction), 1e-10)
        )
        checks.append(
            _max_check(
                "d=%d W^G = Choi(reduction map)" % d,
                max_abs_diff(w_gamma, choi_matrix(reduction_map, d)),
                1e-10,
            )
        )
    return checks


def _admissible_shifts(d):
    return [s for s in range(1, d) if (2 * s) % d]


def recipe_bell_witness():
    """tr[W_Bell(s) rho_x] = d(x - 1)/N, with rho_x and rho_x^G positive."""
    checks = []
    for d in (3, 5, 7):
        for s in _admissible_shifts(d):
            witness = bell_witness(d, s)
            mub_set = complete_set(d)
            checks.append(
                _max_check(
                    "d=%d s=%d W_Bell(s) = W^G(M_d+1, s)" % (d, s),
                    max_abs_diff(
                        witness,
                        build_W(WitnessSpec.covering(mub_set, s, gamma=True), mub_set),
                    ),
                    1e-10,
                )
            )
            worst = 0.0
            positive = True
            for x in X_GRID:
                state = rho_x(d, s, x)
                expected = d * (x - 1) / state.normalization
                worst = max(worst, abs(expectation(witness, state.matrix) - expected))
                positive = positive and is_ppt(state)[0] and state.min_eig >= -1e-9
            checks.append(
                _max_check("d=%d s=%d tr[W_Bell rho_x] = d(x-1)/N" % (d, s), worst, 1e-10)
            )
            checks.append(Check("d=%d s=%d rho_x, rho_x^G >= 0" % (d, s), positive, 0.0))
    return checks


def obstruction_cases():
    """(label, d, s, m, W^G) for every witness the obstruction recipe covers."""
    for d in (3, 5, 7):
        hw_set = heisenberg_weyl_set(d)
        for m in range(2, d + 2):
            for s in _admissible_shifts(d):
                spec = WitnessSpec(d, range(m), s, gamma=True)
                yield "hw d=%d m=%d s=%d" % (d, m, s), d, s, m, build_W(spec, hw_set)
    ext, unext = d4_fixtures()
    for mub_set in (ext, unext):
        for m in (2, 3):
            spec = WitnessSpec(4, range(m), 1, gamma=True)
            label = "%s d=4 m=%d s=1" % (mub_set.name, m)
            yield label, 4, 1, m, build_W(spec, mub_set)


def recipe_obstruction():
    """Universal elements of W(M_m, s) and the obstruction firing exactly for m > d/2 + 1."""
    checks = []
    for label, d, s, m, w_gamma in obstruction_cases():
        deviation = universal_deviation(partial_transpose(w_gamma, d), d, s, m)
        checks.append(_max_check(label + " universal elements", deviation, 1e-12))
        report = obstruction_test(w_gamma, d, s, m)
        expected = m > d / 2 + 1
        checks.append(
            Check(
                label + " obstruction %s" % ("fires" if expected else "absent"),
                report.obstruction_found == expected,
                report.b3_min_eig,
            )
        )
    return checks


def recipe_d3_all():
    """The six d = 3 witnesses, rho_x and the decomposition of W_(0,1)."""
    checks = []
    fixture = d3_fixture()
    witnesses = {}
    for name, selection in D3_WITNESSES.items():
        witnesses[name] = build_W(WitnessSpec(3, selection, 1, gamma=True), fixture)
        checks.append(
            _max_check(
                name + " entrywise",
                max_abs_diff(witnesses[name], reference_matrix(name)),
                1e-12,
            )
        )
    for x in (0.5, 2.0):
        printed = reference_matrix("rho_x", x=x)
        printed = printed / numpy.trace(printed).real
        checks.append(
            _max_check(
                "rho_x(x=%g) entrywise" % x, max_abs_diff(rho_x(3, 1, x).matrix, printed), 1e-12
            )
        )
    decomposition = verify_decomposition(
        reference_matrix("W_01"), reference_matrix("A_01"), reference_matrix("B_01")
    )
    checks.append(Check("W_01 = A + B^G certified", decomposition.certified, decomposition.residual))
    for name in ("W_012", "W_013", "W_023"):
        worst = 0.0
        detected = True
        for x in X_GRID:
            value = expectation(witnesses[name], rho_x(3, 1, x).matrix)
            worst = max(worst, abs(value - rho_x_expectation(3, 3, x)))
            if x < 1 / 3:
                detected = detected and value < -1e-4
        checks.append(_max_check(name + " tr[W rho_x] closed form", worst, 1e-10))
        checks.append(Check(name + " detects rho_x for x < 1/3", detected, 0.0))
    return checks


def recipe_d4_fixtures():
    """W_ext, W_unext, rho_a, rho_b entrywise; detection values, PPT and rho_b^G = rho_b over the grid."""
    checks = []
    ext, unext = d4_fixtures()
    w_ext = build_W(WitnessSpec(4, (0, 1, 2), 1, gamma=True), ext)
    w_unext = build_W(WitnessSpec(4, (0, 1, 2), 1, gamma=True), unext)
    checks.append(_max_check("W_ext entrywise", max_abs_diff(w_ext, reference_matrix("W_ext")), 1e-12))
    checks.append(
        _max_check("W_unext entrywise", max_abs_diff(w_unext, reference_matrix("W_unext")), 1e-12)
    )
    checks.append(
        Check(
            "W_unext^G = W_unext exactly",
            numpy.array_equal(partial_transpose(w_unext, 4), w_unext),
            max_abs_diff(partial_transpose(w_unext, 4), w_unext),
        )
    )
    for family, builder, witness in (("rho_a", rho_a, w_ext), ("rho_b", rho_b, w_unext)):
        worst_entry = 0.0
        worst_value = 0.0
        ppt = True
        for t in AB_GRID:
            state = builder(t)
            printed = reference_matrix(family, **{family[-1]: t})
            worst_entry = max(
                worst_entry, max_abs_diff(state.matrix, printed / numpy.trace(printed).real)
            )
            expected = 4 * (t - 1) / state.normalization
            worst_value = max(worst_value, abs(expectation(witness, state.matrix) - expected))
            ppt = ppt and is_ppt(state)[0]
        checks.append(_max_check(family + " entrywise", worst_entry, 1e-12))
        checks.append(_max_check(family + " tr[W rho] = 4(t-1)/N", worst_value, 1e-10))
        checks.append(Check(family + " PPT over the grid", ppt, 0.0))
    symmetric = [is_symmetric_under_transpose(rho_b(t)) for t in AB_GRID]
    checks.append(Check("rho_b^G = rho_b over the grid", all(symmetric), 0.0))
    return checks


def recipe_fourier_pair():
    """d W^G({B0, F}, 1) = A(1) + B(1)^G for d in {3, 4, 5, 7, 8}."""
    checks = []
    for d in (3, 4, 5, 7, 8):
        decomposition = fourier_pair_decomposition(d)
        checks.append(
            Check(
                "d=%d certified, %d rank-one terms" % (d, decomposition.b_terms),
                decomposition.is_certified(1e-10) and decomposition.b_terms == d * (d - 1) // 2,
                decomposition.residual,
            )
        )
        if d == 3:
            checks.append(
                _max_check(
                    "d=3 A(1) = 3 A printed",
                    max_abs_diff(decomposition.A, 3 * reference_matrix("A_01")),
                    1e-12,
                )
            )
            checks.append(
                _max_check(
                    "d=3 B(1) = 3 B printed",
                    max_abs_diff(decomposition.B, 3 * reference_matrix("B_01")),
                    1e-12,
                )
            )
    # a decomposable witness cannot go negative on a PPT state
    for d in (3, 4, 5):
        pair = fourier_pair(d)
        witness = build_W(WitnessSpec(d, [0, 1], 1, gamma=True), pair)
        if d == 4:
            states = [rho_a(t) for t in AB_GRID] + [rho_b(t) for t in AB_GRID]
        else:
            states = [rho_x(d, 1, x) for x in X_GRID]
        lowest = min(expectation(witness, state.matrix) for state in states)
        checks.append(
            Check("d=%d no PPT state detected" % d, lowest >= -VERDICT_TOL, lowest)
        )
    return checks


def recipe_half_shift():
    """W_Bell(d/2) = A + B^G for d in {2, 4, 6}."""
    checks = []
    for d in (2, 4, 6):
        decomposition = half_shift_decomposition(d)
        checks.append(
            Check(
                "d=%d s=%d certified" % (d, d // 2),
                decomposition.is_certified(1e-12),
                decomposition.residual,
            )
        )
    return checks


def recipe_separable_bound():
    """
    See-saw over B(M_m, s) stays below (d + m - 1)/d for the Heisenberg-Weyl
    sets of d in {3, 5}, every m and s in {0, 1}; random product states never
    make W negative. m = 1 is B = Pi_s alone, with maximum 1.
    """
    checks = []
    for d in (3, 5):
        hw_set = heisenberg_weyl_set(d)
        for m in range(1, d + 2):
            for s in (0, 1):
                label = "d=%d m=%d s=%d" % (d, m, s)
                B = build_B(hw_set, list(range(m)), s)
                bound = witness_bound(d, m)
                found = seesaw_bound(B, d, SEESAW_RESTARTS, seed=d * 100 + m * 10 + s)
                checks.append(
                    Check(label + " see-saw <= (d+m-1)/d", found.value <= bound + 1e-6, found.value)
                )
                if m == d + 1 and s == 0:
                    checks.append(
                        Check(label + " see-saw reaches 2", found.value >= 2 - 1e-6, found.value)
                    )
                if m == 1:
                    checks.append(
                        _max_check(label + " max <ab|Pi_s|ab> = 1", abs(found.value - 1), 1e-9)
                    )
                lowest = product_probe(bound * numpy.eye(d * d) - B, d, PRODUCT_PROBES, seed=m)
                checks.append(
                    Check(label + " W >= 0 on random product states", lowest >= -CERTIFY_TOL, lowest)
                )
    return checks


RECIPES = collections.OrderedDict(
    [
        ("s0-collapse", recipe_s0_collapse),
        ("prop1", recipe_bell_witness),
        ("thm1-obstruction", recipe_obstruction),
        ("d3-all", recipe_d3_all),
        ("d4-appendix", recipe_d4_fixtures),
        ("fourier-pair", recipe_fourier_pair),
        ("half-shift", recipe_half_shift),
        ("separable-bound", recipe_separable_bound),
    ]
)


def run_recipe(name):
    """Runs a recipe by name and returns its checks."""
    if name not in RECIPES:
        raise DomainError(
            "unknown recipe '{}'; available: {}".format(name, ", ".join(RECIPES))
        )
    start = time.perf_counter()
    checks = RECIPES[name]()
    LOGGER.info(
        "Recipe %s ran %d checks in %f seconds", name, len(checks), time.perf_counter() - start
    )
    return checks


def reference_reproductions():
    """Yields (group, name, matrix, attrs) for every reproduced reference object."""
    fixture = d3_fixture()
    for name, selection in D3_WITNESSES.items():
        spec = WitnessSpec(3, selection, 1, gamma=True)
        yield GROUP_WITNESSES, name, build_W(spec, fixture), {"d": 3, "s": 1, "m": len(selection)}
    ext, unext = d4_fixtures()
    for name, mub_set in (("W_ext", ext), ("W_unext", unext)):
        spec = WitnessSpec(4, (0, 1, 2), 1, gamma=True)
        yield GROUP_WITNESSES, name, build_W(spec, mub_set), {"d": 4, "s": 1, "m": 3}
    for d in (3, 5):
        for s in range(d):
            yield GROUP_WITNESSES, "W_Bell_d%d_s%d" % (d, s), bell_witness(d, s), {"d": d, "s": s, "m": d + 1}

    yield GROUP_STATES, "rho_x_d3_s1_x0.5", rho_x(3, 1, 0.5).matrix, {"d": 3, "s": 1, "x": 0.5}
    yield GROUP_STATES, "rho_a_a0.5", rho_a(0.5).matrix, {"d": 4, "a": 0.5}
    yield GROUP_STATES, "rho_b_b0.5", rho_b(0.5).matrix, {"d": 4, "b": 0.5}

    decompositions = [
        verify_decomposition(
            reference_matrix("W_01"),
            reference_matrix("A_01"),
            reference_matrix("B_01"),
            label="W_01",
        )
    ]
    decompositions += [fourier_pair_decomposition(d) for d in (3, 4, 5)]
    decompositions += [half_shift_decomposition(d) for d in (2, 4, 6)]
    for number, decomposition in enumerate(decompositions):
        attrs = {
            "label": decomposition.label,
            "residual": decomposition.residual,
            "certified": decomposition.certified,
        }
        yield GROUP_DECOMPOSITIONS, "%02d_A" % number, decomposition.A, attrs
        yield GROUP_DECOMPOSITIONS, "%02d_B" % number, decomposition.B, attrs

    for mub_set in (fixture, ext, unext, fourier_pair(3), complete_set(5)):
        for basis in mub_set:
            yield GROUP_BASES, "%s_%s" % (mub_set.name, basis.label), basis.vectors, {"d": mub_set.d}
