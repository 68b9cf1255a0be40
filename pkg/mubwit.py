#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
    Usage: mubwit.py [-h] [-l LOG_LEVEL] [--eigensolver {lapack,jacobi}] command ...

    Builds entanglement witnesses from mutually unbiased bases and checks
    them against families of PPT entangled states. For more detailed help
    and information about program options, run `mubwit.py --help` or
    `mubwit.py <command> --help`.

    This program can also be used as a module. The library lives in the
    mubwit_* modules:

    # Modules
        mubwit_mubs: Basis sets (Heisenberg-Weyl, Fourier pair, fixtures).
        mubwit_witness: W(M_m, s), its partial transpose and the Bell witnesses.
        mubwit_states: rho_x, rho_a, rho_b and the isotropic states.
        mubwit_analysis: Evaluation, see-saw bounds, obstructions, decompositions.
        mubwit_store: JSON, CSV and HDF5 (WitnessArchive) formats.

SEE ALSO:
    mubwit_recipes.py: the reproductions behind `mubwit.py verify`

LICENSE:
    This code may be used in accordance with the Creative Commons
    Zero ("CC0") public domain dedication:
    https://creativecommons.org/publicdomain/zero/1.0/

DISCLAIMER:
    This software is provided ``AS IS'' and any express or implied
    warranties, including, but not limited to, the implied warranties of
    merchantability and fitness for a particular purpose, are disclaimed.
    In no event shall the authors be liable for any direct, indirect,
    incidental, special, exemplary, or consequential damages (including,
    but not limited to, procurement of substitute goods or services; loss
    of use, data, or profits; or business interruption) however caused and
    on any theory of liability, whether in contract, strict liability, or
    tort (including negligence or otherwise) arising in any way out of the
    use of this software, even if advised of the possibility of such damage.
"""

import argparse
import json
import logging
import os
import sys

import numpy

from mubwit_globals import (
    LOGGER,
    FILE_DESCRIPTION,
    BASES_EPILOG,
    WITNESS_EPILOG,
    STATES_EPILOG,
    EIGEN_METHODS,
    EIGEN_METHOD,
    GRID_MAX_DIM,
    SEESAW_RESTARTS,
    SEESAW_ITERS,
    PRODUCT_PROBES,
    STATE_FAMILIES,
    VERDICT_TOL,
    CERTIFY_TOL,
    default_seed,
)
from mubwit_helper_classes import MubwitError, WitnessSpec, WitnessSpecError, DomainError
from mubwit_linalg import (
    set_eigen_method,
    eigvals_hermitian,
    hermiticity_residual,
    partial_transpose,
    local_dim,
    matrix_from_dict,
)
from mubwit_mubs import named_set, load_mubset, verify_mub
from mubwit_witness import bell_witness, reduction_witness, build_W, build_B, witness_bound
from mubwit_states import make_state
from mubwit_analysis import (
    ScanWitness,
    evaluate,
    scan,
    seesaw_bound,
    product_probe,
    obstruction_test,
)
from mubwit_recipes import RECIPES, run_recipe, reference_reproductions
from mubwit_store import (
    read_json,
    write_json,
    save_matrix,
    load_state,
    write_scan_csv,
    save_scan_csv,
    format_grid,
    WitnessArchive,
)


# Argument parsing helpers
def parse_number(text):
    """'3' -> 3, '0.5' -> 0.5."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError as exc:
        raise DomainError("'{}' is not a number".format(text)) from exc


def parse_params(text):
    """'d=3,s=1,x=0.5' -> {"d": 3, "s": 1, "x": 0.5}."""
    params = {}
    if not text:
        return params
    for item in text.split(","):
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise DomainError("parameters look like NAME=VALUE, got '{}'".format(item))
        params[name.strip()] = parse_number(value.strip())
    return params


def parse_grid(items):
    """['x=0.1:2.0:0.1', 'p=0,1'] -> {"x": [0.1, ..., 2.0], "p": [0, 1]}."""
    grid = {}
    for item in items or []:
        name, sep, values = item.partition("=")
        if not sep or not name:
            raise DomainError("grids look like NAME=START:STOP:STEP, got '{}'".format(item))
        if ":" in values:
            parts = values.split(":")
            if len(parts) != 3:
                raise DomainError("grid ranges need START:STOP:STEP, got '{}'".format(values))
            start, stop, step = (float(parse_number(p)) for p in parts)
            if step <= 0 or stop < start:
                raise DomainError("grid '{}' is empty".format(item))
            count = int(round((stop - start) / step)) + 1
            grid[name] = [round(start + i * step, 12) for i in range(count)]
        else:
            grid[name] = [parse_number(v) for v in values.split(",")]
    return grid


def parse_bases(text, d):
    """
    Splits FAMILY[:VARIANT][:SELECTION][:OPTION...] into the basis set, the
    selection (None for all) and the remaining option tokens.
    """
    tokens = text.split(":")
    family = tokens.pop(0)
    if family.startswith("file="):
        mub_set = load_mubset(family[len("file="):])
        if d is not None and mub_set.d != d:
            raise WitnessSpecError(
                "{} holds d={} bases, expected d={}".format(family, mub_set.d, d)
            )
    else:
        if d is None:
            raise DomainError("--d is required for basis family '{}'".format(family))
        if family == "fixture" and tokens and tokens[0] in ("ext", "unext"):
            family += ":" + tokens.pop(0)
        mub_set = named_set(family, d)
    selection = None
    if tokens and tokens[0] != "plain" and "=" not in tokens[0]:
        selected = tokens.pop(0)
        if selected != "all":
            selection = selected.split(",")
    return mub_set, selection, tokens


def load_witness_file(path):
    """Reads witness matrix JSON; the stored spec (if any) supplies s and m."""
    data = read_json(path)
    matrix = matrix_from_dict(data, os.path.basename(path))
    spec = data.get("spec")
    s = m = None
    if spec:
        spec = WitnessSpec.from_dict(spec)
        s, m = spec.s, spec.m
    label = data.get("label", os.path.basename(path))
    return ScanWitness(label, matrix, s, m), spec


def parse_witness(text, d):
    """Resolves a witness argument (file, 'bell:s=K', 'reduction' or a basis selection)."""
    if text.endswith(".json"):
        return load_witness_file(text)[0]
    if text == "reduction":
        if d is None:
            raise DomainError("--d is required for the reduction witness")
        return ScanWitness("W_red", reduction_witness(d), 0, d + 1)
    if text.startswith("bell"):
        if d is None:
            raise DomainError("--d is required for the Bell witness")
        options = dict(token.partition("=")[::2] for token in text.split(":")[1:])
        s = int(parse_number(options.get("s", "0")))
        return ScanWitness("W_Bell(s=%d)" % s, bell_witness(d, s), s % d, d + 1)
    mub_set, selection, options = parse_bases(text, d)
    s = 0
    gamma = True
    for option in options:
        if option == "plain":
            gamma = False
        elif option.startswith("s="):
            s = int(parse_number(option[2:]))
        else:
            raise WitnessSpecError("unknown witness option '{}'".format(option))
    if selection is None:
        spec = WitnessSpec.covering(mub_set, s, gamma)
    else:
        spec = WitnessSpec(mub_set.d, selection, s, gamma)
    label = "%s:%s" % (mub_set.name or text.split(":")[0], spec.label())
    return ScanWitness(label, build_W(spec, mub_set), spec.s, spec.m)


# Command-line utilities
def command_build(args):
    """The 'build' command constructs W(M_m, s) and prints its summary."""
    mub_set, selection, extra = parse_bases(args.bases, args.d)
    if extra:
        raise WitnessSpecError(
            "unexpected tokens '{}' in --bases; use --shift and --gamma".format(":".join(extra))
        )
    if selection is None:
        spec = WitnessSpec.covering(mub_set, args.shift, args.gamma)
    else:
        spec = WitnessSpec(mub_set.d, selection, args.shift, args.gamma)
    witness = build_W(spec, mub_set)
    d = spec.d
    eigs = eigvals_hermitian(witness)

    print(spec.label())
    print("d=%d m=%d s=%d bases=%s" % (d, spec.m, spec.s, ",".join(mub_set.select(selection).labels)))
    print("trace               : %.12g" % numpy.trace(witness).real)
    print("min eigenvalue      : %.12g" % eigs[0])
    print("max eigenvalue      : %.12g" % eigs[-1])
    print("Hermiticity residual: %.3g" % hermiticity_residual(witness))
    if numpy.array_equal(partial_transpose(witness, d), witness):
        print("note: W^G = W (invariant under the partial transpose)")
    if d * d <= GRID_MAX_DIM:
        print()
        print(format_grid(witness))
    if args.out:
        save_matrix(args.out, witness, spec=spec.to_dict(), label=spec.label())
        LOGGER.info("Wrote %s to %s", spec.label(), args.out)


def _state_from_args(args, d):
    if args.state.endswith(".json"):
        return load_state(args.state)
    params = parse_params(args.params)
    if d is not None and args.state in ("rho_x", "isotropic"):
        params.setdefault("d", d)
    return make_state(args.state, params)


def command_eval(args):
    """The 'eval' command reports tr[W rho], the PPT status of rho and the verdict."""
    witness = parse_witness(args.witness, args.d)
    state = _state_from_args(args, args.d or local_dim(witness.matrix))
    report = evaluate(witness.matrix, state, args.tol, witness.label, witness.s, witness.m)
    if args.json:
        print(json.dumps(report.to_dict(), indent=1))
    else:
        print("witness : %s" % report.witness)
        print("state   : %s(%s)" % (report.state_family, report.param))
        print("value   : %.12g" % report.value)
        print("ppt     : %s (min eigenvalue of rho^G %.3g)" % (report.ppt, report.min_eig_pt))
        print("verdict : %s" % report.verdict)


def command_scan(args):
    """The 'scan' command evaluates witnesses over a state parameter grid."""
    witnesses = [parse_witness(text, args.d) for text in args.witness]
    fixed = parse_params(args.params)
    if args.d is not None and args.state in ("rho_x", "isotropic"):
        fixed.setdefault("d", args.d)
    if args.state == "rho_x":
        # rho_x carries the witness shift unless it is given explicitly
        shifts = {w.s for w in witnesses if w.s}
        if "s" not in fixed and len(shifts) == 1:
            fixed["s"] = shifts.pop()
    reports = scan(witnesses, args.state, parse_grid(args.grid), fixed, args.tol)
    if args.out:
        save_scan_csv(args.out, reports)
    else:
        write_scan_csv(sys.stdout, reports)


def command_verify(args):
    """The 'verify' command runs canned reproductions and prints PASS/FAIL lines."""
    names = list(RECIPES) if args.recipe == "all" else [args.recipe]
    failed = 0
    for name in names:
        for check in run_recipe(name):
            print(
                "%s  %s: %s  measured=%.3g"
                % ("PASS" if check.passed else "FAIL", name, check.name, check.measured)
            )
            if not check.passed:
                failed += 1
    if failed:
        print("%d check(s) failed" % failed, file=sys.stderr)
        return 1
    return 0


def command_bases(args):
    """The 'bases' command dumps, loads and verifies basis sets."""
    if args.load:
        mub_set = load_mubset(args.load)
    else:
        if not args.bases:
            raise DomainError("give --bases or --load")
        mub_set, selection, _ = parse_bases(args.bases, args.d)
        mub_set = mub_set.select(selection)
    report = verify_mub(mub_set)
    print(mub_set)
    print("real bases          : %s" % ", ".join(b.label for b in mub_set if b.is_real()))
    print("canonical positions : %s" % mub_set.canonical_positions())
    print("max |overlap - 1/d| : %.3g" % report.max_deviation)
    print("mutually unbiased   : %s" % report.passed)
    if args.out:
        data = mub_set.to_dict()
        data["name"] = mub_set.name
        write_json(args.out, data)
        LOGGER.info("Wrote %s to %s", mub_set, args.out)
    return 0 if report.passed else 1


def command_seesaw(args):
    """The 'seesaw' command estimates the maximum of B(M_m, s) on product states."""
    mub_set, selection, _ = parse_bases(args.bases, args.d)
    chosen = mub_set.select(selection)
    B = build_B(chosen, None, args.shift)
    d = chosen.d
    seed = default_seed() if args.seed is None else args.seed
    result = seesaw_bound(B, d, args.restarts, args.iters, seed)
    bound = witness_bound(d, chosen.m)
    print("max <ab|B|ab>       : %.12g (restart %d, %d iterations)" % (
        result.value, result.restart, result.iterations))
    print("separable bound     : %.12g" % bound)
    print("bound respected     : %s" % (result.value <= bound + CERTIFY_TOL))
    if args.probes:
        witness = bound * numpy.eye(d * d) - B
        print("min <ab|W|ab> probed: %.12g over %d product states" % (
            product_probe(witness, d, args.probes, seed), args.probes))


def command_obstruct(args):
    """The 'obstruct' command looks for the principal-submatrix obstruction."""
    if args.witness.endswith(".json"):
        witness, spec = load_witness_file(args.witness)
        transposed = spec.gamma if spec else True
    else:
        witness = parse_witness(args.witness, args.d)
        transposed = ":plain" not in args.witness
    s = args.shift if args.shift is not None else witness.s
    m = args.m if args.m is not None else witness.m
    if s is None or m is None:
        raise DomainError("the witness carries no spec; give --shift and --m")
    report = obstruction_test(witness.matrix, local_dim(witness.matrix), s, m, transposed)
    if args.json:
        print(json.dumps(report.to_dict(), indent=1))
    else:
        print("%s: %s" % (witness.label, report))


def command_export(args):
    """The 'export' command writes every reference reproduction to an HDF5 archive."""
    count = 0
    with WitnessArchive(args.out, "w") as archive:
        for group, name, matrix, attrs in reference_reproductions():
            archive.add_matrix(group, name, matrix, **attrs)
            count += 1
    print("Wrote %d matrices to %s" % (count, args.out))


def main():  # =====================================================================================================
    """Parses command-line arguments and runs the requested command."""

    logging.basicConfig()

    parser = argparse.ArgumentParser(
        description=FILE_DESCRIPTION,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-l", "--log_level", default="INFO")
    parser.add_argument(
        "--eigensolver",
        default=EIGEN_METHOD,
        choices=EIGEN_METHODS,
        help="eigensolver used for every spectrum (default: %(default)s)",
    )

    subparsers = parser.add_subparsers(
        description="""Specifies the operation to perform.
For more information on all the possible options for a command, add the --help option after it:
mubwit.py build --help
""",
    )

    # BUILD -------------------------------------------------------------------------------------------------------
    p_build = subparsers.add_parser(
        "build",
        description="Build the witness W(M_m, s) or its partial transpose.",
        epilog=BASES_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_build.add_argument("--d", type=int, help="local dimension")
    p_build.add_argument("--bases", default="hw", help="basis selection (default: hw)")
    p_build.add_argument("--shift", type=int, default=0, help="shift s (default: 0)")
    p_build.add_argument("--gamma", action="store_true", help="build W^G instead of W")
    p_build.add_argument("--out", help="write the matrix JSON here")
    p_build.set_defaults(func=command_build)

    # EVAL --------------------------------------------------------------------------------------------------------
    p_eval = subparsers.add_parser(
        "eval",
        description="Evaluate tr[W rho] for one witness and one state.",
        epilog=WITNESS_EPILOG + "\n" + STATES_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_eval.add_argument("--witness", required=True, help="witness file or selection")
    p_eval.add_argument("--d", type=int, help="local dimension (for witness selections)")
    p_eval.add_argument(
        "--state", required=True, help="state family (%s) or state JSON file" % ", ".join(STATE_FAMILIES)
    )
    p_eval.add_argument("--params", default="", help="state parameters, e.g. d=3,s=1,x=0.5")
    p_eval.add_argument("--tol", type=float, default=VERDICT_TOL, help="verdict tolerance")
    p_eval.add_argument("--json", action="store_true", help="print the report as JSON")
    p_eval.set_defaults(func=command_eval)

    # SCAN --------------------------------------------------------------------------------------------------------
    p_scan = subparsers.add_parser(
        "scan",
        description="Evaluate witnesses over a grid of state parameters and write CSV.",
        epilog=WITNESS_EPILOG + "\n" + STATES_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_scan.add_argument("--d", type=int, help="local dimension")
    p_scan.add_argument(
        "--witness", action="append", required=True, help="witness (repeatable)"
    )
    p_scan.add_argument("--state", required=True, choices=STATE_FAMILIES)
    p_scan.add_argument("--grid", action="append", required=True, help="NAME=START:STOP:STEP (repeatable)")
    p_scan.add_argument("--params", default="", help="fixed state parameters")
    p_scan.add_argument("--tol", type=float, default=VERDICT_TOL, help="verdict tolerance")
    p_scan.add_argument("--out", help="CSV file (default: stdout)")
    p_scan.set_defaults(func=command_scan)

    # VERIFY ------------------------------------------------------------------------------------------------------
    p_verify = subparsers.add_parser(
        "verify", description="Run a canned reproduction and print PASS/FAIL per check."
    )
    p_verify.add_argument(
        "--recipe",
        required=True,
        help="one of: %s, or 'all'" % ", ".join(RECIPES),
    )
    p_verify.set_defaults(func=command_verify)

    # BASES -------------------------------------------------------------------------------------------------------
    p_bases = subparsers.add_parser(
        "bases",
        description="Dump, load and verify basis sets.",
        epilog=BASES_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_bases.add_argument("--d", type=int, help="local dimension")
    p_bases.add_argument("--bases", help="basis selection")
    p_bases.add_argument("--load", help="read a MubSet JSON file instead")
    p_bases.add_argument("--out", help="write the set as MubSet JSON")
    p_bases.set_defaults(func=command_bases)

    # SEESAW ------------------------------------------------------------------------------------------------------
    p_seesaw = subparsers.add_parser(
        "seesaw",
        description="Estimate the maximum of B(M_m, s) over product states.",
        epilog=BASES_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_seesaw.add_argument("--d", type=int, help="local dimension")
    p_seesaw.add_argument("--bases", default="hw", help="basis selection (default: hw)")
    p_seesaw.add_argument("--shift", type=int, default=0, help="shift s (default: 0)")
    p_seesaw.add_argument("--restarts", type=int, default=SEESAW_RESTARTS)
    p_seesaw.add_argument("--iters", type=int, default=SEESAW_ITERS)
    p_seesaw.add_argument("--seed", type=int, help="random seed (default: $MUBWIT_SEED or 0)")
    p_seesaw.add_argument(
        "--probes",
        type=int,
        default=0,
        help="also probe W on this many random product states (e.g. %d)" % PRODUCT_PROBES,
    )
    p_seesaw.set_defaults(func=command_seesaw)

    # OBSTRUCT ----------------------------------------------------------------------------------------------------
    p_obstruct = subparsers.add_parser(
        "obstruct",
        description="Look for the principal-submatrix obstruction to W = A + B^G.",
        epilog=WITNESS_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_obstruct.add_argument("--witness", required=True, help="witness file or selection")
    p_obstruct.add_argument("--d", type=int, help="local dimension")
    p_obstruct.add_argument("--shift", type=int, help="override the witness shift")
    p_obstruct.add_argument("--m", type=int, help="override the number of bases")
    p_obstruct.add_argument("--json", action="store_true", help="print the report as JSON")
    p_obstruct.set_defaults(func=command_obstruct)

    # EXPORT ------------------------------------------------------------------------------------------------------
    p_export = subparsers.add_parser(
        "export", description="Write every reference reproduction to an HDF5 archive."
    )
    p_export.add_argument("--out", required=True, help="HDF5 file to write")
    p_export.set_defaults(func=command_export)

    args = parser.parse_args()
    logging.getLogger().setLevel(getattr(logging, args.log_level.upper()))

    if "func" not in args:
        parser.print_help()
        return 0

    try:
        set_eigen_method(args.eigensolver)
        return args.func(args) or 0
    except json.JSONDecodeError as exc:
        print("mubwit.py: malformed JSON: {}".format(exc), file=sys.stderr)
        return 2
    except (MubwitError, ValueError, ArithmeticError) as exc:
        print("mubwit.py: error: {}".format(exc), file=sys.stderr)
        if LOGGER.getEffectiveLevel() <= logging.DEBUG:
            raise
        return 1
    except (OSError, KeyError) as exc:
        print("mubwit.py: I/O error: {}".format(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    try:
        sys.exit(main())
    except BrokenPipeError:
        # Python flushes standard streams on exit; redirect remaining output
        # to devnull to avoid another BrokenPipeError at shutdown
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        sys.exit(1)  # Python exits with error code 1 on EPIPE
