import logging
import os

LOGGER = logging.getLogger(__name__)

# The current version of the HDF5 archive format
FILE_VERSION = "1.0"

# The version of the mubwit python package
GENERATOR_VERSION = "0.3.0"

GROUP_WITNESSES = "Witnesses"
GROUP_STATES = "States"
GROUP_DECOMPOSITIONS = "Decompositions"
GROUP_BASES = "Bases"

# Largest matrix dimension any construction may produce
MAX_DIM = 4096

# Tolerances. Every function that uses one also accepts it as a keyword.
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-9
VERDICT_TOL = 1e-8
IMAG_TOL = 1e-10
MUB_TOL = 1e-10
ORTHONORMAL_TOL = 1e-12
UNIVERSAL_TOL = 1e-10
OBSTRUCTION_TOL = 1e-10
CERTIFY_TOL = 1e-9
STATE_TRACE_TOL = 1e-12

# Eigensolver selection: "lapack" (numpy.linalg.eigh) or "jacobi"
EIGEN_METHODS = ("lapack", "jacobi")
EIGEN_METHOD = "lapack"
JACOBI_THRESHOLD = 1e-13
JACOBI_MAX_SWEEPS = 100

# See-saw defaults
SEESAW_RESTARTS = 64
SEESAW_ITERS = 500
SEESAW_CHANGE = 1e-12
PRODUCT_PROBES = 10000

DEFAULT_SEED = 0
SEED_ENV = "MUBWIT_SEED"

CSV_DIGITS = 12
CSV_HEADER = ["family", "param", "witness", "s", "m", "value", "ppt", "verdict"]

# Matrices up to this dimension are printed as grids by 'build'
GRID_MAX_DIM = 81

VERDICT_BOUND = "detects-bound-entanglement"
VERDICT_ENTANGLED = "detects-entanglement"
VERDICT_NONE = "no-detection"

STATE_FAMILIES = ("rho_x", "rho_a", "rho_b", "isotropic")


def default_seed():
    """Returns the see-saw seed, taken from $MUBWIT_SEED when it is set."""
    value = os.environ.get(SEED_ENV)
    if value is None or value == "":
        return DEFAULT_SEED
    try:
        return int(value)
    except ValueError as exc:
        raise ValueError(
            "{} must be an integer, got '{}'".format(SEED_ENV, value)
        ) from exc


FILE_DESCRIPTION = f"""This is mubwit.py version {GENERATOR_VERSION}.

Builds entanglement witnesses from mutually unbiased bases (MUBs), the PPT
state families they are tested against, and checks detection values,
separable bounds, non-decomposability obstructions and decompositions.

example commands, including the most commonly used options:

  mubwit.py build --d 3 --bases hw:0,1,2 --shift 1 --gamma --out w.json
    Builds W^G(M_3, 1) from the canonical basis and the first two
    Heisenberg-Weyl bases, prints it, and writes it as matrix JSON.

  mubwit.py eval --witness w.json --state rho_x --params d=3,s=1,x=0.5
    Evaluates tr[W rho] and reports PPT status and the verdict.

  mubwit.py scan --d 4 --witness fixture:unext:s=1 --state rho_b \\
      --grid b=0.25:2.0:0.25 --out scan.csv
    Evaluates a witness over a parameter grid and writes CSV.

  mubwit.py verify --recipe d4-appendix
    Runs a canned reproduction and prints PASS/FAIL per check.

  mubwit.py seesaw --d 3 --bases hw:all --shift 1
    Estimates the maximum of B over product states.

  mubwit.py export --out mubwit.h5
    Writes every reference witness, state and decomposition to HDF5.
"""

BASES_EPILOG = """\
Basis selections have the form FAMILY[:SELECTION]:

  hw          complete set: Pauli eigenbases for d=2, Heisenberg-Weyl for
              odd prime d. Bases are numbered 0 (canonical) to d.
  fourier     the canonical basis and the Fourier basis.
  fixture     the printed d=3 set (bases 0-3).
  fixture:ext / fixture:unext
              the printed d=4 extendible / unextendible triples.
  file=PATH   a MubSet JSON file written by 'mubwit.py bases --out'.

SELECTION is 'all' (the default) or a comma-separated list of basis numbers
or labels, e.g. hw:0,1,2 or fixture:ext:0,2.
"""

WITNESS_EPILOG = """\
Witnesses for 'scan' and 'obstruct' are given as a basis selection followed
by options, e.g. hw:0,1,2:s=1 or fixture:unext:s=1. Options:

  s=K     shift (default 0)
  plain   use W instead of its partial transpose W^G

'bell:s=K' selects W_Bell(s) and 'reduction' the reduction witness. A path
ending in .json is read as a matrix JSON file.
"""

STATES_EPILOG = """\
State families and their parameters:

  rho_x       d, s, x   (x > 0, s != 0, 2s != d mod d)
  rho_a       a         (d = 4, a > 0)
  rho_b       b         (d = 4, b > 0)
  isotropic   d, p      (-1/(d^2-1) <= p <= 1)

Parameters are given as --params d=3,s=1,x=0.5. Grids for 'scan' are
--grid NAME=START:STOP:STEP (inclusive) or NAME=V1,V2,...
"""
