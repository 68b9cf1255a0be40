# coding: utf-8
"""
Reference matrices for d = 3 and d = 4, written the way they are usually
printed: one row per line, '.' for zero, 'w' for exp(2 pi i/3) and 'w*' for
its conjugate. Symbols such as x, a and b are bound when a matrix is parsed.

Tokens are [-]ATOM or [-]ATOM/ATOM where an ATOM is a number or a symbol, e.g.
'-2/3', 'w*/3', '1/x'.
"""
from fractions import Fraction

import numpy

from mubwit_helper_classes import ShapeError, DomainError
from mubwit_mubs import omega_power

W_012 = """
  1     .     .     .   -2/3    .     .     .   -2/3
  .     .     .     .     .    w/3  w*/3    .     .
  .     .     1   w*/3    .     .     .    w/3    .
  .     .    w/3    1     .     .     .   w*/3    .
-2/3    .     .     .     1     .     .     .   -2/3
  .   w*/3    .     .     .     .    w/3    .     .
  .    w/3    .     .     .   w*/3    .     .     .
  .     .   w*/3   w/3    .     .     .     1     .
-2/3    .     .     .   -2/3    .     .     .     1
"""

W_023 = """
  1     .     .     .   -2/3    .     .     .   -2/3
  .     .     .     .     .    1/3   1/3    .     .
  .     .     1    1/3    .     .     .    1/3    .
  .     .    1/3    1     .     .     .    1/3    .
-2/3    .     .     .     1     .     .     .   -2/3
  .    1/3    .     .     .     .    1/3    .     .
  .    1/3    .     .     .    1/3    .     .     .
  .     .    1/3   1/3    .     .     .     1     .
-2/3    .     .     .   -2/3    .     .     .     1
"""

W_01 = """
  1     .     .     .   -1/3    .     .     .   -1/3
  .     .     .     .     .   -1/3  -1/3    .     .
  .     .     1   -1/3    .     .     .   -1/3    .
  .     .   -1/3    1     .     .     .   -1/3    .
-1/3    .     .     .     1     .     .     .   -1/3
  .   -1/3    .     .     .     .   -1/3    .     .
  .   -1/3    .     .     .   -1/3    .     .     .
  .     .   -1/3  -1/3    .     .     .     1     .
-1/3    .     .     .   -1/3    .     .     .     1
"""

# printed with an overall minus sign
W_03_NEGATED = """
 -1     .     .     .    1/3    .     .     .    1/3
  .     .     .     .     .    w/3  w*/3    .     .
  .     .    -1   w*/3    .     .     .    w/3    .
  .     .    w/3   -1     .     .     .   w*/3    .
 1/3    .     .     .    -1     .     .     .    1/3
  .   w*/3    .     .     .     .    w/3    .     .
  .    w/3    .     .     .   w*/3    .     .     .
  .     .   w*/3   w/3    .     .     .    -1     .
 1/3    .     .     .    1/3    .     .     .    -1
"""

RHO_X = """
  1     .     .     .     1     .     .     .     1
  .    1/x    .     .     .     .     .     .     .
  .     .     x     .     .     .     .     .     .
  .     .     .     x     .     .     .     .     .
  1     .     .     .     1     .     .     .     1
  .     .     .     .     .    1/x    .     .     .
  .     .     .     .     .     .    1/x    .     .
  .     .     .     .     .     .     .     x     .
  1     .     .     .     1     .     .     .     1
"""

# W_(0,1) = A + B^G, both printed in units of 1/3
A_01 = """
  2     .     .     .    -1     .     .     .    -1
  .     .     .     .     .     .     .     .     .
  .     .     2    -1     .     .     .    -1     .
  .     .    -1     2     .     .     .    -1     .
 -1     .     .     .     2     .     .     .    -1
  .     .     .     .     .     .     .     .     .
  .     .     .     .     .     .     .     .     .
  .     .    -1    -1     .     .     .     2     .
 -1     .     .     .    -1     .     .     .     2
"""

B_01 = """
  1     .     .     .     .     .     .    -1     .
  .     .     .     .     .     .     .     .     .
  .     .     1     .    -1     .     .     .     .
  .     .     .     1     .     .     .     .    -1
  .     .    -1     .     1     .     .     .     .
  .     .     .     .     .     .     .     .     .
  .     .     .     .     .     .     .     .     .
 -1     .     .     .     .     .     .     1     .
  .     .     .    -1     .     .     .     .     1
"""

W_EXT = """
  1    .    .    .    .  -1/2   .    .    .    .  -1/2   .    .    .    .  -1/2
  .    .    .    .    .    .    .    .    .    .    .    .    .    .  -1/2   .
  .    .    1    .    .    .    .    .  -1/2   .    .    .    .    .    .    .
  .    .    .    1    .    .  -1/2   .    .    .    .    .    .    .    .    .
  .    .    .    .    1    .    .    .    .    .    .  -1/2   .    .    .    .
-1/2   .    .    .    .    1    .    .    .    .  -1/2   .    .    .    .  -1/2
  .    .    .  -1/2   .    .    .    .    .    .    .    .    .    .    .    .
  .    .    .    .    .    .    .    1    .    .    .    .    .  -1/2   .    .
  .    .  -1/2   .    .    .    .    .    1    .    .    .    .    .    .    .
  .    .    .    .    .    .    .    .    .    1    .    .  -1/2   .    .    .
-1/2   .    .    .    .  -1/2   .    .    .    .    1    .    .    .    .  -1/2
  .    .    .    .  -1/2   .    .    .    .    .    .    .    .    .    .    .
  .    .    .    .    .    .    .    .    .  -1/2   .    .    .    .    .    .
  .    .    .    .    .    .    .  -1/2   .    .    .    .    .    1    .    .
  .  -1/2   .    .    .    .    .    .    .    .    .    .    .    .    1    .
-1/2   .    .    .    .  -1/2   .    .    .    .  -1/2   .    .    .    .    1
"""

W_UNEXT = """
  1    .    .    .    .  -1/2   .    .    .    .  -1/2   .    .    .    .  -1/2
  .    .    .    .  -1/2   .    .    .    .    .    .    .    .    .    .    .
  .    .    1    .    .    .    .    .  -1/2   .    .    .    .    .    .    .
  .    .    .    1    .    .    .    .    .    .    .    .  -1/2   .    .    .
  .  -1/2   .    .    1    .    .    .    .    .    .    .    .    .    .    .
-1/2   .    .    .    .    1    .    .    .    .  -1/2   .    .    .    .  -1/2
  .    .    .    .    .    .    .    .    .  -1/2   .    .    .    .    .    .
  .    .    .    .    .    .    .    1    .    .    .    .    .  -1/2   .    .
  .    .  -1/2   .    .    .    .    .    1    .    .    .    .    .    .    .
  .    .    .    .    .    .  -1/2   .    .    1    .    .    .    .    .    .
-1/2   .    .    .    .  -1/2   .    .    .    .    1    .    .    .    .  -1/2
  .    .    .    .    .    .    .    .    .    .    .    .    .    .  -1/2   .
  .    .    .  -1/2   .    .    .    .    .    .    .    .    .    .    .    .
  .    .    .    .    .    .    .  -1/2   .    .    .    .    .    1    .    .
  .    .    .    .    .    .    .    .    .    .    .  -1/2   .    .    1    .
-1/2   .    .    .    .  -1/2   .    .    .    .  -1/2   .    .    .    .    1
"""

RHO_A = """
  1    .    .    .    .    1    .    .    .    .    1    .    .    .    .    1
  .   1/a   .    .    .    .    .    .    .    .    .    .    .    .    1    .
  .    .    1    .    .    .    .    .    1    .    .    .    .    .    .    .
  .    .    .    a    .    .    1    .    .    .    .    .    .    .    .    .
  .    .    .    .    a    .    .    .    .    .    .    1    .    .    .    .
  1    .    .    .    .    1    .    .    .    .    1    .    .    .    .    1
  .    .    .    1    .    .   1/a   .    .    .    .    .    .    .    .    .
  .    .    .    .    .    .    .    1    .    .    .    .    .    1    .    .
  .    .    1    .    .    .    .    .    1    .    .    .    .    .    .    .
  .    .    .    .    .    .    .    .    .    a    .    .    1    .    .    .
  1    .    .    .    .    1    .    .    .    .    1    .    .    .    .    1
  .    .    .    .    1    .    .    .    .    .    .   1/a   .    .    .    .
  .    .    .    .    .    .    .    .    .    1    .    .   1/a   .    .    .
  .    .    .    .    .    .    .    1    .    .    .    .    .    1    .    .
  .    1    .    .    .    .    .    .    .    .    .    .    .    .    a    .
  1    .    .    .    .    1    .    .    .    .    1    .    .    .    .    1
"""

RHO_B = """
  1    .    .    .    .    1    .    .    .    .    1    .    .    .    .    1
  .   1/b   .    .    1    .    .    .    .    .    .    .    .    .    .    .
  .    .    1    .    .    .    .    .    1    .    .    .    .    .    .    .
  .    .    .    b    .    .    .    .    .    .    .    .    1    .    .    .
  .    1    .    .    b    .    .    .    .    .    .    .    .    .    .    .
  1    .    .    .    .    1    .    .    .    .    1    .    .    .    .    1
  .    .    .    .    .    .   1/b   .    .    1    .    .    .    .    .    .
  .    .    .    .    .    .    .    1    .    .    .    .    .    1    .    .
  .    .    1    .    .    .    .    .    1    .    .    .    .    .    .    .
  .    .    .    .    .    .    1    .    .    b    .    .    .    .    .    .
  1    .    .    .    .    1    .    .    .    .    1    .    .    .    .    1
  .    .    .    .    .    .    .    .    .    .    .   1/b   .    .    1    .
  .    .    .    1    .    .    .    .    .    .    .    .   1/b   .    .    .
  .    .    .    .    .    .    .    1    .    .    .    .    .    1    .    .
  .    .    .    .    .    .    .    .    .    .    .    1    .    .    b    .
  1    .    .    .    .    1    .    .    .    .    1    .    .    .    .    1
"""

# name -> (grid, overall factor)
REFERENCE_GRIDS = {
    "W_012": (W_012, 1),
    "W_023": (W_023, 1),
    "W_01": (W_01, 1),
    "W_03": (W_03_NEGATED, -1),
    "rho_x": (RHO_X, 1),
    "A_01": (A_01, Fraction(1, 3)),
    "B_01": (B_01, Fraction(1, 3)),
    "W_ext": (W_EXT, 1),
    "W_unext": (W_UNEXT, 1),
    "rho_a": (RHO_A, 1),
    "rho_b": (RHO_B, 1),
}

# Related by complex conjugation
CONJUGATES = {"W_013": "W_012", "W_02": "W_03"}


def _atom(text, symbols):
    if text in symbols:
        return symbols[text]
    try:
        return float(Fraction(text))
    except ValueError as exc:
        raise DomainError("unknown matrix token '{}'".format(text)) from exc


def token_value(token, symbols):
    if token == ".":
        return 0.0
    sign = 1.0
    if token.startswith("-"):
        sign, token = -1.0, token[1:]
    numerator, _, denominator = token.partition("/")
    value = _atom(numerator, symbols)
    if denominator:
        value = value / _atom(denominator, symbols)
    return sign * value


def parse_grid(text, **params):
    """Parses a whitespace-separated grid into a complex matrix."""
    w = omega_power(3, 1)
    symbols = {"w": w, "w*": w.conjugate()}
    symbols.update({k: float(v) for k, v in params.items()})
    rows = [line.split() for line in text.strip().splitlines()]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ShapeError("reference grid is not square")
    return numpy.array(
        [[token_value(token, symbols) for token in row] for row in rows], dtype=complex
    )


def reference_names():
    return sorted(list(REFERENCE_GRIDS) + list(CONJUGATES))


def reference_matrix(name, **params):
    """
    Returns a reference matrix by name; states are returned unnormalized
    (divide by the trace), e.g. reference_matrix("rho_a", a=0.5).
    """
    if name in CONJUGATES:
        return reference_matrix(CONJUGATES[name], **params).conj()
    try:
        grid, factor = REFERENCE_GRIDS[name]
    except KeyError as exc:
        raise DomainError(
            "unknown reference matrix '{}'; available: {}".format(
                name, ", ".join(reference_names())
            )
        ) from exc
    return float(factor) * parse_grid(grid, **params)
