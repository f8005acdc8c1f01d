"""Tolerance policy and complex-scalar utilities.

Everything downstream funnels its float comparisons through this module:
complex equality, integer detection, root-of-unity detection and the
principal square root whose branch choice labels the +/- eigenvalue
multiplicities.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "TolerancePolicy",
    "DEFAULT_POLICY",
    "approx_eq",
    "as_integer",
    "principal_sqrt",
    "principal_root",
    "phase_from_turns",
    "turns_fraction",
]


@dataclass(frozen=True)
class TolerancePolicy:
    """Numerical tolerances used by every check in the package.

    eq_tol bounds complex equality ``|x - y| <= eq_tol``; int_tol bounds
    integer detection ``|x - round(x)| <= int_tol``.
    """

    eq_tol: float = 1e-9
    int_tol: float = 1e-6

    def __post_init__(self):
        if not (0.0 < self.eq_tol <= self.int_tol < 0.5):
            raise ValueError(
                f"require 0 < eq_tol <= int_tol < 0.5, got "
                f"eq_tol={self.eq_tol}, int_tol={self.int_tol}"
            )


DEFAULT_POLICY = TolerancePolicy()


def approx_eq(x: complex, y: complex, pol: TolerancePolicy = DEFAULT_POLICY) -> bool:
    """True iff |x - y| <= eq_tol."""
    return abs(complex(x) - complex(y)) <= pol.eq_tol


def as_integer(x: complex, pol: TolerancePolicy = DEFAULT_POLICY) -> int | None:
    """Round x to an integer, or None if it is not one within int_tol.

    Both the imaginary part and the distance of the real part from the
    nearest integer must stay below int_tol.
    """
    z = complex(x)
    if abs(z.imag) > pol.int_tol:
        return None
    n = round(z.real)
    if abs(z.real - n) > pol.int_tol:
        return None
    return int(n)


def _principal_arg(w: complex) -> float:
    """arg(w) normalized to (-pi, pi]; cmath.phase returns -pi for -1-0j."""
    phi = cmath.phase(w)
    if phi == -math.pi:
        phi = math.pi
    return phi


def principal_sqrt(w: complex, pol: TolerancePolicy = DEFAULT_POLICY) -> complex:
    """Square root e^{i arg(w)/2} of a phase, arg taken in (-pi, pi].

    Raises ValueError for non-unimodular input.  The other square root is
    the negation; callers that care about branch covariance pass
    ``lambda w: -principal_sqrt(w)``.
    """
    z = complex(w)
    if abs(abs(z) - 1.0) > pol.eq_tol:
        raise ValueError(f"not a phase: |{z!r}| = {abs(z)!r}")
    return cmath.exp(0.5j * _principal_arg(z))


def principal_root(w: complex, n: int, pol: TolerancePolicy = DEFAULT_POLICY) -> complex:
    """n-th root e^{i arg(w)/n} of a phase, same branch convention."""
    z = complex(w)
    if abs(abs(z) - 1.0) > pol.eq_tol:
        raise ValueError(f"not a phase: |{z!r}| = {abs(z)!r}")
    return cmath.exp(1j * _principal_arg(z) / n)


def phase_from_turns(turns: Fraction | float) -> complex:
    """e^{2 pi i turns}. Fractions keep catalog phases exact in double precision.

    Fractions are reduced mod 1 first so equivalent representatives (-7/60
    and 53/60, say) produce bit-identical doubles.
    """
    if isinstance(turns, Fraction):
        turns = turns % 1
    return cmath.exp(2j * math.pi * float(turns))


def turns_fraction(
    z: complex,
    max_denominator: int = 240,
    pol: TolerancePolicy = DEFAULT_POLICY,
) -> Fraction | None:
    """Detect z as a root of unity: the fraction of a turn p/q, q bounded.

    Returns the reduced fraction in [0, 1) when z is unimodular and within
    int_tol of e^{2 pi i p/q}; otherwise None.
    """
    z = complex(z)
    if abs(abs(z) - 1.0) > pol.int_tol:
        return None
    turns = _principal_arg(z) / (2.0 * math.pi)
    frac = Fraction(turns).limit_denominator(max_denominator) % 1
    if abs(z - phase_from_turns(frac)) > pol.int_tol:
        return None
    return frac
