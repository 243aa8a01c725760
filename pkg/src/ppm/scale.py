"""Scale of a linear automorphism of Q_p^n, computed two independent ways.

The scale s(alpha) is the minimal index [alpha(U) : U ^ alpha(U)] over
compact open subgroups U, always a power of p here. The Newton-polygon
formula gives the certified exponent; the tidying iteration produces a
minimizing lattice as a procedural witness. The two must agree or the
operation fails loudly.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CapExceeded, InternalInvariantViolation, Singular
from .linalg import Lattice, QMatrix, apply, char_poly, lattice_index, lattice_intersect, \
    lattice_sum, newton_polygon
from .qpcore import PContext


def _polygon(a: QMatrix, ctx: PContext):
    if a.det() == 0:
        raise Singular("scale is only defined for invertible maps")
    return newton_polygon(char_poly(a), ctx)


def scale_newton(a: QMatrix, ctx: PContext) -> int:
    """Exponent m with s(alpha) = p^m: total expansion of the eigenvalues.

    m is the sum of -v over eigenvalue valuations v < 0, equivalently
    the product of |lambda| over eigenvalues with |lambda| > 1, in
    exponent form.
    """
    return _polygon(a, ctx).negative_exponent()


def default_iteration_cap(a: QMatrix, ctx: PContext) -> int:
    """Generous over-approximation of the tidying length.

    Reads the maximal vertical excursion off the Newton polygon: the
    iteration needs at most about n * excursion steps to decouple the
    expanding and contracting directions.
    """
    poly = _polygon(a, ctx)
    excursion = 0
    for val, mult in poly.slopes:
        rise = abs(val * mult)
        assert rise.denominator == 1
        excursion = max(excursion, int(rise))
    return a.n * (1 + excursion) * 4


@dataclass(frozen=True)
class ScaleReport:
    """Result of the tidying iteration.

    scale_exponent: s(alpha) = p^scale_exponent, equal to the Newton value.
    minimizing_lattice: lattice U with [alpha(U) : U ^ alpha(U)] = p^m.
    iteration_trace: (step, index exponent) pairs, non-increasing.
    method_agreement: tidying terminated exactly at the Newton value.
    """

    scale_exponent: int
    minimizing_lattice: Lattice
    iteration_trace: tuple
    method_agreement: bool


def scale_tidy(a: QMatrix, ctx: PContext, l0: Lattice | None = None,
               cap: int | None = None) -> ScaleReport:
    """Iterate L_k = L_{k-1} ^ alpha(L_{k-1}) until the index exponent
    reaches the Newton value; that lattice is a minimizer (tidy for alpha).
    """
    target = scale_newton(a, ctx)
    if cap is None:
        cap = default_iteration_cap(a, ctx)
    lat = l0 if l0 is not None else Lattice.standard(ctx, a.n)
    trace = []
    for k in range(cap + 1):
        image = apply(a, lat)
        e = lattice_index(image, lattice_intersect(image, lat))
        trace.append((k, e))
        if e < target:
            raise InternalInvariantViolation(
                f"index exponent {e} fell below the Newton value {target}")
        if len(trace) >= 2 and trace[-2][1] < e:
            raise InternalInvariantViolation("tidying index increased")
        if e == target:
            return ScaleReport(target, lat, tuple(trace), True)
        lat = lattice_intersect(lat, image)
    raise CapExceeded(
        f"tidying did not certify the scale within {cap} steps", tuple(trace))


def invariant_lattice(a: QMatrix, ctx: PContext, cap: int | None = None) -> Lattice | None:
    """A lattice L with alpha(L) = L, or None when no such lattice exists.

    Exists exactly when s(alpha) = s(alpha^{-1}) = 1; it is then reached
    by saturating the standard lattice under alpha and its inverse.
    """
    a_inv = a.inverse()  # raises Singular first
    if scale_newton(a, ctx) != 0 or scale_newton(a_inv, ctx) != 0:
        return None
    if cap is None:
        cap = default_iteration_cap(a, ctx) + default_iteration_cap(a_inv, ctx)
    lat = Lattice.standard(ctx, a.n)
    for _ in range(cap + 1):
        grown = lattice_sum(lattice_sum(lat, apply(a, lat)), apply(a_inv, lat))
        if grown == lat:
            if apply(a, lat) != lat:
                raise InternalInvariantViolation("saturated lattice is not invariant")
            return lat
        lat = grown
    raise CapExceeded(f"invariant-lattice saturation ran past {cap} rounds")
