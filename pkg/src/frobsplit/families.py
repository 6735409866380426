"""Builtin ideals addressed by short names on the command line."""

from __future__ import annotations

from .algebra import GroundField, MonomialOrder, Polynomial, VarSet, parse_poly
from .groebner import Ideal, Limits, buchberger, DEFAULT_LIMITS
from .invariants import determinantal_ideal, make_matrix, so_generators, label

BUILTINS = ("node", "cusp", "det R S", "sym-det N", "sym-det-cover N", "so-presentation N M")


def builtin_ideal(name: str, p: int, limits: Limits = DEFAULT_LIMITS) -> Ideal:
    """Resolve ``name`` (e.g. ``"det 2 2"``) to an ideal over F_p."""
    fld = GroundField(p)
    words = name.split()
    if not words:
        raise ValueError("empty family name")
    head, args = words[0], words[1:]
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise ValueError(f"bad family arguments in {name!r}") from None

    def need(k):
        if len(nums) != k:
            raise ValueError(f"family {head!r} takes {k} integer argument(s)")

    if head == "node":
        need(0)
        return Ideal([parse_poly("x*y", fld, "xy")], limits=limits)
    if head == "cusp":
        need(0)
        return Ideal([parse_poly("y^2 - x^3", fld, "xy")], limits=limits)
    if head == "det":
        need(2)
        r, s = nums
        M = make_matrix((r, s), "generic", fld)
        return determinantal_ideal(M, min(r, s)).with_limits(limits)
    if head == "sym-det":
        need(1)
        M = make_matrix((nums[0], nums[0]), "symmetric", fld)
        return Ideal([M.matrix.det()], limits=limits)
    if head == "sym-det-cover":
        need(1)
        return quadratic_cover_ideal(fld, nums[0]).with_limits(limits)
    if head == "so-presentation":
        need(2)
        return so_presentation_ideal(fld, nums[0], nums[1], limits)
    raise ValueError(f"unknown family {head!r}; known: {', '.join(BUILTINS)}")


def quadratic_cover_ideal(fld: GroundField, n: int) -> Ideal:
    """``(u^2 - det Y)`` in ``F_p[y_ij (i<=j), u]``: the SO invariants when ``m = n``."""
    M = make_matrix((n, n), "symmetric", fld)
    vs = VarSet(M.vars.names + ("u",))
    f = M.matrix.det().embed(vs)
    u = Polynomial.variable(fld, vs, "u")
    return Ideal([u * u - f])


def so_presentation_ideal(fld: GroundField, n: int, m: int, limits: Limits = DEFAULT_LIMITS) -> Ideal:
    """Relations among Gram entries and maximal minors, by eliminating the coordinates.

    Kernel of ``F_p[y_ij, u_I] -> F_p[x]``, ``y_ij -> <x_i, x_j>``,
    ``u_I -> det X[I]``.
    """
    gens = so_generators(fld, n, m)
    ynames = [f"y{i + 1}{j + 1}" for (i, j) in gens.gram]
    unames = [f"u{label(I)}" for I in gens.u]
    target = VarSet(ynames + unames)
    big = VarSet(gens.vars.names + target.names)
    rels = []
    for (ij, g), name in zip(gens.gram.items(), ynames):
        rels.append(Polynomial.variable(fld, big, name) - g.embed(big))
    for (I, g), name in zip(gens.u.items(), unames):
        rels.append(Polynomial.variable(fld, big, name) - g.embed(big))
    order = MonomialOrder("elim", block=len(gens.vars))
    G = buchberger(Ideal(rels, big, fld, order, limits))
    k = len(gens.vars)
    kept = [g.restrict(target) for g in G.basis if not any(any(m[:k]) for m in g.terms)]
    return Ideal(kept, target, fld, limits=limits)
