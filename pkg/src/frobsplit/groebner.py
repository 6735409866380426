"""Ideals over F_p: Buchberger, normal forms, colon ideals, Fedder's test."""

from __future__ import annotations

import heapq
import operator
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .algebra import (
    GREVLEX,
    MonomialOrder,
    Polynomial,
    StructureError,
    VarSet,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

DEFAULT_MAX_PAIRS = 10**6
DEFAULT_MAX_BASIS = 10**4


class ResourceLimitExceeded(RuntimeError):
    """Buchberger hit a configured cap; the computation is inconclusive."""

    def __init__(self, what: str, limit: int):
        super().__init__(f"Groebner computation exceeded {what} cap of {limit}")
        self.what = what
        self.limit = limit


class DivisionFailure(ArithmeticError):
    """Exact division left a nonzero remainder (kept as a witness)."""

    def __init__(self, remainder: Polynomial):
        super().__init__(f"exact division failed, remainder {remainder}")
        self.remainder = remainder


@dataclass(frozen=True)
class Limits:
    max_pairs: int = DEFAULT_MAX_PAIRS
    max_basis: int = DEFAULT_MAX_BASIS


DEFAULT_LIMITS = Limits()


class Ideal:
    """Ideal of F_p[vars] given by generators; the Groebner basis is cached."""

    def __init__(
        self,
        generators: Sequence[Polynomial],
        vars: VarSet | None = None,
        field=None,
        order: MonomialOrder = GREVLEX,
        limits: Limits = DEFAULT_LIMITS,
    ):
        gens = list(generators)
        if gens:
            field = gens[0].field if field is None else field
            vars = gens[0].vars if vars is None else vars
        if vars is None or field is None:
            raise ValueError("zero ideal needs explicit vars and field")
        for g in gens:
            if g.vars != vars or g.field != field:
                raise StructureError("ideal generators live in different rings")
        self.field = field
        self.vars = vars
        self.order = order
        self.limits = limits
        self.generators = tuple(g for g in gens if g)

    @classmethod
    def zero(cls, field, vars, order=GREVLEX):
        return cls([], vars=vars, field=field, order=order)

    def is_zero(self) -> bool:
        return not self.generators

    def _check(self, other: Ideal):
        if other.vars != self.vars or other.field != self.field:
            raise StructureError("ideals live in different rings")

    @cached_property
    def groebner(self) -> GroebnerBasis:
        return buchberger(self, self.limits)

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.groebner)

    def contains(self, f: Polynomial) -> bool:
        if f.vars != self.vars or f.field != self.field:
            raise StructureError("polynomial and ideal live in different rings")
        return not self.normal_form(f)

    def contains_ideal(self, other: Ideal) -> bool:
        self._check(other)
        return all(self.contains(g) for g in other.generators)

    def same_as(self, other: Ideal) -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.groebner.basis)

    def __add__(self, other: Ideal) -> Ideal:
        self._check(other)
        return Ideal(self.generators + other.generators, self.vars, self.field, self.order, self.limits)

    def with_limits(self, limits: Limits) -> Ideal:
        return Ideal(self.generators, self.vars, self.field, self.order, limits)

    def to_json(self):
        return {"generators": [str(g) for g in self.generators], "order": self.order.name}

    def __repr__(self):
        return f"Ideal([{', '.join(map(str, self.generators))}])"


@dataclass(frozen=True)
class GroebnerBasis:
    basis: tuple
    order: MonomialOrder
    source: Ideal = field(repr=False, compare=False)

    @cached_property
    def leading_monomials(self) -> tuple:
        return tuple(g.leading_monomial(self.order) for g in self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)


def _reduce(f: Polynomial, basis, leads, order: MonomialOrder, full: bool = True) -> Polynomial:
    """Remainder of ``f`` on division by monic ``basis`` with leading monomials ``leads``."""
    if not f.terms or not basis:
        return f
    p = f.field.p
    key = order.key
    work = dict(f.terms)
    heap = [(_neg(key(m)), m) for m in work]
    heapq.heapify(heap)
    remainder = {}
    lead_terms = [(lm, g.terms) for lm, g in zip(leads, basis)]
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, 0)
        if not c:
            continue
        for lm, gterms in lead_terms:
            if mono_divides(lm, m):
                shift = mono_div(m, lm)
                for gm, gc in gterms.items():
                    if gm == lm:
                        continue
                    t = mono_mul(gm, shift)
                    old = work.get(t)
                    v = ((old or 0) - c * gc) % p
                    if v:
                        work[t] = v
                        if old is None:
                            heapq.heappush(heap, (_neg(key(t)), t))
                    elif old is not None:
                        del work[t]
                break
        else:
            if not full:
                remainder[m] = c
                remainder.update(work)
                break
            remainder[m] = c
    return Polynomial._raw(f.field, f.vars, remainder)


def _neg(k):
    return tuple(map(operator.neg, k))


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Fully reduced remainder of ``f`` modulo ``G``; zero iff ``f`` lies in the ideal."""
    if G.basis and (f.vars != G.basis[0].vars or f.field != G.basis[0].field):
        raise StructureError("polynomial and basis live in different rings")
    return _reduce(f, G.basis, G.leading_monomials, G.order)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    lcm = mono_lcm(mf, mg)
    inv = f.field.inv
    return f.mul_term(mono_div(lcm, mf), inv(cf)) - g.mul_term(mono_div(lcm, mg), inv(cg))


def buchberger(I: Ideal, limits: Limits | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``I`` in ``I.order``.

    Gebauer-Moeller pair elimination, normal selection strategy (smallest
    lcm first, ties by pair index).  Raises ResourceLimitExceeded when a
    cap is hit.
    """
    limits = limits or I.limits
    order = I.order
    key = order.key
    polys: list[Polynomial] = []
    leads: list[tuple] = []
    active: list[int] = []
    pairs: list = []  # heap of (key(lcm), i, j, lcm)
    processed = 0

    def update(h: int):
        nonlocal active, pairs
        lh = leads[h]
        cands = [(g, mono_lcm(lh, leads[g])) for g in active]
        kept = []
        for idx, (g, lcm) in enumerate(cands):
            if mono_coprime(lh, leads[g]):
                kept.append((g, lcm))
                continue
            others = [c for c in cands[idx + 1:]] + kept
            if not any(mono_divides(l2, lcm) for _, l2 in others):
                kept.append((g, lcm))
        new_pairs = [(g, lcm) for g, lcm in kept if not mono_coprime(lh, leads[g])]
        survivors = []
        for entry in pairs:
            _, i, j, lcm = entry
            if (
                mono_divides(lh, lcm)
                and mono_lcm(leads[i], lh) != lcm
                and mono_lcm(leads[j], lh) != lcm
            ):
                continue
            survivors.append(entry)
        for g, lcm in new_pairs:
            survivors.append((key(lcm), g, h, lcm))
        heapq.heapify(survivors)
        pairs = survivors
        active = [g for g in active if not mono_divides(lh, leads[g])] + [h]

    def add(poly: Polynomial):
        polys.append(poly)
        leads.append(poly.leading_monomial(order))
        if len(polys) > limits.max_basis:
            raise ResourceLimitExceeded("basis size", limits.max_basis)
        update(len(polys) - 1)

    gens = sorted((g.monic(order) for g in I.generators), key=lambda g: key(g.leading_monomial(order)))
    for g in gens:
        cur = [polys[i] for i in active]
        r = _reduce(g, cur, [leads[i] for i in active], order)
        if r:
            if r.is_constant():
                return _unit_basis(I, order)
            add(r.monic(order))

    while pairs:
        # smallest lcm first; heapq pops the minimum key
        _, i, j, lcm = heapq.heappop(pairs)
        processed += 1
        if processed > limits.max_pairs:
            raise ResourceLimitExceeded("pair count", limits.max_pairs)
        s = s_polynomial(polys[i], polys[j], order)
        cur = [polys[k] for k in active]
        r = _reduce(s, cur, [leads[k] for k in active], order)
        if r:
            if r.is_constant():
                return _unit_basis(I, order)
            add(r.monic(order))

    basis = [polys[i] for i in active]
    return GroebnerBasis(_interreduce(basis, order), order, I)


def _unit_basis(I: Ideal, order):
    return GroebnerBasis((Polynomial.one(I.field, I.vars),), order, I)


def _interreduce(basis: list[Polynomial], order: MonomialOrder) -> tuple:
    key = order.key
    pairs = sorted(((g, g.leading_monomial(order)) for g in basis), key=lambda t: key(t[1]))
    minimal = []
    for g, lm in pairs:
        if not any(mono_divides(h, lm) for _, h in minimal):
            minimal.append((g, lm))
    leads = [lm for _, lm in minimal]
    polys = [g for g, _ in minimal]
    reduced = []
    for i, g in enumerate(polys):
        r = _reduce(g, polys[:i] + polys[i + 1:], leads[:i] + leads[i + 1:], order)
        reduced.append(r.monic(order))
    # reduction never changes the leading monomials, so the order is kept
    return tuple(reduced)


def ideal_member(f: Polynomial, I: Ideal) -> bool:
    return I.contains(f)


def divide_exact(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    """Quotient ``f / g``; raises DivisionFailure carrying the remainder."""
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    q, r = divmod_poly(f, g, order)
    if r:
        raise DivisionFailure(r)
    return q


def divmod_poly(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX):
    lm, lc = g.leading_term(order)
    inv = f.field.inv(lc)
    p = f.field.p
    key = order.key
    work = dict(f.terms)
    heap = [(_neg(key(m)), m) for m in work]
    heapq.heapify(heap)
    quot, rem = {}, {}
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, 0)
        if not c:
            continue
        if not mono_divides(lm, m):
            rem[m] = c
            continue
        shift = mono_div(m, lm)
        qc = c * inv % p
        quot[shift] = qc
        for gm, gc in g.terms.items():
            if gm == lm:
                continue
            t = mono_mul(gm, shift)
            old = work.get(t)
            v = ((old or 0) - qc * gc) % p
            if v:
                work[t] = v
                if old is None:
                    heapq.heappush(heap, (_neg(key(t)), t))
            elif old is not None:
                del work[t]
    return Polynomial._raw(f.field, f.vars, quot), Polynomial._raw(f.field, f.vars, rem)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I ∩ J`` by eliminating ``t`` from ``t*I + (1-t)*J``."""
    I._check(J)
    if I.is_zero() or J.is_zero():
        return Ideal.zero(I.field, I.vars, I.order)
    t = I.vars.fresh_name("t")
    big = VarSet((t,) + I.vars.names)
    tv = Polynomial.variable(I.field, big, t)
    one = Polynomial.one(I.field, big)
    gens = [tv * g.embed(big) for g in I.generators] + [(one - tv) * g.embed(big) for g in J.generators]
    elim = Ideal(gens, big, I.field, MonomialOrder("elim", block=1), I.limits)
    G = buchberger(elim)
    kept = [g.restrict(I.vars) for g in G.basis if not any(m[0] for m in g.terms)]
    return Ideal(kept, I.vars, I.field, I.order, I.limits)


def colon(I: Ideal, J: Ideal) -> Ideal:
    """``(I : J)`` as the intersection of ``(I : g)`` over generators ``g`` of ``J``."""
    I._check(J)
    if J.is_zero():
        return Ideal([Polynomial.one(I.field, I.vars)], I.vars, I.field, I.order, I.limits)
    result = None
    for g in J.generators:
        principal = Ideal([g], I.vars, I.field, I.order, I.limits)
        meet = intersect(I, principal)
        quotient = Ideal([divide_exact(h, g, I.order) for h in meet.generators], I.vars, I.field, I.order, I.limits)
        result = quotient if result is None else intersect(result, quotient)
    return result


def bracket_power(I: Ideal) -> Ideal:
    return Ideal([g.frobenius() for g in I.generators], I.vars, I.field, I.order, I.limits)


def reduce_mod_bracket_maximal(f: Polynomial) -> Polynomial:
    """Normal form modulo ``m^[p]``: drop every term with an exponent >= p."""
    p = f.field.p
    return Polynomial._raw(f.field, f.vars, {m: c for m, c in f.terms.items() if all(e < p for e in m)})


@dataclass(frozen=True)
class FedderResult:
    """Outcome of Fedder's test at the origin: ``fpure``, ``not-fpure`` or ``inconclusive``."""

    status: str
    witness: Polynomial | None = None
    detail: str = ""

    @property
    def fpure(self) -> bool:
        return self.status == "fpure"


def fedder_witness(I: Ideal) -> FedderResult:
    """``A/I`` is F-pure at the origin iff ``(I^[p] : I)`` is not inside ``m^[p]``."""
    try:
        Q = colon(bracket_power(I), I)
        G = buchberger(Q)
    except ResourceLimitExceeded as exc:
        return FedderResult("inconclusive", None, str(exc))
    for c in G.basis:
        if reduce_mod_bracket_maximal(c):
            return FedderResult("fpure", c)
    return FedderResult("not-fpure", None, "every basis element of (I^[p]:I) lies in m^[p]")


def krull_dim(I: Ideal, max_vars: int = 24) -> int:
    """Dimension of ``A/I`` as the largest variable set independent modulo ``LT(I)``."""
    n = len(I.vars)
    if I.is_zero():
        return n
    G = I.groebner
    if any(g.is_constant() for g in G.basis):
        return -1
    if n > max_vars:
        raise ResourceLimitExceeded("independent-set search variables", max_vars)
    supports = []
    for lm in G.leading_monomials:
        s = frozenset(i for i, e in enumerate(lm) if e)
        if not any(t <= s for t in supports):
            supports = [t for t in supports if not s <= t] + [s]
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            chosen = set(subset)
            if not any(s <= chosen for s in supports):
                return size
    return 0
