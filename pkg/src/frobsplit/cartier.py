"""p^-1-linear maps on F_p[x] represented as ``g -> T(c*g)``.

``T`` is the dual trace: it keeps exactly the monomials whose exponents
are all congruent to ``p-1`` mod ``p`` and sends ``x^a`` to
``x^((a-(p-1))/p)``.  Note the shift by ``x^(p-1,...,p-1)`` compared with
the other common convention that keeps monomials with exponents
divisible by ``p``; with this convention every p^-1-linear map is
``T(c*-)`` for a unique premultiplier ``c``, and Fedder witnesses plug
in directly as premultipliers.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass

from .algebra import GREVLEX, Polynomial
from .groebner import Ideal, bracket_power, colon


def dual_trace(f: Polynomial) -> Polynomial:
    p = f.field.p
    q = p - 1
    out = {}
    for m, c in f.terms.items():
        if all(e % p == q for e in m):
            out[tuple((e - q) // p for e in m)] = c
    return Polynomial._raw(f.field, f.vars, out)


def trace_of_product(c: Polynomial, g: Polynomial) -> Polynomial:
    """``T(c*g)`` without materialising the full product."""
    c._check(g)
    p = c.field.p
    q = p - 1
    add = operator.add
    # bucket the premultiplier by residues so each term of g meets only
    # the terms of c that complete it to the residue class (p-1,...,p-1)
    buckets: dict = {}
    for m, v in c.terms.items():
        buckets.setdefault(tuple(e % p for e in m), []).append((m, v))
    out: dict = {}
    for mg, vg in g.terms.items():
        need = tuple((q - e) % p for e in mg)
        for mc, vc in buckets.get(need, ()):
            m = tuple((x - q) // p for x in map(add, mc, mg))
            out[m] = out.get(m, 0) + vc * vg
    return Polynomial._raw(c.field, c.vars, {m: v % p for m, v in out.items() if v % p})


@dataclass(frozen=True)
class FrobeniusDecomposition:
    """``g = sum_a components[a]^p * x^a`` over residues ``a`` in ``[0, p-1]^n``."""

    base: Polynomial
    components: dict

    def component(self, a) -> Polynomial:
        return self.components.get(tuple(a), Polynomial.zero(self.base.field, self.base.vars))

    def reassemble(self) -> Polynomial:
        f = self.base
        total = Polynomial.zero(f.field, f.vars)
        for a, g in self.components.items():
            total = total + g.frobenius().mul_term(a, 1)
        return total


def frobenius_decompose(g: Polynomial) -> FrobeniusDecomposition:
    p = g.field.p
    parts: dict = {}
    for m, c in g.terms.items():
        a = tuple(e % p for e in m)
        parts.setdefault(a, {})[tuple(e // p for e in m)] = c
    comps = {a: Polynomial._raw(g.field, g.vars, t) for a, t in sorted(parts.items())}
    return FrobeniusDecomposition(g, comps)


@dataclass(frozen=True)
class SplittingCandidate:
    """The map ``phi(g) = T(c*g)``, considered on ``A/ideal``."""

    c: Polynomial
    ideal: Ideal
    normalized: bool = False

    @classmethod
    def on_polynomial_ring(cls, c: Polynomial, normalized: bool = False):
        return cls(c, Ideal.zero(c.field, c.vars), normalized)

    @property
    def field(self):
        return self.c.field

    @property
    def vars(self):
        return self.c.vars

    @property
    def p(self) -> int:
        return self.c.field.p

    def __call__(self, g: Polynomial) -> Polynomial:
        return apply_phi(self, g)

    def to_json(self):
        return {
            "p": self.p,
            "vars": list(self.vars),
            "c": str(self.c),
            "ideal": [str(g) for g in self.ideal.generators],
            "normalized": self.normalized,
        }


def apply_phi(phi: SplittingCandidate, g: Polynomial) -> Polynomial:
    return trace_of_product(phi.c, g)


@dataclass(frozen=True)
class SplitCheck:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def in_frobenius_colon(c: Polynomial, I: Ideal) -> bool:
    """``c in (I^[p] : I)``, the condition for ``T(c*-)`` to preserve ``I``."""
    if I.is_zero():
        return True
    return colon(bracket_power(I), I).contains(c)


def is_splitting(phi: SplittingCandidate) -> SplitCheck:
    one = phi.ideal.normal_form(dual_trace(phi.c) - 1)
    if one:
        value = phi.ideal.normal_form(dual_trace(phi.c))
        return SplitCheck(False, f"φ(1)={value}")
    if not in_frobenius_colon(phi.c, phi.ideal):
        return SplitCheck(False, "premultiplier not in (I^[p] : I); φ does not descend to A/I")
    return SplitCheck(True, "φ(1)=1 and c in (I^[p] : I)")


def compatibly_splits(phi: SplittingCandidate, J: Ideal) -> bool:
    """True iff ``c`` lies in ``((I+J)^[p] : (I+J))``, i.e. ``phi(I+J)`` stays in ``I+J``."""
    return in_frobenius_colon(phi.c, phi.ideal + J)


class NormalizerNotFound(LookupError):
    """F-pure witness found, normalized splitting element not located."""


@dataclass(frozen=True)
class Normalization:
    candidate: SplittingCandidate
    multiplier: Polynomial
    scalar: int


def normalize(c: Polynomial, I: Ideal) -> Normalization:
    """Find a monomial ``mu`` (exponents <= p-1) and unit ``lam`` with ``T(mu*c) = lam`` mod ``I``.

    Multipliers are tried by increasing degree, ties in descending
    grevlex.  ``T(mu*c)`` vanishes unless some term of ``c`` has exponents
    congruent to ``(p-1) - mu``, so only those boxes are evaluated; every
    other box of ``[0, p-1]^n`` gives zero and cannot be a unit modulo a
    proper ideal.
    """
    p = c.field.p
    n = c.nvars
    if all(any(e >= p for e in m) for m in c.terms):
        raise ValueError("premultiplier lies in m^[p]; no monomial multiple can be normalized")
    boxes = {tuple((p - 1 - e) % p for e in m) for m in c.terms}
    ordered = sorted(boxes, key=lambda mu: (sum(mu), tuple(-k for k in GREVLEX.key(mu))))
    for mu in ordered:
        value = I.normal_form(dual_trace(c.mul_term(mu, 1)))
        if value.is_constant() and value:
            lam = value.constant_term()
            mono = Polynomial.monomial(c.field, c.vars, mu)
            cand = SplittingCandidate(c.mul_term(mu, c.field.inv(lam)), I, True)
            return Normalization(cand, mono, lam)
    raise NormalizerNotFound(
        f"F-pure witness found, normalized splitting element not located in [0,{p - 1}]^{n}"
    )


def standard_splitting(field, vars) -> SplittingCandidate:
    """``T((x_1...x_n)^(p-1) * -)``, the coordinate splitting of the polynomial ring."""
    c = Polynomial.monomial(field, vars, (field.p - 1,) * len(vars))
    return SplittingCandidate.on_polynomial_ring(c, True)
