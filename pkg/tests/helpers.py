"""Shared hypothesis strategies and small independent oracles."""

import sympy
from hypothesis import strategies as st

from frobsplit.algebra import GroundField, Polynomial, VarSet

NAMES = ("x", "y", "z", "w")


def ring(p, n):
    return GroundField(p), VarSet(NAMES[:n])


@st.composite
def polys(draw, p=3, n=2, max_exp=6, max_terms=6):
    fld, vs = ring(p, n)
    mono = st.tuples(*[st.integers(0, max_exp)] * n)
    terms = draw(st.dictionaries(mono, st.integers(0, p - 1), max_size=max_terms))
    return Polynomial(fld, vs, terms)


def to_sympy(f):
    """``f`` as a sympy Poly over GF(p), generators in VarSet order."""
    gens = sympy.symbols(list(f.vars))
    expr = sum(c * sympy.prod([g ** e for g, e in zip(gens, m)]) for m, c in f.terms.items())
    return sympy.Poly(expr if f.terms else 0, *gens, modulus=f.field.p)


def from_sympy(P, fld, vs):
    return Polynomial(fld, vs, {m: int(c) % fld.p for m, c in P.terms()})


def rank_mod(rows, p):
    """Rank of an integer matrix over F_p by plain Gaussian elimination."""
    A = [[v % p for v in r] for r in rows]
    rank, cols = 0, len(A[0]) if A else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(A)) if A[r][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], p - 2, p)
        A[rank] = [v * inv % p for v in A[rank]]
        for r in range(len(A)):
            if r != rank and A[r][c]:
                k = A[r][c]
                A[r] = [(a - k * b) % p for a, b in zip(A[r], A[rank])]
        rank += 1
    return rank
