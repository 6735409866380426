"""Sparse multivariate polynomials over a prime field F_p.

A polynomial is a map from exponent tuples to nonzero coefficients in
``0..p-1``.  Values are immutable once built; every operation returns a
new canonical polynomial.  Operations between polynomials require the
identical field and variable set -- there is no implicit alignment of
variables.
"""

from __future__ import annotations

import operator
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

MAX_EXPONENT = 2**31 - 1


class StructureError(ValueError):
    """Operands live in different rings (field or variable set mismatch)."""


class UnknownVariableError(KeyError):
    pass


class PolySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class GroundField:
    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"{self.p!r} is not prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_%d" % self.p)
        return pow(a, -1, self.p)

    def __str__(self):
        return f"F_{self.p}"


class VarSet:
    """Ordered tuple of distinct variable names; position = exponent slot."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        for name in names:
            if not isinstance(name, str) or not name:
                raise ValueError(f"invalid variable name {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(name) from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other):
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarSet({list(self.names)!r})"

    def fresh_name(self, stem: str = "t") -> str:
        """A name not already in the set."""
        if stem not in self._index:
            return stem
        i = 0
        while f"{stem}{i}" in self._index:
            i += 1
        return f"{stem}{i}"


def _grevlex_key(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


def _lex_key(e):
    return e


@dataclass(frozen=True)
class MonomialOrder:
    """Monomial order: ``grevlex``, ``lex``, or ``elim``.

    ``elim`` is a block elimination order: the first ``block`` positions
    (after ``perm``) are compared by grevlex first, ties broken by grevlex
    on the remaining positions.  Any monomial involving the block is then
    larger than every monomial free of it.

    ``key(e)`` returns a tuple that compares like the monomial.
    """

    kind: str = "grevlex"
    perm: tuple | None = None
    block: int = 0
    key: Callable = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elim" and self.block < 1:
            raise ValueError("elimination order needs block >= 1")
        if self.kind == "elim":
            k = self.block

            def base(e, k=k):
                return _grevlex_key(e[:k]) + _grevlex_key(e[k:])
        else:
            base = _lex_key if self.kind == "lex" else _grevlex_key

        if self.perm is not None:
            perm = tuple(self.perm)

            def key(e, perm=perm, base=base):
                return base(tuple(e[i] for i in perm))
        else:
            key = base
        object.__setattr__(self, "key", key)

    @property
    def name(self) -> str:
        return self.kind if self.kind != "elim" else f"elim{self.block}"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def order_from_name(name: str) -> MonomialOrder:
    if name in ("grevlex", "lex"):
        return MonomialOrder(name)
    if name.startswith("elim"):
        return MonomialOrder("elim", block=int(name[4:]))
    raise ValueError(f"unknown monomial order {name!r}")


def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(map(operator.add, a, b))


def mono_divides(a: tuple, b: tuple) -> bool:
    return all(map(operator.le, a, b))


def mono_div(b: tuple, a: tuple) -> tuple:
    return tuple(map(operator.sub, b, a))


def mono_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(map(max, a, b))


def mono_coprime(a: tuple, b: tuple) -> bool:
    return not any(x and y for x, y in zip(a, b))


class Polynomial:
    """Element of F_p[vars] in canonical sparse form.

    ``terms`` maps exponent tuples to coefficients in ``1..p-1``.  Treat
    it as read-only.
    """

    __slots__ = ("field", "vars", "terms", "_hash")

    def __init__(self, field: GroundField, vars: VarSet, terms: Mapping[tuple, int] | None = None):
        p = field.p
        n = len(vars)
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != n:
                raise StructureError(f"exponent vector {mono} has wrong length for {vars}")
            for e in mono:
                if e < 0:
                    raise ValueError(f"negative exponent in {mono}")
                if e > MAX_EXPONENT:
                    raise OverflowError(f"exponent {e} exceeds {MAX_EXPONENT}")
            c = (c + clean.get(mono, 0)) % p
            if c:
                clean[mono] = c
            else:
                clean.pop(mono, None)
        self.field = field
        self.vars = vars
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, field, vars, terms):
        # terms already canonical: reduced, nonzero, right length
        obj = cls.__new__(cls)
        obj.field = field
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    # construction helpers

    @classmethod
    def zero(cls, field, vars):
        return cls._raw(field, vars, {})

    @classmethod
    def constant(cls, field, vars, c: int):
        c %= field.p
        return cls._raw(field, vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def one(cls, field, vars):
        return cls.constant(field, vars, 1)

    @classmethod
    def variable(cls, field, vars, name: str):
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls._raw(field, vars, {tuple(e): 1})

    @classmethod
    def monomial(cls, field, vars, exps, c: int = 1):
        return cls(field, vars, {tuple(exps): c})

    def _like(self, terms):
        return Polynomial._raw(self.field, self.vars, terms)

    def _check(self, other):
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.field != self.field or other.vars != self.vars:
            raise StructureError(
                f"ring mismatch: {self.field}[{','.join(self.vars)}] vs "
                f"{other.field}[{','.join(other.vars)}]"
            )

    def _coerce(self, other):
        if isinstance(other, int):
            return Polynomial.constant(self.field, self.vars, other)
        self._check(other)
        return other

    # basic queries

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def max_exponent(self) -> int:
        return max((max(m, default=0) for m in self.terms), default=0)

    def support(self) -> list[str]:
        used = [False] * self.nvars
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return [v for v, u in zip(self.vars, used) if u]

    def coefficient(self, exps) -> int:
        return self.terms.get(tuple(exps), 0)

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        """Terms in descending order."""
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_term(self, order: MonomialOrder = GREVLEX) -> tuple[tuple, int]:
        m = self.leading_monomial(order)
        return m, self.terms[m]

    def monic(self, order: MonomialOrder = GREVLEX) -> Polynomial:
        if not self.terms:
            return self
        _, c = self.leading_term(order)
        return self.scale(self.field.inv(c))

    # arithmetic

    def __eq__(self, other):
        if isinstance(other, int):
            return self == Polynomial.constant(self.field, self.vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field == other.field and self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.p, self.vars, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        if isinstance(other, int) or isinstance(other, Polynomial):
            other = self._coerce(other)
        else:
            return NotImplemented
        p = self.field.p
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for m, c in b.items():
            s = (out.get(m, 0) + c) % p
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return self._like({m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int) or isinstance(other, Polynomial):
            other = self._coerce(other)
        else:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> Polynomial:
        p = self.field.p
        c %= p
        if c == 0:
            return self._like({})
        if c == 1:
            return self
        return self._like({m: (v * c) % p for m, v in self.terms.items()})

    def mul_term(self, mono: tuple, c: int) -> Polynomial:
        """Multiply by the single term ``c * x^mono``."""
        p = self.field.p
        c %= p
        if c == 0 or not self.terms:
            return self._like({})
        add = operator.add
        return self._like({tuple(map(add, m, mono)): (v * c) % p for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return self._like({})
        if self.max_exponent() + other.max_exponent() > MAX_EXPONENT:
            raise OverflowError("exponent overflow in product")
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        add = operator.add
        out: dict = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(map(add, ma, mb))
                out[m] = get(m, 0) + ca * cb
        p = self.field.p
        return self._like({m: c % p for m, c in out.items() if c % p})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Polynomial:
        return poly_pow(self, e)

    # char-p structure

    def frobenius(self) -> Polynomial:
        """``f^p``, computed as ``f(x_1^p, ..., x_n^p)`` (coefficients are fixed by Fermat)."""
        p = self.field.p
        if self.max_exponent() * p > MAX_EXPONENT:
            raise OverflowError("exponent overflow in Frobenius")
        return self._like({tuple(e * p for e in m): c for m, c in self.terms.items()})

    def diff(self, name: str) -> Polynomial:
        i = self.vars.index(name)
        p = self.field.p
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e == 0:
                continue
            v = (c * e) % p
            if v:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = v
        return self._like(out)

    def substitute(self, images: Mapping[str, Polynomial], target: tuple | None = None) -> Polynomial:
        """Ring-homomorphic image ``f(x -> images[x])``.

        Every variable occurring in ``self`` must be mapped.  All images
        share one ring, which is also the result's ring; pass ``target``
        as ``(field, vars)`` when ``images`` might be empty.
        """
        used = self.support()
        for v in used:
            if v not in images:
                raise UnknownVariableError(f"substitution has no image for {v!r}")
        ring = None
        for img in images.values():
            if ring is None:
                ring = (img.field, img.vars)
            elif (img.field, img.vars) != ring:
                raise StructureError("substitution images live in different rings")
        if ring is None:
            if target is None:
                if used:
                    raise UnknownVariableError("empty substitution")
                ring = (self.field, self.vars)
            else:
                ring = target
        fld, vs = ring
        result = Polynomial.zero(fld, vs)
        idx = [self.vars.index(v) for v in used]
        powers: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in powers:
                if e == 1:
                    powers[key] = images[v]
                else:
                    half = power(v, e // 2)
                    sq = half * half
                    powers[key] = sq * images[v] if e % 2 else sq
            return powers[key]

        one = Polynomial.one(fld, vs)
        for m, c in self.terms.items():
            t = one.scale(c)
            for i, v in zip(idx, used):
                if m[i]:
                    t = t * power(v, m[i])
            result = result + t
        return result

    def embed(self, vars: VarSet) -> Polynomial:
        """Same polynomial viewed in a ring whose variables include ours."""
        pos = [vars.index(v) for v in self.vars]
        n = len(vars)
        out = {}
        for m, c in self.terms.items():
            e = [0] * n
            for i, x in zip(pos, m):
                e[i] = x
            out[tuple(e)] = c
        return Polynomial._raw(self.field, vars, out)

    def restrict(self, vars: VarSet) -> Polynomial:
        """Inverse of :meth:`embed`; fails if a dropped variable occurs."""
        keep = [self.vars.index(v) for v in vars]
        dropped = [i for i in range(self.nvars) if i not in set(keep)]
        out = {}
        for m, c in self.terms.items():
            if any(m[i] for i in dropped):
                raise StructureError("polynomial involves a variable being dropped")
            out[tuple(m[i] for i in keep)] = c
        return Polynomial._raw(self.field, vars, out)

    def evaluate(self, point: Mapping[str, int]) -> int:
        p = self.field.p
        vals = [point[v] % p for v in self.vars]
        total = 0
        for m, c in self.terms.items():
            t = c
            for x, e in zip(vals, m):
                if e:
                    t = t * pow(x, e, p) % p
            total += t
        return total % p

    # printing

    def to_str(self, order: MonomialOrder = GREVLEX) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(order):
            factors = []
            for name, e in zip(self.vars, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r}, p={self.field.p}, vars={list(self.vars)})"


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def poly_pow(f: Polynomial, e: int) -> Polynomial:
    if e < 0:
        raise ValueError("negative exponent")
    result = Polynomial.one(f.field, f.vars)
    base = f
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def frobenius(f: Polynomial) -> Polynomial:
    return f.frobenius()


def substitute(f: Polynomial, images: Mapping[str, Polynomial]) -> Polynomial:
    return f.substitute(images)


def partial_derivative(f: Polynomial, name: str) -> Polynomial:
    return f.diff(name)


# parsing


class _Parser:
    def __init__(self, text, field, vars):
        self.text = text
        self.pos = 0
        self.field = field
        self.vars = vars

    def error(self, msg):
        raise PolySyntaxError(msg, self.pos)

    def skip(self):
        t = self.text
        while self.pos < len(t) and t[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self):
        # a leading sign is accepted as a convenience; printing never emits one
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        result = self.term()
        if sign < 0:
            result = -result
        while self.peek() and self.peek() in "+-":
            op = self.text[self.pos]
            self.pos += 1
            t = self.term()
            result = result + t if op == "+" else result - t
        return result

    def term(self):
        result = self.factor()
        while self.peek() == "*":
            self.pos += 1
            result = result * self.factor()
        return result

    def factor(self):
        base = self.base()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.error("expected exponent")
            e = int(self.text[start:self.pos])
            if e > MAX_EXPONENT:
                self.error("exponent too large")
            base = poly_pow(base, e)
        return base

    def base(self):
        c = self.peek()
        t = self.text
        if c.isdigit():
            start = self.pos
            while self.pos < len(t) and t[self.pos].isdigit():
                self.pos += 1
            return Polynomial.constant(self.field, self.vars, int(t[start:self.pos]))
        if c.isalpha() and c.isascii():
            start = self.pos
            while self.pos < len(t) and (t[self.pos].isascii() and (t[self.pos].isalnum() or t[self.pos] == "_")):
                self.pos += 1
            name = t[start:self.pos]
            if name not in self.vars:
                self.pos = start
                self.error(f"unknown variable {name!r}")
            return Polynomial.variable(self.field, self.vars, name)
        if c == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return inner
        self.error("unexpected end of input" if not c else f"unexpected character {c!r}")


_IDENT_START = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz")


def scan_identifiers(text: str) -> list[str]:
    """Identifiers in order of first appearance."""
    names, i = [], 0
    while i < len(text):
        if text[i] in _IDENT_START:
            j = i
            while j < len(text) and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if text[i:j] not in names:
                names.append(text[i:j])
            i = j
        elif text[i].isdigit():
            while i < len(text) and text[i].isdigit():
                i += 1
        else:
            i += 1
    return names


def parse_poly(text: str, field: GroundField | int, vars: VarSet | Iterable[str] | None = None) -> Polynomial:
    """Parse ``text``; without ``vars`` the ring uses identifiers in order of appearance."""
    if isinstance(field, int):
        field = GroundField(field)
    if vars is None:
        vars = VarSet(scan_identifiers(text))
    elif not isinstance(vars, VarSet):
        vars = VarSet(vars)
    parser = _Parser(text, field, vars)
    result = parser.expr()
    if parser.peek():
        parser.error(f"unexpected character {parser.peek()!r}")
    return result


def print_poly(f: Polynomial, order: MonomialOrder = GREVLEX) -> str:
    return f.to_str(order)


def random_polynomial(
    field: GroundField,
    vars: VarSet,
    rng: random.Random,
    max_degree: int,
    max_terms: int,
) -> Polynomial:
    """Sparse random polynomial with up to ``max_terms`` terms of degree <= ``max_degree``."""
    n = len(vars)
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        budget = rng.randint(0, max_degree)
        e = [0] * n
        for _ in range(budget):
            e[rng.randrange(n)] += 1
        terms[tuple(e)] = rng.randrange(1, field.p)
    return Polynomial(field, vars, terms)
