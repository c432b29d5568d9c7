"""Exact multivariate polynomial arithmetic over prime fields F_p.

Polynomials are stored sparsely as a dict mapping exponent tuples to
nonzero coefficients in {1, ..., p-1}.  All values are immutable after
construction and every operation is pure.
"""

from __future__ import annotations

from functools import lru_cache


class DegreeCapExceeded(Exception):
    """Raised when an operation would produce a term above the ring's degree cap."""

    def __init__(self, degree, cap):
        self.degree = degree
        self.cap = cap
        super().__init__(f"total degree {degree} exceeds cap {cap}")


class ParseError(ValueError):
    """Syntax error in the polynomial grammar, with a position."""

    def __init__(self, message, pos):
        self.pos = pos
        super().__init__(f"{message} (at position {pos})")


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


MAX_VARS = 16


class Ring:
    """Descriptor for F_p[x_1, ..., x_n] with a degree cap and default order."""

    __slots__ = ("p", "variables", "degcap", "_varindex")

    def __init__(self, p, variables, degcap=256):
        if not (2 <= p <= 2**31 - 1) or not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p}")
        variables = tuple(variables)
        if len(variables) > MAX_VARS:
            raise ValueError(f"at most {MAX_VARS} variables supported")
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        self.p = p
        self.variables = variables
        self.degcap = degcap
        self._varindex = {v: i for i, v in enumerate(variables)}

    @property
    def nvars(self):
        return len(self.variables)

    def var_index(self, name):
        try:
            return self._varindex[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.p == other.p
            and self.variables == other.variables
        )

    def __hash__(self):
        return hash((self.p, self.variables))

    def __repr__(self):
        return f"F_{self.p}[{','.join(self.variables)}]"

    def extend(self, extra, degcap=None):
        """New ring with extra variables appended."""
        return Ring(self.p, self.variables + tuple(extra),
                    degcap if degcap is not None else self.degcap)

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return Polynomial(self, {(0,) * self.nvars: 1})

    def constant(self, c):
        c %= self.p
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name):
        i = self.var_index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self):
        return [self.var(v) for v in self.variables]


# ---------------------------------------------------------------------------
# Monomial orders.  Each order exposes key(exps) such that larger keys mean
# larger monomials; keys are plain tuples, comparable lexicographically.

class MonomialOrder:
    def key(self, exps):
        raise NotImplementedError


def _grevlex_key(exps):
    # larger total degree wins; ties broken so that the monomial whose
    # exponent vector has the *smaller* entry at the last differing
    # position (scanning from the right) is larger
    return (sum(exps),) + tuple(-e for e in reversed(exps))


class Grevlex(MonomialOrder):
    name = "grevlex"

    def key(self, exps):
        return _grevlex_key(exps)

    def __repr__(self):
        return "grevlex"

    def __eq__(self, other):
        return isinstance(other, Grevlex)

    def __hash__(self):
        return hash("grevlex")


class Lex(MonomialOrder):
    name = "lex"

    def key(self, exps):
        return tuple(exps)

    def __repr__(self):
        return "lex"

    def __eq__(self, other):
        return isinstance(other, Lex)

    def __hash__(self):
        return hash("lex")


class Block(MonomialOrder):
    """Elimination order: the first elim_count variables dominate.

    Each block is ordered by grevlex, so an element free of the leading
    block's variables compares purely within the tail block.
    """

    name = "block"

    def __init__(self, elim_count):
        if elim_count < 1:
            raise ValueError("elim_count must be positive")
        self.elim_count = elim_count

    def key(self, exps):
        k = self.elim_count
        return _grevlex_key(exps[:k]) + _grevlex_key(exps[k:])

    def __repr__(self):
        return f"block({self.elim_count})"

    def __eq__(self, other):
        return isinstance(other, Block) and self.elim_count == other.elim_count

    def __hash__(self):
        return hash(("block", self.elim_count))


GREVLEX = Grevlex()
LEX = Lex()


# ---------------------------------------------------------------------------

def monomial_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a, b):
    """True iff monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a, b):
    """a / b, assuming b divides a."""
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class Polynomial:
    """Element of F_p[x_1..x_n]; immutable, canonical (no zero coefficients)."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    @property
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, 0)

    def total_degree(self):
        """-1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def _check_cap(self, exps):
        d = sum(exps)
        if d > self.ring.degcap:
            raise DegreeCapExceeded(d, self.ring.degcap)

    def __add__(self, other):
        p = self.ring.p
        terms = dict(self.terms)
        for e, c in other.terms.items():
            nc = (terms.get(e, 0) + c) % p
            if nc:
                terms[e] = nc
            else:
                terms.pop(e, None)
        return Polynomial(self.ring, terms)

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        p = self.ring.p
        cap = self.ring.degcap
        terms = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = monomial_mul(ea, eb)
                nc = (terms.get(e, 0) + ca * cb) % p
                if nc:
                    terms[e] = nc
                else:
                    terms.pop(e, None)
        for e in terms:
            d = sum(e)
            if d > cap:
                raise DegreeCapExceeded(d, cap)
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def scale(self, c):
        c %= self.ring.p
        if c == 0:
            return self.ring.zero()
        if c == 1:
            return self
        p = self.ring.p
        return Polynomial(self.ring, {e: (c * k) % p for e, k in self.terms.items()})

    def mul_term(self, exps, coeff):
        """Multiply by the single term coeff * x^exps."""
        p = self.ring.p
        coeff %= p
        if coeff == 0:
            return self.ring.zero()
        cap = self.ring.degcap
        out = {}
        for e, c in self.terms.items():
            ne = monomial_mul(e, exps)
            d = sum(ne)
            if d > cap:
                raise DegreeCapExceeded(d, cap)
            out[ne] = (c * coeff) % p
        return Polynomial(self.ring, out)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def lead(self, order=GREVLEX):
        """(exponent tuple, coefficient) of the leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def monic(self, order=GREVLEX):
        if not self.terms:
            return self
        _, c = self.lead(order)
        return self.scale(pow(c, -1, self.ring.p))

    def sorted_terms(self, order=GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def frobenius(self, e=1):
        """f^(p^e) by exponent scaling (valid over the prime field)."""
        q = self.ring.p ** e
        cap = self.ring.degcap
        out = {}
        for exps, c in self.terms.items():
            ne = tuple(x * q for x in exps)
            d = sum(ne)
            if d > cap:
                raise DegreeCapExceeded(d, cap)
            out[ne] = c
        return Polynomial(self.ring, out)

    def substitute_power(self, e=1):
        """f(x_1^(p^e), ..., x_n^(p^e)); equal to frobenius(e) over F_p."""
        return self.frobenius(e)

    def substitute(self, images):
        """Evaluate at images[i] in place of the i-th variable."""
        ring = self.ring
        if len(images) != ring.nvars:
            raise ValueError("need one image per variable")
        # cache powers per variable to keep repeated exponents cheap
        powers = [{0: ring.one()} for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * images[i]
            return cache[k]

        out = ring.zero()
        for exps, c in self.terms.items():
            term = ring.constant(c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def map_to(self, ring, var_map=None):
        """Reinterpret in another ring with the same characteristic.

        var_map sends source variable index to target variable index;
        defaults to matching by name.
        """
        if var_map is None:
            var_map = [ring.var_index(v) for v in self.ring.variables]
        n = ring.nvars
        out = {}
        p = ring.p
        for exps, c in self.terms.items():
            ne = [0] * n
            for i, x in enumerate(exps):
                if x:
                    ne[var_map[i]] += x
            key = tuple(ne)
            nc = (out.get(key, 0) + c) % p
            if nc:
                out[key] = nc
            else:
                out.pop(key, None)
        return Polynomial(ring, out)

    def __repr__(self):
        return format_poly(self)

    def __str__(self):
        return format_poly(self)


# ---------------------------------------------------------------------------
# Text grammar: integers, identifiers, + - * ^ ( ); ^ binds tighter than *;
# explicit * required (no juxtaposition).

_TOKEN_KINDS = ("int", "name", "op")


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        elif ch in "+-*^()":
            tokens.append(("op", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens, ring):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val, at = self.next()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", at)

    def parse_expr(self):
        kind, val, _ = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            self.next()
            negate = val == "-"
        result = self.parse_term()
        if negate:
            result = -result
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.parse_term()
                result = result - rhs if val == "-" else result + rhs
            else:
                return result

    def parse_term(self):
        result = self.parse_factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                result = result * self.parse_factor()
            else:
                return result

    def parse_factor(self):
        base = self.parse_atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, val, at = self.next()
            if kind != "int":
                raise ParseError("expected integer exponent", at)
            base = base ** int(val)
        return base

    def parse_atom(self):
        kind, val, at = self.next()
        if kind == "int":
            return self.ring.constant(int(val))
        if kind == "name":
            try:
                return self.ring.var(val)
            except KeyError:
                raise ParseError(f"unknown variable {val!r}", at) from None
        if kind == "op" and val == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if kind == "op" and val == "-":
            return -self.parse_factor()
        raise ParseError(f"unexpected token {val!r}", at)


def parse_poly(text, ring):
    """Parse the ASCII polynomial grammar into a canonical polynomial."""
    parser = _Parser(_tokenize(text), ring)
    result = parser.parse_expr()
    kind, val, at = parser.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", at)
    return result


def format_poly(f, order=GREVLEX):
    """Canonical printing: descending terms, coefficients in 0..p-1."""
    if f.is_zero:
        return "0"
    chunks = []
    for exps, coeff in f.sorted_terms(order):
        factors = []
        for name, e in zip(f.ring.variables, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            chunks.append(str(coeff))
        elif coeff == 1:
            chunks.append("*".join(factors))
        else:
            chunks.append(f"{coeff}*" + "*".join(factors))
    return " + ".join(chunks)


def poly_pow_p(f, e):
    """f^(p^e), computed by exponent scaling; agrees with repeated products."""
    return f.frobenius(e)
