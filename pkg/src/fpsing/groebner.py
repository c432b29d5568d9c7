"""Ideal algebra over F_p[x]: Groebner bases, membership, colon, saturation,
intersection, elimination, Frobenius powers and preimages, dimension.
"""

from __future__ import annotations

import math
from itertools import combinations

from .engine import (
    EngineStats,
    ModuleContext,
    buchberger,
    mv_reduce,
    mv_to_poly,
    poly_to_mv,
)
from .ring import (
    Block,
    GREVLEX,
    Grevlex,
    Polynomial,
    Ring,
    monomial_div,
    monomial_divides,
)


class GroebnerBasis:
    """Reduced Groebner basis with engine statistics."""

    def __init__(self, order, elements, stats):
        self.order = order
        self.elements = elements
        self.stats = stats

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"GroebnerBasis({self.order!r}, {self.elements!r})"


class Ideal:
    """Finitely generated ideal with cached reduced Groebner bases per order."""

    def __init__(self, ring, generators):
        gens = []
        for g in generators:
            if isinstance(g, str):
                from .ring import parse_poly

                g = parse_poly(g, ring)
            if g.ring != ring:
                raise ValueError("generator lives in a different ring")
            if not g.is_zero:
                gens.append(g)
        self.ring = ring
        self.gens = tuple(gens)
        self._gb_cache = {}

    def __repr__(self):
        inner = ", ".join(str(g) for g in self.gens) or "0"
        return f"Ideal({inner})"

    def __add__(self, other):
        if other.ring != self.ring:
            raise ValueError("ideals live in different rings")
        return Ideal(self.ring, self.gens + other.gens)

    def is_zero_ideal(self):
        return not self.gens

    def groebner(self, order=GREVLEX):
        if order not in self._gb_cache:
            ctx = ModuleContext(self.ring, 1, order)
            stats = EngineStats()
            basis, _ = buchberger([poly_to_mv(g) for g in self.gens], ctx, stats)
            elements = [mv_to_poly(v, self.ring) for v in basis]
            self._gb_cache[order] = GroebnerBasis(order, elements, stats)
        return self._gb_cache[order]

    def normal_form(self, f, order=GREVLEX):
        gb = self.groebner(order)
        ctx = ModuleContext(self.ring, 1, order)
        basis = [poly_to_mv(g) for g in gb.elements]
        r = mv_reduce(poly_to_mv(f), basis, ctx)
        return mv_to_poly(r, self.ring)

    def contains(self, f, order=GREVLEX):
        return self.normal_form(f, order).is_zero

    def contains_ideal(self, other, order=GREVLEX):
        return all(self.contains(g, order) for g in other.gens)

    def equals(self, other, order=GREVLEX):
        return self.contains_ideal(other, order) and other.contains_ideal(self, order)

    def is_unit_ideal(self, order=GREVLEX):
        gb = self.groebner(order).elements
        return len(gb) == 1 and gb[0].is_constant() and not gb[0].is_zero

    def lead_exponents(self, order=GREVLEX):
        return [g.lead(order)[0] for g in self.groebner(order).elements]


def groebner(I, order=GREVLEX):
    return I.groebner(order)


def normal_form(f, I, order=GREVLEX):
    return I.normal_form(f, order)


# ---------------------------------------------------------------------------
# ideal operations

def _map_ideal(I, ring2, var_map):
    return [g.map_to(ring2, var_map) for g in I.gens]


def _div_exact(g, b):
    """Exact quotient g / b, for g in the principal ideal (b)."""
    ring = g.ring
    q = ring.zero()
    r = g
    lb, cb = b.lead()
    cb_inv = pow(cb, -1, ring.p)
    while not r.is_zero:
        lr, cr = r.lead()
        if not monomial_divides(lb, lr):
            raise ArithmeticError("division is not exact")
        mono = monomial_div(lr, lb)
        coeff = (cr * cb_inv) % ring.p
        t = Polynomial(ring, {mono: coeff})
        q = q + t
        r = r - t * b
    return q


def intersect(A, B):
    """A cap B via elimination of an auxiliary variable w."""
    if A.ring != B.ring:
        raise ValueError("ideals live in different rings")
    ring = A.ring
    if A.is_zero_ideal() or B.is_zero_ideal():
        return Ideal(ring, [])
    ring2 = Ring(ring.p, ("%w",) + ring.variables, ring.degcap)
    var_map = list(range(1, ring.nvars + 1))
    w = ring2.var("%w")
    one = ring2.one()
    gens = [w * g for g in _map_ideal(A, ring2, var_map)]
    gens += [(one - w) * g for g in _map_ideal(B, ring2, var_map)]
    elim = _eliminate_first_block(Ideal(ring2, gens), 1)
    # elements of elim are free of w (the first slot); strip it
    fixed = []
    for g in elim:
        terms = {e[1:]: c for e, c in g.terms.items()}
        fixed.append(Polynomial(ring, terms))
    return Ideal(ring, fixed)


def _eliminate_first_block(I, k):
    """Elements of a Groebner basis free of the first k variables."""
    gb = I.groebner(Block(k)).elements
    out = []
    for g in gb:
        if all(all(e[i] == 0 for i in range(k)) for e in g.terms):
            out.append(g)
    return out


def eliminate(A, names):
    """A cap F_p[variables outside `names`], returned in the same ring."""
    ring = A.ring
    names = list(names)
    for v in names:
        ring.var_index(v)
    if not names:
        return Ideal(ring, list(A.gens))
    elim_idx = [ring.var_index(v) for v in names]
    keep_idx = [i for i in range(ring.nvars) if i not in elim_idx]
    perm_vars = [ring.variables[i] for i in elim_idx] + [
        ring.variables[i] for i in keep_idx
    ]
    ring2 = Ring(ring.p, perm_vars, ring.degcap)
    var_map = [perm_vars.index(v) for v in ring.variables]
    I2 = Ideal(ring2, _map_ideal(A, ring2, var_map))
    out = _eliminate_first_block(I2, len(elim_idx))
    back = [ring.var_index(v) for v in perm_vars]
    return Ideal(ring, [g.map_to(ring, back) for g in out])


def colon_element(A, b):
    """(A : b) for a single polynomial b, via (A cap (b)) / b."""
    ring = A.ring
    if b.is_zero:
        return Ideal(ring, [ring.one()])
    if A.is_zero_ideal():
        return Ideal(ring, [])
    meet = intersect(A, Ideal(ring, [b]))
    return Ideal(ring, [_div_exact(g, b) for g in meet.gens])


def colon(A, B):
    """(A : B) = {u : u*B in A}."""
    if A.ring != B.ring:
        raise ValueError("ideals live in different rings")
    if B.is_zero_ideal():
        return Ideal(A.ring, [A.ring.one()])
    result = None
    for b in B.gens:
        c = colon_element(A, b)
        result = c if result is None else intersect(result, c)
    return result


def saturate(A, B):
    """(A : B^infinity): iterate colon until the chain stabilizes."""
    current = A
    while True:
        nxt = colon(current, B)
        if nxt.equals(current):
            return current
        current = nxt


def frobenius_power(A, e):
    """Ideal generated by g^(p^e) for each listed generator."""
    if e < 1:
        raise ValueError("e must be positive")
    return Ideal(A.ring, [g.frobenius(e) for g in A.gens])


def endo_preimage(A, e):
    """{u : u^(p^e) in A}, the Frobenius preimage.

    Computed by elimination: in S[y], eliminate the x-variables from
    A*S[y] + (y_i - x_i^(p^e)), then rename y_i -> x_i.  Over the prime
    field u^(p^e) is the substitution x_i -> x_i^(p^e) applied to u, which
    is what makes this a ring-endomorphism preimage.
    """
    if e < 1:
        raise ValueError("e must be positive")
    ring = A.ring
    n = ring.nvars
    q = ring.p ** e
    aux = tuple("%y" + v for v in ring.variables)
    ring2 = Ring(ring.p, ring.variables + aux, ring.degcap)
    var_map = list(range(n))
    gens = _map_ideal(A, ring2, var_map)
    for i in range(n):
        xi = ring2.var(ring.variables[i])
        yi = ring2.var(aux[i])
        gens.append(yi - xi**q)
    I2 = Ideal(ring2, gens)
    out = _eliminate_first_block(I2, n)
    # elements of `out` only involve the y-block; rename back to x
    back = [0] * (2 * n)
    for i in range(n):
        back[i] = i
        back[n + i] = i
    return Ideal(ring, [g.map_to(ring, back) for g in out])


def krull_dimension(A):
    """Krull dimension of S/A (-1 for the unit ideal).

    Uses the initial ideal: dim = max size of a variable subset U such
    that no leading monomial is supported inside U.
    """
    if A.is_unit_ideal():
        return -1
    n = A.ring.nvars
    supports = set()
    for exps in A.lead_exponents():
        supports.add(frozenset(i for i, x in enumerate(exps) if x))
    if frozenset() in supports:  # constant lead, unit ideal (caught above)
        return -1
    for size in range(n, -1, -1):
        for combo in combinations(range(n), size):
            u = set(combo)
            if not any(s <= u for s in supports):
                return size
    return 0


def standard_monomials(A):
    """All monomials of S outside the initial ideal; requires dim 0."""
    if A.is_unit_ideal():
        return []
    if krull_dimension(A) > 0:
        raise ValueError("quotient is not finite dimensional")
    n = A.ring.nvars
    leads = A.lead_exponents()
    bounds = []
    for i in range(n):
        pure = [e[i] for e in leads if all(e[j] == 0 for j in range(n) if j != i)]
        bounds.append(min(pure))
    out = []

    def rec(i, current):
        if any(monomial_divides(l, current + (0,) * (n - i)) for l in leads):
            return
        if i == n:
            out.append(current)
            return
        for x in range(bounds[i]):
            rec(i + 1, current + (x,))

    rec(0, ())
    return out


def vs_dimension(A):
    """F_p-dimension of S/A; math.inf when positive-dimensional."""
    if A.is_unit_ideal():
        return 0
    if krull_dimension(A) > 0:
        return math.inf
    return len(standard_monomials(A))
