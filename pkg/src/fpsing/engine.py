"""Shared Buchberger engine for submodules of free modules S^r over F_p[x].

Elements are sparse dicts mapping (position, exponent-tuple) to nonzero
coefficients.  Ideals are the rank-1 case.  The module order is
position-over-term (position 0 highest), with a configurable term order;
position-over-term makes the syzygy/elimination tricks in modules.py work
with no extra machinery.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field

from .ring import (
    DegreeCapExceeded,
    GREVLEX,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)


@dataclass
class EngineStats:
    spairs: int = 0
    reductions: int = 0
    maxdeg: int = 0

    def merge(self, other):
        self.spairs += other.spairs
        self.reductions += other.reductions
        self.maxdeg = max(self.maxdeg, other.maxdeg)

    def as_dict(self):
        return {"spairs": self.spairs, "reductions": self.reductions,
                "maxdeg": self.maxdeg}


class WorkCapExceeded(Exception):
    """A computation exceeded the active reduction-step budget."""


_work = {"limit": None, "done": 0}


@contextmanager
def work_budget(limit):
    """Deterministically bound the reduction steps run inside the block.

    Analogous to the degree cap: callers that can tolerate partial
    results catch WorkCapExceeded and fall back or skip.  Budgets do not
    nest additively; the innermost active budget wins.
    """
    prev = dict(_work)
    _work["limit"] = limit
    _work["done"] = 0
    try:
        yield
    finally:
        _work["limit"] = prev["limit"]
        _work["done"] = prev["done"]


def _charge_work():
    if _work["limit"] is not None:
        _work["done"] += 1
        if _work["done"] > _work["limit"]:
            raise WorkCapExceeded(_work["done"])


class ModuleContext:
    """Ring + rank + term order; provides the position-over-term key."""

    def __init__(self, ring, rank, term_order=GREVLEX):
        self.ring = ring
        self.rank = rank
        self.term_order = term_order

    def key(self, mono):
        pos, exps = mono
        return (-pos,) + tuple(self.term_order.key(exps))


def mv_is_zero(v):
    return not v


def mv_lead(v, ctx):
    mono = max(v, key=ctx.key)
    return mono, v[mono]


def mv_add_scaled(v, w, coeff, mult, p, cap):
    """v + coeff * x^mult * w (positions preserved); returns a new dict."""
    out = dict(v)
    for (pos, exps), c in w.items():
        ne = monomial_mul(exps, mult)
        d = sum(ne)
        if d > cap:
            raise DegreeCapExceeded(d, cap)
        key = (pos, ne)
        nc = (out.get(key, 0) + coeff * c) % p
        if nc:
            out[key] = nc
        else:
            out.pop(key, None)
    return out


def mv_scale(v, coeff, p):
    coeff %= p
    if coeff == 0:
        return {}
    if coeff == 1:
        return dict(v)
    return {m: (c * coeff) % p for m, c in v.items()}


def mv_monic(v, ctx):
    if not v:
        return v
    _, c = mv_lead(v, ctx)
    return mv_scale(v, pow(c, -1, ctx.ring.p), ctx.ring.p)


def mv_maxdeg(v):
    return max((sum(e) for (_, e) in v), default=-1)


class _LeadIndex:
    """Per-position list of (lead exponents, basis index) for divisor lookup."""

    def __init__(self):
        self.by_pos = {}

    def add(self, idx, mono):
        pos, exps = mono
        self.by_pos.setdefault(pos, []).append((exps, idx))

    def find_divisor(self, mono, skip=None):
        pos, exps = mono
        for lexps, idx in self.by_pos.get(pos, ()):
            if idx != skip and monomial_divides(lexps, exps):
                return idx
        return None

    def rebuild(self, basis, ctx):
        self.by_pos = {}
        for i, g in enumerate(basis):
            if g:
                self.add(i, mv_lead(g, ctx)[0])


def mv_reduce(v, basis, ctx, index=None, stats=None, tail=True, skip=None):
    """Normal form of v against basis (list of monic elements).

    With tail=False only the leading term is guaranteed irreducible.
    """
    p = ctx.ring.p
    cap = ctx.ring.degcap
    if index is None:
        index = _LeadIndex()
        index.rebuild(basis, ctx)
    v = dict(v)
    result = {}
    key = ctx.key
    while v:
        mono = max(v, key=key)
        coeff = v[mono]
        idx = index.find_divisor(mono, skip=skip)
        if idx is None:
            result[mono] = coeff
            del v[mono]
            if not tail:
                result.update(v)
                return result
            continue
        g = basis[idx]
        gmono, _ = mv_lead(g, ctx)
        mult = monomial_div(mono[1], gmono[1])
        _charge_work()
        v = mv_add_scaled(v, g, p - coeff, mult, p, cap)
        if stats is not None:
            stats.reductions += 1
            stats.maxdeg = max(stats.maxdeg, mv_maxdeg(v))
    return result


def _spoly(f, g, ctx):
    p = ctx.ring.p
    cap = ctx.ring.degcap
    (posf, ef), cf = mv_lead(f, ctx)
    (posg, eg), cg = mv_lead(g, ctx)
    assert posf == posg
    l = monomial_lcm(ef, eg)
    d = sum(l)
    if d > cap:
        raise DegreeCapExceeded(d, cap)
    mf = monomial_div(l, ef)
    mg = monomial_div(l, eg)
    # cf, cg are 1 because the basis is kept monic
    s = mv_add_scaled({}, f, 1, mf, p, cap)
    s = mv_add_scaled(s, g, p - 1, mg, p, cap)
    return s


def buchberger(gens, ctx, stats=None):
    """Reduced, monic, interreduced Groebner basis; deterministic.

    Pair selection is degree-first with a lexicographic tie-break on the
    leading-term pair, and Gebauer-Moeller pruning keeps the queue small.
    """
    if stats is None:
        stats = EngineStats()
    p = ctx.ring.p
    key = ctx.key

    basis = []
    index = _LeadIndex()
    leads = []  # lead monomials, parallel to basis
    pairs = []  # list of (sortkey, i, j, lcm_exps)

    def pair_entry(i, j):
        (pi, ei) = leads[i]
        (pj, ej) = leads[j]
        if pi != pj:
            return None
        l = monomial_lcm(ei, ej)
        return ((sum(l), key((pi, l)), i, j), i, j, l)

    def update(h):
        # Gebauer-Moeller update with the new element h
        nonlocal pairs
        h = mv_monic(h, ctx)
        t = len(basis)
        lead_h = mv_lead(h, ctx)[0]
        ph, eh = lead_h
        new_pairs = []
        for i in range(t):
            if leads[i] is None or leads[i][0] != ph:
                continue
            l = monomial_lcm(leads[i][1], eh)
            new_pairs.append((i, l))
        # criterion M: drop (i, t) if lcm(j, t) strictly divides lcm(i, t)
        kept = []
        for i, l in new_pairs:
            redundant = False
            for j, l2 in new_pairs:
                if j == i or not monomial_divides(l2, l):
                    continue
                if l2 != l:
                    redundant = True
                    break
            if not redundant:
                kept.append((i, l))
        # criterion F: one pair per distinct lcm
        seen = {}
        for i, l in kept:
            if l not in seen:
                seen[l] = i
        kept = sorted((i, l) for l, i in seen.items())
        # product criterion (rank-1 only: not valid for module elements)
        if ctx.rank == 1:
            kept = [
                (i, l)
                for i, l in kept
                if l != monomial_mul(leads[i][1], eh)
            ]
        # criterion B on old pairs
        surviving = []
        for entry in pairs:
            _, i, j, l = entry
            if (
                leads[i] is not None and leads[j] is not None
                and leads[i][0] == ph
                and monomial_divides(eh, l)
                and monomial_lcm(leads[i][1], eh) != l
                and monomial_lcm(leads[j][1], eh) != l
            ):
                continue
            surviving.append(entry)
        pairs = surviving
        basis.append(h)
        leads.append(lead_h)
        index.add(t, lead_h)
        for i, l in kept:
            pairs.append(((sum(l), key((ph, l)), i, t), i, t, l))

    initial = [g for g in gens if g]
    initial.sort(key=lambda g: key(mv_lead(g, ctx)[0]))
    for g in initial:
        r = mv_reduce(g, basis, ctx, index=index, stats=stats, tail=False)
        if r:
            update(r)

    while pairs:
        pairs.sort(key=lambda e: e[0])
        _, i, j, _ = pairs.pop(0)
        if leads[i] is None or leads[j] is None:
            continue
        stats.spairs += 1
        s = _spoly(basis[i], basis[j], ctx)
        r = mv_reduce(s, basis, ctx, index=index, stats=stats, tail=False)
        if r:
            update(r)

    # interreduce: drop elements whose lead is divisible by another lead,
    # then tail-reduce every survivor
    alive = []
    for i, g in enumerate(basis):
        if index.find_divisor(leads[i], skip=i) is None:
            alive.append(g)
    ctx2_index = _LeadIndex()
    ctx2_index.rebuild(alive, ctx)
    reduced = []
    for i, g in enumerate(alive):
        r = mv_reduce(g, alive, ctx, index=ctx2_index, stats=stats,
                      tail=True, skip=i)
        reduced.append(mv_monic(r, ctx))
    reduced = [g for g in reduced if g]
    reduced.sort(key=lambda g: key(mv_lead(g, ctx)[0]))
    return reduced, stats


def poly_to_mv(f, pos=0):
    return {(pos, e): c for e, c in f.terms.items()}


def mv_to_poly(v, ring, pos=0):
    from .ring import Polynomial

    terms = {}
    for (q, e), c in v.items():
        if q != pos:
            raise ValueError("vector has entries outside the requested position")
        terms[e] = c
    return Polynomial(ring, terms)


def mv_component(v, pos, ring):
    from .ring import Polynomial

    return Polynomial(ring, {e: c for (q, e), c in v.items() if q == pos})


def vector_to_mv(vec):
    """List of polynomials (one per position) -> sparse module element."""
    out = {}
    for pos, f in enumerate(vec):
        for e, c in f.terms.items():
            out[(pos, e)] = c
    return out


def mv_to_vector(v, ring, rank):
    return [mv_component(v, pos, ring) for pos in range(rank)]
