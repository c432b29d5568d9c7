"""Finitely presented modules over S = F_p[x]: module Groebner bases,
syzygies, free resolutions, Ext against S, annihilators, lengths, Koszul
cohomology, and Frobenius pushforward presentations.

A module is coker(relations -> S^ngen).  Vectors are lists of polynomials;
internally the Buchberger engine works on sparse (position, monomial)
dicts with a position-over-term order, which makes syzygy extraction a
block elimination with no extra machinery.
"""

from __future__ import annotations

import itertools
import math
from itertools import combinations

from .engine import (
    EngineStats,
    ModuleContext,
    buchberger,
    mv_lead,
    mv_reduce,
    mv_to_vector,
    vector_to_mv,
)
from .groebner import Ideal, intersect, saturate, standard_monomials
from .ring import Polynomial, monomial_divides


class NotFiniteAtOrigin(Exception):
    """The localized module at the origin does not have finite length."""


INFINITE = math.inf


class FpModule:
    """Finitely presented S-module coker(relations -> S^ngen)."""

    def __init__(self, ring, ngen, relations, labels=None):
        rels = []
        for v in relations:
            v = tuple(v)
            if len(v) != ngen:
                raise ValueError("relation vector has wrong length")
            if any(not f.is_zero for f in v):
                rels.append(v)
        self.ring = ring
        self.ngen = ngen
        self.relations = tuple(rels)
        self.labels = labels
        self._sub = None
        self._resolution = None

    def __repr__(self):
        return f"FpModule(ngen={self.ngen}, nrel={len(self.relations)})"

    def rel_submodule(self):
        if self._sub is None:
            self._sub = Submodule(self.ring, self.ngen, list(self.relations))
        return self._sub

    def is_zero_module(self):
        if self.ngen == 0:
            return True
        sub = self.rel_submodule()
        return all(sub.contains(unit_vector(self.ring, self.ngen, i))
                   for i in range(self.ngen))

    def presentation_matrix(self):
        """Relations as columns of a matrix S^k -> S^ngen."""
        return [list(v) for v in self.relations]

    def render_relations(self):
        lines = []
        for v in self.relations:
            lines.append("[" + ", ".join(str(f) for f in v) + "]")
        return "\n".join(lines)


def unit_vector(ring, rank, i):
    vec = [ring.zero()] * rank
    vec[i] = ring.one()
    return vec


def zero_vector(ring, rank):
    return [ring.zero()] * rank


def free_module(ring, rank):
    return FpModule(ring, rank, [])


def quotient_module(ideal):
    """S/A as a cyclic module."""
    return FpModule(ideal.ring, 1, [[g] for g in ideal.gens])


class Submodule:
    """Submodule of S^rank given by generating vectors, with cached bases.

    The augmented basis tracks coordinates, so the same object answers
    membership, lifting (division with quotients) and syzygies.
    """

    def __init__(self, ring, rank, vectors):
        self.ring = ring
        self.rank = rank
        self.vectors = [list(v) for v in vectors
                        if any(not f.is_zero for f in v)]
        self._gb = None
        self._aug = None
        self.stats = EngineStats()

    def gb(self):
        if self._gb is None:
            ctx = ModuleContext(self.ring, self.rank)
            self._gb, _ = buchberger(
                [vector_to_mv(v) for v in self.vectors], ctx, self.stats)
        return self._gb

    def reduce(self, vector):
        ctx = ModuleContext(self.ring, self.rank)
        r = mv_reduce(vector_to_mv(vector), self.gb(), ctx, stats=self.stats)
        return mv_to_vector(r, self.ring, self.rank)

    def contains(self, vector):
        return all(f.is_zero for f in self.reduce(vector))

    def contains_all(self, vectors):
        return all(self.contains(v) for v in vectors)

    def equals(self, other):
        return self.contains_all(other.vectors) and other.contains_all(self.vectors)

    def _augmented(self):
        # basis of {(v, c) : v = sum c_i vectors_i} in S^(rank + k)
        if self._aug is None:
            k = len(self.vectors)
            ctx = ModuleContext(self.ring, self.rank + k)
            gens = []
            for i, v in enumerate(self.vectors):
                mv = vector_to_mv(v)
                mv[(self.rank + i, (0,) * self.ring.nvars)] = 1
                gens.append(mv)
            self._aug, _ = buchberger(gens, ctx, self.stats)
        return self._aug

    def lift(self, vector):
        """Coordinates c with sum c_i * vectors_i = vector, or None."""
        k = len(self.vectors)
        ctx = ModuleContext(self.ring, self.rank + k)
        padded = vector_to_mv(list(vector))
        r = mv_reduce(padded, self._augmented(), ctx, stats=self.stats)
        vec = mv_to_vector(r, self.ring, self.rank + k)
        if any(not f.is_zero for f in vec[: self.rank]):
            return None
        return [(-f) for f in vec[self.rank:]]

    def syzygies(self):
        """Generators of {c in S^k : sum c_i * vectors_i = 0}."""
        k = len(self.vectors)
        out = []
        for el in self._augmented():
            if all(pos >= self.rank for (pos, _) in el):
                shifted = {(pos - self.rank, e): c for (pos, e), c in el.items()}
                out.append(mv_to_vector(shifted, self.ring, k))
        return out


def module_groebner(M):
    """Reduced module Groebner basis of the relation submodule of S^ngen."""
    sub = M.rel_submodule()
    return [mv_to_vector(v, M.ring, M.ngen) for v in sub.gb()]


def syzygies(vectors, ring=None, rank=None):
    """Syzygy module of a list of vectors in S^rank, as an FpModule.

    Plain polynomials are accepted and treated as vectors in S^1.
    """
    vecs = []
    for v in vectors:
        if isinstance(v, Polynomial):
            v = [v]
        vecs.append(list(v))
    if not vecs:
        return FpModule(ring, 0, [])
    if ring is None:
        ring = vecs[0][0].ring
    if rank is None:
        rank = len(vecs[0])
    sub = Submodule(ring, rank, vecs)
    k = len(sub.vectors)
    # account for dropped zero vectors: syzygies computed on nonzero ones,
    # plus a free unit syzygy per zero input vector
    keep = [i for i, v in enumerate(vecs) if any(not f.is_zero for f in v)]
    syz = sub.syzygies()
    full = []
    for s in syz:
        vec = [ring.zero()] * len(vecs)
        for j, i in enumerate(keep):
            vec[i] = s[j]
        full.append(vec)
    for i, v in enumerate(vecs):
        if all(f.is_zero for f in v):
            full.append(unit_vector(ring, len(vecs), i))
    return FpModule(ring, len(vecs), full)


class FreeResolution:
    """F_len -> ... -> F_1 -> F_0 with coker(d_1) = M."""

    def __init__(self, ranks, differentials, note=None):
        self.ranks = ranks
        self.differentials = differentials  # differentials[j] : F_(j+1) -> F_j
        self.note = note

    @property
    def length(self):
        return len(self.ranks) - 1

    def matrix(self, j):
        """d_j as list of columns (vectors in S^ranks[j-1]); j >= 1."""
        return self.differentials[j - 1]

    def verify(self):
        """d o d = 0 at every spot."""
        for j in range(1, self.length):
            d_j = self.matrix(j)
            d_next = self.matrix(j + 1)
            rank_prev = self.ranks[j - 1]
            if rank_prev == 0 or not d_j or not d_next:
                continue
            ring = d_j[0][0].ring
            for col in d_next:
                image = apply_matrix(d_j, col, ring, rank_prev)
                if any(not f.is_zero for f in image):
                    return False
        return True


def apply_matrix(matrix, vector, ring, out_rank):
    """matrix (list of columns in S^out_rank) applied to vector."""
    acc = [ring.zero()] * out_rank
    for a, coeff in enumerate(vector):
        if coeff.is_zero:
            continue
        col = matrix[a]
        acc = [x + coeff * y for x, y in zip(acc, col)]
    return acc


def transpose_matrix(matrix, ring, nrows):
    """Columns of the transpose of a matrix given as a list of columns."""
    ncols = len(matrix)
    return [[matrix[c][r] for c in range(ncols)] for r in range(nrows)]


def free_resolution(M, length):
    """Resolution by iterated syzygies; length is capped at nvars + 1."""
    note = None
    cap = M.ring.nvars + 1
    if length > cap:
        note = f"length truncated to {cap} (syzygy bound)"
        length = cap
    cached = M._resolution
    if cached is not None:
        terminated = cached.length > 0 and not cached.differentials[-1]
        if cached.length >= length:
            if cached.length == length:
                return cached
            return FreeResolution(cached.ranks[: length + 1],
                                  cached.differentials[:length], note)
        if terminated:
            return cached
    ranks = [M.ngen]
    diffs = []
    current = [list(v) for v in M.relations]
    current_rank = M.ngen
    for _ in range(length):
        ranks.append(len(current))
        diffs.append(current)
        if not current:
            break
        syz = syzygies(current, M.ring, current_rank)
        current_rank = len(current)
        current = [list(v) for v in syz.relations]
    res = FreeResolution(ranks, diffs, note)
    if M._resolution is None or res.length > M._resolution.length:
        M._resolution = res
    return res


def present_subquotient(ring, ambient_rank, ker_gens, im_gens):
    """Presentation of span(ker_gens)/span(im_gens) inside S^ambient_rank."""
    kg = [list(v) for v in ker_gens]
    if not kg:
        return FpModule(ring, 0, [])
    combined = kg + [list(v) for v in im_gens]
    syz = syzygies(combined, ring, ambient_rank)
    m = len(kg)
    rels = [list(v[:m]) for v in syz.relations]
    return FpModule(ring, m, rels)


class ExtData:
    """Ext^j(M, S) presentation plus the ambient kernel/image data needed
    to push chain maps through to cohomology."""

    def __init__(self, rank, ker_gens, im_gens, presentation):
        self.rank = rank  # ambient free rank (F_j)^*
        self.ker_gens = ker_gens
        self.im_gens = im_gens
        self.presentation = presentation


def ext_with_data(M, j):
    n = M.ring.nvars
    if not (0 <= j <= n):
        raise ValueError("Ext degree out of range")
    res = free_resolution(M, j + 1)
    ring = M.ring
    # dual complex: t_i : (F_(i-1))^* -> (F_i)^*
    rank_j = res.ranks[j] if j < len(res.ranks) else 0
    if rank_j == 0:
        return ExtData(0, [], [], FpModule(ring, 0, []))
    if j + 1 < len(res.ranks) and res.ranks[j + 1] > 0:
        # t_(j+1) sends e_b to the b-th row of d_(j+1), a vector in
        # S^(ranks[j+1]); its kernel is the syzygy module of those rows
        rows = transpose_matrix(res.matrix(j + 1), ring, rank_j)
        ker = syzygies(rows, ring, res.ranks[j + 1])
        ker_gens = [list(v) for v in ker.relations]
    else:
        ker_gens = [unit_vector(ring, rank_j, i) for i in range(rank_j)]
    if j >= 1 and res.ranks[j - 1] > 0:
        # image of t_j: rows of d_j, vectors in S^rank_j
        im_gens = transpose_matrix(res.matrix(j), ring, res.ranks[j - 1])
    else:
        im_gens = []
    pres = present_subquotient(ring, rank_j, ker_gens, im_gens)
    return ExtData(rank_j, ker_gens, im_gens, pres)


def ext_module(M, j):
    """Ext^j_S(M, S) as a finitely presented module."""
    return ext_with_data(M, j).presentation


def annihilator(M):
    """ann(M) = intersection over generators i of (relations : e_i)."""
    ring = M.ring
    if M.ngen == 0:
        return Ideal(ring, [ring.one()])
    result = None
    rels = [list(v) for v in M.relations]
    for i in range(M.ngen):
        combined = rels + [unit_vector(ring, M.ngen, i)]
        syz = syzygies(combined, ring, M.ngen)
        gens = [v[-1] for v in syz.relations]
        ideal_i = Ideal(ring, gens)
        result = ideal_i if result is None else intersect(result, ideal_i)
    return result


def length(M):
    """Exact F_p-dimension of M, or math.inf."""
    if M.ngen == 0:
        return 0
    gb = M.rel_submodule().gb()
    ctx = ModuleContext(M.ring, M.ngen)
    n = M.ring.nvars
    leads_by_pos = {i: [] for i in range(M.ngen)}
    for v in gb:
        (pos, exps), _ = mv_lead(v, ctx)
        leads_by_pos[pos].append(exps)
    total = 0
    for pos in range(M.ngen):
        leads = leads_by_pos[pos]
        if (0,) * n in leads:
            continue
        # finite at this position iff every variable has a pure-power lead
        bounds = []
        for i in range(n):
            pure = [e[i] for e in leads
                    if all(e[k] == 0 for k in range(n) if k != i)]
            if not pure:
                return INFINITE
            bounds.append(min(pure))
        count = 0
        for mono in itertools.product(*[range(b) for b in bounds]):
            if not any(monomial_divides(l, mono) for l in leads):
                count += 1
        total += count
    return total


def module_colon_maximal(ring, ambient_rank, target_gens):
    """Generators of {v in S^r : x_j * v in span(target) for all j}."""
    n = ring.nvars
    g = ambient_rank
    big = n * g
    cols = []
    # image of e_a under v -> (x_1 v ; ... ; x_n v)
    for a in range(g):
        vec = [ring.zero()] * big
        for jv in range(n):
            vec[jv * g + a] = ring.var(ring.variables[jv])
        cols.append(vec)
    # block-diagonal copies of the target submodule
    embedded = []
    for jv in range(n):
        for t in target_gens:
            vec = [ring.zero()] * big
            for a in range(g):
                vec[jv * g + a] = t[a]
            embedded.append(vec)
    syz = syzygies(cols + embedded, ring, big)
    return [list(v[:g]) for v in syz.relations]


def gamma_m_submodule(M):
    """Generators of the m-power-torsion submodule of S^ngen containing
    the relations; the quotient by the relations is Gamma_m(M)."""
    ring = M.ring
    current = Submodule(ring, M.ngen, [list(v) for v in M.relations])
    while True:
        new_gens = module_colon_maximal(ring, M.ngen, current.vectors) \
            if current.vectors else \
            module_colon_maximal(ring, M.ngen, [zero_vector(ring, M.ngen)])
        nxt = Submodule(ring, M.ngen, current.vectors + new_gens)
        if current.contains_all(nxt.vectors):
            return current
        current = nxt


def local_length_at_m(M):
    """Length of M_m at the origin; raises NotFiniteAtOrigin otherwise.

    Finiteness test: (ann(M) : m^inf) must not be contained in m.  When
    finite, M_m = Gamma_m(M), computed by iterated module colon.
    """
    ring = M.ring
    if M.ngen == 0:
        return 0
    ann = annihilator(M)
    m_ideal = Ideal(ring, ring.gens())
    sat = saturate(ann, m_ideal)
    in_m = all(g.constant_term() == 0 for g in sat.groebner().elements)
    if in_m:
        raise NotFiniteAtOrigin()
    gamma = gamma_m_submodule(M)
    torsion = present_subquotient(ring, M.ngen, gamma.vectors,
                                  [list(v) for v in M.relations])
    val = length(torsion)
    if val is INFINITE:
        raise NotFiniteAtOrigin()
    return val


def local_length_or_none(M):
    try:
        return local_length_at_m(M)
    except NotFiniteAtOrigin:
        return None


def koszul_homology_lengths(xs, M):
    """Local lengths at m of the Koszul cohomology H^i(x_1..x_s; M).

    Returns a list of s+1 entries; None marks a cohomology module whose
    localization at the origin has infinite length.
    """
    ring = M.ring
    s = len(xs)
    g = M.ngen
    if s == 0:
        return [local_length_or_none(M)]
    subsets = [list(combinations(range(s), i)) for i in range(s + 1)]
    index = [
        {T: k for k, T in enumerate(level)} for level in subsets
    ]

    def differential(i):
        """Columns of delta^i : M^C(s,i) -> M^C(s,i+1) on the free covers."""
        src = subsets[i]
        dst = subsets[i + 1]
        cols = []
        for T in src:
            for a in range(g):
                vec = [ring.zero()] * (len(dst) * g)
                for j in range(s):
                    if j in T:
                        continue
                    U = tuple(sorted(T + (j,)))
                    sign = (-1) ** sum(1 for t in T if t < j)
                    entry = xs[j] if sign == 1 else -xs[j]
                    vec[index[i + 1][U] * g + a] = entry
                cols.append(vec)
        return cols

    def block_relations(i):
        out = []
        for b in range(len(subsets[i])):
            for rel in M.relations:
                vec = [ring.zero()] * (len(subsets[i]) * g)
                for a in range(g):
                    vec[b * g + a] = rel[a]
                out.append(vec)
        return out

    results = []
    for i in range(s + 1):
        amb = len(subsets[i]) * g
        rel_i = block_relations(i)
        if i < s:
            cols = differential(i)
            rel_next = block_relations(i + 1)
            amb_next = len(subsets[i + 1]) * g
            combined = cols + rel_next
            syz = syzygies(combined, ring, amb_next)
            # the column index (T, a) coincides with the ambient position
            ker_gens = [list(v[: len(cols)]) for v in syz.relations]
        else:
            ker_gens = [unit_vector(ring, amb, k) for k in range(amb)]
        if i > 0:
            prev_cols = differential(i - 1)
            im_gens = prev_cols
        else:
            im_gens = []
        H = present_subquotient(ring, amb, ker_gens, im_gens + rel_i)
        results.append(local_length_or_none(H))
    return results


# ---------------------------------------------------------------------------
# Frobenius pushforward

PUSHFORWARD_RANK_CAP = 4096


class RankCapExceeded(Exception):
    pass


def frobenius_pushforward(Q, e=1):
    """Presentation of F^e_*(S/Q) on the monomial basis below p^e.

    Returns (module, structure_index, cokernel) where structure_index is
    the generator carrying the image of 1 under S/Q -> F^e_*(S/Q), and
    cokernel presents the quotient by that image.
    """
    ring = Q.ring
    n = ring.nvars
    q = ring.p ** e
    rank = q ** n
    if rank > PUSHFORWARD_RANK_CAP:
        raise RankCapExceeded(f"pushforward rank {rank} exceeds cap")
    basis = list(itertools.product(range(q), repeat=n))
    index = {b: i for i, b in enumerate(basis)}
    relations = []
    for g in Q.gens:
        for b in basis:
            prod = g.mul_term(b, 1)
            vec_terms = [dict() for _ in range(rank)]
            for exps, c in prod.terms.items():
                res = tuple(x % q for x in exps)
                quo = tuple(x // q for x in exps)
                pos = index[res]
                vec_terms[pos][quo] = (vec_terms[pos].get(quo, 0) + c) % ring.p
            vec = [Polynomial(ring, {k: v for k, v in t.items() if v})
                   for t in vec_terms]
            relations.append(vec)
    labels = ["*".join(f"{v}^{b[i]}" for i, v in enumerate(ring.variables)
                       if b[i]) or "1" for b in basis]
    module = FpModule(ring, rank, relations, labels=labels)
    structure_index = index[(0,) * n]
    coker_rels = list(relations) + [unit_vector(ring, rank, structure_index)]
    coker = FpModule(ring, rank, coker_rels, labels=labels)
    return module, structure_index, coker


def minimize_presentation(M):
    """Cancel generators hit by unit (constant) relation entries.

    Returns (module, genmap) where genmap[i] expresses old generator i as
    a vector over the new generators.
    """
    ring = M.ring
    p = ring.p
    zero_exp = (0,) * ring.nvars
    gens = list(range(M.ngen))
    rels = [list(v) for v in M.relations]
    genmap = [unit_vector(ring, M.ngen, i) for i in range(M.ngen)]
    active = [True] * M.ngen

    def find_unit():
        for ri, rel in enumerate(rels):
            for a in range(M.ngen):
                if not active[a]:
                    continue
                f = rel[a]
                if not f.is_zero and f.is_constant():
                    return ri, a
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        ri, a = hit
        rel = rels.pop(ri)
        c_inv = pow(rel[a].constant_term(), -1, p)
        # e_a = -c^{-1} * sum_{b != a} rel_b e_b
        subst = [(-(rel[b].scale(c_inv))) for b in range(M.ngen)]
        subst[a] = ring.zero()
        for other in rels:
            fa = other[a]
            if fa.is_zero:
                continue
            for b in range(M.ngen):
                if b == a:
                    continue
                other[b] = other[b] + fa * subst[b]
            other[a] = ring.zero()
        for gm in genmap:
            fa = gm[a]
            if fa.is_zero:
                continue
            for b in range(M.ngen):
                if b == a:
                    continue
                gm[b] = gm[b] + fa * subst[b]
            gm[a] = ring.zero()
        active[a] = False
        rels = [r for r in rels if any(not f.is_zero for f in r)]

    keep = [i for i in range(M.ngen) if active[i]]
    remap = {old: new for new, old in enumerate(keep)}
    new_rels = [[r[i] for i in keep] for r in rels]
    labels = [M.labels[i] for i in keep] if M.labels else None
    new_mod = FpModule(ring, len(keep), new_rels, labels=labels)
    new_genmap = [[gm[i] for i in keep] for gm in genmap]
    return new_mod, new_genmap
