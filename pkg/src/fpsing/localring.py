"""Calculus of the local ring R = (S/J)_m at the origin m = (all variables).

Local membership never builds a Mora-style local basis; everything is
decided by the colon criterion u in A*R_m  <=>  ((A+J) : u) not contained
in m, which keeps a single Groebner engine underneath.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .groebner import (
    Ideal,
    colon,
    colon_element,
    krull_dimension,
    saturate,
)
from .modules import (
    FpModule,
    local_length_or_none,
    present_subquotient,
    syzygies,
    unit_vector,
)


class AssumptionMissing(Exception):
    """Operation requires the declared origin-components assumption."""


class RetriesExhausted(Exception):
    def __init__(self, failures):
        self.failures = failures
        super().__init__(
            f"no suitable element found after {len(failures)} candidates")


class LocalRing:
    """Presentation (S, J, m) of R = (S/J) localized at the origin."""

    def __init__(self, ring, J, assumed_origin_components=False):
        if J.is_unit_ideal():
            raise ValueError("defining ideal must be proper")
        self.ring = ring
        self.J = J
        self.assumed_origin_components = assumed_origin_components
        self._sanity = None

    def maximal_ideal(self):
        return Ideal(self.ring, self.ring.gens())

    def require_origin_assumption(self):
        if not self.assumed_origin_components:
            raise AssumptionMissing(
                "operation needs assumed_origin_components=True")

    def origin_sanity_check(self):
        """Heuristic, non-fatal check that no component misses the origin:
        saturating J at m must not change the Krull dimension."""
        if self._sanity is None:
            if self.J.is_zero_ideal():
                self._sanity = True
            else:
                sat = saturate(self.J, self.maximal_ideal())
                self._sanity = (
                    krull_dimension(sat) == krull_dimension(self.J)
                )
        return self._sanity

    def __repr__(self):
        return f"LocalRing({self.ring!r} / {self.J!r})"


@dataclass
class SequenceReport:
    elements: list
    filter_regular: list = field(default_factory=list)  # verdict per prefix
    sop: bool | None = None
    d_sequence: bool | None = None
    standard: bool | None = None
    witnesses: dict = field(default_factory=dict)

    def all_filter_regular(self):
        return bool(self.filter_regular) and all(self.filter_regular)


def local_membership(u, A, L):
    """u in A*R_m, decided by ((A+J) : u) not contained in m."""
    if u.is_zero:
        return True
    C = colon_element(A + L.J, u)
    return any(g.constant_term() != 0 for g in C.groebner().elements)


def local_contains_ideal(A, B, L):
    return all(local_membership(g, A, L) for g in B.gens)


def local_equal(A, B, L):
    return local_contains_ideal(A, B, L) and local_contains_ideal(B, A, L)


def local_is_proper(A, L):
    """A*R_m != R_m, i.e. 1 is not locally in A."""
    return not local_membership(A.ring.one(), A, L)


def local_dimension(L):
    L.require_origin_assumption()
    return krull_dimension(L.J)


def _ideal_in_m(xs):
    return all(f.constant_term() == 0 for f in xs)


def is_filter_regular(xs, target):
    """Filter regular sequence check, per-prefix, on a LocalRing or FpModule.

    Ideal case criterion per step: (A : x_i) contained locally in
    (A : m^inf).  Module case: ker(x_i) on the partial quotient has finite
    length at the origin.
    """
    if isinstance(target, LocalRing):
        return _is_filter_regular_ring(xs, target)
    return _is_filter_regular_module(xs, target)


def _is_filter_regular_ring(xs, L):
    if not _ideal_in_m(xs):
        raise ValueError("sequence elements must lie in m")
    report = SequenceReport(elements=list(xs))
    ring = L.ring
    m = L.maximal_ideal()
    A = L.J
    for i, x in enumerate(xs):
        C = colon_element(A, x)
        sat = saturate(A, m)
        ok = all(local_membership(g, sat, L) for g in C.gens)
        report.filter_regular.append(ok)
        report.witnesses[f"colon_{i}"] = [str(g) for g in C.gens]
        report.witnesses[f"saturation_{i}"] = [str(g) for g in sat.gens]
        A = A + Ideal(ring, [x])
    return report


def _is_filter_regular_module(xs, M):
    if not _ideal_in_m(xs):
        raise ValueError("sequence elements must lie in m")
    report = SequenceReport(elements=list(xs))
    ring = M.ring
    rels = [list(v) for v in M.relations]
    for i, x in enumerate(xs):
        # kernel of multiplication by x on M/(x_1..x_(i-1))M
        scaled = [[x * f for f in unit_vector(ring, M.ngen, a)]
                  for a in range(M.ngen)]
        combined = scaled + rels
        syz = syzygies(combined, ring, M.ngen)
        ker_gens = [list(v[: M.ngen]) for v in syz.relations]
        K = present_subquotient(ring, M.ngen, ker_gens, rels)
        val = local_length_or_none(K)
        report.filter_regular.append(val is not None)
        report.witnesses[f"kernel_length_{i}"] = val
        rels = rels + [[x * f for f in unit_vector(ring, M.ngen, a)]
                       for a in range(M.ngen)]
    return report


def is_parameter_element(x, L):
    """True iff dim (S/(J+(x))) = dim (S/J) - 1."""
    L.require_origin_assumption()
    d = krull_dimension(L.J)
    return krull_dimension(L.J + Ideal(L.ring, [x])) == d - 1


def is_system_of_parameters(xs, L):
    L.require_origin_assumption()
    if not _ideal_in_m(xs):
        raise ValueError("sequence elements must lie in m")
    d = local_dimension(L)
    if len(xs) != d:
        return False
    big = L.J + Ideal(L.ring, list(xs))
    # the origin must be isolated in V(J + (xs)): stripping the m-primary
    # component must leave an ideal not contained in m
    sat = saturate(big, L.maximal_ideal())
    return any(g.constant_term() != 0 for g in sat.groebner().elements)


def is_d_sequence(xs, L):
    """Colon criterion (x_1..x_(i-1)) : x_i x_j = (x_1..x_(i-1)) : x_j
    for all i <= j, checked locally."""
    ring = L.ring
    for i in range(len(xs)):
        A = L.J + Ideal(ring, list(xs[:i]))
        for j in range(i, len(xs)):
            lhs = colon_element(A, xs[i] * xs[j])
            rhs = colon_element(A, xs[j])
            if not local_equal(lhs, rhs, L):
                return False
    return True


def random_linear_form(ring, rng):
    terms = {}
    n = ring.nvars
    for i in range(n):
        c = rng.randrange(ring.p)
        if c:
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
    from .ring import Polynomial

    return Polynomial(ring, terms)


def random_form(ring, rng, degree):
    if degree == 1:
        return random_linear_form(ring, rng)
    from .ring import Polynomial

    n = ring.nvars
    terms = {}
    for i in range(n):
        for j in range(i, n):
            c = rng.randrange(ring.p)
            if c:
                e = [0] * n
                e[i] += 1
                e[j] += 1
                key = tuple(e)
                terms[key] = (terms.get(key, 0) + c) % ring.p
    return Polynomial(ring, {k: v for k, v in terms.items() if v})


def random_filter_regular_sop(L, count, seed, also_on=None, retries=64):
    """Draw a verified filter-regular system of parameters.

    Candidates are random linear forms (quadratic forms are tried once the
    linear retry budget is half spent, which rescues small p).  With
    also_on, the sequence is additionally required to be filter regular on
    the supplied module.
    """
    L.require_origin_assumption()
    d = local_dimension(L)
    if count > d:
        raise RetriesExhausted(
            [f"requested {count} elements but dimension is {d}"])
    rng = random.Random(seed)
    chosen = []
    failures = []
    for i in range(count):
        found = False
        for attempt in range(retries):
            degree = 1 if attempt < retries // 2 else 2
            cand = random_form(L.ring, rng, degree)
            if cand.is_zero:
                continue
            trial = chosen + [cand]
            rep = is_filter_regular(trial, L)
            if not rep.all_filter_regular():
                failures.append(str(cand))
                continue
            if not is_parameter_element_rel(trial, L):
                failures.append(str(cand))
                continue
            if also_on is not None:
                mrep = is_filter_regular(trial, also_on)
                if not mrep.all_filter_regular():
                    failures.append(str(cand))
                    continue
            chosen.append(cand)
            found = True
            break
        if not found:
            raise RetriesExhausted(failures)
    report = SequenceReport(elements=chosen)
    rep = is_filter_regular(chosen, L)
    report.filter_regular = rep.filter_regular
    report.witnesses.update(rep.witnesses)
    if count == d:
        report.sop = is_system_of_parameters(chosen, L)
    return report


def is_parameter_element_rel(xs, L):
    """dim(J + (x_1..x_k)) = dim(J) - k: each step drops dimension."""
    d = krull_dimension(L.J)
    big = L.J + Ideal(L.ring, list(xs))
    return krull_dimension(big) == d - len(xs)


def _complete_basis(rows, n, p):
    """Extend independent row vectors to an invertible n x n matrix."""
    basis = []
    echelon = []

    def try_add(row):
        work = list(row)
        for erow in echelon:
            lead = next(i for i, x in enumerate(erow) if x)
            if work[lead]:
                f = work[lead]
                work = [(a - f * b) % p for a, b in zip(work, erow)]
        if not any(work):
            return False
        lead = next(i for i, x in enumerate(work) if x)
        inv = pow(work[lead], -1, p)
        echelon.append([(x * inv) % p for x in work])
        basis.append(list(row))
        return True

    for row in rows:
        if not try_add(row):
            raise ValueError("linear forms are dependent")
    for i in range(n):
        unit = [1 if j == i else 0 for j in range(n)]
        if len(basis) == n:
            break
        try_add(unit)
    return basis


def _invert_mod_p(M, p):
    n = len(M)
    aug = [list(M[i]) + [1 if j == i else 0 for j in range(n)]
           for i in range(n)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] % p)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c], -1, p)
        aug[c] = [(x * inv) % p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def linear_coordinate_change(L, forms):
    """Re-present L in coordinates where the given independent linear
    forms become the leading variables.

    Returns (L2, to_new, to_old): the transformed local ring (same ring
    object family, same variable names) and the two substitution maps.
    The i-th form equals the i-th variable in the new presentation.
    """
    from .ring import Polynomial

    ring = L.ring
    p = ring.p
    n = ring.nvars
    rows = []
    for f in forms:
        row = [0] * n
        for exps, c in f.terms.items():
            if sum(exps) != 1:
                raise ValueError("forms must be homogeneous linear")
            row[exps.index(1)] = c % p
        rows.append(row)
    M = _complete_basis(rows, n, p)
    Minv = _invert_mod_p(M, p)

    def linear_form(matrix, idx):
        terms = {}
        for k, c in enumerate(matrix[idx]):
            if c % p:
                e = [0] * n
                e[k] = 1
                terms[tuple(e)] = c % p
        return Polynomial(ring, terms)

    x_images = [linear_form(Minv, i) for i in range(n)]
    w_images = [linear_form(M, j) for j in range(n)]

    def to_new(f):
        return f.substitute(x_images)

    def to_old(f):
        return f.substitute(w_images)

    J2 = Ideal(ring, [to_new(g) for g in L.J.gens])
    L2 = LocalRing(
        ring, J2,
        assumed_origin_components=L.assumed_origin_components)
    return L2, to_new, to_old


def depth_and_codim_profile(L):
    """(depth, dim) of R_m via Ext duality against S.

    depth = n - max{j : Ext^j(S/J, S)_m != 0}, dim = n - min{j : ...};
    nonvanishing at m is read off the annihilator.
    """
    from .modules import annihilator, ext_module, quotient_module

    L.require_origin_assumption()
    n = L.ring.nvars
    M = quotient_module(L.J)
    nonvanishing = []
    for j in range(n + 1):
        E = ext_module(M, j)
        if E.ngen == 0 or E.is_zero_module():
            continue
        ann = annihilator(E)
        if all(g.constant_term() == 0 for g in ann.groebner().elements):
            nonvanishing.append(j)
    if not nonvanishing:
        raise ValueError("no nonvanishing Ext at the origin; is J proper?")
    depth = n - max(nonvanishing)
    dim = n - min(nonvanishing)
    assert dim == local_dimension(L), "duality dim disagrees with initial-ideal dim"
    return depth, dim
