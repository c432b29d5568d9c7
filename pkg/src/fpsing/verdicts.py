"""Singularity-level verdicts: cohomology profiles, F-injectivity by local
duality and by ideal-theoretic evidence, standard sequences, Buchsbaum
evidence, and the parameter-F-closed sampler.

The duality route is the arbiter of record: it computes, for each degree,
the cokernel of the map on Ext induced by the Frobenius structure map
S/J -> F_*(S/J), and asks whether it vanishes after localizing at the
origin.  The ideal route cross-validates with Frobenius-vs-limit closure
containments on sampled filter regular sequences; a single violation is a
complete refutation, absence of violations is only evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .closure import frobenius_closure, is_frobenius_closed, limit_closure
from .engine import WorkCapExceeded, work_budget
from .groebner import Ideal, colon_element, endo_preimage, frobenius_power
from .ring import DegreeCapExceeded
from .localring import (
    LocalRing,
    depth_and_codim_profile,
    is_filter_regular,
    is_system_of_parameters,
    linear_coordinate_change,
    local_dimension,
    local_equal,
    local_membership,
    random_filter_regular_sop,
)
from .modules import (
    FpModule,
    Submodule,
    annihilator,
    ext_with_data,
    free_resolution,
    frobenius_pushforward,
    local_length_or_none,
    minimize_presentation,
    present_subquotient,
    quotient_module,
)


class NotReduced(Exception):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"ring is not reduced; witness {witness}")


@dataclass
class CohomologyProfile:
    dim: int
    depth: int
    lengths: list  # per i < dim: int, or None for not-finite
    f_m: float  # int or math.inf
    is_gcm: bool
    top_never_finite: bool = True

    def as_dict(self):
        return {
            "dim": self.dim,
            "depth": self.depth,
            "lengths": [x if x is not None else "NotFinite"
                        for x in self.lengths],
            "f_m": "inf" if self.f_m == math.inf else self.f_m,
            "is_gcm": self.is_gcm,
        }


@dataclass
class FInjectivityVerdict:
    method: str
    verdict: str  # yes | no | indeterminate
    obstructions: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # (sample, t, n) over budget

    def as_dict(self):
        return {
            "method": self.method,
            "verdict": self.verdict,
            "obstructions": {
                str(i): {"annihilator": [str(g) for g in ann.gens],
                         "vanishes_at_origin": not in_m}
                for i, (ann, in_m) in self.obstructions.items()
            },
            "violations": [
                {"sequence": [str(x) for x in seq], "t": t, "n": n,
                 "witness": str(w)}
                for seq, t, n, w in self.violations
            ],
            "skipped": [list(cell) for cell in self.skipped],
        }


def cohomology_profile(L):
    """Lengths of H^i_m(R) for i < dim via Ext duality, finiteness
    dimension, and the generalized Cohen-Macaulay flag."""
    L.require_origin_assumption()
    n = L.ring.nvars
    depth, dim = depth_and_codim_profile(L)
    M = quotient_module(L.J)
    lengths = []
    for i in range(dim):
        E = ext_with_data(M, n - i).presentation
        lengths.append(local_length_or_none(E))
    finite_below = [i for i, v in enumerate(lengths) if v is None]
    if dim == 0:
        f_m = math.inf  # zero-dimensional convention
    elif finite_below:
        f_m = finite_below[0]
    else:
        f_m = dim
    is_gcm = all(v is not None for v in lengths)
    return CohomologyProfile(dim=dim, depth=depth, lengths=lengths,
                             f_m=f_m, is_gcm=is_gcm)


def reducedness_screen(L, e_max=2):
    """('reduced'|'not_reduced', witness): sound when not reduced; the
    reduced verdict is heuristic (bounded Frobenius preimages)."""
    for e in range(1, e_max + 1):
        P = endo_preimage(L.J, e)
        for u in P.gens:
            if not local_membership(u, L.J, L):
                return "not_reduced", u
    return "reduced", None


def _lift_chain_map(res_src, res_dst, phi0_columns, ring, depth):
    """Lift a map of modules through two resolutions up to the given depth.

    phi0_columns: columns of phi_0 : F_0(src) -> F_0(dst).  Returns a list
    of matrices [phi_0, ..., phi_depth]; commutation with differentials is
    enforced by the lifting itself.
    """
    phis = [phi0_columns]
    for k in range(1, depth + 1):
        if k >= len(res_src.ranks) or res_src.ranks[k] == 0:
            phis.append([])
            continue
        dcols_dst = res_dst.matrix(k) if k < len(res_dst.ranks) else []
        sub = Submodule(ring, res_dst.ranks[k - 1], dcols_dst)
        cols = []
        prev = phis[k - 1]
        for col in res_src.matrix(k):
            # image of the source basis vector in F_(k-1)(dst)
            target = [ring.zero()] * res_dst.ranks[k - 1]
            for a, coeff in enumerate(col):
                if coeff.is_zero:
                    continue
                pcol = prev[a]
                target = [x + coeff * y for x, y in zip(target, pcol)]
            coords = sub.lift(target)
            if coords is None:
                raise AssertionError("chain map lift failed: resolution "
                                     "not exact where required")
            cols.append(coords)
        phis.append(cols)
    return phis


def f_injective_duality(L):
    """F-injectivity at the origin by the Ext-cokernel criterion."""
    L.require_origin_assumption()
    verdict_reduced, wit = reducedness_screen(L)
    if verdict_reduced == "not_reduced":
        raise NotReduced(wit)
    ring = L.ring
    n = ring.nvars
    dim = local_dimension(L)
    F_raw, structure_index, _ = frobenius_pushforward(L.J, 1)
    F_min, genmap = minimize_presentation(F_raw)
    s0 = genmap[structure_index]
    M_R = quotient_module(L.J)
    res_R = free_resolution(M_R, n + 1)
    res_F = free_resolution(F_min, n + 1)
    phis = _lift_chain_map(res_R, res_F, [s0], ring, n)
    obstructions = {}
    verdict = "yes"
    for i in range(dim + 1):
        j = n - i
        if j < 0:
            continue
        extF = ext_with_data(F_min, j)
        extR = ext_with_data(M_R, j)
        C = _ext_cokernel(extF, extR, phis, j, ring, res_R, res_F)
        ann = annihilator(C)
        in_m = all(g.constant_term() == 0
                   for g in ann.groebner().elements)
        obstructions[i] = (ann, in_m)
        if in_m:
            verdict = "no"
    return FInjectivityVerdict(method="duality", verdict=verdict,
                               obstructions=obstructions)


def _ext_cokernel(extF, extR, phis, j, ring, res_R, res_F):
    """coker(Ext^j(F,S) -> Ext^j(R,S)) induced by the chain map."""
    if extR.rank == 0:
        return FpModule(ring, 0, [])
    if extF.rank == 0 or j >= len(phis) or not phis[j]:
        return extR.presentation
    # dual of phi_j sends a functional on F_j(dst) to one on F_j(src):
    # w in S^rank(extF) -> phi_j^T w, with (phi_j^T w)_b = sum_u phi_j[b][u] w_u
    phi_j = phis[j]  # columns: source basis b -> vector over dst basis
    rels = [list(v) for v in extR.presentation.relations]
    m = extR.presentation.ngen
    lifter = Submodule(ring, extR.rank,
                       [list(v) for v in extR.ker_gens] +
                       [list(v) for v in extR.im_gens])
    for w in extF.ker_gens:
        image = []
        for b in range(extR.rank):
            col = phi_j[b]
            acc = ring.zero()
            for u, wu in enumerate(w):
                if not wu.is_zero and u < len(col):
                    acc = acc + col[u] * wu
            image.append(acc)
        coords = lifter.lift(image)
        if coords is None:
            raise AssertionError("induced Ext class fell outside the "
                                 "kernel; chain map is inconsistent")
        rels.append(list(coords[:m]))
    return FpModule(ring, m, rels)


def _powered_limit_under_approx(prefix, n, L, m_max, window):
    """Stable value of the ascending chain ((x^(n+m)) + J : (x_1..x_t)^m).

    This chain is cofinal with the defining chain of the limit closure of
    (x_1^n, .., x_t^n), but its degrees grow by one per step instead of by
    n, so it is the right form for repeated evidence queries.  Every term
    lies inside the true limit closure, so the result is a sound
    under-approximation.
    """
    ring = L.ring
    prod = ring.one()
    for x in prefix:
        prod = prod * x
    chain = []
    stabilized = False
    for m in range(1, m_max + 1):
        A = L.J + Ideal(ring, [x ** (n + m) for x in prefix])
        chain.append(colon_element(A, prod ** m))
        if len(chain) > window:
            idx = len(chain) - window - 1

            def agrees(k):
                later = chain[idx + k + 1]
                # ascending chain: global containment settles equality
                # cheaply; fall back to the local test only when it fails
                if all(chain[idx].contains(g) for g in later.gens):
                    return True
                return local_equal(chain[idx], later, L)

            if all(agrees(k) for k in range(window)):
                stabilized = True
                break
    return chain[-1], stabilized


# Reduction-step budget per evidence cell (one (sample, t, n) limit chain
# or one Frobenius preimage depth).  Deterministic analogue of a timeout:
# cells that exceed it are recorded as skipped, never guessed.
_EVIDENCE_CELL_BUDGET = 4_000


def f_injective_ideal_evidence(L, samples=8, n_max=6, seed=0, e_max=4,
                               window=2):
    """Sample filter regular s.o.p.s and test (x^[n])^F inside (x^[n])^lim.

    A violation refutes F-injectivity outright; a clean run is only
    indeterminate-positive evidence.  Both closures are sound
    under-approximations: the Frobenius side goes one preimage depth at a
    time (any element found is a genuine closure member) and the limit
    side uses the cofinal low-degree chain above.  Each cell runs under a
    fixed reduction-step budget; over-budget cells are listed in
    `skipped`, and a violation is only ever claimed from a fully
    completed cell with a stabilized limit chain.
    """
    L.require_origin_assumption()
    verdict_reduced, wit = reducedness_screen(L)
    if verdict_reduced == "not_reduced":
        return FInjectivityVerdict(
            method="ideal_evidence", verdict="no",
            violations=[([], 0, 0, wit)])
    d = local_dimension(L)
    violations = []
    skipped = []
    ring = L.ring
    for k in range(samples):
        rep = random_filter_regular_sop(L, d, seed * 1000 + k)
        seq = rep.elements
        # When the sampled sequence consists of linear forms, change
        # coordinates so each form becomes a variable: powered sequence
        # ideals stay monomial and the colon chains stay sparse.
        linear = all(all(sum(e) == 1 for e in f.terms) and not f.is_zero
                     for f in seq)
        if linear:
            L_eval, _, to_old = linear_coordinate_change(L, seq)
            seq_eval = [ring.var(nm) for nm in ring.variables[:d]]
        else:
            L_eval, to_old = L, (lambda f: f)
            seq_eval = seq
        for t in range(1, d + 1):
            prefix = seq_eval[:t]
            for n in range(1, n_max + 1):
                xs_n = [x**n for x in prefix]
                try:
                    with work_budget(_EVIDENCE_CELL_BUDGET):
                        lim, lim_stable = _powered_limit_under_approx(
                            prefix, n, L_eval,
                            m_max=max(n_max, window + 1), window=window)
                    if not lim_stable:
                        # an unconverged limit chain cannot refute
                        raise WorkCapExceeded(0)
                except (WorkCapExceeded, DegreeCapExceeded):
                    skipped.append((k, t, n, 0))
                    continue
                for e in range(1, e_max + 1):
                    if n * ring.p ** e > 4 * n_max:
                        # Frobenius powers this deep cannot fit the cell
                        # budget; stop here rather than burn it
                        skipped.append((k, t, n, e))
                        break
                    try:
                        with work_budget(_EVIDENCE_CELL_BUDGET):
                            P = endo_preimage(
                                frobenius_power(Ideal(ring, xs_n), e)
                                + L_eval.J, e)
                            bad = [g for g in P.gens
                                   if not local_membership(g, lim, L_eval)]
                    except (WorkCapExceeded, DegreeCapExceeded):
                        skipped.append((k, t, n, e))
                        break
                    for gen in bad:
                        violations.append((seq[:t], t, n, to_old(gen)))
                        return FInjectivityVerdict(
                            method="ideal_evidence", verdict="no",
                            violations=violations, skipped=skipped)
    return FInjectivityVerdict(method="ideal_evidence",
                               verdict="indeterminate", skipped=skipped)


def is_standard_sequence(xs, L, profile, check_koszul=False):
    """Colon-length equality of the standard-sequence criterion.

    Requires xs filter regular with s <= f_m and all lower cohomology
    lengths finite; optionally cross-checks the Koszul length equalities.
    """
    s = len(xs)
    if s == 0:
        return True
    rep = is_filter_regular(xs, L)
    if not rep.all_filter_regular():
        raise ValueError("sequence is not filter regular")
    if s > profile.f_m:
        raise ValueError("sequence longer than the finiteness dimension")
    if any(profile.lengths[k] is None for k in range(min(s, profile.dim))):
        raise ValueError("a required cohomology length is not finite")
    ring = L.ring
    A = L.J + Ideal(ring, list(xs[:-1]))
    C = colon_element(A, xs[-1])
    Q = present_subquotient(ring, 1, [[g] for g in C.gens],
                            [[g] for g in A.gens])
    val = local_length_or_none(Q)
    if val is None:
        return False
    expected = sum(math.comb(s - 1, k) * profile.lengths[k]
                   for k in range(min(s, profile.dim)))
    ok = val == expected
    if ok and check_koszul:
        ok = _koszul_cross_check(xs, L, profile)
    return ok


def _koszul_cross_check(xs, L, profile):
    """Prop: standard iff l(H^i(x; M)) = sum_j C(s, i-j) l(H^j_m) for i<s."""
    from .modules import koszul_homology_lengths

    s = len(xs)
    M = quotient_module(L.J)
    lengths = koszul_homology_lengths(list(xs), M)
    for i in range(s):
        expected = sum(
            math.comb(s, i - j) * profile.lengths[j]
            for j in range(0, i + 1)
            if j < len(profile.lengths) and profile.lengths[j] is not None
        )
        got = lengths[i]
        if got is None or got != expected:
            return False
    return True


def finitedim_check(L, s, samples=8, seed=0, e_max=4, window=2):
    """Sample sequences filter regular on both R and R^(1/p)/R; check that
    each generates a Frobenius closed ideal and is standard."""
    L.require_origin_assumption()
    profile = cohomology_profile(L)
    if s > profile.f_m:
        raise ValueError(f"s={s} exceeds the finiteness dimension")
    _, _, coker = frobenius_pushforward(L.J, 1)
    coker_min, _ = minimize_presentation(coker)
    outcomes = []
    for k in range(samples):
        rep = random_filter_regular_sop(L, s, seed * 1000 + k,
                                        also_on=coker_min)
        seq = rep.elements
        closed, wit, _ = is_frobenius_closed(Ideal(L.ring, seq), L,
                                             e_max=e_max, window=window)
        standard = is_standard_sequence(seq, L, profile)
        outcomes.append({
            "sequence": [str(x) for x in seq],
            "frobenius_closed": closed,
            "witness": str(wit) if wit is not None else None,
            "standard": standard,
        })
    inconsistent = any(o["frobenius_closed"] is False or not o["standard"]
                       for o in outcomes)
    return {"s": s, "samples": samples, "seed": seed,
            "outcomes": outcomes, "violation_found": inconsistent}


def parameter_f_closed_sampler(L, samples=8, n_max=6, seed=0,
                               distinguished=None, e_max=4, window=2):
    """Test Frobenius closedness of sampled parameter ideals.

    With a distinguished element a, samples completions a, x_2, x_3, x_4
    and raises the completing elements to powers n <= n_max (the Krull
    intersection trick); returns the first counterexample found.
    """
    L.require_origin_assumption()
    d = local_dimension(L)
    tried = []
    if distinguished is not None:
        L_mod = LocalRing(L.ring, L.J + Ideal(L.ring, [distinguished]),
                          assumed_origin_components=True)
        for k in range(samples):
            rep = random_filter_regular_sop(L_mod, d - 1, seed * 1000 + k)
            rest = rep.elements
            if not is_system_of_parameters([distinguished] + rest, L):
                continue
            for n in range(1, n_max + 1):
                ideal = Ideal(L.ring,
                              [distinguished] + [x**n for x in rest])
                closed, wit, _ = is_frobenius_closed(ideal, L, e_max=e_max,
                                                     window=window)
                tried.append({
                    "generators": [str(g) for g in ideal.gens],
                    "n": n,
                    "closed": closed,
                    "witness": str(wit) if wit is not None else None,
                })
                if closed is False:
                    return {"parameter_f_closed": False,
                            "counterexample": tried[-1], "tried": tried}
        return {"parameter_f_closed": None, "counterexample": None,
                "tried": tried}
    for k in range(samples):
        rep = random_filter_regular_sop(L, d, seed * 1000 + k)
        ideal = Ideal(L.ring, rep.elements)
        closed, wit, _ = is_frobenius_closed(ideal, L, e_max=e_max,
                                             window=window)
        tried.append({
            "generators": [str(g) for g in ideal.gens],
            "closed": closed,
            "witness": str(wit) if wit is not None else None,
        })
        if closed is False:
            return {"parameter_f_closed": False,
                    "counterexample": tried[-1], "tried": tried}
    all_closed = all(t["closed"] is True for t in tried)
    return {"parameter_f_closed": True if all_closed else None,
            "counterexample": None, "tried": tried}


def buchsbaum_evidence(L, samples=8, seed=0):
    """In a gCM ring, every sampled s.o.p. must be a standard sequence."""
    L.require_origin_assumption()
    profile = cohomology_profile(L)
    if not profile.is_gcm:
        raise ValueError("ring is not generalized Cohen-Macaulay")
    d = profile.dim
    outcomes = []
    for k in range(samples):
        rep = random_filter_regular_sop(L, d, seed * 1000 + k)
        standard = is_standard_sequence(rep.elements, L, profile)
        outcomes.append({
            "sequence": [str(x) for x in rep.elements],
            "standard": standard,
        })
    return {"samples": samples, "seed": seed, "outcomes": outcomes,
            "all_standard": all(o["standard"] for o in outcomes)}
