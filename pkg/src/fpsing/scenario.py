"""Scenario files and structured reports.

A scenario is a line-oriented description of a ring, named ideals and
polynomials, and a list of commands to run against the local ring at the
origin.  Reports are deterministic for a fixed (scenario, seed, version);
timings are carried for humans but excluded from the stability hash.

Grammar (one statement per line, `#` starts a comment):

    p 2
    vars u v y z t
    def NAME = ideal: f1, f2, ...
    def NAME = poly: f
    def NAME = intersect(A, B) | colon(A, B) | sat(A, B)
                 | power(A, k) | frobpower(A, e)
    quotient NAME
    cmd <command> <args> [key=value ...]
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field

from .closure import (
    fedder_is_f_pure,
    frobenius_closure,
    is_frobenius_closed,
    limit_closure,
    unmixed_component_approx,
)
from .groebner import (
    Ideal,
    colon,
    frobenius_power,
    intersect,
    saturate,
)
from .localring import (
    LocalRing,
    depth_and_codim_profile,
    local_dimension,
    random_filter_regular_sop,
)
from .ring import ParseError, Ring, is_prime, parse_poly
from .verdicts import (
    NotReduced,
    buchsbaum_evidence,
    cohomology_profile,
    f_injective_duality,
    f_injective_ideal_evidence,
    is_standard_sequence,
    parameter_f_closed_sampler,
    reducedness_screen,
)


class ScenarioError(Exception):
    def __init__(self, message, line=None):
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(message + where)


@dataclass
class Scenario:
    """Parsed but unevaluated scenario."""

    p: int | None = None
    variables: tuple = ()
    definitions: list = field(default_factory=list)  # (line, name, kind, payload)
    quotient: str | None = None
    commands: list = field(default_factory=list)  # (line, name, [args])
    source: str = ""


_BUILDERS = ("intersect", "colon", "sat", "power", "frobpower")


def parse_scenario(text):
    sc = Scenario(source=text)
    names = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "p":
            if len(words) != 2 or not words[1].isdigit():
                raise ScenarioError("expected: p <prime>", lineno)
            sc.p = int(words[1])
            if not is_prime(sc.p):
                raise ScenarioError(f"{sc.p} is not prime", lineno)
        elif head == "vars":
            if len(words) < 2:
                raise ScenarioError("expected: vars <name> ...", lineno)
            sc.variables = tuple(words[1:])
        elif head == "def":
            name, kind, payload = _parse_def(line, lineno, names)
            sc.definitions.append((lineno, name, kind, payload))
            names.add(name)
        elif head == "quotient":
            if len(words) != 2:
                raise ScenarioError("expected: quotient <ideal name>", lineno)
            if words[1] not in names:
                raise ScenarioError(f"undefined name {words[1]!r}", lineno)
            sc.quotient = words[1]
        elif head == "cmd":
            if len(words) < 2:
                raise ScenarioError("expected: cmd <command> ...", lineno)
            sc.commands.append((lineno, words[1], words[2:]))
        else:
            raise ScenarioError(f"unknown statement {head!r}", lineno)
    return sc


def _parse_def(line, lineno, names):
    body = line[len("def"):].strip()
    if "=" not in body:
        raise ScenarioError("expected: def NAME = ...", lineno)
    name, rhs = body.split("=", 1)
    name = name.strip()
    rhs = rhs.strip()
    if not name.isidentifier():
        raise ScenarioError(f"bad name {name!r}", lineno)
    if name in names:
        raise ScenarioError(f"duplicate definition of {name!r}", lineno)
    if rhs.startswith("ideal:"):
        gens = [g.strip() for g in rhs[len("ideal:"):].split(",")]
        gens = [g for g in gens if g]
        return name, "ideal", gens
    if rhs.startswith("poly:"):
        return name, "poly", rhs[len("poly:"):].strip()
    for builder in _BUILDERS:
        if rhs.startswith(builder + "(") and rhs.endswith(")"):
            inner = rhs[len(builder) + 1:-1]
            args = [a.strip() for a in inner.split(",")]
            if len(args) != 2:
                raise ScenarioError(f"{builder} takes two arguments", lineno)
            if args[0] not in names:
                raise ScenarioError(f"undefined name {args[0]!r}", lineno)
            if builder in ("power", "frobpower"):
                if not args[1].isdigit():
                    raise ScenarioError(
                        f"{builder} second argument must be an integer", lineno)
            elif args[1] not in names:
                raise ScenarioError(f"undefined name {args[1]!r}", lineno)
            return name, builder, args
    raise ScenarioError(f"unrecognized definition {rhs!r}", lineno)


class Context:
    """Evaluated scenario: ring, named objects, and the local ring."""

    def __init__(self, ring, ideals, polys, local):
        self.ring = ring
        self.ideals = ideals
        self.polys = polys
        self.local = local

    def ideal(self, name, line=None):
        if name not in self.ideals:
            raise ScenarioError(f"undefined ideal {name!r}", line)
        return self.ideals[name]

    def poly(self, text, line=None):
        if text in self.polys:
            return self.polys[text]
        try:
            return parse_poly(text, self.ring)
        except ParseError as ex:
            raise ScenarioError(f"bad polynomial {text!r}: {ex}", line)

    def require_local(self, line=None):
        if self.local is None:
            raise ScenarioError("no quotient declared", line)
        return self.local


def build_context(sc, p=None, degcap=256):
    prime = p if p is not None else sc.p
    if prime is None:
        raise ScenarioError("no characteristic given (p)")
    if not is_prime(prime):
        raise ScenarioError(f"{prime} is not prime")
    if not sc.variables:
        raise ScenarioError("no variables declared")
    ring = Ring(prime, sc.variables, degcap)
    ideals = {}
    polys = {}
    for lineno, name, kind, payload in sc.definitions:
        if kind == "ideal":
            try:
                gens = [parse_poly(g, ring) for g in payload]
            except ParseError as ex:
                raise ScenarioError(str(ex), lineno)
            ideals[name] = Ideal(ring, gens)
        elif kind == "poly":
            try:
                polys[name] = parse_poly(payload, ring)
            except ParseError as ex:
                raise ScenarioError(str(ex), lineno)
        else:
            a, b = payload
            A = ideals.get(a)
            if A is None:
                raise ScenarioError(f"{a!r} is not an ideal", lineno)
            if kind == "intersect":
                ideals[name] = intersect(A, ideals[b])
            elif kind == "colon":
                ideals[name] = colon(A, ideals[b])
            elif kind == "sat":
                ideals[name] = saturate(A, ideals[b])
            elif kind == "power":
                k = int(b)
                out = A
                for _ in range(k - 1):
                    out = Ideal(ring, [x * y for x in out.gens
                                       for y in A.gens])
                ideals[name] = out if k >= 1 else Ideal(ring, [ring.one()])
            elif kind == "frobpower":
                ideals[name] = frobenius_power(A, int(b))
    local = None
    if sc.quotient is not None:
        J = ideals[sc.quotient]
        if J.is_unit_ideal():
            raise ScenarioError("quotient ideal is the unit ideal")
        local = LocalRing(ring, J, assumed_origin_components=True)
    return Context(ring, ideals, polys, local)


@dataclass
class Options:
    e_max: int = 4
    n_max: int = 6
    window: int = 2
    samples: int = 8
    seed: int = 0
    verify_witnesses: bool = False


class Report:
    """Ordered list of per-command records with stable serialization."""

    def __init__(self, records=None):
        self.records = records if records is not None else []

    def add(self, record):
        self.records.append(record)

    def as_dict(self):
        return {"records": self.records}

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(records=data["records"])

    def stable_hash(self):
        """Hash of the report with timings stripped."""

        def strip(obj):
            if isinstance(obj, dict):
                return {k: strip(v) for k, v in obj.items()
                        if k != "timing"}
            if isinstance(obj, list):
                return [strip(x) for x in obj]
            return obj

        blob = json.dumps(strip(self.as_dict()), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_text(self):
        lines = []
        for rec in self.records:
            head = rec["command"]
            if rec.get("inputs"):
                head += " " + " ".join(str(x) for x in rec["inputs"])
            lines.append(head)
            if rec.get("status") == "error":
                lines.append(f"  error: {rec.get('error')}")
            else:
                for key, val in rec.items():
                    if key in ("command", "inputs", "status", "timing"):
                        continue
                    lines.append(f"  {key}: {_fmt(val)}")
            lines.append(f"  timing: {rec.get('timing', 0):.3f}s")
            lines.append("")
        return "\n".join(lines)

    def has_inconsistency(self):
        """True when two methods in the same run contradict each other."""
        duality = None
        evidence = None
        for rec in self.records:
            if rec["command"] == "finj" and rec.get("status") == "ok":
                duality = rec.get("verdict")
            if rec["command"] == "finj-evidence" and rec.get("status") == "ok":
                evidence = rec.get("verdict")
            if rec.get("violation_found"):
                if duality == "yes":
                    return True
        if duality == "yes" and evidence == "no":
            return True
        return False


def _fmt(val):
    if isinstance(val, (list, dict)):
        return json.dumps(val)
    return str(val)


def _opt_override(opts, kvs, line):
    mapping = {"emax": "e_max", "nmax": "n_max", "window": "window",
               "samples": "samples", "seed": "seed"}
    out = Options(**opts.__dict__)
    rest = []
    for token in kvs:
        if "=" in token:
            key, val = token.split("=", 1)
            if key not in mapping:
                raise ScenarioError(f"unknown option {key!r}", line)
            if not val.lstrip("-").isdigit():
                raise ScenarioError(f"option {key} needs an integer", line)
            setattr(out, mapping[key], int(val))
        else:
            rest.append(token)
    return out, rest


def run_command(ctx, name, args, opts, line=None):
    """Execute one command; returns a record dict (never raises for
    engine-level errors, which are embedded in the record)."""
    opts, args = _opt_override(opts, args, line)
    record = {"command": name, "inputs": list(args), "status": "ok"}
    start = time.time()
    try:
        handler = _COMMANDS.get(name)
        if handler is None:
            raise ScenarioError(f"unknown command {name!r}", line)
        handler(ctx, args, opts, record, line)
    except ScenarioError:
        raise
    except NotReduced as ex:
        record["status"] = "error"
        record["error"] = "NotReduced"
        record["witness"] = str(ex.witness)
    except Exception as ex:  # engine errors are data, not crashes
        record["status"] = "error"
        record["error"] = f"{type(ex).__name__}: {ex}"
    record["timing"] = round(time.time() - start, 4)
    return record


def run_scenario(sc, opts=None, p=None, degcap=256):
    opts = opts if opts is not None else Options()
    ctx = build_context(sc, p=p, degcap=degcap)
    report = Report()
    for line, name, args in sc.commands:
        report.add(run_command(ctx, name, args, opts, line))
    return report


# ---------------------------------------------------------------------------
# command handlers

def _cmd_gb(ctx, args, opts, record, line):
    if len(args) != 1:
        raise ScenarioError("gb takes one ideal name", line)
    gb = ctx.ideal(args[0], line).groebner()
    record["basis"] = [str(g) for g in gb.elements]
    record["stats"] = gb.stats.as_dict()


def _cmd_nf(ctx, args, opts, record, line):
    if len(args) != 2:
        raise ScenarioError("nf takes a polynomial and an ideal name", line)
    f = ctx.poly(args[0], line)
    record["value"] = str(ctx.ideal(args[1], line).normal_form(f))


def _cmd_dim(ctx, args, opts, record, line):
    record["value"] = local_dimension(ctx.require_local(line))


def _cmd_depth(ctx, args, opts, record, line):
    depth, dim = depth_and_codim_profile(ctx.require_local(line))
    record["value"] = depth
    record["dim"] = dim


def _cmd_profile(ctx, args, opts, record, line):
    prof = cohomology_profile(ctx.require_local(line))
    record.update(prof.as_dict())


def _closure_record(record, result, L, verify):
    record["closure"] = [str(g) for g in result.closure.gens]
    record["stabilized_at"] = result.stabilized_at
    record["complete"] = result.complete
    record["chain_steps"] = result.chain_steps
    record["witnesses"] = [{"generator": str(g), "step": e}
                           for g, e in result.witnesses]
    if result.error:
        record["engine_error"] = result.error
    if verify:
        record["witnesses_verified"] = result.verify_witnesses(L)


def _cmd_fclosure(ctx, args, opts, record, line):
    if len(args) != 1:
        raise ScenarioError("fclosure takes one ideal name", line)
    L = ctx.require_local(line)
    result = frobenius_closure(ctx.ideal(args[0], line), L,
                               e_max=opts.e_max, window=opts.window)
    _closure_record(record, result, L, opts.verify_witnesses)


def _cmd_limclosure(ctx, args, opts, record, line):
    if not args:
        raise ScenarioError("limclosure takes a sequence of polynomials",
                            line)
    L = ctx.require_local(line)
    xs = [ctx.poly(a, line) for a in args]
    result = limit_closure(xs, L, n_max=opts.n_max, window=opts.window)
    _closure_record(record, result, L, opts.verify_witnesses)


def _cmd_isfclosed(ctx, args, opts, record, line):
    if len(args) != 1:
        raise ScenarioError("isfclosed takes one ideal name", line)
    L = ctx.require_local(line)
    verdict, witness, result = is_frobenius_closed(
        ctx.ideal(args[0], line), L, e_max=opts.e_max, window=opts.window)
    record["verdict"] = {True: "yes", False: "no", None: "indeterminate"}[
        verdict]
    if witness is not None:
        record["witness"] = str(witness)
    _closure_record(record, result, L, opts.verify_witnesses)


def _cmd_fedder(ctx, args, opts, record, line):
    v = fedder_is_f_pure(ctx.require_local(line))
    record["verdict"] = "yes" if v.is_f_pure else "no"
    if v.fedder_witness is not None:
        record["witness"] = str(v.fedder_witness)


def _cmd_finj(ctx, args, opts, record, line):
    v = f_injective_duality(ctx.require_local(line))
    record.update(v.as_dict())


def _cmd_finj_evidence(ctx, args, opts, record, line):
    v = f_injective_ideal_evidence(
        ctx.require_local(line), samples=opts.samples, n_max=opts.n_max,
        seed=opts.seed, e_max=opts.e_max, window=opts.window)
    record["seed"] = opts.seed
    record.update(v.as_dict())


def _cmd_reduced(ctx, args, opts, record, line):
    verdict, witness = reducedness_screen(ctx.require_local(line))
    record["verdict"] = verdict
    if witness is not None:
        record["witness"] = str(witness)


def _cmd_standard(ctx, args, opts, record, line):
    if not args:
        raise ScenarioError("standard takes a sequence of polynomials", line)
    L = ctx.require_local(line)
    xs = [ctx.poly(a, line) for a in args]
    prof = cohomology_profile(L)
    record["verdict"] = is_standard_sequence(xs, L, prof)


def _cmd_buchsbaum(ctx, args, opts, record, line):
    out = buchsbaum_evidence(ctx.require_local(line),
                             samples=opts.samples, seed=opts.seed)
    record.update(out)


def _cmd_pfc(ctx, args, opts, record, line):
    L = ctx.require_local(line)
    distinguished = ctx.poly(args[0], line) if args else None
    out = parameter_f_closed_sampler(
        L, samples=opts.samples, n_max=opts.n_max, seed=opts.seed,
        distinguished=distinguished, e_max=opts.e_max, window=opts.window)
    record["seed"] = opts.seed
    record.update(out)


def _cmd_unmixed(ctx, args, opts, record, line):
    L = ctx.require_local(line)
    approx = unmixed_component_approx(L, samples=min(opts.samples, 4),
                                      seed=opts.seed)
    record["seed"] = opts.seed
    record["generators"] = [str(g) for g in approx.gens]


def _cmd_explore_p1(ctx, args, opts, record, line):
    """Sample Frobenius closed parameter ideals I and record whether the
    bracket power I^[p] is Frobenius closed too.  Exploratory: outcomes
    are recorded, never asserted."""
    L = ctx.require_local(line)
    d = local_dimension(L)
    outcomes = []
    for k in range(opts.samples):
        rep = random_filter_regular_sop(L, d, opts.seed * 1000 + k)
        I = Ideal(L.ring, rep.elements)
        base_closed, _, _ = is_frobenius_closed(I, L, e_max=opts.e_max,
                                                window=opts.window)
        entry = {"generators": [str(g) for g in I.gens],
                 "base_closed": base_closed}
        if base_closed:
            bracket = frobenius_power(I, 1)
            br_closed, wit, _ = is_frobenius_closed(
                bracket, L, e_max=opts.e_max, window=opts.window)
            entry["bracket_closed"] = br_closed
            if wit is not None:
                entry["bracket_witness"] = str(wit)
        outcomes.append(entry)
    record["seed"] = opts.seed
    record["outcomes"] = outcomes


_COMMANDS = {
    "gb": _cmd_gb,
    "nf": _cmd_nf,
    "dim": _cmd_dim,
    "depth": _cmd_depth,
    "profile": _cmd_profile,
    "fclosure": _cmd_fclosure,
    "limclosure": _cmd_limclosure,
    "isfclosed": _cmd_isfclosed,
    "fedder": _cmd_fedder,
    "finj": _cmd_finj,
    "finj-evidence": _cmd_finj_evidence,
    "reduced": _cmd_reduced,
    "standard": _cmd_standard,
    "buchsbaum": _cmd_buchsbaum,
    "pfc": _cmd_pfc,
    "unmixed": _cmd_unmixed,
    "explore-p1": _cmd_explore_p1,
}
