"""
From a quadratic algebra with a diagonal cyclic action to the corner algebra
e'(G * Beilinson(A^!))e' and everything in between.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ActionError, NotFiniteDimensionalError, SocleError
from .exactfield import CyclotomicScalar
from .gradedalg import (
    DEFAULT_MAX_DEGREE,
    DiagonalAction,
    QuadraticAlgebra,
    action_check,
    algebra_to_json,
    dual_action,
    frobenius_pairing_check,
    hdet_diagonal,
    hilbert_function,
    index_word,
    invariant_hilbert_function,
    koszul_numeric_check,
    quadratic_dual,
)
from .linalg import EchelonBuilder, Subspace
from .quiver import (
    DEFAULT_FINDIM_BOUND,
    Arrow,
    Path,
    PathPolynomial,
    Quiver,
    QuiverPresentation,
    _internal,
    _paths_by_grade,
    explicit_ideal,
    finite_dimensionality,
    normalize,
    presentation_to_json,
    vertex_label,
)

log = logging.getLogger(__name__)


def _arrow_id(name, source, target) -> str:
    return f"{name}:{vertex_label(source)}->{vertex_label(target)}"


def _default_names(n: int) -> list:
    return [f"x{j + 1}" for j in range(n)]


def mckay_quiver(act: DiagonalAction, n: int | None = None, names: Sequence[str] | None = None) -> Quiver:
    """Vertices Z/rZ; arrow x_{j,i}: i - a_j -> i for every vertex i and generator j."""
    if n is None:
        n = len(act.weights)
    if len(act.weights) != n:
        raise ActionError(f"action has {len(act.weights)} weights for {n} generators")
    names = list(names) if names is not None else _default_names(n)
    r = act.r
    arrows = []
    for j in range(n):
        for i in range(r):
            src = (i - act.weights[j]) % r
            arrows.append(Arrow(_arrow_id(names[j], src, i), src, i, names[j]))
    return Quiver(range(r), arrows)


def _mckay_arrow_ids(q: Quiver, act: DiagonalAction) -> dict:
    """(generator j, target vertex i) -> arrow id, for quivers built by mckay_quiver."""
    r = act.r
    return {(k // r, k % r): a.id for k, a in enumerate(q.arrows)}


def skew_group_presentation(A: QuadraticAlgebra, act: DiagonalAction) -> QuiverPresentation:
    """Quiver with relations for A*G: the McKay quiver with every relation placed at every vertex.

    A word x_{s_1}...x_{s_m} ending at vertex i becomes the path whose last
    arrow is x_{s_m, i}, the one before x_{s_(m-1), i - a_{s_m}}, and so on.
    """
    check = action_check(A, act)
    if not check:
        raise ActionError(
            f"relation {check.violating.format(A.generator_names)} is not stable under the action",
            check.violating,
        )
    q = mckay_quiver(act, A.n, A.generator_names)
    ids = _mckay_arrow_ids(q, act)
    r, n = act.r, A.n
    rels = []
    for row in A.relations.basis:
        for i in range(r):
            terms = {}
            for col, c in row.items():
                word = index_word(col, n, 2)
                path, end = [], i
                for s in reversed(word):
                    path.append(ids[(s, end)])
                    end = (end - act.weights[s]) % r
                terms[Path(end, i, tuple(reversed(path)))] = c
            rels.append(PathPolynomial(q, terms, A.order))
    return normalize(QuiverPresentation(q, rels, A.order))


def remove_trivial_vertex(p: QuiverPresentation, vertex=0) -> QuiverPresentation:
    """Quotient by the idempotent at ``vertex``: drop it, its arrows, and every path through it."""
    q = p.quiver
    if vertex not in q.vertex_index:
        raise ValueError(f"presentation has no vertex {vertex!r}")
    dead = {a.id for a in q.arrows if vertex in (a.source, a.target)}
    new_q = Quiver([v for v in q.vertices if v != vertex], [a for a in q.arrows if a.id not in dead])
    rels = []
    for rel in p.relations:
        terms = {t: c for t, c in rel.terms.items()
                 if t.source != vertex and t.target != vertex and not dead.intersection(t.arrows)}
        if terms:
            rels.append(PathPolynomial(new_q, terms, p.order))
    return normalize(QuiverPresentation(new_q, rels, p.order))


def beilinson_presentation(A: QuadraticAlgebra, ell: int) -> QuiverPresentation:
    """Layered quiver 0 -> 1 -> ... -> ell-1 with n arrows per step and R placed at every layer."""
    if ell < 1:
        raise ValueError("ell must be at least 1")
    n, names = A.n, A.generator_names
    arrows = []
    ids = {}
    for i in range(ell - 1):
        for j in range(n):
            a = Arrow(_arrow_id(names[j], i, i + 1), i, i + 1, names[j])
            ids[(j, i)] = a.id
            arrows.append(a)
    q = Quiver(range(ell), arrows)
    rels = []
    for row in A.relations.basis:
        for i in range(ell - 2):
            terms = {}
            for col, c in row.items():
                s1, s2 = index_word(col, n, 2)
                terms[Path(i, i + 2, (ids[(s1, i)], ids[(s2, i + 1)]))] = c
            rels.append(PathPolynomial(q, terms, A.order))
    return normalize(QuiverPresentation(q, rels, A.order))


def skew_layered_presentation(p: QuiverPresentation, act: DiagonalAction,
                              generator_names: Sequence[str], lift_sign: int = 1) -> QuiverPresentation:
    """Lift each vertex i to (i, c), c in Z/rZ; an arrow of weight w goes (i, c) -> (i', c + w)."""
    if lift_sign not in (1, -1):
        raise ValueError("lift_sign must be +1 or -1")
    names = list(generator_names)
    if len(names) != len(act.weights):
        raise ActionError(f"{len(names)} generator names for {len(act.weights)} weights")
    weight = dict(zip(names, act.weights))
    q = p.quiver
    unknown = sorted({a.name for a in q.arrows} - set(weight))
    if unknown:
        raise ActionError(f"arrow names {unknown} are not generators of the action")
    r = act.r
    vertices = [(v, c) for v in q.vertices for c in range(r)]
    lifted = {}
    arrows = []
    for a in q.arrows:
        w = lift_sign * weight[a.name]
        for c in range(r):
            src, tgt = (a.source, c), (a.target, (c + w) % r)
            b = Arrow(_arrow_id(a.name, src, tgt), src, tgt, a.name, a.grade)
            lifted[(a.id, c)] = b
            arrows.append(b)
    # vertex-major arrow order keeps paths from one source ordered by the base arrow
    order_key = {b.id: (q.vertex_index[a.source], c, k) for k, a in enumerate(q.arrows) for c in range(r)
                 for b in [lifted[(a.id, c)]]}
    arrows.sort(key=lambda b: order_key[b.id])
    new_q = Quiver(vertices, arrows)
    rels = []
    for rel in p.relations:
        for c in range(r):
            terms = {}
            ends = set()
            for t, coef in rel.terms.items():
                cur, ids = c, []
                for aid in t.arrows:
                    b = lifted[(aid, cur)]
                    ids.append(b.id)
                    cur = b.target[1]
                ends.add(cur)
                terms[Path((t.source, c), (t.target, cur), tuple(ids))] = coef
            if len(ends) > 1:
                raise ActionError("relation is not weight-homogeneous; cannot lift")
            rels.append(PathPolynomial(new_q, terms, p.order))
    return normalize(QuiverPresentation(new_q, rels, p.order))


# -- corner algebras ---------------------------------------------------------------


@dataclass
class CornerData:
    """Corner presentation together with the directly computed graded dimensions."""

    presentation: QuiverPresentation
    direct_dims: list
    generators: list = field(default_factory=list)


def _concat(a, b):
    return (a[0], a[1] + b[1])


def corner_algebra(p: QuiverPresentation, kept: Iterable, bound: int | None = None,
                   findim_bound: int = DEFAULT_FINDIM_BOUND) -> CornerData:
    """Presentation of eBe for e the sum of the vertex idempotents in ``kept``.

    ``bound`` may give the top nonzero grade of B directly; otherwise B is
    certified finite-dimensional first.
    """
    q = p.quiver
    kept_set = set(kept)
    missing = kept_set - set(q.vertices)
    if missing:
        raise ValueError(f"kept vertices {sorted(map(str, missing))} are not in the quiver")
    K = [v for v in q.vertices if v in kept_set]
    if bound is None:
        report = finite_dimensionality(p, findim_bound)
        if not report.finite:
            raise NotFiniteDimensionalError(
                f"ambient algebra not certified finite-dimensional up to grade {findim_bound}")
        top = len(report.per_degree_dims) - 1
    else:
        top = bound
    eng = p.engine(max(top, 1) + 1)
    order = p.order
    one = CyclotomicScalar.one(order)

    # (i) basis of eBe grade by grade
    basis = {}
    for m in range(top + 1):
        for s in K:
            for t in K:
                basis[(m, s, t)] = eng.normal_paths(m, s, t)
    direct_dims = [sum(len(basis[(m, s, t)]) for s in K for t in K) for m in range(top + 1)]

    def product_vector(paths) -> dict:
        """NF of a concatenation of internal ambient paths."""
        acc = paths[0]
        for x in paths[1:]:
            acc = _concat(acc, x)
        return eng.normal_form(acc)

    # (ii) generators: a basis of eBe_{>=1} modulo its square, lex-first normal paths
    generators = []
    for m in range(1, top + 1):
        for s in K:
            for t in K:
                B = basis[(m, s, t)]
                if not B:
                    continue
                col = {x: j for j, x in enumerate(B)}
                builder = EchelonBuilder(len(B), order)
                for k in range(1, m):
                    for u in K:
                        for x in basis[(k, s, u)]:
                            for y in basis[(m - k, u, t)]:
                                builder.add({col[z]: c for z, c in product_vector([x, y]).items()})
                for x in B:
                    if builder.add({col[x]: one}):
                        generators.append((m, s, t, x))

    names = {}
    arrows = []
    for m, s, t, x in generators:
        name = "".join(q.arrows[k].name for k in x[1])
        base = _arrow_id(name, s, t)
        aid, dup = base, 1
        while aid in names:
            dup += 1
            aid = f"{base}#{dup}"
        names[aid] = x
        arrows.append(Arrow(aid, s, t, name, m))
    gq = Quiver(K, arrows)
    rep = {k: names[a.id] for k, a in enumerate(gq.arrows)}

    # (iii) relations: kernel of k<generators> -> eBe, minus consequences of lower grades
    max_arrow = max((a.grade for a in arrows), default=1)
    relations: list = []
    cache: dict = {}
    for m in range(1, top + max_arrow + 1):
        gpaths = sorted(_paths_by_grade(gq, m, cache))
        if not gpaths:
            continue
        N = len(gpaths)
        gcol = {x: N - 1 - i for i, x in enumerate(gpaths)}
        images = {}
        for x in gpaths:
            src, arrs = x
            images[x] = product_vector([rep[k] for k in arrs]) if m <= top else {}
        consequences = Subspace.zero(N, order)
        if relations:
            sub, cpaths = explicit_ideal(QuiverPresentation(gq, relations, order), m)
            remap = {len(cpaths) - 1 - i: gcol[_internal(gq, x)] for i, x in enumerate(cpaths)}
            consequences = Subspace(N, [{remap[c]: v for c, v in row.items()} for row in sub.basis], order)
        buckets: dict = {}
        for x in gpaths:
            src = gq.vertices[x[0]]
            tgt = gq.arrows[x[1][-1]].target
            buckets.setdefault((src, tgt), []).append(x)
        for (s, t), xs in buckets.items():
            targets = sorted({z for x in xs for z in images[x]})
            tcol = {z: j for j, z in enumerate(targets)}
            aug = EchelonBuilder(len(targets) + N, order)
            for x in xs:
                vec = {tcol[z]: c for z, c in images[x].items()}
                vec[len(targets) + gcol[x]] = one
                aug.add(vec)
            kern = [{c - len(targets): v for c, v in row.items()}
                    for piv, row in aug.rows.items() if piv >= len(targets)]
            fresh = EchelonBuilder(N, order)
            for row in Subspace(N, kern, order).basis:
                fresh.add(consequences.reduce(row))
            for row in fresh.rref_rows():
                terms = {}
                for c, v in row.items():
                    src_i, arrs = gpaths[N - 1 - c]
                    terms[Path(gq.vertices[src_i], gq.arrows[arrs[-1]].target,
                               tuple(gq.arrows[k].id for k in arrs))] = v
                relations.append(PathPolynomial(gq, terms, order))
    gamma = normalize(QuiverPresentation(gq, relations, order))
    named = [(m, s, t, "".join(q.arrows[k].name for k in x[1])) for m, s, t, x in generators]
    return CornerData(gamma, direct_dims, named)


def corner_presentation(p: QuiverPresentation, kept: Iterable, bound: int | None = None,
                        findim_bound: int = DEFAULT_FINDIM_BOUND) -> QuiverPresentation:
    return corner_algebra(p, kept, bound, findim_bound).presentation


def nontrivial_character_vertices(p: QuiverPresentation) -> list:
    """Vertices (i, c) with c != 0."""
    return [v for v in p.vertices if isinstance(v, tuple) and v[1] != 0]


# -- pipeline -----------------------------------------------------------------------


@dataclass
class PipelineOptions:
    N: int | None = None
    max_degree: int = DEFAULT_MAX_DEGREE
    findim_bound: int = DEFAULT_FINDIM_BOUND
    hdet_convention: str = "direct"
    lift_sign: int = 1
    force: bool = False


@dataclass
class Gate:
    name: str
    passed: bool
    certificate: object = None

    def to_json(self) -> dict:
        return {"passed": self.passed, "certificate": self.certificate}


@dataclass
class PipelineReport:
    gates: dict = field(default_factory=dict)
    stages: dict = field(default_factory=dict)
    hilbert: dict = field(default_factory=dict)
    gamma_withheld: str | None = None
    forced: bool = False
    dual: QuadraticAlgebra | None = None

    @property
    def ok(self) -> bool:
        return all(g.passed for g in self.gates.values())

    @property
    def gamma(self) -> QuiverPresentation | None:
        return self.stages.get("gamma")

    def to_json(self) -> dict:
        stages = {}
        for key, val in self.stages.items():
            if key == "dual":
                stages[key] = algebra_to_json(val[0], val[1]) if val is not None else None
            else:
                stages[key] = presentation_to_json(val) if val is not None else None
        out = {
            "gates": {k: g.to_json() for k, g in self.gates.items()},
            "stages": stages,
            "hilbert": self.hilbert,
        }
        if self.gamma_withheld:
            out["gamma_withheld"] = self.gamma_withheld
        if self.forced:
            out["forced"] = True
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def stable_cm_pipeline(A: QuadraticAlgebra, act: DiagonalAction,
                       opts: PipelineOptions | None = None) -> PipelineReport:
    """Run every gate and construction; Gamma is withheld when a gate fails unless forced."""
    opts = opts or PipelineOptions()
    d = A.claimed_global_dim
    if d is None or d < 2:
        raise ValueError("the algebra needs a claimed global dimension d >= 2")
    N = opts.N if opts.N is not None else min(d + 2, opts.max_degree)
    report = PipelineReport()
    gates = report.gates

    check = action_check(A, act)
    gates["action"] = Gate("action", check.ok, {"weight_dims": check.weight_dims} if check.ok
                           else {"violating": check.violating.format(A.generator_names)})

    kos = koszul_numeric_check(A, N, opts.max_degree)
    gates["koszul"] = Gate("koszul", kos.ok, kos.to_json())

    try:
        hdets = {}
        for p in range(act.r):
            val = hdet_diagonal(A, act.power(p), d, opts.hdet_convention, opts.max_degree)
            hdets[f"g^{p}"] = str(val)
        gates["hsl"] = Gate("hsl", all(v == "1" for v in hdets.values()), {"hdet": hdets})
    except SocleError as exc:
        gates["hsl"] = Gate("hsl", False, {"error": str(exc)})

    dual = quadratic_dual(A)
    dact = dual_action(act)
    report.dual = dual
    report.stages["dual"] = (dual, dact)

    if check.ok:
        skew = skew_group_presentation(A, act)
        quotient = remove_trivial_vertex(skew)
        fd = finite_dimensionality(quotient, opts.findim_bound)
        gates["isolated_singularity"] = Gate("isolated_singularity", fd.finite, fd.to_json())
        report.stages["skew"] = skew
        report.stages["skew_mod_e"] = quotient
    else:
        gates["isolated_singularity"] = Gate("isolated_singularity", False, {"error": "action check failed"})
        report.stages["skew"] = report.stages["skew_mod_e"] = None

    frob = frobenius_pairing_check(dual, d, opts.max_degree)
    gates["frobenius"] = Gate("frobenius", frob.ok, {"reason": frob.reason, "per_degree": frob.per_degree})

    # arrows of the layered stages carry the original generator names
    plain_dual = dual.renamed(A.generator_names)
    beil = beilinson_presentation(plain_dual, d)
    report.stages["beilinson"] = beil
    try:
        skew_beil = skew_layered_presentation(beil, dact, A.generator_names, opts.lift_sign)
    except ActionError as exc:
        gates["dual_action"] = Gate("dual_action", False, {"error": str(exc)})
        skew_beil = None
    report.stages["skew_beilinson"] = skew_beil

    failed = [name for name, g in gates.items() if not g.passed]
    if skew_beil is None:
        report.gamma_withheld = "skew Beilinson stage unavailable"
        report.stages["gamma"] = None
    elif failed and not opts.force:
        report.gamma_withheld = f"gates failed: {', '.join(failed)}"
        report.stages["gamma"] = None
    else:
        report.forced = bool(failed)
        kept = nontrivial_character_vertices(skew_beil)
        report.stages["gamma"] = corner_presentation(skew_beil, kept)

    report.hilbert["S"] = hilbert_function(A, N, opts.max_degree)
    report.hilbert["S_dual"] = hilbert_function(dual, min(d + 1, opts.max_degree), opts.max_degree)
    if check.ok:
        report.hilbert["S_invariant"] = invariant_hilbert_function(A, act, N, opts.max_degree)
    for name, g in gates.items():
        log.info("gate %s: %s", name, "pass" if g.passed else "FAIL")
    return report


__all__ = [
    "mckay_quiver",
    "skew_group_presentation",
    "remove_trivial_vertex",
    "beilinson_presentation",
    "skew_layered_presentation",
    "corner_algebra",
    "corner_presentation",
    "nontrivial_character_vertices",
    "PipelineOptions",
    "PipelineReport",
    "Gate",
    "stable_cm_pipeline",
]
