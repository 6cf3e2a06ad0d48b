"""
Quivers with homogeneous relations and their graded quotients kQ/I.

Paths compose left to right: ``p*q`` means traverse p, then q. Paths are
ordered by (source index, tuple of arrow indices); inside a reduction the
lex-largest path of a relation is its pivot, so normal paths are the
lex-smallest ones.

Two independent routes compute the degree-m quotient:

* :class:`GradedQuotient` keeps only normal paths and extends them one
  arrow at a time (the default; cost follows dim kQ/I, not #paths);
* :func:`explicit_ideal` spans every a*rho*b in the full path space.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, NamedTuple, Sequence

from .errors import DegreeCapError, NotFiniteDimensionalError, ParseError, RelationError
from .exactfield import CyclotomicScalar, common_order, scalar
from .linalg import EchelonBuilder, Subspace

DEFAULT_MAX_DEGREE = 8
DEFAULT_FINDIM_BOUND = 32


@dataclass(frozen=True)
class Arrow:
    id: str
    source: Hashable
    target: Hashable
    name: str
    grade: int = 1


class Path(NamedTuple):
    """A path given by its endpoints and arrow ids; trivial when ``arrows`` is empty."""

    source: Hashable
    target: Hashable
    arrows: tuple = ()


def vertex_label(v) -> str:
    if isinstance(v, tuple):
        return "(" + ",".join(vertex_label(x) for x in v) + ")"
    return str(v)


class Quiver:
    def __init__(self, vertices: Iterable, arrows: Iterable[Arrow]):
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        self.vertex_index = {v: k for k, v in enumerate(self.vertices)}
        if len(self.vertex_index) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        self.arrow_index = {}
        for k, a in enumerate(self.arrows):
            if a.id in self.arrow_index:
                raise ValueError(f"duplicate arrow id {a.id!r}")
            if a.source not in self.vertex_index or a.target not in self.vertex_index:
                raise ValueError(f"arrow {a.id!r} references an unknown vertex")
            if not isinstance(a.grade, int) or a.grade < 1:
                raise ValueError(f"arrow {a.id!r} must have a positive integer grade")
            self.arrow_index[a.id] = k
        self.out_arrows = {v: [] for v in self.vertices}
        for k, a in enumerate(self.arrows):
            self.out_arrows[a.source].append(k)

    def arrow(self, arrow_id: str) -> Arrow:
        return self.arrows[self.arrow_index[arrow_id]]

    def path(self, arrow_ids: Sequence[str], vertex=None) -> Path:
        """Build a Path from arrow ids, checking composability; ``vertex`` for trivial paths."""
        arrow_ids = tuple(arrow_ids)
        if not arrow_ids:
            if vertex not in self.vertex_index:
                raise ValueError("trivial path needs a vertex")
            return Path(vertex, vertex, ())
        arrows = [self.arrow(i) for i in arrow_ids]
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise ValueError(f"arrows {a.id!r} and {b.id!r} do not compose")
        return Path(arrows[0].source, arrows[-1].target, arrow_ids)

    def grade(self, path: Path) -> int:
        return sum(self.arrow(i).grade for i in path.arrows)

    def path_key(self, path: Path):
        return (self.vertex_index[path.source], tuple(self.arrow_index[i] for i in path.arrows))

    def path_name(self, path: Path) -> str:
        if not path.arrows:
            return f"e{vertex_label(path.source)}"
        return "".join(self.arrow(i).name for i in path.arrows)

    def concat(self, p: Path, q: Path) -> Path:
        if p.target != q.source:
            raise ValueError("paths do not compose")
        return Path(p.source, q.target, p.arrows + q.arrows)

    @property
    def uniform_grade(self) -> bool:
        return all(a.grade == 1 for a in self.arrows)

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.vertices == other.vertices and self.arrows == other.arrows

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


class PathPolynomial:
    """Linear combination of parallel paths of equal grade."""

    __slots__ = ("terms", "source", "target", "grade")

    def __init__(self, quiver: Quiver, terms: dict, order: int = 1):
        self.terms = {p: scalar(c, order) for p, c in terms.items() if c != 0}
        ends = {(p.source, p.target, quiver.grade(p)) for p in self.terms}
        if len(ends) > 1:
            raise RelationError(f"relation terms are not parallel of equal grade: {sorted(map(str, ends))}")
        self.source, self.target, self.grade = ends.pop() if ends else (None, None, None)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, PathPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"PathPolynomial({len(self.terms)} terms, {self.source}->{self.target})"


def _term_str(c, name, first):
    if c == 1:
        return name if first else f"+ {name}"
    if c == -1:
        return f"-{name}" if first else f"- {name}"
    s = str(c)
    if c.is_rational() and not first and s.startswith("-"):
        return f"- {s[1:]} {name}"
    if not c.is_rational():
        s = f"({s})"
    return f"{s} {name}" if first else f"+ {s} {name}"


class QuiverPresentation:
    def __init__(self, quiver: Quiver, relations: Iterable[PathPolynomial] = (), order: int = 1):
        self.quiver = quiver
        self.order = order
        rels = []
        for rel in relations:
            if not rel:
                continue
            if rel.grade == 0:
                raise RelationError("relations of grade 0 are not supported")
            rels.append(rel)
        self.relations = tuple(rels)
        self._lock = threading.Lock()
        self._engine = None

    @property
    def vertices(self):
        return self.quiver.vertices

    @property
    def arrows(self):
        return self.quiver.arrows

    def engine(self, max_degree: int = DEFAULT_MAX_DEGREE) -> "GradedQuotient":
        with self._lock:
            if self._engine is None:
                self._engine = GradedQuotient(self)
        self._engine.max_degree = max(self._engine.max_degree, max_degree)
        return self._engine

    def relation_from(self, terms: Iterable) -> PathPolynomial:
        """Helper: ``terms`` is an iterable of (coeff, [arrow ids])."""
        out = {}
        for c, ids in terms:
            p = self.quiver.path(ids)
            out[p] = out.get(p, 0) + scalar(c, self.order)
        return PathPolynomial(self.quiver, out, self.order)

    def format_relation(self, rel: PathPolynomial) -> str:
        """Render as ``lead = -(rest)`` in space-separated arrow names."""
        q = self.quiver
        ordered = sorted(rel.terms, key=q.path_key, reverse=True)
        names = {p: " ".join(q.arrow(i).name for i in p.arrows) for p in ordered}
        lead, rest = ordered[0], ordered[1:]
        c0 = rel.terms[lead]
        lhs = names[lead] if c0 == 1 else _term_str(c0, names[lead], True)
        if not rest:
            return f"{lhs} = 0"
        rhs = [_term_str(-rel.terms[p], names[p], k == 0) for k, p in enumerate(rest)]
        return f"{lhs} = {' '.join(rhs)}"

    def __repr__(self):
        return f"QuiverPresentation({self.quiver!r}, {len(self.relations)} relations)"


# -- path enumeration ---------------------------------------------------------


def _paths_by_grade(q: Quiver, m: int, cache: dict) -> list:
    """Internal paths (source index, arrow index tuple) of grade m, unsorted."""
    if m in cache:
        return cache[m]
    if m == 0:
        out = [(k, ()) for k in range(len(q.vertices))]
    else:
        out = []
        for k, a in enumerate(q.arrows):
            g = a.grade
            if g > m:
                continue
            if g == m:
                out.append((q.vertex_index[a.source], (k,)))
                continue
            for src, arrs in _paths_by_grade(q, m - g, cache):
                end = q.arrows[arrs[-1]].target if arrs else q.vertices[src]
                if end == a.source:
                    out.append((src, arrs + (k,)))
    cache[m] = out
    return out


def _to_path(q: Quiver, internal) -> Path:
    src, arrs = internal
    if not arrs:
        v = q.vertices[src]
        return Path(v, v, ())
    return Path(q.vertices[src], q.arrows[arrs[-1]].target, tuple(q.arrows[k].id for k in arrs))


def _internal(q: Quiver, p: Path):
    return (q.vertex_index[p.source], tuple(q.arrow_index[i] for i in p.arrows))


def _internal_target(q: Quiver, internal):
    src, arrs = internal
    return q.arrows[arrs[-1]].target if arrs else q.vertices[src]


def path_basis(q: Quiver, m: int, source=None, target=None) -> list:
    """All paths of total grade m, optionally with fixed endpoints, in deterministic order."""
    if m < 0:
        raise ValueError("grade must be nonnegative")
    paths = sorted(_paths_by_grade(q, m, {}))
    out = [_to_path(q, p) for p in paths]
    return [p for p in out if (source is None or p.source == source) and (target is None or p.target == target)]


# -- normal-form engine ---------------------------------------------------------


def _accumulate(vec: dict, key, value):
    cur = vec.get(key)
    if cur is None:
        if value:
            vec[key] = value
    else:
        new = cur + value
        if new:
            vec[key] = new
        else:
            del vec[key]


class _Grade:
    __slots__ = ("candidates", "col", "ideal", "normal", "normal_set")

    def __init__(self, candidates, col, ideal, normal):
        self.candidates = candidates
        self.col = col
        self.ideal = ideal
        self.normal = normal
        self.normal_set = set(normal)


class GradedQuotient:
    """Degree-by-degree normal forms in kQ/I.

    In grade m the candidates are (normal path of grade m - g) * (arrow of
    grade g). Every grade-m path p = q*a is rewritten as NF(q)*a, a linear
    projection onto the candidates whose kernel is I_{m-g}*a. The ideal
    in grade m then maps onto the span of the rewritten a*rho with a normal,
    and its pivots (lex-largest) are removed from the candidates.
    """

    def __init__(self, presentation: QuiverPresentation, max_degree: int = DEFAULT_MAX_DEGREE):
        self.p = presentation
        self.q = presentation.quiver
        self.order = presentation.order
        self.max_degree = max_degree
        self._grades: dict[int, _Grade] = {}
        self._nf: dict = {}
        self._lock = threading.RLock()
        self._rels_by_grade: dict[int, list] = {}
        for rel in presentation.relations:
            terms = [(_internal(self.q, p), c) for p, c in rel.terms.items()]
            src = self.q.vertex_index[rel.source]
            self._rels_by_grade.setdefault(rel.grade, []).append((src, terms))
        self._one = CyclotomicScalar.one(self.order)

    def grade_data(self, m: int) -> _Grade:
        if m > self.max_degree:
            raise DegreeCapError(f"grade {m} exceeds cap {self.max_degree}")
        with self._lock:
            g = self._grades.get(m)
            if g is None:
                g = self._build(m)
                self._grades[m] = g
            return g

    def _build(self, m: int) -> _Grade:
        q = self.q
        if m == 0:
            normal = [(k, ()) for k in range(len(q.vertices))]
            return _Grade(normal, {p: len(normal) - 1 - i for i, p in enumerate(normal)},
                          Subspace.zero(len(normal), self.order), normal)
        cands = []
        for k, a in enumerate(q.arrows):
            if a.grade > m:
                continue
            for src, arrs in self.grade_data(m - a.grade).normal:
                end = q.arrows[arrs[-1]].target if arrs else q.vertices[src]
                if end == a.source:
                    cands.append((src, arrs + (k,)))
        cands.sort()
        N = len(cands)
        col = {p: N - 1 - i for i, p in enumerate(cands)}
        builder = EchelonBuilder(N, self.order)
        # Grade-m data is not cached yet, so rewrite against the candidate columns directly.
        for rg, rels in self._rels_by_grade.items():
            if rg > m:
                continue
            for a_src, a_arrs in self.grade_data(m - rg).normal:
                a_end = q.arrows[a_arrs[-1]].target if a_arrs else q.vertices[a_src]
                for src, terms in rels:
                    if q.vertices[src] != a_end:
                        continue
                    vec: dict = {}
                    for (_, t_arrs), c in terms:
                        for cand, x in self._rewrite((a_src, a_arrs + t_arrs)).items():
                            _accumulate(vec, col[cand], c * x)
                    builder.add(vec)
        ideal = builder.subspace()
        pivots = set(ideal.pivots)
        normal = [p for p in cands if col[p] not in pivots]
        return _Grade(cands, col, ideal, normal)

    def _rewrite(self, path) -> dict:
        """E(path) = NF(prefix) * last arrow, as {candidate: coeff}."""
        src, arrs = path
        prefix = (src, arrs[:-1])
        last = arrs[-1]
        return {(s, a + (last,)): c for (s, a), c in self.normal_form(prefix).items()}

    def normal_form(self, path) -> dict:
        """NF of an internal path as {normal internal path: coeff}."""
        with self._lock:
            hit = self._nf.get(path)
            if hit is not None:
                return hit
            src, arrs = path
            if not arrs:
                result = {path: self._one}
            else:
                m = sum(self.q.arrows[k].grade for k in arrs)
                g = self.grade_data(m)
                if path in g.normal_set:
                    result = {path: self._one}
                else:
                    vec = {g.col[c]: x for c, x in self._rewrite(path).items()}
                    vec = g.ideal.reduce(vec)
                    result = {g.candidates[len(g.candidates) - 1 - i]: x for i, x in vec.items()}
            self._nf[path] = result
            return result

    def reduce(self, combo: dict) -> dict:
        """NF of {internal path: coeff}."""
        out: dict = {}
        for path, c in combo.items():
            for p, x in self.normal_form(path).items():
                _accumulate(out, p, c * x)
        return out

    def normal_paths(self, m: int, source=None, target=None) -> list:
        q = self.q
        out = []
        for p in self.grade_data(m).normal:
            if source is not None and q.vertices[p[0]] != source:
                continue
            if target is not None and _internal_target(q, p) != target:
                continue
            out.append(p)
        return out

    def dim(self, m: int, source=None, target=None) -> int:
        return len(self.normal_paths(m, source, target))


def explicit_ideal(p: QuiverPresentation, m: int) -> tuple:
    """Span of all a*rho*b in grade m over the full path basis.

    Returns (Subspace, paths) where column j of the subspace is
    ``paths[len(paths) - 1 - j]`` and ``paths`` is in increasing order.
    """
    q = p.quiver
    cache: dict = {}
    paths = sorted(_paths_by_grade(q, m, cache))
    N = len(paths)
    col = {x: N - 1 - i for i, x in enumerate(paths)}
    builder = EchelonBuilder(N, p.order)
    for rel in p.relations:
        g = rel.grade
        if g > m:
            continue
        terms = [(_internal(q, t), c) for t, c in rel.terms.items()]
        for ga in range(m - g + 1):
            lefts = [a for a in _paths_by_grade(q, ga, cache) if _internal_target(q, a) == rel.source]
            rights = [b for b in _paths_by_grade(q, m - g - ga, cache) if b[0] == q.vertex_index[rel.target]]
            for a_src, a_arrs in lefts:
                for _, b_arrs in rights:
                    builder.add({col[(a_src, a_arrs + t_arrs + b_arrs)]: c for (_, t_arrs), c in terms})
    return builder.subspace(), [_to_path(q, x) for x in paths]


@dataclass
class GradedDimension:
    dim: int
    transversal: list
    _presentation: QuiverPresentation = field(repr=False)
    _grade: int = field(repr=False)

    @cached_property
    def ideal_span(self) -> Subspace:
        return explicit_ideal(self._presentation, self._grade)[0]


def graded_dimension(p: QuiverPresentation, m: int, source=None, target=None,
                     max_degree: int = DEFAULT_MAX_DEGREE) -> GradedDimension:
    """dim of the grade-m piece of kQ/I (optionally between fixed endpoints)."""
    if m < 0:
        raise ValueError("grade must be nonnegative")
    if m > max_degree:
        raise DegreeCapError(f"grade {m} exceeds cap {max_degree}")
    eng = p.engine(max_degree)
    normal = eng.normal_paths(m, source, target)
    return GradedDimension(len(normal), [_to_path(p.quiver, x) for x in normal], p, m)


@dataclass
class FiniteDimReport:
    status: str
    per_degree_dims: list
    total_dim: int | None
    bound_used: int

    @property
    def finite(self) -> bool:
        return self.status == "Finite"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "per_degree_dims": self.per_degree_dims,
            "total_dim": self.total_dim,
            "bound_used": self.bound_used,
        }

    def __str__(self):
        if self.finite:
            return f"Finite, total dim {self.total_dim}"
        return f"UnknownAtBound (bound {self.bound_used}), dims {self.per_degree_dims}"


def finite_dimensionality(p: QuiverPresentation, bound: int = DEFAULT_FINDIM_BOUND) -> FiniteDimReport:
    """Scan grades until the quotient vanishes.

    With all arrows of grade 1 a zero grade ends the scan. Mixed grades scan
    to the bound, and finiteness is declared only when the zero run is at
    least as long as the largest arrow grade.
    """
    eng = p.engine(bound)
    if p.quiver.uniform_grade:
        dims = []
        for m in range(bound + 1):
            d = eng.dim(m)
            if d == 0:
                return FiniteDimReport("Finite", dims, sum(dims), m)
            dims.append(d)
        return FiniteDimReport("UnknownAtBound", dims, None, bound)
    window = max(a.grade for a in p.arrows)
    dims = [eng.dim(m) for m in range(bound + 1)]
    run = 0
    for m, d in enumerate(dims):
        run = run + 1 if d == 0 else 0
        if run == window:
            head = dims[: m - window + 1]
            while head and head[-1] == 0:
                head.pop()
            return FiniteDimReport("Finite", head, sum(head), bound)
    return FiniteDimReport("UnknownAtBound", dims, None, bound)


def top_grade(p: QuiverPresentation, bound: int = DEFAULT_FINDIM_BOUND) -> int:
    report = finite_dimensionality(p, bound)
    if not report.finite:
        raise NotFiniteDimensionalError(f"no vanishing grade found up to {bound}")
    return len(report.per_degree_dims) - 1


# -- normalization and comparison ---------------------------------------------------


def normalize(p: QuiverPresentation) -> QuiverPresentation:
    """Canonical relations: per (source, target, grade) bucket, RREF with monic lex-largest lead."""
    q = p.quiver
    buckets: dict = {}
    for rel in p.relations:
        key = (rel.grade, q.vertex_index[rel.source], q.vertex_index[rel.target])
        buckets.setdefault(key, []).append(rel)
    out = []
    for key in sorted(buckets):
        rels = buckets[key]
        support = sorted({q.path_key(t): t for rel in rels for t in rel.terms}.items())
        paths = [t for _, t in support]
        N = len(paths)
        col = {t: N - 1 - i for i, t in enumerate(paths)}
        builder = EchelonBuilder(N, p.order)
        for rel in rels:
            builder.add({col[t]: c for t, c in rel.terms.items()})
        for row in builder.rref_rows():
            out.append(PathPolynomial(q, {paths[N - 1 - j]: c for j, c in row.items()}, p.order))
    return QuiverPresentation(q, out, p.order)


def _check_bijection(mapping: dict, domain, codomain, what: str):
    if set(mapping) != set(domain):
        raise ValueError(f"{what} map must be defined on exactly the {what}s of the first presentation")
    images = list(mapping.values())
    if len(set(images)) != len(images) or set(images) != set(codomain):
        raise ValueError(f"{what} map is not a bijection onto the second presentation")


def relabel(p: QuiverPresentation, vertex_map: dict, arrow_map: dict, like: Quiver) -> QuiverPresentation:
    """Transport p along the maps onto the vertex/arrow ordering of ``like``."""
    q = p.quiver
    renamed = {}
    for a in q.arrows:
        renamed[arrow_map[a.id]] = (vertex_map[a.source], vertex_map[a.target], a.grade)
    arrows = []
    for b in like.arrows:
        src, tgt, grade = renamed[b.id]
        arrows.append(Arrow(b.id, src, tgt, b.name, grade))
    new_q = Quiver(like.vertices, arrows)
    rels = []
    for rel in p.relations:
        terms = {}
        for t, c in rel.terms.items():
            ids = tuple(arrow_map[i] for i in t.arrows)
            terms[Path(vertex_map[t.source], vertex_map[t.target], ids)] = c
        rels.append(PathPolynomial(new_q, terms, p.order))
    return QuiverPresentation(new_q, rels, p.order)


def _relations_key(p: QuiverPresentation):
    return [sorted(((t.arrows, t.source, t.target), c) for t, c in rel.terms.items()) for rel in p.relations]


def equal_after_relabel(p1: QuiverPresentation, p2: QuiverPresentation,
                        vertex_map: dict | None = None, arrow_map: dict | None = None) -> bool:
    """Do the presentations agree once p1's vertices and arrows are renamed by the maps?"""
    if vertex_map is None:
        vertex_map = {v: v for v in p1.vertices}
    if arrow_map is None:
        arrow_map = {a.id: a.id for a in p1.arrows}
    _check_bijection(vertex_map, p1.vertices, p2.vertices, "vertex")
    _check_bijection(arrow_map, [a.id for a in p1.arrows], [a.id for a in p2.arrows], "arrow")
    moved = relabel(p1, vertex_map, arrow_map, p2.quiver)
    for a, b in zip(moved.arrows, p2.arrows):
        if (a.source, a.target, a.grade) != (b.source, b.target, b.grade):
            return False
    order = common_order(p1.order, p2.order)
    n1 = normalize(_with_order(moved, order))
    n2 = normalize(_with_order(p2, order))
    return _relations_key(n1) == _relations_key(n2)


def _with_order(p: QuiverPresentation, r: int) -> QuiverPresentation:
    if p.order == r:
        return p
    rels = [PathPolynomial(p.quiver, {t: scalar(c, r) for t, c in rel.terms.items()}, r) for rel in p.relations]
    return QuiverPresentation(p.quiver, rels, r)


def match_by_name(p1: QuiverPresentation, p2: QuiverPresentation, vertex_map: dict | None = None):
    """Arrow map pairing arrows with equal (name, mapped source, mapped target).

    Returns None when the pairing is not a bijection.
    """
    if vertex_map is None:
        vertex_map = {v: v for v in p1.vertices}
    index: dict = {}
    for b in p2.arrows:
        index.setdefault((b.name, b.source, b.target), []).append(b.id)
    arrow_map = {}
    for a in p1.arrows:
        key = (a.name, vertex_map.get(a.source), vertex_map.get(a.target))
        bucket = index.get(key)
        if not bucket:
            return None
        arrow_map[a.id] = bucket.pop(0)
    if any(index.values()):
        return None
    return arrow_map


# -- export / import -------------------------------------------------------------------


def _label_json(v):
    if isinstance(v, tuple):
        return [_label_json(x) for x in v]
    return v


def _label_from_json(v):
    if isinstance(v, list):
        return tuple(_label_from_json(x) for x in v)
    if isinstance(v, (int, str)) and not isinstance(v, bool):
        return v
    raise ParseError(f"vertex labels must be ints, strings or arrays, got {v!r}")


def presentation_to_json(p: QuiverPresentation) -> dict:
    q = p.quiver
    rels = []
    for rel in p.relations:
        terms = sorted(rel.terms.items(), key=lambda tc: q.path_key(tc[0]), reverse=True)
        rels.append([{"coeff": c.to_json(), "path": list(t.arrows)} for t, c in terms])
    return {
        "vertices": [_label_json(v) for v in q.vertices],
        "arrows": [
            {"id": a.id, "name": a.name, "source": _label_json(a.source),
             "target": _label_json(a.target), "grade": a.grade}
            for a in q.arrows
        ],
        "relations": rels,
    }


def json_export(p: QuiverPresentation) -> str:
    import json

    return json.dumps(presentation_to_json(p), indent=2)


def presentation_from_json(data) -> QuiverPresentation:
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    if not isinstance(data.get("vertices"), list):
        raise ParseError("must be a list", "vertices")
    vertices = [_label_from_json(v) for v in data["vertices"]]
    arrows = []
    for k, a in enumerate(data.get("arrows", [])):
        where = f"arrows[{k}]"
        if not isinstance(a, dict) or "id" not in a or "source" not in a or "target" not in a:
            raise ParseError("arrow needs id, source and target", where)
        grade = a.get("grade", 1)
        if not isinstance(grade, int) or grade < 1:
            raise ParseError("grade must be a positive integer", where)
        arrows.append(Arrow(str(a["id"]), _label_from_json(a["source"]), _label_from_json(a["target"]),
                            str(a.get("name", a["id"])), grade))
    try:
        q = Quiver(vertices, arrows)
    except ValueError as exc:
        raise ParseError(str(exc), "arrows") from None
    parsed = []
    for k, rel in enumerate(data.get("relations", [])):
        where = f"relations[{k}]"
        if not isinstance(rel, list):
            raise ParseError("must be a list of terms", where)
        terms = []
        for t, term in enumerate(rel):
            if not isinstance(term, dict) or not isinstance(term.get("path"), list) or not term["path"]:
                raise ParseError("term needs a nonempty 'path'", f"{where}[{t}]")
            try:
                c = CyclotomicScalar.from_json(term.get("coeff", 1))
                path = q.path([str(i) for i in term["path"]])
            except (ValueError, KeyError, ZeroDivisionError) as exc:
                raise ParseError(str(exc), f"{where}[{t}]") from None
            terms.append((path, c))
        parsed.append((where, terms))
    order = common_order(*(c.r for _, terms in parsed for _, c in terms))
    rels = []
    for where, terms in parsed:
        acc: dict = {}
        for path, c in terms:
            c = scalar(c, order)
            acc[path] = acc[path] + c if path in acc else c
        try:
            rels.append(PathPolynomial(q, acc, order))
        except RelationError as exc:
            raise ParseError(str(exc), where) from None
    return QuiverPresentation(q, rels, order)


def _dot_id(v) -> str:
    return '"' + vertex_label(v).replace('"', r'\"') + '"'


def dot_export(p: QuiverPresentation) -> str:
    q = p.quiver
    if not q.vertices:
        return "digraph { }\n"
    lines = ["digraph {"]
    for rel in p.relations:
        lines.append(f"  // {p.format_relation(rel)}  [{vertex_label(rel.source)} -> {vertex_label(rel.target)}]")
    for v in q.vertices:
        lines.append(f"  {_dot_id(v)} [label={_dot_id(v)}];")
    for a in q.arrows:
        label = a.name if a.grade == 1 else f"{a.name} ({a.grade})"
        lines.append(f'  {_dot_id(a.source)} -> {_dot_id(a.target)} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def text_export(p: QuiverPresentation) -> str:
    q = p.quiver
    lines = [f"vertices: {', '.join(vertex_label(v) for v in q.vertices) or '(none)'}", "arrows:"]
    for a in q.arrows:
        grade = "" if a.grade == 1 else f"  [grade {a.grade}]"
        lines.append(f"  {a.name}: {vertex_label(a.source)} -> {vertex_label(a.target)}{grade}")
    lines.append("relations:")
    for rel in p.relations:
        lines.append(f"  {p.format_relation(rel)}    ({vertex_label(rel.source)} -> {vertex_label(rel.target)})")
    return "\n".join(lines) + "\n"
