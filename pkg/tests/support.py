"""Shared builders for the test suite.

Golden presentations here are written out by hand from the bundled example
(walking each word forward from its start vertex), independently of the
library's own constructions.
"""

from itertools import combinations, product

from hypothesis import strategies as st

from skewquiver.cli import example_path, parse_algebra
from skewquiver.gradedalg import DiagonalAction, NcPolynomial, QuadraticAlgebra, all_words, word_index
from skewquiver.linalg import EchelonBuilder
from skewquiver.quiver import Arrow, Quiver, QuiverPresentation, path_basis

NAMES4 = ["x1", "x2", "x3", "x4"]


def word(text):
    """'x2x3' -> (1, 2), 0-based generator indices."""
    return tuple(int(t) - 1 for t in text.split("x")[1:])


def poly(spec, r=1):
    """{'x1x1': 1, 'x2x2': -1} -> NcPolynomial."""
    return NcPolynomial({word(w): c for w, c in spec.items()}, r)


def algebra(n, specs, r=1, dim=None, names=None):
    names = names or [f"x{j + 1}" for j in range(n)]
    return QuadraticAlgebra.from_polynomials(names, [poly(s, r) for s in specs], dim, r)


def example():
    return parse_algebra(example_path())


S_RELATIONS = [
    {"x1x1": 1, "x2x2": 1},
    {"x1x3": 1, "x3x1": 1},
    {"x1x4": 1, "x4x1": 1},
    {"x2x3": 1, "x3x2": 1},
    {"x2x4": 1, "x4x2": 1},
    {"x3x4": 1, "x4x3": 1},
]

DUAL_RELATIONS = [
    {"x2x2": 1, "x1x1": -1},
    {"x3x1": 1, "x1x3": -1},
    {"x4x1": 1, "x1x4": -1},
    {"x2x1": 1},
    {"x1x2": 1},
    {"x3x2": 1, "x2x3": -1},
    {"x4x2": 1, "x2x4": -1},
    {"x4x3": 1, "x3x4": -1},
    {"x3x3": 1},
    {"x4x4": 1},
]


def commutative(n, r=1, dim=None):
    names = [f"x{j + 1}" for j in range(n)]
    specs = [{f"x{i + 1}x{j + 1}": 1, f"x{j + 1}x{i + 1}": -1} for i, j in combinations(range(n), 2)]
    return algebra(n, specs, r, dim if dim is not None else n, names)


def exterior(n):
    specs = [{f"x{i + 1}x{i + 1}": 1} for i in range(n)]
    specs += [{f"x{i + 1}x{j + 1}": 1, f"x{j + 1}x{i + 1}": 1} for i, j in combinations(range(n), 2)]
    return algebra(n, specs)


def brute_force_dims(A, m):
    """dim A_m by spanning every u*f*v directly, with no reuse of lower degrees."""
    n = A.n
    builder = EchelonBuilder(n ** m, A.order)
    for f in A.relations.basis:
        for i in range(m - 1):
            for pre in product(range(n), repeat=i):
                for post in product(range(n), repeat=m - 2 - i):
                    vec = {}
                    for c, x in f.items():
                        a, b = divmod(c, n)
                        word = pre + (n - 1 - a, n - 1 - b) + post
                        vec[word_index(word, n)] = x
                    builder.add(vec)
    return n ** m - len(builder)


# -- golden presentations from the bundled example -----------------------------


def _forward(arrow_of, start, w, step):
    """Arrow ids of the word w read forward from vertex ``start``."""
    ids, v = [], start
    for j in w:
        a = arrow_of(j, v)
        ids.append(a)
        v = step(j, v)
    return ids


def _relations(p, specs, starts, arrow_of, step):
    out = []
    for spec in specs:
        for s in starts:
            out.append(p.relation_from([(c, _forward(arrow_of, s, word(w), step)) for w, c in spec.items()]))
    return out


def golden_mckay():
    """Two vertices, x1 loops, x2..x4 both ways."""
    arrows = [Arrow(f"loop{v}", v, v, "x1") for v in (0, 1)]
    arrows += [Arrow(f"{x}_{v}", v, 1 - v, x) for x in NAMES4[1:] for v in (0, 1)]
    return Quiver([0, 1], arrows)


def golden_skew():
    q = golden_mckay()
    p = QuiverPresentation(q)

    def arrow_of(j, v):
        return f"loop{v}" if j == 0 else f"{NAMES4[j]}_{v}"

    def step(j, v):
        return v if j == 0 else 1 - v

    return QuiverPresentation(q, _relations(p, S_RELATIONS, (0, 1), arrow_of, step))


def golden_quotient():
    q = Quiver([1], [Arrow("l", 1, 1, "x1")])
    p = QuiverPresentation(q)
    return QuiverPresentation(q, [p.relation_from([(1, ["l", "l"])])])


def golden_beilinson():
    arrows = [Arrow(f"{x}@{i}", i, i + 1, x) for i in range(3) for x in NAMES4]
    q = Quiver(range(4), arrows)
    p = QuiverPresentation(q)
    rels = _relations(p, DUAL_RELATIONS, (0, 1), lambda j, v: f"{NAMES4[j]}@{v}", lambda j, v: v + 1)
    return QuiverPresentation(q, rels)


def golden_skew_beilinson():
    vertices = [(i, c) for i in range(4) for c in range(2)]
    arrows = []
    for i in range(3):
        for c in range(2):
            arrows.append(Arrow(f"x1@{i},{c}", (i, c), (i + 1, c), "x1"))
            for x in NAMES4[1:]:
                arrows.append(Arrow(f"{x}@{i},{c}", (i, c), (i + 1, 1 - c), x))
    q = Quiver(vertices, arrows)
    p = QuiverPresentation(q)

    def step(j, v):
        i, c = v
        return (i + 1, c if j == 0 else 1 - c)

    starts = [(i, c) for i in range(2) for c in range(2)]
    rels = _relations(p, DUAL_RELATIONS, starts, lambda j, v: f"{NAMES4[j]}@{v[0]},{v[1]}", step)
    return QuiverPresentation(q, rels)


def golden_gamma():
    V = [(i, 1) for i in range(4)]
    arrows = [Arrow(f"a{i}", (i, 1), (i + 1, 1), "x1") for i in range(3)]
    for i in range(2):
        for name in ("x2x3", "x2x4", "x3x4"):
            arrows.append(Arrow(f"{name}@{i}", (i, 1), (i + 2, 1), name, 2))
    q = Quiver(V, arrows)
    p = QuiverPresentation(q)
    rels = [
        p.relation_from([(1, ["x2x3@0", "a2"])]),
        p.relation_from([(1, ["a0", "x2x3@1"])]),
        p.relation_from([(1, ["x2x4@0", "a2"])]),
        p.relation_from([(1, ["a0", "x2x4@1"])]),
        p.relation_from([(1, ["x3x4@0", "a2"]), (-1, ["a0", "x3x4@1"])]),
        p.relation_from([(1, ["a0", "a1", "a2"])]),
    ]
    return QuiverPresentation(q, rels)


# -- hypothesis strategies -------------------------------------------------------

coeffs = st.integers(-3, 3)


@st.composite
def quadratic_algebras(draw, max_n=3, max_rels=4):
    """Random quadratic algebra over Q with small integer coefficients."""
    n = draw(st.integers(1, max_n))
    words = list(all_words(n, 2))
    specs = []
    for _ in range(draw(st.integers(0, max_rels))):
        terms = draw(st.dictionaries(st.sampled_from(words), coeffs.filter(bool), max_size=3))
        specs.append(terms)
    names = [f"x{j + 1}" for j in range(n)]
    return QuadraticAlgebra.from_polynomials(names, [NcPolynomial(t) for t in specs])


@st.composite
def equivariant_algebras(draw, max_n=3, max_r=4, max_rels=3):
    """(A, act) with every relation weight-homogeneous, so the action is stable."""
    n = draw(st.integers(1, max_n))
    r = draw(st.integers(1, max_r))
    act = DiagonalAction(r, tuple(draw(st.lists(st.integers(1, r), min_size=n, max_size=n))))
    blocks = {}
    for w in all_words(n, 2):
        blocks.setdefault(act.word_weight(w), []).append(w)
    specs = []
    for _ in range(draw(st.integers(0, max_rels))):
        block = blocks[draw(st.sampled_from(sorted(blocks)))]
        specs.append(draw(st.dictionaries(st.sampled_from(block), coeffs.filter(bool), max_size=3)))
    names = [f"x{j + 1}" for j in range(n)]
    return QuadraticAlgebra.from_polynomials(names, [NcPolynomial(t) for t in specs]), act


@st.composite
def presentations(draw, max_vertices=3, max_arrows=4, max_rels=3):
    nv = draw(st.integers(1, max_vertices))
    na = draw(st.integers(0, max_arrows))
    arrows = []
    for k in range(na):
        s, t = draw(st.integers(0, nv - 1)), draw(st.integers(0, nv - 1))
        arrows.append(Arrow(f"a{k}", s, t, f"a{k}"))
    q = Quiver(range(nv), arrows)
    p = QuiverPresentation(q)
    rels = []
    paths2 = path_basis(q, 2)
    if paths2:
        for _ in range(draw(st.integers(0, max_rels))):
            first = draw(st.sampled_from(paths2))
            parallel = [x for x in paths2 if (x.source, x.target) == (first.source, first.target)]
            chosen = draw(st.lists(st.sampled_from(parallel), min_size=1, max_size=3, unique=True))
            cs = draw(st.lists(st.integers(-2, 2).filter(bool), min_size=len(chosen), max_size=len(chosen)))
            rels.append(p.relation_from([(c, list(x.arrows)) for c, x in zip(cs, chosen)]))
    return QuiverPresentation(q, rels)


@st.composite
def acyclic_presentations(draw):
    nv = draw(st.integers(2, 4))
    arrows = []
    for k in range(draw(st.integers(1, 6))):
        s = draw(st.integers(0, nv - 2))
        t = draw(st.integers(s + 1, nv - 1))
        arrows.append(Arrow(f"a{k}", s, t, f"a{k}"))
    q = Quiver(range(nv), arrows)
    p = QuiverPresentation(q)
    rels = []
    for m in (2, 3):
        paths = path_basis(q, m)
        for _ in range(draw(st.integers(0, 2)) if paths else 0):
            first = draw(st.sampled_from(paths))
            par = [x for x in paths if (x.source, x.target) == (first.source, first.target)]
            chosen = draw(st.lists(st.sampled_from(par), min_size=1, max_size=2, unique=True))
            rels.append(p.relation_from([(draw(st.sampled_from([1, -1, 2])), list(x.arrows)) for x in chosen]))
    kept = draw(st.lists(st.sampled_from(list(range(nv))), unique=True))
    return QuiverPresentation(q, rels), kept


# -- acceptance bookkeeping ---------------------------------------------------------

ACCEPTANCE_RESULTS: dict = {}
