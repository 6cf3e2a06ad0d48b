"""Acceptance suite: the ten end-to-end criteria with their runtime budgets.

Each test prints one PASS/FAIL line (also collected into the terminal
summary). The example goldens come from support.py and are built
by hand, not by the library's constructions.
"""

import time
from contextlib import contextmanager
from itertools import product

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from skewquiver.constructions import (
    beilinson_presentation,
    corner_algebra,
    mckay_quiver,
    remove_trivial_vertex,
    skew_group_presentation,
    skew_layered_presentation,
)
from skewquiver.exactfield import root_of_unity, scalar
from skewquiver.gradedalg import (
    DiagonalAction,
    dual_action,
    frobenius_pairing_check,
    hdet_diagonal,
    hilbert_function,
    koszul_numeric_check,
    koszul_syzygy_space,
    quadratic_dual,
)
from skewquiver.linalg import Matrix, Subspace, kernel, rref
from skewquiver.quiver import (
    QuiverPresentation,
    equal_after_relabel,
    finite_dimensionality,
    graded_dimension,
    match_by_name,
    normalize,
)
from support import (
    ACCEPTANCE_RESULTS,
    DUAL_RELATIONS,
    acyclic_presentations,
    algebra,
    brute_force_dims,
    commutative,
    equivariant_algebras,
    example,
    golden_beilinson,
    golden_gamma,
    golden_mckay,
    golden_quotient,
    golden_skew,
    golden_skew_beilinson,
    presentations,
    quadratic_algebras,
)


@contextmanager
def criterion(n, title, budget=None):
    """Time the block, enforce the budget, and record a PASS/FAIL line."""
    start = time.perf_counter()
    detail = ""
    try:
        yield
        elapsed = time.perf_counter() - start
        ok = budget is None or elapsed < budget
        if not ok:
            detail = f" (over budget {budget:g}s)"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        ok = False
        detail = f" ({type(exc).__name__}: {exc})"
        raise
    finally:
        limit = f" < {budget:g}s" if budget is not None else ""
        line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}  [{elapsed:.2f}s{limit}]{detail}"
        ACCEPTANCE_RESULTS[n] = line
        print(line)
    assert ok, line


def same_by_name(p1, p2, vertex_map=None):
    amap = match_by_name(p1, p2, vertex_map)
    return amap is not None and equal_after_relabel(p1, p2, vertex_map, amap)


def test_01_mckay_quiver():
    with criterion(1, "McKay quiver r=2, a=(2,1,1,1)", 1):
        S, act = example()
        q = mckay_quiver(act, S.n, S.generator_names)
        assert list(q.vertices) == [0, 1] and len(q.arrows) == 8
        loops = sorted((a.name, a.source) for a in q.arrows if a.source == a.target)
        assert loops == [("x1", 0), ("x1", 1)]
        assert same_by_name(QuiverPresentation(golden_mckay()), QuiverPresentation(q))


def test_02_skew_presentation():
    with criterion(2, "skew group presentation, 12 relations", 5):
        S, act = example()
        skew = skew_group_presentation(S, act)
        assert len(skew.relations) == 12
        gold = golden_skew()
        assert same_by_name(gold, skew)
        # per-bucket subspace comparison, spelled out
        amap = match_by_name(gold, skew)
        moved = normalize(gold)
        buckets = {}
        for rel in moved.relations:
            key = (rel.source, rel.target)
            buckets.setdefault(key, []).append({(tuple(amap[i] for i in t.arrows)): c for t, c in rel.terms.items()})
        mine = {}
        for rel in skew.relations:
            mine.setdefault((rel.source, rel.target), []).append({t.arrows: c for t, c in rel.terms.items()})
        assert set(buckets) == set(mine)
        for key in buckets:
            cols = sorted({w for row in buckets[key] + mine[key] for w in row})
            idx = {w: k for k, w in enumerate(cols)}

            def span(rows):
                return Subspace.span([{idx[w]: c for w, c in row.items()} for row in rows], len(cols))

            assert span(buckets[key]) == span(mine[key])


def test_03_quotient_gate():
    with criterion(3, "S*G/(e): one vertex, loop x1, x1^2 = 0, Finite total 2", 1):
        S, act = example()
        quo = remove_trivial_vertex(skew_group_presentation(S, act))
        assert list(quo.vertices) == [1] and len(quo.arrows) == 1 and len(quo.relations) == 1
        assert same_by_name(golden_quotient(), quo)
        rep = finite_dimensionality(quo)
        assert rep.finite and rep.per_degree_dims == [1, 1] and rep.total_dim == 2


def test_04_koszul_dual():
    with criterion(4, "quadratic dual equals the ten listed relations", 1):
        S, _ = example()
        D = quadratic_dual(S)
        expected = algebra(4, DUAL_RELATIONS).relations
        assert D.relations.ambient_dim == 16 and D.relations.dim == 10
        assert D.relations == expected


def test_05_homological_determinant():
    with criterion(5, "hdet(example) = 1; commutative hdet = zeta^(sum a)", 10):
        S, act = example()
        assert hdet_diagonal(S, act, 4) == 1
        cases = 0
        for d in (1, 2, 3, 4):
            A = commutative(d)
            for r in range(1, 7):
                for weights in product(range(1, r + 1), repeat=d):
                    assert hdet_diagonal(A, DiagonalAction(r, weights), d) == root_of_unity(r, sum(weights))
                    cases += 1
        assert cases == sum(r ** d for d in (1, 2, 3, 4) for r in range(1, 7))


def test_06_hilbert_and_koszul():
    with criterion(6, "Hilbert functions of S and S^!, Koszul proxies to degree 6", 60):
        S, _ = example()
        assert hilbert_function(S, 6) == [1, 4, 10, 20, 35, 56, 84]
        D = algebra(4, DUAL_RELATIONS)
        assert hilbert_function(D, 4) == [1, 4, 6, 4, 1]
        assert [brute_force_dims(S, m) for m in range(7)] == [1, 4, 10, 20, 35, 56, 84]
        assert [brute_force_dims(D, m) for m in range(5)] == [1, 4, 6, 4, 1]
        rep = koszul_numeric_check(S, 6)
        assert rep.ok
        assert rep.syzygy_dims == [1, 4, 6, 4, 1, 0, 0] == rep.dual_dims
        assert not any(rep.euler)
        assert [koszul_syzygy_space(S, i).dim for i in range(7)] == rep.syzygy_dims


def test_07_frobenius():
    with criterion(7, "Frobenius pairing on S^! with ell = 4"):
        S, _ = example()
        rep = frobenius_pairing_check(quadratic_dual(S), 4)
        assert rep.ok and len(rep.per_degree) == 5
        assert all(row["ok"] for row in rep.per_degree)


def test_08_beilinson_stages():
    with criterion(8, "Beilinson algebra and its skew group algebra", 5):
        S, act = example()
        D = quadratic_dual(S).renamed(S.generator_names)
        b = beilinson_presentation(D, 4)
        assert len(b.vertices) == 4 and len(b.arrows) == 12
        assert same_by_name(golden_beilinson(), b)
        sb = skew_layered_presentation(b, dual_action(act), S.generator_names)
        assert len(sb.vertices) == 8 and len(sb.arrows) == 24
        assert same_by_name(golden_skew_beilinson(), sb)


def test_09_final_corner_algebra():
    with criterion(9, "corner algebra: 4 vertices, 9 arrows, six relations", 10):
        S, act = example()
        D = quadratic_dual(S).renamed(S.generator_names)
        sb = skew_layered_presentation(beilinson_presentation(D, 4), dual_action(act), S.generator_names)
        data = corner_algebra(sb, [(i, 1) for i in range(4)])
        gamma = data.presentation
        assert len(gamma.vertices) == 4 and len(gamma.arrows) == 9 and len(gamma.relations) == 6
        assert same_by_name(golden_gamma(), gamma)


# -- criterion 10: property suites ----------------------------------------------------

PROPS = settings(max_examples=100, deadline=None, database=None,
                 suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])


def _run_counted(prop):
    counter = []
    prop(counter)
    return len(counter)


def test_10_property_suites():
    @PROPS
    @given(quadratic_algebras())
    def duality_involution(counter, A):
        assert quadratic_dual(quadratic_dual(A)).relations == A.relations
        counter.append(1)

    @PROPS
    @given(quadratic_algebras())
    def complement_dimension(counter, A):
        assert A.relations.dim + quadratic_dual(A).relations.dim == A.n ** 2
        counter.append(1)

    @PROPS
    @given(equivariant_algebras(max_n=3, max_r=4))
    def skew_dimension_identity(counter, pair):
        A, act = pair
        skew = skew_group_presentation(A, act)
        hil = hilbert_function(A, 4)
        assert [graded_dimension(skew, m).dim for m in range(5)] == [act.r * x for x in hil]
        counter.append(1)

    @PROPS
    @given(acyclic_presentations())
    def corner_dimension_agreement(counter, case):
        p, kept = case
        data = corner_algebra(p, kept)
        dims = [graded_dimension(data.presentation, m).dim for m in range(len(data.direct_dims))]
        assert dims == data.direct_dims
        counter.append(1)

    dense = st.lists(st.lists(st.integers(-2, 2), min_size=4, max_size=4), min_size=1, max_size=5)

    @PROPS
    @given(dense, dense)
    def modular_law(counter, rows_u, rows_v):
        u = Subspace.span([{k: scalar(x) for k, x in enumerate(r) if x} for r in rows_u], 4)
        v = Subspace.span([{k: scalar(x) for k, x in enumerate(r) if x} for r in rows_v], 4)
        assert u.dim + v.dim == (u + v).dim + (u & v).dim
        counter.append(1)

    @PROPS
    @given(dense)
    def rank_nullity(counter, rows):
        m = Matrix.from_dense(rows)
        assert rref(m)[1] + kernel(m).dim == m.ncols
        counter.append(1)

    @PROPS
    @given(presentations())
    def normalize_idempotent(counter, p):
        once = normalize(p)
        assert [r.terms for r in normalize(once).relations] == [r.terms for r in once.relations]
        counter.append(1)

    suites = [duality_involution, complement_dimension, skew_dimension_identity, corner_dimension_agreement,
              modular_law, rank_nullity, normalize_idempotent]
    with criterion(10, "property suites, >= 100 cases each", 120):
        counts = {prop.__name__: _run_counted(prop) for prop in suites}
        assert all(c >= 100 for c in counts.values()), counts
