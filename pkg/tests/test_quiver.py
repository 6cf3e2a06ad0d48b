import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewquiver.constructions import mckay_quiver, skew_group_presentation
from skewquiver.errors import ParseError, RelationError
from skewquiver.gradedalg import DiagonalAction, hilbert_function
from skewquiver.quiver import (
    Arrow,
    Path,
    PathPolynomial,
    Quiver,
    QuiverPresentation,
    dot_export,
    equal_after_relabel,
    explicit_ideal,
    finite_dimensionality,
    graded_dimension,
    json_export,
    normalize,
    path_basis,
    presentation_from_json,
    text_export,
)
from support import commutative, example, golden_quotient, presentations


def loop(relation_power=None):
    q = Quiver([0], [Arrow("x", 0, 0, "x")])
    p = QuiverPresentation(q)
    rels = [p.relation_from([(1, ["x"] * relation_power)])] if relation_power else []
    return QuiverPresentation(q, rels)


def test_path_basis_examples():
    assert len(path_basis(loop().quiver, 3)) == 1
    S, act = example()
    assert len(path_basis(mckay_quiver(act, 4), 1)) == 8
    assert path_basis(Quiver([0, 1], []), 1) == []
    assert [p.arrows for p in path_basis(Quiver([0, 1], []), 0)] == [(), ()]


def test_path_basis_filters_and_order():
    q = mckay_quiver(DiagonalAction(3, (1, 1)), 2)
    paths = path_basis(q, 2)
    assert len(paths) == 3 * 2 * 2
    assert [q.path_key(p) for p in paths] == sorted(q.path_key(p) for p in paths)
    assert all(p.source == 0 and p.target == 2 for p in path_basis(q, 2, source=0, target=2))
    assert len(path_basis(q, 2, source=0, target=2)) == 4
    assert path_basis(q, 2, source=0, target=1) == []


def test_grade_counts_weights():
    q = Quiver([0, 1], [Arrow("a", 0, 1, "a"), Arrow("b", 0, 1, "b", 2)])
    assert [p.arrows for p in path_basis(q, 1)] == [("a",)]
    assert [p.arrows for p in path_basis(q, 2)] == [("b",)]


def test_path_validation():
    q = Quiver([0, 1], [Arrow("a", 0, 1, "a")])
    with pytest.raises(ValueError):
        q.path(["a", "a"])
    with pytest.raises(ValueError):
        Quiver([0], [Arrow("a", 0, 1, "a")])
    with pytest.raises(ValueError):
        Quiver([0], [Arrow("a", 0, 0, "a"), Arrow("a", 0, 0, "b")])


def test_relation_homogeneity_enforced():
    q = Quiver([0, 1], [Arrow("a", 0, 1, "a"), Arrow("l", 0, 0, "l")])
    with pytest.raises(RelationError):
        PathPolynomial(q, {q.path(["a"]): 1, q.path(["l"]): 1})
    with pytest.raises(RelationError):
        PathPolynomial(q, {q.path(["a"]): 1, q.path(["l", "a"]): 1})


def test_graded_dimension_examples():
    assert graded_dimension(loop(2), 2).dim == 0
    assert graded_dimension(loop(), 5).dim == 1
    S, act = example()
    skew = skew_group_presentation(S, act)
    assert graded_dimension(skew, 2).dim == 20


def test_graded_dimension_matches_explicit_ideal():
    S, act = example()
    skew = skew_group_presentation(S, act)
    for m in range(4):
        span, paths = explicit_ideal(skew, m)
        gd = graded_dimension(skew, m)
        assert gd.dim == len(paths) - span.dim
        assert gd.ideal_span == span
        pivots = {paths[len(paths) - 1 - c] for c in span.pivots}
        assert set(gd.transversal) == set(paths) - pivots


def test_finite_dimensionality_examples():
    rep = finite_dimensionality(golden_quotient())
    assert rep.finite and rep.per_degree_dims == [1, 1] and rep.total_dim == 2
    assert str(rep) == "Finite, total dim 2"
    rep = finite_dimensionality(loop(), bound=10)
    assert not rep.finite and rep.per_degree_dims == [1] * 11 and rep.bound_used == 10
    rep = finite_dimensionality(QuiverPresentation(Quiver([], [])))
    assert rep.finite and rep.total_dim == 0


def test_finite_dimensionality_mixed_grades_scans_past_gaps():
    # only a grade-2 arrow: grade 1 is empty, but grade 2 is not
    q = Quiver([0, 1], [Arrow("b", 0, 1, "b", 2)])
    rep = finite_dimensionality(QuiverPresentation(q), bound=8)
    assert rep.finite and rep.total_dim == 3


def test_normalize_examples():
    q = Quiver([0], [Arrow("x", 0, 0, "x")])
    p = QuiverPresentation(q)
    scaled = normalize(QuiverPresentation(q, [p.relation_from([(2, ["x", "x"])])]))
    assert len(scaled.relations) == 1
    assert list(scaled.relations[0].terms.values()) == [1]
    q2 = Quiver([0], [Arrow("a", 0, 0, "x1"), Arrow("c", 0, 0, "x3")])
    p2 = QuiverPresentation(q2)
    r1 = p2.relation_from([(1, ["a", "c"]), (1, ["c", "a"])])
    r2 = p2.relation_from([(-1, ["a", "c"]), (-1, ["c", "a"])])
    assert len(normalize(QuiverPresentation(q2, [r1, r2])).relations) == 1
    S, act = example()
    assert len(skew_group_presentation(S, act).relations) == 12


def test_equal_after_relabel_examples():
    S, act = example()
    skew = skew_group_presentation(S, act)
    assert equal_after_relabel(skew, skew)
    iso = QuiverPresentation(Quiver([0, 1], []))
    assert equal_after_relabel(iso, iso, {0: 1, 1: 0}, {})
    assert not equal_after_relabel(loop(2), loop(3))
    with pytest.raises(ValueError):
        equal_after_relabel(iso, iso, {0: 0, 1: 0}, {})


def test_relabel_detects_arrow_mismatch():
    q = Quiver([0, 1], [Arrow("a", 0, 1, "a"), Arrow("b", 1, 0, "b")])
    p = QuiverPresentation(q)
    assert not equal_after_relabel(p, p, {0: 0, 1: 1}, {"a": "b", "b": "a"})
    assert equal_after_relabel(p, p, {0: 1, 1: 0}, {"a": "b", "b": "a"})


def test_exports():
    empty = QuiverPresentation(Quiver([], []))
    assert dot_export(empty).split() == ["digraph", "{", "}"]
    S, act = example()
    mk = QuiverPresentation(mckay_quiver(act, 4))
    dot = dot_export(mk)
    assert dot.count("->") == 8
    assert '"0"' in dot and '"1"' in dot
    skew = skew_group_presentation(S, act)
    assert dot_export(skew).count("//") >= 12
    back = presentation_from_json(json.loads(json_export(skew)))
    assert equal_after_relabel(back, skew)
    assert text_export(skew).count(" = ") == 12


def test_text_rendering():
    txt = text_export(golden_quotient())
    assert "x1 x1 = 0" in txt
    S, act = example()
    assert "x3 x1 = -x1 x3" in text_export(skew_group_presentation(S, act))


def test_presentation_parse_errors():
    with pytest.raises(ParseError, match="vertices"):
        presentation_from_json({"arrows": []})
    with pytest.raises(ParseError, match=r"arrows\[0\]"):
        presentation_from_json({"vertices": [0], "arrows": [{"id": "a"}]})
    bad = {"vertices": [0, 1], "arrows": [{"id": "a", "source": 0, "target": 1}],
           "relations": [[{"path": ["a", "a"]}]]}
    with pytest.raises(ParseError, match=r"relations\[0\]"):
        presentation_from_json(bad)


def test_tuple_labels_round_trip():
    q = Quiver([(0, 1), (1, 1)], [Arrow("a", (0, 1), (1, 1), "x1")])
    p = QuiverPresentation(q)
    back = presentation_from_json(json.loads(json_export(p)))
    assert list(back.vertices) == [(0, 1), (1, 1)]
    assert equal_after_relabel(back, p)


def test_trivial_group_one_vertex_dims():
    A = commutative(3)
    p = skew_group_presentation(A, DiagonalAction(1, (1, 1, 1)))
    assert len(p.vertices) == 1
    assert [graded_dimension(p, m).dim for m in range(5)] == hilbert_function(A, 4)


# -- random presentations --------------------------------------------------------


@settings(max_examples=120, deadline=None)
@given(presentations())
def test_normalize_idempotent(p):
    n1 = normalize(p)
    n2 = normalize(n1)
    assert equal_after_relabel(n1, n2)
    assert [r.terms for r in n1.relations] == [r.terms for r in n2.relations]


@settings(max_examples=100, deadline=None)
@given(presentations(), st.integers(0, 3))
def test_vertex_pair_sum_and_oracle(p, m):
    total = graded_dimension(p, m).dim
    parts = sum(graded_dimension(p, m, s, t).dim for s in p.vertices for t in p.vertices)
    assert parts == total
    span, paths = explicit_ideal(p, m)
    assert total == len(paths) - span.dim


@settings(max_examples=100, deadline=None)
@given(presentations(max_rels=2), st.data())
def test_adding_relations_shrinks_dims(p, data):
    paths2 = path_basis(p.quiver, 2)
    if not paths2:
        return
    extra = data.draw(st.sampled_from(paths2))
    bigger = QuiverPresentation(p.quiver, list(p.relations) + [p.relation_from([(1, list(extra.arrows))])])
    for m in range(4):
        assert graded_dimension(bigger, m).dim <= graded_dimension(p, m).dim


@settings(max_examples=100, deadline=None)
@given(presentations())
def test_json_round_trip(p):
    back = presentation_from_json(json.loads(json_export(p)))
    assert equal_after_relabel(back, p)


def test_path_tuple_shape():
    q = Quiver([0, 1], [Arrow("a", 0, 1, "a")])
    assert q.path(["a"]) == Path(0, 1, ("a",))
