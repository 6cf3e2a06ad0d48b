"""
Quadratic algebras T(V)/(R) with diagonal cyclic group actions.

Words of length m are coordinates of V^{(x)m}. Column indices run in
*decreasing* lexicographic order, so the pivot of every reduced relation is
its lex-largest word and the normal (non-pivot) words are the lex-smallest
ones. Transversals are always reported in increasing lex order.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .errors import ActionError, DegreeCapError, ParseError, RelationError, SocleError
from .exactfield import CyclotomicScalar, common_order, root_of_unity, scalar
from .linalg import EchelonBuilder, Subspace, intersect, kernel

DEFAULT_MAX_DEGREE = 8

Word = tuple


def word_index(word: Sequence[int], n: int) -> int:
    idx = 0
    for letter in word:
        idx = idx * n + (n - 1 - letter)
    return idx


def index_word(idx: int, n: int, m: int) -> Word:
    letters = []
    for _ in range(m):
        idx, rem = divmod(idx, n)
        letters.append(n - 1 - rem)
    return tuple(reversed(letters))


def all_words(n: int, m: int):
    """Words of length m in increasing lex order."""
    return product(range(n), repeat=m)


class NcPolynomial:
    """Noncommutative polynomial: a map from words to nonzero scalars."""

    __slots__ = ("terms", "order")

    def __init__(self, terms: dict, order: int = 1):
        self.order = order
        self.terms = {tuple(w): scalar(c, order) for w, c in terms.items() if c != 0}

    @property
    def homogeneous_degree(self):
        degrees = {len(w) for w in self.terms}
        if len(degrees) == 1:
            return degrees.pop()
        return None if degrees else 0

    def to_vector(self, n: int) -> dict:
        return {word_index(w, n): c for w, c in self.terms.items()}

    @classmethod
    def from_vector(cls, vec: dict, n: int, m: int, order: int = 1) -> "NcPolynomial":
        return cls({index_word(i, n, m): c for i, c in vec.items()}, order)

    def __eq__(self, other):
        return isinstance(other, NcPolynomial) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, reverse=True):
            c = self.terms[w]
            mono = "".join(names[i] for i in w) or "1"
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"NcPolynomial({self.terms!r})"


@dataclass(frozen=True)
class DiagonalAction:
    """g = diag(zeta_r^a_1, ..., zeta_r^a_n) with 0 < a_j <= r."""

    r: int
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(a) for a in self.weights))
        if self.r < 1:
            raise ActionError(f"group order must be positive, got {self.r}")
        bad = [a for a in self.weights if not 0 < a <= self.r]
        if bad:
            raise ActionError(f"weights must satisfy 0 < a <= r={self.r}; got {bad}")

    @classmethod
    def normalized(cls, r: int, weights: Iterable[int]) -> "DiagonalAction":
        return cls(r, tuple((a % r) or r for a in weights))

    def word_weight(self, word: Sequence[int]) -> int:
        return sum(self.weights[j] for j in word) % self.r

    def power(self, p: int) -> "DiagonalAction":
        """The action of g^p."""
        return DiagonalAction.normalized(self.r, (p * a for a in self.weights))

    def to_json(self) -> dict:
        return {"r": self.r, "weights": list(self.weights)}


class QuadraticAlgebra:
    """T(V)/(R) with n degree-one generators and R a subspace of V(x)V."""

    def __init__(self, generator_names: Sequence[str], relations: Subspace,
                 claimed_global_dim: int | None = None, order: int | None = None):
        self.generator_names = tuple(generator_names)
        n = len(self.generator_names)
        if relations.ambient_dim != n * n:
            raise RelationError(f"relation space must live in dimension {n * n}, got {relations.ambient_dim}")
        self.relations = relations
        self.claimed_global_dim = claimed_global_dim
        self.order = order if order is not None else relations.order
        self._lock = threading.Lock()
        self._ideals: dict[int, Subspace] = {}
        self._syzygies: dict[int, Subspace] = {}

    @property
    def n(self) -> int:
        return len(self.generator_names)

    @classmethod
    def from_polynomials(cls, generator_names: Sequence[str], polys: Iterable[NcPolynomial],
                         claimed_global_dim: int | None = None, order: int | None = None):
        polys = list(polys)
        n = len(generator_names)
        if order is None:
            order = common_order(*(p.order for p in polys)) if polys else 1
        vectors = []
        for k, p in enumerate(polys):
            if not p:
                continue
            if p.homogeneous_degree != 2:
                raise RelationError(f"relation {k} is not homogeneous of degree 2: {p.format(generator_names)}")
            for w in p.terms:
                if any(not 0 <= i < n for i in w):
                    raise RelationError(f"relation {k} uses a generator index outside [0, {n})")
            vectors.append({word_index(w, n): scalar(c, order) for w, c in p.terms.items()})
        return cls(generator_names, Subspace(n * n, vectors, order), claimed_global_dim, order)

    @classmethod
    def free(cls, generator_names: Sequence[str], order: int = 1):
        n = len(generator_names)
        return cls(generator_names, Subspace.zero(n * n, order), order=order)

    def relation_polynomials(self) -> list:
        return [NcPolynomial.from_vector(v, self.n, 2, self.order) for v in self.relations.basis]

    def with_order(self, r: int) -> "QuadraticAlgebra":
        if r == self.order:
            return self
        rows = [{c: scalar(x, r) for c, x in row.items()} for row in self.relations.basis]
        return QuadraticAlgebra(self.generator_names, Subspace(self.n ** 2, rows, r),
                                self.claimed_global_dim, r)

    def renamed(self, names: Sequence[str]) -> "QuadraticAlgebra":
        if len(names) != self.n:
            raise ValueError("wrong number of generator names")
        return QuadraticAlgebra(names, self.relations, self.claimed_global_dim, self.order)

    def opposite(self) -> "QuadraticAlgebra":
        """Algebra with every relation word reversed."""
        n = self.n
        rows = []
        for row in self.relations.basis:
            rows.append({word_index(tuple(reversed(index_word(c, n, 2))), n): x for c, x in row.items()})
        return QuadraticAlgebra(self.generator_names, Subspace(n * n, rows, self.order),
                                self.claimed_global_dim, self.order)

    # -- degree-m ideal, memoized per algebra ---------------------------------

    def ideal(self, m: int, max_degree: int = DEFAULT_MAX_DEGREE) -> Subspace:
        """Sum of V^i (x) R (x) V^j over i + 2 + j = m."""
        if m > max_degree:
            raise DegreeCapError(f"degree {m} exceeds cap {max_degree}")
        with self._lock:
            cached = self._ideals.get(m)
        if cached is not None:
            return cached
        n, r = self.n, self.order
        if m < 2:
            result = Subspace.zero(n ** m, r)
        else:
            prev = self.ideal(m - 1, max_degree)
            builder = EchelonBuilder(n ** m, r)
            # I_{m-1} (x) V is already reduced: row b (x) x has pivot piv(b)*n + code(x).
            for p, row in zip(prev.pivots, prev.basis):
                for x in range(n):
                    builder.rows[p * n + x] = {c * n + x: v for c, v in row.items()}
            shift = n ** (m - 2)
            for row in self.relations.basis:
                for prefix in range(shift):
                    builder.add({prefix * n * n + c: v for c, v in row.items()})
            result = builder.subspace()
        with self._lock:
            self._ideals.setdefault(m, result)
        return result

    def __repr__(self):
        return f"QuadraticAlgebra(n={self.n}, dim R={self.relations.dim})"


@dataclass
class GradedComponent:
    degree: int
    dim: int
    ideal_span: Subspace
    transversal: list

    def to_json(self, names) -> dict:
        return {
            "degree": self.degree,
            "dimension": self.dim,
            "transversal": ["".join(names[i] for i in w) or "1" for w in self.transversal],
        }


def graded_component(A: QuadraticAlgebra, m: int, max_degree: int = DEFAULT_MAX_DEGREE) -> GradedComponent:
    if m < 0:
        raise ValueError("degree must be nonnegative")
    ideal = A.ideal(m, max_degree)
    pivots = set(ideal.pivots)
    total = A.n ** m
    transversal = [index_word(i, A.n, m) for i in range(total - 1, -1, -1) if i not in pivots]
    return GradedComponent(m, total - ideal.dim, ideal, transversal)


def hilbert_function(A: QuadraticAlgebra, N: int, max_degree: int = DEFAULT_MAX_DEGREE) -> list:
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N > max_degree:
        raise DegreeCapError(f"degree {N} exceeds cap {max_degree}")
    return [A.n ** m - A.ideal(m, max_degree).dim for m in range(N + 1)]


def normal_form(A: QuadraticAlgebra, vec: dict, m: int, max_degree: int = DEFAULT_MAX_DEGREE) -> dict:
    """Reduce a degree-m vector to its canonical representative in A_m."""
    return A.ideal(m, max_degree).reduce(vec)


def multiply_words(A: QuadraticAlgebra, u: Word, v: Word, max_degree: int = DEFAULT_MAX_DEGREE) -> dict:
    w = tuple(u) + tuple(v)
    one = CyclotomicScalar.one(A.order)
    return normal_form(A, {word_index(w, A.n): one}, len(w), max_degree)


def _tensor_subspace(prefix_len: int, sub: Subspace, n: int, sub_len: int) -> Subspace:
    """V^{prefix_len} (x) sub, where sub lives in V^{sub_len}; already in RREF."""
    shift = n ** sub_len
    rows = []
    for prefix in range(n ** prefix_len):
        base = prefix * shift
        for row in sub.basis:
            rows.append({base + c: v for c, v in row.items()})
    return Subspace(n ** (prefix_len + sub_len), rows, sub.order, _trusted=True)


def koszul_syzygy_space(A: QuadraticAlgebra, i: int, max_degree: int = DEFAULT_MAX_DEGREE) -> Subspace:
    """Intersection of V^s (x) R (x) V^t over s + t + 2 = i."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    if i > max_degree:
        raise DegreeCapError(f"degree {i} exceeds cap {max_degree}")
    n, r = A.n, A.order
    if i == 0:
        return Subspace.full(1, r)
    if i == 1:
        return Subspace.full(n, r)
    if i == 2:
        return A.relations
    with A._lock:
        cached = A._syzygies.get(i)
    if cached is not None:
        return cached
    # K^i = (K^{i-1} (x) V) & (V^{i-2} (x) R)
    prev = koszul_syzygy_space(A, i - 1, max_degree)
    rows = [{c * n + x: v for c, v in row.items()} for row in prev.basis for x in range(n)]
    left = Subspace(n ** i, rows, r)
    K = intersect(left, _tensor_subspace(i - 2, A.relations, n, 2))
    with A._lock:
        A._syzygies.setdefault(i, K)
    return K


def quadratic_dual(A: QuadraticAlgebra, decorate: bool = True) -> QuadraticAlgebra:
    """T(V*)/(R^perp) under <f (x) g, v (x) w> = f(v) g(w).

    With dual bases this pairing is the coordinate dot product, so R^perp
    is the kernel of the relation matrix. Names toggle a trailing '*'.
    """
    perp = kernel(A.relations.basis_matrix())
    names = A.generator_names
    if decorate:
        names = [s[:-1] if s.endswith("*") else s + "*" for s in names]
    return QuadraticAlgebra(names, perp, A.claimed_global_dim, A.order)


@dataclass
class ActionCheck:
    ok: bool
    weight_dims: dict = field(default_factory=dict)
    violating: NcPolynomial | None = None

    def __bool__(self):
        return self.ok


def _lift(A: QuadraticAlgebra, act: DiagonalAction) -> QuadraticAlgebra:
    return A.with_order(common_order(A.order, act.r))


def action_check(A: QuadraticAlgebra, act: DiagonalAction) -> ActionCheck:
    """Is R stable under g? Certificate: per-weight dimensions, or a violating relation."""
    if len(act.weights) != A.n:
        raise ActionError(f"action has {len(act.weights)} weights for {A.n} generators")
    B = _lift(A, act)
    n, L = B.n, B.order
    zeta = root_of_unity(L, L // act.r)
    powers = [zeta ** k for k in range(act.r)]
    weight_dims: dict = {}
    for row in B.relations.basis:
        moved = {}
        weights = set()
        for c, v in row.items():
            w = act.word_weight(index_word(c, n, 2))
            weights.add(w)
            moved[c] = v * powers[w]
        if not B.relations.contains(moved):
            return ActionCheck(False, violating=NcPolynomial.from_vector(row, n, 2, L))
        if len(weights) == 1:
            w = weights.pop()
            weight_dims[w] = weight_dims.get(w, 0) + 1
    return ActionCheck(True, dict(sorted(weight_dims.items())))


def dual_action(act: DiagonalAction) -> DiagonalAction:
    """Weights -a_j mod r, normalized into (0, r]."""
    return DiagonalAction.normalized(act.r, (-a for a in act.weights))


def socle_weight(A: QuadraticAlgebra, act: DiagonalAction, d: int,
                 max_degree: int = DEFAULT_MAX_DEGREE) -> int:
    """Weight (mod r) of the one-dimensional space K^d_d."""
    if len(act.weights) != A.n:
        raise ActionError(f"action has {len(act.weights)} weights for {A.n} generators")
    K = koszul_syzygy_space(A, d, max_degree)
    if K.dim != 1:
        raise SocleError(f"socle not one-dimensional: dim K^{d}_{d} = {K.dim}")
    if d + 1 <= max_degree and koszul_syzygy_space(A, d + 1, max_degree).dim != 0:
        raise SocleError(f"K^{d + 1}_{d + 1} is nonzero; not Koszul AS-regular of dimension {d}")
    weights = {act.word_weight(index_word(c, A.n, d)) for c in K.basis[0]}
    if len(weights) != 1:
        raise RuntimeError(f"K^{d}_{d} is not weight-homogeneous: weights {sorted(weights)}")
    return weights.pop()


def hdet_diagonal(A: QuadraticAlgebra, act: DiagonalAction, d: int, convention: str = "direct",
                  max_degree: int = DEFAULT_MAX_DEGREE) -> CyclotomicScalar:
    """Homological determinant of g as zeta_r^w, w the weight of K^d_d.

    ``convention="inverse"`` returns zeta_r^(-w) instead.
    """
    if convention not in ("direct", "inverse"):
        raise ValueError(f"unknown hdet convention {convention!r}")
    w = socle_weight(A, act, d, max_degree)
    return root_of_unity(act.r, w if convention == "direct" else -w)


@dataclass
class FrobeniusReport:
    ok: bool
    reason: str | None
    hilbert: list
    per_degree: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def frobenius_pairing_check(A: QuadraticAlgebra, ell: int,
                            max_degree: int = DEFAULT_MAX_DEGREE) -> FrobeniusReport:
    """Check that A_i x A_(ell-i) -> A_ell = k is nondegenerate for every i."""
    dims = hilbert_function(A, min(ell + 1, max_degree), max_degree)
    if dims[ell] == 0 or (ell + 1 < len(dims) and dims[ell + 1] != 0):
        top = max(m for m, x in enumerate(dims) if x)
        return FrobeniusReport(False, f"top degree mismatch: top degree is {top}, expected {ell}", dims)
    if dims[ell] != 1:
        return FrobeniusReport(False, f"top dimension is {dims[ell]}, expected 1", dims)
    top = graded_component(A, ell, max_degree)
    top_col = word_index(top.transversal[0], A.n)
    report = []
    ok = True
    for i in range(ell + 1):
        left = graded_component(A, i, max_degree).transversal
        right = graded_component(A, ell - i, max_degree).transversal
        rows = []
        for u in left:
            row = {}
            for j, v in enumerate(right):
                prod = multiply_words(A, u, v, max_degree)
                x = prod.get(top_col)
                if x is not None:
                    row[j] = x
            rows.append(row)
        builder = EchelonBuilder(max(len(right), 1), A.order)
        builder.extend(rows)
        rank = len(builder)
        passed = rank == len(left) == len(right)
        ok = ok and passed
        report.append({"degree": i, "dim": len(left), "dual_dim": len(right), "rank": rank, "ok": passed})
    return FrobeniusReport(ok, None if ok else "degenerate pairing", dims, report)


def weight_block_dims(A: QuadraticAlgebra, act: DiagonalAction, m: int,
                      max_degree: int = DEFAULT_MAX_DEGREE) -> dict:
    """dim of each weight block of A_m, read off the monomial transversal."""
    out: dict = {}
    for w in graded_component(A, m, max_degree).transversal:
        k = act.word_weight(w)
        out[k] = out.get(k, 0) + 1
    return dict(sorted(out.items()))


def invariant_hilbert_function(A: QuadraticAlgebra, act: DiagonalAction, N: int,
                               max_degree: int = DEFAULT_MAX_DEGREE) -> list:
    """dim (A^G)_m = (1/r) sum_p tr(g^p | A_m), for m = 0..N."""
    check = action_check(A, act)
    if not check:
        raise ActionError("relations are not stable under the action", check.violating)
    r = act.r
    zeta = [root_of_unity(r, k) for k in range(r)]
    out = []
    for m in range(N + 1):
        blocks = weight_block_dims(A, act, m, max_degree)
        total = CyclotomicScalar.zero(r)
        for p in range(r):
            for w, dim in blocks.items():
                total = total + zeta[(p * w) % r] * dim
        value = total / r
        if not value.is_rational() or value.rational_value().denominator != 1:
            raise RuntimeError(f"non-integral invariant dimension {value} in degree {m}")
        out.append(int(value.rational_value()))
    return out


@dataclass
class KoszulReport:
    ok: bool
    syzygy_dims: list
    dual_dims: list
    hilbert: list
    euler: list

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "syzygy_dims": self.syzygy_dims,
            "dual_dims": self.dual_dims,
            "hilbert": self.hilbert,
            "euler": self.euler,
        }


def koszul_numeric_check(A: QuadraticAlgebra, N: int, max_degree: int = DEFAULT_MAX_DEGREE) -> KoszulReport:
    """dim K^i_i = dim (A^!)_i, and the alternating sums of the linear resolution vanish."""
    if N < 2:
        raise ValueError("N must be at least 2")
    if N > max_degree:
        raise DegreeCapError(f"degree {N} exceeds cap {max_degree}")
    syz = [koszul_syzygy_space(A, i, max_degree).dim for i in range(N + 1)]
    dual = hilbert_function(quadratic_dual(A), N, max_degree)
    hil = hilbert_function(A, N, max_degree)
    euler = []
    for m in range(1, N + 1):
        euler.append(sum((-1) ** i * syz[i] * hil[m - i] for i in range(m + 1)))
    ok = syz == dual and not any(euler)
    return KoszulReport(ok, syz, dual, hil, euler)


# -- JSON ------------------------------------------------------------------


def algebra_to_json(A: QuadraticAlgebra, act: DiagonalAction | None = None) -> dict:
    rels = []
    for poly in A.relation_polynomials():
        rels.append([{"coeff": c.to_json(), "word": list(w)}
                     for w, c in sorted(poly.terms.items(), reverse=True)])
    out = {"generators": list(A.generator_names), "relations": rels}
    if act is not None:
        out["action"] = act.to_json()
    if A.claimed_global_dim is not None:
        out["dimension"] = A.claimed_global_dim
    return out


def algebra_from_json(data) -> tuple:
    """Parse the algebra schema; returns (QuadraticAlgebra, DiagonalAction or None)."""
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    names = data.get("generators")
    if not isinstance(names, list) or not names or not all(isinstance(s, str) for s in names):
        raise ParseError("must be a nonempty list of strings", "generators")
    n = len(names)
    raw = data.get("relations", [])
    if not isinstance(raw, list):
        raise ParseError("must be a list", "relations")
    parsed = []
    for k, rel in enumerate(raw):
        where = f"relations[{k}]"
        if not isinstance(rel, list):
            raise ParseError("must be a list of terms", where)
        terms: list = []
        for t, term in enumerate(rel):
            if not isinstance(term, dict) or "word" not in term:
                raise ParseError("term needs 'coeff' and 'word'", f"{where}[{t}]")
            word = term["word"]
            if not isinstance(word, list) or not all(isinstance(i, int) and 0 <= i < n for i in word):
                raise ParseError(f"word must list generator indices in [0, {n})", f"{where}[{t}].word")
            try:
                c = CyclotomicScalar.from_json(term.get("coeff", 1))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(str(exc), f"{where}[{t}].coeff") from None
            terms.append((tuple(word), c))
        parsed.append((where, terms))
    order = common_order(*(c.r for _, terms in parsed for _, c in terms))
    polys = []
    for where, terms in parsed:
        summed: dict = {}
        for w, c in terms:
            c = scalar(c, order)
            summed[w] = summed[w] + c if w in summed else c
        poly = NcPolynomial(summed, order)
        if poly and poly.homogeneous_degree != 2:
            degs = sorted({len(w) for w in poly.terms})
            raise ParseError(f"relations must be homogeneous of degree 2 (found degrees {degs})", where)
        polys.append(poly)
    dim = data.get("dimension")
    if dim is not None and (not isinstance(dim, int) or dim < 0):
        raise ParseError("must be a nonnegative integer", "dimension")
    A = QuadraticAlgebra.from_polynomials(names, polys, dim, order)
    act = None
    if data.get("action") is not None:
        a = data["action"]
        if not isinstance(a, dict) or not isinstance(a.get("r"), int) or not isinstance(a.get("weights"), list):
            raise ParseError("must be {'r': int, 'weights': [int]}", "action")
        if len(a["weights"]) != n:
            raise ParseError(f"{len(a['weights'])} weights for {n} generators", "action.weights")
        try:
            act = DiagonalAction(a["r"], tuple(a["weights"]))
        except ActionError as exc:
            raise ParseError(str(exc), "action") from None
        check = action_check(A, act)
        if not check:
            raise ParseError(f"relations not stable under the action: {check.violating.format(names)}", "action")
    return A, act
