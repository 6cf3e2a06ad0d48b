"""
Sparse exact linear algebra over Q(zeta_r).

Vectors are dicts ``{column: CyclotomicScalar}`` with zero entries omitted.
Pivots are always the first nonzero column, so reduced row-echelon forms
are canonical and can be compared for subspace equality.
"""

from __future__ import annotations

import heapq
from typing import Iterable

from .errors import AmbientMismatchError
from .exactfield import CyclotomicScalar

__all__ = [
    "Matrix",
    "Subspace",
    "EchelonBuilder",
    "rref",
    "kernel",
    "intersect",
    "subspace_sum",
    "quotient_dim",
    "coordinates_in_quotient",
]


def _axpy(target: dict, coef, row: dict, heap=None):
    """target -= coef * row, in place. New columns are pushed on heap if given."""
    for col, val in row.items():
        cur = target.get(col)
        if cur is None:
            target[col] = -(coef * val)
            if heap is not None:
                heapq.heappush(heap, col)
        else:
            new = cur - coef * val
            if new:
                target[col] = new
            else:
                del target[col]


def _scale(row: dict, factor) -> dict:
    return {c: v * factor for c, v in row.items()}


class Matrix:
    """Sparse matrix stored as a list of row dicts."""

    __slots__ = ("nrows", "ncols", "order", "rows")

    def __init__(self, nrows: int, ncols: int, order: int = 1, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.order = order
        if rows is None:
            rows = [{} for _ in range(nrows)]
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        self.rows = [{c: v for c, v in row.items() if v} for row in rows]

    @classmethod
    def from_dense(cls, data, order: int = 1, ncols: int | None = None) -> "Matrix":
        from .exactfield import scalar

        data = [list(row) for row in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = []
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            rows.append({j: scalar(x, order) for j, x in enumerate(row) if x != 0})
        return cls(len(data), ncols, order, rows)

    @classmethod
    def identity(cls, n: int, order: int = 1) -> "Matrix":
        one = CyclotomicScalar.one(order)
        return cls(n, n, order, [{i: one} for i in range(n)])

    @property
    def entries(self) -> dict:
        return {(i, j): v for i, row in enumerate(self.rows) for j, v in row.items()}

    def to_dense(self):
        zero = CyclotomicScalar.zero(self.order)
        return [[row.get(j, zero) for j in range(self.ncols)] for row in self.rows]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and (self.nrows, self.ncols) == (other.nrows, other.ncols)
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self.rows))})"


class EchelonBuilder:
    """Incremental row reduction.

    Rows are kept in semi-echelon form (monic leading entry, nothing to the
    left of it). :meth:`subspace` back-substitutes to the canonical RREF.
    """

    def __init__(self, ambient_dim: int, order: int = 1):
        self.ambient_dim = ambient_dim
        self.order = order
        self.rows: dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        """Residual of vec with every pivot column eliminated (canonical representative)."""
        v = dict(vec)
        rows = self.rows
        heap = [c for c in v if c in rows]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            coef = v.get(c)
            if coef is None:
                continue
            row = rows.get(c)
            if row is None:
                continue
            _axpy(v, coef, row, heap)
        return v

    def _lead_reduce(self, vec: dict) -> dict:
        # Reduce only until the leading column is not a pivot.
        v = dict(vec)
        rows = self.rows
        heap = list(v)
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            coef = v.get(c)
            if coef is None:
                continue
            row = rows.get(c)
            if row is None:
                return v
            _axpy(v, coef, row, heap)
        return v

    def add(self, vec: dict) -> bool:
        """Insert vec; returns True if it enlarged the span."""
        if not vec:
            return False
        v = self._lead_reduce(vec)
        if not v:
            return False
        lead = min(v)
        if lead >= self.ambient_dim:
            raise AmbientMismatchError(f"column {lead} outside ambient dimension {self.ambient_dim}")
        inv = v[lead].inverse()
        self.rows[lead] = _scale(v, inv) if v[lead] != 1 else v
        return True

    def extend(self, vectors: Iterable[dict]) -> None:
        for v in vectors:
            self.add(v)

    def rref_rows(self) -> list:
        """Fully reduced rows in increasing pivot order."""
        final: dict[int, dict] = {}
        for p in sorted(self.rows, reverse=True):
            row = dict(self.rows[p])
            for c in [c for c in row if c != p and c in final]:
                coef = row.get(c)
                if coef is not None:
                    _axpy(row, coef, final[c])
            final[p] = row
        return [final[p] for p in sorted(final)]

    def subspace(self) -> "Subspace":
        return Subspace(self.ambient_dim, self.rref_rows(), self.order, _trusted=True)


class Subspace:
    """Subspace of k^ambient_dim held as a canonical RREF basis."""

    __slots__ = ("ambient_dim", "order", "basis", "pivots", "_by_pivot")

    def __init__(self, ambient_dim: int, rows=(), order: int = 1, _trusted: bool = False):
        if not _trusted:
            builder = EchelonBuilder(ambient_dim, order)
            builder.extend(rows)
            rows = builder.rref_rows()
        self.ambient_dim = ambient_dim
        self.order = order
        self.basis = tuple(rows)
        self.pivots = tuple(min(r) for r in rows)
        self._by_pivot = dict(zip(self.pivots, self.basis))

    @classmethod
    def span(cls, vectors: Iterable[dict], ambient_dim: int, order: int = 1) -> "Subspace":
        return cls(ambient_dim, list(vectors), order)

    @classmethod
    def full(cls, ambient_dim: int, order: int = 1) -> "Subspace":
        one = CyclotomicScalar.one(order)
        return cls(ambient_dim, [{i: one} for i in range(ambient_dim)], order, _trusted=True)

    @classmethod
    def zero(cls, ambient_dim: int, order: int = 1) -> "Subspace":
        return cls(ambient_dim, [], order, _trusted=True)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def reduce(self, vec: dict) -> dict:
        """Canonical representative of vec modulo this subspace (pivot entries zeroed)."""
        v = dict(vec)
        for p in [c for c in v if c in self._by_pivot]:
            coef = v.get(p)
            if coef is not None:
                _axpy(v, coef, self._by_pivot[p])
        return v

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def __contains__(self, vec):
        return self.contains(vec)

    def is_subspace_of(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(other.contains(b) for b in self.basis)

    def basis_matrix(self) -> Matrix:
        return Matrix(self.dim, self.ambient_dim, self.order, list(self.basis))

    def __add__(self, other):
        return subspace_sum(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _check_ambient(u: Subspace, v: Subspace):
    if u.ambient_dim != v.ambient_dim:
        raise AmbientMismatchError(f"ambient dimensions differ: {u.ambient_dim} vs {v.ambient_dim}")


def rref(m: Matrix):
    """Gauss-Jordan form of m. Returns (reduced matrix, rank, pivot columns)."""
    builder = EchelonBuilder(m.ncols, m.order)
    builder.extend(m.rows)
    rows = builder.rref_rows()
    pivots = [min(r) for r in rows]
    padded = rows + [{} for _ in range(m.nrows - len(rows))]
    return Matrix(m.nrows, m.ncols, m.order, padded), len(rows), pivots


def kernel(m: Matrix) -> Subspace:
    """Right null space {x : m x = 0}."""
    builder = EchelonBuilder(m.ncols, m.order)
    builder.extend(m.rows)
    rows = builder.rref_rows()
    pivot_set = set(builder.rows)
    one = CyclotomicScalar.one(m.order)
    vectors = []
    for f in range(m.ncols):
        if f in pivot_set:
            continue
        v = {f: one}
        for row in rows:
            x = row.get(f)
            if x is not None:
                v[min(row)] = -x
        vectors.append(v)
    return Subspace(m.ncols, vectors, m.order)


def linear_relations(vectors: list, ambient_dim: int, order: int = 1) -> list:
    """Coefficient vectors c (as dicts over range(len(vectors))) spanning {c : sum c_k v_k = 0}."""
    one = CyclotomicScalar.one(order)
    builder = EchelonBuilder(ambient_dim + len(vectors), order)
    for k, v in enumerate(vectors):
        aug = dict(v)
        aug[ambient_dim + k] = one
        builder.add(aug)
    out = []
    for p, row in builder.rows.items():
        if p >= ambient_dim:
            out.append({c - ambient_dim: x for c, x in row.items()})
    return out


def intersect(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    if u.dim > v.dim:
        u, v = v, u
    if u.dim == 0:
        return Subspace.zero(u.ambient_dim, u.order)
    residuals = [v.reduce(b) for b in u.basis]
    vectors = []
    for combo in linear_relations(residuals, u.ambient_dim, u.order):
        acc: dict = {}
        for k, coef in combo.items():
            _axpy(acc, -coef, u.basis[k])
        vectors.append(acc)
    return Subspace(u.ambient_dim, vectors, u.order)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    if u.dim < v.dim:
        u, v = v, u
    builder = EchelonBuilder(u.ambient_dim, u.order)
    builder.rows = {p: row for p, row in zip(u.pivots, u.basis)}
    builder.extend(v.basis)
    return builder.subspace()


def quotient_dim(ambient, w: Subspace) -> int:
    """dim(ambient) - dim(ambient & w). ``ambient`` may be a Subspace or an int (full space)."""
    if isinstance(ambient, int):
        if ambient != w.ambient_dim:
            raise AmbientMismatchError(f"ambient dimensions differ: {ambient} vs {w.ambient_dim}")
        return ambient - w.dim
    return ambient.dim - intersect(ambient, w).dim


def coordinates_in_quotient(vec: dict, w: Subspace) -> dict:
    """Canonical representative of vec modulo w."""
    if vec and max(vec) >= w.ambient_dim:
        raise AmbientMismatchError("vector longer than ambient space")
    return w.reduce(vec)
