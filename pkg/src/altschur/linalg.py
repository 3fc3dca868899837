"""Exact dense and sparse linear algebra over a :class:`~altschur.fields.FieldSpec`.

Everything here is deterministic: elimination always takes the first non-zero
entry (scanning rows in their given order, columns left to right) as the
pivot, so ranks, kernels and reduced forms are reproducible across runs and
platforms.  Dense matrices are plain lists of lists of raw scalars
(``Fraction`` over Q, canonical ints over GF(p)).

For the very large, very redundant relation systems that arise when forming
tensor-product quotients, dense elimination is hopeless; those go through
:class:`SparseEchelon` (dict-keyed rows, forward reduction only) or, over a
prime field, through :func:`modp_rank_dense`, a numpy accumulator that keeps
every entry reduced mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .fields import FieldSpec, Scalar

__all__ = [
    "ExactMatrix",
    "SparseEchelon",
    "SpanSolver",
    "QuotientSpace",
    "quotient_dim",
    "rref_sparse",
    "sparse_kernel",
    "intertwiner_space",
    "modp_rank_dense",
]

SparseVec = Dict[int, Scalar]


@dataclass
class ExactMatrix:
    """A dense matrix with exact entries over a fixed field."""

    field: FieldSpec
    rows: List[List[Scalar]]

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "ExactMatrix":
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "ExactMatrix":
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[int]]) -> "ExactMatrix":
        """Build from integer (or already-exact) entries, coercing into the field."""
        return cls(field, [[field.from_int(x) if isinstance(x, int) else x for x in row] for row in rows])

    @classmethod
    def from_columns(
        cls, field: FieldSpec, cols: Sequence[Sequence[Scalar]], nrows: Optional[int] = None
    ) -> "ExactMatrix":
        if nrows is None:
            nrows = len(cols[0]) if cols else 0
        return cls(field, [[col[i] for col in cols] for i in range(nrows)])

    def column(self, j: int) -> List[Scalar]:
        return [row[j] for row in self.rows]

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: Tuple[int, int]) -> Scalar:
        return self.rows[ij[0]][ij[1]]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ExactMatrix)
            and self.field == other.field
            and self.rows == other.rows
        )

    def copy(self) -> "ExactMatrix":
        return ExactMatrix(self.field, [row[:] for row in self.rows])

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.field, [list(col) for col in zip(*self.rows)] if self.rows else [])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        f = self.field
        out = ExactMatrix.zeros(f, self.nrows, other.ncols)
        orows = other.rows
        for i, row in enumerate(self.rows):
            acc = out.rows[i]
            for k, a in enumerate(row):
                if not a:
                    continue
                orow = orows[k]
                for j, b in enumerate(orow):
                    if b:
                        acc[j] = f.add(acc[j], f.mul(a, b))
        return out

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        f = self.field
        return ExactMatrix(
            f,
            [[f.add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        f = self.field
        return ExactMatrix(
            f,
            [[f.sub(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def scale(self, c: Scalar) -> "ExactMatrix":
        f = self.field
        return ExactMatrix(f, [[f.mul(c, a) for a in row] for row in self.rows])

    def is_zero(self) -> bool:
        return all(not a for row in self.rows for a in row)

    def apply(self, vec: Sequence[Scalar]) -> List[Scalar]:
        f = self.field
        out = []
        for row in self.rows:
            s = f.zero
            for a, v in zip(row, vec):
                if a and v:
                    s = f.add(s, f.mul(a, v))
            out.append(s)
        return out

    # -- elimination --------------------------------------------------------

    def rref(self) -> Tuple["ExactMatrix", List[int]]:
        """Reduced row-echelon form and the list of pivot columns.

        Deterministic: within each column the first row (top to bottom) with a
        non-zero entry is the pivot; pivots are normalized to 1 and cleared
        from every other row.
        """
        f = self.field
        rows = [row[:] for row in self.rows]
        nrows, ncols = self.nrows, self.ncols
        pivots: List[int] = []
        r = 0
        for c in range(ncols):
            if r >= nrows:
                break
            sel = None
            for i in range(r, nrows):
                if rows[i][c]:
                    sel = i
                    break
            if sel is None:
                continue
            rows[r], rows[sel] = rows[sel], rows[r]
            inv = f.inv(rows[r][c])
            rows[r] = [f.mul(inv, x) for x in rows[r]]
            prow = rows[r]
            for i in range(nrows):
                if i != r and rows[i][c]:
                    coef = rows[i][c]
                    rows[i] = [f.sub(x, f.mul(coef, p)) for x, p in zip(rows[i], prow)]
            pivots.append(c)
            r += 1
        return ExactMatrix(f, rows), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> List[List[Scalar]]:
        """Basis of ``{v : self @ v = 0}``, one vector per free column.

        The basis is deterministic: free columns in increasing order, with the
        free coordinate set to 1.
        """
        f = self.field
        red, pivots = self.rref()
        pivot_set = set(pivots)
        basis: List[List[Scalar]] = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            v = [f.zero] * self.ncols
            v[free] = f.one
            for r, p in enumerate(pivots):
                coef = red.rows[r][free]
                if coef:
                    v[p] = f.neg(coef)
            basis.append(v)
        return basis

    def inverse(self) -> "ExactMatrix":
        if self.nrows != self.ncols:
            raise ValueError("only square matrices invert")
        f = self.field
        n = self.nrows
        aug = ExactMatrix(f, [row[:] + ident_row[:] for row, ident_row in zip(self.rows, ExactMatrix.identity(f, n).rows)])
        red, pivots = aug.rref()
        if pivots != list(range(n)):
            raise ValueError("matrix is singular")
        return ExactMatrix(f, [row[n:] for row in red.rows])


class SparseEchelon:
    """Incremental forward elimination on sparse rows over an exact field.

    Rows are dicts mapping coordinate to scalar.  Each incoming row is reduced
    against the stored pivot rows (leading coordinate = smallest key); if
    anything survives it is normalized to leading coefficient 1 and kept.  Only
    forward reduction is performed, which keeps stored rows sparse; use
    :func:`sparse_kernel` when an actual kernel basis is required.
    """

    def __init__(self, field: FieldSpec):
        self.field = field
        self.pivot_rows: Dict[int, SparseVec] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def reduce(self, row: SparseVec) -> SparseVec:
        """Return the residue of ``row`` after elimination (not stored)."""
        f = self.field
        pivot_rows = self.pivot_rows
        row = {k: v for k, v in row.items() if v}
        while row:
            lead = min(row)
            prow = pivot_rows.get(lead)
            if prow is None:
                return row
            coef = row[lead]
            for k, v in prow.items():
                new = f.sub(row.get(k, f.zero), f.mul(coef, v))
                if new:
                    row[k] = new
                else:
                    row.pop(k, None)
        return row

    def add_row(self, row: SparseVec) -> bool:
        """Reduce and store ``row``; True if it increased the rank."""
        residue = self.reduce(row)
        if not residue:
            return False
        f = self.field
        lead = min(residue)
        inv = f.inv(residue[lead])
        self.pivot_rows[lead] = {k: f.mul(inv, v) for k, v in residue.items()}
        return True


def quotient_dim(ambient_dim: int, relations: Iterable[SparseVec], field: FieldSpec) -> int:
    """Dimension of ambient space modulo the span of the given relation rows."""
    ech = SparseEchelon(field)
    for rel in relations:
        ech.add_row(rel)
    return ambient_dim - ech.rank


def rref_sparse(rows: Iterable[SparseVec], field: FieldSpec) -> Dict[int, SparseVec]:
    """Fully reduced sparse echelon: pivot -> row, each row clear of all other
    pivots, leading coefficient 1.  The span of the rows is preserved."""
    f = field
    ech = SparseEchelon(f)
    for row in rows:
        ech.add_row(row)
    pivots = sorted(ech.pivot_rows)
    for p in reversed(pivots):
        row = ech.pivot_rows[p]
        for q in list(row):
            if q != p and q in ech.pivot_rows:
                coef = row[q]
                for k, v in ech.pivot_rows[q].items():
                    new = f.sub(row.get(k, f.zero), f.mul(coef, v))
                    if new:
                        row[k] = new
                    else:
                        row.pop(k, None)
    return ech.pivot_rows


def sparse_kernel(rows: Iterable[SparseVec], ncols: int, field: FieldSpec) -> List[SparseVec]:
    """Kernel basis of a sparse row system: all v with ``sum(row[j]*v[j]) == 0``.

    Returns sparse vectors, one per free column in increasing column order
    (free coordinate 1).  Columns never touched by any row are free and yield
    unit vectors, so this stays cheap when the system only constrains a small
    corner of a huge space.
    """
    f = field
    reduced = rref_sparse(rows, f)
    pivots = sorted(reduced)
    touched = set()
    for row in reduced.values():
        touched.update(row)
    pivot_set = set(pivots)
    # invert: for each free column, which pivot rows mention it
    col_uses: Dict[int, List[Tuple[int, Scalar]]] = {}
    for p, row in reduced.items():
        for k, v in row.items():
            if k != p:
                col_uses.setdefault(k, []).append((p, v))
    basis: List[SparseVec] = []
    constrained_free = sorted((touched | pivot_set) - pivot_set)
    free_iter: Iterable[int]
    if len(touched) < ncols // 2:
        # mostly-untouched ambient: unit vectors for untouched columns
        untouched = [c for c in range(ncols) if c not in touched and c not in pivot_set]
        free_iter = sorted(untouched + constrained_free)
    else:
        free_iter = (c for c in range(ncols) if c not in pivot_set)
    one = f.one
    for free in free_iter:
        v: SparseVec = {free: one}
        for p, coef in col_uses.get(free, ()):
            v[p] = f.neg(coef)
        basis.append(v)
    return basis


class QuotientSpace:
    """Ambient space modulo the span of relation rows, with explicit lifts.

    The quotient basis is the set of non-pivot coordinates of the reduced
    relation system, in increasing order, so every basis vector lifts to a
    unit vector of the ambient space.  :meth:`project` rewrites an ambient
    sparse vector in quotient coordinates.
    """

    def __init__(self, field: FieldSpec, ambient_dim: int, relations: Iterable[SparseVec]):
        self.field = field
        self.ambient_dim = ambient_dim
        self.pivot_rows = rref_sparse(relations, field)
        pivot_set = set(self.pivot_rows)
        self.basis_coords: List[int] = [c for c in range(ambient_dim) if c not in pivot_set]
        self._pos = {c: k for k, c in enumerate(self.basis_coords)}

    @property
    def dim(self) -> int:
        return len(self.basis_coords)

    def project(self, vec: SparseVec) -> List[Scalar]:
        """Quotient coordinates (dense, in basis_coords order) of an ambient vector."""
        f = self.field
        out = [f.zero] * self.dim
        pos = self._pos
        for coord, val in vec.items():
            if not val:
                continue
            prow = self.pivot_rows.get(coord)
            if prow is None:
                k = pos[coord]
                out[k] = f.add(out[k], val)
            else:
                # coord == -sum of the row's free entries
                for c2, v2 in prow.items():
                    if c2 != coord:
                        k = pos[c2]
                        out[k] = f.sub(out[k], f.mul(val, v2))
        return out

    def lift(self, k: int) -> SparseVec:
        """Ambient unit vector representing quotient basis vector ``k``."""
        return {self.basis_coords[k]: self.field.one}


class SpanSolver:
    """Express vectors in the span of a fixed list of sparse basis vectors.

    Maintains an echelon of the basis together with the combination that
    produced each pivot row, so :meth:`coordinates` can answer "write w as a
    combination of the basis" (or report that w is outside the span).
    """

    def __init__(self, field: FieldSpec, basis: Sequence[SparseVec]):
        self.field = field
        self.n = len(basis)
        # pivot -> (row, combo) with combo a sparse dict over basis indices
        self.rows: Dict[int, Tuple[SparseVec, SparseVec]] = {}
        for i, vec in enumerate(basis):
            row = dict(vec)
            combo: SparseVec = {i: field.one}
            self._insert(row, combo)

    def _reduce(self, row: SparseVec, combo: SparseVec) -> Tuple[SparseVec, SparseVec]:
        f = self.field
        while row:
            lead = min(row)
            stored = self.rows.get(lead)
            if stored is None:
                return row, combo
            prow, pcombo = stored
            coef = row[lead]
            for k, v in prow.items():
                new = f.sub(row.get(k, f.zero), f.mul(coef, v))
                if new:
                    row[k] = new
                else:
                    row.pop(k, None)
            for k, v in pcombo.items():
                new = f.sub(combo.get(k, f.zero), f.mul(coef, v))
                if new:
                    combo[k] = new
                else:
                    combo.pop(k, None)
        return row, combo

    def _insert(self, row: SparseVec, combo: SparseVec) -> None:
        f = self.field
        row = {k: v for k, v in row.items() if v}
        row, combo = self._reduce(row, combo)
        if not row:
            return
        lead = min(row)
        inv = f.inv(row[lead])
        self.rows[lead] = (
            {k: f.mul(inv, v) for k, v in row.items()},
            {k: f.mul(inv, v) for k, v in combo.items()},
        )

    def coordinates(self, vec: SparseVec) -> Optional[List[Scalar]]:
        """Coefficients c with ``sum c_i basis_i == vec``, or None if outside."""
        f = self.field
        row = {k: v for k, v in vec.items() if v}
        combo: SparseVec = {}
        row, combo = self._reduce(row, combo)
        if row:
            return None
        out = [f.zero] * self.n
        for i, c in combo.items():
            out[i] = f.neg(c)
        return out


def intertwiner_space(
    pairs: Sequence[Tuple[ExactMatrix, ExactMatrix]],
    nrows: int,
    ncols: int,
    field: FieldSpec,
) -> List[SparseVec]:
    """Joint solution space ``{V in F^{nrows x ncols} : P V = V Q for all (P, Q)}``.

    Returns sparse vectors over row-major coordinates ``r * ncols + c``.  The
    space is cut down one constraint at a time; constraints are imposed in
    order of increasing support so that near-diagonal ones (whose kernels are
    coordinate subspaces) collapse the dimension before any dense elimination
    happens.  Every pair is imposed, none is assumed redundant.
    """

    def nnz(m: ExactMatrix) -> int:
        return sum(1 for row in m.rows for x in row if x)

    order = sorted(range(len(pairs)), key=lambda i: (nnz(pairs[i][0]) + nnz(pairs[i][1]), i))
    f = field
    dim = nrows * ncols
    basis: Optional[List[SparseVec]] = None  # None = full space

    for idx in order:
        P, Q = pairs[idx]
        p_cols: List[SparseVec] = [
            {r: P.rows[r][k] for r in range(nrows) if P.rows[r][k]} for k in range(nrows)
        ]
        q_rows: List[SparseVec] = [
            {c: Q.rows[k][c] for c in range(ncols) if Q.rows[k][c]} for k in range(ncols)
        ]

        def constraint_image(vec: SparseVec) -> SparseVec:
            # image coordinate (r, c): sum_k P[r,k] V[k,c] - sum_k V[r,k] Q[k,c]
            out: SparseVec = {}
            for coord, val in vec.items():
                k, c = divmod(coord, ncols)
                for r, pv in p_cols[k].items():
                    key = r * ncols + c
                    new = f.add(out.get(key, f.zero), f.mul(pv, val))
                    if new:
                        out[key] = new
                    else:
                        out.pop(key, None)
                r = k
                for c2, qv in q_rows[c].items():
                    key = r * ncols + c2
                    new = f.sub(out.get(key, f.zero), f.mul(val, qv))
                    if new:
                        out[key] = new
                    else:
                        out.pop(key, None)
            return out

        if basis is None:
            # constraint rows over ambient coordinates, one per output coord
            rows: Dict[int, SparseVec] = {}
            for coord in range(dim):
                k, c = divmod(coord, ncols)
                for r, pv in p_cols[k].items():
                    row = rows.setdefault(r * ncols + c, {})
                    row[coord] = f.add(row.get(coord, f.zero), pv)
            for coord in range(dim):
                r, k = divmod(coord, ncols)
                for c2, qv in q_rows[k].items():
                    row = rows.setdefault(r * ncols + c2, {})
                    new = f.sub(row.get(coord, f.zero), qv)
                    if new:
                        row[coord] = new
                    else:
                        row.pop(coord, None)
            basis = sparse_kernel(rows.values(), dim, f)
        else:
            images = [constraint_image(b) for b in basis]
            # kernel of the (output coords) x len(basis) sparse system
            rows_by_out: Dict[int, SparseVec] = {}
            for col, img in enumerate(images):
                for out_coord, val in img.items():
                    rows_by_out.setdefault(out_coord, {})[col] = val
            coeff_kernel = sparse_kernel(rows_by_out.values(), len(basis), f)
            new_basis: List[SparseVec] = []
            for combo in coeff_kernel:
                acc: SparseVec = {}
                for col, cv in combo.items():
                    for coord, bv in basis[col].items():
                        new = f.add(acc.get(coord, f.zero), f.mul(cv, bv))
                        if new:
                            acc[coord] = new
                        else:
                            acc.pop(coord, None)
                new_basis.append(acc)
            basis = new_basis
        if not basis:
            return []
    return basis if basis is not None else [
        {c: f.one} for c in range(dim)
    ]


def modp_rank_dense(
    relations: Iterable[SparseVec],
    ncols: int,
    p: int,
    stop_at_rank: Optional[int] = None,
) -> int:
    """Rank over GF(p) of a stream of sparse integer rows, numpy-accelerated.

    The accumulator is a dense int64 echelon (one row per pivot, entries kept
    in ``range(p)``); each incoming row is densified and swept.  Intended for
    the huge redundant relation systems where dict-based reduction is too
    slow; requires ``p**2 * ncols`` to fit comfortably in int64, which holds
    for every modulus this package uses.

    ``stop_at_rank`` stops reading rows once that rank is reached; callers
    pass it only when the rank is known a priori not to exceed it.
    """
    if p >= 2**21:
        raise ValueError("modulus too large for the int64 accumulator")
    pivot_of: Dict[int, int] = {}
    rows: List[np.ndarray] = []
    buf = np.zeros(ncols, dtype=np.int64)
    for rel in relations:
        if stop_at_rank is not None and len(rows) >= stop_at_rank:
            break
        buf[:] = 0
        for k, v in rel.items():
            buf[k] = int(v) % p
        work = buf
        while True:
            nz = np.nonzero(work)[0]
            if nz.size == 0:
                break
            lead = int(nz[0])
            stored = pivot_of.get(lead)
            if stored is None:
                inv = pow(int(work[lead]), -1, p)
                rows.append((work * inv) % p)
                pivot_of[lead] = len(rows) - 1
                break
            coef = int(work[lead])
            work = (work - coef * rows[stored]) % p
    return len(rows)
