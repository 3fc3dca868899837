"""Duality diagnostics for the alternating Schur algebra.

The odd component is an (S,S)-bimodule; tensoring with it over S defines a
functor D on finite-dimensional S-modules.  This module computes, in exact
arithmetic:

* ``phi_analysis``: rank and isomorphy of the multiplication map
  S⁻ ⊗_S S⁻ → S (tensor quotient built from basis-triple relations).
* ``psi_analysis``: kernel and image of the map S → End_S(S⁻) given by left
  multiplication, against the exact commutant of the right action.
* ``koszul_dual`` / ``eta_map`` / ``ringel_dual``: the functor D, the natural
  map D² → id, and Hom_S(S⁻, −).
* the equivalence between modules over the whole algebra and pairs (M, θ)
  of an S-module with a compatible map θ: D(M) → M.

Large quotients over Q are handled with a mod-p certificate: ranks over a
prime field only bound the rational answer, so the certificate is accepted
only when the bound pinches against an exact rational computation; otherwise
the code falls back to exact sparse elimination.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dataclass_field, InitVar
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .fields import FieldSpec, GF, Scalar
from .linalg import (
    ExactMatrix,
    QuotientSpace,
    SparseEchelon,
    SpanSolver,
    intertwiner_space,
    modp_rank_dense,
    sparse_kernel,
)
from .graphs import BipartiteGraph, gamma0_lambda
from .enumeration import check_basis_budget, enum_Lambda, enum_M, enum_N, graph_index
from .algebra import GradedElement, structure_constants, xi, zeta

__all__ = [
    "SModule",
    "ASModule",
    "ThetaPair",
    "BimoduleData",
    "IncompatibleTheta",
    "PhiReport",
    "PsiReport",
    "EtaReport",
    "bimodule_data",
    "phi_analysis",
    "psi_analysis",
    "koszul_dual",
    "eta_map",
    "ringel_dual",
    "pair_to_as_module",
    "as_module_to_pair",
    "regular_smodule",
    "regular_as_module",
    "column_module",
    "zero_smodule",
    "module_homs",
    "find_module_isomorphism",
]

# Modulus for rank certificates over Q.  Must stay below 2^21 so that
# modp_rank_dense's int64 accumulator cannot overflow.
_CERT_PRIME = 999983

# Above this many ambient coordinates, rational analyses try the mod-p
# certificate before exact elimination.
_EXACT_CUTOFF = 600

_SAMPLE_PAIRS = 25


class IncompatibleTheta(ValueError):
    """Raised when a theta map fails the compatibility square."""


# ---------------------------------------------------------------------------
# integer structure-constant tables (field-independent, cached per (n, d))
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _left_dicts(n: int, d: int) -> Tuple[Dict[int, Dict[int, int]], ...]:
    """Per even index g: {a: {c: coeff of ζ_c in ξ_g ζ_a}} over odd indices."""
    Ms, Ns = enum_M(n, d), enum_N(n, d)
    n_idx = graph_index("N", n, d)
    out: List[Dict[int, Dict[int, int]]] = []
    for g in Ms:
        per: Dict[int, Dict[int, int]] = {}
        for ai, a in enumerate(Ns):
            if g.upper_degrees != a.lower_degrees:
                continue
            sc = structure_constants(xi(g), zeta(a))
            if sc:
                per[ai] = {n_idx[s.graph]: c for s, c in sc.items()}
        out.append(per)
    return tuple(out)


@lru_cache(maxsize=None)
def _right_dicts(n: int, d: int) -> Tuple[Dict[int, Dict[int, int]], ...]:
    """Per even index g: {a: {c: coeff of ζ_c in ζ_a ξ_g}} over odd indices."""
    Ms, Ns = enum_M(n, d), enum_N(n, d)
    n_idx = graph_index("N", n, d)
    out: List[Dict[int, Dict[int, int]]] = []
    for g in Ms:
        per: Dict[int, Dict[int, int]] = {}
        for ai, a in enumerate(Ns):
            if a.upper_degrees != g.lower_degrees:
                continue
            sc = structure_constants(zeta(a), xi(g))
            if sc:
                per[ai] = {n_idx[s.graph]: c for s, c in sc.items()}
        out.append(per)
    return tuple(out)


@lru_cache(maxsize=None)
def _right_rows(n: int, d: int) -> Tuple[Dict[int, Dict[int, int]], ...]:
    """Row-major transpose of :func:`_right_dicts`: per g, {c: {a: coeff}}."""
    out: List[Dict[int, Dict[int, int]]] = []
    for per in _right_dicts(n, d):
        rows: Dict[int, Dict[int, int]] = {}
        for a, col in per.items():
            for c, v in col.items():
                rows.setdefault(c, {})[a] = v
        out.append(rows)
    return tuple(out)


def _dicts_to_matrices(
    dicts: Sequence[Dict[int, Dict[int, int]]], size: int, field: FieldSpec
) -> List[ExactMatrix]:
    mats = []
    for per in dicts:
        m = ExactMatrix.zeros(field, size, size)
        for a, col in per.items():
            for c, v in col.items():
                m.rows[c][a] = field.from_int(v)
        mats.append(m)
    return mats


# ---------------------------------------------------------------------------
# module types
# ---------------------------------------------------------------------------


def _is_diagonal(g: BipartiteGraph) -> bool:
    return all(v == 0 for i, row in enumerate(g.adj) for j, v in enumerate(row) if i != j)


def _diag_indices(n: int, d: int) -> List[int]:
    m_idx = graph_index("M", n, d)
    return [m_idx[gamma0_lambda(lam, n)] for lam in enum_Lambda(n, d)]


def _check_even_action(
    n: int, d: int, field: FieldSpec, dim: int, action: Sequence[ExactMatrix], level: str, rng_seed: int
) -> None:
    Ms = enum_M(n, d)
    if len(action) != len(Ms):
        raise ValueError(f"expected {len(Ms)} action matrices, got {len(action)}")
    for a in action:
        if a.shape != (dim, dim):
            raise ValueError(f"action matrix has shape {a.shape}, expected {(dim, dim)}")
        if a.field != field:
            raise ValueError("action matrix lives over the wrong field")
    if level == "none":
        return
    ident = ExactMatrix.zeros(field, dim, dim)
    for i in _diag_indices(n, d):
        ident = ident + action[i]
    if ident != ExactMatrix.identity(field, dim):
        raise ValueError("identity element does not act as the identity matrix")
    m_idx = graph_index("M", n, d)
    nM = len(Ms)
    if level == "full":
        pairs: Iterable[Tuple[int, int]] = ((i, j) for i in range(nM) for j in range(nM))
    else:
        rng = random.Random(rng_seed)
        pairs = {(rng.randrange(nM), rng.randrange(nM)) for _ in range(_SAMPLE_PAIRS)}
    for i, j in pairs:
        lhs = action[i] @ action[j]
        rhs = ExactMatrix.zeros(field, dim, dim)
        for s, c in structure_constants(xi(Ms[i]), xi(Ms[j])).items():
            rhs = rhs + action[m_idx[s.graph]].scale(field.from_int(c))
        if lhs != rhs:
            raise ValueError(
                f"even action is not multiplicative at basis pair ({Ms[i]}, {Ms[j]})"
            )


def _resolve_level(validate: str, n: int, d: int) -> str:
    if validate == "auto":
        return "full" if len(enum_M(n, d)) <= 12 else "sample"
    if validate not in ("full", "sample", "none"):
        raise ValueError(f"unknown validation level {validate!r}")
    return validate


@dataclass
class SModule:
    """A finite-dimensional left module over the even subalgebra.

    ``action[i]`` is the matrix of the i-th even basis symbol (enum_M order)
    on a fixed basis of the carrier space.  Multiplicativity against the
    structure constants is checked on construction: in full for small (n, d),
    on a seeded sample otherwise, or not at all with ``validate="none"``.
    """

    n: int
    d: int
    field: FieldSpec
    dim: int
    action: List[ExactMatrix]
    quotient: Optional[QuotientSpace] = dataclass_field(default=None, repr=False, compare=False)
    validate: InitVar[str] = "auto"

    def __post_init__(self, validate: str) -> None:
        level = _resolve_level(validate, self.n, self.d)
        _check_even_action(self.n, self.d, self.field, self.dim, self.action, level, rng_seed=0)

    def act(self, g_index: int, vec: Sequence[Scalar]) -> List[Scalar]:
        return self.action[g_index].apply(vec)


@dataclass
class ASModule:
    """A module over the full algebra: even action plus odd action.

    ``odd_action[j]`` is the matrix of the j-th odd basis symbol (enum_N
    order).  Construction checks multiplicativity across all four parity
    blocks at the same full/sample/none levels as :class:`SModule`.
    """

    n: int
    d: int
    field: FieldSpec
    dim: int
    action: List[ExactMatrix]
    odd_action: List[ExactMatrix]
    validate: InitVar[str] = "auto"

    def __post_init__(self, validate: str) -> None:
        level = _resolve_level(validate, self.n, self.d)
        _check_even_action(self.n, self.d, self.field, self.dim, self.action, level, rng_seed=0)
        Ns = enum_N(self.n, self.d)
        if len(self.odd_action) != len(Ns):
            raise ValueError(f"expected {len(Ns)} odd action matrices, got {len(self.odd_action)}")
        for b in self.odd_action:
            if b.shape != (self.dim, self.dim):
                raise ValueError(f"odd action matrix has shape {b.shape}, expected square dim {self.dim}")
        if level != "none":
            self._check_mixed_blocks(level)

    def _check_mixed_blocks(self, level: str) -> None:
        n, d, f, dim = self.n, self.d, self.field, self.dim
        Ms, Ns = enum_M(n, d), enum_N(n, d)
        m_idx, n_idx = graph_index("M", n, d), graph_index("N", n, d)
        nM, nN = len(Ms), len(Ns)
        if nN == 0:
            return
        rng = random.Random(1)
        if level == "full":
            even_odd = [(i, j) for i in range(nM) for j in range(nN)]
            odd_even = [(j, i) for j in range(nN) for i in range(nM)]
            odd_odd = [(a, b) for a in range(nN) for b in range(nN)]
        else:
            even_odd = [(rng.randrange(nM), rng.randrange(nN)) for _ in range(_SAMPLE_PAIRS)]
            odd_even = [(rng.randrange(nN), rng.randrange(nM)) for _ in range(_SAMPLE_PAIRS)]
            odd_odd = [(rng.randrange(nN), rng.randrange(nN)) for _ in range(_SAMPLE_PAIRS)]
        zero = ExactMatrix.zeros(f, dim, dim)
        for i, j in even_odd:
            lhs = self.action[i] @ self.odd_action[j]
            rhs = zero
            for s, c in structure_constants(xi(Ms[i]), zeta(Ns[j])).items():
                rhs = rhs + self.odd_action[n_idx[s.graph]].scale(f.from_int(c))
            if lhs != rhs:
                raise ValueError(f"even*odd action mismatch at ({Ms[i]}, {Ns[j]})")
        for j, i in odd_even:
            lhs = self.odd_action[j] @ self.action[i]
            rhs = zero
            for s, c in structure_constants(zeta(Ns[j]), xi(Ms[i])).items():
                rhs = rhs + self.odd_action[n_idx[s.graph]].scale(f.from_int(c))
            if lhs != rhs:
                raise ValueError(f"odd*even action mismatch at ({Ns[j]}, {Ms[i]})")
        for a, b in odd_odd:
            lhs = self.odd_action[a] @ self.odd_action[b]
            rhs = zero
            for s, c in structure_constants(zeta(Ns[a]), zeta(Ns[b])).items():
                rhs = rhs + self.action[m_idx[s.graph]].scale(f.from_int(c))
            if lhs != rhs:
                raise ValueError(f"odd*odd action mismatch at ({Ns[a]}, {Ns[b]})")

    def even_part(self) -> SModule:
        return SModule(self.n, self.d, self.field, self.dim, self.action, validate="none")


@dataclass
class ThetaPair:
    """An S-module together with a map θ: D(base) → base.

    ``theta`` is written against the canonical basis of the tensor quotient
    D(base) produced by :func:`koszul_dual`; compatibility (the square that
    makes θ encode an odd action) is checked by :func:`pair_to_as_module`.
    """

    base: SModule
    theta: ExactMatrix


@dataclass
class BimoduleData:
    """Matrices of the even basis acting on the odd component on both sides."""

    n: int
    d: int
    field: FieldSpec
    left_mult: List[ExactMatrix]
    right_mult: List[ExactMatrix]

    def check_commutation(self, level: str = "sample", rng_seed: int = 0) -> None:
        """Left and right actions commute (bimodule axiom)."""
        nM = len(self.left_mult)
        if level == "full":
            pairs: Iterable[Tuple[int, int]] = ((i, j) for i in range(nM) for j in range(nM))
        else:
            rng = random.Random(rng_seed)
            pairs = {(rng.randrange(nM), rng.randrange(nM)) for _ in range(_SAMPLE_PAIRS)}
        for i, j in pairs:
            if self.left_mult[i] @ self.right_mult[j] != self.right_mult[j] @ self.left_mult[i]:
                raise ValueError(f"bimodule actions fail to commute at even pair ({i}, {j})")


def bimodule_data(n: int, d: int, field: FieldSpec, cap: Optional[int] = None) -> BimoduleData:
    """Left- and right-multiplication matrices of every even basis symbol on
    the odd component, in enum_M order over enum_N coordinates."""
    check_basis_budget(n, d, cap)
    nN = len(enum_N(n, d))
    left = _dicts_to_matrices(_left_dicts(n, d), nN, field)
    right = _dicts_to_matrices(_right_dicts(n, d), nN, field)
    return BimoduleData(n, d, field, left, right)


# ---------------------------------------------------------------------------
# phi: multiplication of the odd component over the even subalgebra
# ---------------------------------------------------------------------------


@dataclass
class PhiReport:
    n: int
    d: int
    field: FieldSpec
    tensor_dim: int
    phi_rank: int
    target_dim: int
    surjective: bool
    injective: bool
    iso: bool
    method: str

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "tensor_dim": self.tensor_dim,
            "phi_rank": self.phi_rank,
            "target_dim": self.target_dim,
            "surjective": self.surjective,
            "injective": self.injective,
            "iso": self.iso,
            "method": self.method,
        }


def _phi_surviving(n: int, d: int) -> Tuple[List[Tuple[int, int]], Dict[Tuple[int, int], int]]:
    """Tensor coordinates (a, b) not killed by the diagonal relations.

    The relation for a diagonal even symbol reads off the two margin
    projectors, so the coordinate ζ_a ⊗ ζ_b survives exactly when the upper
    degree sequence of a matches the lower one of b.
    """
    Ns = enum_N(n, d)
    surviving = [
        (ai, bi)
        for ai, a in enumerate(Ns)
        for bi, b in enumerate(Ns)
        if a.upper_degrees == b.lower_degrees
    ]
    return surviving, {pair: k for k, pair in enumerate(surviving)}


def _phi_relation_rows(n: int, d: int) -> Iterator[Dict[int, int]]:
    """Non-diagonal tensor relations (ζ_a ξ_g) ⊗ ζ_b − ζ_a ⊗ (ξ_g ζ_b),
    projected to the surviving coordinates (integer rows)."""
    Ms, Ns = enum_M(n, d), enum_N(n, d)
    _, coord = _phi_surviving(n, d)
    by_upper: Dict[Tuple[int, ...], List[int]] = {}
    by_lower: Dict[Tuple[int, ...], List[int]] = {}
    for ai, a in enumerate(Ns):
        by_upper.setdefault(a.upper_degrees, []).append(ai)
        by_lower.setdefault(a.lower_degrees, []).append(ai)
    right, left = _right_dicts(n, d), _left_dicts(n, d)
    for gi, g in enumerate(Ms):
        if _is_diagonal(g):
            continue  # diagonal symbols are already accounted for by the projection
        A = by_upper.get(g.lower_degrees, ())
        B = by_lower.get(g.upper_degrees, ())
        for ai in A:
            rsc = right[gi].get(ai, {})
            for bi in B:
                lsc = left[gi].get(bi, {})
                row: Dict[int, int] = {}
                for ci, c in rsc.items():
                    key = coord[(ci, bi)]
                    row[key] = row.get(key, 0) + c
                for ci, c in lsc.items():
                    key = coord[(ai, ci)]
                    row[key] = row.get(key, 0) - c
                row = {k: v for k, v in row.items() if v}
                if row:
                    yield row


def _product_rows(n: int, d: int) -> List[Dict[int, int]]:
    """Row k = the expansion of ζ_a ζ_b over the even basis, for the k-th
    surviving tensor coordinate (a, b)."""
    Ns = enum_N(n, d)
    m_idx = graph_index("M", n, d)
    surviving, _ = _phi_surviving(n, d)
    rows = []
    for ai, bi in surviving:
        sc = structure_constants(zeta(Ns[ai]), zeta(Ns[bi]))
        rows.append({m_idx[s.graph]: c for s, c in sc.items()})
    return rows


def _sparse_rank(rows: Iterable[Dict[int, int]], field: FieldSpec) -> int:
    ech = SparseEchelon(field)
    for row in rows:
        ech.add_row({k: field.from_int(v) for k, v in row.items()})
    return ech.rank


def phi_analysis(n: int, d: int, field: FieldSpec, cap: Optional[int] = None) -> PhiReport:
    """Rank data for the multiplication map out of the odd-odd tensor square.

    ``tensor_dim`` is the dimension of the quotient of the |N|²-dimensional
    space by the basis-triple relations; ``phi_rank`` the dimension of its
    image in the even subalgebra.  Over Q on large quotients the relation
    rank is first computed modulo a certificate prime: the mod-p quotient
    dimension is an upper bound for the rational one and the rational image
    dimension a lower bound, so when the two meet the answer is exact; if
    they disagree the code falls back to exact elimination.
    """
    check_basis_budget(n, d, cap)
    nM = len(enum_M(n, d))
    surviving, _ = _phi_surviving(n, d)
    S = len(surviving)
    if S == 0:
        return PhiReport(n, d, field, 0, 0, nM, False, True, False, "empty")
    prod_rows = _product_rows(n, d)
    phi_rank = _sparse_rank(prod_rows, field)
    if field.kind == "GF" and field.p < 2**21:
        # rank of the relations cannot exceed S - phi_rank: the product map
        # kills every relation, so the quotient is at least phi_rank wide
        rank = modp_rank_dense(_phi_relation_rows(n, d), S, field.p, stop_at_rank=S - phi_rank)
        tensor_dim = S - rank
        method = "modp"
    elif field.kind == "GF":
        tensor_dim = S - _sparse_rank(_phi_relation_rows(n, d), field)
        method = "sparse"
    elif S <= _EXACT_CUTOFF:
        tensor_dim = S - _sparse_rank(_phi_relation_rows(n, d), field)
        method = "exact"
    else:
        cert = GF(_CERT_PRIME)
        rank_cert_image = _sparse_rank(prod_rows, cert)
        rank_p = modp_rank_dense(
            _phi_relation_rows(n, d), S, _CERT_PRIME, stop_at_rank=S - rank_cert_image
        )
        if S - rank_p == phi_rank:
            # pinched: phi_rank <= tensor_dim <= S - rank_p
            tensor_dim = S - rank_p
            method = "certificate"
        else:
            tensor_dim = S - _sparse_rank(_phi_relation_rows(n, d), field)
            method = "exact-fallback"
    return PhiReport(
        n,
        d,
        field,
        tensor_dim,
        phi_rank,
        nM,
        surjective=(phi_rank == nM),
        injective=(phi_rank == tensor_dim),
        iso=(phi_rank == nM and tensor_dim == nM),
        method=method,
    )


# ---------------------------------------------------------------------------
# psi: the even subalgebra against the endomorphisms of the odd component
# ---------------------------------------------------------------------------


@dataclass
class PsiReport:
    n: int
    d: int
    field: FieldSpec
    kernel_dim: int
    commutant_dim: int
    source_dim: int
    iso: bool
    method: str
    kernel_vectors: List[Dict[int, Scalar]] = dataclass_field(repr=False, default_factory=list)

    def kernel_elements(self) -> List[GradedElement]:
        Ms = enum_M(self.n, self.d)
        out = []
        for vec in self.kernel_vectors:
            terms = {xi(Ms[i]): c for i, c in vec.items() if c}
            out.append(GradedElement(self.n, self.d, self.field, terms))
        return out

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "kernel_dim": self.kernel_dim,
            "commutant_dim": self.commutant_dim,
            "source_dim": self.source_dim,
            "iso": self.iso,
            "method": self.method,
        }


def _psi_kernel_rows(n: int, d: int) -> List[Dict[int, int]]:
    """One row per matrix entry (c, a) of the stacked left-multiplication
    matrices; columns are even basis indices."""
    nN = len(enum_N(n, d))
    left = _left_dicts(n, d)
    rows: Dict[Tuple[int, int], Dict[int, int]] = {}
    for gi, per in enumerate(left):
        for a, col in per.items():
            for c, v in col.items():
                rows.setdefault((c, a), {})[gi] = v
    return [rows[key] for key in sorted(rows)]


def _commutant_vars(n: int, d: int) -> Tuple[List[Tuple[int, int]], Dict[Tuple[int, int], int]]:
    """Matrix positions (c, a) allowed by the diagonal constraints.

    Commuting with the margin projectors forces block-diagonal form: the
    entry θ[c, a] is free exactly when c and a have the same upper degree
    sequence, and zero otherwise.
    """
    Ns = enum_N(n, d)
    pairs = [
        (ci, ai)
        for ci, c in enumerate(Ns)
        for ai, a in enumerate(Ns)
        if c.upper_degrees == a.upper_degrees
    ]
    return pairs, {pair: k for k, pair in enumerate(pairs)}


def _commutant_rows(n: int, d: int) -> Iterator[Dict[int, int]]:
    """Constraint rows of θ·R_g = R_g·θ over the block variables, for every
    non-diagonal even symbol g."""
    Ms, Ns = enum_M(n, d), enum_N(n, d)
    _, var = _commutant_vars(n, d)
    by_upper: Dict[Tuple[int, ...], List[int]] = {}
    for ai, a in enumerate(Ns):
        by_upper.setdefault(a.upper_degrees, []).append(ai)
    right, rrows = _right_dicts(n, d), _right_rows(n, d)
    for gi, g in enumerate(Ms):
        if _is_diagonal(g):
            continue
        cs = by_upper.get(g.upper_degrees, ())
        as_ = by_upper.get(g.lower_degrees, ())
        for c in cs:
            rev = rrows[gi].get(c, {})
            for a in as_:
                row: Dict[int, int] = {}
                for k, v in right[gi].get(a, {}).items():
                    key = var[(c, k)]
                    row[key] = row.get(key, 0) + v
                for k, v in rev.items():
                    key = var[(k, a)]
                    row[key] = row.get(key, 0) - v
                row = {k: v for k, v in row.items() if v}
                if row:
                    yield row


def psi_analysis(n: int, d: int, field: FieldSpec, cap: Optional[int] = None) -> PsiReport:
    """Kernel of left multiplication on the odd component, and the exact
    commutant of the right action.

    The map is injective iff the kernel is zero and surjective iff the image
    dimension |M| − kernel_dim equals the commutant dimension.  The commutant
    system is solved against all |M| generators: the diagonal ones in closed
    form (they force block-diagonal shape) and the rest as linear rows.
    """
    check_basis_budget(n, d, cap)
    nM = len(enum_M(n, d))
    kernel_rows = [
        {k: field.from_int(v) for k, v in row.items()} for row in _psi_kernel_rows(n, d)
    ]
    kernel = sparse_kernel(kernel_rows, nM, field)
    kernel_dim = len(kernel)
    image_dim = nM - kernel_dim
    vars_, _ = _commutant_vars(n, d)
    V = len(vars_)
    if field.kind == "GF" and field.p < 2**21:
        # the image of the map lands in the commutant, so the constraint rank
        # cannot exceed V - image_dim
        rank = modp_rank_dense(_commutant_rows(n, d), V, field.p, stop_at_rank=V - image_dim)
        commutant_dim = V - rank
        method = "modp"
    elif field.kind == "GF":
        commutant_dim = V - _sparse_rank(_commutant_rows(n, d), field)
        method = "sparse"
    elif V <= _EXACT_CUTOFF:
        commutant_dim = V - _sparse_rank(_commutant_rows(n, d), field)
        method = "exact"
    else:
        cert = GF(_CERT_PRIME)
        kernel_p = sparse_kernel(
            [{k: cert.from_int(v) for k, v in row.items()} for row in _psi_kernel_rows(n, d)],
            nM,
            cert,
        )
        rank_p = modp_rank_dense(
            _commutant_rows(n, d), V, _CERT_PRIME, stop_at_rank=V - (nM - len(kernel_p))
        )
        if V - rank_p == image_dim:
            # pinched: image_dim <= commutant over Q <= commutant mod p
            commutant_dim = V - rank_p
            method = "certificate"
        else:
            commutant_dim = V - _sparse_rank(_commutant_rows(n, d), field)
            method = "exact-fallback"
    return PsiReport(
        n,
        d,
        field,
        kernel_dim,
        commutant_dim,
        nM,
        iso=(kernel_dim == 0 and image_dim == commutant_dim),
        method=method,
        kernel_vectors=kernel,
    )


# ---------------------------------------------------------------------------
# the functor D and its companions
# ---------------------------------------------------------------------------


def _dual_relations(M: SModule) -> List[Dict[int, Scalar]]:
    """Relations (ζ_a ξ_g) ⊗ v − ζ_a ⊗ (ξ_g v) over coordinates a*dim + i."""
    f, dim = M.field, M.dim
    right = _right_dicts(M.n, M.d)
    nN = len(enum_N(M.n, M.d))
    rels: List[Dict[int, Scalar]] = []
    for gi in range(len(right)):
        Ag = M.action[gi]
        per = right[gi]
        for ai in range(nN):
            rsc = per.get(ai, {})
            for i in range(dim):
                row: Dict[int, Scalar] = {}
                for ci, v in rsc.items():
                    row[ci * dim + i] = f.from_int(v)
                for j in range(dim):
                    a = Ag.rows[j][i]
                    if a:
                        key = ai * dim + j
                        row[key] = f.sub(row.get(key, f.zero), a)
                row = {k: v for k, v in row.items() if v}
                if row:
                    rels.append(row)
    return rels


def koszul_dual(M: SModule, validate: str = "auto") -> SModule:
    """The module D(M): the odd component tensored with M over the even
    subalgebra, carried by the canonical quotient basis.

    The returned module keeps the :class:`~altschur.linalg.QuotientSpace`
    in its ``quotient`` field so callers can map ambient tensors ζ_a ⊗ v
    into it.
    """
    f, dim = M.field, M.dim
    nN = len(enum_N(M.n, M.d))
    quotient = QuotientSpace(f, nN * dim, _dual_relations(M))
    left = _left_dicts(M.n, M.d)
    action = []
    for per in left:
        cols = []
        for k in range(quotient.dim):
            ai, i = divmod(quotient.basis_coords[k], dim)
            image = {ci * dim + i: f.from_int(v) for ci, v in per.get(ai, {}).items()}
            cols.append(quotient.project(image))
        action.append(ExactMatrix.from_columns(f, cols, nrows=quotient.dim))
    return SModule(M.n, M.d, f, quotient.dim, action, quotient=quotient, validate=validate)


@dataclass
class EtaReport:
    matrix: ExactMatrix
    source_dim: int
    target_dim: int
    rank: int
    iso: bool

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "rank": self.rank,
            "iso": self.iso,
        }


def eta_map(M: SModule) -> EtaReport:
    """The natural map D²(M) → M induced by multiplying the two odd tensor
    factors: ζ_b ⊗ (ζ_a ⊗ v) goes to (ζ_b ζ_a)·v."""
    f, dim = M.field, M.dim
    n, d = M.n, M.d
    Ns = enum_N(n, d)
    m_idx = graph_index("M", n, d)
    D1 = koszul_dual(M, validate="none")
    inner = D1.quotient
    assert inner is not None
    rels2 = _dual_relations(D1)
    outer = QuotientSpace(f, len(Ns) * D1.dim, rels2)

    def ambient_column(coord: int) -> List[Scalar]:
        bi, k = divmod(coord, D1.dim)
        ai, i = divmod(inner.basis_coords[k], dim)
        col = [f.zero] * dim
        for s, c in structure_constants(zeta(Ns[bi]), zeta(Ns[ai])).items():
            hcol = M.action[m_idx[s.graph]].column(i)
            cf = f.from_int(c)
            for r in range(dim):
                if hcol[r]:
                    col[r] = f.add(col[r], f.mul(cf, hcol[r]))
        return col

    # the map must kill the relations defining the outer quotient, otherwise
    # the basis columns below would depend on the chosen lifts
    for rel in rels2:
        acc = [f.zero] * dim
        for coord, v in rel.items():
            col = ambient_column(coord)
            for r in range(dim):
                if col[r]:
                    acc[r] = f.add(acc[r], f.mul(v, col[r]))
        if any(acc):
            raise RuntimeError("eta does not vanish on the tensor relations")

    cols = [ambient_column(outer.basis_coords[k]) for k in range(outer.dim)]
    matrix = ExactMatrix.from_columns(f, cols, nrows=dim)
    rank = matrix.rank()
    return EtaReport(
        matrix,
        source_dim=outer.dim,
        target_dim=dim,
        rank=rank,
        iso=(rank == dim and outer.dim == dim),
    )


def ringel_dual(M: SModule, validate: str = "auto") -> SModule:
    """Hom_S(S⁻, M) as a left S-module.

    The carrier is the joint solution space of h·L_g = A_g·h over all even
    basis symbols; ξ_g then acts by precomposition with right multiplication.
    """
    f = M.field
    n, d = M.n, M.d
    nN = len(enum_N(n, d))
    bim_left = _dicts_to_matrices(_left_dicts(n, d), nN, f)
    pairs = [(M.action[gi], bim_left[gi]) for gi in range(len(bim_left))]
    basis = intertwiner_space(pairs, M.dim, nN, f)
    solver = SpanSolver(f, basis)
    rrows = _right_rows(n, d)
    action = []
    for gi in range(len(bim_left)):
        rows_g = rrows[gi]
        cols = []
        for h in basis:
            image: Dict[int, Scalar] = {}
            for coord, val in h.items():
                r, k = divmod(coord, nN)
                for c2, v in rows_g.get(k, {}).items():
                    key = r * nN + c2
                    acc = f.add(image.get(key, f.zero), f.mul(val, f.from_int(v)))
                    if acc:
                        image[key] = acc
                    else:
                        image.pop(key, None)
            coords = solver.coordinates(image)
            if coords is None:
                raise RuntimeError("hom space is not stable under the right action")
            cols.append(coords)
        action.append(ExactMatrix.from_columns(f, cols, nrows=len(basis)))
    return SModule(n, d, f, len(basis), action, validate=validate)


# ---------------------------------------------------------------------------
# modules over the full algebra as pairs (M, theta)
# ---------------------------------------------------------------------------


def pair_to_as_module(pair: ThetaPair, validate: str = "auto") -> ASModule:
    """Extend the even action of ``pair.base`` by the odd action encoded in
    theta.  Raises :class:`IncompatibleTheta` unless theta is a module map
    whose square realizes the even products of odd symbols."""
    M = pair.base
    f, dim = M.field, M.dim
    n, d = M.n, M.d
    Ns = enum_N(n, d)
    m_idx = graph_index("M", n, d)
    D1 = koszul_dual(M, validate="none")
    quotient = D1.quotient
    assert quotient is not None
    theta = pair.theta
    if theta.shape != (dim, D1.dim):
        raise ValueError(f"theta has shape {theta.shape}, expected {(dim, D1.dim)}")
    for gi in range(len(M.action)):
        if theta @ D1.action[gi] != M.action[gi] @ theta:
            raise IncompatibleTheta("theta is not a module map")
    odd_action = []
    for ai in range(len(Ns)):
        cols = []
        for i in range(dim):
            coords = quotient.project({ai * dim + i: f.one})
            cols.append(theta.apply(coords))
        odd_action.append(ExactMatrix.from_columns(f, cols, nrows=dim))
    for bi in range(len(Ns)):
        for ai in range(len(Ns)):
            lhs = odd_action[bi] @ odd_action[ai]
            rhs = ExactMatrix.zeros(f, dim, dim)
            for s, c in structure_constants(zeta(Ns[bi]), zeta(Ns[ai])).items():
                rhs = rhs + M.action[m_idx[s.graph]].scale(f.from_int(c))
            if lhs != rhs:
                raise IncompatibleTheta(
                    f"theta squared misses the even product at odd pair ({Ns[bi]}, {Ns[ai]})"
                )
    return ASModule(n, d, f, dim, list(M.action), odd_action, validate=validate)


def as_module_to_pair(module: ASModule) -> ThetaPair:
    """Read theta off an AS-module: the odd action, seen through the tensor
    quotient of the even part."""
    f, dim = module.field, module.dim
    base = module.even_part()
    D1 = koszul_dual(base, validate="none")
    quotient = D1.quotient
    assert quotient is not None

    def odd_column(coord: int) -> List[Scalar]:
        ai, i = divmod(coord, dim)
        return module.odd_action[ai].column(i)

    for rel in _dual_relations(base):
        acc = [f.zero] * dim
        for coord, v in rel.items():
            col = odd_column(coord)
            for r in range(dim):
                if col[r]:
                    acc[r] = f.add(acc[r], f.mul(v, col[r]))
        if any(acc):
            raise IncompatibleTheta("odd action does not descend to the tensor quotient")
    cols = [odd_column(quotient.basis_coords[k]) for k in range(quotient.dim)]
    theta = ExactMatrix.from_columns(f, cols, nrows=dim)
    return ThetaPair(base=base, theta=theta)


# ---------------------------------------------------------------------------
# stock modules and hom-space helpers
# ---------------------------------------------------------------------------


def regular_smodule(n: int, d: int, field: FieldSpec, validate: str = "auto") -> SModule:
    """The even subalgebra acting on itself from the left."""
    Ms = enum_M(n, d)
    m_idx = graph_index("M", n, d)
    nM = len(Ms)
    action = []
    for g in Ms:
        m = ExactMatrix.zeros(field, nM, nM)
        for hi, h in enumerate(Ms):
            for s, c in structure_constants(xi(g), xi(h)).items():
                m.rows[m_idx[s.graph]][hi] = field.from_int(c)
        action.append(m)
    return SModule(n, d, field, nM, action, validate=validate)


def regular_as_module(n: int, d: int, field: FieldSpec, validate: str = "auto") -> ASModule:
    """The full algebra acting on itself from the left.

    Basis order: even symbols (enum_M) then odd symbols (enum_N).
    """
    Ms, Ns = enum_M(n, d), enum_N(n, d)
    m_idx, n_idx = graph_index("M", n, d), graph_index("N", n, d)
    nM, nN = len(Ms), len(Ns)
    dim = nM + nN
    action = []
    for g in Ms:
        m = ExactMatrix.zeros(field, dim, dim)
        for hi, h in enumerate(Ms):
            for s, c in structure_constants(xi(g), xi(h)).items():
                m.rows[m_idx[s.graph]][hi] = field.from_int(c)
        for bi, b in enumerate(Ns):
            for s, c in structure_constants(xi(g), zeta(b)).items():
                m.rows[nM + n_idx[s.graph]][nM + bi] = field.from_int(c)
        action.append(m)
    odd_action = []
    for a in Ns:
        m = ExactMatrix.zeros(field, dim, dim)
        for hi, h in enumerate(Ms):
            for s, c in structure_constants(zeta(a), xi(h)).items():
                m.rows[nM + n_idx[s.graph]][hi] = field.from_int(c)
        for bi, b in enumerate(Ns):
            for s, c in structure_constants(zeta(a), zeta(b)).items():
                m.rows[m_idx[s.graph]][nM + bi] = field.from_int(c)
        odd_action.append(m)
    return ASModule(n, d, field, dim, action, odd_action, validate=validate)


def column_module(
    n: int, d: int, field: FieldSpec, lam: Sequence[int], validate: str = "auto"
) -> SModule:
    """The left ideal generated by the diagonal idempotent of composition
    ``lam``: spanned by the even symbols with upper degree sequence lam."""
    lam = tuple(lam)
    Ms = enum_M(n, d)
    members = [gi for gi, g in enumerate(Ms) if g.upper_degrees == lam]
    local = {gi: k for k, gi in enumerate(members)}
    m_idx = graph_index("M", n, d)
    action = []
    for g in Ms:
        m = ExactMatrix.zeros(field, len(members), len(members))
        for gi in members:
            for s, c in structure_constants(xi(g), xi(Ms[gi])).items():
                m.rows[local[m_idx[s.graph]]][local[gi]] = field.from_int(c)
        action.append(m)
    return SModule(n, d, field, len(members), action, validate=validate)


def zero_smodule(n: int, d: int, field: FieldSpec) -> SModule:
    nM = len(enum_M(n, d))
    return SModule(
        n, d, field, 0, [ExactMatrix.zeros(field, 0, 0) for _ in range(nM)], validate="none"
    )


def module_homs(source: SModule, target: SModule) -> List[ExactMatrix]:
    """Basis of Hom_S(source, target) as matrices target.dim × source.dim."""
    if (source.n, source.d, source.field) != (target.n, target.d, target.field):
        raise ValueError("hom spaces need matching parameters and field")
    f = source.field
    pairs = [(target.action[gi], source.action[gi]) for gi in range(len(source.action))]
    vecs = intertwiner_space(pairs, target.dim, source.dim, f)
    homs = []
    for vec in vecs:
        m = ExactMatrix.zeros(f, target.dim, source.dim)
        for coord, val in vec.items():
            r, c = divmod(coord, source.dim) if source.dim else (0, 0)
            m.rows[r][c] = val
        homs.append(m)
    return homs


def find_module_isomorphism(
    source: SModule, target: SModule, attempts: int = 64, rng_seed: int = 0
) -> Optional[ExactMatrix]:
    """Search the hom space for an invertible element; None if not found.

    Tries each basis hom, then seeded random small-integer combinations, so a
    returned witness is reproducible.  Absence of a witness after ``attempts``
    tries is not a proof that none exists.
    """
    if source.dim != target.dim:
        return None
    homs = module_homs(source, target)
    if source.dim == 0:
        return ExactMatrix.zeros(source.field, 0, 0)
    f = source.field
    for h in homs:
        if h.rank() == source.dim:
            return h
    rng = random.Random(rng_seed)
    for _ in range(attempts):
        combo = ExactMatrix.zeros(f, target.dim, source.dim)
        for h in homs:
            combo = combo + h.scale(f.from_int(rng.randint(-3, 3)))
        if combo.rank() == source.dim:
            return combo
    return None
