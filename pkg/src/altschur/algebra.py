"""The graded algebra on graph symbols and its signed structure constants.

The algebra at parameters (n, d) has a basis of even symbols, one per
multigraph in M(n, d), and odd symbols, one per simple graph in N(n, d).
Every symbol acts as an integral operator on ball configurations: the even
symbol of a graph g has kernel value 1 at each configuration pair whose pair
graph is g, and the odd symbol has kernel value equal to the ball-labelling
sign at such pairs (necessarily transverse since g is simple).

Products are computed by convolution over a middle configuration.  Fix a
configuration S realizing the lower degree sequence of the left factor; then

    (product kernel)(S, U) = sum over T of kernel1(S, T) * kernel2(T, U),

and the T with kernel1(S, T) != 0 are exactly the ways of scattering each box
of S according to the corresponding column of the left graph, and similarly
for U given T.  The coefficient of a target graph is the kernel value at any
pair realizing it, corrected by the ball sign for odd targets; the code reads
every realized pair and checks they all agree, which guards the orientation
conventions at run time.

All structure constants are integers; they are computed once over the
integers, memoized, and reduced into a field at the point of use.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Tuple

from .fields import FieldSpec, Scalar
from .graphs import (
    BipartiteGraph,
    Word,
    gamma0_lambda,
    gamma_lambda,
    labelling_sign,
    pair_graph,
    pair_sign,
    d_of,
    u_of,
)
from .enumeration import check_basis_budget, enum_Lambda, enum_M, enum_N, words_with_content

__all__ = [
    "BasisSymbol",
    "GradedElement",
    "CheckReport",
    "xi",
    "zeta",
    "convolve",
    "structure_constants",
    "multiply",
    "identity",
    "anti_involution",
    "iota_sign",
    "factorization_check",
    "delta_check",
    "rect_compose",
    "build_table",
    "save_table",
    "load_table",
]


@dataclass(frozen=True)
class BasisSymbol:
    """An even ("xi") or odd ("zeta") basis symbol, indexed by its graph."""

    parity: str  # "even" | "odd"
    graph: BipartiteGraph

    def __post_init__(self) -> None:
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.graph.n_up != self.graph.n_down:
            raise ValueError("basis symbols require square graphs")
        if self.parity == "odd" and not self.graph.is_simple():
            raise ValueError("odd symbols exist only for simple graphs")

    @property
    def n(self) -> int:
        return self.graph.n_up

    @property
    def d(self) -> int:
        return self.graph.degree

    @property
    def is_odd(self) -> bool:
        return self.parity == "odd"

    def sort_key(self) -> Tuple:
        return (0 if self.parity == "even" else 1, self.graph.sort_key())

    def to_json_dict(self) -> dict:
        return {"parity": self.parity, "adj": [list(row) for row in self.graph.adj]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "BasisSymbol":
        return cls(data["parity"], BipartiteGraph.from_adj(data["adj"]))

    def __str__(self) -> str:
        head = "xi" if self.parity == "even" else "zeta"
        return f"{head}{self.graph}"


def xi(g: BipartiteGraph) -> BasisSymbol:
    return BasisSymbol("even", g)


def zeta(g: BipartiteGraph) -> BasisSymbol:
    return BasisSymbol("odd", g)


@dataclass
class GradedElement:
    """A finitely supported field-linear combination of basis symbols."""

    n: int
    d: int
    field: FieldSpec
    terms: Dict[BasisSymbol, Scalar] = dc_field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {}
        for sym, coeff in self.terms.items():
            if sym.n != self.n or sym.d != self.d:
                raise ValueError(f"symbol {sym} does not live at (n,d)=({self.n},{self.d})")
            if coeff:
                cleaned[sym] = coeff
        self.terms = cleaned

    @classmethod
    def zero(cls, n: int, d: int, field: FieldSpec) -> "GradedElement":
        return cls(n, d, field, {})

    @classmethod
    def from_symbol(cls, sym: BasisSymbol, field: FieldSpec, coeff: Scalar | None = None) -> "GradedElement":
        return cls(sym.n, sym.d, field, {sym: field.one if coeff is None else coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def _require_compatible(self, other: "GradedElement") -> None:
        if (self.n, self.d) != (other.n, other.d):
            raise ValueError(f"(n,d) mismatch: ({self.n},{self.d}) vs ({other.n},{other.d})")
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field.label} vs {other.field.label}")

    def __add__(self, other: "GradedElement") -> "GradedElement":
        self._require_compatible(other)
        f = self.field
        out = dict(self.terms)
        for sym, c in other.terms.items():
            out[sym] = f.add(out.get(sym, f.zero), c)
        return GradedElement(self.n, self.d, f, out)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + other.scale(self.field.neg(self.field.one))

    def scale(self, c: Scalar) -> "GradedElement":
        f = self.field
        return GradedElement(self.n, self.d, f, {sym: f.mul(c, v) for sym, v in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GradedElement)
            and (self.n, self.d, self.field) == (other.n, other.d, other.field)
            and self.terms == other.terms
        )

    def even_part(self) -> "GradedElement":
        return GradedElement(self.n, self.d, self.field, {s: c for s, c in self.terms.items() if not s.is_odd})

    def odd_part(self) -> "GradedElement":
        return GradedElement(self.n, self.d, self.field, {s: c for s, c in self.terms.items() if s.is_odd})

    def sorted_terms(self) -> List[Tuple[BasisSymbol, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def coefficient(self, sym: BasisSymbol) -> Scalar:
        return self.terms.get(sym, self.field.zero)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "field": self.field.label,
            "terms": [
                dict(sym.to_json_dict(), coeff=self.field.format_scalar(c))
                for sym, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "GradedElement":
        f = FieldSpec.from_label(data["field"])
        terms: Dict[BasisSymbol, Scalar] = {}
        for rec in data["terms"]:
            sym = BasisSymbol.from_json_dict(rec)
            coeff = f.parse_scalar(rec["coeff"])
            if sym in terms:
                raise ValueError(f"duplicate term for {sym}")
            terms[sym] = coeff
        return cls(data["n"], data["d"], f, terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"{self.field.format_scalar(c)}*{sym}" for sym, c in self.sorted_terms()
        )


# -- the convolution kernel --------------------------------------------------

_CONVOLVE_CACHE: Dict[Tuple[BipartiteGraph, BipartiteGraph, bool, bool], Dict[BipartiteGraph, int]] = {}


def convolve(
    g1: BipartiteGraph, g2: BipartiteGraph, odd1: bool, odd2: bool
) -> Dict[BipartiteGraph, int]:
    """Integer structure constants of the product (g1 symbol) * (g2 symbol).

    Works for rectangular graphs as well: g1 on [m]' + [l], g2 on [n]' + [m];
    the targets live on [n]' + [l].  Returns {} when the middle degree
    sequences disagree (the product is zero).
    """
    if g1.n_up != g2.n_down:
        raise ValueError(
            f"inner vertex sets disagree: {g1.n_up} upper vs {g2.n_down} lower"
        )
    if g1.degree != g2.degree:
        raise ValueError(f"degree mismatch: {g1.degree} vs {g2.degree}")
    if odd1 and not g1.is_simple():
        raise ValueError("odd factor requires a simple graph")
    if odd2 and not g2.is_simple():
        raise ValueError("odd factor requires a simple graph")
    key = (g1, g2, odd1, odd2)
    cached = _CONVOLVE_CACHE.get(key)
    if cached is not None:
        return dict(cached)
    if g1.upper_degrees != g2.lower_degrees:
        _CONVOLVE_CACHE[key] = {}
        return {}

    d = g1.degree
    mu = g1.lower_degrees
    s_word: Word = tuple(j for j in range(1, g1.n_down + 1) for _ in range(mu[j - 1]))
    s_boxes: List[List[int]] = []
    pos = 0
    for part in mu:
        s_boxes.append(list(range(pos, pos + part)))
        pos += part

    t_choices = [
        words_with_content(tuple(g1.adj[i][j] for i in range(g1.n_up))) for j in range(g1.n_down)
    ]
    u_choices = [
        words_with_content(tuple(g2.adj[i][j] for i in range(g2.n_up))) for j in range(g2.n_down)
    ]

    entries: Dict[Word, int] = {}
    t_buf = [0] * d
    u_buf = [0] * d
    for t_combo in itertools.product(*t_choices):
        for balls, assignment in zip(s_boxes, t_combo):
            for ball, box in zip(balls, assignment):
                t_buf[ball] = box
        t_word = tuple(t_buf)
        sign1 = pair_sign(s_word, t_word) if odd1 else 1
        t_boxes: List[List[int]] = [[] for _ in range(g1.n_up)]
        for ball, box in enumerate(t_word):
            t_boxes[box - 1].append(ball)
        for u_combo in itertools.product(*u_choices):
            for balls, assignment in zip(t_boxes, u_combo):
                for ball, box in zip(balls, assignment):
                    u_buf[ball] = box
            u_word = tuple(u_buf)
            sign = sign1 * pair_sign(t_word, u_word) if odd2 else sign1
            entries[u_word] = entries.get(u_word, 0) + sign

    odd_target = odd1 != odd2
    coeffs: Dict[BipartiteGraph, int] = {}
    for u_word, entry in entries.items():
        target = pair_graph(s_word, u_word, g1.n_down, g2.n_up)
        if odd_target and not target.is_simple():
            if entry != 0:
                raise RuntimeError(
                    "convention breach: odd product has a non-zero kernel value "
                    f"at a non-transverse pair (target {target})"
                )
            continue
        coeff = entry * pair_sign(s_word, u_word) if odd_target else entry
        if target in coeffs:
            if coeffs[target] != coeff:
                raise RuntimeError(
                    "convention breach: kernel values disagree across pairs "
                    f"realizing {target}: {coeffs[target]} vs {coeff}"
                )
        else:
            coeffs[target] = coeff
    result = {g: c for g, c in coeffs.items() if c}
    _CONVOLVE_CACHE[key] = result
    return dict(result)


def structure_constants(sym1: BasisSymbol, sym2: BasisSymbol) -> Dict[BasisSymbol, int]:
    """Integer coefficients of basis symbols in the product sym1 * sym2."""
    if sym1.n != sym2.n or sym1.d != sym2.d:
        raise ValueError(
            f"symbols live at different parameters: ({sym1.n},{sym1.d}) vs ({sym2.n},{sym2.d})"
        )
    parity = "odd" if sym1.is_odd != sym2.is_odd else "even"
    raw = convolve(sym1.graph, sym2.graph, sym1.is_odd, sym2.is_odd)
    return {BasisSymbol(parity, g): c for g, c in raw.items()}


def product_int(
    a: Dict[BasisSymbol, int], b: Dict[BasisSymbol, int]
) -> Dict[BasisSymbol, int]:
    """Product of two integer combinations of symbols, over the integers."""
    out: Dict[BasisSymbol, int] = {}
    for s1, c1 in a.items():
        for s2, c2 in b.items():
            for s, c in structure_constants(s1, s2).items():
                acc = out.get(s, 0) + c1 * c2 * c
                if acc:
                    out[s] = acc
                else:
                    out.pop(s, None)
    return out


def multiply(x: GradedElement, y: GradedElement) -> GradedElement:
    """Bilinear extension of the basis products."""
    x._require_compatible(y)
    f = x.field
    out: Dict[BasisSymbol, Scalar] = {}
    for s1, c1 in x.terms.items():
        for s2, c2 in y.terms.items():
            scale = f.mul(c1, c2)
            if not scale:
                continue
            for s, c in structure_constants(s1, s2).items():
                out[s] = f.add(out.get(s, f.zero), f.mul(scale, f.from_int(c)))
    return GradedElement(x.n, x.d, f, out)


def identity(n: int, d: int, field: FieldSpec) -> GradedElement:
    """The unit: sum of the even diagonal symbols over all compositions."""
    terms = {xi(gamma0_lambda(lam)): field.one for lam in enum_Lambda(n, d)}
    return GradedElement(n, d, field, terms)


def iota_sign(g: BipartiteGraph) -> int:
    """Sign relating the reflected standard labelling of g to the standard
    labelling of the reflected graph."""
    return labelling_sign([(j, i) for (i, j) in g.standard_labelling()])


def anti_involution(x: GradedElement) -> GradedElement:
    """The algebra anti-involution: even symbols reflect, odd symbols reflect
    and pick up :func:`iota_sign`."""
    f = x.field
    out: Dict[BasisSymbol, Scalar] = {}
    for sym, c in x.terms.items():
        if sym.is_odd:
            sign = iota_sign(sym.graph)
            out[zeta(sym.graph.star())] = f.mul(f.from_int(sign), c)
        else:
            out[xi(sym.graph.star())] = c
    return GradedElement(x.n, x.d, f, out)


# -- structural diagnostics ----------------------------------------------------


@dataclass
class CheckReport:
    ok: bool
    failures: List[str]

    def __bool__(self) -> bool:
        return self.ok


def factorization_check(g: BipartiteGraph) -> CheckReport:
    """Verify the three product factorizations of the odd symbol of ``g``.

    With D = d_of(g), U = u_of(g) and the diagonal matching graph on the
    first d lower vertices, the odd symbol of g must equal

      1. xi(U) * zeta(matching) * xi(D)
      2. zeta(U) * xi(D)
      3. xi(U) * zeta(D)

    Requires a square simple graph with n >= d.
    """
    if not g.is_simple():
        raise ValueError("factorization_check applies to simple graphs")
    n, d = g.n_up, g.degree
    dg, ug = d_of(g), u_of(g)
    matching = gamma_lambda((1,) * d, n)
    expected = {zeta(g): 1}
    candidates = [
        ("xi(U)*zeta(matching)*xi(D)", product_int(product_int({xi(ug): 1}, {zeta(matching): 1}), {xi(dg): 1})),
        ("zeta(U)*xi(D)", product_int({zeta(ug): 1}, {xi(dg): 1})),
        ("xi(U)*zeta(D)", product_int({xi(ug): 1}, {zeta(dg): 1})),
    ]
    failures = [
        f"{name} = {sorted((str(s), c) for s, c in got.items())}, expected zeta{g}"
        for name, got in candidates
        if got != expected
    ]
    return CheckReport(not failures, failures)


def delta_check(g: BipartiteGraph) -> CheckReport:
    """Verify that only ``g`` itself hits zeta(u_of(g)) against zeta(d_of(g)*).

    For every multigraph g' with the same parameters, the coefficient of
    zeta(u_of(g)) in xi(g') * zeta(d_of(g).star()) must be 1 when g' = g and
    0 otherwise.  Requires a square graph with n >= d.
    """
    n, d = g.n_up, g.degree
    probe = zeta(d_of(g).star())
    target = zeta(u_of(g))
    failures = []
    for other in enum_M(n, d):
        coeff = structure_constants(xi(other), probe).get(target, 0)
        want = 1 if other == g else 0
        if coeff != want:
            failures.append(f"coefficient at g'={other} is {coeff}, expected {want}")
    return CheckReport(not failures, failures)


def rect_compose(g1: BipartiteGraph, g2: BipartiteGraph) -> Dict[BipartiteGraph, int]:
    """Even rectangular composition: g1 on [m]'+[l] after g2 on [n]'+[m].

    Same convolution as the square case; targets live on [n]' + [l].
    """
    return convolve(g1, g2, False, False)


# -- full tables ---------------------------------------------------------------


def all_symbols(n: int, d: int) -> List[BasisSymbol]:
    """The canonical basis listing: even symbols first, then odd."""
    return [xi(g) for g in enum_M(n, d)] + [zeta(g) for g in enum_N(n, d)]


def build_table(
    n: int, d: int, cap: int | None = None
) -> Dict[Tuple[BasisSymbol, BasisSymbol], Dict[BasisSymbol, int]]:
    """All pairwise integer structure constants, keyed by symbol pairs."""
    check_basis_budget(n, d, cap)
    syms = all_symbols(n, d)
    return {(a, b): structure_constants(a, b) for a in syms for b in syms}


def save_table(
    table: Dict[Tuple[BasisSymbol, BasisSymbol], Dict[BasisSymbol, int]],
    n: int,
    d: int,
    path: str,
) -> None:
    entries = []
    for (a, b), terms in sorted(table.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key())):
        if not terms:
            continue
        entries.append(
            {
                "left": a.to_json_dict(),
                "right": b.to_json_dict(),
                "terms": [
                    [s.to_json_dict(), c]
                    for s, c in sorted(terms.items(), key=lambda kv: kv[0].sort_key())
                ],
            }
        )
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"n": n, "d": d, "entries": entries}, fh, separators=(",", ":"), sort_keys=True)


def load_table(path: str) -> Tuple[int, int, Dict[Tuple[BasisSymbol, BasisSymbol], Dict[BasisSymbol, int]]]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    n, d = data["n"], data["d"]
    table: Dict[Tuple[BasisSymbol, BasisSymbol], Dict[BasisSymbol, int]] = {
        (a, b): {} for a in all_symbols(n, d) for b in all_symbols(n, d)
    }
    for rec in data["entries"]:
        a = BasisSymbol.from_json_dict(rec["left"])
        b = BasisSymbol.from_json_dict(rec["right"])
        table[(a, b)] = {BasisSymbol.from_json_dict(s): c for s, c in rec["terms"]}
    return n, d, table
