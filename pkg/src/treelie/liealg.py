"""The two nilpotent algebras of first-order differential operators
attached to a weighted tree, as explicit monomial spans.

The upward algebra is generated by d/dx_1 together with x_i^w d/dx_j for
each edge (i, j) of weight w; the downward algebra by the tip derivatives
together with x_j^w d/dx_i. Bases are enumerated from the closed-form
lattice-simplex descriptions, and closure under the bracket is verified
separately rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Dict, List, NamedTuple, Sequence, Tuple

from .polynomials import series_coeff
from .trees import TreeDiagram, classify_nodes, weights

__all__ = [
    "DiffOpMonomial",
    "LieElement",
    "StructureReport",
    "bracket",
    "enumerate_basis",
    "dim_and_nilpotence",
    "roots",
    "root_of_monomial",
    "verify_structure",
    "ell",
    "beta",
    "lattice_points",
]


class DiffOpMonomial(NamedTuple):
    """coeff * x^exps * d/dx_dvar with an exact rational coefficient."""

    coeff: Fraction
    exps: Tuple[int, ...]
    dvar: int

    def __str__(self):
        body = "*".join(
            f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
            for i, e in enumerate(self.exps)
            if e
        )
        c = "" if self.coeff == 1 and body else f"{self.coeff}*"
        if self.coeff == 1 and not body:
            c = ""
        return f"{c}{body + '*' if body else ''}d{self.dvar}"


def _bracket_monomials(a_exps, a_d, b_exps, b_d):
    """[x^a d_i, x^b d_j] as a list of ((exps, dvar), integer coefficient)."""
    out = []
    bi = b_exps[a_d - 1]
    if bi:
        e = list(a_exps)
        for k, v in enumerate(b_exps):
            e[k] += v
        e[a_d - 1] -= 1
        out.append(((tuple(e), b_d), bi))
    aj = a_exps[b_d - 1]
    if aj:
        e = list(a_exps)
        for k, v in enumerate(b_exps):
            e[k] += v
        e[b_d - 1] -= 1
        out.append(((tuple(e), a_d), -aj))
    return out


class LieElement:
    """Exact rational combination of operator monomials x^a d/dx_j."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Dict[Tuple[Tuple[int, ...], int], Fraction] = None):
        self.n = n
        clean = {}
        for key, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[key] = c
        self.terms = clean

    @classmethod
    def monomial(cls, n: int, coeff, exps: Sequence[int], dvar: int) -> "LieElement":
        return cls(n, {(tuple(exps), dvar): Fraction(coeff)})

    @classmethod
    def from_monomials(cls, n: int, monos: Sequence[DiffOpMonomial]) -> "LieElement":
        acc = {}
        for m in monos:
            key = (m.exps, m.dvar)
            acc[key] = acc.get(key, Fraction(0)) + m.coeff
        return cls(n, acc)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if self.n != other.n:
            raise ValueError("mismatched variable counts")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return LieElement(self.n, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "LieElement":
        c = Fraction(c)
        return LieElement(self.n, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, LieElement) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (exps, d), c in sorted(self.terms.items()):
            parts.append(str(DiffOpMonomial(c, exps, d)))
        return " + ".join(parts)

    __repr__ = __str__


def bracket(a: LieElement, b: LieElement) -> LieElement:
    """Commutator, extended bilinearly from the monomial rule."""
    if a.n != b.n:
        raise ValueError("mismatched variable counts")
    out: Dict[Tuple[Tuple[int, ...], int], Fraction] = {}
    for (ae, ad), ac in a.terms.items():
        for (be, bd), bc in b.terms.items():
            for key, mult in _bracket_monomials(ae, ad, be, bd):
                out[key] = out.get(key, Fraction(0)) + ac * bc * mult
    return LieElement(a.n, out)


def lattice_points(coefs: Sequence[int], bound: int) -> List[Tuple[int, ...]]:
    """Nonnegative integer tuples j with sum(c_s * j_s) <= bound.

    Canonical order: total degree ascending, then descending exponent order.
    """
    points: List[Tuple[int, ...]] = []

    def rec(pos, prefix, remaining):
        if pos == len(coefs):
            points.append(tuple(prefix))
            return
        c = coefs[pos]
        for v in range(remaining // c + 1):
            prefix.append(v)
            rec(pos + 1, prefix, remaining - c * v)
            prefix.pop()

    rec(0, [], bound)
    points.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return points


def _up_node_elements(tree: TreeDiagram, i: int) -> List[Tuple[int, ...]]:
    """Exponent tuples over the proper clan prefix of node i."""
    path = tree.clan(i)
    ws = [tree.weight(q) for q in path[1:]]
    coefs = [prod(ws[:s]) for s in range(len(ws))]
    return lattice_points(coefs, prod(ws))


def _down_node_elements(tree: TreeDiagram, i: int) -> List[Tuple[int, ...]]:
    """Exponent tuples over the descendants of node i (ascending order)."""
    data = weights(tree, i)
    desc = tree.descendants(i)
    coefs = [data.kappa_map[s] for s in desc]
    return lattice_points(coefs, data.kappa)


def enumerate_basis(tree: TreeDiagram, direction: str) -> List[DiffOpMonomial]:
    """Monomial basis in deterministic order: by node, then by degree.

    Upward, node i carries all x^j d/dx_i with j over the clan prefix of i
    inside the clan-weighted simplex. Downward, node i carries all
    x^j d/dx_i with j over the descendants of i inside the subtree-weighted
    simplex, which leaves exactly the plain derivatives at the tips.
    """
    _check_direction(direction)
    out: List[DiffOpMonomial] = []
    one = Fraction(1)
    for i in range(1, tree.n + 1):
        if direction == "up":
            support = tree.clan(i)[:-1]
            elements = _up_node_elements(tree, i)
        else:
            support = tree.descendants(i)
            elements = _down_node_elements(tree, i)
        for el in elements:
            exps = [0] * tree.n
            for node, e in zip(support, el):
                exps[node - 1] = e
            out.append(DiffOpMonomial(one, tuple(exps), i))
    return out


def root_of_monomial(mono: DiffOpMonomial) -> Tuple[int, ...]:
    """Integer root vector: the exponents with -1 in the derivative slot."""
    if mono.exps[mono.dvar - 1] != 0:
        raise ValueError("monomial contains its own derivative variable")
    root = list(mono.exps)
    root[mono.dvar - 1] = -1
    return tuple(root)


def roots(tree: TreeDiagram, direction: str):
    """One root per basis monomial, in basis order; pairwise distinct."""
    basis = enumerate_basis(tree, direction)
    pairs = [(root_of_monomial(m), m) for m in basis]
    seen = set()
    for r, _ in pairs:
        if r in seen:
            raise AssertionError("duplicate root in basis enumeration")
        seen.add(r)
    return pairs


def ell(ws: Sequence[int]) -> int:
    """Number of lattice points of the clan-weighted simplex for a weight
    list, via the series coefficient of the matching geometric product."""
    ws = list(ws)
    if not ws:
        return 1
    factors = [1, 1] + [prod(ws[:s]) for s in range(1, len(ws))]
    return series_coeff(factors, prod(ws))


def beta(tree: TreeDiagram, i: int) -> int:
    """Number of downward basis monomials anchored at node i."""
    data = weights(tree, i)
    desc = tree.descendants(i)
    return series_coeff([1] + [data.kappa_map[s] for s in desc], data.kappa)


def dim_and_nilpotence(tree: TreeDiagram, direction: str) -> Tuple[int, int]:
    """Closed-form dimension and lower-central-series length.

    The dimension comes from exact series coefficients. The nilpotence is
    the number of nonzero terms of the lower central series, computed from
    the per-node height recursion: upward h(1) = 1 and
    h(i) = 1 + weight(i) * h(parent(i)); downward tips have height 1 and
    h(i) = 1 + max over children s of weight(s) * h(s).
    """
    _check_direction(direction)
    cls = classify_nodes(tree)
    if direction == "up":
        dim = 1 + sum(
            ell([tree.weight(q) for q in cls.clans[i][1:]])
            for i in range(2, tree.n + 1)
        )
        heights = {1: 1}
        for i in range(2, tree.n + 1):
            heights[i] = 1 + tree.weight(i) * heights[tree.parent(i)]
        nilp = max(heights[t] for t in cls.tips)
    else:
        dim = sum(beta(tree, i) for i in range(1, tree.n + 1))
        heights = {}
        for i in range(tree.n, 0, -1):
            kids = cls.children[i]
            if not kids:
                heights[i] = 1
            else:
                heights[i] = 1 + max(tree.weight(s) * heights[s] for s in kids)
        nilp = heights[1]
    return dim, nilp


# --------------------------------------------------------- structure checks


@dataclass(frozen=True)
class StructureReport:
    closure: bool
    central_series_dims: Tuple[int, ...]
    center_basis: Tuple[LieElement, ...]


def verify_structure(tree: TreeDiagram, direction: str) -> StructureReport:
    """Closure, iterated-bracket central series, and exact ad-kernel center.

    All linear algebra is exact Gaussian elimination over the rationals;
    a failed check is reported, never raised.
    """
    basis = enumerate_basis(tree, direction)
    keys = [(m.exps, m.dvar) for m in basis]
    index = {k: i for i, k in enumerate(keys)}
    nb = len(keys)

    closure = True
    table: Dict[Tuple[int, int], List[Tuple[int, Fraction]]] = {}
    for p in range(nb):
        for q in range(nb):
            if p == q:
                continue
            vec = []
            ok = True
            for key, mult in _bracket_monomials(*keys[p], *keys[q]):
                if key not in index:
                    ok = False
                    closure = False
                else:
                    vec.append((index[key], Fraction(mult)))
            if ok and vec:
                table[(p, q)] = vec

    def bracket_rows(rows):
        out = []
        for g in range(nb):
            for row in rows:
                acc = [Fraction(0)] * nb
                hit = False
                for j, cj in enumerate(row):
                    if not cj:
                        continue
                    for idx, mult in table.get((g, j), ()):
                        acc[idx] += cj * mult
                        hit = True
                if hit and any(acc):
                    out.append(acc)
        return _rref(out)

    dims = []
    current = [[Fraction(1 if i == j else 0) for j in range(nb)] for i in range(nb)]
    while current:
        dims.append(len(current))
        current = bracket_rows(current)

    # kernel of all ad maps: stack, per generator g, the rows of the matrix
    # sending coefficient vectors to bracket images
    stacked = []
    for g in range(nb):
        rows: Dict[int, List[Fraction]] = {}
        for j in range(nb):
            for idx, mult in table.get((g, j), ()):
                rows.setdefault(idx, [Fraction(0)] * nb)[j] += mult
        stacked.extend(rows.values())
    kernel = _nullspace(_rref(stacked), nb)
    center = tuple(
        LieElement(tree.n, {keys[j]: c for j, c in enumerate(vec) if c})
        for vec in _rref(kernel)
    )
    return StructureReport(
        closure=closure,
        central_series_dims=tuple(dims),
        center_basis=center,
    )


def _check_direction(direction: str) -> None:
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")


def _rref(rows):
    """Reduced row echelon form over Fraction; returns the pivot rows."""
    out: List[Tuple[List[Fraction], int]] = []
    for row in rows:
        row = list(row)
        for prow, pcol in out:
            f = row[pcol]
            if f:
                row = [a - f * b for a, b in zip(row, prow)]
        pc = next((c for c, a in enumerate(row) if a), None)
        if pc is None:
            continue
        inv = row[pc]
        row = [a / inv for a in row]
        for k, (prow, pcol) in enumerate(out):
            f = prow[pc]
            if f:
                out[k] = ([a - f * b for a, b in zip(prow, row)], pcol)
        out.append((row, pc))
    out.sort(key=lambda t: t[1])
    return [r for r, _ in out]


def _nullspace(reduced_rows, ncols):
    """Kernel basis of a matrix already in reduced row echelon form."""
    pivots = {}
    for r in reduced_rows:
        pc = next(c for c, a in enumerate(r) if a)
        pivots[pc] = r
    basis = []
    for fc in range(ncols):
        if fc in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for pc, r in pivots.items():
            v[pc] = -r[fc]
        basis.append(v)
    return basis
