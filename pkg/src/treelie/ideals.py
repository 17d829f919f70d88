"""Classification, enumeration, and counting of the abelian ideals of the
solvable extensions of the two tree algebras.

Ideals are recorded as root sets: each basis monomial x^a d/dx_j is the
unique vector for the integer root (a with -1 in slot j), and every
abelian ideal is a sum of such one-dimensional root spaces. The upward
enumeration builds ideals from generator data (an independent anchor set
plus antichains in the anchor posets); the downward enumeration, and the
oracle both directions, walk downsets of the bracket-reachability
preorder and keep the ones whose members pairwise commute.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from math import prod
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import SizeGuardError
from .liealg import _bracket_monomials, enumerate_basis, root_of_monomial
from .trees import TreeDiagram, classify_nodes, weights

__all__ = [
    "RootPoset",
    "AdmissiblePair",
    "AbelianIdeal",
    "root_poset",
    "principal_ideal",
    "maximal_ideals",
    "enumerate_ideals",
    "brute_force_ideals",
    "is_abelian_ideal",
    "LIST_GUARD",
    "ORACLE_GUARD",
]

LIST_GUARD = 24
ORACLE_GUARD = 20

Root = Tuple[int, ...]


@dataclass(frozen=True)
class RootPoset:
    """Exponent tuples attached to one anchor node, partially ordered.

    Upward, the tuples run over the proper clan prefix of the node and the
    order compares the clan-weighted cumulative sums. Downward, they run
    over the descendants of the node and the order compares, per
    descendant m, the weighted sums along the path from the node to m.
    The stored values vectors realize the order: a <= b exactly when the
    value vector of a is componentwise <= that of b.
    """

    node: int
    direction: str
    support: Tuple[int, ...]
    elements: Tuple[Tuple[int, ...], ...]
    values: Tuple[Tuple[int, ...], ...]
    _index: Dict[Tuple[int, ...], int] = field(hash=False, compare=False, default_factory=dict)

    def __post_init__(self):
        self._index.update({e: i for i, e in enumerate(self.elements)})

    def leq(self, a: Tuple[int, ...], b: Tuple[int, ...]) -> bool:
        va = self.values[self._index[a]]
        vb = self.values[self._index[b]]
        return all(x <= y for x, y in zip(va, vb))

    def strictly_less(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def downset(self, tops: Iterable[Tuple[int, ...]]) -> Tuple[Tuple[int, ...], ...]:
        tops = list(tops)
        return tuple(e for e in self.elements if any(self.leq(e, t) for t in tops))

    def maximal_elements(self, subset: Iterable[Tuple[int, ...]]) -> Tuple[Tuple[int, ...], ...]:
        sub = list(subset)
        return tuple(
            e for e in sub if not any(self.strictly_less(e, o) for o in sub)
        )

    def is_antichain(self, subset: Iterable[Tuple[int, ...]]) -> bool:
        sub = list(subset)
        return all(
            not self.leq(a, b)
            for i, a in enumerate(sub)
            for j, b in enumerate(sub)
            if i != j
        )

    def antichains(self) -> List[Tuple[Tuple[int, ...], ...]]:
        """All antichains, the empty one included, in canonical order."""
        els = self.elements
        out: List[Tuple[Tuple[int, ...], ...]] = []

        def rec(start, chosen):
            out.append(tuple(chosen))
            for k in range(start, len(els)):
                e = els[k]
                if all(
                    not self.leq(e, c) and not self.leq(c, e) for c in chosen
                ):
                    chosen.append(e)
                    rec(k + 1, chosen)
                    chosen.pop()

        rec(0, [])
        return out


@dataclass(frozen=True)
class AdmissiblePair:
    """Generator data of an upward abelian ideal: the independent anchor
    set and, for every node in an anchor subtree, the antichain of
    exponent tuples (in the anchor poset) generating at that node."""

    anchors: Tuple[int, ...]
    antichains: Tuple[Tuple[int, Tuple[Tuple[int, ...], ...]], ...]


@dataclass(frozen=True)
class AbelianIdeal:
    roots: FrozenSet[Root]
    maximal: Optional[bool] = None
    generator_pair: Optional[AdmissiblePair] = None

    @property
    def dim(self) -> int:
        return len(self.roots)

    def canonical(self) -> Tuple[Root, ...]:
        return tuple(sorted(self.roots))


# ------------------------------------------------------------------- posets


def root_poset(tree: TreeDiagram, i: int, direction: str) -> RootPoset:
    """Exponent poset of one node; the zero tuple is the unique minimum."""
    if direction == "up":
        path = tree.clan(i)
        support = path[:-1]
        ws = [tree.weight(q) for q in path[1:]]
        coefs = [prod(ws[:s]) for s in range(len(ws))]
        elements = _lattice(coefs, prod(ws))
        values = []
        for el in elements:
            vals = []
            for s in range(len(ws)):
                vals.append(
                    el[s] + sum(el[e] * prod(ws[s: e]) for e in range(s + 1, len(ws)))
                )
            values.append(tuple(vals))
    elif direction == "down":
        desc = tree.descendants(i)
        support = desc
        data = weights(tree, i)
        coefs = [data.kappa_map[s] for s in desc]
        elements = _lattice(coefs, data.kappa)
        pos = {s: k for k, s in enumerate(desc)}
        paths = {}
        for m in desc:
            path = []
            q = m
            while q != i:
                path.append(q)
                q = tree.parent(q)
            paths[m] = path  # nodes from m up to, not including, i
        values = []
        for el in elements:
            vals = []
            for m in desc:
                total = 0
                for r in paths[m]:
                    total += el[pos[r]] * tree.path_weight(r, m)
                vals.append(total)
            values.append(tuple(vals))
    else:
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    return RootPoset(
        node=i,
        direction=direction,
        support=tuple(support),
        elements=tuple(elements),
        values=tuple(values),
    )


def _lattice(coefs, bound):
    points = []

    def rec(pos, prefix, remaining):
        if pos == len(coefs):
            points.append(tuple(prefix))
            return
        for v in range(remaining // coefs[pos] + 1):
            prefix.append(v)
            rec(pos + 1, prefix, remaining - coefs[pos] * v)
            prefix.pop()

    rec(0, [], bound)
    points.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return points


def _element_root(support: Sequence[int], element: Sequence[int], anchor: int, n: int) -> Root:
    vec = [0] * n
    for node, e in zip(support, element):
        vec[node - 1] = e
    vec[anchor - 1] = -1
    return tuple(vec)


# ---------------------------------------------------------- algebra tables


class _AlgebraData:
    """Root list with bracket reachability and commutation tables."""

    def __init__(self, tree: TreeDiagram, direction: str):
        basis = enumerate_basis(tree, direction)
        self.tree = tree
        self.direction = direction
        self.roots: List[Root] = [root_of_monomial(m) for m in basis]
        self.keys = [(m.exps, m.dvar) for m in basis]
        self.index = {r: k for k, r in enumerate(self.roots)}
        nb = len(basis)
        self.commute = [[True] * nb for _ in range(nb)]
        succ = [set() for _ in range(nb)]
        for p in range(nb):
            for q in range(nb):
                if p == q:
                    continue
                terms = _bracket_monomials(*self.keys[p], *self.keys[q])
                if terms:
                    self.commute[p][q] = self.commute[q][p] = False
                    for (exps, dvar), _ in terms:
                        vec = list(exps)
                        vec[dvar - 1] = -1
                        succ[q].add(self.index[tuple(vec)])
        self.closures: List[FrozenSet[int]] = []
        for a in range(nb):
            seen = {a}
            stack = [a]
            while stack:
                c = stack.pop()
                for s in succ[c]:
                    if s not in seen:
                        seen.add(s)
                        stack.append(s)
            self.closures.append(frozenset(seen))
        self.succ = succ


def _abelian_downsets(data: _AlgebraData) -> List[FrozenSet[int]]:
    """All index sets closed under bracket reachability whose members
    pairwise commute; each downset is visited exactly once."""
    nb = len(data.roots)
    UND, OUT, IN = -1, 0, 1
    status = [UND] * nb
    members: List[int] = []
    found: List[FrozenSet[int]] = []

    def rec(i):
        if i == nb:
            found.append(frozenset(members))
            return
        if status[i] != UND:
            rec(i + 1)
            return
        status[i] = OUT
        rec(i + 1)
        status[i] = UND
        need = [j for j in data.closures[i] if status[j] != IN]
        if all(status[j] == UND for j in need):
            ok = all(
                data.commute[a][b] for ai, a in enumerate(need) for b in need[ai + 1:]
            ) and all(data.commute[a][b] for a in need for b in members)
            if ok:
                for j in need:
                    status[j] = IN
                members.extend(need)
                rec(i + 1)
                for j in need:
                    status[j] = UND
                del members[len(members) - len(need):]

    rec(0)
    return found


# ----------------------------------------------------------- constructions


def principal_ideal(tree: TreeDiagram, i: int, j: Tuple[int, ...], direction: str) -> AbelianIdeal:
    """Ideal generated by the single monomial with exponents j at node i.

    Upward the anchor must make every descendant weight-1 (else no abelian
    ideal contains the generator); downward the anchor's root path must be
    weight-1 throughout.
    """
    cls = classify_nodes(tree)
    poset = root_poset(tree, i, direction)
    j = tuple(j)
    if j not in poset._index:
        raise ValueError(f"exponent tuple {j} is not in the poset of node {i}")
    if direction == "up":
        if i not in cls.upsilon:
            raise ValueError(f"node {i} has a descendant below a weighted edge")
        anchors = (i,) + cls.descendants[i]
    else:
        if i not in cls.phi:
            raise ValueError(f"node {i} sits below a weighted edge")
        anchors = cls.clans[i]
    down = poset.downset([j])
    roots = frozenset(
        _element_root(poset.support, el, m, tree.n) for el in down for m in anchors
    )
    ideal = AbelianIdeal(roots=roots)
    ok, cert = is_abelian_ideal(tree, direction, roots)
    if not ok:
        raise AssertionError(f"principal construction failed verification: {cert}")
    return ideal


def _independent_subsets(tree: TreeDiagram, ground: Sequence[int]) -> List[Tuple[int, ...]]:
    """Subsets of ground in which no member descends from another."""
    ground = sorted(ground)
    desc = {i: set(tree.descendants(i)) for i in ground}
    out: List[Tuple[int, ...]] = []

    def rec(start, chosen):
        out.append(tuple(chosen))
        for k in range(start, len(ground)):
            i = ground[k]
            if all(i not in desc[c] for c in chosen):
                chosen.append(i)
                rec(k + 1, chosen)
                chosen.pop()

    rec(0, [])
    return out


def maximal_ideals(tree: TreeDiagram, direction: str) -> List[AbelianIdeal]:
    """The full-poset ideals of the maximal independent anchor sets,
    filtered to be pairwise incomparable under inclusion.

    Every returned ideal is inclusion-maximal among all abelian ideals.
    Upward, the family is exhaustive: each maximal abelian ideal arises
    from a maximal independent anchor set. Downward, branching trees also
    admit maximal ideals that mix generator depths along one clan and fall
    outside this family; the enumeration's per-ideal maximality flags
    account for those.
    """
    cls = classify_nodes(tree)
    ground = cls.upsilon if direction == "up" else cls.phi
    subsets = [s for s in _independent_subsets(tree, ground) if s]
    desc = {i: set(tree.descendants(i)) for i in ground}

    def is_maximal(s):
        chosen = set(s)
        for u in ground:
            if u in chosen:
                continue
            if all(u not in desc[c] and c not in desc[u] for c in s):
                return False
        return True

    candidates = []
    for s in subsets:
        if not is_maximal(s):
            continue
        roots = set()
        for i in s:
            poset = root_poset(tree, i, direction)
            anchors = (
                (i,) + cls.descendants[i] if direction == "up" else cls.clans[i]
            )
            for el in poset.elements:
                for m in anchors:
                    roots.add(_element_root(poset.support, el, m, tree.n))
        candidates.append((s, frozenset(roots)))
    keep = []
    for s, roots in candidates:
        if not any(roots < other for _, other in candidates):
            keep.append(AbelianIdeal(roots=roots, maximal=True))
    keep.sort(key=lambda ideal: ideal.canonical())
    return keep


def _up_admissible(tree: TreeDiagram):
    """Yield (roots, pair) for every admissible generator datum.

    Anchors form a nonempty independent subset of the weight-free ground
    set; each node of an anchor subtree carries an antichain in the anchor
    poset (nonempty at the anchor itself); and an antichain entry may not
    lie below an entry at a tree ancestor, which keeps generator data and
    ideals in bijection.
    """
    cls = classify_nodes(tree)
    posets = {i: root_poset(tree, i, "up") for i in cls.upsilon}

    def anchor_assignments(i):
        poset = posets[i]
        nodes = (i,) + cls.descendants[i]
        chains = poset.antichains()
        assigns: List[Dict[int, Tuple]] = []

        def rec(pos, current):
            if pos == len(nodes):
                assigns.append(dict(current))
                return
            r = nodes[pos]
            options = [k for k in chains if k] if r == i else chains
            for k in options:
                ok = True
                q = r
                while q != i and ok:
                    q = tree.parent(q)
                    for jj in current.get(q, ()):
                        if any(poset.leq(ll, jj) for ll in k):
                            ok = False
                            break
                if ok:
                    current[r] = k
                    rec(pos + 1, current)
                    del current[r]

        rec(0, {})
        return assigns

    def materialize(i, assignment):
        poset = posets[i]
        nodes = (i,) + cls.descendants[i]
        pis: Dict[int, set] = {}
        roots = set()
        for r in nodes:
            base = set() if r == i else set(pis[tree.parent(r)])
            base.update(poset.downset(assignment[r]))
            pis[r] = base
            for el in base:
                roots.add(_element_root(poset.support, el, r, tree.n))
        return roots

    anchor_sets = [s for s in _independent_subsets(tree, cls.upsilon) if s]
    for anchors in anchor_sets:
        per_anchor = [anchor_assignments(i) for i in anchors]
        for combo in iproduct(*per_anchor):
            roots = set()
            chain_items = []
            for i, assignment in zip(anchors, combo):
                roots |= materialize(i, assignment)
                chain_items.extend(sorted(assignment.items()))
            pair = AdmissiblePair(
                anchors=anchors,
                antichains=tuple(
                    (node, tuple(k)) for node, k in sorted(chain_items)
                ),
            )
            yield frozenset(roots), pair


def enumerate_ideals(tree: TreeDiagram, direction: str, mode: str = "list"):
    """All abelian ideals, the zero ideal included.

    Upward the generator-data construction is used; downward the
    bracket-reachability downset enumerator (the oracle algorithm) is the
    primary path. ``mode='count'`` returns the total only; list mode is
    guarded at 24 roots.
    """
    if mode not in ("list", "count"):
        raise ValueError(f"mode must be 'list' or 'count', got {mode!r}")
    data = _AlgebraData(tree, direction)
    if mode == "list" and len(data.roots) > LIST_GUARD:
        raise SizeGuardError(
            f"{len(data.roots)} roots exceeds the list-mode guard of {LIST_GUARD};"
            " use count mode or the closed-form counts"
        )
    if direction == "up":
        seen: Dict[FrozenSet[Root], AbelianIdeal] = {}
        zero = AbelianIdeal(roots=frozenset())
        seen[zero.roots] = zero
        for roots, pair in _up_admissible(tree):
            if roots not in seen:
                seen[roots] = AbelianIdeal(roots=roots, generator_pair=pair)
        ideals = list(seen.values())
    else:
        ideals = [
            AbelianIdeal(roots=frozenset(data.roots[k] for k in subset))
            for subset in _abelian_downsets(data)
        ]
    if mode == "count":
        return len(ideals)
    ideals.sort(key=lambda ideal: (ideal.dim, ideal.canonical()))
    root_sets = [i.roots for i in ideals]
    flagged = [
        AbelianIdeal(
            roots=i.roots,
            maximal=not any(i.roots < other for other in root_sets),
            generator_pair=i.generator_pair,
        )
        for i in ideals
    ]
    return flagged


def count_admissible_pairs(tree: TreeDiagram) -> int:
    """Number of admissible generator data, zero ideal not included."""
    return sum(1 for _ in _up_admissible(tree))


def brute_force_ideals(tree: TreeDiagram, direction: str) -> List[Tuple[Root, ...]]:
    """Oracle: canonical sorted root lists of every abelian ideal, found by
    downset search over bracket reachability plus pairwise commutation."""
    data = _AlgebraData(tree, direction)
    if len(data.roots) > ORACLE_GUARD:
        raise SizeGuardError(
            f"{len(data.roots)} roots exceeds the oracle guard of {ORACLE_GUARD}"
        )
    out = [
        tuple(sorted(data.roots[k] for k in subset))
        for subset in _abelian_downsets(data)
    ]
    out.sort(key=lambda rs: (len(rs), rs))
    return out


def is_abelian_ideal(tree: TreeDiagram, direction: str, roots: Iterable[Root]):
    """Check bracket stability and internal commutativity of a root set.

    Every root vector here is an eigenvector of the diagonal operators
    x_k d/dx_k, so stability under the Cartan part holds structurally and
    only brackets against the nilpotent basis need computing. Returns
    (True, None) or (False, certificate).
    """
    data = _AlgebraData(tree, direction)
    chosen = []
    for r in roots:
        r = tuple(r)
        if r not in data.index:
            raise ValueError(f"unknown root {r}")
        chosen.append(data.index[r])
    chosen_set = set(chosen)
    for a in chosen:
        for b in range(len(data.roots)):
            if data.commute[b][a]:
                continue
            # roots add under the bracket
            image = tuple(x + y for x, y in zip(data.roots[b], data.roots[a]))
            if b in chosen_set:
                return False, {
                    "kind": "not_abelian",
                    "pair": (data.roots[b], data.roots[a]),
                }
            if data.index.get(image) not in chosen_set:
                return False, {
                    "kind": "not_closed",
                    "outer": data.roots[b],
                    "inner": data.roots[a],
                    "image": image,
                }
    return True, None
