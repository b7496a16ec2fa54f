"""Nested ear decompositions: validation, construction, x-ear optimisation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import Graph, GraphError
from .sp import SPTree

Ear = tuple[int, ...]
NEG = float("-inf")


@dataclass(frozen=True)
class NED:
    """Ears E_1..E_n as vertex sequences plus their nesting data.

    parents[j] is the index of the ear E_j is nested in (None for the first
    ear) and intervals[j] the nest interval as a subpath of that ear.
    """

    ears: tuple[Ear, ...]
    parents: tuple[int | None, ...]
    intervals: tuple[Ear | None, ...]

    @classmethod
    def build(cls, ears: Iterable[Sequence[int]]) -> NED:
        ears = tuple(tuple(e) for e in ears)
        nesting = compute_nesting(ears)
        if nesting is None:
            raise GraphError("ears are not nested")
        return cls(ears, *nesting)

    @property
    def terminals(self) -> tuple[int, int]:
        first = self.ears[0]
        return first[0], first[-1]

    def __len__(self) -> int:
        return len(self.ears)

    def interior(self, j: int) -> Ear:
        return self.ears[j][1:-1]

    def children(self, i: int) -> list[int]:
        return [j for j, p in enumerate(self.parents) if p == i]


def compute_nesting(ears: Sequence[Ear]):
    """Parents and nest intervals, or None when some ear is not nested."""
    pos = [{v: p for p, v in enumerate(e)} for e in ears]
    parents: list[int | None] = [None]
    intervals: list[Ear | None] = [None]
    for j in range(1, len(ears)):
        u, v = ears[j][0], ears[j][-1]
        for i in range(j):
            if u in pos[i] and v in pos[i]:
                a, b = sorted((pos[i][u], pos[i][v]))
                parents.append(i)
                intervals.append(ears[i][a:b + 1])
                break
        else:
            return None
    return tuple(parents), tuple(intervals)


def interval_span(d: NED, j: int) -> tuple[int, int]:
    """Positions of E_j's endpoints on its parent, low first."""
    par = d.ears[d.parents[j]]
    u, v = d.ears[j][0], d.ears[j][-1]
    a, b = par.index(u), par.index(v)
    return (a, b) if a < b else (b, a)


def validate_ned(g: Graph, d: NED, terminals: tuple[int, int] | None = None) -> bool:
    ears = d.ears
    if not ears:
        return False
    if terminals is not None and {ears[0][0], ears[0][-1]} != set(terminals):
        return False
    used_edges: set[int] = set()
    seen: set[int] = set()
    for j, ear in enumerate(ears):
        if len(ear) < 2 or len(set(ear)) != len(ear):
            return False
        for a, b in zip(ear, ear[1:]):
            if not g.has_edge(a, b):
                return False
            e = g.edge_id(a, b)
            if e in used_edges:
                return False
            used_edges.add(e)
        if j > 0:
            if ear[0] not in seen or ear[-1] not in seen:
                return False
            if seen & set(ear[1:-1]):
                return False
        seen |= set(ear)
    if used_edges != set(g.edge_ids) or seen != set(g.vertices):
        return False
    nesting = compute_nesting(ears)
    if nesting is None or nesting != (d.parents, d.intervals):
        return False
    return _laminar(d)


def _laminar(d: NED) -> bool:
    by_parent: dict[int, list[tuple[int, int]]] = {}
    for j in range(1, len(d.ears)):
        by_parent.setdefault(d.parents[j], []).append(interval_span(d, j))
    for spans in by_parent.values():
        for x in range(len(spans)):
            a1, b1 = spans[x]
            for y in range(x + 1, len(spans)):
                a2, b2 = spans[y]
                if max(a1, a2) < min(b1, b2):  # share an edge
                    if not ((a1 <= a2 and b2 <= b1) or (a2 <= a1 and b1 <= b2)):
                        return False
    return True


def is_ned(ears: Sequence[Ear]) -> bool:
    """Structural check only: ear condition, nesting and laminarity."""
    seen: set[int] = set(ears[0]) if ears else set()
    for ear in ears[1:]:
        if len(ear) < 2 or len(set(ear)) != len(ear):
            return False
        if ear[0] not in seen or ear[-1] not in seen or seen & set(ear[1:-1]):
            return False
        seen |= set(ear)
    nesting = compute_nesting(ears)
    return nesting is not None and _laminar(NED(tuple(ears), *nesting))


# -- construction from an SP tree -------------------------------------------

def ned_from_sptree(tree: SPTree) -> NED:
    if tree.kind == "vertex":
        raise GraphError("a single vertex has no ears")
    return NED.build(_ears(tree))


def _ears(node: SPTree) -> list[Ear]:
    if node.kind == "edge":
        return [(node.s, node.t)]
    a, b = (_ears(c) for c in node.children)
    if node.kind == "series":
        return [a[0] + b[0][1:]] + a[1:] + b[1:]
    return a + b


# -- x-ears -------------------------------------------------------------------

def is_x_ear(ear: Ear, nx_vertices: frozenset[int] | set[int]) -> bool:
    return any(v in nx_vertices for v in ear[1:-1])


def x_ear_mask(d: NED, nx_vertices) -> tuple[bool, ...]:
    return tuple(is_x_ear(e, nx_vertices) for e in d.ears)


def x_ear_count(d: NED, nx_vertices) -> int:
    return sum(x_ear_mask(d, nx_vertices))


def _values(node: SPTree, nxv, memo) -> tuple[float, float]:
    """(best count with first ear an x-ear, best count with it not one)."""
    key = id(node)
    if key in memo:
        return memo[key]
    if node.kind == "edge":
        out = (NEG, 0.0)
    else:
        (x1, n1), (x2, n2) = (_values(c, nxv, memo) for c in node.children)
        if node.kind == "series":
            if node.r in nxv:
                out = (1 + max(x1 - 1, n1) + max(x2 - 1, n2), NEG)
            else:
                out = (1 + max(x1 - 1 + x2 - 1, x1 - 1 + n2, n1 + x2 - 1), n1 + n2)
        else:
            b1, b2 = max(x1, n1), max(x2, n2)
            out = (max(x1 + b2, x2 + b1), max(n1 + b2, n2 + b1))
    memo[key] = out
    return out


def _build(node: SPTree, want_x: bool, nxv, memo) -> list[Ear]:
    if node.kind == "edge":
        return [(node.s, node.t)]
    c1, c2 = node.children
    (x1, n1), (x2, n2) = _values(c1, nxv, memo), _values(c2, nxv, memo)
    if node.kind == "series":
        if node.r in nxv:
            f1, f2 = x1 - 1 >= n1, x2 - 1 >= n2
        elif want_x:
            options = [(x1 - 1 + x2 - 1, True, True), (x1 - 1 + n2, True, False),
                       (n1 + x2 - 1, False, True)]
            best = max(o[0] for o in options)
            _, f1, f2 = next(o for o in options if o[0] == best)
        else:
            f1 = f2 = False
        a, b = _build(c1, f1, nxv, memo), _build(c2, f2, nxv, memo)
        return [a[0] + b[0][1:]] + a[1:] + b[1:]
    b1, b2 = max(x1, n1), max(x2, n2)
    if want_x:
        first_is_1 = x1 + b2 >= x2 + b1
    else:
        first_is_1 = n1 + b2 >= n2 + b1
    if first_is_1:
        return _build(c1, want_x, nxv, memo) + _build(c2, x2 >= n2, nxv, memo)
    return _build(c2, want_x, nxv, memo) + _build(c1, x1 >= n1, nxv, memo)


def max_x_ear_ned(tree: SPTree, nx_vertices) -> NED:
    """A NED of the tree's graph with the largest possible number of x-ears."""
    memo: dict = {}
    bx, bn = _values(tree, nx_vertices, memo)
    return NED.build(_build(tree, bx >= bn, nx_vertices, memo))


def _rewrite(ears: list[Ear], i: int, j: int) -> list[Ear]:
    """Swap E_j into E_i and make the old subpath I(E_j) a new ear after E_i."""
    ei, ej = ears[i], ears[j]
    pu, pv = ei.index(ej[0]), ei.index(ej[-1])
    if pu > pv:
        pu, pv = pv, pu
        ej = ej[::-1]
    new_i = ei[:pu] + ej + ei[pv + 1:]
    new_j = ei[pu:pv + 1]
    return ears[:i] + [new_i, new_j] + ears[i + 1:j] + ears[j + 1:]


def improve_ned(d: NED, nx_vertices) -> NED:
    """Apply the two exchange rewrites until neither applies.

    Rewrite A fires when an x-ear F is nested in a non-x-ear E. Rewrite B
    fires when a non-x-ear F is nested in an x-ear E and the interior of I(F)
    holds some but not all interior N(X)-vertices of E. Each rewrite keeps or
    raises the x-ear count and moves x-ears earlier, so the loop terminates.
    """
    ears = list(d.ears)
    rejected: set[tuple[Ear, ...]] = set()
    while True:
        nesting = compute_nesting(ears)
        parents, intervals = nesting
        mask = [is_x_ear(e, nx_vertices) for e in ears]
        changed = False
        for j in range(1, len(ears)):
            i = parents[j]
            fire = False
            if mask[j] and not mask[i]:
                fire = True
            elif mask[i] and not mask[j]:
                inner = set(intervals[j][1:-1])
                hits = {v for v in ears[i][1:-1] if v in nx_vertices}
                if hits & inner and hits - inner:
                    fire = True
            if not fire:
                continue
            cand = _rewrite(ears, i, j)
            if tuple(cand) in rejected or not is_ned(cand):
                rejected.add(tuple(cand))
                continue
            ears = cand
            changed = True
            break
        if not changed:
            return NED.build(ears)


def good_ned_of(tree: SPTree, nx_vertices) -> NED:
    return improve_ned(max_x_ear_ned(tree, nx_vertices), nx_vertices)


def exchange_violations(d: NED, nx_vertices) -> list[str]:
    """Empty when both exchange properties hold."""
    out = []
    mask = x_ear_mask(d, nx_vertices)
    for j in range(1, len(d.ears)):
        i = d.parents[j]
        if mask[j] and not mask[i]:
            out.append(f"x-ear {j} nested in non-x-ear {i}")
        if mask[i] and not mask[j]:
            inner = set(d.intervals[j][1:-1])
            hits = {v for v in d.ears[i][1:-1] if v in nx_vertices}
            if hits & inner and hits - inner:
                out.append(f"interval of ear {j} splits the X-neighbours of ear {i}")
    return out


# -- orders -------------------------------------------------------------------

def _closure(n: int, pairs: set[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    succ: dict[int, set[int]] = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    out = set()
    for a in range(n):
        stack = list(succ.get(a, ()))
        seen: set[int] = set()
        while stack:
            b = stack.pop()
            if b in seen:
                continue
            seen.add(b)
            stack.extend(succ.get(b, ()))
        out |= {(a, b) for b in seen}
    return frozenset(out)


@dataclass(frozen=True)
class NestOrders:
    """Strict orders over x-ear indices: (a, b) means E_a < E_b."""

    x_ears: tuple[int, ...]
    nest: frozenset[tuple[int, int]]
    refined: frozenset[tuple[int, int]]

    def nest_descendants(self, a: int) -> list[int]:
        return sorted(b for (c, b) in self.nest if c == a)

    def descendants(self, a: int) -> list[int]:
        return sorted(b for (c, b) in self.refined if c == a)

    def immediate_descendants(self, a: int) -> list[int]:
        desc = set(self.descendants(a))
        return sorted(b for b in desc
                      if not any((c, b) in self.refined for c in desc if c != b))


def nest_orders(d: NED, nx_vertices) -> NestOrders:
    mask = x_ear_mask(d, nx_vertices)
    xs = tuple(j for j, m in enumerate(mask) if m)
    direct = {(d.parents[j], j) for j in xs if j > 0 and mask[d.parents[j]]}
    refined = set(direct)
    spans = {j: interval_span(d, j) for j in xs if j > 0}
    for a in xs:
        for b in xs:
            if a == b or a == 0 or b == 0 or d.parents[a] != d.parents[b]:
                continue
            (la, ha), (lb, hb) = spans[a], spans[b]
            if (la, ha) == (lb, hb):
                if a < b:
                    refined.add((a, b))
            elif la <= lb and hb <= ha:
                refined.add((a, b))
    n = len(d.ears)
    return NestOrders(xs, _closure(n, direct), _closure(n, refined))
