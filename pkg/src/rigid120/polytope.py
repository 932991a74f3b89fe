"""Wall normals of the right-angled hyperbolic 120-cell and their combinatorics."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product

from .minkowski import ContactType, MVec5, are_proportional, classify_from_forms, classify_pair, mink_form
from .numfield import ALPHA, NFElem, TAU, TAU_INV, nf_sign

FAMILIES = ("F1", "F2", "F3")


@dataclass(frozen=True)
class NormalSet:
    vectors: tuple[MVec5, ...]
    families: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.vectors)

    def __getitem__(self, i: int) -> MVec5:
        return self.vectors[i]

    def indices(self, family: str) -> list[int]:
        return [i for i, f in enumerate(self.families) if f == family]


@dataclass
class AdjacencyGraph:
    """Simple undirected graph stored as neighbour bitmasks.

    ``contacts`` is optional and maps each pair ``(i, j)`` with ``i < j`` to
    its :class:`ContactType` when the graph was built from normals.
    """

    n: int
    rows: list[int]
    contacts: dict[tuple[int, int], ContactType] = field(default_factory=dict)

    @classmethod
    def from_edges(cls, n: int, edges) -> AdjacencyGraph:
        rows = [0] * n
        for i, j in edges:
            if i == j:
                raise ValueError("loops are not allowed")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls(n, rows)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def neighbors(self, i: int) -> list[int]:
        return _bits(self.rows[i])

    def degree(self, i: int) -> int:
        return self.rows[i].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in _bits(self.rows[i]) if i < j]

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def contact_counts(self) -> dict[str, int]:
        counts = {c.value: 0 for c in ContactType}
        for c in self.contacts.values():
            counts[c.value] += 1
        return counts


@dataclass(frozen=True)
class WallSelection:
    removed: tuple[int, ...]
    kept: tuple[int, ...]


@dataclass
class CertificateReport:
    checks: dict[str, bool]
    removed_independent: bool
    markers_per_kept: dict[int, int]
    cross_edges: int
    kept_edges: int
    kept_degrees: set[int]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _sort_key(v: MVec5) -> tuple:
    return tuple(c for x in v for c in x.coords)


def even_permutations(n: int = 4) -> list[tuple[int, ...]]:
    """Even permutations of range(n) in itertools order."""
    out = []
    for p in permutations(range(n)):
        inversions = sum(1 for a, b in combinations(range(n), 2) if p[a] > p[b])
        if inversions % 2 == 0:
            out.append(p)
    return out


def generate_normals() -> NormalSet:
    """The 120 space-like wall normals, first coordinate sqrt(2 tau) = alpha.

    F1: (alpha, +-2 in one slot, 0, 0, 0)             8 vectors
    F2: (alpha, +-1, +-1, +-1, +-1)                  16 vectors
    F3: even permutations of (tau, 1, 1/tau, 0) in the last four slots,
        independent signs on the nonzero entries     96 vectors

    Each family is sorted by its 20 rational coordinates.
    """
    zero = NFElem(0)
    f1 = []
    for slot in range(4):
        for s in (2, -2):
            tail = [zero] * 4
            tail[slot] = NFElem(s)
            f1.append((ALPHA, *tail))
    f2 = [(ALPHA, *(NFElem(s) for s in signs)) for signs in product((1, -1), repeat=4)]
    base = (TAU, NFElem(1), TAU_INV, zero)
    f3 = []
    for perm in even_permutations(4):
        for signs in product((1, -1), repeat=3):
            vals = [base[0] * signs[0], base[1] * signs[1], base[2] * signs[2], zero]
            tail = [zero] * 4
            for src, dst in enumerate(perm):
                tail[dst] = vals[src]
            f3.append((ALPHA, *tail))
    vectors: list[MVec5] = []
    families: list[str] = []
    for name, fam in zip(FAMILIES, (f1, f2, f3)):
        for v in sorted(fam, key=_sort_key):
            vectors.append(v)
            families.append(name)
    return NormalSet(tuple(vectors), tuple(families))


def adjacency_graph(ns: NormalSet) -> AdjacencyGraph:
    """Orthogonality graph of the normals with the contact type of every pair."""
    n = len(ns)
    rows = [0] * n
    contacts = {}
    selfs = [mink_form(v, v) for v in ns.vectors]
    for k, s in enumerate(selfs):
        if nf_sign(s) <= 0:
            raise ValueError(f"normal {k} is not space-like")
    for i, j in combinations(range(n), 2):
        if are_proportional(ns[i], ns[j]):
            raise ValueError(f"normals {i} and {j} are proportional")
        kind = classify_from_forms(mink_form(ns[i], ns[j]), selfs[i], selfs[j])
        contacts[(i, j)] = kind
        if kind is ContactType.ORTHOGONAL:
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return AdjacencyGraph(n, rows, contacts)


def select_removed(ns: NormalSet) -> WallSelection:
    """Remove the 24 walls of families F1 and F2 (the 24-cell set)."""
    removed = tuple(i for i, f in enumerate(ns.families) if f in ("F1", "F2"))
    return make_selection(len(ns), removed)


def make_selection(n: int, removed) -> WallSelection:
    rem = tuple(sorted(set(removed)))
    if any(i < 0 or i >= n for i in rem):
        raise ValueError(f"removed wall index out of range 0..{n - 1}")
    gone = set(rem)
    return WallSelection(rem, tuple(i for i in range(n) if i not in gone))


def pairwise_ultraparallel(ns: NormalSet, indices) -> bool:
    return all(
        classify_pair(ns[i], ns[j]) is ContactType.ULTRAPARALLEL for i, j in combinations(sorted(indices), 2)
    )


def disjointness_certificate(
    g: AdjacencyGraph,
    sel: WallSelection,
    *,
    expected_markers: int = 3,
    expected_cross: int = 288,
    expected_kept_degree: int = 9,
    expected_kept_edges: int = 432,
) -> CertificateReport:
    """Marker count behind the maximality of the removed set.

    Every kept wall must touch exactly ``expected_markers`` removed walls, so
    no kept wall can join the removed set.
    """
    removed_mask = 0
    for i in sel.removed:
        removed_mask |= 1 << i
    kept_mask = 0
    for i in sel.kept:
        kept_mask |= 1 << i
    independent = all(not (g.rows[i] & removed_mask) for i in sel.removed)
    markers = {i: (g.rows[i] & removed_mask).bit_count() for i in sel.kept}
    cross = sum(markers.values())
    kept_deg = {i: (g.rows[i] & kept_mask).bit_count() for i in sel.kept}
    kept_edges = sum(kept_deg.values()) // 2
    checks = {
        "removed_independent": independent,
        "markers_exact": all(m == expected_markers for m in markers.values()),
        "cross_edges": cross == expected_cross,
        "kept_regular": set(kept_deg.values()) == {expected_kept_degree},
        "kept_edges": kept_edges == expected_kept_edges,
    }
    return CertificateReport(checks, independent, markers, cross, kept_edges, set(kept_deg.values()))


def kept_face_pairs(g: AdjacencyGraph, sel: WallSelection) -> list[tuple[int, int]]:
    """Edges among kept walls, sorted lexicographically as (i, j) with i < j."""
    kept = set(sel.kept)
    return [(i, j) for i, j in g.edges() if i in kept and j in kept]


def all_face_pairs(g: AdjacencyGraph) -> list[tuple[int, int]]:
    return g.edges()


def independence_number(g: AdjacencyGraph) -> int:
    """Exact maximum independent set size.

    Branch and bound over candidate bitsets; the bound partitions the
    candidates greedily into cliques (a colouring of the complement), each of
    which contributes at most one vertex.
    """
    return len(maximum_independent_set(g))


def maximum_independent_set(g: AdjacencyGraph) -> list[int]:
    n = g.n
    full = (1 << n) - 1
    # non-neighbours, excluding self
    free = [full & ~g.rows[v] & ~(1 << v) for v in range(n)]
    adj = g.rows
    best: list[int] = []

    def clique_cover(cand: int) -> list[tuple[int, int]]:
        # Greedy cover of cand by cliques of g. Returns (vertex, bound) pairs
        # in increasing bound order, Tomita-style.
        order = []
        k = 0
        rest = cand
        while rest:
            k += 1
            q = rest
            while q:
                low = q & -q
                v = low.bit_length() - 1
                rest &= ~low
                q &= adj[v]
                q &= ~low
                order.append((v, k))
        return order

    def expand(current: list[int], cand: int) -> None:
        nonlocal best
        order = clique_cover(cand)
        for v, bound in reversed(order):
            if len(current) + bound <= len(best):
                return
            current.append(v)
            new = cand & free[v]
            if new:
                expand(current, new)
            elif len(current) > len(best):
                best = list(current)
            current.pop()
            cand &= ~(1 << v)

    # degree-descending initial order helps the greedy bound
    if n:
        expand([], full)
    return sorted(best)
