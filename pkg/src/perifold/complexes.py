"""Combinatorial 2-complexes: sides, periods, links, pieces, small cancellation.

Directed edge references are nonzero ints: ``+(e+1)`` traverses edge ``e`` in
its positive orientation (src -> tgt), ``-(e+1)`` the reverse.  Cell
boundaries are cyclic sequences of directed edge references; attaching maps
are required to be immersed (no backtrack at any cyclic position).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .words import Presentation, Word

INF = float("inf")


class ComplexError(ValueError):
    pass


@dataclass
class Complex2:
    num_vertices: int
    edges: list[tuple[int, int]]  # (src, tgt) for the positive orientation
    cells: list[tuple[int, ...]]  # boundary words of directed edge refs

    def num_edges(self) -> int:
        return len(self.edges)

    def num_cells(self) -> int:
        return len(self.cells)

    def tail(self, d: int) -> int:
        e = abs(d) - 1
        return self.edges[e][0] if d > 0 else self.edges[e][1]

    def head(self, d: int) -> int:
        e = abs(d) - 1
        return self.edges[e][1] if d > 0 else self.edges[e][0]

    def boundary(self, c: int) -> tuple[int, ...]:
        return self.cells[c]

    def boundary_length(self, c: int) -> int:
        return len(self.cells[c])

    def euler_characteristic(self) -> int:
        return self.num_vertices - len(self.edges) + len(self.cells)

    def validate(self) -> None:
        for src, tgt in self.edges:
            if not (0 <= src < self.num_vertices and 0 <= tgt < self.num_vertices):
                raise ComplexError("edge endpoint out of range")
        for c, bdry in enumerate(self.cells):
            if not bdry:
                raise ComplexError(f"cell {c} has empty boundary")
            n = len(bdry)
            for i, d in enumerate(bdry):
                if d == 0 or abs(d) > len(self.edges):
                    raise ComplexError(f"cell {c} has bad edge ref")
                nxt = bdry[(i + 1) % n]
                if self.head(d) != self.tail(nxt):
                    raise ComplexError(f"cell {c} boundary does not chain at {i}")
                if d == -nxt:
                    raise ComplexError(f"cell {c} attaching map backtracks at {i}")


def standard_complex(p: Presentation) -> Complex2:
    """One vertex, one edge per generator, one 2-cell per relator."""
    edges = [(0, 0) for _ in p.generators]
    cells = [tuple(r.letters) for r in p.relators]
    x = Complex2(1, edges, cells)
    x.validate()
    return x


def sides_at(x: Complex2, e: int) -> list[tuple[int, int]]:
    """All sides (cell, position) traversing edge e in either orientation."""
    if not (0 <= e < len(x.edges)):
        raise ComplexError("unknown edge")
    out = []
    for c, bdry in enumerate(x.cells):
        for i, d in enumerate(bdry):
            if abs(d) - 1 == e:
                out.append((c, i))
    return out


def cell_period(x: Complex2, c: int) -> tuple[int, int]:
    """(period_length, exponent) of the boundary as a cyclic edge word."""
    b = x.cells[c]
    m = len(b)
    for p in range(1, m + 1):
        if m % p == 0 and b == b[p:] + b[:p]:
            return p, m // p
    raise AssertionError("unreachable")


# --- vertex links -----------------------------------------------------------


@dataclass
class LinkGraph:
    nodes: list[int]  # directed edge refs with head at the vertex
    corners: list[tuple[int, int, int, int]]  # (node_a, node_b, cell, position)
    girth: float
    essential_girth: float  # shortest non-backtracking closed walk of length >= 3


def link_graph(x: Complex2, v: int) -> LinkGraph:
    """Link of a 0-cell: one node per edge-end at v, one link-edge per corner."""
    if not (0 <= v < x.num_vertices):
        raise ComplexError("unknown vertex")
    nodes = []
    for e in range(len(x.edges)):
        for d in (e + 1, -(e + 1)):
            if x.head(d) == v:
                nodes.append(d)
    corners = []
    for c, bdry in enumerate(x.cells):
        n = len(bdry)
        for i in range(n):
            d_in = bdry[i]
            d_out = bdry[(i + 1) % n]
            if x.head(d_in) == v:
                corners.append((d_in, -d_out, c, i))
    return LinkGraph(nodes, corners, _multigraph_girth(nodes, corners),
                     _essential_girth(nodes, corners))


def _multigraph_girth(nodes, corners) -> float:
    # Shortest cycle in an undirected multigraph: remove each edge in turn and
    # BFS between its endpoints.  Parallel edges give girth 2, loops girth 1.
    adj: dict[int, list[tuple[int, int]]] = {u: [] for u in nodes}
    for k, (a, b, _c, _i) in enumerate(corners):
        if a == b:
            return 1
        adj[a].append((b, k))
        adj[b].append((a, k))
    best = INF
    for k, (a, b, _c, _i) in enumerate(corners):
        dist = {a: 0}
        frontier = [a]
        while frontier and b not in dist:
            nxt = []
            for u in frontier:
                for w, ek in adj[u]:
                    if ek != k and w not in dist:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        if b in dist:
            best = min(best, dist[b] + 1)
    return best


def _essential_girth(nodes, corners) -> float:
    # Shortest closed walk of length >= 3 without an immediate reuse of the
    # same corner instance.  Pairs of parallel corners (length-2 cycles) stand
    # for valence-2 diagram vertices, which every T(q) permits, so they are
    # ignored here; walks may repeat corners non-consecutively.
    incident: dict[int, list[tuple[int, int]]] = {u: [] for u in nodes}
    for k, (p, r, _c, _i) in enumerate(corners):
        incident[p].append((r, k))
        incident[r].append((p, k))
    best = INF
    for k0, (p0, r0, _c, _i) in enumerate(corners):
        if p0 == r0:
            return 1
        # walk starts along corner k0 from p0 to r0
        dist = {(r0, k0): 1}
        frontier = [(r0, k0)]
        while frontier:
            nxt = []
            for (w, last) in frontier:
                d = dist[(w, last)]
                if d + 1 >= best:
                    continue
                for (w2, k) in incident[w]:
                    if k == last:
                        continue
                    if w2 == p0 and k != k0 and d + 1 >= 3:
                        best = min(best, d + 1)
                        continue
                    if (w2, k) not in dist:
                        dist[(w2, k)] = d + 1
                        nxt.append((w2, k))
            frontier = nxt
    return best


# --- pieces -----------------------------------------------------------------
#
# An occurrence (cell, i, s) of a path of length L reads, for k < L, the
# directed edge  b[i+k]  when s=+1  and  -b[i-k]  when s=-1 (indices cyclic).
# A pair of occurrences is excluded when a homeomorphism between the boundary
# circles commutes with the maps to the complex and carries one occurrence to
# the other; for immersed polygon boundaries these are exactly the rotations
# matching the cyclic words (same cell: shift = 0 mod period) and the
# word-matching rotations/reflections between distinct cells.


@dataclass
class PieceTable:
    pairs: dict[tuple[tuple[int, int, int], tuple[int, int, int]], int]
    max_from: list[list[int]]  # per cell, per start: longest piece read forward
    cell_max: list[int]

    def max_piece_length(self, c: int) -> int:
        return self.cell_max[c]


def _occ_letter(bdry: tuple[int, ...], i: int, s: int, k: int) -> int:
    m = len(bdry)
    if s > 0:
        return bdry[(i + k) % m]
    return -bdry[(i - k) % m]


def _excluded(ba: tuple[int, ...], bb: tuple[int, ...], i: int, s: int, j: int, t: int) -> bool:
    if len(ba) != len(bb):
        return False
    m = len(ba)
    if s == t:
        r = (j - i) % m
        return all(bb[(q + r) % m] == ba[q] for q in range(m))
    c = (i + j) % m
    return all(bb[(c - q) % m] == -ba[q] for q in range(m))


def compute_pieces(x: Complex2) -> PieceTable:
    pairs: dict = {}
    ncells = len(x.cells)
    max_from = [[0] * len(b) for b in x.cells]
    for a in range(ncells):
        ba = x.cells[a]
        ma = len(ba)
        for b in range(ncells):
            bb = x.cells[b]
            mb = len(bb)
            cap = min(ma, mb)
            for s in (1, -1):
                for t in (1, -1):
                    for i in range(ma):
                        for j in range(mb):
                            if _excluded(ba, bb, i, s, j, t):
                                continue
                            L = 0
                            while L < cap and _occ_letter(ba, i, s, L) == _occ_letter(bb, j, t, L):
                                L += 1
                            if L >= 1:
                                pairs[((a, i, s), (b, j, t))] = L
                                if s == 1:
                                    max_from[a][i] = max(max_from[a][i], L)
    cell_max = [max(row) if row else 0 for row in max_from]
    return PieceTable(pairs, max_from, cell_max)


def min_piece_cover(x: Complex2, c: int, start: int, length: int,
                    table: PieceTable | None = None) -> float:
    """Minimal number of pieces concatenating to the boundary subpath.

    Greedy longest-prefix; optimal because piece sets are closed under
    subpaths.  Returns inf when some edge of the subpath lies in no piece.
    """
    m = len(x.cells[c])
    if not (0 <= start < m) or not (0 <= length <= m):
        raise ComplexError("invalid subpath")
    if table is None:
        table = compute_pieces(x)
    pos, remaining, count = start, length, 0
    while remaining > 0:
        step = min(table.max_from[c][pos % m], remaining)
        if step == 0:
            return INF
        count += 1
        pos = (pos + step) % m
        remaining -= step
    return count


def cycle_piece_cover(x: Complex2, c: int, table: PieceTable | None = None) -> float:
    """Minimal piece cover of the full boundary cycle (over all rotations)."""
    if table is None:
        table = compute_pieces(x)
    m = len(x.cells[c])
    return min(min_piece_cover(x, c, s, m, table) for s in range(m))


@dataclass
class SmallCancellationReport:
    p: int
    q: int
    alpha: Fraction | None
    c_holds: bool
    t_holds: bool
    c_prime_holds: bool | None
    cell_covers: list[float]
    girths: list[float]
    witnesses: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def check_small_cancellation(x: Complex2, p: int, q: int,
                             alpha: Fraction | None = None,
                             table: PieceTable | None = None) -> SmallCancellationReport:
    """C(p), T(q) (via link girth) and optional C'(alpha) verdicts."""
    if p < 2 or q < 3:
        raise ComplexError("need p >= 2 and q >= 3")
    if table is None:
        table = compute_pieces(x)
    covers = [cycle_piece_cover(x, c, table) for c in range(len(x.cells))]
    witnesses: list[str] = []
    c_holds = True
    for c, cover in enumerate(covers):
        if cover < p:
            c_holds = False
            witnesses.append(f"C({p}) fails: cell {c} boundary covered by {int(cover)} pieces")
    girths = [link_graph(x, v).essential_girth for v in range(x.num_vertices)]
    t_holds = True
    for v, g in enumerate(girths):
        if g < q:
            t_holds = False
            witnesses.append(
                f"T({q}) fails: essential link cycle of length {int(g)} at vertex {v}"
            )
    c_prime: bool | None = None
    if alpha is not None:
        c_prime = True
        for c in range(len(x.cells)):
            longest = table.cell_max[c]
            if longest and not (Fraction(longest) < alpha * len(x.cells[c])):
                c_prime = False
                witnesses.append(
                    f"C'({alpha}) fails: cell {c} has a piece of length {longest}"
                    f" with boundary length {len(x.cells[c])}"
                )
    return SmallCancellationReport(
        p, q, alpha, c_holds, t_holds, c_prime,
        covers, girths, witnesses,
        notes=[f"T({q}) via link girth"],
    )


def largest_metric_denominator(x: Complex2, table: PieceTable | None = None) -> float:
    """Largest n such that C'(1/n) holds; inf when the complex has no pieces."""
    if table is None:
        table = compute_pieces(x)
    best = INF
    for c in range(len(x.cells)):
        longest = table.cell_max[c]
        if longest:
            # need longest < m/n, i.e. n <= ceil(m/longest) - 1
            m = len(x.cells[c])
            n_max = (m + longest - 1) // longest - 1
            best = min(best, n_max)
    return best


def boundary_word(x: Complex2, c: int) -> Word:
    """Boundary of a standard-complex cell as a word (edge refs are letters)."""
    return Word(x.cells[c])
