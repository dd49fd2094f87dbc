"""Weight functions on sides and the perimeter of a map.

A side (R, r) of the codomain is *present* at a domain edge y exactly when
some domain 2-cell lying over R has y at the boundary position that maps onto
r; the characteristic map of R is injective on the interior of its polygon,
so each domain cell admits exactly one such factorization.  The perimeter of
a map is the total weight of the sides missing at its domain edges.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import Complex2, ComplexError, cell_period, sides_at
from .maps import CombMap, Packet, PathInY, build_packet


class WeightError(ValueError):
    pass


class NotNearImmersion(ValueError):
    pass


@dataclass(frozen=True)
class Weighting:
    complex: Complex2
    side_weights: tuple[tuple[int, ...], ...]  # per cell, per boundary position

    def __post_init__(self):
        x = self.complex
        if len(self.side_weights) != x.num_cells():
            raise WeightError("one weight row per 2-cell required")
        for c, row in enumerate(self.side_weights):
            if len(row) != x.boundary_length(c):
                raise WeightError(f"cell {c} needs one weight per boundary position")
            if any((not isinstance(wt, int)) or wt < 0 for wt in row):
                raise WeightError("weights must be nonnegative integers")
            if sum(row) <= 0:
                raise WeightError(f"cell {c} has weight 0")

    def weight(self, cell: int, pos: int) -> int:
        return self.side_weights[cell][pos]


def unit_weighting(x: Complex2) -> Weighting:
    return Weighting(x, tuple(tuple(1 for _ in bdry) for bdry in x.cells))


def weighting_from_rows(x: Complex2, rows) -> Weighting:
    return Weighting(x, tuple(tuple(row) for row in rows))


def weighting_by_generator(x: Complex2, edge_weight) -> Weighting:
    """Weight each side by a function of the edge it lies over."""
    rows = [tuple(edge_weight(abs(d) - 1) for d in bdry) for bdry in x.cells]
    return Weighting(x, tuple(rows))


def edge_perimeter(w: Weighting, e: int) -> int:
    return sum(w.weight(c, i) for c, i in sides_at(w.complex, e))


def edge_perimeters(w: Weighting) -> list[int]:
    per = [0] * w.complex.num_edges()
    for c, bdry in enumerate(w.complex.cells):
        for i, d in enumerate(bdry):
            per[abs(d) - 1] += w.weight(c, i)
    return per


def cell_weight(w: Weighting, c: int) -> int:
    return sum(w.side_weights[c])


def path_perimeter(w: Weighting, path) -> int:
    """Sum of edge perimeters along a path (edges counted with multiplicity).

    Accepts a PathInY in the weighted complex, a Word over a one-vertex
    complex, or a plain iterable of directed edge refs.
    """
    per = edge_perimeters(w)
    if isinstance(path, PathInY):
        refs = path.edges
    elif hasattr(path, "letters"):
        refs = path.letters
    else:
        refs = tuple(path)
    return sum(per[abs(d) - 1] for d in refs)


# --- map perimeter ----------------------------------------------------------


def present_sides(m: CombMap) -> list[set[tuple[int, int]]]:
    """Per domain edge: the set of codomain sides present at it."""
    present: list[set[tuple[int, int]]] = [set() for _ in range(m.domain.num_edges())]
    for c in range(m.domain.num_cells()):
        r = m.cell_image[c][0]
        for q, d in enumerate(m.rewritten_cycle(c)):
            present[abs(d) - 1].add((r, q))
    return present


def map_perimeter(w: Weighting, m: CombMap) -> int:
    """Double sum of the weights of missing sides over all domain edges."""
    if m.codomain != w.complex:
        raise WeightError("weighting belongs to a different complex")
    present = present_sides(m)
    total = 0
    for e in range(m.domain.num_edges()):
        x_edge = abs(m.edge_image[e]) - 1
        for side in sides_at(w.complex, x_edge):
            if side not in present[e]:
                total += w.weight(*side)
    return total


def is_near_immersion(m: CombMap) -> bool:
    """True iff distinct local sides at each domain edge have distinct images,
    i.e. each present side has a unique witness."""
    count = [0] * m.domain.num_edges()
    for c in range(m.domain.num_cells()):
        for d in m.rewritten_cycle(c):
            count[abs(d) - 1] += 1
    present = present_sides(m)
    return all(count[e] == len(present[e]) for e in range(m.domain.num_edges()))


def map_perimeter_fast(w: Weighting, m: CombMap) -> int:
    """Perimeter via edge perimeters minus cell weights; near-immersions only."""
    if m.codomain != w.complex:
        raise WeightError("weighting belongs to a different complex")
    if not is_near_immersion(m):
        raise NotNearImmersion("map is not a near-immersion; use map_perimeter")
    per = edge_perimeters(w)
    total = sum(per[abs(m.edge_image[e]) - 1] for e in range(m.domain.num_edges()))
    total -= sum(cell_weight(w, m.cell_image[c][0]) for c in range(m.domain.num_cells()))
    return total


def packet_perimeter(w: Weighting, c: int, packet: Packet | None = None) -> int:
    """Perimeter of the packet projection; equals P(boundary) - n * Wt(R)."""
    if packet is None:
        packet = build_packet(w.complex, c)
    return map_perimeter_fast(w, packet.projection)


def sform_check(w: Weighting, c: int, start: int, length: int) -> tuple[int, int, int, int]:
    """(P(packet), P(Q), P(S), n*Wt(R)) for the boundary subpath Q = (start, length).

    Asserts the identity P(packet) = P(Q) + P(S) - n * Wt(R).
    """
    x = w.complex
    m = x.boundary_length(c)
    if not (0 <= start < m) or not (0 <= length <= m):
        raise ComplexError("invalid subpath")
    per = edge_perimeters(w)
    bdry = x.cells[c]
    p_q = sum(per[abs(bdry[(start + t) % m]) - 1] for t in range(length))
    p_s = sum(per[abs(bdry[(start + length + t) % m]) - 1] for t in range(m - length))
    _p, n = cell_period(x, c)
    nwt = n * cell_weight(w, c)
    p_packet = packet_perimeter(w, c)
    if p_packet != p_q + p_s - nwt:
        raise AssertionError("packet perimeter identity violated")
    return p_packet, p_q, p_s, nwt
