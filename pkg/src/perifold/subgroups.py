"""Decision procedures built on the reduction engine: subgroup presentations,
membership, and finitely generated intersections via fiber products."""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import Complex2
from .criteria import Verdict, check_sc_weight, find_certificate, magnus_weighting
from .engine import ReductionTrace, extract_presentation, reduce_map
from .maps import (
    CombMap,
    bouquet_map,
    fiber_product,
    restrict_to_component,
    whisker_tip,
)
from .weights import Weighting
from .words import Presentation, Word, free_reduce


class MissingCertificateError(ValueError):
    pass


@dataclass
class SubgroupResult:
    presentation: Presentation
    trace: ReductionTrace
    certificate: Verdict | None
    heuristic: bool
    final_map: CombMap


def _certified(x: Complex2, w: Weighting, grade: str, force: bool,
               operation: str) -> tuple[Verdict | None, bool]:
    cert = find_certificate(x, w, grade)
    if cert is None and not force:
        raise MissingCertificateError(
            f"{operation}: no {grade}-grade certificate holds for this weighted"
            " complex (pass force=True for a heuristic run)"
        )
    return cert, cert is None


def _clean_words(words) -> list[Word]:
    out = []
    for u in words:
        r = free_reduce(u)
        if r.letters:
            out.append(r)
    return out


def subgroup_presentation(x: Complex2, w: Weighting, gens: list[Word],
                          force: bool = False) -> SubgroupResult:
    """Reduce the bouquet of the generators and contract a spanning tree."""
    cert, heuristic = _certified(x, w, "strict", force, "subgroup_presentation")
    m = bouquet_map(x, _clean_words(gens))
    res = reduce_map(m, w, "strict")
    return SubgroupResult(extract_presentation(res.map), res.trace, cert,
                          heuristic, res.map)


def member(x: Complex2, w: Weighting, gens: list[Word], u: Word,
           force: bool = False) -> bool:
    """Generalized word problem: reduce the wedge of the generators with an
    open whisker arc carrying u; u lies in the subgroup iff the whisker's
    endpoints are identified in the final complex."""
    cert, _ = _certified(x, w, "weak", force, "member")
    u = free_reduce(u)
    if not u.letters:
        return True
    m = bouquet_map(x, _clean_words(gens), whisker=u)
    tip = whisker_tip(m)
    res = reduce_map(m, w, "strict")
    return res.vertex_tracking[m.basepoint] == res.vertex_tracking[tip]


def _augment_with_cells(m: CombMap) -> CombMap:
    """Attach to every vertex one copy of each codomain 2-cell whose boundary
    passes through the vertex's image, glued at that vertex only."""
    x = m.codomain
    corners: dict[int, list[tuple[int, int]]] = {}
    for r, bdry in enumerate(x.cells):
        starts: dict[int, int] = {}
        for j, d in enumerate(bdry):
            starts.setdefault(x.tail(d), j)
        for v_img, j in starts.items():
            corners.setdefault(v_img, []).append((r, j))
    num_vertices = m.domain.num_vertices
    edges = list(m.domain.edges)
    cells = list(m.domain.cells)
    vertex_image = list(m.vertex_image)
    edge_image = list(m.edge_image)
    cell_image = list(m.cell_image)
    for v in range(m.domain.num_vertices):
        for r, j in corners.get(m.vertex_image[v], []):
            bdry = x.cells[r]
            mlen = len(bdry)
            refs = []
            cur = v
            for t in range(mlen):
                pos = (j + t) % mlen
                nxt = v if t == mlen - 1 else num_vertices
                if nxt != v:
                    vertex_image.append(x.tail(bdry[(pos + 1) % mlen]))
                    num_vertices += 1
                edges.append((cur, nxt))
                edge_image.append(bdry[pos])
                refs.append(len(edges))
                cur = nxt
            cells.append(tuple(refs))
            cell_image.append((r, j, False))
    dom = Complex2(num_vertices, edges, cells)
    return CombMap(dom, x, vertex_image, edge_image, cell_image, m.basepoint)


def intersect(x: Complex2, w: Weighting, gens_h: list[Word], gens_k: list[Word],
              force: bool = False) -> SubgroupResult:
    """Intersection of two finitely generated subgroups.

    Reduce both bouquets, attach a copy of every incident 2-cell at each
    vertex, reduce again, and read the based component of the fiber product.
    """
    cert = None
    for variant in ("C4T4", "C6T3"):
        v = check_sc_weight(x, w, variant, strict=True)
        if v.holds:
            cert = v
            break
    if cert is None and not force:
        raise MissingCertificateError(
            "intersect: needs a strict small-cancellation weight certificate"
            " (pass force=True for a heuristic run)"
        )
    sides = []
    for gens in (gens_h, gens_k):
        a2 = reduce_map(bouquet_map(x, _clean_words(gens)), w, "strict")
        a3 = _augment_with_cells(a2.map)
        a4 = reduce_map(a3, w, "strict")
        sides.append(a4)
    fp = fiber_product(sides[0].map, sides[1].map)
    based = restrict_to_component(fp.to_codomain, fp.based_vertex)
    trace = sides[0].trace
    trace.steps.extend(sides[1].trace.steps)
    return SubgroupResult(extract_presentation(based), trace, cert,
                          cert is None, based)


def magnus_intersect(x: Complex2, subgraph_edges: set[int], gens_h: list[Word],
                     force: bool = False) -> SubgroupResult:
    """Intersection with the subgroup of a zero-perimeter subgraph.

    The fiber product of the reduced subgroup complex with the subgraph
    inclusion is the preimage of the subgraph; its based component presents
    the intersection.
    """
    weighting, verdict = magnus_weighting(x, subgraph_edges)
    if weighting is None:
        raise ValueError(
            "magnus_intersect: weighting invalid (free-factor case): "
            + "; ".join(verdict.witnesses or verdict.notes)
        )
    cert, heuristic = _certified(x, weighting, "weak", force, "magnus_intersect")
    a = reduce_map(bouquet_map(x, _clean_words(gens_h)), weighting, "strict")
    kept = sorted(subgraph_edges)
    sub = Complex2(1, [(0, 0) for _ in kept], [])
    inclusion = CombMap(sub, x, [0], [e + 1 for e in kept], [], 0)
    fp = fiber_product(a.map, inclusion)
    based = restrict_to_component(fp.to_codomain, fp.based_vertex)
    return SubgroupResult(extract_presentation(based), a.trace, cert,
                          heuristic, based)
