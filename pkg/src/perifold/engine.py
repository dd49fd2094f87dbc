"""The perimeter-reduction engine: candidate enumeration, attachment-site
search, packet attachment with exact bookkeeping, the fold/attach loop, and
presentation extraction.

The loop alternates folding to a 1-immersion, packing repair, and packet
attachment along qualifying boundary subpaths.  In strict mode the
lexicographic pair (perimeter, edge count) drops at every fold and every
attachment, so the loop terminates; weak mode may run forever and therefore
requires a step limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .complexes import Complex2, cell_period
from .maps import (
    CombMap,
    PathInY,
    apply_fold,
    find_fold,
    remove_redundant,
    repair_packing,
)
from .weights import Weighting, cell_weight, edge_perimeters, map_perimeter
from .words import Presentation, Word, cyclic_reduce, free_reduce


class EngineError(ValueError):
    pass


class StaleSiteError(EngineError):
    pass


@dataclass(frozen=True)
class CandidateQ:
    cell: int
    start: int
    length: int
    strict: bool  # P(S) < n*Wt(R); weak candidates satisfy <= only


def enumerate_candidates(x: Complex2, w: Weighting, mode: str = "strict") -> list[CandidateQ]:
    """All boundary subpaths Q whose complement S satisfies P(S) < n*Wt(R)
    (strict) or <= (weak).  Starts are reduced modulo the period length:
    shifting a candidate by a period gives the same subpath of the boundary
    up to its rotational symmetry."""
    if mode not in ("strict", "weak"):
        raise EngineError("mode must be 'strict' or 'weak'")
    per = edge_perimeters(w)
    out: list[CandidateQ] = []
    for c, bdry in enumerate(x.cells):
        m = len(bdry)
        p, n = cell_period(x, c)
        nwt = n * cell_weight(w, c)
        pos_per = [per[abs(d) - 1] for d in bdry]
        prefix = [0]
        for t in range(2 * m):
            prefix.append(prefix[-1] + pos_per[t % m])
        for start in range(p):
            for length in range(1, m + 1):
                p_s = prefix[start + m] - prefix[start + length]
                strict = p_s < nwt
                if strict or (mode == "weak" and p_s == nwt):
                    out.append(CandidateQ(c, start, length, strict))
    return out


@dataclass
class AttachmentSite:
    candidate: CandidateQ
    path: PathInY  # the lift of Q into the domain
    complete: bool


@dataclass
class TraceStep:
    kind: str  # fold | attach-complete | attach-incomplete | repair | remove-redundant
    perimeter: int
    edges: int
    vertices: int = 0
    cells: int = 0
    detail: dict = field(default_factory=dict)

    def euler_characteristic(self) -> int:
        return self.vertices - self.edges + self.cells


@dataclass
class ReductionTrace:
    initial_perimeter: int
    initial_edges: int
    steps: list[TraceStep] = field(default_factory=list)

    def complexities(self) -> list[tuple[int, int]]:
        return [(self.initial_perimeter, self.initial_edges)] + [
            (s.perimeter, s.edges) for s in self.steps
        ]

    def to_lines(self) -> list[str]:
        return [
            f"step={k} kind={s.kind} P={s.perimeter} edges={s.edges}"
            for k, s in enumerate(self.steps, start=1)
        ]


def _present_cycles(m: CombMap) -> dict[int, set[tuple[int, ...]]]:
    table: dict[int, set[tuple[int, ...]]] = {}
    for c in range(m.domain.num_cells()):
        table.setdefault(m.cell_image[c][0], set()).add(m.rewritten_cycle(c))
    return table


def _grow_to_maximal(m: CombMap, outs, x: Complex2, cell: int, start: int,
                     verts: list[int], edges: list[int]) -> int:
    """Extend a lifted subpath in both ∂R and Y until no extension exists
    (forward first); returns the new start position."""
    bdry = x.cells[cell]
    mlen = len(bdry)
    while len(edges) < mlen:
        nxt = outs[verts[-1]].get(bdry[(start + len(edges)) % mlen])
        if nxt is None:
            break
        edges.append(nxt)
        verts.append(m.domain.head(nxt))
    while len(edges) < mlen:
        letter = bdry[(start - 1) % mlen]
        back = outs[verts[0]].get(-letter)
        if back is None:
            break
        edges.insert(0, -back)
        verts.insert(0, m.domain.head(back))
        start = (start - 1) % mlen
    return start


def find_attachment(m: CombMap, w: Weighting, mode: str = "strict",
                    candidates: list[CandidateQ] | None = None) -> AttachmentSite | None:
    """Deterministic scan for an attachment site.

    Strict mode scans longest candidates first and grows every lift to a
    maximal site, which favours complete attachments.  Weak mode scans
    shortest first and keeps only lifts that are already maximal at the
    candidate length; longer sites are reached at their own length, so the
    weak engine reproduces the nonterminating square-ladder behaviour.
    """
    x = m.codomain
    if find_fold(m) is not None:
        raise EngineError("find_attachment requires a 1-immersion")
    if candidates is None:
        candidates = enumerate_candidates(x, w, mode)
    if mode == "strict":
        candidates = [c for c in candidates if c.strict]
        ordered = sorted(candidates, key=lambda c: (-c.length, c.cell, c.start))
    else:
        ordered = sorted(candidates, key=lambda c: (c.length, c.cell, c.start))
    outs = m.out_edges()
    per_cell_periods = {c: cell_period(x, c) for c in range(x.num_cells())}
    cycles = _present_cycles(m)
    for cand in ordered:
        bdry = x.cells[cand.cell]
        mlen = len(bdry)
        first = bdry[cand.start % mlen]
        for v in range(m.domain.num_vertices):
            d0 = outs[v].get(first)
            if d0 is None:
                continue
            verts = [v, m.domain.head(d0)]
            edges = [d0]
            dead = False
            for k in range(1, cand.length):
                nxt = outs[verts[-1]].get(bdry[(cand.start + k) % mlen])
                if nxt is None:
                    dead = True
                    break
                edges.append(nxt)
                verts.append(m.domain.head(nxt))
            if dead:
                continue
            start = _grow_to_maximal(m, outs, x, cand.cell, cand.start, verts, edges)
            if mode == "weak" and len(edges) != cand.length:
                continue  # will be scanned at its maximal length
            if len(edges) == mlen:
                # complete: blocked only when the circle closes and the whole
                # packet already lies over it
                if verts[0] == verts[-1]:
                    p, n = per_cell_periods[cand.cell]
                    cyc = [0] * mlen
                    for k, d in enumerate(edges):
                        cyc[(start + k) % mlen] = d
                    have = cycles.get(cand.cell, set())
                    if all(
                        tuple(cyc[(q + k * p) % mlen] for q in range(mlen)) in have
                        for k in range(n)
                    ):
                        continue
                complete = True
            else:
                complete = False
            grown = _candidate_at(x, w, cand.cell, start, len(edges))
            if mode == "strict" and not grown.strict:
                continue
            return AttachmentSite(
                grown,
                PathInY(m.domain, tuple(verts), tuple(edges)),
                complete,
            )
    return None


def _candidate_at(x: Complex2, w: Weighting, cell: int, start: int, length: int) -> CandidateQ:
    per = edge_perimeters(w)
    bdry = x.cells[cell]
    mlen = len(bdry)
    p_s = sum(per[abs(bdry[(start + length + t) % mlen]) - 1] for t in range(mlen - length))
    _p, n = cell_period(x, cell)
    return CandidateQ(cell, start % mlen, length, p_s < n * cell_weight(w, cell))


@dataclass
class AttachResult:
    map: CombMap
    vertex_map: list[int]
    cells_added: int
    complete: bool
    identified_endpoints: bool


def attach_packet(m: CombMap, w: Weighting, site: AttachmentSite) -> AttachResult:
    """Glue the packet of the site's cell to the domain along the lifted Q.

    Complete sites first identify the endpoints of Q; incomplete sites add
    the complement as a fresh arc.  All packet cells missing over the
    resulting circle are attached.
    """
    if site.path.complex is not m.domain:
        raise StaleSiteError("attachment site refers to an outdated domain")
    x = m.codomain
    cell = site.candidate.cell
    bdry = x.cells[cell]
    mlen = len(bdry)
    p, n = cell_period(x, cell)
    start, length = site.candidate.start, site.candidate.length
    dom = m.domain
    verts = list(site.path.vertices)
    edges = list(site.path.edges)
    vmap = list(range(dom.num_vertices))
    identified = False

    if site.complete:
        if verts[0] != verts[-1]:
            lo, hi = sorted((verts[0], verts[-1]))
            vmap = [i - (1 if i > hi else 0) for i in range(dom.num_vertices)]
            vmap[hi] = vmap[lo]
            new_edges = [(vmap[s], vmap[t]) for s, t in dom.edges]
            dom = Complex2(dom.num_vertices - 1, new_edges, list(dom.cells))
            verts = [vmap[u] for u in verts]
            identified = True
        new_vertex_image = [0] * dom.num_vertices
        for old, new in enumerate(vmap):
            new_vertex_image[new] = m.vertex_image[old]
        cyc = [0] * mlen
        for k, d in enumerate(edges):
            cyc[(start + k) % mlen] = d
        m2 = CombMap(dom, x, new_vertex_image, list(m.edge_image),
                     list(m.cell_image), vmap[m.basepoint])
    else:
        new_edges = list(dom.edges)
        new_vertex_image = list(m.vertex_image)
        new_edge_image = list(m.edge_image)
        num_vertices = dom.num_vertices
        cyc = [0] * mlen
        for k, d in enumerate(edges):
            cyc[(start + k) % mlen] = d
        cur = verts[-1]
        for t in range(mlen - length):
            pos = (start + length + t) % mlen
            letter = bdry[pos]
            if t == mlen - length - 1:
                nxt = verts[0]
            else:
                nxt = num_vertices
                num_vertices += 1
                new_vertex_image.append(x.tail(bdry[(pos + 1) % mlen]))
            # orient the fresh edge along the traversal
            new_edges.append((cur, nxt))
            new_edge_image.append(letter)
            cyc[pos] = len(new_edges)
            cur = nxt
        dom = Complex2(num_vertices, new_edges, list(dom.cells))
        m2 = CombMap(dom, x, new_vertex_image, new_edge_image,
                     list(m.cell_image), m.basepoint)

    have = {m2.rewritten_cycle(c) for c in range(m2.domain.num_cells())
            if m2.cell_image[c][0] == cell}
    added = 0
    new_cells = list(m2.domain.cells)
    new_cell_image = list(m2.cell_image)
    for k in range(n):
        mate = tuple(cyc[(q + k * p) % mlen] for q in range(mlen))
        if mate in have:
            continue
        have.add(mate)
        new_cells.append(mate)
        new_cell_image.append((cell, 0, False))
        added += 1
    if added == 0:
        raise StaleSiteError("packet already present along the site")
    m2 = CombMap(replace(m2.domain, cells=new_cells), x, m2.vertex_image,
                 m2.edge_image, new_cell_image, m2.basepoint)
    return AttachResult(m2, vmap, added, site.complete, identified)


@dataclass
class ReduceResult:
    map: CombMap
    trace: ReductionTrace
    vertex_tracking: list[int]  # original domain vertex -> final vertex
    exhausted: bool = False


def reduce_map(m: CombMap, w: Weighting, mode: str = "strict",
               step_limit: int | None = None, verify: bool = False) -> ReduceResult:
    """Fold/repair/attach until no fold and no qualifying site exists.

    Weak mode requires a step limit (weak attachments need not terminate);
    hitting the limit sets `exhausted` instead of raising so the partial
    trace stays observable.
    """
    if mode not in ("strict", "weak"):
        raise EngineError("mode must be 'strict' or 'weak'")
    if mode == "weak" and step_limit is None:
        raise EngineError("weak mode requires a step_limit")
    candidates = enumerate_candidates(m.codomain, w, mode)
    tracking = list(range(m.domain.num_vertices))
    perimeter = map_perimeter(w, m)
    trace = ReductionTrace(perimeter, m.domain.num_edges())

    def out_of_steps() -> bool:
        return step_limit is not None and len(trace.steps) >= step_limit

    def log(kind: str, p: int, detail: dict | None = None) -> None:
        trace.steps.append(TraceStep(kind, p, m.domain.num_edges(),
                                     m.domain.num_vertices, m.domain.num_cells(),
                                     detail or {}))

    def fold_and_pack() -> None:
        nonlocal m, perimeter, tracking
        while not out_of_steps():
            fold = find_fold(m)
            if fold is None:
                break
            res = apply_fold(m, fold)
            m = res.map
            tracking = [res.vertex_map[v] for v in tracking]
            perimeter = map_perimeter(w, m)
            log("fold", perimeter)
        m, removed = remove_redundant(m)
        if removed:
            log("remove-redundant", perimeter, {"removed": removed})
        m, added = repair_packing(m)
        if added:
            perimeter = map_perimeter(w, m)
            log("repair", perimeter, {"added": added})

    fold_and_pack()
    while not out_of_steps():
        site = find_attachment(m, w, mode, candidates)
        if site is None:
            break
        p_packet, p_q = _site_perimeters(w, site)
        res = attach_packet(m, w, site)
        m = res.map
        tracking = [res.vertex_map[v] for v in tracking]
        if res.complete:
            new_perimeter = map_perimeter(w, m)
            delta = new_perimeter - perimeter
            wt = cell_weight(w, site.candidate.cell)
            if delta > -wt:
                raise EngineError("complete attachment failed to reduce perimeter by Wt(R)")
            perimeter = new_perimeter
            log("attach-complete", perimeter,
                {"cell": site.candidate.cell, "delta": delta})
        else:
            perimeter = perimeter + p_packet - p_q
            if verify and perimeter != map_perimeter(w, m):
                raise EngineError("incomplete attachment bookkeeping mismatch")
            log("attach-incomplete", perimeter,
                {"cell": site.candidate.cell, "delta": p_packet - p_q})
        fold_and_pack()
    exhausted = out_of_steps() and (
        find_fold(m) is not None or find_attachment(m, w, mode, candidates) is not None
    )
    return ReduceResult(m, trace, tracking, exhausted)


def _site_perimeters(w: Weighting, site: AttachmentSite) -> tuple[int, int]:
    """(P(packet), P(Q)) of a site, from codomain data alone."""
    x = w.complex
    cell, start, length = site.candidate.cell, site.candidate.start, site.candidate.length
    per = edge_perimeters(w)
    bdry = x.cells[cell]
    mlen = len(bdry)
    _p, n = cell_period(x, cell)
    p_full = sum(per[abs(d) - 1] for d in bdry)
    p_packet = p_full - n * cell_weight(w, cell)
    p_q = sum(per[abs(bdry[(start + t) % mlen]) - 1] for t in range(length))
    return p_packet, p_q


# --- presentation extraction -------------------------------------------------


def extract_presentation(m: CombMap) -> Presentation:
    """Contract a breadth-first spanning tree; non-tree edges generate and the
    2-cell boundaries, rewritten over them, relate."""
    dom = m.domain
    incident: list[list[int]] = [[] for _ in range(dom.num_vertices)]
    for e in range(dom.num_edges()):
        incident[dom.tail(e + 1)].append(e + 1)
        incident[dom.head(e + 1)].append(-(e + 1))
    for lst in incident:
        lst.sort(key=lambda d: (abs(d), -d))
    tree_edges: set[int] = set()
    seen = {m.basepoint}
    queue = [m.basepoint]
    while queue:
        v = queue.pop(0)
        for d in incident[v]:
            u = dom.head(d)
            if u not in seen:
                seen.add(u)
                tree_edges.add(abs(d) - 1)
                queue.append(u)
    if len(seen) != dom.num_vertices:
        raise EngineError("extract_presentation requires a connected domain")
    gens = [e for e in range(dom.num_edges()) if e not in tree_edges]
    gen_of = {e: i + 1 for i, e in enumerate(gens)}
    names = tuple(f"x{i + 1}" for i in range(len(gens)))
    relators = []
    for bdry in dom.cells:
        letters = []
        for d in bdry:
            e = abs(d) - 1
            if e in tree_edges:
                continue
            letters.append(gen_of[e] if d > 0 else -gen_of[e])
        word = cyclic_reduce(free_reduce(Word(tuple(letters))))
        if word.letters:
            relators.append(word)
    return Presentation(names, tuple(relators))


def relator_bound(x: Complex2, w: Weighting, words: list[Word]) -> int:
    """Sum of the word perimeters; bounds the relator count of the subgroup
    they generate when every 2-cell is attached along a simple cycle
    (reported, not enforced)."""
    per = edge_perimeters(w)
    return sum(per[abs(ell) - 1] for word in words for ell in word.letters)


def euler_perimeter(m: CombMap, w: Weighting) -> int:
    return m.domain.euler_characteristic() + map_perimeter(w, m)
