"""Combinatorial maps between 2-complexes.

A map stores per-vertex and per-edge images (edge images signed) plus, for
each domain 2-cell, a triple (target cell, offset, reflected) describing how
the domain boundary sits over the target boundary:

    reflected = False:  image of boundary[j]  ==  target_boundary[(offset + j) % m]
    reflected = True:   image of boundary[j]  == -target_boundary[(offset - j) % m]

The rewritten cycle of a domain cell lists, for every target boundary
position q, the domain directed edge lying over it.  Two domain cells are the
same lift exactly when their rewritten cycles agree, which makes redundancy,
packedness and side presence straightforward to state.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .complexes import Complex2, ComplexError, cell_period
from .words import Word


class MapError(ValueError):
    pass


@dataclass
class CombMap:
    domain: Complex2
    codomain: Complex2
    vertex_image: list[int]
    edge_image: list[int]  # signed codomain edge ref per positive domain edge
    cell_image: list[tuple[int, int, bool]]  # (cell, offset, reflected)
    basepoint: int = 0

    def image_of(self, d: int) -> int:
        img = self.edge_image[abs(d) - 1]
        return img if d > 0 else -img

    def validate(self) -> None:
        dom, cod = self.domain, self.codomain
        dom.validate()
        cod.validate()
        if len(self.vertex_image) != dom.num_vertices:
            raise MapError("vertex image size mismatch")
        if len(self.edge_image) != dom.num_edges():
            raise MapError("edge image size mismatch")
        if len(self.cell_image) != dom.num_cells():
            raise MapError("cell image size mismatch")
        if not (0 <= self.basepoint < dom.num_vertices):
            raise MapError("basepoint out of range")
        for e, (src, tgt) in enumerate(dom.edges):
            img = self.edge_image[e]
            if img == 0 or abs(img) > cod.num_edges():
                raise MapError(f"edge {e} image out of range")
            if self.vertex_image[src] != cod.tail(img) or self.vertex_image[tgt] != cod.head(img):
                raise MapError(f"edge {e} image endpoint mismatch")
        for c, (r, offset, reflected) in enumerate(self.cell_image):
            if not (0 <= r < cod.num_cells()):
                raise MapError(f"cell {c} image out of range")
            bdry = dom.cells[c]
            target = cod.cells[r]
            m = len(target)
            if len(bdry) != m:
                raise MapError(f"cell {c} boundary length mismatch")
            for j, d in enumerate(bdry):
                if reflected:
                    want = -target[(offset - j) % m]
                else:
                    want = target[(offset + j) % m]
                if self.image_of(d) != want:
                    raise MapError(f"cell {c} boundary incompatible at {j}")

    # -- derived data --------------------------------------------------------

    def out_edges(self) -> list[dict[int, int]]:
        """Per vertex: image directed edge -> domain directed edge.

        Only well defined (single-valued) for 1-immersions; the folding loop
        uses `directed_stars` instead while duplicates may exist.
        """
        outs: list[dict[int, int]] = [dict() for _ in range(self.domain.num_vertices)]
        for e in range(self.domain.num_edges()):
            for d in (e + 1, -(e + 1)):
                outs[self.domain.tail(d)][self.image_of(d)] = d
        return outs

    def directed_stars(self) -> list[list[tuple[int, int]]]:
        """Per vertex: sorted list of (image directed edge, domain directed edge)."""
        stars: list[list[tuple[int, int]]] = [[] for _ in range(self.domain.num_vertices)]
        for e in range(self.domain.num_edges()):
            for d in (e + 1, -(e + 1)):
                stars[self.domain.tail(d)].append((self.image_of(d), d))
        for star in stars:
            star.sort()
        return stars

    def rewritten_cycle(self, c: int) -> tuple[int, ...]:
        """Domain directed edge over each target boundary position."""
        r, offset, reflected = self.cell_image[c]
        bdry = self.domain.cells[c]
        m = len(bdry)
        if reflected:
            return tuple(-bdry[(offset - q) % m] for q in range(m))
        return tuple(bdry[(q - offset) % m] for q in range(m))


def identity_map(x: Complex2, basepoint: int = 0) -> CombMap:
    return CombMap(
        x, x,
        list(range(x.num_vertices)),
        [e + 1 for e in range(x.num_edges())],
        [(c, 0, False) for c in range(x.num_cells())],
        basepoint,
    )


@dataclass
class PathInY:
    complex: Complex2
    vertices: tuple[int, ...]
    edges: tuple[int, ...]  # signed refs; len(vertices) == len(edges) + 1

    def __post_init__(self):
        if len(self.vertices) != len(self.edges) + 1:
            raise MapError("path vertex/edge count mismatch")
        for v, d, w in zip(self.vertices, self.edges, self.vertices[1:]):
            if self.complex.tail(d) != v or self.complex.head(d) != w:
                raise MapError("path does not chain")

    def __len__(self) -> int:
        return len(self.edges)

    def is_closed(self) -> bool:
        return self.vertices[0] == self.vertices[-1]


def path_from_edges(x: Complex2, start: int, edges) -> PathInY:
    vertices = [start]
    for d in edges:
        vertices.append(x.head(d))
    return PathInY(x, tuple(vertices), tuple(edges))


# --- bouquets ---------------------------------------------------------------


def bouquet_map(x: Complex2, words: list[Word], whisker: Word | None = None) -> CombMap:
    """Wedge of subdivided circles (one per word) at a basepoint, with an
    optional open whisker arc, mapped along the given words."""
    if x.num_vertices != 1:
        raise MapError("bouquet_map expects a one-vertex codomain")
    ngen = x.num_edges()
    for w in words:
        if not w.letters:
            raise MapError("bouquet words must be nonempty")
        if any(abs(ell) > ngen for ell in w.letters):
            raise MapError("word uses unknown generator")
    vertex_image = [0]
    edges: list[tuple[int, int]] = []
    edge_image: list[int] = []
    num_vertices = 1

    def fresh_vertex() -> int:
        nonlocal num_vertices
        vertex_image.append(0)
        num_vertices += 1
        return num_vertices - 1

    def add_edge(src: int, tgt: int, letter: int) -> None:
        edges.append((src, tgt))
        edge_image.append(letter)

    for w in words:
        prev = 0
        for k, letter in enumerate(w.letters):
            nxt = 0 if k == len(w.letters) - 1 else fresh_vertex()
            add_edge(prev, nxt, letter)
            prev = nxt
    if whisker is not None and whisker.letters:
        prev = 0
        for letter in whisker.letters:
            nxt = fresh_vertex()
            add_edge(prev, nxt, letter)
            prev = nxt
    dom = Complex2(num_vertices, edges, [])
    m = CombMap(dom, x, vertex_image, edge_image, [], 0)
    m.validate()
    return m


def whisker_tip(m: CombMap) -> int:
    """Endpoint of the open arc of a bouquet-with-whisker (the last vertex)."""
    return m.domain.num_vertices - 1


# --- folding ----------------------------------------------------------------


def find_fold(m: CombMap) -> tuple[int, int, int] | None:
    """First (vertex, d1, d2) with two distinct edge-ends sharing an image."""
    stars = m.directed_stars()
    for v, star in enumerate(stars):
        for (img1, d1), (img2, d2) in zip(star, star[1:]):
            if img1 == img2:
                return v, d1, d2
    return None


def is_1_immersion(m: CombMap) -> tuple[bool, tuple[int, int, int] | None]:
    w = find_fold(m)
    return (w is None), w


@dataclass
class FoldResult:
    map: CombMap
    vertex_map: list[int]
    edge_pair: tuple[int, int]  # the identified directed edges (pre-fold refs)


def apply_fold(m: CombMap, fold: tuple[int, int, int] | None = None) -> FoldResult:
    """Identify the two edges of one fold pair and rewrite everything through
    the quotient.  Image words of cells are immersed, so no cell boundary can
    backtrack after the identification."""
    if fold is None:
        fold = find_fold(m)
    if fold is None:
        raise MapError("no fold available")
    _v, d1, d2 = fold
    dom = m.domain
    h1, h2 = dom.head(d1), dom.head(d2)

    if h1 != h2:
        lo, hi = min(h1, h2), max(h1, h2)
        vmap = [i - (1 if i > hi else 0) for i in range(dom.num_vertices)]
        vmap[hi] = vmap[lo]
    else:
        vmap = list(range(dom.num_vertices))

    e_keep, e_drop = abs(d1) - 1, abs(d2) - 1
    sign = 1 if (d1 > 0) == (d2 > 0) else -1

    def emap(d: int) -> int:
        e = abs(d) - 1
        if e == e_drop:
            d_over_keep = (e_keep + 1) * sign
            mapped = d_over_keep if d > 0 else -d_over_keep
        else:
            mapped = d
        e2 = abs(mapped) - 1
        e2 -= 1 if e2 > e_drop else 0
        return (e2 + 1) if mapped > 0 else -(e2 + 1)

    new_edges = []
    new_edge_image = []
    for e, (src, tgt) in enumerate(dom.edges):
        if e == e_drop:
            continue
        new_edges.append((vmap[src], vmap[tgt]))
        new_edge_image.append(m.edge_image[e])
    new_cells = [tuple(emap(d) for d in bdry) for bdry in dom.cells]
    new_vertex_image = [None] * (dom.num_vertices - (1 if h1 != h2 else 0))
    for old, new in enumerate(vmap):
        new_vertex_image[new] = m.vertex_image[old]
    new_dom = Complex2(len(new_vertex_image), new_edges, new_cells)
    m2 = CombMap(new_dom, m.codomain, list(new_vertex_image), new_edge_image,
                 list(m.cell_image), vmap[m.basepoint])
    return FoldResult(m2, vmap, (d1, d2))


def remove_redundant(m: CombMap) -> tuple[CombMap, int]:
    """Drop all but one of each family of cells with equal image cell and
    equal rewritten cycle; the perimeter is unchanged."""
    seen: set[tuple[int, tuple[int, ...]]] = set()
    keep: list[int] = []
    for c in range(m.domain.num_cells()):
        key = (m.cell_image[c][0], m.rewritten_cycle(c))
        if key in seen:
            continue
        seen.add(key)
        keep.append(c)
    removed = m.domain.num_cells() - len(keep)
    if removed == 0:
        return m, 0
    dom = replace(m.domain, cells=[m.domain.cells[c] for c in keep])
    m2 = CombMap(dom, m.codomain, list(m.vertex_image), list(m.edge_image),
                 [m.cell_image[c] for c in keep], m.basepoint)
    return m2, removed


@dataclass
class FoldToImmersionResult:
    map: CombMap
    folds: list[tuple[int, int]]
    removed_cells: int
    vertex_map: list[int]
    per_fold_maps: list[CombMap] = field(default_factory=list)


def fold_to_immersion(m: CombMap, keep_intermediate: bool = False) -> FoldToImmersionResult:
    vmap = list(range(m.domain.num_vertices))
    folds: list[tuple[int, int]] = []
    stages: list[CombMap] = []
    while True:
        fold = find_fold(m)
        if fold is None:
            break
        res = apply_fold(m, fold)
        folds.append(res.edge_pair)
        vmap = [res.vertex_map[v] for v in vmap]
        m = res.map
        if keep_intermediate:
            stages.append(m)
    m, removed = remove_redundant(m)
    return FoldToImmersionResult(m, folds, removed, vmap, stages)


# --- packets ----------------------------------------------------------------


@dataclass
class Packet:
    complex: Complex2
    projection: CombMap
    cell_offsets: tuple[int, ...]


def build_packet(x: Complex2, c: int) -> Packet:
    """Circle of n*|W| edges carrying the boundary word of c, with n cells
    attached along the full circle at offsets 0, |W|, ..., (n-1)|W|."""
    bdry = x.cells[c]
    m = len(bdry)
    p, n = cell_period(x, c)
    edges = [(q, (q + 1) % m) for q in range(m)]
    cells = [tuple((k * p + j) % m + 1 for j in range(m)) for k in range(n)]
    circle = Complex2(m, edges, cells)
    vertex_image = [x.tail(bdry[q]) for q in range(m)]
    proj = CombMap(circle, x, vertex_image, list(bdry),
                   [(c, 0, False) for _ in range(n)], 0)
    proj.validate()
    return Packet(circle, proj, tuple(k * p for k in range(n)))


def _rotated(cycle: tuple[int, ...], s: int) -> tuple[int, ...]:
    m = len(cycle)
    s %= m
    return tuple(cycle[(q + s) % m] for q in range(m))


def is_packed(m: CombMap) -> tuple[bool, tuple[int, int] | None]:
    """Packed iff every lift of a 2-cell extends to a lift of its packet,
    i.e. all period rotations of its rewritten cycle are present as cells."""
    present: dict[int, set[tuple[int, ...]]] = {}
    for c in range(m.domain.num_cells()):
        present.setdefault(m.cell_image[c][0], set()).add(m.rewritten_cycle(c))
    for c in range(m.domain.num_cells()):
        r = m.cell_image[c][0]
        p, n = cell_period(m.codomain, r)
        cyc = m.rewritten_cycle(c)
        for k in range(1, n):
            if _rotated(cyc, k * p) not in present[r]:
                return False, (c, k)
    return True, None


def repair_packing(m: CombMap) -> tuple[CombMap, int]:
    """Attach the missing packet mates along existing boundary circles.

    Adds 2-cells only (no new 1-cells), so the perimeter cannot increase.
    """
    present: dict[int, set[tuple[int, ...]]] = {}
    for c in range(m.domain.num_cells()):
        present.setdefault(m.cell_image[c][0], set()).add(m.rewritten_cycle(c))
    new_cells: list[tuple[int, ...]] = []
    new_images: list[tuple[int, int, bool]] = []
    for r, cycles in present.items():
        p, n = cell_period(m.codomain, r)
        if n == 1:
            continue
        for cyc in list(cycles):
            for k in range(1, n):
                mate = _rotated(cyc, k * p)
                if mate not in cycles:
                    cycles.add(mate)
                    new_cells.append(mate)
                    new_images.append((r, 0, False))
    if not new_cells:
        return m, 0
    dom = replace(m.domain, cells=list(m.domain.cells) + new_cells)
    m2 = CombMap(dom, m.codomain, list(m.vertex_image), list(m.edge_image),
                 list(m.cell_image) + new_images, m.basepoint)
    return m2, len(new_cells)


# --- path lifting -----------------------------------------------------------


def lift_path(m: CombMap, path: PathInY, start: int) -> PathInY | None:
    """Unique lift of a codomain path from a domain vertex; None if it dies.

    Requires a 1-immersion (lifts are then unique) and that the image of
    start matches the start of the path.
    """
    ok, _ = is_1_immersion(m)
    if not ok:
        raise MapError("lift_path requires a 1-immersion")
    if m.vertex_image[start] != path.vertices[0]:
        raise MapError("start vertex image mismatch")
    outs = m.out_edges()
    verts = [start]
    edges: list[int] = []
    cur = start
    for d in path.edges:
        lifted = outs[cur].get(d)
        if lifted is None:
            return None
        edges.append(lifted)
        cur = m.domain.head(lifted)
        verts.append(cur)
    return PathInY(m.domain, tuple(verts), tuple(edges))


# --- fiber products ---------------------------------------------------------


@dataclass
class FiberProduct:
    product: Complex2
    to_a: CombMap
    to_b: CombMap
    to_codomain: CombMap
    based_vertex: int


def fiber_product(a: CombMap, b: CombMap) -> FiberProduct:
    """Pairs of cells with equal image.

    Vertices are image-matching vertex pairs; edges are image-matching edge
    pairs oriented compatibly; each pair of 2-cells over a common target cell
    contributes the single product cell whose boundary pairs their rewritten
    cycles position by position.
    """
    if a.codomain != b.codomain:
        raise MapError("fiber product needs a common codomain")
    x = a.codomain
    vid: dict[tuple[int, int], int] = {}
    for u in range(a.domain.num_vertices):
        for v in range(b.domain.num_vertices):
            if a.vertex_image[u] == b.vertex_image[v]:
                vid[(u, v)] = len(vid)
    edges: list[tuple[int, int]] = []
    edge_a: list[int] = []
    edge_b: list[int] = []
    edge_img: list[int] = []
    eid: dict[tuple[int, int], int] = {}  # (signed a-edge, signed b-edge) -> ref
    for ea in range(a.domain.num_edges()):
        for eb in range(b.domain.num_edges()):
            da, db = a.edge_image[ea], b.edge_image[eb]
            if abs(da) != abs(db):
                continue
            # orient both over the positive codomain edge
            da_dir = (ea + 1) if da > 0 else -(ea + 1)
            db_dir = (eb + 1) if db > 0 else -(eb + 1)
            src = (a.domain.tail(da_dir), b.domain.tail(db_dir))
            tgt = (a.domain.head(da_dir), b.domain.head(db_dir))
            ref = len(edges) + 1
            edges.append((vid[src], vid[tgt]))
            edge_a.append(da_dir)
            edge_b.append(db_dir)
            edge_img.append(abs(da))
            eid[(da_dir, db_dir)] = ref
            eid[(-da_dir, -db_dir)] = -ref
    cells: list[tuple[int, ...]] = []
    cell_a: list[tuple[int, int, bool]] = []
    cell_b: list[tuple[int, int, bool]] = []
    cell_img: list[tuple[int, int, bool]] = []
    for ca in range(a.domain.num_cells()):
        ra = a.cell_image[ca][0]
        cyc_a = a.rewritten_cycle(ca)
        for cb in range(b.domain.num_cells()):
            if b.cell_image[cb][0] != ra:
                continue
            cyc_b = b.rewritten_cycle(cb)
            bdry = tuple(eid[(cyc_a[q], cyc_b[q])] for q in range(len(cyc_a)))
            cells.append(bdry)
            cell_a.append((ca, 0, False))
            cell_b.append((cb, 0, False))
            cell_img.append((ra, 0, False))
    prod = Complex2(len(vid), edges, cells)
    vpairs = sorted(vid, key=vid.get)
    to_a = CombMap(prod, a.domain, [u for u, _ in vpairs], edge_a, cell_a, 0)
    to_b = CombMap(prod, b.domain, [v for _, v in vpairs], edge_b, cell_b, 0)
    to_x = CombMap(prod, x, [a.vertex_image[u] for u, _ in vpairs], edge_img,
                   cell_img, 0)
    base = vid.get((a.basepoint, b.basepoint))
    if base is None:
        raise MapError("basepoints do not match over the codomain")
    to_a.basepoint = to_b.basepoint = to_x.basepoint = base
    return FiberProduct(prod, to_a, to_b, to_x, base)


def restrict_to_component(m: CombMap, vertex: int) -> CombMap:
    """Restriction of the map to the connected component of a vertex."""
    dom = m.domain
    seen = {vertex}
    frontier = [vertex]
    adj: list[list[int]] = [[] for _ in range(dom.num_vertices)]
    for e, (src, tgt) in enumerate(dom.edges):
        adj[src].append(tgt)
        adj[tgt].append(src)
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    vkeep = sorted(seen)
    vmap = {old: new for new, old in enumerate(vkeep)}
    ekeep = [e for e, (src, tgt) in enumerate(dom.edges) if src in seen]
    emap = {old: new for new, old in enumerate(ekeep)}

    def remap(d: int) -> int:
        e = emap[abs(d) - 1]
        return (e + 1) if d > 0 else -(e + 1)

    ckeep = [c for c, bdry in enumerate(dom.cells)
             if dom.tail(bdry[0]) in seen]
    new_dom = Complex2(
        len(vkeep),
        [(vmap[dom.edges[e][0]], vmap[dom.edges[e][1]]) for e in ekeep],
        [tuple(remap(d) for d in dom.cells[c]) for c in ckeep],
    )
    return CombMap(
        new_dom, m.codomain,
        [m.vertex_image[v] for v in vkeep],
        [m.edge_image[e] for e in ekeep],
        [m.cell_image[c] for c in ckeep],
        vmap[vertex],
    )


# --- canonical forms --------------------------------------------------------


def canonical_form(m: CombMap):
    """Canonical description of a connected 1-immersed based map, used to
    compare fold results for isomorphism regardless of fold order."""
    ok, _ = is_1_immersion(m)
    if not ok:
        raise MapError("canonical_form requires a 1-immersion")
    outs = m.out_edges()
    order = {m.basepoint: 0}
    queue = [m.basepoint]
    while queue:
        v = queue.pop(0)
        for _img, d in sorted(outs[v].items()):
            w = m.domain.head(d)
            if w not in order:
                order[w] = len(order)
                queue.append(w)
    if len(order) != m.domain.num_vertices:
        raise MapError("canonical_form requires a connected domain")
    edge_entries = []
    for e in range(m.domain.num_edges()):
        src, tgt = m.domain.edges[e]
        fwd = (order[src], order[tgt], m.edge_image[e])
        bwd = (order[tgt], order[src], -m.edge_image[e])
        if fwd <= bwd:
            edge_entries.append((fwd, e, 1))
        else:
            edge_entries.append((bwd, e, -1))
    edge_entries.sort()
    canon_ref = {}
    for new_idx, (_entry, e, sign) in enumerate(edge_entries):
        canon_ref[e + 1] = (new_idx + 1) * sign
        canon_ref[-(e + 1)] = -(new_idx + 1) * sign
    cell_entries = sorted(
        (m.cell_image[c][0], tuple(canon_ref[d] for d in m.rewritten_cycle(c)))
        for c in range(m.domain.num_cells())
    )
    return (
        tuple(entry for entry, _e, _s in edge_entries),
        tuple(cell_entries),
    )


def isomorphic_maps(a: CombMap, b: CombMap) -> bool:
    return a.codomain == b.codomain and canonical_form(a) == canonical_form(b)
