"""Worked examples: standard presentations, cover subcomplexes, and the maps
used by the regression suite and the experiment scripts."""

from __future__ import annotations

from .complexes import Complex2, standard_complex
from .maps import CombMap
from .weights import Weighting, weighting_from_rows
from .words import Presentation, Word, parse_presentation


def free_presentation(rank: int = 2) -> Presentation:
    names = tuple("abcdefgh"[:rank]) if rank <= 8 else \
        tuple(f"g{i}" for i in range(rank))
    return Presentation(names, ())


def aab_power_presentation(n: int = 3) -> Presentation:
    """<a, b | (aab)^n>."""
    return parse_presentation(f"gens a b / rel ( a a b )^{n}")


def torus_presentation() -> Presentation:
    """<a, b | a b a^-1 b^-1>."""
    return parse_presentation("gens a b / rel a b a^-1 b^-1")


def zzz_presentation() -> Presentation:
    """<a, b, c | [a,b], [a,c], [b,c]>."""
    return parse_presentation(
        "gens a b c / rel a b a^-1 b^-1 / rel a c a^-1 c^-1 / rel b c b^-1 c^-1"
    )


def zzz_weighting(x: Complex2) -> Weighting:
    """Side weights (1,2,3,4), (1,2,0,0), (1,3,5,0) on the three squares."""
    return weighting_from_rows(x, [(1, 2, 3, 4), (1, 2, 0, 0), (1, 3, 5, 0)])


def zzz_box_map() -> CombMap:
    """The 1x1x1 open box (four walls and a bottom, no top) inside the cubical
    cover of the rank-3 free abelian complex, composed down to the base."""
    x = standard_complex(zzz_presentation())

    vid = {}
    for i in (0, 1):
        for j in (0, 1):
            for k in (0, 1):
                vid[(i, j, k)] = len(vid)
    edges = []
    edge_image = []
    eid = {}

    def add_edge(src, tgt, letter):
        eid[(src, tgt)] = len(edges) + 1
        eid[(tgt, src)] = -(len(edges) + 1)
        edges.append((vid[src], vid[tgt]))
        edge_image.append(letter)

    for j in (0, 1):
        for k in (0, 1):
            add_edge((0, j, k), (1, j, k), 1)  # a along x
    for i in (0, 1):
        for k in (0, 1):
            add_edge((i, 0, k), (i, 1, k), 2)  # b along y
    for i in (0, 1):
        for j in (0, 1):
            add_edge((i, j, 0), (i, j, 1), 3)  # c along z

    def square(p0, p1, p2, p3):
        return (eid[(p0, p1)], eid[(p1, p2)], eid[(p2, p3)], eid[(p3, p0)])

    cells = [
        # bottom: a b a^-1 b^-1 at z=0
        square((0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)),
        # walls y=0 and y=1: a c a^-1 c^-1
        square((0, 0, 0), (1, 0, 0), (1, 0, 1), (0, 0, 1)),
        square((0, 1, 0), (1, 1, 0), (1, 1, 1), (0, 1, 1)),
        # walls x=0 and x=1: b c b^-1 c^-1
        square((0, 0, 0), (0, 1, 0), (0, 1, 1), (0, 0, 1)),
        square((1, 0, 0), (1, 1, 0), (1, 1, 1), (1, 0, 1)),
    ]
    cell_image = [(0, 0, False), (1, 0, False), (1, 0, False),
                  (2, 0, False), (2, 0, False)]
    dom = Complex2(len(vid), edges, list(cells))
    m = CombMap(dom, x, [0] * len(vid), edge_image, cell_image, 0)
    m.validate()
    return m


def two_squares_maps() -> tuple[CombMap, CombMap]:
    """Two squares glued along a common 1-cell; the isomorphism and the map
    folding both squares onto the first one."""
    # vertices u, v, w1, z1, w2, z2; shared edge x: u -> v
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (4, 5), (5, 0)]
    cells = [(1, 2, 3, 4), (1, 5, 6, 7)]
    x = Complex2(6, edges, cells)
    x.validate()
    phi = CombMap(x, x, list(range(6)), [e + 1 for e in range(7)],
                  [(0, 0, False), (1, 0, False)], 0)
    phi.validate()
    psi_vertices = [0, 1, 2, 3, 2, 3]
    psi_edges = [1, 2, 3, 4, 2, 3, 4]
    psi = CombMap(x, x, psi_vertices, psi_edges,
                  [(0, 0, False), (0, 0, False)], 0)
    psi.validate()
    return phi, psi


def double_cover_of_torus() -> CombMap:
    """Index-2 cover of the commutator-square complex; every side present."""
    x = standard_complex(torus_presentation())
    edges = [(0, 1), (1, 0), (0, 0), (1, 1)]  # a1, a2, b1 loop, b2 loop
    edge_image = [1, 1, 2, 2]
    cells = [(1, 4, -1, -3), (2, 3, -2, -4)]
    dom = Complex2(2, edges, cells)
    m = CombMap(dom, x, [0, 0], edge_image, [(0, 0, False), (0, 0, False)], 0)
    m.validate()
    return m


def reflected_square_map() -> CombMap:
    """A circle carrying the commutator read backwards, with the square
    attached through an orientation-reversing identification."""
    x = standard_complex(torus_presentation())
    # domain circle spells b a b^-1 a^-1 = -(target boundary) read from offset 3
    edges = [(0, 1), (1, 2), (3, 2), (0, 3)]
    edge_image = [2, 1, 2, 1]
    cells = [(1, 2, -3, -4)]
    dom = Complex2(4, edges, cells)
    m = CombMap(dom, x, [0] * 4, edge_image, [(0, 3, True)], 0)
    m.validate()
    return m


def ladder_start_map() -> CombMap:
    """Image of the closed commutator path in the cylindrical cover of the
    rank-2 free abelian complex: three vertices in a line, double edges."""
    x = standard_complex(torus_presentation())
    # levels -2, -1, 0 as vertices 0, 1, 2
    edges = [(0, 1), (0, 1), (1, 2), (1, 2)]  # a_-2, b_-2, a_-1, b_-1
    edge_image = [1, 2, 1, 2]
    dom = Complex2(3, edges, [])
    m = CombMap(dom, x, [0, 0, 0], edge_image, [], 0)
    m.validate()
    return m


def surface_presentation(genus: int, orientable: bool) -> Presentation:
    if orientable:
        gens = []
        rel = []
        for i in range(1, genus + 1):
            gens += [f"a{i}", f"b{i}"]
            rel.append(f"a{i} b{i} a{i}^-1 b{i}^-1")
        return parse_presentation(f"gens {' '.join(gens)} / rel {' '.join(rel)}")
    gens = [f"a{i}" for i in range(1, genus + 1)]
    rel = " ".join(f"a{i}^2" for i in range(1, genus + 1))
    return parse_presentation(f"gens {' '.join(gens)} / rel {rel}")


def modify_presentation() -> Presentation:
    """<a..f | abcdef^-1, fafbfcfdfe>, the retooled five-letter one-relator
    group with a spelled-out product generator."""
    return parse_presentation(
        "gens a b c d e f / rel a b c d e f^-1 / rel f a f b f c f d f e"
    )


def modify_weighting(x: Complex2) -> Weighting:
    """Weight 1 on sides labelled a..e, weight 0 on sides labelled f."""
    rows = [tuple(0 if abs(d) == 6 else 1 for d in bdry) for bdry in x.cells]
    return weighting_from_rows(x, rows)


def two_relator_block_presentation() -> Presentation:
    """Eight generators; one relator mixing them in blocks of four, one
    relator of fourth powers.  Pieces differ sharply between the two."""
    u_blocks = ["1437", "2548", "3651", "4762", "5873", "6184", "7215", "8326"]
    v_blocks = [str(i) * 4 for i in range(1, 9)]
    u = " ".join(" ".join(b) for b in u_blocks)
    v = " ".join(" ".join(b) for b in v_blocks)
    return parse_presentation(f"gens 1 2 3 4 5 6 7 8 / rel {u} / rel {v}")


def two_relator_block_weighting(x: Complex2, u_weight: int = 1, v_weight: int = 3) -> Weighting:
    return weighting_from_rows(
        x, [tuple(u_weight for _ in x.cells[0]), tuple(v_weight for _ in x.cells[1])]
    )


def magnus_example_presentation() -> Presentation:
    """<a,b,c,d | abcd dacb badc>."""
    return parse_presentation("gens a b c d / rel a b c d d a c b b a d c")
