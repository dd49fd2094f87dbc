import random
from fractions import Fraction

import pytest

from perifold import fixtures
from perifold.complexes import (
    INF,
    ComplexError,
    check_small_cancellation,
    cell_period,
    compute_pieces,
    cycle_piece_cover,
    link_graph,
    min_piece_cover,
    sides_at,
    standard_complex,
)
from perifold.maps import build_packet
from perifold.words import parse_presentation

from conftest import oracle_max_piece


@pytest.fixture(scope="module")
def aab3():
    return standard_complex(fixtures.aab_power_presentation(3))


def test_standard_complex_shapes(aab3):
    torus = standard_complex(fixtures.torus_presentation())
    assert (torus.num_vertices, torus.num_edges(), torus.num_cells()) == (1, 2, 1)
    circle = standard_complex(parse_presentation("gens a"))
    assert (circle.num_vertices, circle.num_edges(), circle.num_cells()) == (1, 1, 0)
    assert aab3.boundary_length(0) == 9


def test_sides_at_counts(aab3):
    assert len(sides_at(aab3, 0)) == 6
    assert len(sides_at(aab3, 1)) == 3
    circle = standard_complex(parse_presentation("gens a"))
    assert sides_at(circle, 0) == []
    with pytest.raises(ComplexError):
        sides_at(circle, 5)


def test_side_count_identity():
    for x in [
        standard_complex(fixtures.zzz_presentation()),
        standard_complex(fixtures.modify_presentation()),
        standard_complex(fixtures.surface_presentation(2, True)),
    ]:
        total = sum(len(sides_at(x, e)) for e in range(x.num_edges()))
        assert total == sum(x.boundary_length(c) for c in range(x.num_cells()))


def test_cell_period(aab3):
    assert cell_period(aab3, 0) == (3, 3)
    torus = standard_complex(fixtures.torus_presentation())
    assert cell_period(torus, 0) == (4, 1)
    a6 = standard_complex(parse_presentation("gens a / rel a^6"))
    assert cell_period(a6, 0) == (1, 6)


def test_build_packet_invariants(aab3):
    pk = build_packet(aab3, 0)
    assert pk.complex.num_edges() == 9
    assert pk.complex.num_cells() == 3
    assert pk.cell_offsets == (0, 3, 6)
    for e in range(9):
        assert len(sides_at(pk.complex, e)) == 3  # one side per packet cell
    torus = standard_complex(fixtures.torus_presentation())
    single = build_packet(torus, 0)
    assert single.complex.num_cells() == 1
    a2 = standard_complex(parse_presentation("gens a / rel a^2"))
    pk2 = build_packet(a2, 0)
    assert (pk2.complex.num_edges(), pk2.complex.num_cells()) == (2, 2)


def test_link_girth():
    torus = standard_complex(fixtures.torus_presentation())
    assert link_graph(torus, 0).girth == 4
    modify = standard_complex(fixtures.modify_presentation())
    assert link_graph(modify, 0).girth == 4
    circle = standard_complex(parse_presentation("gens a"))
    assert link_graph(circle, 0).girth == INF
    # parallel corners give multigraph girth 2 but no essential cycle
    abab = standard_complex(parse_presentation("gens a b / rel a b a b"))
    lk = link_graph(abab, 0)
    assert lk.girth == 2
    assert lk.essential_girth == INF


def test_pieces_aab3(aab3):
    table = compute_pieces(aab3)
    assert table.cell_max[0] == 1


def test_pieces_surface():
    x = standard_complex(fixtures.surface_presentation(2, True))
    table = compute_pieces(x)
    assert table.cell_max[0] == 1  # all pieces have length 1


def test_pieces_period_exclusion():
    # single relator abab: the period shift is excluded and the inverse
    # orientation shares no letters, so there are no pieces at all
    x = standard_complex(parse_presentation("gens a b / rel a b a b"))
    table = compute_pieces(x)
    assert table.cell_max[0] == 0
    assert table.pairs == {}


def test_piece_symmetry():
    x = standard_complex(fixtures.modify_presentation())
    table = compute_pieces(x)
    for (occ_a, occ_b), length in table.pairs.items():
        assert table.pairs[(occ_b, occ_a)] == length


def test_pieces_against_oracle():
    rng = random.Random(7)
    presentations = [
        fixtures.aab_power_presentation(3),
        fixtures.torus_presentation(),
        fixtures.surface_presentation(2, True),
        fixtures.surface_presentation(3, False),
        fixtures.modify_presentation(),
        fixtures.magnus_example_presentation(),
        fixtures.two_relator_block_presentation(),
    ]
    for pres in presentations:
        x = standard_complex(pres)
        table = compute_pieces(x)
        for c in range(x.num_cells()):
            m = x.boundary_length(c)
            starts = range(m) if m <= 12 else rng.sample(range(m), 6)
            for s in starts:
                assert table.max_from[c][s] == oracle_max_piece(x.cells, c, s), (
                    pres.generators, c, s,
                )


def test_min_piece_cover_examples():
    surf = standard_complex(fixtures.surface_presentation(2, True))
    table = compute_pieces(surf)
    assert min_piece_cover(surf, 0, 0, 8, table) == 8
    assert min_piece_cover(surf, 0, 0, 0, table) == 0
    aab3 = standard_complex(fixtures.aab_power_presentation(3))
    t3 = compute_pieces(aab3)
    assert min_piece_cover(aab3, 0, 0, 2, t3) == 2  # "aa" needs two pieces
    with pytest.raises(ComplexError):
        min_piece_cover(aab3, 0, 0, 10, t3)


def test_min_piece_cover_monotone():
    x = standard_complex(fixtures.modify_presentation())
    table = compute_pieces(x)
    for c in range(x.num_cells()):
        m = x.boundary_length(c)
        for s in range(m):
            covers = [min_piece_cover(x, c, s, ln, table) for ln in range(m + 1)]
            assert all(a <= b for a, b in zip(covers, covers[1:]))


def test_small_cancellation_reports():
    aab3 = standard_complex(fixtures.aab_power_presentation(3))
    rep = check_small_cancellation(aab3, 6, 3, Fraction(1, 6))
    assert rep.c_holds and rep.t_holds and rep.c_prime_holds
    modify = standard_complex(fixtures.modify_presentation())
    rep2 = check_small_cancellation(modify, 6, 4)
    assert rep2.c_holds and rep2.t_holds
    torus = standard_complex(fixtures.torus_presentation())
    rep3 = check_small_cancellation(torus, 6, 3)
    assert not rep3.c_holds  # the square is only C(4)
    assert cycle_piece_cover(torus, 0) == 4
    assert rep3.witnesses
