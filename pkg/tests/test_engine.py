import re

import pytest

from perifold import fixtures
from perifold.complexes import Complex2, cell_period, standard_complex
from perifold.engine import (
    EngineError,
    attach_packet,
    enumerate_candidates,
    euler_perimeter,
    extract_presentation,
    find_attachment,
    reduce_map,
    relator_bound,
)
from perifold.maps import CombMap, bouquet_map, build_packet, fold_to_immersion
from perifold.weights import (
    cell_weight,
    edge_perimeters,
    map_perimeter,
    unit_weighting,
)
from perifold.words import free_reduce, parse_presentation, word


def brute_candidates(x, w, mode):
    per = edge_perimeters(w)
    out = set()
    for c, bdry in enumerate(x.cells):
        m = len(bdry)
        p, n = cell_period(x, c)
        nwt = n * cell_weight(w, c)
        for start in range(p):
            for length in range(1, m + 1):
                p_s = sum(per[abs(bdry[(start + length + t) % m]) - 1]
                          for t in range(m - length))
                if p_s < nwt or (mode == "weak" and p_s == nwt):
                    out.add((c, start, length))
    return out


def test_enumerate_candidates_against_brute():
    for pres, w_of in [
        (fixtures.aab_power_presentation(3), unit_weighting),
        (fixtures.torus_presentation(), unit_weighting),
        (fixtures.zzz_presentation(), fixtures.zzz_weighting),
    ]:
        x = standard_complex(pres)
        w = w_of(x)
        for mode in ("strict", "weak"):
            got = {(c.cell, c.start, c.length)
                   for c in enumerate_candidates(x, w, mode)}
            assert got == brute_candidates(x, w, mode)


def test_candidate_strictness_flags():
    x = standard_complex(fixtures.torus_presentation())
    w = unit_weighting(x)
    by_len = {}
    for c in enumerate_candidates(x, w, "weak"):
        by_len.setdefault(c.length, set()).add(c.strict)
    # complement of a length-2 subpath has perimeter 4 = Wt: weak only
    assert by_len[2] == {False}
    assert by_len[3] == {True}
    assert by_len[4] == {True}
    assert 1 not in by_len


def test_find_attachment_on_bare_circle():
    x = standard_complex(fixtures.aab_power_presentation(3))
    w = unit_weighting(x)
    m = fold_to_immersion(bouquet_map(x, [word([1, 1, 2] * 3)])).map
    site = find_attachment(m, w, "strict")
    assert site is not None and site.complete
    assert site.candidate.length == 9


def test_find_attachment_none_when_packet_present():
    x = standard_complex(fixtures.aab_power_presentation(3))
    w = unit_weighting(x)
    pk = build_packet(x, 0)
    assert find_attachment(pk.projection, w, "strict") is None
    assert find_attachment(pk.projection, w, "weak") is None


def test_attach_complete_square():
    x = standard_complex(fixtures.torus_presentation())
    w = unit_weighting(x)
    m = fold_to_immersion(bouquet_map(x, [word([1, 2, -1, -2])])).map
    before = map_perimeter(w, m)
    site = find_attachment(m, w, "strict")
    assert site is not None and site.complete
    res = attach_packet(m, w, site)
    after = map_perimeter(w, res.map)
    assert before == 8 and after == 4
    assert after <= before - cell_weight(w, 0)


def test_attach_incomplete_equality_case():
    # weak flap on the cover-image ladder: P(packet) == P(Q), perimeter fixed
    m = fixtures.ladder_start_map()
    w = unit_weighting(m.codomain)
    site = find_attachment(m, w, "weak")
    assert site is not None and not site.complete
    assert site.candidate.length == 2
    res = attach_packet(m, w, site)
    assert map_perimeter(w, res.map) == map_perimeter(w, m) == 8


def test_reduce_free_group():
    x = standard_complex(fixtures.free_presentation(2))
    w = unit_weighting(x)
    res = reduce_map(bouquet_map(x, [word([1, 1]), word([1, 2])]), w)
    assert res.map.domain.num_vertices == 2
    assert res.map.domain.num_edges() == 3
    assert all(s.kind == "fold" for s in res.trace.steps)


def test_reduce_commutator_fills_square():
    x = standard_complex(fixtures.torus_presentation())
    w = unit_weighting(x)
    res = reduce_map(bouquet_map(x, [word([1, 2, -1, -2])]), w)
    pres = extract_presentation(res.map)
    assert len(pres.generators) == 1 and len(pres.relators) == 1
    assert pres.relators[0].letters in ((1,), (-1,))  # trivial group


def test_reduce_empty_generators():
    x = standard_complex(fixtures.torus_presentation())
    w = unit_weighting(x)
    res = reduce_map(bouquet_map(x, []), w)
    assert res.map.domain.num_vertices == 1
    assert res.map.domain.num_edges() == 0
    assert res.trace.steps == []


def test_reduce_idempotent():
    x = standard_complex(fixtures.aab_power_presentation(3))
    w = unit_weighting(x)
    res = reduce_map(bouquet_map(x, [word([1, 1, 2, 1])]), w)
    again = reduce_map(res.map, w)
    assert again.trace.steps == []


def test_weak_mode_requires_limit():
    m = fixtures.ladder_start_map()
    w = unit_weighting(m.codomain)
    with pytest.raises(EngineError):
        reduce_map(m, w, "weak")


def test_trace_complexity_and_step_bound(rng):
    fixtures_list = [
        (standard_complex(fixtures.torus_presentation()), 1),
        (standard_complex(fixtures.aab_power_presentation(3)), 1),
        (standard_complex(fixtures.zzz_presentation()), 3),
    ]
    for x, _ in fixtures_list:
        w = unit_weighting(x)
        cprime = max((x.boundary_length(c) for c in range(x.num_cells())), default=0)
        for _ in range(10):
            gens = []
            for _ in range(rng.randint(1, 2)):
                wd = free_reduce(word([rng.choice([1, -1, 2, -2])
                                       for _ in range(rng.randint(2, 8))]))
                if wd.letters:
                    gens.append(wd)
            if not gens:
                continue
            m = bouquet_map(x, gens)
            p0 = map_perimeter(w, m)
            e0 = m.domain.num_edges()
            res = reduce_map(m, w, verify=True)
            pair = (p0, e0)
            for step in res.trace.steps:
                new_pair = (step.perimeter, step.edges)
                if step.kind == "fold" or (step.kind.startswith("attach")):
                    assert new_pair < pair, (step.kind, pair, new_pair)
                else:
                    assert new_pair <= pair
                pair = new_pair
            working = sum(1 for s in res.trace.steps
                          if s.kind == "fold" or s.kind.startswith("attach"))
            assert working <= cprime * p0 + e0


def test_trace_export_format():
    m = fixtures.ladder_start_map()
    w = unit_weighting(m.codomain)
    res = reduce_map(m, w)
    lines = res.trace.to_lines()
    assert lines
    for line in lines:
        assert re.fullmatch(
            r"step=\d+ kind=(fold|attach-complete|attach-incomplete|repair|"
            r"remove-redundant) P=\d+ edges=\d+", line)


def test_reduce_output_is_structurally_sound(rng):
    # final maps validate, are packed 1-immersions, and admit no strict site
    from perifold.maps import is_1_immersion, is_packed

    presentations = [
        fixtures.torus_presentation(),
        fixtures.aab_power_presentation(3),
        fixtures.surface_presentation(2, False),
        fixtures.modify_presentation(),
    ]
    for pres in presentations:
        x = standard_complex(pres)
        w = unit_weighting(x)
        ngen = x.num_edges()
        for _ in range(8):
            letters = [rng.choice([s * g for g in range(1, ngen + 1) for s in (1, -1)])
                       for _ in range(rng.randint(2, 10))]
            g = free_reduce(word(letters))
            if not g.letters:
                continue
            res = reduce_map(bouquet_map(x, [g]), w, verify=True)
            res.map.validate()
            assert is_1_immersion(res.map)[0]
            assert is_packed(res.map)[0]
            assert find_attachment(res.map, w, "strict") is None
            assert res.trace.steps == [] or \
                res.trace.steps[-1].perimeter == map_perimeter(w, res.map)


def test_find_attachment_requires_immersion(rng):
    x = standard_complex(fixtures.torus_presentation())
    w = unit_weighting(x)
    m = bouquet_map(x, [word([1]), word([1, 2])])
    with pytest.raises(EngineError):
        find_attachment(m, w)


def test_extract_presentation_shapes():
    x = standard_complex(fixtures.free_presentation(2))
    circle = fold_to_immersion(bouquet_map(x, [word([1, 2, 1])])).map
    pres = extract_presentation(circle)
    assert len(pres.generators) == 1 and not pres.relators
    theta = CombMap(
        Complex2(2, [(0, 1), (0, 1), (0, 1)], []), x,
        [0, 0], [1, 2, 1], [], 0,
    )
    pres2 = extract_presentation(theta)
    assert len(pres2.generators) == 2 and not pres2.relators


def test_relator_bound_and_euler():
    x = standard_complex(fixtures.surface_presentation(2, True))
    w = unit_weighting(x)
    assert relator_bound(x, w, [word([1, 2, -1, -2])]) == 8
    assert relator_bound(x, w, []) == 0
    free = standard_complex(fixtures.free_presentation(2))
    wf = unit_weighting(free)
    point = bouquet_map(free, [])
    assert euler_perimeter(point, wf) == 1
