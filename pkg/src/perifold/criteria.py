"""Sufficient-condition checkers for coherence and local quasiconvexity.

Every checker returns a Verdict.  Inapplicability (a hypothesis of the
criterion fails) is kept distinct from a failing inequality: these are
one-sided tests and a False verdict never means "incoherent".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import (
    INF,
    Complex2,
    PieceTable,
    check_small_cancellation,
    compute_pieces,
    cell_period,
    largest_metric_denominator,
    min_piece_cover,
    standard_complex,
)
from .weights import Weighting, cell_weight, edge_perimeters, unit_weighting
from .words import (
    Presentation,
    Word,
    cyclically_conjugate,
    generator_occurrences,
    is_cyclically_reduced,
    period_exponent,
    render_word,
)


class CriterionError(ValueError):
    pass


@dataclass
class Verdict:
    criterion: str
    holds: bool
    conclusion: str  # coherent | locally-quasiconvex | both | none
    applicable: bool = True
    witnesses: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "holds": self.holds,
            "conclusion": self.conclusion,
            "witnesses": list(self.witnesses),
            "notes": list(self.notes),
        }


def _inapplicable(criterion: str, why: str) -> Verdict:
    return Verdict(criterion, False, "none", applicable=False, notes=[why])


def check_one_relator_torsion(x: Complex2, w: Weighting) -> Verdict:
    """One-relator torsion test: P(S) <= n*Wt(R) for every boundary subpath
    shorter than the period."""
    crit = "one-relator-torsion"
    if x.num_cells() != 1 or x.num_vertices != 1:
        return _inapplicable(crit, "needs a unique 2-cell and a unique 0-cell")
    p, n = cell_period(x, 0)
    if n <= 1:
        return _inapplicable(crit, "relator is not a proper power (exponent 1)")
    per = edge_perimeters(w)
    bdry = x.cells[0]
    m = len(bdry)
    bound = n * cell_weight(w, 0)
    worst = (-1, None)
    for start in range(m):
        total = 0
        for length in range(1, p):
            total += per[abs(bdry[(start + length - 1) % m]) - 1]
            if total > worst[0]:
                worst = (total, (start, length))
    holds = worst[0] <= bound
    witnesses = []
    if not holds:
        start, length = worst[1]
        witnesses.append(
            f"subpath at position {start} of length {length} has perimeter"
            f" {worst[0]} > {bound}"
        )
    return Verdict(crit, holds, "coherent" if holds else "none",
                   witnesses=witnesses,
                   notes=[f"max P(S) = {worst[0]} vs n*Wt(R) = {bound}"])


def check_equalweights(W: Word, n: int) -> Verdict:
    """Unit-weighting bound for a one-relator presentation with relator W**n:
    coherent once n >= |W| - 1, locally quasiconvex once n >= 3|W|."""
    crit = "equalweights"
    if not is_cyclically_reduced(W) or not W.letters:
        raise CriterionError("W must be nonempty and cyclically reduced")
    coherent = n >= len(W) - 1
    lqc = n >= 3 * len(W)
    if lqc:
        conclusion = "both"
    elif coherent:
        conclusion = "coherent"
    else:
        conclusion = "none"
    return Verdict(crit, coherent, conclusion,
                   notes=[f"coherence bound n >= {len(W) - 1}",
                          f"local quasiconvexity bound n >= {3 * len(W)}"])


def check_min_generator(W: Word, n: int) -> Verdict:
    """Concentrated 0/1 weighting: coherent once n >= k where k is the least
    positive occurrence count of a generator in W."""
    crit = "min-generator"
    if not is_cyclically_reduced(W) or not W.letters:
        raise CriterionError("W must be nonempty and cyclically reduced")
    if n < 2:
        return _inapplicable(crit, "needs exponent n >= 2")
    counts: dict[int, int] = {}
    for ell in W.letters:
        counts[abs(ell)] = counts.get(abs(ell), 0) + 1
    k, gen = min((c, g) for g, c in counts.items())
    holds = n >= k
    verdict = Verdict(crit, holds, "coherent" if holds else "none",
                      notes=[f"generator #{gen} occurs {k} times; need n >= {k}"])
    ngen = max(abs(ell) for ell in W.letters)
    gens = tuple(f"g{i + 1}" for i in range(ngen))
    pres = Presentation(gens, (Word(W.letters * n),))
    x = standard_complex(pres)
    rows = [tuple(1 if abs(d) == gen else 0 for d in bdry) for bdry in x.cells]
    verdict.extras["weighting"] = Weighting(x, tuple(rows))
    verdict.extras["complex"] = x
    return verdict


_VARIANTS = {"C6T3": (6, 3, 3), "C4T4": (4, 4, 2)}


def check_sc_weight(x: Complex2, w: Weighting, variant: str = "C4T4",
                    strict: bool = False,
                    table: PieceTable | None = None) -> Verdict:
    """Small-cancellation weight test: over every subpath S of a cell
    boundary made of at most 3 (C6T3) or 2 (C4T4) pieces, require
    P(S) <= n*Wt(R), strictly for the quasiconvexity form."""
    crit = f"sc-{variant.lower()}" + ("-strict" if strict else "")
    if variant not in _VARIANTS:
        raise CriterionError(f"unknown variant {variant!r}")
    p_cond, q_cond, shell = _VARIANTS[variant]
    if table is None:
        table = compute_pieces(x)
    sc = check_small_cancellation(x, p_cond, q_cond, table=table)
    if not (sc.c_holds and sc.t_holds):
        return Verdict(crit, False, "none", applicable=False,
                       witnesses=list(sc.witnesses),
                       notes=[f"complex is not C({p_cond})-T({q_cond}) (T via link girth)"])
    per = edge_perimeters(w)
    worst = None  # (excess, cell, start, length, p_s, bound)
    for c, bdry in enumerate(x.cells):
        m = len(bdry)
        _p, n = cell_period(x, c)
        bound = n * cell_weight(w, c)
        for start in range(m):
            total = 0
            for length in range(1, m + 1):
                total += per[abs(bdry[(start + length - 1) % m]) - 1]
                if min_piece_cover(x, c, start, length, table) > shell:
                    continue
                excess = total - bound
                key = (-excess, c, start, length)
                if worst is None or key < worst[0]:
                    worst = (key, total, bound)
    if worst is None:
        return Verdict(crit, True, "both" if strict else "coherent",
                       notes=["no piece-bounded subpaths (no pieces)"])
    (neg_excess, c, start, length), p_s, bound = worst
    excess = -neg_excess
    holds = (excess < 0) if strict else (excess <= 0)
    if holds:
        conclusion = "both" if strict else "coherent"
    else:
        conclusion = "none"
    witnesses = []
    if not holds:
        word = Word(tuple(x.cells[c][(start + t) % len(x.cells[c])] for t in range(length)))
        witnesses.append(
            f"cell {c} subpath at {start} length {length}"
            f" ({'/'.join(str(d) for d in word.letters)}) has P = {p_s}"
            f" vs bound {bound}"
        )
    verdict = Verdict(crit, holds, conclusion, witnesses=witnesses,
                      notes=[f"worst subpath perimeter {p_s} vs n*Wt = {bound}"])
    verdict.extras["worst"] = {"cell": c, "start": start, "length": length,
                               "perimeter": p_s, "bound": bound}
    return verdict


def check_few_occurrences(p: Presentation,
                          table: PieceTable | None = None) -> Verdict:
    """Metric small-cancellation occurrence test: with C'(1/n) and every
    generator occurring at most n/3 times, coherent and locally quasiconvex."""
    crit = "few-occurrences"
    x = standard_complex(p)
    n_max = largest_metric_denominator(x, table)
    occ = generator_occurrences(p)
    worst_gen, worst = None, -1
    for g, c in occ.items():
        if c > worst:
            worst_gen, worst = g, c
    if n_max == INF:
        holds = True
        notes = ["no pieces: C'(1/n) holds for every n"]
    else:
        holds = 3 * worst <= n_max
        notes = [f"largest n with C'(1/n): {int(n_max)}"]
    witnesses = []
    if not holds:
        witnesses.append(
            f"generator {worst_gen!r} occurs {worst} times > {int(n_max)}/3"
        )
    verdict = Verdict(crit, holds, "both" if holds else "none",
                      witnesses=witnesses, notes=notes)
    verdict.extras["n_max"] = n_max
    verdict.extras["max_occurrences"] = worst
    return verdict


def power_theorem(words: list[Word], exponents: list[int] | None = None) -> tuple[int, Verdict]:
    """Exponent threshold N = ceil(6 * |Wmax| / |Wmin| * sum |Wi|): raising
    each word to a power >= N gives a coherent group, > N locally quasiconvex."""
    crit = "powers"
    if not words:
        raise CriterionError("need at least one word")
    for u in words:
        if not u.letters or not is_cyclically_reduced(u):
            raise CriterionError("words must be nonempty and cyclically reduced")
        if period_exponent(u)[1] > 1:
            raise CriterionError(f"word {u.letters} is a proper power")
    for i, u in enumerate(words):
        for v in words[i + 1:]:
            if cyclically_conjugate(u, v):
                raise CriterionError("words are cyclically conjugate (up to inversion)")
    lengths = [len(u) for u in words]
    n_frac = Fraction(6 * max(lengths) * sum(lengths), min(lengths))
    n_bound = math.ceil(n_frac)
    notes = [f"threshold N = {n_bound}"]
    if exponents is None:
        return n_bound, Verdict(crit, False, "none", notes=notes + ["no exponents supplied"])
    if len(exponents) != len(words):
        raise CriterionError("one exponent per word required")
    coherent = all(n >= n_bound for n in exponents)
    lqc = all(n > n_bound for n in exponents)
    conclusion = "both" if lqc else ("coherent" if coherent else "none")
    witnesses = [] if coherent else [
        f"exponent {n} < N = {n_bound}" for n in exponents if n < n_bound
    ]
    return n_bound, Verdict(crit, coherent, conclusion, witnesses=witnesses, notes=notes)


def magnus_weighting(x: Complex2, subgraph_edges: set[int]) -> tuple[Weighting | None, Verdict]:
    """Weight 0 on every side over the subgraph's edges, 1 elsewhere.

    Fails (free-factor case) when some 2-cell uses subgraph generators only.
    """
    crit = "magnus-weighting"
    if x.num_vertices != 1:
        return None, _inapplicable(crit, "needs a one-vertex complex")
    rows = [tuple(0 if abs(d) - 1 in subgraph_edges else 1 for d in bdry)
            for bdry in x.cells]
    zero_cells = [c for c, row in enumerate(rows) if sum(row) == 0]
    if zero_cells:
        return None, Verdict(
            crit, False, "none",
            witnesses=[f"cell {c} uses subgraph generators only" for c in zero_cells],
            notes=["subgraph generators span a free factor; weighting invalid"],
        )
    w = Weighting(x, tuple(rows))
    per = edge_perimeters(w)
    assert all(per[e] == 0 for e in subgraph_edges)
    return w, Verdict(crit, True, "none",
                      notes=["subgraph has perimeter 0; every cell weight positive"])


def _is_unit(w: Weighting) -> bool:
    return all(all(v == 1 for v in row) for row in w.side_weights)


def find_certificate(x: Complex2, w: Weighting, grade: str = "strict") -> Verdict | None:
    """First holding verdict that certifies the engine's answers on (x, w).

    grade "strict": quasiconvexity-grade (strict inequalities); grade "weak":
    coherence-grade, enough for membership answers.
    """
    if grade not in ("strict", "weak"):
        raise CriterionError("grade must be 'strict' or 'weak'")
    table = compute_pieces(x)
    verdicts: list[Verdict] = []
    if grade == "weak":
        verdicts.append(check_one_relator_torsion(x, w))
    strict = grade == "strict"
    for variant in ("C4T4", "C6T3"):
        verdicts.append(check_sc_weight(x, w, variant, strict=strict, table=table))
    if grade == "strict" and x.num_vertices == 1 and _is_unit(w):
        gens = tuple(f"g{i + 1}" for i in range(x.num_edges()))
        pres = Presentation(gens, tuple(Word(b) for b in x.cells))
        verdicts.append(check_few_occurrences(pres, table))
    for v in verdicts:
        if v.holds:
            return v
    return None
