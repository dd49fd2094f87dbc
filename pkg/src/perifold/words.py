"""Free-group words and group presentations.

A letter is a nonzero int: ``+k`` is generator ``k-1`` read forward, ``-k``
its inverse.  Words are tuples of letters; presentations store their relators
fully expanded (powers flattened) and cyclically reduced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class WordError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]

    def __post_init__(self):
        if any(x == 0 for x in self.letters):
            raise WordError("letters must be nonzero")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)


def word(letters) -> Word:
    return Word(tuple(letters))


def inverse(w: Word) -> Word:
    return Word(tuple(-x for x in reversed(w.letters)))


def concat(u: Word, v: Word) -> Word:
    return Word(u.letters + v.letters)


def power(w: Word, n: int) -> Word:
    if n < 0:
        return power(inverse(w), -n)
    return Word(w.letters * n)


def rotate(w: Word, k: int) -> Word:
    if not w.letters:
        return w
    k %= len(w.letters)
    return Word(w.letters[k:] + w.letters[:k])


def free_reduce(w: Word) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    out: list[int] = []
    for x in w.letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return Word(tuple(out))


def is_freely_reduced(w: Word) -> bool:
    return all(a != -b for a, b in zip(w.letters, w.letters[1:]))


def cyclic_reduce(w: Word) -> Word:
    """Freely reduce, then strip conjugating prefix/suffix pairs."""
    v = free_reduce(w).letters
    i, j = 0, len(v)
    while j - i >= 2 and v[i] == -v[j - 1]:
        i += 1
        j -= 1
    return Word(v[i:j])


def is_cyclically_reduced(w: Word) -> bool:
    v = w.letters
    if not is_freely_reduced(w):
        return False
    return len(v) < 2 or v[0] != -v[-1]


def period_exponent(w: Word) -> tuple[Word, int]:
    """Write w as period**exponent with the exponent maximal.

    Requires a nonempty cyclically reduced word.
    """
    if not w.letters:
        raise WordError("empty word has no period")
    m = len(w.letters)
    for p in range(1, m + 1):
        if m % p == 0 and w.letters == w.letters[:p] * (m // p):
            return Word(w.letters[:p]), m // p
    raise AssertionError("unreachable")


def cyclically_conjugate(u: Word, v: Word) -> bool:
    """True iff u is a cyclic rotation of v or of v**-1 (inputs cyclically reduced)."""
    if len(u) != len(v):
        return False
    if not u.letters:
        return True
    doubled = v.letters + v.letters
    inv = inverse(v).letters
    doubled_inv = inv + inv
    n = len(u)
    return any(
        doubled[k : k + n] == u.letters or doubled_inv[k : k + n] == u.letters
        for k in range(n)
    )


_NAME_RE = re.compile(r"[A-Za-z0-9_]+")


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    # the user's original spellings and any normalization notes are kept for
    # echo only and do not participate in equality
    relator_sources: tuple[str, ...] = field(default=(), compare=False)
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise WordError("generator names must be distinct")
        for name in self.generators:
            if not _NAME_RE.fullmatch(name):
                raise WordError(f"invalid generator name {name!r}")
        ngen = len(self.generators)
        for r in self.relators:
            if not r.letters:
                raise WordError("empty relator")
            if not is_cyclically_reduced(r):
                raise WordError("relators must be cyclically reduced")
            if any(abs(x) > ngen for x in r.letters):
                raise WordError("relator uses unknown generator")

    def generator_index(self, name: str) -> int:
        return self.generators.index(name)


def generator_occurrences(p: Presentation) -> dict[str, int]:
    """Occurrences of each generator (either orientation) across all relators."""
    counts = {g: 0 for g in p.generators}
    for r in p.relators:
        for x in r.letters:
            counts[p.generators[abs(x) - 1]] += 1
    return counts


def render_word(w: Word, generators) -> str:
    """Space-separated token form, runs collapsed into powers."""
    if not w.letters:
        return ""
    toks: list[str] = []
    i = 0
    letters = w.letters
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        name = generators[abs(letters[i]) - 1]
        exp = (j - i) * (1 if letters[i] > 0 else -1)
        toks.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return " ".join(toks)


# --- word / presentation parsing -------------------------------------------
#
# Token grammar: name | name^<int> | name^-<int>, plus parenthesised groups
# `( <word> )^<int>`.  Tokens are whitespace-separated.


def _tokenize(text: str, line: int, col0: int) -> list[tuple[str, int]]:
    toks = []
    col = col0
    for piece in re.split(r"(\s+|\(|\))", text):
        if piece is None or piece == "":
            continue
        if not piece.isspace():
            toks.append((piece, col))
        col += len(piece)
    return toks


def _parse_word_tokens(toks, pos, gen_index, line, closing=False):
    letters: list[int] = []
    while pos < len(toks):
        tok, col = toks[pos]
        if tok == ")":
            if not closing:
                raise ParseError("unbalanced ')'", line, col)
            return letters, pos
        if tok == "(":
            inner, pos = _parse_word_tokens(toks, pos + 1, gen_index, line, closing=True)
            if pos >= len(toks) or toks[pos][0] != ")":
                raise ParseError("missing ')'", line, col)
            pos += 1
            exp = 1
            if pos < len(toks) and toks[pos][0].startswith("^"):
                exp = _parse_exponent(toks[pos][0], line, toks[pos][1])
                pos += 1
            letters.extend(power(Word(tuple(inner)), exp).letters)
            continue
        name, caret, exp_s = tok.partition("^")
        if not _NAME_RE.fullmatch(name):
            raise ParseError(f"bad token {tok!r}", line, col)
        if name not in gen_index:
            raise ParseError(f"unknown generator {name!r}", line, col)
        exp = _parse_exponent(caret + exp_s, line, col) if caret else 1
        base = gen_index[name] + 1
        letters.extend(power(Word((base,)), exp).letters)
        pos += 1
    if closing:
        raise ParseError("missing ')'", line, 0)
    return letters, pos


def _parse_exponent(s: str, line: int, col: int) -> int:
    if not s.startswith("^"):
        raise ParseError("expected '^'", line, col)
    try:
        return int(s[1:])
    except ValueError:
        raise ParseError(f"bad exponent {s[1:]!r}", line, col) from None


def parse_word(text: str, generators, line: int = 1) -> Word:
    gen_index = {g: i for i, g in enumerate(generators)}
    letters, _ = _parse_word_tokens(_tokenize(text, line, 1), 0, gen_index, line)
    return Word(tuple(letters))


def presentation_lines(text: str):
    """Split input into (lineno, directive, rest) triples; '/' also separates lines."""
    out = []
    for lineno, raw in enumerate(text.splitlines() or [text], start=1):
        raw = raw.split("#", 1)[0]
        for part in raw.split("/"):
            part = part.strip()
            if not part:
                continue
            head, _, rest = part.partition(" ")
            out.append((lineno, head, rest.strip()))
    return out


def parse_presentation(text: str) -> Presentation:
    """Parse `gens .. / rel ..` source text into a normalized Presentation.

    Relators are expanded and cyclically reduced; a warning is recorded when
    reduction changed the input.  Weight/word directives (the wider file
    grammar) are skipped here.
    """
    generators: tuple[str, ...] | None = None
    relators: list[Word] = []
    sources: list[str] = []
    warnings: list[str] = []
    for lineno, head, rest in presentation_lines(text):
        if head == "gens":
            if generators is not None:
                raise ParseError("duplicate gens line", lineno, 1)
            names = rest.split()
            if not names:
                raise ParseError("gens line needs at least one name", lineno, 1)
            for n in names:
                if not _NAME_RE.fullmatch(n):
                    raise ParseError(f"invalid generator name {n!r}", lineno, 1)
            if len(set(names)) != len(names):
                raise ParseError("duplicate generator name", lineno, 1)
            generators = tuple(names)
        elif head == "rel":
            if generators is None:
                raise ParseError("rel before gens", lineno, 1)
            w = parse_word(rest, generators, line=lineno)
            reduced = cyclic_reduce(w)
            if not reduced.letters:
                raise ParseError("relator is trivial after reduction", lineno, 1)
            if reduced != w:
                warnings.append(
                    f"relator {rest!r} was not cyclically reduced; using"
                    f" {render_word(reduced, generators)!r}"
                )
            relators.append(reduced)
            sources.append(rest)
        elif head in ("weights", "words"):
            continue
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, 1)
    if generators is None:
        raise ParseError("missing gens line", 1, 1)
    return Presentation(generators, tuple(relators), tuple(sources), tuple(warnings))
