"""Words in the closed surface group of genus g.

Letters are nonzero integers: ``a_i`` is ``2i - 1``, ``b_i`` is ``2i`` and a
negative letter is the inverse generator.  The defining relator is the product
of commutators ``a1 b1 A1 B1 ... ag bg Ag Bg``.  In text form lower-case tokens
are generators and upper-case tokens their inverses, e.g. ``"a1 B2 A1"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import IdentityClass, ParseError

Word = tuple[int, ...]

_TOKEN = re.compile(r"\s*([aAbB])(\d+)")


def relator(genus: int) -> Word:
    out: list[int] = []
    for i in range(1, genus + 1):
        a, b = 2 * i - 1, 2 * i
        out += [a, b, -a, -b]
    return tuple(out)


def letter_name(letter: int) -> str:
    i = (abs(letter) + 1) // 2
    base = "a" if abs(letter) % 2 == 1 else "b"
    return (base if letter > 0 else base.upper()) + str(i)


def format_word(word: Iterable[int]) -> str:
    return " ".join(letter_name(x) for x in word)


def parse_word(text: str, genus: int) -> Word:
    """Parse a word such as ``"a1 b1 A1"`` or ``"a1b1A1"``.

    The empty string and ``"1"`` denote the identity.
    """
    s = text.strip()
    if s in ("", "1", "e"):
        return ()
    pos = 0
    out: list[int] = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"bad token in word {text!r}", 1, col)
        i = int(m.group(2))
        if not 1 <= i <= genus:
            raise ParseError(f"generator index {i} out of range for genus {genus}", 1, m.start(2) + 1)
        letter = 2 * i - 1 if m.group(1) in "aA" else 2 * i
        out.append(letter if m.group(1).islower() else -letter)
        pos = m.end()
    return tuple(out)


def inverse(word: Word) -> Word:
    return tuple(-x for x in reversed(word))


def lex_key(word: Word) -> tuple[int, ...]:
    """Sort key ordering a1 < A1 < b1 < B1 < a2 < ..."""
    return tuple(2 * (abs(x) - 1) + (x < 0) for x in word)


def order_key(word: Word) -> tuple[int, tuple[int, ...]]:
    return (len(word), lex_key(word))


def free_reduce(word: Iterable[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_free_reduce(word: Iterable[int]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


@dataclass(frozen=True)
class _Tables:
    long: dict[Word, Word]   # subwords longer than half a relator -> shorter equivalent
    half: dict[Word, Word]   # half-relator subwords -> the other half, inverted
    lengths: tuple[int, ...]
    half_len: int


@lru_cache(maxsize=None)
def _tables(genus: int) -> _Tables:
    r = relator(genus)
    n = len(r)
    long: dict[Word, Word] = {}
    half: dict[Word, Word] = {}
    for rel in (r, inverse(r)):
        for k in range(n):
            rot = rel[k:] + rel[:k]
            for m in range(n // 2, n + 1):
                s, t = rot[:m], rot[m:]
                if m == n // 2:
                    half[s] = inverse(t)
                else:
                    long[s] = inverse(t)
    lengths = tuple(range(n, n // 2, -1))
    return _Tables(long, half, lengths, n // 2)


def dehn_reduce(word: Iterable[int], genus: int) -> Word:
    """Free reduction plus Dehn's algorithm; returns () exactly for the identity."""
    tb = _tables(genus)
    w = free_reduce(word)
    changed = True
    while changed:
        changed = False
        for i in range(len(w)):
            for m in tb.lengths:
                if i + m > len(w):
                    continue
                rep = tb.long.get(w[i:i + m])
                if rep is not None:
                    w = free_reduce(w[:i] + rep + w[i + m:])
                    changed = True
                    break
            if changed:
                break
    return w


def cyclic_dehn_reduce(word: Iterable[int], genus: int) -> Word:
    """Reduce a word as a cyclic word, so that no rotation admits a Dehn move."""
    tb = _tables(genus)
    w = cyclic_free_reduce(dehn_reduce(word, genus))
    changed = True
    while changed and w:
        changed = False
        n = len(w)
        ww = w + w
        for i in range(n):
            for m in tb.lengths:
                if m > n:
                    continue
                rep = tb.long.get(ww[i:i + m])
                if rep is not None:
                    rot = ww[i:i + n]
                    w = cyclic_free_reduce(dehn_reduce(rep + rot[m:], genus))
                    changed = True
                    break
            if changed:
                break
    return w


def _rotations(w: Word) -> Iterator[Word]:
    for k in range(len(w)):
        yield w[k:] + w[:k]


def _half_swaps(w: Word, genus: int) -> Iterator[Word]:
    tb = _tables(genus)
    h = tb.half_len
    n = len(w)
    if n < h:
        return
    for rot in _rotations(w):
        rep = tb.half.get(rot[:h])
        if rep is not None:
            yield rep + rot[h:]


def canonical_form(word: Iterable[int], genus: int) -> Word:
    """Canonical representative of the unoriented conjugacy class of ``word``.

    The word is cyclically reduced, then closed under half-relator swaps,
    rotations and inversion; the shortest, lexicographically least word wins.
    """
    w = cyclic_dehn_reduce(word, genus)
    if not w:
        raise IdentityClass("the identity has no closed geodesic")
    while True:
        n = len(w)
        seen: set[Word] = set()
        stack = [w, inverse(w)]
        shorter: Word | None = None
        while stack and shorter is None:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            for rot in _rotations(cur):
                seen.add(rot)
            for nxt in _half_swaps(cur, genus):
                red = cyclic_dehn_reduce(nxt, genus)
                if len(red) < n:
                    shorter = red
                    break
                if red not in seen:
                    stack.append(red)
                    stack.append(inverse(red))
        if shorter is None:
            return min(seen, key=lex_key)
        if not shorter:
            raise IdentityClass("the identity has no closed geodesic")
        w = shorter


def smallest_period(w: Word) -> int:
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return p
    return n


def primitive_root(word: Iterable[int], genus: int) -> tuple[Word, int]:
    """Canonical primitive root and exponent k with class = root^k."""
    w = canonical_form(word, genus)
    p = smallest_period(w)
    return canonical_form(w[:p], genus), len(w) // p


def reduced_words(genus: int, length: int) -> Iterator[Word]:
    """All freely reduced words of the given length, in lexicographic order."""
    letters = sorted([x for i in range(1, 2 * genus + 1) for x in (i, -i)], key=lambda x: lex_key((x,)))

    def rec(prefix: list[int]) -> Iterator[Word]:
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            prefix.append(x)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


def enumerate_class_words(genus: int, max_len: int) -> list[Word]:
    """Canonical words of all nontrivial classes of length at most ``max_len``.

    Sorted by (length, lexicographic order).
    """
    found: set[Word] = set()
    for n in range(1, max_len + 1):
        for w in reduced_words(genus, n):
            if w[0] == -w[-1]:
                continue
            # a class of length n has a canonical word that is a least rotation
            if w != min(_rotations(w), key=lex_key):
                continue
            c = canonical_form(w, genus)
            if len(c) <= max_len:
                found.add(c)
    return sorted(found, key=order_key)


@dataclass(frozen=True)
class ConjugacyClass:
    """Unoriented conjugacy class, stored by its canonical word."""

    genus: int
    word: Word

    @classmethod
    def of(cls, word: Iterable[int], genus: int) -> "ConjugacyClass":
        return cls(genus, canonical_form(word, genus))

    @classmethod
    def parse(cls, text: str, genus: int) -> "ConjugacyClass":
        return cls.of(parse_word(text, genus), genus)

    @property
    def length(self) -> int:
        return len(self.word)

    def root(self) -> tuple["ConjugacyClass", int]:
        w, k = primitive_root(self.word, self.genus)
        return ConjugacyClass(self.genus, w), k

    @property
    def is_primitive(self) -> bool:
        return smallest_period(self.word) == len(self.word)

    def power(self, k: int) -> "ConjugacyClass":
        return ConjugacyClass.of(self.word * k, self.genus)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return order_key(self.word)

    def __str__(self) -> str:
        return format_word(self.word)


def enumerate_classes(genus: int, max_len: int) -> list[ConjugacyClass]:
    """One representative per nontrivial class of canonical length <= max_len."""
    return [ConjugacyClass(genus, w) for w in enumerate_class_words(genus, max_len)]
