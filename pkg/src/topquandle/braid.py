"""Braid words and the right action of B_n on n-tuples of quandle elements.

A word is a strand count plus a list of signed generator indices: ``+i`` is
sigma_i and ``-i`` its inverse.  Words act left to right.  The generator
sigma_i sends ``(.., x_i, x_{i+1}, ..)`` to ``(.., x_{i+1}, x_i * x_{i+1}, ..)``.

Text form::

    word   := header? letter*        (at least one letter without a header)
    header := "B" int ":"
    letter := "s" int ("^" signed-int)? | signed-int
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np


class BraidError(ValueError):
    pass


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(int(e) for e in self.letters)
        if self.strands < 1:
            raise BraidError(f"strand count must be positive, got {self.strands}")
        for e in letters:
            if e == 0:
                raise BraidError("zero is not a braid letter")
            if abs(e) > self.strands - 1:
                raise BraidError(f"letter {e} out of range for {self.strands} strands")
        object.__setattr__(self, "letters", letters)

    def __str__(self):
        return format_braid(self)

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if not isinstance(other, BraidWord):
            return NotImplemented
        if other.strands != self.strands:
            raise BraidError(f"cannot multiply words on {self.strands} and {other.strands} strands")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-e for e in reversed(self.letters)))

    def permutation(self) -> list[int]:
        """perm[j] = bottom position of the strand that ends at top position j."""
        perm = list(range(self.strands))
        for e in self.letters:
            i = abs(e) - 1
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        return perm


_HEADER = re.compile(r"^\s*B\s*(\d+)\s*:")
_GEN = re.compile(r"^s(\d+)(?:\^([+-]?\d+))?$")
_INT = re.compile(r"^[+-]?\d+$")


def parse_braid(text: str) -> BraidWord:
    header = _HEADER.match(text)
    strands = None
    body = text
    if header:
        strands = int(header.group(1))
        body = text[header.end():]
    letters = []
    for tok in body.split():
        m = _GEN.match(tok)
        if m:
            idx = int(m.group(1))
            power = int(m.group(2)) if m.group(2) is not None else 1
            if idx == 0:
                raise BraidError(f"generator index must be positive in {tok!r}")
            if power == 0:
                raise BraidError(f"zero exponent in {tok!r}")
            letters.extend([idx if power > 0 else -idx] * abs(power))
        elif _INT.match(tok):
            e = int(tok)
            if e == 0:
                raise BraidError("zero is not a braid letter")
            letters.append(e)
        else:
            raise BraidError(f"malformed token {tok!r}")
    if strands is None:
        if not letters:
            raise BraidError("a word without a 'Bn:' header needs at least one letter")
        strands = max(abs(e) for e in letters) + 1
    return BraidWord(strands, tuple(letters))


def format_braid(word: BraidWord) -> str:
    parts = []
    k = 0
    letters = word.letters
    while k < len(letters):
        e = letters[k]
        run = 1
        while k + run < len(letters) and letters[k + run] == e:
            run += 1
        power = run if e > 0 else -run
        parts.append(f"s{abs(e)}" if power == 1 else f"s{abs(e)}^{power}")
        k += run
    return f"B{word.strands}:" + ("" if not parts else " " + " ".join(parts))


def _strand_axis(x, q):
    return x.ndim - getattr(q, "point_ndim", 0) - 1


def generator_action(i: int, x, q):
    """sigma_i on the tuple x (strand index i is 1-based)."""
    x = np.asarray(x)
    y = np.moveaxis(x, _strand_axis(x, q), 0).copy()
    a, b = y[i - 1].copy(), y[i]
    y[i - 1] = b
    y[i] = q.apply(a, b)
    return np.moveaxis(y, 0, _strand_axis(x, q))


def inverse_generator_action(i: int, x, q):
    """sigma_i^-1: (y_i, y_{i+1}) -> (y_{i+1} /b y_i, y_i), /b the inverse right translation."""
    x = np.asarray(x)
    y = np.moveaxis(x, _strand_axis(x, q), 0).copy()
    a, b = y[i - 1].copy(), y[i]
    y[i - 1] = q.apply_inverse(b, a)
    y[i] = a
    return np.moveaxis(y, 0, _strand_axis(x, q))


def act(word: BraidWord, x, q):
    """Apply the word to a tuple (or a stack of tuples) left to right.

    ``x`` has the strand axis just before the point axes of ``q``, so for
    finite quandles an integer array ``(..., n)`` and for geometric ones
    ``(..., n, *point_shape)``.
    """
    x = np.asarray(x)
    axis = _strand_axis(x, q)
    if axis < 0 or x.shape[axis] != word.strands:
        raise BraidError(f"tuple length does not match {word.strands} strands")
    y = np.moveaxis(x, axis, 0).copy()
    for e in word.letters:
        i = abs(e) - 1
        a, b = y[i].copy(), y[i + 1].copy()
        if e > 0:
            y[i] = b
            y[i + 1] = q.apply(a, b)
        else:
            y[i] = q.apply_inverse(b, a)
            y[i + 1] = a
    return np.moveaxis(y, 0, axis)


def conjugate(word: BraidWord, by: BraidWord) -> BraidWord:
    """by^-1 . word . by, without any free reduction."""
    if by.strands != word.strands:
        raise BraidError(f"conjugator has {by.strands} strands, word has {word.strands}")
    return by.inverse() * word * by


def stabilize(word: BraidWord, sign: int = 1) -> BraidWord:
    """Markov stabilisation: embed in B_{n+1} and append sigma_n^{+-1}."""
    if sign not in (1, -1):
        raise BraidError("stabilisation sign must be +1 or -1")
    n = word.strands
    return BraidWord(n + 1, word.letters + (sign * n,))


def closure_component_count(word: BraidWord) -> int:
    perm = word.permutation()
    seen = [False] * word.strands
    cycles = 0
    for start in range(word.strands):
        if not seen[start]:
            cycles += 1
            j = start
            while not seen[j]:
                seen[j] = True
                j = perm[j]
    return cycles


def disjoint_sum_word(w1: BraidWord, w2: BraidWord) -> BraidWord:
    """The split union: w2's generators shifted past w1's strands."""
    shift = w1.strands
    return BraidWord(w1.strands + w2.strands,
                     w1.letters + tuple(e + shift if e > 0 else e - shift for e in w2.letters))


def random_word(rng, strands: int, length: int) -> BraidWord:
    if strands < 2:
        return BraidWord(strands, ())
    gens = rng.integers(1, strands, size=length)
    signs = rng.choice([-1, 1], size=length)
    return BraidWord(strands, tuple(int(g * s) for g, s in zip(gens, signs)))


TREFOIL = BraidWord(2, (-1, -1, -1))
FIGURE_EIGHT = BraidWord(3, (1, -2, 1, -2))
HOPF = BraidWord(2, (1, 1))
