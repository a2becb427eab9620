"""Reduced words of a finitely generated free group.

A word is a sequence of signed generator indices: +i stands for the i-th
generator, -i for its inverse (1-based, up to ``rank``).  Every ``Word`` is
kept in reduced normal form, so equality of words is equality in the free
group.  Letters are ordered x1 < x1^-1 < x2 < x2^-1 < ..., and words compare
by length first, then lexicographically, which fixes the enumeration order
of balls.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .errors import RankMismatchError, SizeCapError, WordSyntaxError


def reduce_letters(letters: Iterable[int], rank: int) -> tuple[int, ...]:
    """Free reduction: cancel adjacent inverse pairs until none remain."""
    if rank < 1:
        raise WordSyntaxError(f"rank must be positive, got {rank}")
    out: list[int] = []
    for s in letters:
        if not isinstance(s, int) or s == 0 or abs(s) > rank:
            raise WordSyntaxError(f"letter {s!r} out of range for rank {rank}")
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def _letter_key(s: int) -> int:
    # x1 < x1^-1 < x2 < x2^-1 < ...
    return 2 * (abs(s) - 1) + (0 if s > 0 else 1)


class Word:
    """An element of the free group of the given rank, in reduced form."""

    __slots__ = ("rank", "letters", "_hash")

    def __init__(self, rank: int, letters: Iterable[int] = ()):
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "letters", reduce_letters(letters, rank))
        object.__setattr__(self, "_hash", hash((rank, self.letters)))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def identity(cls, rank: int) -> Word:
        return cls(rank, ())

    @classmethod
    def generator(cls, rank: int, i: int) -> Word:
        if not 1 <= i <= rank:
            raise WordSyntaxError(f"generator index {i} out of range for rank {rank}")
        return cls(rank, (i,))

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.rank == other.rank
            and self.letters == other.letters
        )

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(_letter_key(s) for s in self.letters))

    def __lt__(self, other: Word) -> bool:
        return self.sort_key() < other.sort_key()

    def __mul__(self, other: Word) -> Word:
        if self.rank != other.rank:
            raise RankMismatchError(
                f"cannot multiply words of rank {self.rank} and {other.rank}"
            )
        return Word(self.rank, self.letters + other.letters)

    def inverse(self) -> Word:
        return Word(self.rank, tuple(-s for s in reversed(self.letters)))

    def __pow__(self, n: int) -> Word:
        if n < 0:
            return self.inverse() ** (-n)
        out = Word.identity(self.rank)
        for _ in range(n):
            out = out * self
        return out

    def conjugated(self, c: Word) -> Word:
        """c^-1 * self * c."""
        if self.rank != c.rank:
            raise RankMismatchError(
                f"cannot conjugate across ranks {self.rank} and {c.rank}"
            )
        return c.inverse() * self * c

    def __repr__(self) -> str:
        return f"Word({self.rank}, {self.to_text()!r})"

    def to_text(self) -> str:
        """Canonical text form: runs collapsed with ^k, uppercase = inverse."""
        if not self.letters:
            return "e"
        parts = []
        i = 0
        while i < len(self.letters):
            s = self.letters[i]
            j = i
            while j < len(self.letters) and self.letters[j] == s:
                j += 1
            run = j - i
            if self.rank <= 2:
                name = "xy"[abs(s) - 1]
            else:
                name = f"x{abs(s)}"
            if s < 0:
                name = name.upper()
            parts.append(name if run == 1 else f"{name}^{run}")
            i = j
        return "".join(parts)


_TOKEN = re.compile(r"\s+|\*|(?P<open>\()|(?P<close>\))|(?P<letter>[xXyY][0-9]*)|(?P<pow>\^-?[0-9]+)")


def parse_word(text: str, rank: int) -> Word:
    """Parse word text: letters x1/X1 (uppercase = inverse), x/y shorthand for
    rank <= 2, ^k powers, optional (...)^k grouping; reduces on input."""
    text = text.strip()
    if text in ("e", "1", ""):
        return Word.identity(rank)

    def letter_index(tok: str) -> int:
        name, digits = tok[0], tok[1:]
        if digits:
            if name in ("y", "Y"):
                raise WordSyntaxError(f"bad letter {tok!r}: only x takes an index")
            i = int(digits)
        else:
            if name in ("x", "X"):
                i = 1
            else:
                i = 2
            if rank > 2:
                raise WordSyntaxError(
                    f"shorthand letter {tok!r} needs rank <= 2, got rank {rank}"
                )
        if not 1 <= i <= rank:
            raise WordSyntaxError(f"letter {tok!r} out of range for rank {rank}")
        return i if name.islower() else -i

    # Each frame is a letter list; '(' pushes a frame, ')' pops and splices.
    stack: list[list[int]] = [[]]
    last_group: list[int] | None = None
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise WordSyntaxError(f"cannot parse word at ...{text[pos:]!r}")
        pos = m.end()
        if m.lastgroup is None:
            continue
        if m.lastgroup == "open":
            stack.append([])
            last_group = None
        elif m.lastgroup == "close":
            if len(stack) == 1:
                raise WordSyntaxError(f"unbalanced ')' in {text!r}")
            last_group = stack.pop()
            stack[-1].extend(last_group)
        elif m.lastgroup == "letter":
            s = letter_index(m.group())
            stack[-1].append(s)
            last_group = [s]
        else:  # power applies to the preceding letter or group
            if last_group is None:
                raise WordSyntaxError(f"dangling power in {text!r}")
            k = int(m.group()[1:])
            base = list(last_group)
            repl: list[int] = []
            if k >= 0:
                repl = base * k
            else:
                repl = [-s for s in reversed(base)] * (-k)
            del stack[-1][len(stack[-1]) - len(base):]
            stack[-1].extend(repl)
            last_group = None
    if len(stack) != 1:
        raise WordSyntaxError(f"unbalanced '(' in {text!r}")
    return Word(rank, stack[0])


def ball_size(rank: int, radius: int) -> int:
    """1 + sum_{l=1..r} 2n(2n-1)^(l-1) reduced words of length <= r."""
    n = rank
    return 1 + sum(2 * n * (2 * n - 1) ** (l - 1) for l in range(1, radius + 1))


def ball(rank: int, radius: int, cap: int = 200_000) -> list[Word]:
    """All reduced words of length <= radius, length-major then lexicographic."""
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    if ball_size(rank, radius) > cap:
        raise SizeCapError(
            f"ball(rank={rank}, radius={radius}) has {ball_size(rank, radius)} words,"
            f" exceeding the cap of {cap}",
            cap,
        )
    alphabet = [s for i in range(1, rank + 1) for s in (i, -i)]
    out = [Word.identity(rank)]
    layer: list[tuple[int, ...]] = [()]
    for _ in range(radius):
        new_layer = []
        for prefix in layer:
            for s in alphabet:
                if prefix and prefix[-1] == -s:
                    continue
                new_layer.append(prefix + (s,))
        out.extend(Word(rank, w) for w in new_layer)
        layer = new_layer
    return out


class GenImages:
    """Images of the free generators in a target group: the homomorphism
    F -> H sending x_i to images[i-1].

    ``group`` only needs ``identity``, ``mul`` and ``inv``; both enumerated
    finite groups and permutation targets qualify.
    """

    __slots__ = ("group", "images", "_inverses")

    def __init__(self, group, images: Sequence):
        self.group = group
        self.images = tuple(images)
        if not self.images:
            raise ValueError("GenImages needs at least one generator image")
        self._inverses = tuple(group.inv(h) for h in self.images)

    @property
    def rank(self) -> int:
        return len(self.images)

    def __repr__(self) -> str:
        return f"GenImages({getattr(self.group, 'label', self.group)!r}, {self.images!r})"


def evaluate(word: Word, gi: GenImages):
    """Image of the word under the homomorphism determined by gi."""
    if word.rank != gi.rank:
        raise RankMismatchError(
            f"word rank {word.rank} does not match {gi.rank} generator images"
        )
    g = gi.group
    acc = g.identity
    for s in word.letters:
        h = gi.images[s - 1] if s > 0 else gi._inverses[-s - 1]
        acc = g.mul(acc, h)
    return acc
