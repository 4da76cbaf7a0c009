"""
Dehn twist words and their action on the fundamental group of the genus-two
surface.

Group words are tuples of nonzero ints. Letter ``k`` is generator number
``k`` and ``-k`` its inverse; the fiber generators a1..a4 are 1..4 and the
stable letter t of a mapping torus is 5. Storing one letter per entry keeps
free reduction a single stack pass.

Twist words are run-length encoded: a tuple of ``(index, exponent)``
syllables with ``index`` in 1..5. The leftmost syllable is the outermost map,
so ``D2 D1`` means "apply D1 first, then D2".
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

GroupWord = Tuple[int, ...]

A1, A2, A3, A4, T = 1, 2, 3, 4, 5
FIBER_GENERATORS = (A1, A2, A3, A4)
LABELS = {A1: "a1", A2: "a2", A3: "a3", A4: "a4", T: "t"}

# [a1, a2][a3, a4]^-1 with [x, y] = x y x^-1 y^-1
SURFACE_RELATOR: GroupWord = (A1, A2, -A1, -A2, A4, A3, -A4, -A3)

NUM_TWISTS = 5


class WordError(ValueError):
    """Raised for malformed twist or group words."""


# ---------------------------------------------------------------- group words

def free_reduce(word: Iterable[int]) -> GroupWord:
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Iterable[int]) -> GroupWord:
    """Free reduction followed by cancelling inverse pairs across the ends."""
    w = free_reduce(word)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i:j + 1]


def invert(word: Sequence[int]) -> GroupWord:
    return tuple(-x for x in reversed(word))


def power(word: Sequence[int], n: int) -> GroupWord:
    if n < 0:
        word, n = invert(word), -n
    return free_reduce(tuple(word) * n)


def is_rotation(u: Sequence[int], v: Sequence[int]) -> bool:
    """True when ``v`` is a cyclic rotation of ``u``."""
    if len(u) != len(v):
        return False
    if not u:
        return True
    doubled = tuple(u) + tuple(u)
    n = len(u)
    v = tuple(v)
    return any(doubled[k:k + n] == v for k in range(n))


def are_conjugate(u: Sequence[int], v: Sequence[int]) -> bool:
    """Conjugacy test in a free group via cyclic reductions."""
    return is_rotation(cyclic_reduce(u), cyclic_reduce(v))


def format_letter(x: int, labels=LABELS) -> str:
    name = labels.get(abs(x), f"x{abs(x)}")
    return name if x > 0 else f"{name}^-1"


def format_group_word(word: Sequence[int], labels=LABELS) -> str:
    return " ".join(format_letter(x, labels) for x in word) or "1"


# ------------------------------------------------------------------ the table

def _twist_table() -> dict:
    table = {}
    for e in (1, -1):
        # (a3^-1 a1)^e
        d3 = (-A3, A1) if e > 0 else (-A1, A3)
        table[1, e] = {A2: (A2, e * A1)}
        table[2, e] = {A1: (A1, -e * A2)}
        table[3, e] = {A2: d3 + (A2,), A4: d3 + (A4,)}
        table[4, e] = {A3: (A3, e * A4)}
        table[5, e] = {A4: (A4, -e * A3)}
    return table


_TABLE = _twist_table()


def apply_twist(i: int, e: int, g: int) -> GroupWord:
    """Image of the fiber generator ``g`` under the ``e``-th power of twist ``i``.

    ``e`` must be +1 or -1; generators the twist does not move map to
    themselves.
    """
    if not 1 <= i <= NUM_TWISTS:
        raise WordError(f"twist index {i} not in 1..{NUM_TWISTS}")
    if e not in (1, -1):
        raise WordError(f"twist exponent must be +1 or -1, got {e}")
    if g not in FIBER_GENERATORS:
        raise WordError(f"{g} is not a fiber generator")
    return _TABLE[i, e].get(g, (g,))


# ------------------------------------------------------------------ twist words

_SYLLABLE = re.compile(r"D(\d+)(?:\^(-?\d+))?")


@dataclass(frozen=True)
class TwistWord:
    syllables: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        for i, k in self.syllables:
            if not 1 <= i <= NUM_TWISTS:
                raise WordError(f"twist index {i} not in 1..{NUM_TWISTS}")
            if k == 0:
                raise WordError("zero exponent in twist word")
        for (i, _), (j, _) in zip(self.syllables, self.syllables[1:]):
            if i == j:
                raise WordError("adjacent syllables share a generator; use TwistWord.normalized")

    @classmethod
    def normalized(cls, syllables: Iterable[Tuple[int, int]]) -> "TwistWord":
        """Merge adjacent equal generators and drop zero exponents."""
        out = []
        for i, k in syllables:
            if k == 0:
                continue
            if out and out[-1][0] == i:
                k += out.pop()[1]
                if k == 0:
                    continue
            out.append((i, k))
        return cls(tuple(out))

    @classmethod
    def from_letters(cls, letters: Iterable[Tuple[int, int]]) -> "TwistWord":
        return cls.normalized(letters)

    @classmethod
    def parse(cls, text: str) -> "TwistWord":
        syllables = []
        for token in text.split():
            m = _SYLLABLE.fullmatch(token)
            if m is None:
                raise WordError(f"malformed syllable {token!r}")
            i = int(m.group(1))
            k = int(m.group(2)) if m.group(2) is not None else 1
            if not 1 <= i <= NUM_TWISTS:
                raise WordError(f"twist index out of range in {token!r}")
            if k == 0:
                raise WordError(f"zero exponent in {token!r}")
            syllables.append((i, k))
        return cls.normalized(syllables)

    def __str__(self) -> str:
        return " ".join(f"D{i}" if k == 1 else f"D{i}^{k}" for i, k in self.syllables)

    def __len__(self) -> int:
        return sum(abs(k) for _, k in self.syllables)

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord.normalized(self.syllables + other.syllables)

    def letters(self) -> Tuple[Tuple[int, int], ...]:
        """Expansion into unit-exponent letters ``(index, +-1)``."""
        return tuple((i, 1 if k > 0 else -1) for i, k in self.syllables for _ in range(abs(k)))

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((i, -k) for i, k in reversed(self.syllables)))


def family_word(eps: Sequence[int], n: int) -> TwistWord:
    """The monodromy D2^e2 D1^e1 D3^e3 D4^e4 D5^n for signs ``eps = (e1, e2, e3, e4)``."""
    if len(eps) != 4 or any(e not in (1, -1) for e in eps):
        raise WordError(f"eps must be four signs, got {eps!r}")
    e1, e2, e3, e4 = eps
    return TwistWord.normalized([(2, e2), (1, e1), (3, e3), (4, e4), (5, n)])


# ------------------------------------------------------------------ automorphisms

@dataclass(frozen=True)
class SurfaceAutomorphism:
    """An endomorphism of the free group on a1..a4, given by generator images."""

    images: Tuple[GroupWord, GroupWord, GroupWord, GroupWord] = ((A1,), (A2,), (A3,), (A4,))

    def __call__(self, word: Sequence[int]) -> GroupWord:
        return apply_automorphism(self, word)

    def image(self, g: int) -> GroupWord:
        return self.images[g - 1]

    def compose(self, inner: "SurfaceAutomorphism") -> "SurfaceAutomorphism":
        """``self o inner``: apply ``inner`` first."""
        return SurfaceAutomorphism(tuple(
            self.images[w[0] - 1] if len(w) == 1 and w[0] > 0 else self(w) for w in inner.images
        ))

    def is_identity(self) -> bool:
        return self.images == IDENTITY.images


IDENTITY = SurfaceAutomorphism()


def apply_automorphism(phi: SurfaceAutomorphism, word: Sequence[int]) -> GroupWord:
    out = []
    images = phi.images
    for x in word:
        g = abs(x)
        if g not in FIBER_GENERATORS:
            raise WordError(f"letter {format_letter(x)} is not a fiber generator")
        out.extend(images[g - 1] if x > 0 else invert(images[g - 1]))
    return free_reduce(out)


def _twist_automorphism(i: int, e: int) -> SurfaceAutomorphism:
    return SurfaceAutomorphism(tuple(apply_twist(i, e, g) for g in FIBER_GENERATORS))


_TWISTS = {(i, e): _twist_automorphism(i, e) for i in range(1, NUM_TWISTS + 1) for e in (1, -1)}


def automorphism_of(word: TwistWord) -> SurfaceAutomorphism:
    phi = IDENTITY
    # Left to right: phi <- phi o Delta keeps the substituted words short.
    for letter in word.letters():
        phi = phi.compose(_TWISTS[letter])
    return phi
