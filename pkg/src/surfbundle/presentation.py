"""Mapping-torus presentations of genus-two surface bundles."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Tuple

from .mcg import (
    FIBER_GENERATORS,
    LABELS,
    SURFACE_RELATOR,
    T,
    GroupWord,
    TwistWord,
    WordError,
    automorphism_of,
    format_letter,
    free_reduce,
    invert,
)


class FiberType(enum.Enum):
    CLOSED = "closed"
    PUNCTURED = "punctured"

    @classmethod
    def parse(cls, text: str) -> "FiberType":
        text = text.strip().lower()
        if text in ("once_punctured", "once-punctured"):
            return cls.PUNCTURED
        return cls(text)


@dataclass(frozen=True)
class Presentation:
    """Generators are stable integer ids; relators are freely reduced words in them.

    Ids keep their meaning when generators are eliminated, so ``labels`` maps
    ids to display names (defaults to a1..a4, t).
    """

    generators: Tuple[int, ...]
    relators: Tuple[GroupWord, ...]
    labels: Mapping[int, str] = field(default_factory=lambda: dict(LABELS), compare=False)

    def __post_init__(self):
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise WordError("duplicate generator")
        rels = []
        for r in self.relators:
            r = free_reduce(r)
            for x in r:
                if abs(x) not in gens:
                    raise WordError(f"relator letter {format_letter(x, self.labels)} is not a generator")
            if r:
                rels.append(r)
        object.__setattr__(self, "relators", tuple(rels))

    @classmethod
    def parse(cls, generators: Sequence[str], relators: Iterable[str]) -> "Presentation":
        """Build from names, e.g. ``Presentation.parse(["x", "y"], ["x y x^-1 y^-1"])``.

        Relator tokens are ``name`` or ``name^k``; ids follow the order of
        ``generators``.
        """
        ids = {name: k for k, name in enumerate(generators, 1)}
        words = [parse_group_word(r, ids) for r in relators]
        return cls(tuple(ids.values()), tuple(words), {k: n for n, k in ids.items()})

    def label(self, g: int) -> str:
        return self.labels.get(g, f"x{g}")

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def to_json(self) -> dict:
        return {
            "generators": [self.label(g) for g in self.generators],
            "relators": [[format_letter(x, self.labels) for x in r] for r in self.relators],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Presentation":
        names = data["generators"]
        if set(names) <= set(LABELS.values()):
            # keep the global a1 < ... < t ids so eliminated generators leave gaps
            ids = {v: k for k, v in LABELS.items() if v in names}
        else:
            ids = {name: k for k, name in enumerate(names, 1)}
        rels = [parse_group_word(" ".join(r), ids) for r in data["relators"]]
        gens = tuple(ids[name] for name in data["generators"])
        return cls(gens, tuple(rels), {k: n for n, k in ids.items()})

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def __str__(self) -> str:
        gens = ", ".join(self.label(g) for g in self.generators)
        rels = ", ".join(" ".join(format_letter(x, self.labels) for x in r) for r in self.relators)
        return f"< {gens} | {rels} >"


def parse_group_word(text: str, ids: Mapping[str, int]) -> GroupWord:
    out = []
    for token in text.split():
        name, _, exp = token.partition("^")
        if name not in ids:
            raise WordError(f"unknown generator {name!r}")
        try:
            k = int(exp) if exp else 1
        except ValueError:
            raise WordError(f"malformed token {token!r}") from None
        out.extend([ids[name] if k > 0 else -ids[name]] * abs(k))
    return free_reduce(out)


def bundle_presentation(word: TwistWord, fiber: FiberType = FiberType.CLOSED) -> Presentation:
    """Relators t^-1 a_i t Phi(a_i)^-1, plus [a1,a2][a3,a4]^-1 for a closed fiber."""
    phi = automorphism_of(word)
    relators = [free_reduce((-T, g, T) + invert(phi.image(g))) for g in FIBER_GENERATORS]
    if fiber is FiberType.CLOSED:
        relators.append(SURFACE_RELATOR)
    return Presentation(FIBER_GENERATORS + (T,), tuple(relators))
