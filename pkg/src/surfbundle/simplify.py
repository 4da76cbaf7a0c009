"""
Rank bounds for finitely presented groups.

Upper bounds come from Tietze elimination: a relator in which some generator
occurs exactly once can be solved for that generator, which is then
substituted away. Lower bounds come from the abelianization and from
nonabelian permutation representations.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from .homology import HomologySummary, homology_of
from .mcg import GroupWord, TwistWord, cyclic_reduce, format_group_word, free_reduce, invert
from .presentation import FiberType, Presentation, bundle_presentation
from .quotients import DEFAULT_MAX_PRIME, QuotientWitness, find_witness, nonabelian_witness  # noqa: F401

log = logging.getLogger(__name__)

EXACT, BOUNDED, UNKNOWN = "exact", "bounded", "unknown"

@dataclass(frozen=True)
class Budgets:
    max_steps: int = 1000
    max_letters: int = 10**6
    max_degree: int = 5
    witness_nodes: int = 200_000
    max_prime: int = DEFAULT_MAX_PRIME
    # conjugate monodromies tried when the direct presentation leaves a gap
    conjugator_length: int = 3
    conjugate_attempts: int = 20_000
    # Nielsen moves tried on a stalled presentation
    nielsen_depth: int = 3
    nielsen_attempts: int = 5_000


DEFAULT_BUDGETS = Budgets()


@dataclass(frozen=True)
class TietzeStep:
    generator: int
    relator_index: int
    substitution: GroupWord


@dataclass(frozen=True)
class SimplificationTrace:
    initial: Presentation
    steps: Tuple[TietzeStep, ...]
    final: Presentation
    truncated: bool = False

    def to_json(self) -> dict:
        labels = self.initial.labels
        return {
            "initial": self.initial.to_json(),
            "steps": [
                {
                    "eliminated": labels.get(s.generator, f"x{s.generator}"),
                    "relator_index": s.relator_index,
                    "substitution": format_group_word(s.substitution, labels).split(),
                }
                for s in self.steps
            ],
            "final": self.final.to_json(),
            "truncated": self.truncated,
        }


def _substitute(word: GroupWord, g: int, sub: GroupWord, sub_inv: GroupWord) -> GroupWord:
    if g not in word and -g not in word:
        return cyclic_reduce(word)
    out = []
    for x in word:
        if x == g:
            out.extend(sub)
        elif x == -g:
            out.extend(sub_inv)
        else:
            out.append(x)
    return cyclic_reduce(out)


def _solve(relator: GroupWord, g: int) -> GroupWord:
    """Express ``g`` from ``relator = u g^s v`` (``g`` occurring once)."""
    pos = next(k for k, x in enumerate(relator) if abs(x) == g)
    u, v = relator[:pos], relator[pos + 1:]
    if relator[pos] > 0:
        return free_reduce(invert(u) + invert(v))
    return free_reduce(v + u)


def apply_step(p: Presentation, step: TietzeStep) -> Presentation:
    """Drop ``step.generator`` and its solved relator, substituting elsewhere."""
    g, sub = step.generator, step.substitution
    sub_inv = invert(sub)
    relators = [
        _substitute(r, g, sub, sub_inv)
        for k, r in enumerate(p.relators)
        if k != step.relator_index
    ]
    gens = tuple(x for x in p.generators if x != g)
    return Presentation(gens, tuple(r for r in relators if r), p.labels)


def _find_step(p: Presentation) -> Optional[TietzeStep]:
    best = None
    for k, r in enumerate(p.relators):
        counts: Dict[int, int] = {}
        for x in r:
            counts[abs(x)] = counts.get(abs(x), 0) + 1
        for g, c in counts.items():
            if c == 1:
                key = (-g, len(r), k)
                if best is None or key < best:
                    best = key
    if best is None:
        return None
    g, k = -best[0], best[2]
    return TietzeStep(g, k, _solve(p.relators[k], g))


def tietze_eliminate(p: Presentation, budgets: Budgets = DEFAULT_BUDGETS) -> SimplificationTrace:
    """Greedy generator elimination.

    Repeatedly eliminates the highest generator id occurring exactly once in
    some relator, solving the shortest such relator (lowest index on ties),
    and substitutes. On a bundle presentation this removes a4, a3, a2 in turn
    whenever each occurs once in the relator of the generator below it.
    Stops at a fixpoint, after ``budgets.max_steps`` steps, or when the total
    relator length would exceed ``budgets.max_letters``; the last two return a
    trace flagged ``truncated`` whose final presentation is still valid.
    """
    current = p
    steps: List[TietzeStep] = []
    truncated = False
    while True:
        step = _find_step(current)
        if step is None:
            break
        if len(steps) >= budgets.max_steps:
            truncated = True
            break
        nxt = apply_step(current, step)
        if nxt.total_length() > budgets.max_letters:
            truncated = True
            break
        steps.append(step)
        current = nxt
    return SimplificationTrace(p, tuple(steps), current, truncated)


def replay(initial: Presentation, steps: Sequence[TietzeStep]) -> Presentation:
    current = initial
    for step in steps:
        r = current.relators[step.relator_index]
        occurrences = [x for x in r if abs(x) == step.generator]
        if len(occurrences) != 1:
            raise ValueError(f"generator {step.generator} does not occur exactly once in relator {step.relator_index}")
        current = apply_step(current, step)
    return current


def rank_upper_bound(p: Presentation, budgets: Budgets = DEFAULT_BUDGETS) -> int:
    return len(tietze_eliminate(p, budgets).final.generators)


# --------------------------------------------------------------- Nielsen moves

def nielsen_move(p: Presentation, x: int, y: int, s: int, left: bool) -> Tuple[Presentation, int, str]:
    """Replace generator ``x`` by ``u = y^s x`` (left) or ``u = x y^s``.

    Returns the rewritten presentation, the fresh id of ``u`` and the
    definition of ``u`` in the old generators.
    """
    u = max(max(p.generators), max(p.labels, default=0)) + 1
    old_x = (-s * y, u) if left else (u, -s * y)
    old_x_inv = invert(old_x)
    relators = [_substitute(r, x, old_x, old_x_inv) for r in p.relators]
    labels = dict(p.labels)
    labels[u] = f"u{sum(1 for name in labels.values() if name.startswith('u')) + 1}"
    gens = tuple(u if g == x else g for g in p.generators)
    defn = (s * y, x) if left else (x, s * y)
    return Presentation(gens, tuple(relators), labels), u, format_group_word(defn, p.labels)


def _moves(p: Presentation):
    for x, y in itertools.permutations(p.generators, 2):
        for sign in (1, -1):
            for left in (True, False):
                yield x, y, sign, left


def nielsen_search(p: Presentation, target: int, budgets: Budgets = DEFAULT_BUDGETS
                   ) -> Tuple[Presentation, Tuple[Tuple[str, str], ...]]:
    """Breadth-first search over Nielsen moves, each followed by greedy
    elimination, for a presentation of the same group on fewer generators.

    Restarts from every improvement and stops at ``target`` generators or
    when ``budgets.nielsen_attempts`` moves have been tried. Returns the best
    presentation and the definitions of the generators introduced for it.
    """
    best, defs = p, ()
    attempts = budgets.nielsen_attempts
    improved = True
    while improved and len(best.generators) > target:
        improved = False
        frontier = [(best, defs)]
        for _ in range(budgets.nielsen_depth):
            nxt = []
            for q, q_defs in frontier:
                for move in _moves(q):
                    if attempts <= 0:
                        return best, defs
                    attempts -= 1
                    moved, u, defn = nielsen_move(q, *move)
                    trace = tietze_eliminate(moved, budgets)
                    if trace.truncated:
                        continue
                    d = q_defs + ((moved.label(u), defn),)
                    if len(trace.final.generators) < len(best.generators):
                        best, defs, improved = trace.final, d, True
                        break
                    nxt.append((trace.final, d))
                if improved:
                    break
            if improved:
                break
            frontier = nxt
    return best, defs


# --------------------------------------------------------------- certificates

@dataclass(frozen=True)
class RankCertificate:
    upper: int
    lower: int
    status: str
    witness_presentation: Presentation
    witness_quotient: Optional[QuotientWitness] = None
    homology: Optional[HomologySummary] = None
    # set when the upper bound came from a conjugate or inverse monodromy
    witness_monodromy: Optional[str] = None
    truncated: bool = False
    # generators introduced by Nielsen moves, (label, word in older generators)
    definitions: Tuple[Tuple[str, str], ...] = ()

    def to_json(self) -> dict:
        out = {
            "upper": self.upper,
            "lower": self.lower,
            "status": self.status,
            "witness_presentation": self.witness_presentation.to_json(),
            "witness_quotient": self.witness_quotient.to_json() if self.witness_quotient else None,
        }
        if self.witness_monodromy is not None:
            out["witness_monodromy"] = self.witness_monodromy
        if self.definitions:
            out["definitions"] = dict(self.definitions)
        return out


def _status(lower: int, upper: int, truncated: bool) -> str:
    if lower == upper:
        return EXACT
    return UNKNOWN if truncated else BOUNDED


def _lower_bound(h: HomologySummary) -> int:
    lower = h.min_generators
    if h.betti_1 > 0:
        lower = max(lower, 1)
    return lower


def certify_rank(p: Presentation, budgets: Budgets = DEFAULT_BUDGETS) -> RankCertificate:
    """Upper bound from greedy elimination (then Nielsen moves if a gap
    remains), lower bound from H_1 and, when that is below two, a
    nonabelian finite quotient."""
    trace = tietze_eliminate(p, budgets)
    final = trace.final
    h = homology_of(p)
    lower = _lower_bound(h)
    definitions: Tuple[Tuple[str, str], ...] = ()
    # two generators is the most a finite-quotient witness can certify
    target = max(lower, 2)
    if len(final.generators) > target and not trace.truncated:
        final, definitions = nielsen_search(final, target, budgets)
    upper = len(final.generators)
    witness = None
    if lower < 2 <= upper:
        # same group, fewer generators to enumerate
        witness = find_witness(final, budgets.max_degree, budgets.witness_nodes, budgets.max_prime)
        if witness is not None:
            lower = 2
    return RankCertificate(upper, lower, _status(lower, upper, trace.truncated), final, witness, h,
                           truncated=trace.truncated, definitions=definitions)


_TWIST_LETTERS = tuple((i, e) for i in range(1, 6) for e in (1, -1))


def conjugate_monodromies(word: TwistWord, conjugator_length: int):
    """Monodromies with homeomorphic mapping tori: g w' g^-1 where w' is a
    cyclic rotation of ``word`` or of its inverse, shortest conjugators first.
    Duplicates are skipped; ``word`` itself is not yielded."""
    seen = {word}
    bases = []
    for base in (word, word.inverse()):
        letters = base.letters()
        for r in range(max(len(letters), 1)):
            bases.append(letters[r:] + letters[:r])
    for length in range(conjugator_length + 1):
        for base in bases:
            for g in itertools.product(_TWIST_LETTERS, repeat=length):
                g_inv = tuple((i, -e) for i, e in reversed(g))
                w = TwistWord.from_letters(g + base + g_inv)
                if w not in seen:
                    seen.add(w)
                    yield w


def certify_monodromy(
    word: TwistWord, fiber: FiberType = FiberType.CLOSED, budgets: Budgets = DEFAULT_BUDGETS
) -> RankCertificate:
    """Rank certificate for the bundle group of ``word``.

    When greedy elimination on the direct presentation leaves a gap, conjugate
    and inverse monodromies (whose mapping tori are homeomorphic) are tried
    for a smaller Tietze upper bound.
    """
    cert = certify_rank(bundle_presentation(word, fiber), budgets)
    if cert.upper <= cert.lower or budgets.conjugate_attempts <= 0:
        return cert
    best, best_word, truncated = cert.witness_presentation, None, cert.truncated
    for attempt, w in enumerate(conjugate_monodromies(word, budgets.conjugator_length)):
        if attempt >= budgets.conjugate_attempts:
            break
        trace = tietze_eliminate(bundle_presentation(w, fiber), budgets)
        if len(trace.final.generators) < len(best.generators):
            best, best_word, truncated = trace.final, str(w), trace.truncated
            if len(best.generators) <= max(cert.lower, 2):
                break
    if best_word is None:
        return cert
    upper = len(best.generators)
    lower = cert.lower
    witness = cert.witness_quotient
    if lower < 2 <= upper and witness is None:
        witness = find_witness(best, budgets.max_degree, budgets.witness_nodes, budgets.max_prime)
        if witness is not None:
            lower = 2
    return replace(
        cert,
        upper=upper,
        lower=lower,
        status=_status(lower, upper, truncated),
        witness_presentation=best,
        witness_quotient=witness,
        witness_monodromy=best_word,
        truncated=truncated,
        definitions=(),
    )
