"""
Finite nonabelian quotients, used as rank >= 2 certificates.

Two searches are provided. ``nonabelian_witness`` enumerates homomorphisms
into small symmetric groups. ``affine_witness`` looks for homomorphisms onto
nonabelian subgroups of the affine group AGL(1, p) = {z -> a z + b}: the
multiplicative part is a character of the abelianization and the
translation part solves a linear system over F_p built from Fox derivatives.
Groups with H_1 = Z and a nontrivial Alexander polynomial have such
quotients even when every small symmetric quotient is abelian.

Words act by composition ``x1 x2 ... xn -> f_x1 o f_x2 o ... o f_xn``.
"""
from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from math import gcd
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .mcg import GroupWord
from .presentation import Presentation

log = logging.getLogger(__name__)

MAX_SYMMETRIC_DEGREE = 6
DEFAULT_MAX_PRIME = 101


@dataclass(frozen=True)
class QuotientWitness:
    """Images of the generators as permutations of {0..degree-1}."""

    group: str
    degree: int
    images: Tuple[Tuple[int, ...], ...]  # one-line notation, per generator
    labels: Tuple[str, ...]

    def cycles(self) -> Dict[str, str]:
        return {name: cycle_notation(perm) for name, perm in zip(self.labels, self.images)}

    def to_json(self) -> dict:
        return {"group": self.group, "degree": self.degree, "images": self.cycles()}


def cycle_notation(perm: Sequence[int]) -> str:
    seen, out = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x + 1))
            x = perm[x]
        out.append("(" + " ".join(cyc) + ")")
    return "".join(out) or "()"


def evaluate(word: GroupWord, images: Dict[int, np.ndarray]) -> np.ndarray:
    """Permutation of ``word`` under generator images (id -> one-line array)."""
    d = len(next(iter(images.values())))
    state = np.arange(d)
    for x in word:
        perm = images[abs(x)]
        state = state[perm] if x > 0 else state[np.argsort(perm)]
    return state


def is_homomorphism(p: Presentation, witness: QuotientWitness) -> bool:
    images = {g: np.array(w) for g, w in zip(p.generators, witness.images)}
    identity = np.arange(witness.degree)
    return all(np.array_equal(evaluate(r, images), identity) for r in p.relators)


def has_nonabelian_image(witness: QuotientWitness) -> bool:
    imgs = [np.array(w) for w in witness.images]
    return any(not np.array_equal(a[b], b[a]) for a, b in itertools.combinations(imgs, 2))


# --------------------------------------------------------------- symmetric groups

class _SearchExhausted(Exception):
    pass


def _search_symmetric(p: Presentation, d: int, node_budget: List[int]) -> Optional[List[Tuple[int, ...]]]:
    perms = np.array(list(itertools.permutations(range(d))), dtype=np.int8)
    inverses = np.argsort(perms, axis=1).astype(np.int8)
    m = len(perms)
    gens = list(p.generators)
    pos = {g: k for k, g in enumerate(gens)}
    # each relator is checked as soon as its last generator gets an image
    checks: List[List[GroupWord]] = [[] for _ in gens]
    for r in p.relators:
        checks[max(pos[abs(x)] for x in r)].append(r)
    identity = np.arange(d, dtype=np.int8)

    def candidates(level: int, chosen: List[int]) -> np.ndarray:
        ok = np.ones(m, dtype=bool)
        g = gens[level]
        for r in checks[level]:
            state = np.tile(identity, (m, 1))
            for x in r:
                if abs(x) == g:
                    state = np.take_along_axis(state, perms if x > 0 else inverses, axis=1)
                else:
                    c = chosen[pos[abs(x)]]
                    state = state[:, perms[c] if x > 0 else inverses[c]]
            ok &= (state == identity).all(axis=1)
        return np.flatnonzero(ok)

    def nonabelian(chosen: List[int]) -> bool:
        imgs = [perms[c] for c in chosen]
        return any(not np.array_equal(a[b], b[a]) for a, b in itertools.combinations(imgs, 2))

    def dfs(level: int, chosen: List[int]):
        node_budget[0] -= 1
        if node_budget[0] < 0:
            raise _SearchExhausted
        for c in candidates(level, chosen):
            chosen.append(int(c))
            if level + 1 == len(gens):
                if nonabelian(chosen):
                    return list(chosen)
            else:
                found = dfs(level + 1, chosen)
                if found is not None:
                    return found
            chosen.pop()
        return None

    found = dfs(0, [])
    if found is None:
        return None
    return [tuple(int(v) for v in perms[c]) for c in found]


def nonabelian_witness(p: Presentation, max_symmetric_degree: int = 5,
                       node_budget: int = 200_000) -> Optional[QuotientWitness]:
    """First homomorphism to S_d (d = 3..max_symmetric_degree, then
    lexicographic order of the one-line image tuples) with nonabelian image.

    Exhaustive per degree unless ``node_budget`` search nodes run out, in
    which case None is returned.
    """
    if max_symmetric_degree > MAX_SYMMETRIC_DEGREE:
        raise ValueError(f"max_symmetric_degree {max_symmetric_degree} exceeds cap {MAX_SYMMETRIC_DEGREE}")
    if len(p.generators) < 2:
        return None
    budget = [node_budget]
    for d in range(3, max_symmetric_degree + 1):
        try:
            images = _search_symmetric(p, d, budget)
        except _SearchExhausted:
            log.debug("symmetric witness search out of budget at degree %d", d)
            return None
        if images is not None:
            return QuotientWitness(f"S{d}", d, tuple(images), tuple(p.label(g) for g in p.generators))
    return None


# --------------------------------------------------------------- affine groups

def primes(limit: int) -> Iterator[int]:
    sieve = bytearray([1]) * (limit + 1)
    for n in range(2, limit + 1):
        if sieve[n]:
            yield n
            sieve[n * n::n] = bytearray(len(sieve[n * n::n]))


def _characters(p: Presentation, q: int, budget: List[int]) -> Iterator[Tuple[int, ...]]:
    """Nontrivial homomorphisms to F_q^*, as tuples of generator images."""
    gens = p.generators
    col = {g: k for k, g in enumerate(gens)}
    sums = []
    for r in p.relators:
        row = [0] * len(gens)
        for x in r:
            row[col[abs(x)]] += 1 if x > 0 else -1
        sums.append(row)
    for alphas in itertools.product(range(1, q), repeat=len(gens)):
        budget[0] -= 1
        if budget[0] < 0:
            raise _SearchExhausted
        if all(a == 1 for a in alphas):
            continue
        if all(_char_value(row, alphas, q) == 1 for row in sums):
            yield alphas


def _char_value(exponents: Sequence[int], alphas: Sequence[int], q: int) -> int:
    v = 1
    for e, a in zip(exponents, alphas):
        if e:
            v = v * pow(a, e, q) % q
    return v


def _fox_row(r: GroupWord, alpha: Dict[int, int], col: Dict[int, int], q: int) -> List[int]:
    """Translation part of ``r`` as a linear form in the generator translations."""
    row = [0] * len(col)
    prefix = 1
    for x in r:
        a = alpha[abs(x)]
        if x > 0:
            row[col[x]] = (row[col[x]] + prefix) % q
            prefix = prefix * a % q
        else:
            prefix = prefix * pow(a, -1, q) % q
            row[col[-x]] = (row[col[-x]] - prefix) % q
    return row


def _nullspace_mod(rows: List[List[int]], n: int, q: int) -> List[List[int]]:
    m = [list(r) for r in rows]
    pivots = []
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, len(m)) if m[i][c] % q), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, q)
        m[rank] = [v * inv % q for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % q for a, b in zip(m[i], m[rank])]
        pivots.append(c)
        rank += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [0] * n
        v[free] = 1
        for i, c in enumerate(pivots):
            v[c] = -m[i][free] % q
        basis.append(v)
    return basis


def _affine_perm(a: int, b: int, q: int) -> Tuple[int, ...]:
    return tuple((a * z + b) % q for z in range(q))


def integer_weights(p: Presentation) -> Optional[Tuple[int, ...]]:
    """A nonzero homomorphism to Z as primitive integer generator weights,
    or None when the abelianization is finite."""
    gens = p.generators
    col = {g: k for k, g in enumerate(gens)}
    n = len(gens)
    rows = []
    for r in p.relators:
        row = [Fraction(0)] * n
        for x in r:
            row[col[abs(x)]] += 1 if x > 0 else -1
        rows.append(row)
    pivots: List[int] = []
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][c]
        rows[rank] = [v * inv for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(c)
        rank += 1
    free = next((c for c in range(n) if c not in pivots), None)
    if free is None:
        return None
    v = [Fraction(0)] * n
    v[free] = Fraction(1)
    for i, c in enumerate(pivots):
        v[c] = -rows[i][free]
    scale = 1
    for x in v:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    ints = [int(x * scale) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def _fox_polynomials(r: GroupWord, weights: Dict[int, int]) -> Dict[int, Dict[int, int]]:
    """Fox derivatives of ``r`` under x -> t^weight(x), as Laurent polynomials
    {generator: {exponent: coefficient}}."""
    out: Dict[int, Dict[int, int]] = {}
    e = 0
    for x in r:
        g = abs(x)
        if x > 0:
            poly = out.setdefault(g, {})
            poly[e] = poly.get(e, 0) + 1
            e += weights[g]
        else:
            e -= weights[g]
            poly = out.setdefault(g, {})
            poly[e] = poly.get(e, 0) - 1
    return out


def _weighted_affine(p: Presentation, weights: Sequence[int], max_prime: int) -> Optional[QuotientWitness]:
    """Affine quotients whose character is alpha^weight: the Alexander
    matrix evaluated at alpha mod q."""
    gens = p.generators
    col = {g: k for k, g in enumerate(gens)}
    w = dict(zip(gens, weights))
    polys = [_fox_polynomials(r, w) for r in p.relators]
    for q in primes(max_prime):
        if q < 3:
            continue
        for a in range(2, q):
            alphas = [pow(a, x, q) for x in weights]
            if all(v == 1 for v in alphas):
                continue
            rows = []
            for fox in polys:
                row = [0] * len(gens)
                for g, poly in fox.items():
                    row[col[g]] = sum(c * pow(a, e, q) for e, c in poly.items()) % q
                rows.append(row)
            cobound = [(v - 1) % q for v in alphas]
            for v in _nullspace_mod(rows, len(gens), q):
                if not _parallel(v, cobound, q):
                    images = tuple(_affine_perm(x, b, q) for x, b in zip(alphas, v))
                    return QuotientWitness(f"AGL(1,{q})", q, images, tuple(p.label(g) for g in gens))
    return None


def affine_witness(p: Presentation, max_prime: int = DEFAULT_MAX_PRIME,
                   character_budget: int = 200_000) -> Optional[QuotientWitness]:
    """Homomorphism onto a nonabelian subgroup of AGL(1, q), smallest prime q first.

    For a character ``alpha`` the translations ``b`` must lie in the kernel
    of the Fox matrix mod q. Solutions b = c * (alpha - 1) are conjugate to
    the diagonal (abelian) representation; any other kernel vector gives a
    nonabelian image. Characters through a homomorphism to Z are tried
    first (cheap: one Alexander matrix per alpha), then all characters
    within ``character_budget``.
    """
    gens = p.generators
    if len(gens) < 2:
        return None
    weights = integer_weights(p)
    if weights is not None:
        found = _weighted_affine(p, weights, max_prime)
        if found is not None:
            return found
    col = {g: k for k, g in enumerate(gens)}
    budget = [character_budget]
    try:
        for q in primes(max_prime):
            if q < 3:
                continue
            for alphas in _characters(p, q, budget):
                alpha = dict(zip(gens, alphas))
                rows = [_fox_row(r, alpha, col, q) for r in p.relators]
                kernel = _nullspace_mod(rows, len(gens), q)
                cobound = [(a - 1) % q for a in alphas]
                for v in kernel:
                    if not _parallel(v, cobound, q):
                        images = tuple(_affine_perm(a, b, q) for a, b in zip(alphas, v))
                        return QuotientWitness(f"AGL(1,{q})", q, images, tuple(p.label(g) for g in gens))
    except _SearchExhausted:
        log.debug("affine witness search out of character budget")
    return None


def _parallel(u: Sequence[int], v: Sequence[int], q: int) -> bool:
    """True when u is a multiple of the nonzero vector v mod q."""
    k = next(i for i, x in enumerate(v) if x)
    c = u[k] * pow(v[k], -1, q) % q
    return all((a - c * b) % q == 0 for a, b in zip(u, v))


def find_witness(p: Presentation, max_symmetric_degree: int = 5, node_budget: int = 200_000,
                 max_prime: int = DEFAULT_MAX_PRIME) -> Optional[QuotientWitness]:
    """Affine groups first (linear algebra), then the symmetric-group search;
    every result is re-checked by evaluating the relators as permutations."""
    searches = (
        lambda: affine_witness(p, max_prime, node_budget),
        lambda: nonabelian_witness(p, max_symmetric_degree, node_budget),
    )
    for search in searches:
        witness = search()
        if witness is not None:
            if not (is_homomorphism(p, witness) and has_nonabelian_image(witness)):
                raise AssertionError(f"invalid quotient witness {witness.to_json()}")
            return witness
    return None
