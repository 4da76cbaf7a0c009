"""
Censuses of genus-two surface bundles.

Words are grouped up to a deliberately coarse equivalence: free and cyclic
cancellation, cyclic rotation (conjugation by a twist), commuting of twists
along disjoint curves (``Di Dj = Dj Di`` when ``|i - j| >= 2``), the chain
symmetry ``Di -> D(6-i)``, and inversion (reverse the word, negate exponents).
Every move yields a homeomorphic mapping torus, so distinct classes may still
be homeomorphic (braid relations and general conjugacy are not used), but
equivalent words are never split.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from typing import IO, Iterable, Iterator, List, Optional, Sequence, Tuple

from .mcg import NUM_TWISTS, TwistWord
from .presentation import FiberType
from .simplify import DEFAULT_BUDGETS, EXACT, Budgets, certify_monodromy

log = logging.getLogger(__name__)

Letter = Tuple[int, int]

MAX_ENUMERATION_LENGTH = 8
ORBIT_CAP = 10**5

CSV_FIELDS = ("word", "fiber", "beta1", "torsion", "rank_lower", "rank_upper", "rank_status")


# ------------------------------------------------------------ canonical forms

def _letter_key(x: Letter) -> Tuple[int, int]:
    return (x[0], 0 if x[1] > 0 else 1)


def word_key(letters: Sequence[Letter]):
    """Shortlex order: D1 < D1^-1 < D2 < ... < D5^-1 letterwise."""
    return (len(letters), tuple(_letter_key(x) for x in letters))


def _cyclic_cancel(letters: Sequence[Letter]) -> Tuple[Letter, ...]:
    out: List[Letter] = []
    for i, e in letters:
        if out and out[-1] == (i, -e):
            out.pop()
        else:
            out.append((i, e))
    lo, hi = 0, len(out) - 1
    while lo < hi and out[lo] == (out[hi][0], -out[hi][1]):
        lo += 1
        hi -= 1
    return tuple(out[lo:hi + 1])


def _min_rotation(letters: Tuple[Letter, ...]) -> Tuple[Letter, ...]:
    if not letters:
        return letters
    return min((letters[k:] + letters[:k] for k in range(len(letters))), key=word_key)


def _neighbours(w: Tuple[Letter, ...]) -> Iterator[Tuple[Letter, ...]]:
    n = len(w)
    for k in range(n):
        j = (k + 1) % n
        if j != k and abs(w[k][0] - w[j][0]) >= 2:
            s = list(w)
            s[k], s[j] = s[j], s[k]
            yield tuple(s)
    yield tuple((NUM_TWISTS + 1 - i, e) for i, e in w)
    yield tuple((i, -e) for i, e in reversed(w))


@dataclass(frozen=True)
class CanonicalForm:
    word: TwistWord
    # False when the orbit cap was hit and ``word`` is just the normalized input
    exact: bool = True

    def __str__(self) -> str:
        return str(self.word)


def canonical_letters(letters: Sequence[Letter], cap: int = ORBIT_CAP) -> Tuple[Tuple[Letter, ...], bool]:
    start = _min_rotation(_cyclic_cancel(letters))
    best = start
    seen = {start}
    queue = [start]
    # necklaces (rotation classes) are the orbit nodes; each is stored by its least rotation
    while queue:
        w = queue.pop()
        for nb in _neighbours(w):
            nb = _min_rotation(_cyclic_cancel(nb))
            if nb in seen:
                continue
            if len(seen) >= cap:
                return start, False
            seen.add(nb)
            queue.append(nb)
            if word_key(nb) < word_key(best):
                best = nb
    return best, True


def canonicalize(word: TwistWord, cap: int = ORBIT_CAP) -> CanonicalForm:
    letters, exact = canonical_letters(word.letters(), cap)
    if not exact:
        log.warning("orbit of %s exceeds %d words; returning it non-canonical", word, cap)
        return CanonicalForm(TwistWord.from_letters(word.letters()), False)
    return CanonicalForm(TwistWord.from_letters(letters), True)


_LETTERS = sorted(((i, e) for i in range(1, NUM_TWISTS + 1) for e in (1, -1)), key=_letter_key)


def _candidates(max_len: int) -> Iterator[Tuple[Letter, ...]]:
    # A canonical word is its own least rotation, so no letter precedes its first one.
    def extend(prefix: List[Letter], first_key):
        yield tuple(prefix)
        if len(prefix) == max_len:
            return
        last = prefix[-1]
        for x in _LETTERS:
            if _letter_key(x) < first_key or x == (last[0], -last[1]):
                continue
            prefix.append(x)
            yield from extend(prefix, first_key)
            prefix.pop()

    for x in _LETTERS:
        yield from extend([x], _letter_key(x))


def enumerate_words(max_len: int, cap: int = MAX_ENUMERATION_LENGTH) -> List[CanonicalForm]:
    """All canonical classes of nonempty words of length <= max_len, sorted."""
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    if max_len > cap:
        raise ValueError(f"max_len {max_len} exceeds enumeration cap {cap}")
    found = []
    for letters in _candidates(max_len):
        if letters[0] == (letters[-1][0], -letters[-1][1]) and len(letters) > 1:
            continue
        key = word_key(letters)
        # cheap rejections before the orbit search
        if any(word_key(v) < key for v in _quick_variants(letters)):
            continue
        canon, exact = canonical_letters(letters)
        if canon == letters:
            found.append(CanonicalForm(TwistWord.from_letters(letters), exact))
    found.sort(key=lambda c: word_key(c.word.letters()))
    return found


def _quick_variants(letters: Tuple[Letter, ...]) -> Iterator[Tuple[Letter, ...]]:
    yield _min_rotation(letters)
    flipped = tuple((NUM_TWISTS + 1 - i, e) for i, e in letters)
    yield _min_rotation(flipped)
    yield _min_rotation(tuple((i, -e) for i, e in reversed(letters)))
    yield _min_rotation(tuple((i, -e) for i, e in reversed(flipped)))


# ------------------------------------------------------------------ records

@dataclass(frozen=True)
class CensusRecord:
    word: str
    fiber: FiberType
    betti_1: int
    torsion: Tuple[int, ...]
    rank_lower: int
    rank_upper: int
    rank_status: str

    def row(self) -> dict:
        return {
            "word": self.word,
            "fiber": self.fiber.value,
            "beta1": self.betti_1,
            "torsion": ";".join(map(str, self.torsion)),
            "rank_lower": self.rank_lower,
            "rank_upper": self.rank_upper,
            "rank_status": self.rank_status,
        }

    @classmethod
    def from_row(cls, row: dict) -> "CensusRecord":
        torsion = row["torsion"]
        if isinstance(torsion, str):
            torsion = tuple(int(x) for x in torsion.split(";") if x)
        return cls(
            row["word"], FiberType.parse(row["fiber"]), int(row["beta1"]), tuple(torsion),
            int(row["rank_lower"]), int(row["rank_upper"]), row["rank_status"],
        )


def classify(word: TwistWord, fiber: FiberType = FiberType.CLOSED, budgets: Budgets = DEFAULT_BUDGETS) -> CensusRecord:
    cert = certify_monodromy(word, fiber, budgets)
    h = cert.homology
    return CensusRecord(str(word), fiber, h.betti_1, h.torsion, cert.lower, cert.upper, cert.status)


def _classify_job(args):
    text, fiber, budgets = args
    return classify(TwistWord.parse(text), fiber, budgets)


def classify_many(
    words: Iterable[TwistWord], fiber: FiberType, budgets: Budgets = DEFAULT_BUDGETS, jobs: int = 1
) -> Iterator[CensusRecord]:
    """Classify in input order; ``jobs > 1`` fans out to worker processes."""
    if jobs <= 1:
        for w in words:
            yield classify(w, fiber, budgets)
        return
    args = ((str(w), fiber, budgets) for w in words)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_classify_job, args, chunksize=64)


def census(max_len: int, fiber: FiberType = FiberType.CLOSED, budgets: Budgets = DEFAULT_BUDGETS,
           jobs: int = 1) -> Iterator[CensusRecord]:
    words = [c.word for c in enumerate_words(max_len)]
    return classify_many(words, fiber, budgets, jobs)


# Random census runs keep the conjugate search short: most random words are far
# from rank two and the search would otherwise dominate the run time.
RANDOM_BUDGETS = Budgets(conjugator_length=1, conjugate_attempts=10, witness_nodes=20_000, nielsen_attempts=0)

_SAMPLE_LETTERS = tuple((i, e) for i in range(1, NUM_TWISTS + 1) for e in (1, -1))


def random_words(count: int, max_len: int, seed: int) -> Iterator[TwistWord]:
    rng = random.Random(seed)
    for _ in range(count):
        length = rng.randint(1, max_len)
        yield TwistWord.from_letters(rng.choice(_SAMPLE_LETTERS) for _ in range(length))


def random_search(count: int, max_len: int, seed: int, fiber: FiberType = FiberType.CLOSED,
                  budgets: Budgets = RANDOM_BUDGETS, jobs: int = 1,
                  rank_two_only: bool = False) -> Iterator[CensusRecord]:
    """Classify ``count`` random words (deterministic in ``seed``), in sample order.

    Each word is ``l`` letters drawn uniformly from Di^+-1 with ``l`` uniform in
    1..max_len, then freely reduced. With ``rank_two_only`` only records
    certified to have rank exactly two are emitted.
    """
    for rec in classify_many(random_words(count, max_len, seed), fiber, budgets, jobs):
        if rank_two_only and not (rec.rank_status == EXACT and rec.rank_upper == 2):
            continue
        yield rec


# ------------------------------------------------------------------ file formats

def write_csv(records: Iterable[CensusRecord], out: IO[str]) -> int:
    writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    n = 0
    for rec in records:
        writer.writerow(rec.row())
        n += 1
    return n


def write_jsonl(records: Iterable[CensusRecord], out: IO[str]) -> int:
    n = 0
    for rec in records:
        out.write(json.dumps(rec.row()) + "\n")
        n += 1
    return n


def read_csv(src: IO[str]) -> List[CensusRecord]:
    return [CensusRecord.from_row(row) for row in csv.DictReader(src)]


def read_jsonl(src: IO[str]) -> List[CensusRecord]:
    return [CensusRecord.from_row(json.loads(line)) for line in src if line.strip()]


# ------------------------------------------------------------------ built-in table

@dataclass(frozen=True)
class TableRow:
    word: TwistWord
    rank: dict   # FiberType -> generator count reported for the row
    beta1: dict  # FiberType -> first Betti number


def load_table1() -> List[TableRow]:
    text = resources.files("surfbundle").joinpath("data/table1.csv").read_text()
    lines = [line for line in text.splitlines() if line and not line.startswith("#")]
    rows = []
    for row in csv.DictReader(io.StringIO("\n".join(lines))):
        rows.append(TableRow(
            TwistWord.parse(row["word"]),
            {FiberType.CLOSED: int(row["closed_rank"]), FiberType.PUNCTURED: int(row["punctured_rank"])},
            {FiberType.CLOSED: int(row["closed_beta1"]), FiberType.PUNCTURED: int(row["punctured_beta1"])},
        ))
    return rows


@dataclass(frozen=True)
class TableCheck:
    row: TableRow
    record: CensusRecord
    beta1_ok: bool
    # None where the reported rank is only an upper bound (above two)
    rank_ok: Optional[bool]


def check_table1(budgets: Budgets = DEFAULT_BUDGETS, jobs: int = 1) -> List[TableCheck]:
    rows = load_table1()
    checks = []
    for fiber in FiberType:
        records = classify_many([r.word for r in rows], fiber, budgets, jobs)
        for row, rec in zip(rows, records):
            expected_rank = row.rank[fiber]
            if expected_rank == 2:
                rank_ok = rec.rank_status == EXACT and rec.rank_upper == 2
            else:
                rank_ok = None
            checks.append(TableCheck(row, rec, rec.betti_1 == row.beta1[fiber], rank_ok))
    return checks
