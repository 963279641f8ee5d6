"""Built-in diagram corpus and curated verification fixtures.

The corpus drives the package's exhaustive self-verification.  It
consists of

* every signed braid word of length at most 6 on at most 4 strands,
  de-duplicated up to cyclic rotation of the word (rotation conjugates
  the braid, so the closures are isotopic in the annulus), and
* a small set of named diagrams: the 3-braid whose closure is an
  annular unknot, torus braids, a figure-eight style word, and three
  cup/cap words exercising nontrivial slice features.

Setting the environment variable :data:`CORPUS_DIR_ENV` to a directory
replaces the built-in corpus with the ``*.braid`` and ``*.slice`` files
found there (non-recursive, sorted by filename); see
:func:`askein.diagram.parse_braid_file` and
:func:`askein.diagram.parse_slice_file` for the formats.

:func:`iter_corpus` streams entries so that corpus-scale sweeps never
hold more than one memoised state cube alive at a time.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

from .diagram import (BraidWord, Cap, Cross, Cup, DiagramError, SliceWord,
                      parse_braid_file, parse_slice_file)

__all__ = [
    "CORPUS_DIR_ENV",
    "CorpusEntry",
    "InvariancePair",
    "braid_sweep",
    "corpus_count",
    "invariance_pairs",
    "iter_corpus",
    "named_entries",
    "negative_control",
    "permutation_check_entries",
]

CORPUS_DIR_ENV = "ASKEIN_CORPUS_DIR"

MAX_STRANDS = 4
MAX_LENGTH = 6


@dataclass(frozen=True)
class CorpusEntry:
    """One diagram of the corpus.

    ``word`` is always set; ``braid`` is the originating braid word when
    the entry is a braid closure (``None`` for general slice words), so
    braid-only checks know where they apply.
    """

    name: str
    word: SliceWord
    braid: Optional[BraidWord] = None

    @property
    def is_braid(self) -> bool:
        return self.braid is not None


def _braid_entry(name: str, braid: BraidWord) -> CorpusEntry:
    return CorpusEntry(name=name, word=braid.to_slice_word(), braid=braid)


def _is_min_rotation(letters: Tuple[int, ...]) -> bool:
    n = len(letters)
    return all(letters <= letters[k:] + letters[:k] for k in range(1, n))


def braid_sweep(max_strands: int = MAX_STRANDS,
                max_length: int = MAX_LENGTH) -> Iterator[BraidWord]:
    """All signed braid words up to cyclic rotation, deterministically.

    Words are emitted by (strand count, length, lexicographic letters);
    each rotation class is represented by its lexicographically least
    member.  With the default bounds this yields 10882 words.
    """
    for strands in range(1, max_strands + 1):
        alphabet = sorted(
            [i for i in range(1, strands)] + [-i for i in range(1, strands)]
        )
        yield BraidWord(strands, ())
        for length in range(1, max_length + 1):
            if not alphabet:
                break
            for letters in product(alphabet, repeat=length):
                if _is_min_rotation(letters):
                    yield BraidWord(strands, letters)


def _braid_name(braid: BraidWord) -> str:
    body = ",".join(str(l) for l in braid.letters) if braid.letters else "e"
    return f"b{braid.strands}:{body}"


def named_entries() -> List[CorpusEntry]:
    """The named diagrams, including the three cup/cap slice words."""
    entries = [
        _braid_entry("unknot-from-3-braid", BraidWord(3, (1, -2))),
        _braid_entry("trefoil", BraidWord(2, (1, 1, 1))),
        _braid_entry("negative-trefoil", BraidWord(2, (-1, -1, -1))),
        _braid_entry("figure-eight", BraidWord(3, (1, -2, 1, -2))),
        _braid_entry("hopf-link", BraidWord(2, (1, 1))),
        _braid_entry("ladybug-two-braid", BraidWord(2, (-1, 1))),
        _braid_entry("hexagon-two-braid", BraidWord(2, (-1, 1, 1))),
        CorpusEntry(
            name="free-trivial-circle",
            word=SliceWord(0, (Cup(1), Cap(1))),
        ),
        CorpusEntry(
            name="hexagon-slice",
            word=SliceWord(2, (Cross(1, 1), Cup(1), Cross(2, 1),
                               Cross(2, 1), Cap(3))),
        ),
        CorpusEntry(
            name="split-trivial-circle",
            word=SliceWord(1, (Cup(2), Cap(2))),
        ),
    ]
    for s in range(1, MAX_STRANDS + 1):
        entries.append(_braid_entry(f"identity-{s}", BraidWord(s, ())))
    return entries


def _load_directory(path: Path) -> Iterator[CorpusEntry]:
    files = sorted(p for p in path.iterdir()
                   if p.suffix in (".braid", ".slice") and p.is_file())
    if not files:
        raise DiagramError(f"corpus directory {path} has no .braid/.slice files")
    for p in files:
        text = p.read_text()
        if p.suffix == ".braid":
            braid = parse_braid_file(text)
            yield _braid_entry(p.stem, braid)
        else:
            yield CorpusEntry(name=p.stem, word=parse_slice_file(text))


def iter_corpus(max_strands: int = MAX_STRANDS,
                max_length: int = MAX_LENGTH) -> Iterator[CorpusEntry]:
    """Stream the corpus: named diagrams first, then the braid sweep.

    Honors the :data:`CORPUS_DIR_ENV` override, which replaces the
    built-in corpus entirely.
    """
    override = os.environ.get(CORPUS_DIR_ENV)
    if override:
        yield from _load_directory(Path(override))
        return
    seen = set()
    for entry in named_entries():
        seen.add(entry.word)
        yield entry
    for braid in braid_sweep(max_strands, max_length):
        word = braid.to_slice_word()
        if word in seen:
            continue
        yield CorpusEntry(name=_braid_name(braid), word=word, braid=braid)


def corpus_count() -> int:
    return sum(1 for _ in iter_corpus())


# ---------------------------------------------------------------------------
# curated invariance fixtures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvariancePair:
    """Two braid words whose closures' homology tables must compare as
    ``expect_equal`` says."""

    name: str
    move: str  # "conjugation" | "r2-insertion" | "r3-word" | "control"
    left: BraidWord
    right: BraidWord
    expect_equal: bool = True


def invariance_pairs() -> List[InvariancePair]:
    """Curated pairs related by conjugation, a cancelling-pair insertion,
    or the braid relation; all moves preserve the annular closure."""
    B = BraidWord
    return [
        InvariancePair("conj-unknot3", "conjugation",
                       B(3, (1, -2)), B(3, (-2, 1))),
        InvariancePair("conj-mixed3", "conjugation",
                       B(3, (1, 2, -1)), B(3, (2, -1, 1))),
        InvariancePair("conj-sparse4", "conjugation",
                       B(4, (1, -2, 3)), B(4, (3, 1, -2))),
        InvariancePair("conj-twist2", "conjugation",
                       B(2, (1, 1, -1)), B(2, (-1, 1, 1))),
        InvariancePair("r2-trefoil", "r2-insertion",
                       B(2, (1, 1, 1)), B(2, (1, 1, 1, 1, -1))),
        InvariancePair("r2-unknot3", "r2-insertion",
                       B(3, (1, -2)), B(3, (1, 2, -2, -2))),
        InvariancePair("r2-identity3", "r2-insertion",
                       B(3, ()), B(3, (2, -2))),
        InvariancePair("r2-middle4", "r2-insertion",
                       B(4, (1, 3)), B(4, (1, -2, 2, 3))),
        InvariancePair("r3-positive", "r3-word",
                       B(3, (1, 2, 1)), B(3, (2, 1, 2))),
        InvariancePair("r3-tail", "r3-word",
                       B(3, (1, 2, 1, -1)), B(3, (2, 1, 2, -1))),
        InvariancePair("r3-shifted4", "r3-word",
                       B(4, (2, 3, 2, 1)), B(4, (3, 2, 3, 1))),
        InvariancePair("r3-negative", "r3-word",
                       B(3, (-1, -2, -1)), B(3, (-2, -1, -2))),
    ]


def negative_control() -> InvariancePair:
    """Same strand count, different closures: the tables must differ."""
    return InvariancePair("control-trefoil-vs-unknot", "control",
                          BraidWord(2, (1, 1, 1)), BraidWord(2, (1,)),
                          expect_equal=False)


def permutation_check_entries() -> List[CorpusEntry]:
    """Five diagrams for the crossing-order permutation robustness check."""
    picks = {"trefoil", "unknot-from-3-braid", "figure-eight",
             "hexagon-slice", "ladybug-two-braid"}
    chosen = [e for e in named_entries() if e.name in picks]
    assert len(chosen) == len(picks)
    return chosen
