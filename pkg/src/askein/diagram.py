"""Annular link diagrams in slice form, and their resolutions.

A diagram lives in a thickened annulus, presented as a cylinder cut open
along a radial *seam*.  Reading bottom to top, the diagram is a word of
elementary slices acting on a row of vertical strands:

* ``Cross(pos, over)`` -- strands ``pos`` and ``pos + 1`` cross; ``over``
  is ``+1`` when the strand entering at ``pos`` passes over (a braid
  letter sigma_i) and ``-1`` for its inverse.
* ``Cup(pos)``  -- a local minimum creating strands ``pos``, ``pos + 1``.
* ``Cap(pos)``  -- a local maximum joining strands ``pos``, ``pos + 1``.

The top of the word is glued back to the bottom along the seam, so a word
with ``seam_strands = k`` must return to exactly ``k`` strands.  Braid
closures are the special case with ``Cross`` slices only.

Resolutions.  Each crossing is smoothed one of two ways: the *identity*
smoothing (both strands pass straight up) or the *elbow* smoothing (the
two inputs join, and the two outputs join).  Bit 0 of a resolution state
picks the identity smoothing at a positive letter and the elbow at a
negative letter; bit 1 picks the other one.  With the all-up orientation
of a braid this makes the all-zero state of a positive braid its oriented
resolution.

A resolved diagram is a disjoint union of embedded circles.  A circle is
*nontrivial* when it winds around the annulus core (its signed number of
seam crossings is +-1) and *trivial* when the winding is 0.  Circles are
ordered canonically: nontrivial circles first, by their minimal seam
position, then trivial circles in a left-to-right, bottom-to-top sweep.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

__all__ = [
    "Cross",
    "Cup",
    "Cap",
    "SliceWord",
    "BraidWord",
    "Circle",
    "Resolution",
    "MergeOrSplit",
    "crossing_effect",
    "state_bits",
    "parse_braid_file",
    "parse_slice_file",
    "braid_word",
]

ABOVE = 0
BELOW = 1


def state_bits(state: int, n: int) -> Tuple[int, ...]:
    """Resolution state as a bit tuple in crossing (input) order."""
    return tuple((state >> c) & 1 for c in range(n))


@dataclass(frozen=True)
class Cross:
    pos: int
    over: int  # +1: entering strand at pos goes over; -1: under


@dataclass(frozen=True)
class Cup:
    pos: int


@dataclass(frozen=True)
class Cap:
    pos: int


SliceLike = Union[Cross, Cup, Cap]


class DiagramError(ValueError):
    """Raised for malformed slice words or diagram files."""


# ---------------------------------------------------------------------------
# slice words
# ---------------------------------------------------------------------------


class SliceWord:
    """A cyclic word of slices on ``seam_strands`` strands.

    Instances are immutable and hashable; resolutions are memoised on the
    instance since complexes revisit every state many times.
    """

    def __init__(
        self,
        seam_strands: int,
        slices: Iterable[SliceLike],
        orientations: Optional[Sequence[int]] = None,
    ):
        self.seam_strands = int(seam_strands)
        self.slices: Tuple[SliceLike, ...] = tuple(slices)
        if self.seam_strands < 0:
            raise DiagramError("seam strand count must be nonnegative")

        # Strand count at each horizontal level.  Level t sits above slice t;
        # level 0 is the seam and is identified with the top level.
        counts = [self.seam_strands]
        for i, sl in enumerate(self.slices, start=1):
            c = counts[-1]
            if isinstance(sl, Cross):
                if not 1 <= sl.pos <= c - 1:
                    raise DiagramError(f"slice {i}: crossing at {sl.pos} needs strands {sl.pos},{sl.pos+1} of {c}")
                if sl.over not in (1, -1):
                    raise DiagramError(f"slice {i}: crossing sign must be +-1")
                counts.append(c)
            elif isinstance(sl, Cup):
                if not 1 <= sl.pos <= c + 1:
                    raise DiagramError(f"slice {i}: cup position {sl.pos} out of range for {c} strands")
                counts.append(c + 2)
            elif isinstance(sl, Cap):
                if not 1 <= sl.pos <= c - 1:
                    raise DiagramError(f"slice {i}: cap position {sl.pos} out of range for {c} strands")
                counts.append(c - 2)
            else:
                raise DiagramError(f"slice {i}: unknown slice {sl!r}")
        if counts[-1] != self.seam_strands:
            raise DiagramError(
                f"word does not close up: ends with {counts[-1]} strands, seam has {self.seam_strands}"
            )
        # levels 0..m-1; level m is identified with level 0 (the seam)
        self.level_counts: Tuple[int, ...] = tuple(counts[:-1]) or (self.seam_strands,)

        self.crossing_slices: Tuple[int, ...] = tuple(
            i for i, sl in enumerate(self.slices) if isinstance(sl, Cross)
        )
        self.n_crossings = len(self.crossing_slices)

        # Port numbering: port(t, p) for level t in 0..m-1, position p in 1..c_t.
        offs = [0]
        for c in self.level_counts:
            offs.append(offs[-1] + c)
        self._offsets: Tuple[int, ...] = tuple(offs)
        self.n_ports = offs[-1]

        self._static, self._variants = self._build_connections()
        self._components = self._trace_components()
        if orientations is None:
            orientations = (1,) * len(self._components)
        else:
            orientations = tuple(int(o) for o in orientations)
            if len(orientations) != len(self._components) or any(o not in (1, -1) for o in orientations):
                raise DiagramError(
                    f"need one +-1 orientation per component ({len(self._components)} components)"
                )
        self.orientations: Tuple[int, ...] = orientations
        self.crossing_signs: Tuple[int, ...] = self._compute_crossing_signs()
        self.n_plus = sum(1 for s in self.crossing_signs if s > 0)
        self.n_minus = sum(1 for s in self.crossing_signs if s < 0)

        self._resolutions: dict = {}
        self._key = (self.seam_strands, self.slices, self.orientations)

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, SliceWord) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"SliceWord(k={self.seam_strands}, slices={list(self.slices)!r})"

    # -- port helpers -------------------------------------------------------

    def port(self, level: int, pos: int) -> int:
        return self._offsets[level] + pos - 1

    def port_level_pos(self, port: int) -> Tuple[int, int]:
        # offsets are sorted; linear scan is fine at these sizes
        for t in range(len(self.level_counts)):
            if self._offsets[t] <= port < self._offsets[t + 1]:
                return t, port - self._offsets[t] + 1
        raise IndexError(port)

    # -- connection tables --------------------------------------------------

    def _slot(self, port: int, side: int) -> int:
        return 2 * port + side

    def _connect(self, table, pa, sa, pb, sb):
        table[2 * pa + sa] = 2 * pb + sb
        table[2 * pb + sb] = 2 * pa + sa

    def _build_connections(self):
        """Static connection template plus per-crossing smoothing patches.

        Each port has one connection on its ABOVE side and one on its BELOW
        side.  A straight passage through a slice joins (lower port, ABOVE)
        to (upper port, BELOW); an elbow joins two ports of one level on the
        same side.  Crossing slices contribute patches for both smoothings.
        """
        m = len(self.slices)
        if m == 0:
            table = [0] * (2 * self.n_ports)
            for p in range(self.n_ports):
                self._connect(table, p, ABOVE, p, BELOW)
            return table, {}

        table = [-1] * (2 * self.n_ports)
        variants = {}  # crossing index -> (identity patch, elbow patch)
        nlev = len(self.level_counts)
        cross_no = 0
        for i, sl in enumerate(self.slices, start=1):
            lo, hi = i - 1, i % nlev
            c = self.level_counts[lo]
            if isinstance(sl, Cross):
                j = sl.pos
                for p in range(1, c + 1):
                    if p not in (j, j + 1):
                        self._connect(table, self.port(lo, p), ABOVE, self.port(hi, p), BELOW)
                a, b = self.port(lo, j), self.port(lo, j + 1)
                d, e = self.port(hi, j), self.port(hi, j + 1)
                ident = (
                    (2 * a + ABOVE, 2 * d + BELOW), (2 * d + BELOW, 2 * a + ABOVE),
                    (2 * b + ABOVE, 2 * e + BELOW), (2 * e + BELOW, 2 * b + ABOVE),
                )
                elbow = (
                    (2 * a + ABOVE, 2 * b + ABOVE), (2 * b + ABOVE, 2 * a + ABOVE),
                    (2 * d + BELOW, 2 * e + BELOW), (2 * e + BELOW, 2 * d + BELOW),
                )
                variants[cross_no] = (ident, elbow)
                cross_no += 1
            elif isinstance(sl, Cup):
                j = sl.pos
                for p in range(1, j):
                    self._connect(table, self.port(lo, p), ABOVE, self.port(hi, p), BELOW)
                for p in range(j, c + 1):
                    self._connect(table, self.port(lo, p), ABOVE, self.port(hi, p + 2), BELOW)
                self._connect(table, self.port(hi, j), BELOW, self.port(hi, j + 1), BELOW)
            elif isinstance(sl, Cap):
                j = sl.pos
                for p in range(1, j):
                    self._connect(table, self.port(lo, p), ABOVE, self.port(hi, p), BELOW)
                for p in range(j + 2, c + 1):
                    self._connect(table, self.port(lo, p), ABOVE, self.port(hi, p - 2), BELOW)
                self._connect(table, self.port(lo, j), ABOVE, self.port(lo, j + 1), ABOVE)
        return table, variants

    def connection_table(self, state: int) -> List[int]:
        """Connection table with every crossing smoothed per ``state``.

        Bit c of ``state`` is the resolution of crossing c (input order).
        Bit 0 gives the identity smoothing at a positive letter and the
        elbow at a negative one; bit 1 the opposite.
        """
        table = list(self._static)
        for c, (ident, elbow) in self._variants.items():
            sl = self.slices[self.crossing_slices[c]]
            bit = (state >> c) & 1
            use_ident = (bit == 0) if sl.over > 0 else (bit == 1)
            for slot, val in (ident if use_ident else elbow):
                table[slot] = val
        return table

    def smoothing_is_identity(self, crossing: int, bit: int) -> bool:
        sl = self.slices[self.crossing_slices[crossing]]
        return (bit == 0) if sl.over > 0 else (bit == 1)

    # -- underlying link components ------------------------------------------

    def _trace_components(self):
        """Components of the underlying diagram (crossings left intact)."""
        table = list(self._static)
        nlev = max(len(self.level_counts), 1)
        for c, _ in self._variants.items():
            i = self.crossing_slices[c] + 1
            lo, hi = i - 1, i % nlev
            j = self.slices[i - 1].pos
            a, b = self.port(lo, j), self.port(lo, j + 1)
            d, e = self.port(hi, j), self.port(hi, j + 1)
            # strands swap positions through a crossing
            self._connect(table, a, ABOVE, e, BELOW)
            self._connect(table, b, ABOVE, d, BELOW)
        comps = _walk_cycles(table, self.n_ports)
        comps.sort(key=lambda walk: min(p for p, _ in walk))
        return comps

    @property
    def n_components(self) -> int:
        return len(self._components)

    def _compute_crossing_signs(self) -> Tuple[int, ...]:
        # Direction (+1 up / -1 down) of each strand passage, from the
        # component walks and the per-component orientation flags.
        dir_above: dict = {}  # port -> direction of the passage leaving via ABOVE
        for comp, orient in zip(self._components, self.orientations):
            for port, exit_side in comp:
                # exiting via ABOVE means the walk moves upward through here
                dir_above[port] = orient if exit_side == ABOVE else -orient
        signs = []
        nlev = max(len(self.level_counts), 1)
        for c in range(self.n_crossings):
            i = self.crossing_slices[c] + 1
            lo = i - 1
            sl = self.slices[i - 1]
            a = self.port(lo, sl.pos)
            b = self.port(lo, sl.pos + 1)
            signs.append(sl.over * dir_above[a] * dir_above[b])
        return tuple(signs)

    # -- resolutions ----------------------------------------------------------

    def resolve(self, state: int) -> "Resolution":
        res = self._resolutions.get(state)
        if res is None:
            res = Resolution(self, state)
            self._resolutions[state] = res
        return res

    def clear_cache(self):
        self._resolutions.clear()


def _walk_cycles(table: List[int], n_ports: int) -> List[List[Tuple[int, int]]]:
    """Decompose a connection table into cycles.

    Returns one walk per cycle as a list of (port, exit_side) pairs in
    traversal order.  Each port appears in exactly one walk.
    """
    seen = [False] * n_ports
    walks = []
    for start in range(n_ports):
        if seen[start]:
            continue
        walk = []
        port, exit_side = start, ABOVE
        while True:
            seen[port] = True
            walk.append((port, exit_side))
            slot = table[2 * port + exit_side]
            port, entered = slot >> 1, slot & 1
            exit_side = 1 - entered
            if port == start and exit_side == ABOVE:
                break
        walks.append(walk)
    return walks


# ---------------------------------------------------------------------------
# resolved diagrams
# ---------------------------------------------------------------------------


@dataclass
class Circle:
    """One embedded circle of a resolution.

    ``walk`` lists (port, exit_side) in traversal order.  ``winding`` is the
    signed count of seam crossings along the walk; embeddedness forces it
    into {-1, 0, +1}.
    """

    walk: List[Tuple[int, int]]
    winding: int
    index: int = -1

    @property
    def trivial(self) -> bool:
        return self.winding == 0


class Resolution:
    """All circles of one smoothing state, in canonical order."""

    def __init__(self, word: SliceWord, state: int):
        if not 0 <= state < (1 << word.n_crossings):
            raise DiagramError(f"state {state} out of range for {word.n_crossings} crossings")
        self.word = word
        self.state = state
        table = word.connection_table(state)
        seam = word.level_counts[0] if word.level_counts else word.seam_strands

        circles = []
        for walk in _walk_cycles(table, word.n_ports):
            winding = 0
            for port, exit_side in walk:
                if port < seam:
                    winding += 1 if exit_side == ABOVE else -1
            if abs(winding) > 1:
                raise AssertionError(f"embedded circle with winding {winding}")
            circles.append(Circle(walk, winding))

        def seam_key(circ):
            return min(p for p, _ in circ.walk if p < seam)

        def sweep_key(circ):
            best = None
            for p, _ in circ.walk:
                t, pos = word.port_level_pos(p)
                k = (pos, t)
                if best is None or k < best:
                    best = k
            return best

        nontriv = sorted((c for c in circles if not c.trivial), key=seam_key)
        triv = sorted((c for c in circles if c.trivial), key=sweep_key)
        self.circles: List[Circle] = nontriv + triv
        for i, c in enumerate(self.circles):
            c.index = i
        self.circle_of_port = [0] * word.n_ports
        for c in self.circles:
            for p, _ in c.walk:
                self.circle_of_port[p] = c.index
        self.n_nontrivial = len(nontriv)
        self.trivial_flags: Tuple[bool, ...] = tuple(c.trivial for c in self.circles)
        # bitmask of nontrivial circle indices, used in grading arithmetic
        self.nontrivial_mask = (1 << self.n_nontrivial) - 1

    def __len__(self):
        return len(self.circles)

    def census(self) -> Tuple[bool, ...]:
        return self.trivial_flags


@dataclass(frozen=True)
class MergeOrSplit:
    """Effect of flipping one crossing's resolution bit from 0 to 1.

    Indices refer to canonical circle positions: ``inputs`` in the source
    resolution, ``outputs`` in the target.  ``passive`` maps each untouched
    source circle index to its target index.  ``case`` classifies the local
    triviality pattern:

    * merges -- ``2a`` (trivial+trivial->trivial), ``2b`` (trivial joins
      nontrivial), ``2c`` (two nontrivial circles close into a trivial one);
    * splits -- ``3a`` (trivial->two trivial), ``3b`` (nontrivial sheds a
      trivial circle), ``3c`` (trivial->two nontrivial).
    """

    kind: str  # "merge" | "split"
    case: str
    inputs: Tuple[int, ...]
    outputs: Tuple[int, ...]
    passive: Tuple[Tuple[int, int], ...]


def crossing_effect(word: SliceWord, state: int, crossing: int) -> MergeOrSplit:
    """Classify the surgery performed by raising ``crossing``'s bit."""
    if not 0 <= crossing < word.n_crossings:
        raise DiagramError(f"no crossing {crossing}")
    if (state >> crossing) & 1:
        raise DiagramError(f"crossing {crossing} already resolved with bit 1 in state {state:b}")
    src = word.resolve(state)
    dst = word.resolve(state | (1 << crossing))

    src_of_port = src.circle_of_port
    dst_of_port = dst.circle_of_port
    # Which source circles meet the flipped crossing: the four local ports.
    i = word.crossing_slices[crossing] + 1
    nlev = max(len(word.level_counts), 1)
    lo, hi = i - 1, i % nlev
    j = word.slices[i - 1].pos
    local = [word.port(lo, j), word.port(lo, j + 1), word.port(hi, j), word.port(hi, j + 1)]
    src_active = sorted({src_of_port[p] for p in local})
    dst_active = sorted({dst_of_port[p] for p in local})

    passive = []
    for c in src.circles:
        if c.index in src_active:
            continue
        p0 = c.walk[0][0]
        passive.append((c.index, dst_of_port[p0]))

    if len(src_active) == 2 and len(dst_active) == 1:
        kind = "merge"
        t_in = [src.circles[k].trivial for k in src_active]
        t_out = dst.circles[dst_active[0]].trivial
        if all(t_in):
            case = "2a"
        elif any(t_in) and not t_out:
            case = "2b"
        elif not any(t_in) and t_out:
            case = "2c"
        else:  # pragma: no cover - excluded by winding arithmetic
            raise AssertionError("impossible merge pattern")
    elif len(src_active) == 1 and len(dst_active) == 2:
        kind = "split"
        t_in = src.circles[src_active[0]].trivial
        t_out = [dst.circles[k].trivial for k in dst_active]
        if t_in and all(t_out):
            case = "3a"
        elif not t_in and any(t_out) and not all(t_out):
            case = "3b"
        elif t_in and not any(t_out):
            case = "3c"
        else:  # pragma: no cover
            raise AssertionError("impossible split pattern")
    else:  # pragma: no cover - surgery changes circle count by exactly one
        raise AssertionError(f"surgery changed circles {src_active} -> {dst_active}")

    return MergeOrSplit(kind, case, tuple(src_active), tuple(dst_active), tuple(passive))


# ---------------------------------------------------------------------------
# braid words and file formats
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: Tuple[int, ...]

    def __post_init__(self):
        if self.strands < 1:
            raise DiagramError("braid needs at least one strand")
        for l in self.letters:
            if l == 0 or abs(l) >= self.strands:
                raise DiagramError(f"letter {l} invalid on {self.strands} strands")

    def to_slice_word(self) -> SliceWord:
        return SliceWord(
            self.strands,
            [Cross(abs(l), 1 if l > 0 else -1) for l in self.letters],
        )

    @property
    def writhe(self) -> int:
        return sum(1 if l > 0 else -1 for l in self.letters)

    def rotated(self, k: int) -> "BraidWord":
        n = len(self.letters)
        if n == 0:
            return self
        k %= n
        return BraidWord(self.strands, self.letters[k:] + self.letters[:k])

    def __str__(self):
        return f"{self.strands}: {' '.join(map(str, self.letters)) or '(empty)'}"


def braid_word(strands: int, letters: Iterable[int]) -> SliceWord:
    return BraidWord(strands, tuple(letters)).to_slice_word()


def _content_lines(text: str) -> List[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_braid_file(text: str) -> BraidWord:
    """Braid file: first line the strand count, second the signed letters."""
    lines = _content_lines(text)
    if not lines:
        raise DiagramError("empty braid file")
    try:
        strands = int(lines[0])
    except ValueError as e:
        raise DiagramError(f"bad strand count {lines[0]!r}") from e
    letters: Tuple[int, ...] = ()
    if len(lines) > 1:
        try:
            letters = tuple(int(tok) for tok in lines[1].split())
        except ValueError as e:
            raise DiagramError(f"bad letters {lines[1]!r}") from e
    if len(lines) > 2:
        raise DiagramError("braid file has trailing content")
    return BraidWord(strands, letters)


def parse_slice_file(text: str) -> SliceWord:
    """Slice file: seam strand count, then one slice per line.

    Lines are ``X i +`` / ``X i -`` (crossing), ``U i`` (cup), ``A i``
    (cap).  An optional final line ``O s1 s2 ...`` orients each component
    (``+`` up, ``-`` down, in canonical component order); the default is
    all up.
    """
    lines = _content_lines(text)
    if not lines:
        raise DiagramError("empty slice file")
    try:
        k = int(lines[0])
    except ValueError as e:
        raise DiagramError(f"bad seam strand count {lines[0]!r}") from e
    slices: List[SliceLike] = []
    orientations: Optional[List[int]] = None
    for line in lines[1:]:
        toks = line.split()
        op = toks[0].upper()
        if op == "O":
            if orientations is not None:
                raise DiagramError("duplicate orientation line")
            orientations = []
            for t in toks[1:]:
                if t in ("+", "+1"):
                    orientations.append(1)
                elif t in ("-", "-1"):
                    orientations.append(-1)
                else:
                    raise DiagramError(f"bad orientation token {t!r}")
            continue
        if orientations is not None:
            raise DiagramError("orientation line must come last")
        if op == "X":
            if len(toks) != 3 or toks[2] not in ("+", "-"):
                raise DiagramError(f"bad crossing line {line!r}")
            slices.append(Cross(int(toks[1]), 1 if toks[2] == "+" else -1))
        elif op == "U":
            if len(toks) != 2:
                raise DiagramError(f"bad cup line {line!r}")
            slices.append(Cup(int(toks[1])))
        elif op == "A":
            if len(toks) != 2:
                raise DiagramError(f"bad cap line {line!r}")
            slices.append(Cap(int(toks[1])))
        else:
            raise DiagramError(f"unknown slice line {line!r}")
    return SliceWord(k, slices, orientations)
