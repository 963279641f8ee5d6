"""Surgery-configuration combinatorics: decorated posets, ladybug matchings,
interval pairings, and index-3 boundary graphs.

A *realized configuration* pins a smoothing state of a diagram together with
a set of surgery arcs, one per chosen crossing.  Performing surgery along an
arc toggles that crossing's resolution bit, so the same machinery serves a
configuration and its dual (where every bit starts high and surgery lowers
it).  Label transport along surgeries reuses the annular merge/split rules of
the cochain complex, which makes the poset enumerated here literally the
covering relation used by the differential.

The geometric input beyond the cube of resolutions is the *ladybug matching*:
when an index-2 configuration is a single trivial circle with the two arcs'
endpoints alternating around it, four label chains connect the bottom to the
top and they must be paired two-and-two.  Alternation forces exactly one of
the two arcs inside the disk the circle bounds, which orders the arcs
canonically; with the four endpoints listed counterclockwise starting from an
inner-arc endpoint, each child circle of the inner surgery is matched with
the child of the outer surgery holding the next endpoint around.  The
``opposite`` convention takes the previous endpoint instead.  Both the
orientation and the inside test are computed on the circle unrolled into the
strip covering the annulus.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

from .diagram import ABOVE, BELOW, Circle, DiagramError, Resolution, SliceWord
from .skein import ANNULAR, _merge_terms, _split_terms

__all__ = [
    "ModuliError",
    "RealizedConfig",
    "Chain",
    "DecoratedConfig",
    "surgery_effect",
    "mark_slots",
    "mark_circle",
    "active_circles",
    "maximal_chains",
    "chain_census",
    "ladybug_kind",
    "ladybug_matching",
    "interval_pairing",
    "BoundaryGraph",
    "boundary_graph",
    "dual_graph_iso",
    "harvest_decorated",
    "leaf_circles",
    "has_leaf",
    "has_coleaf",
    "canonical_form",
    "unrolled_polygon",
    "circle_orientation",
    "RIGHT_PAIR",
    "OPPOSITE",
    "PrintedChain",
    "PrintedGraph",
    "match_printed_graph",
    "verify_moduli",
]

RIGHT_PAIR = "right_pair"
OPPOSITE = "opposite"

_CONVENTIONS = (RIGHT_PAIR, OPPOSITE)


class ModuliError(ValueError):
    """A configuration outside the domain of an operation."""


# ---------------------------------------------------------------------------
# surgeries that may toggle a bit in either direction
# ---------------------------------------------------------------------------


class Surgery(NamedTuple):
    """Circle bookkeeping for toggling one crossing's resolution bit."""

    kind: str  # "merge" | "split"
    inputs: Tuple[int, ...]
    outputs: Tuple[int, ...]
    passive: Tuple[Tuple[int, int], ...]


def _local_ports(word: SliceWord, crossing: int) -> Tuple[int, int, int, int]:
    i = word.crossing_slices[crossing] + 1
    nlev = max(len(word.level_counts), 1)
    lo, hi = i - 1, i % nlev
    j = word.slices[i - 1].pos
    return (
        word.port(lo, j),
        word.port(lo, j + 1),
        word.port(hi, j),
        word.port(hi, j + 1),
    )


def surgery_effect(word: SliceWord, state: int, crossing: int) -> Surgery:
    """Classify the surgery that toggles ``crossing``'s bit from ``state``."""
    if not 0 <= crossing < word.n_crossings:
        raise DiagramError(f"no crossing {crossing}")
    src = word.resolve(state)
    dst = word.resolve(state ^ (1 << crossing))
    local = _local_ports(word, crossing)
    src_active = sorted({src.circle_of_port[p] for p in local})
    dst_active = sorted({dst.circle_of_port[p] for p in local})
    passive = []
    for c in src.circles:
        if c.index in src_active:
            continue
        passive.append((c.index, dst.circle_of_port[c.walk[0][0]]))
    if len(src_active) == 2 and len(dst_active) == 1:
        kind = "merge"
    elif len(src_active) == 1 and len(dst_active) == 2:
        kind = "split"
    else:  # pragma: no cover - surgery changes the circle count by one
        raise AssertionError(f"surgery changed circles {src_active} -> {dst_active}")
    return Surgery(kind, tuple(src_active), tuple(dst_active), tuple(passive))


# ---------------------------------------------------------------------------
# arc endpoints as marked edges
# ---------------------------------------------------------------------------


def mark_slots(word: SliceWord, state: int, crossing: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """The two endpoint marks of the surgery arc at ``crossing``.

    Each mark sits on one edge of the current smoothing; an edge is returned
    as its two (port, side) slots.  With the identity smoothing the arc runs
    horizontally between the two through-strands; with the elbow smoothing it
    runs vertically between the lower and upper elbows.
    """
    a, b, d, e = _local_ports(word, crossing)
    bit = (state >> crossing) & 1
    if word.smoothing_is_identity(crossing, bit):
        return (
            ((a, ABOVE), (d, BELOW)),
            ((b, ABOVE), (e, BELOW)),
        )
    return (
        ((a, ABOVE), (b, ABOVE)),
        ((d, BELOW), (e, BELOW)),
    )


def mark_circle(res: Resolution, mark: Tuple[Tuple[int, int], ...]) -> int:
    """Index of the circle carrying a mark (an edge given by its slots)."""
    return res.circle_of_port[mark[0][0]]


def _mark_position(circle: Circle, mark: Tuple[Tuple[int, int], ...]) -> int:
    """Walk step of ``circle`` that traverses the marked edge."""
    slots = set(mark)
    for k, step in enumerate(circle.walk):
        if step in slots:
            return k
    raise ModuliError("mark does not lie on this circle")


def active_circles(word: SliceWord, state: int, arcs: Sequence[int]) -> Set[int]:
    """Circles of ``resolve(state)`` meeting any endpoint of the given arcs."""
    res = word.resolve(state)
    out: Set[int] = set()
    for c in arcs:
        for mark in mark_slots(word, state, c):
            out.add(mark_circle(res, mark))
    return out


# ---------------------------------------------------------------------------
# realized configurations and label chains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RealizedConfig:
    """A smoothing state with a set of surgery arcs (one per crossing)."""

    word: SliceWord
    state: int
    arcs: Tuple[int, ...]

    def __post_init__(self):
        if len(set(self.arcs)) != len(self.arcs):
            raise ModuliError("surgery arcs must be distinct crossings")
        for c in self.arcs:
            if not 0 <= c < self.word.n_crossings:
                raise ModuliError(f"no crossing {c}")

    @property
    def index(self) -> int:
        return len(self.arcs)

    def bits(self, subset: Iterable[int]) -> int:
        mask = 0
        for c in subset:
            mask |= 1 << c
        return mask

    def resolution(self, done: Iterable[int] = ()) -> Resolution:
        return self.word.resolve(self.state ^ self.bits(done))

    def dual(self) -> "RealizedConfig":
        """Same crossings, all surgeries already performed, arcs reversed."""
        return RealizedConfig(self.word, self.state ^ self.bits(self.arcs), tuple(reversed(self.arcs)))

    def active(self, done: Iterable[int] = ()) -> Set[int]:
        return active_circles(self.word, self.state ^ self.bits(done), self.arcs)

    def is_basic(self, done: Iterable[int] = ()) -> bool:
        return len(self.active(done)) == len(self.resolution(done))


class Chain(NamedTuple):
    """A maximal chain: surgery order plus label masks after each surgery.

    ``mids`` has one entry per intermediate level (``index - 1`` masks); the
    bottom and top labelings are carried by the surrounding decorated
    configuration.
    """

    order: Tuple[int, ...]
    mids: Tuple[int, ...]


def _transport(res_src: Resolution, res_dst: Resolution, eff: Surgery, labels: int) -> List[int]:
    """All label masks reachable on ``res_dst`` from ``labels`` via ``eff``."""
    base = 0
    for s, d in eff.passive:
        if (labels >> s) & 1:
            base |= 1 << d
    if eff.kind == "merge":
        i, j = eff.inputs
        o = eff.outputs[0]
        outs = _merge_terms(
            (labels >> i) & 1,
            (labels >> j) & 1,
            res_src.trivial_flags[i],
            res_src.trivial_flags[j],
            ANNULAR,
        )
        return [base | (t << o) for t in outs]
    i = eff.inputs[0]
    a, b = eff.outputs
    pairs = _split_terms(
        (labels >> i) & 1,
        res_src.trivial_flags[i],
        res_dst.trivial_flags[a],
        res_dst.trivial_flags[b],
        ANNULAR,
    )
    return [base | (ta << a) | (tb << b) for ta, tb in pairs]


def chain_census(cfg: RealizedConfig, y: int) -> Dict[int, List[Chain]]:
    """All maximal chains from bottom labels ``y``, grouped by top labels."""
    word = cfg.word
    out: Dict[int, List[Chain]] = {}

    def walk(state: int, remaining: Tuple[int, ...], order: Tuple[int, ...],
             mids: Tuple[int, ...], labels: int) -> None:
        if not remaining:
            top = mids[-1] if mids else labels
            out.setdefault(top, []).append(Chain(order, mids[:-1] if mids else ()))
            return
        res_src = word.resolve(state)
        for k, arc in enumerate(remaining):
            eff = surgery_effect(word, state, arc)
            res_dst = word.resolve(state ^ (1 << arc))
            for nxt in _transport(res_src, res_dst, eff, labels):
                walk(
                    state ^ (1 << arc),
                    remaining[:k] + remaining[k + 1:],
                    order + (arc,),
                    mids + (nxt,),
                    nxt,
                )

    if cfg.index == 0:
        return {y: [Chain((), ())]}
    walk(cfg.state, cfg.arcs, (), (), y)
    return out


def maximal_chains(cfg: RealizedConfig, y: int, x: int) -> List[Chain]:
    """Maximal chains of the decorated poset from ``y`` up to ``x``."""
    return chain_census(cfg, y).get(x, [])


@dataclass(frozen=True)
class DecoratedConfig:
    """A realized configuration with bottom and top labelings."""

    cfg: RealizedConfig
    y: int
    x: int

    def chains(self) -> List[Chain]:
        return maximal_chains(self.cfg, self.y, self.x)


# ---------------------------------------------------------------------------
# planar orientation via the covering strip
# ---------------------------------------------------------------------------


def unrolled_polygon(word: SliceWord, state: int, circle: Circle) -> List[Tuple[int, int]]:
    """Vertices (quadrupled coordinates) of the circle lifted to the strip.

    Ports contribute (4*position, 4*height); a same-level connector (elbow,
    cup or cap) contributes a midpoint bulging a quarter-unit toward the side
    it attaches on.  Height accumulates one level per straight passage, so
    seam wraps unroll and a trivial circle closes back at its starting
    height.  The first walk entry is anchored at its raw level, making lift
    heights comparable with :func:`_patch_center` test points.
    """
    table = word.connection_table(state)
    pts: List[Tuple[int, int]] = []
    start_level, _ = word.port_level_pos(circle.walk[0][0])
    y = 4 * start_level
    for port, side in circle.walk:
        _, pos = word.port_level_pos(port)
        pts.append((4 * pos, y))
        slot = table[2 * port + side]
        nport, nside = slot >> 1, slot & 1
        _, npos = word.port_level_pos(nport)
        if nside == side:
            # elbow / cup / cap: bulge toward the attachment side
            bump = 1 if side == ABOVE else -1
            pts.append((2 * (pos + npos), y + bump))
        else:
            y += 4 if side == ABOVE else -4
    if y != 4 * start_level:
        raise ModuliError("open lift: circle is nontrivial")
    return pts


def circle_orientation(word: SliceWord, state: int, circle: Circle) -> int:
    """+1 when the stored walk runs counterclockwise in the strip, else -1."""
    pts = unrolled_polygon(word, state, circle)
    area2 = 0
    for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
        area2 += x0 * y1 - x1 * y0
    if area2 == 0:
        raise ModuliError("degenerate circle polygon")
    return 1 if area2 > 0 else -1


def _patch_center(word: SliceWord, crossing: int) -> Tuple[int, int]:
    """Center of the crossing patch in quadrupled strip coordinates.

    Both the horizontal arc of the identity smoothing and the vertical arc
    of the elbow smoothing pass through this point.
    """
    i = word.crossing_slices[crossing] + 1
    lo = i - 1
    j = word.slices[i - 1].pos
    return (4 * j + 2, 4 * lo + 2)


def _point_in_polygon(pts: Sequence[Tuple[int, int]], x: int, y: int) -> bool:
    """Even-odd test; assumes no vertex or horizontal edge lies on the ray."""
    inside = False
    for (x0, y0), (x1, y1) in zip(pts, tuple(pts[1:]) + (pts[0],)):
        if (y0 > y) == (y1 > y):
            continue
        # x-coordinate where the edge crosses height y, compared exactly
        # cross > x  <=>  x0 + (x1-x0)(y-y0)/(y1-y0) > x  (sign-adjusted)
        num = (x1 - x0) * (y - y0) + (x0 - x) * (y1 - y0)
        if (num > 0) == (y1 > y0):
            inside = not inside
    return inside


def arc_inside_circle(word: SliceWord, state: int, crossing: int, circle: Circle) -> bool:
    """Whether the surgery arc at ``crossing`` lies inside the disk bounded
    by the (trivial) circle, tested on lifts to the covering strip."""
    pts = unrolled_polygon(word, state, circle)
    cx, cy = _patch_center(word, crossing)
    period = 4 * max(len(word.level_counts), 1)
    ys = [p[1] for p in pts]
    lo, hi = min(ys), max(ys)
    k_min = -((cy - lo) // period) - 1
    k_max = (hi - cy) // period + 1
    for k in range(k_min, k_max + 1):
        if _point_in_polygon(pts, cx, cy + k * period):
            return True
    return False


# ---------------------------------------------------------------------------
# ladybugs
# ---------------------------------------------------------------------------


def ladybug_kind(cfg: RealizedConfig) -> Optional[str]:
    """``"i"``/``"ii"`` when the active part is a ladybug, else ``None``.

    A ladybug is an index-2 configuration whose two arcs have all four
    endpoints on one trivial circle, in alternating cyclic order.  Kind
    ``"ii"`` has a surgery whose children are nontrivial (the annulus axis
    separates them); kind ``"i"`` splits into trivial circles both ways.
    """
    if cfg.index != 2:
        return None
    word, state = cfg.word, cfg.state
    res = cfg.resolution()
    a1, a2 = cfg.arcs
    marks = {arc: mark_slots(word, state, arc) for arc in cfg.arcs}
    carriers = {mark_circle(res, m) for arc in cfg.arcs for m in marks[arc]}
    if len(carriers) != 1:
        return None
    z = res.circles[next(iter(carriers))]
    if not z.trivial:
        return None
    seq = sorted(
        (_mark_position(z, m), arc) for arc in cfg.arcs for m in marks[arc]
    )
    arcs_around = [arc for _, arc in seq]
    if arcs_around[0] == arcs_around[1]:  # not alternating
        return None
    kinds = []
    for arc in cfg.arcs:
        child = cfg.resolution((arc,))
        eff = surgery_effect(word, state, arc)
        kinds.append(all(child.trivial_flags[c] for c in eff.outputs))
    return "i" if all(kinds) else "ii"


def ladybug_matching(cfg: RealizedConfig, convention: str = RIGHT_PAIR) -> Dict[int, int]:
    """Bijection between the two children of each surgery of a ladybug.

    Keys are circle indices in the resolution after surgery on the first
    arc, values in the resolution after surgery on the second.  The rule is
    a function of the geometry alone: exactly one arc lies inside the disk
    bounded by the circle, and with the four endpoints read counterclockwise
    from an inner-arc endpoint as m0 m1 m2 m3, the ``right_pair`` convention
    matches the inner-surgery child holding m1 with the outer-surgery child
    holding m2, and the child holding m3 with the one holding m0.
    """
    if convention not in _CONVENTIONS:
        raise ModuliError(f"unknown matching convention {convention!r}")
    if ladybug_kind(cfg) is None:
        raise ModuliError("not a ladybug configuration")
    word, state = cfg.word, cfg.state
    res = cfg.resolution()
    z = res.circles[mark_circle(res, mark_slots(word, state, cfg.arcs[0])[0])]

    sides = {arc: arc_inside_circle(word, state, arc, z) for arc in cfg.arcs}
    if sum(sides.values()) != 1:
        raise ModuliError("alternating arcs must have exactly one inside the disk")
    inner = next(a for a, v in sides.items() if v)
    outer = next(a for a, v in sides.items() if not v)

    entries = [
        (_mark_position(z, m), arc, m)
        for arc in (inner, outer)
        for m in mark_slots(word, state, arc)
    ]
    entries.sort()
    if circle_orientation(word, state, z) < 0:
        entries.reverse()
    if entries[0][1] != inner:
        entries = entries[1:] + entries[:1]
    # counterclockwise: m0 (inner), m1 (outer), m2 (inner), m3 (outer)
    m0, m1, m2, m3 = (e[2] for e in entries)

    res_inner = cfg.resolution((inner,))  # children carry the outer marks
    res_outer = cfg.resolution((outer,))  # children carry the inner marks
    c1, c3 = mark_circle(res_inner, m1), mark_circle(res_inner, m3)
    d0, d2 = mark_circle(res_outer, m0), mark_circle(res_outer, m2)
    if convention == RIGHT_PAIR:
        pairs = {c1: d2, c3: d0}  # successor point around the circle
    else:
        pairs = {c1: d0, c3: d2}
    if cfg.arcs[0] == inner:
        return pairs
    return {v: k for k, v in pairs.items()}


# ---------------------------------------------------------------------------
# interval pairings (1-dimensional pieces)
# ---------------------------------------------------------------------------


def interval_pairing(cfg: RealizedConfig, y: int, x: int,
                     convention: str = RIGHT_PAIR) -> List[Tuple[Chain, Chain]]:
    """Pair the maximal chains of an index-2 decorated configuration.

    Two chains always pair with each other; four chains only occur at a
    ladybug, where the matching decides.  Anything else is reported as a
    violation.
    """
    if cfg.index != 2:
        raise ModuliError("interval pairing needs an index-2 configuration")
    chains = maximal_chains(cfg, y, x)
    m = len(chains)
    if m == 0:
        return []
    if m == 2:
        return [(chains[0], chains[1])]
    if m != 4:
        raise ModuliError(f"{m} chains on an index-2 configuration")
    if ladybug_kind(cfg) is None:
        raise ModuliError("four chains on a non-ladybug configuration")
    a1, a2 = cfg.arcs
    match = ladybug_matching(cfg, convention)
    res1 = cfg.resolution((a1,))
    res2 = cfg.resolution((a2,))

    def plus_child(chain: Chain, res: Resolution, arc: int) -> int:
        eff = surgery_effect(cfg.word, cfg.state, arc)
        plus = [c for c in eff.outputs if (chain.mids[0] >> c) & 1]
        if len(plus) != 1:
            raise ModuliError("ladybug chain without a single plus child")
        return plus[0]

    via1 = [c for c in chains if c.order[0] == a1]
    via2 = [c for c in chains if c.order[0] == a2]
    if len(via1) != 2 or len(via2) != 2:
        raise ModuliError("ladybug chains not split two-and-two by first arc")
    pairs = []
    for c1 in via1:
        target = match[plus_child(c1, res1, a1)]
        partner = [c2 for c2 in via2 if plus_child(c2, res2, a2) == target]
        if len(partner) != 1:
            raise ModuliError("ladybug matching failed to pair chains")
        pairs.append((c1, partner[0]))
    return pairs


# ---------------------------------------------------------------------------
# index-3 boundary graphs
# ---------------------------------------------------------------------------


class EdgeTag(NamedTuple):
    """Which index-2 face an edge comes from."""

    level: str  # "first" | "last"
    arc: int
    via_ladybug: bool


@dataclass
class BoundaryGraph:
    """Vertices are maximal chains; edges pair chains across index-2 faces."""

    decorated: DecoratedConfig
    chains: List[Chain]
    edges: List[Tuple[int, int, EdgeTag]]

    def degree(self, i: int) -> int:
        return sum(1 for a, b, _ in self.edges if i in (a, b))

    def is_two_regular(self) -> bool:
        return all(self.degree(i) == 2 for i in range(len(self.chains)))

    def components(self) -> List[List[int]]:
        """Vertex cycles, each listed in traversal order."""
        incident: Dict[int, List[int]] = {i: [] for i in range(len(self.chains))}
        for k, (a, b, _) in enumerate(self.edges):
            incident[a].append(k)
            incident[b].append(k)
        seen_edges: Set[int] = set()
        cycles = []
        for start in range(len(self.chains)):
            unused = [k for k in incident[start] if k not in seen_edges]
            if not unused:
                continue
            cycle = [start]
            current = start
            while True:
                nxt_edge = next(k for k in incident[current] if k not in seen_edges)
                seen_edges.add(nxt_edge)
                a, b, _ = self.edges[nxt_edge]
                current = b if current == a else a
                if current == start:
                    break
                cycle.append(current)
            cycles.append(cycle)
        return cycles

    def component_tags(self, cycle: List[int]) -> List[Tuple[str, int]]:
        verts = set(cycle)
        return sorted(
            (tag.level, tag.arc)
            for a, b, tag in self.edges
            if a in verts and b in verts
        )

    def is_six_cycles(self) -> bool:
        if not self.is_two_regular():
            return False
        return all(len(c) == 6 for c in self.components())

    def covers_trivially(self) -> bool:
        """Each component uses all six face types, i.e. all surgery orders."""
        arcs = self.decorated.cfg.arcs
        want_tags = sorted(
            [("first", a) for a in arcs] + [("last", a) for a in arcs]
        )
        for cycle in self.components():
            if len(cycle) != 6:
                return False
            if self.component_tags(cycle) != want_tags:
                return False
            orders = {self.chains[i].order for i in cycle}
            if len(orders) != 6:
                return False
        return True


def boundary_graph(cfg: RealizedConfig, y: int, x: int,
                   convention: str = RIGHT_PAIR) -> BoundaryGraph:
    """Assemble the boundary graph of an index-3 decorated configuration."""
    if cfg.index != 3:
        raise ModuliError("boundary graph needs an index-3 configuration")
    chains = maximal_chains(cfg, y, x)
    pos = {c: i for i, c in enumerate(chains)}
    word = cfg.word
    arc_rest = {a: tuple(b for b in cfg.arcs if b != a) for a in cfg.arcs}

    found: Dict[Tuple[int, int, EdgeTag], int] = {}
    for i, c in enumerate(chains):
        first, last = c.order[0], c.order[2]
        # face that fixes the first surgery and its labels
        face1 = RealizedConfig(word, cfg.state ^ (1 << first), arc_rest[first])
        sub = Chain(c.order[1:], (c.mids[1],))
        partner = _pairing_partner(face1, c.mids[0], x, sub, convention)
        lifted = Chain((first,) + partner.chain.order, (c.mids[0],) + partner.chain.mids)
        _record_edge(found, pos, i, lifted, EdgeTag("first", first, partner.via_ladybug))
        # face that fixes the last surgery and the labels feeding it
        face2 = RealizedConfig(word, cfg.state, tuple(a for a in cfg.arcs if a != last))
        sub2 = Chain(c.order[:2], (c.mids[0],))
        partner2 = _pairing_partner(face2, y, c.mids[1], sub2, convention)
        lifted2 = Chain(partner2.chain.order + (last,), partner2.chain.mids + (c.mids[1],))
        _record_edge(found, pos, i, lifted2, EdgeTag("last", last, partner2.via_ladybug))

    edges = []
    for key, count in sorted(found.items()):
        if count != 2:
            raise ModuliError("face pairing is not an involution")
        edges.append(key)
    return BoundaryGraph(DecoratedConfig(cfg, y, x), chains, edges)


class _Partner(NamedTuple):
    chain: Chain
    via_ladybug: bool


def _pairing_partner(face: RealizedConfig, y: int, x: int, mine: Chain,
                     convention: str) -> _Partner:
    pairs = interval_pairing(face, y, x, convention)
    lady = len(pairs) == 2 and ladybug_kind(face) is not None and \
        len(maximal_chains(face, y, x)) == 4
    for a, b in pairs:
        if a == mine:
            return _Partner(b, lady)
        if b == mine:
            return _Partner(a, lady)
    raise ModuliError("chain missing from its own face pairing")


def _record_edge(found: Dict, pos: Dict[Chain, int], i: int, partner: Chain,
                 tag: EdgeTag) -> None:
    j = pos.get(partner)
    if j is None:
        raise ModuliError("pairing produced a chain outside the poset")
    key = (min(i, j), max(i, j), tag)
    found[key] = found.get(key, 0) + 1


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------


def _flip_mask(res: Resolution, mask: int) -> int:
    return mask ^ ((1 << len(res)) - 1)


def dual_chain(cfg: RealizedConfig, chain: Chain, y: int, x: int) -> Tuple[Chain, int, int]:
    """Image of a chain under the order-reversing, label-flipping bijection.

    Returns the dual chain together with the dual bottom and top labels
    (which depend only on ``y`` and ``x``, not on the chain).
    """
    word = cfg.word
    levels = [cfg.state]
    for a in chain.order:
        levels.append(levels[-1] ^ (1 << a))
    masks = (y,) + chain.mids + (x,)
    flipped = [
        _flip_mask(word.resolve(st), mk) for st, mk in zip(levels, masks)
    ]
    flipped.reverse()
    return (
        Chain(tuple(reversed(chain.order)), tuple(flipped[1:-1])),
        flipped[0],
        flipped[-1],
    )


def dual_graph_iso(cfg: RealizedConfig, y: int, x: int,
                   convention: str = RIGHT_PAIR) -> bool:
    """Check the boundary graph is isomorphic to the dual's, edges and all.

    The dual graph is built with the opposite ladybug convention; the
    bijection reverses each chain, flips every label, and swaps the roles of
    first-arc and last-arc faces.
    """
    other = OPPOSITE if convention == RIGHT_PAIR else RIGHT_PAIR
    g = boundary_graph(cfg, y, x, convention)
    dual_cfg = cfg.dual()
    if not g.chains:
        return not maximal_chains(dual_cfg, *_dual_decoration(cfg, y, x))
    dy, dx = _dual_decoration(cfg, y, x)
    gd = boundary_graph(dual_cfg, dy, dx, other)

    image: Dict[int, int] = {}
    dual_pos = {c: i for i, c in enumerate(gd.chains)}
    for i, c in enumerate(g.chains):
        dc, dyy, dxx = dual_chain(cfg, c, y, x)
        if (dyy, dxx) != (dy, dx):
            return False
        j = dual_pos.get(dc)
        if j is None:
            return False
        image[i] = j
    if len(set(image.values())) != len(gd.chains):
        return False

    def translate(edge):
        a, b, tag = edge
        level = "last" if tag.level == "first" else "first"
        i, j = image[a], image[b]
        return (min(i, j), max(i, j), (level, tag.arc, tag.via_ladybug))

    mine = sorted(translate(e) for e in g.edges)
    theirs = sorted((a, b, (t.level, t.arc, t.via_ladybug)) for a, b, t in gd.edges)
    return mine == theirs


def _dual_decoration(cfg: RealizedConfig, y: int, x: int) -> Tuple[int, int]:
    top = cfg.resolution(cfg.arcs)
    bottom = cfg.resolution()
    return _flip_mask(top, x), _flip_mask(bottom, y)


# ---------------------------------------------------------------------------
# leaves, co-leaves, harvesting, canonical forms
# ---------------------------------------------------------------------------


def leaf_circles(cfg: RealizedConfig) -> List[int]:
    """Circles of the bottom resolution holding exactly one arc endpoint."""
    res = cfg.resolution()
    counts: Dict[int, int] = {}
    for arc in cfg.arcs:
        for mark in mark_slots(cfg.word, cfg.state, arc):
            c = mark_circle(res, mark)
            counts[c] = counts.get(c, 0) + 1
    return sorted(c for c, n in counts.items() if n == 1)


def has_leaf(cfg: RealizedConfig) -> bool:
    return bool(leaf_circles(cfg))


def has_coleaf(cfg: RealizedConfig) -> bool:
    return bool(leaf_circles(cfg.dual()))


def harvest_decorated(word: SliceWord, index: int) -> Iterator[DecoratedConfig]:
    """All decorated sub-configurations of the diagram's cube at given index.

    Every state pair at cube distance ``index`` contributes one realized
    configuration, restricted to its active circles: passive circles carry
    the minus label at the bottom, which transports unchanged, so decorations
    run over active-circle labelings only.
    """
    n = word.n_crossings
    if index < 0 or index > n:
        return
    for state in range(1 << n):
        zeros = [c for c in range(n) if not (state >> c) & 1]
        for arcs in itertools.combinations(zeros, index):
            cfg = RealizedConfig(word, state, arcs)
            base_active = sorted(cfg.active())
            for bits in range(1 << len(base_active)):
                y = 0
                for k, c in enumerate(base_active):
                    if (bits >> k) & 1:
                        y |= 1 << c
                for x, chains in chain_census(cfg, y).items():
                    if chains:
                        yield DecoratedConfig(cfg, y, x)


def canonical_form(cfg: RealizedConfig) -> Tuple:
    """Isomorphism key for the active part of a configuration.

    Records, for every surgery subset, the multiset of active circles with
    their triviality and the cyclic order of remaining-arc endpoints around
    them, minimized over arc relabelings, endpoint swaps, rotation and
    reflection.  Configurations agreeing here behave identically in every
    check this module performs.
    """
    word = cfg.word
    n = cfg.index

    def mark_tokens(state: int, live: Sequence[int]) -> List[Tuple[bool, Tuple]]:
        res = word.resolve(state)
        per_circle: Dict[int, List[Tuple[int, int, int]]] = {}
        for ai, arc in enumerate(live):
            for end, mark in enumerate(mark_slots(word, state, arc)):
                c = mark_circle(res, mark)
                z = res.circles[c]
                per_circle.setdefault(c, []).append((_mark_position(z, mark), ai, end))
        out = []
        for c, lst in per_circle.items():
            lst.sort()
            out.append((res.trivial_flags[c], tuple((ai, end) for _, ai, end in lst)))
        return out

    def cyc_min(seq: Tuple) -> Tuple:
        if not seq:
            return seq
        best = None
        rev = tuple(reversed(seq))
        for k in range(len(seq)):
            for cand in (seq[k:] + seq[:k], rev[k:] + rev[:k]):
                if best is None or cand < best:
                    best = cand
        return best

    best_key = None
    for perm in itertools.permutations(range(n)):
        for flips in range(1 << n):
            key = []
            for size in range(n + 1):
                for subset in itertools.combinations(range(n), size):
                    st = cfg.state ^ cfg.bits(cfg.arcs[i] for i in subset)
                    live = [cfg.arcs[i] for i in range(n) if i not in subset]
                    live_names = [perm[i] for i in range(n) if i not in subset]
                    toks = []
                    for triv, seq in mark_tokens(st, live):
                        renamed = tuple(
                            (live_names[ai], end ^ ((flips >> ai) & 1))
                            for ai, end in seq
                        )
                        toks.append((triv, cyc_min(renamed)))
                    key.append((tuple(sorted(subset)), tuple(sorted(toks))))
            key_t = tuple(key)
            if best_key is None or key_t < best_key:
                best_key = key_t
    return best_key


# ---------------------------------------------------------------------------
# fixtures with printed reference data
# ---------------------------------------------------------------------------


class PrintedChain(NamedTuple):
    """One published maximal chain, labels in drawn circle order.

    Labels use letters ``v``/``w`` for nontrivial/trivial circles and ``+1``
    or ``-1`` signs, listed in the order the source drawing shows them.
    """

    order: Tuple[int, ...]  # arc names (1-based) in surgery order
    z1: Tuple[Tuple[str, int], ...]
    z2: Tuple[Tuple[str, int], ...]


class PrintedGraph(NamedTuple):
    chains: Tuple[PrintedChain, ...]
    plain_edges: Tuple[Tuple[int, int], ...]  # 1-based chain indices
    ladybug_edges: Tuple[Tuple[int, int], ...]
    cycles: Tuple[Tuple[int, ...], ...]


def match_printed_graph(cfg: RealizedConfig, y: int, x: int,
                        arc_names: Dict[int, int], printed: PrintedGraph,
                        convention: str = RIGHT_PAIR) -> Optional[Dict[int, Tuple[int, ...]]]:
    """Try to identify the computed boundary graph with published data.

    ``arc_names`` maps 1-based published arc names to crossings of ``cfg``.
    Drawn circle orders are unknown, so every per-state assignment of printed
    label positions to canonical circle indices (respecting triviality) is
    tried; the assignment must identify chains, both edge classes, and the
    cycles simultaneously.  Returns the successful assignment (state ->
    printed-position order of circle indices) or None.
    """
    graph = boundary_graph(cfg, y, x, convention)
    name_to_arc = {name: arc_names[name] for name in arc_names}

    # group printed mid-labelings by the state they decorate
    states_needed: Dict[int, List[Tuple[Tuple[str, int], ...]]] = {}

    def state_of(names: Iterable[int]) -> int:
        return cfg.state ^ cfg.bits(name_to_arc[k] for k in names)

    for pc in printed.chains:
        states_needed.setdefault(state_of(pc.order[:1]), []).append(pc.z1)
        states_needed.setdefault(state_of(pc.order[:2]), []).append(pc.z2)

    # candidate position assignments per state
    def assignments(state: int, samples: List[Tuple[Tuple[str, int], ...]]) -> List[Tuple[int, ...]]:
        res = cfg.word.resolve(state)
        want = [letter == "w" for letter, _ in samples[0]]
        if len(want) != len(res):
            return []
        cands = []
        for order in itertools.permutations(range(len(res))):
            if [res.trivial_flags[c] for c in order] == want:
                cands.append(order)
        return cands

    per_state = {st: assignments(st, lab) for st, lab in states_needed.items()}
    if any(not v for v in per_state.values()):
        return None

    my_chains = {c: i for i, c in enumerate(graph.chains)}
    my_plain = {
        (min(a, b), max(a, b))
        for a, b, tag in graph.edges if not tag.via_ladybug
    }
    my_lady = {
        (min(a, b), max(a, b))
        for a, b, tag in graph.edges if tag.via_ladybug
    }

    states = sorted(per_state)
    for combo in itertools.product(*(per_state[st] for st in states)):
        placing = dict(zip(states, combo))

        def mask(state: int, labels: Tuple[Tuple[str, int], ...]) -> int:
            order = placing[state]
            m = 0
            for pos, (_, sign) in enumerate(labels):
                if sign > 0:
                    m |= 1 << order[pos]
            return m

        translated: List[Optional[int]] = []
        ok = True
        for pc in printed.chains:
            st1 = state_of(pc.order[:1])
            st2 = state_of(pc.order[:2])
            chain = Chain(
                tuple(name_to_arc[k] for k in pc.order),
                (mask(st1, pc.z1), mask(st2, pc.z2)),
            )
            idx = my_chains.get(chain)
            if idx is None:
                ok = False
                break
            translated.append(idx)
        if not ok or len(set(translated)) != len(translated):
            continue

        def tr_edge(pair: Tuple[int, int]) -> Tuple[int, int]:
            a, b = translated[pair[0] - 1], translated[pair[1] - 1]
            return (min(a, b), max(a, b))

        if {tr_edge(e) for e in printed.plain_edges} != my_plain:
            continue
        if {tr_edge(e) for e in printed.ladybug_edges} != my_lady:
            continue
        return placing
    return None

# ---------------------------------------------------------------------------
# per-diagram verdict
# ---------------------------------------------------------------------------


def verify_moduli(word: SliceWord, index: int, convention: str = RIGHT_PAIR,
                  list_limit: Optional[int] = None) -> Dict[str, object]:
    """Sweep one diagram's decorated configurations at the given index.

    Index 2 checks that every configuration carries 2 or 4 maximal chains,
    with 4 exactly at ladybugs.  Index 3 checks that the boundary graph is
    2-regular, decomposes into hexagons whose face tags cover every surgery
    order once, and is isomorphic to its dual's.  The verdict lists each
    configuration with its kind and cycle decomposition (the listing is
    truncated after ``list_limit`` entries when set; counts always cover
    everything).
    """
    if index not in (2, 3):
        raise ModuliError(f"moduli index must be 2 or 3, got {index}")
    if convention not in _CONVENTIONS:
        raise ModuliError(f"unknown ladybug convention {convention!r}")
    entries: List[Dict[str, object]] = []
    configurations = 0
    violations = 0
    truncated = False
    nbits = word.n_crossings
    for dec in harvest_decorated(word, index):
        configurations += 1
        cfg = dec.cfg
        entry: Dict[str, object] = {
            "state": format(cfg.state, f"0{nbits}b")[::-1] if nbits else "",
            "arcs": list(cfg.arcs),
            "bottom_labels": dec.y,
            "top_labels": dec.x,
        }
        if index == 2:
            chains = dec.chains()
            kind = ladybug_kind(cfg)
            # count 4 may only occur at a ladybug shape; a ladybug shape with
            # an off-matching decoration legitimately carries 2 chains
            ok = len(chains) in (2, 4) and (len(chains) != 4 or kind is not None)
            entry["kind"] = kind or "plain"
            entry["chain_count"] = len(chains)
        else:
            graph = boundary_graph(cfg, dec.y, dec.x, convention)
            cycles = graph.components()
            ok = (graph.is_two_regular()
                  and all(len(c) == 6 for c in cycles)
                  and graph.covers_trivially()
                  and dual_graph_iso(cfg, dec.y, dec.x, convention))
            entry["kind"] = "hexagon" if ok else "irregular"
            entry["chain_count"] = len(graph.chains)
            entry["cycles"] = [
                {
                    "vertices": [list(graph.chains[i].order) for i in cycle],
                    "face_tags": [list(t) for t in graph.component_tags(cycle)],
                }
                for cycle in cycles
            ]
        entry["ok"] = ok
        if not ok:
            violations += 1
        if list_limit is None or len(entries) < list_limit:
            entries.append(entry)
        else:
            truncated = True
    return {
        "index": index,
        "convention": convention,
        "configurations": configurations,
        "violations": violations,
        "ok": violations == 0,
        "truncated": truncated,
        "entries": entries,
    }
