"""Ground-truth lattice dynamics and rectangle events.

Everything here works on explicit finite configurations: sets of infected
sites confined to a bounding box (sites outside are permanently healthy).
Two closure routes are implemented for each model -- direct fixpoint
iteration and the rectangles process -- so they can be checked against
each other.  The framed-rectangle exploration reveals a configuration cell
by cell and must reproduce the chain's transition probabilities; that is
the bridge between the lattice and the dynamic program.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import numpy as np

from .special_functions import ModelParams

__all__ = [
    "Rectangle", "FramedRectangle", "LatticeConfiguration",
    "closure_two_neighbour", "closure_frobose",
    "rectangles_process_closure",
    "local_closure_two_neighbour", "local_closure_frobose",
    "infection_time", "event_holds", "occupied", "internally_filled",
    "locally_internally_filled", "crossing", "no_horizontal_gaps",
    "no_vertical_gaps", "traversable",
    "explore", "mc_estimate", "exact_event_prob",
    "EXACT_ENUMERATION_MAX_CELLS",
]

Site = Tuple[int, int]

EXACT_ENUMERATION_MAX_CELLS = 22


@dataclass(frozen=True)
class Rectangle:
    """Half-open lattice rectangle [a, c) x [b, d)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if not (self.a < self.c and self.b < self.d):
            raise ValueError(f"degenerate rectangle {self}")

    @classmethod
    def dims(cls, w: int, h: int) -> "Rectangle":
        return cls(0, 0, w, h)

    @property
    def width(self) -> int:
        return self.c - self.a

    @property
    def height(self) -> int:
        return self.d - self.b

    @property
    def phi(self) -> int:
        """Semi-perimeter: width plus height."""
        return self.width + self.height

    @property
    def sh(self) -> int:
        return min(self.width, self.height)

    @property
    def lng(self) -> int:
        return max(self.width, self.height)

    def cells(self) -> Set[Site]:
        return {(x, y) for x in range(self.a, self.c)
                for y in range(self.b, self.d)}

    def __contains__(self, site: Site) -> bool:
        x, y = site
        return self.a <= x < self.c and self.b <= y < self.d

    def contains_rect(self, other: "Rectangle") -> bool:
        return (self.a <= other.a and self.b <= other.b
                and other.c <= self.c and other.d <= self.d)

    def expand(self, m: int) -> "Rectangle":
        return Rectangle(self.a - m, self.b - m, self.c + m, self.d + m)

    def grow(self, alpha: int, beta: int, gamma: int, delta: int) -> "Rectangle":
        return Rectangle(self.a - alpha, self.b - beta,
                         self.c + gamma, self.d + delta)


@dataclass(frozen=True)
class LatticeConfiguration:
    """Finite set of infected sites within a bounding box."""

    infected: FrozenSet[Site]
    bounding_box: Rectangle

    def __post_init__(self):
        for s in self.infected:
            if s not in self.bounding_box:
                raise ValueError(f"site {s} outside bounding box")


def _buffers(rect: Rectangle) -> Dict[str, Set[Site]]:
    a, b, c, d = rect.a, rect.b, rect.c, rect.d
    return {
        "r": {(c, y) for y in range(b, d)},
        "u": {(x, d) for x in range(a, c)},
        "l": {(a - 1, y) for y in range(b, d)},
        "d": {(x, b - 1) for x in range(a, c)},
    }


_FRAME_BUFFERS = {
    "0": (), "1": ("r",), "2": ("r", "u"), "3": ("r", "u", "l"),
    "2'": ("u", "l"), "1'": ("l",), "4": ("r", "u", "l", "d"), "1''": ("u",),
    "2''": ("r", "l"),
}


def _buffers_two_neighbour(rect: Rectangle) -> Dict[str, Set[Site]]:
    a, b, c, d = rect.a, rect.b, rect.c, rect.d
    return {
        "r": {(x, y) for x in (c, c + 1) for y in range(b, d)},
        "u": {(x, y) for x in range(a, c) for y in (d, d + 1)},
        "l": {(x, y) for x in (a - 2, a - 1) for y in range(b, d)},
        "d": {(x, y) for x in range(a, c) for y in (b - 2, b - 1)},
    }


# corner cell between each pair of adjacent two-neighbour buffers
_2N_CORNERS = {
    frozenset(("r", "u")): lambda r: (r.c, r.d),
    frozenset(("u", "l")): lambda r: (r.a - 1, r.d),
    frozenset(("l", "d")): lambda r: (r.a - 1, r.b - 1),
    frozenset(("d", "r")): lambda r: (r.c, r.b - 1),
}


@dataclass(frozen=True)
class FramedRectangle:
    """Rectangle plus the frame state naming its revealed-empty buffers.

    Frobose frames are thickness-1 side strips; two-neighbour frames are
    thickness-2 and gain the corner cell between adjacent buffers.
    """

    rect: Rectangle
    state: str

    def frame_cells(self, model: str = "frobose") -> Set[Site]:
        keys = _FRAME_BUFFERS[self.state]
        if model == "frobose":
            if self.state == "2''":
                raise ValueError("frame state 2'' exists only for the "
                                 "two-neighbour model")
            bufs = _buffers(self.rect)
            out: Set[Site] = set()
            for key in keys:
                out |= bufs[key]
            return out
        bufs = _buffers_two_neighbour(self.rect)
        out = set()
        for key in keys:
            out |= bufs[key]
        for pair, corner in _2N_CORNERS.items():
            if pair <= set(keys):
                out.add(corner(self.rect))
        return out

    def explored_cells(self) -> Set[Site]:
        return self.rect.cells() | self.frame_cells()

    def projected(self) -> Tuple[int, int, str]:
        return (self.rect.width, self.rect.height, self.state)


# ---------------------------------------------------------------------------
# Closures
# ---------------------------------------------------------------------------

_NEIGHBOURS = ((1, 0), (-1, 0), (0, 1), (0, -1))
_DIAGONALS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def closure_two_neighbour(infected: Iterable[Site],
                          box: Optional[Rectangle] = None) -> Set[Site]:
    """Least fixpoint of the two-infected-neighbours rule."""
    cur = set(infected)
    inside = (lambda s: True) if box is None else (lambda s: s in box)
    frontier = set(cur)
    while frontier:
        candidates = set()
        for (x, y) in frontier:
            for dx, dy in _NEIGHBOURS:
                s = (x + dx, y + dy)
                if s not in cur and inside(s):
                    candidates.add(s)
        frontier = set()
        for (x, y) in candidates:
            n = sum((x + dx, y + dy) in cur for dx, dy in _NEIGHBOURS)
            if n >= 2:
                cur.add((x, y))
                frontier.add((x, y))
    return cur


def closure_frobose(infected: Iterable[Site],
                    box: Optional[Rectangle] = None) -> Set[Site]:
    """Least fixpoint of the three-infected-corners rule: a site completing
    a unit square whose other three corners are infected becomes infected."""
    cur = set(infected)
    inside = (lambda s: True) if box is None else (lambda s: s in box)

    def infectable(x, y):
        for dx, dy in _DIAGONALS:
            if ((x + dx, y + dy) in cur and (x + dx, y) in cur
                    and (x, y + dy) in cur):
                return True
        return False

    frontier = set(cur)
    while frontier:
        candidates = set()
        for (x, y) in frontier:
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    s = (x + dx, y + dy)
                    if s not in cur and inside(s):
                        candidates.add(s)
        frontier = set()
        for (x, y) in candidates:
            if infectable(x, y):
                cur.add((x, y))
                frontier.add((x, y))
    return cur


def _rect_distance(r1: Rectangle, r2: Rectangle) -> int:
    dx = max(r1.a - (r2.c - 1), r2.a - (r1.c - 1), 0)
    dy = max(r1.b - (r2.d - 1), r2.b - (r1.d - 1), 0)
    return dx + dy


def rectangles_process_closure(infected: Iterable[Site], model: str) -> Set[Site]:
    """Closure via iterated merging of rectangles at graph distance <= 2
    (two-neighbour) or <= 1 (Frobose)."""
    maxdist = {"two-neighbour": 2, "frobose": 1}[model]
    rects: List[Rectangle] = [Rectangle(x, y, x + 1, y + 1) for x, y in set(infected)]
    merged = True
    while merged:
        merged = False
        n = len(rects)
        for i in range(n):
            for j in range(i + 1, n):
                if _rect_distance(rects[i], rects[j]) <= maxdist:
                    ri, rj = rects[i], rects[j]
                    union = Rectangle(min(ri.a, rj.a), min(ri.b, rj.b),
                                      max(ri.c, rj.c), max(ri.d, rj.d))
                    rects[i] = union
                    del rects[j]
                    merged = True
                    break
            if merged:
                break
    out: Set[Site] = set()
    for r in rects:
        out |= r.cells()
    return out


def _local_closure(infected, germs, queue, box, model) -> Set[Site]:
    """Worklist engine shared by the local closures and crossings.

    Every cell enters the queue at most once, when it becomes a germ, and
    triggers O(1) rule checks on its neighbourhood; rule-created infections
    are always germ-adjacent, so they join the germ set immediately.
    """
    inf = set(infected) | germs
    if box is None:
        xa = ya = -(1 << 60)
        xc = yc = 1 << 60
    else:
        xa, ya, xc, yc = box.a, box.b, box.c, box.d
    frobose = model == "frobose"
    while queue:
        gx, gy = queue.pop()
        for dx, dy in _NEIGHBOURS:
            s = (gx + dx, gy + dy)
            if s in inf and s not in germs:
                germs.add(s)
                queue.append(s)
        # cells whose infection rule may have just been enabled
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                yx, yy = gx + dx, gy + dy
                if not (xa <= yx < xc and ya <= yy < yc):
                    continue
                y = (yx, yy)
                if y in inf:
                    continue
                if frobose:
                    hit = False
                    for ex, ey in _DIAGONALS:
                        if ((yx + ex, yy + ey) in inf
                                and (yx + ex, yy) in inf
                                and (yx, yy + ey) in inf
                                and ((yx + ex, yy) in germs
                                     or (yx, yy + ey) in germs)):
                            hit = True
                            break
                else:
                    ninf = sum((yx + ex, yy + ey) in inf
                               for ex, ey in _NEIGHBOURS)
                    ngerm = any((yx + ex, yy + ey) in germs
                                for ex, ey in _NEIGHBOURS)
                    hit = ninf >= 2 and ngerm
                if hit:
                    inf.add(y)
                    germs.add(y)   # germ-adjacent by construction
                    queue.append(y)
    return germs


def local_closure_two_neighbour(infected: Iterable[Site], germ: Site,
                                box: Optional[Rectangle] = None) -> Set[Site]:
    """Germ set of the local two-neighbour dynamics: a healthy site with at
    least two infected neighbours, one of them a germ, becomes a germ."""
    inf = set(infected)
    if germ not in inf:
        raise ValueError("germ must be infected")
    return _local_closure(inf, {germ}, [germ], box, "two-neighbour")


def local_closure_frobose(infected: Iterable[Site], germ: Site,
                          box: Optional[Rectangle] = None) -> Set[Site]:
    """Germ set of the local Frobose dynamics: the unit-square rule where
    at least one of the two orthogonal corners is a germ."""
    inf = set(infected)
    if germ not in inf:
        raise ValueError("germ must be infected")
    return _local_closure(inf, {germ}, [germ], box, "frobose")


def infection_time(infected: Iterable[Site], site: Site, model: str,
                   box: Optional[Rectangle] = None) -> float:
    """First step at which site is infected; math.inf if never."""
    cur = set(infected)
    if site in cur:
        return 0
    inside = (lambda s: True) if box is None else (lambda s: s in box)
    t = 0
    while True:
        t += 1
        candidates = set()
        for (x, y) in cur:
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    s = (x + dx, y + dy)
                    if s not in cur and inside(s):
                        candidates.add(s)
        new = set()
        for (x, y) in candidates:
            if model == "two-neighbour":
                if sum((x + dx, y + dy) in cur for dx, dy in _NEIGHBOURS) >= 2:
                    new.add((x, y))
            else:
                for dx, dy in _DIAGONALS:
                    if ((x + dx, y + dy) in cur and (x + dx, y) in cur
                            and (x, y + dy) in cur):
                        new.add((x, y))
                        break
        if not new:
            return math.inf
        cur |= new
        if site in cur:
            return t


# ---------------------------------------------------------------------------
# Rectangle events
# ---------------------------------------------------------------------------

def occupied(cells: Iterable[Site], infected: Set[Site]) -> bool:
    return any(s in infected for s in cells)


def internally_filled(rect: Rectangle, infected: Set[Site], model: str) -> bool:
    inside = {s for s in infected if s in rect}
    closure = (closure_frobose if model == "frobose"
               else closure_two_neighbour)(inside, rect)
    return len(closure) == rect.width * rect.height


def locally_internally_filled(rect: Rectangle, infected: Set[Site],
                              model: str) -> bool:
    inside = {s for s in infected if s in rect}
    local = (local_closure_frobose if model == "frobose"
             else local_closure_two_neighbour)
    full = rect.width * rect.height
    for germ in inside:
        if len(local(inside, germ, rect)) == full:
            return True
    return False


def _crossing_from_available(small: Rectangle, big: Rectangle,
                             available: Set[Site], model: str) -> bool:
    if not available and big != small:
        return False
    germs = small.cells()
    # the small rectangle is entirely germed; only the boundary cells that
    # face the growth region can trigger anything
    queue = []
    for (x, y) in germs:
        if ((x == small.a and big.a < small.a)
                or (x == small.c - 1 and big.c > small.c)
                or (y == small.b and big.b < small.b)
                or (y == small.d - 1 and big.d > small.d)):
            queue.append((x, y))
    out = _local_closure(available, germs, queue, big, model)
    return len(out) == big.width * big.height


def crossing(small: Rectangle, big: Rectangle, infected: Set[Site],
             model: str) -> bool:
    """A filled small rectangle plus the infections inside big fills big,
    under the local dynamics seeded in the small rectangle."""
    if not big.contains_rect(small):
        raise ValueError("need small contained in big")
    available = {s for s in big.cells() if s in infected}
    return _crossing_from_available(small, big, available, model)


def no_horizontal_gaps(rect: Rectangle, infected: Set[Site]) -> bool:
    """Every row of the rectangle contains an infection."""
    rows = {y for (x, y) in infected if (x, y) in rect}
    return len(rows) == rect.height


def no_vertical_gaps(rect: Rectangle, infected: Set[Site]) -> bool:
    """Every column of the rectangle contains an infection."""
    cols = {x for (x, y) in infected if (x, y) in rect}
    return len(cols) == rect.width


def traversable(rect: Rectangle, infected: Set[Site], direction: str) -> bool:
    """East-traversable: the last column is occupied and every pair of
    consecutive columns is occupied; other directions by symmetry."""
    pts = [s for s in infected if s in rect]
    if direction == "east":
        coords = sorted({x - rect.a for (x, y) in pts})
        n = rect.width
    elif direction == "west":
        coords = sorted({rect.c - 1 - x for (x, y) in pts})
        n = rect.width
    elif direction == "north":
        coords = sorted({y - rect.b for (x, y) in pts})
        n = rect.height
    elif direction == "south":
        coords = sorted({rect.d - 1 - y for (x, y) in pts})
        n = rect.height
    else:
        raise ValueError(f"unknown direction {direction!r}")
    if n - 1 not in coords:
        return False
    # an occupied line in every window {i-1, i}, i = 1..n-1
    present = set(coords)
    return all((i in present) or (i - 1 in present) for i in range(1, n))


_EVENTS = {
    "I": lambda rect, A, **kw: internally_filled(rect, A, "two-neighbour"),
    "IF": lambda rect, A, **kw: internally_filled(rect, A, "frobose"),
    "I_loc": lambda rect, A, **kw: locally_internally_filled(rect, A, "two-neighbour"),
    "IF_loc": lambda rect, A, **kw: locally_internally_filled(rect, A, "frobose"),
    "C": lambda rect, A, small=None, **kw: crossing(small, rect, A, "two-neighbour"),
    "CF": lambda rect, A, small=None, **kw: crossing(small, rect, A, "frobose"),
    "O": lambda rect, A, **kw: occupied(rect.cells(), A),
    "G-": lambda rect, A, **kw: no_horizontal_gaps(rect, A),
    "G|": lambda rect, A, **kw: no_vertical_gaps(rect, A),
    "T_east": lambda rect, A, **kw: traversable(rect, A, "east"),
    "T_west": lambda rect, A, **kw: traversable(rect, A, "west"),
    "T_north": lambda rect, A, **kw: traversable(rect, A, "north"),
    "T_south": lambda rect, A, **kw: traversable(rect, A, "south"),
}


def event_holds(event_id: str, rect: Rectangle, infected: Set[Site],
                **kwargs) -> bool:
    """Evaluate a named rectangle event on a configuration."""
    try:
        fn = _EVENTS[event_id]
    except KeyError:
        raise ValueError(f"unknown event {event_id!r}") from None
    return fn(rect, infected, **kwargs)


# ---------------------------------------------------------------------------
# Framed-rectangle exploration
# ---------------------------------------------------------------------------

# Candidate transitions in table row order: (src, dst, alpha, beta, gamma, delta)
_EXPLORE_CANDIDATES = [
    ("0", "1", 0, 0, 0, 0), ("1", "2", 0, 0, 0, 0), ("2", "3", 0, 0, 0, 0),
    ("3", "4", 0, 0, 0, 0), ("2'", "3", 0, 0, 0, 0), ("1'", "2'", 0, 0, 0, 0),
    ("1''", "2", 0, 0, 0, 0),
    ("0", "0", 0, 0, 1, 0), ("1", "1", 0, 0, 0, 1), ("2", "2", 1, 0, 0, 0),
    ("3", "3", 0, 1, 0, 0), ("2'", "2'", 0, 0, 1, 0), ("1'", "1'", 0, 0, 0, 1),
    ("1''", "1''", 0, 0, 1, 0),
    ("1", "0", 0, 0, 1, 1), ("2", "1", 1, 0, 0, 1), ("3", "2", 1, 1, 0, 0),
    ("3", "2'", 0, 1, 1, 0), ("2'", "1'", 0, 0, 1, 1), ("1'", "0", 1, 0, 0, 1),
    ("1''", "0", 0, 0, 1, 1),
    ("2", "0", 1, 0, 1, 1), ("2'", "0", 1, 0, 1, 1), ("3", "1", 1, 1, 0, 1),
    ("3", "1'", 0, 1, 1, 1), ("3", "1''", 1, 1, 1, 0), ("3", "0", 1, 1, 1, 1),
]


def _transition_event(current: FramedRectangle, new: FramedRectangle,
                      infected: Set[Site], revealed: Set[Site]) -> bool:
    for cell in new.frame_cells():
        if cell in infected and cell not in revealed:
            return False
    if new.rect == current.rect:
        return True
    available = {s for s in new.rect.cells()
                 if s in infected and s not in revealed}
    return _crossing_from_available(current.rect, new.rect, available,
                                    "frobose")


def explore(infected: Set[Site], seed_rect: Rectangle,
            box: Rectangle,
            max_phi: Optional[int] = None) -> List[FramedRectangle]:
    """Deterministic exploration of a configuration from a seed rectangle.

    From the current framed rectangle the candidate transitions are tested
    in table row order on the not-yet-revealed infections, and the unique
    one that holds is taken.  Stops at frame state 4, when the next reveal
    could leave the box, or (when max_phi is given) as soon as the
    semi-perimeter reaches max_phi.
    """
    cur = FramedRectangle(seed_rect, "0")
    out = [cur]
    revealed = cur.explored_cells()
    while cur.state != "4":
        if max_phi is not None and cur.rect.phi >= max_phi:
            break
        if not box.contains_rect(cur.rect.expand(2)):
            break  # censored at the box boundary
        chosen = None
        for (src, dst, al, be, ga, de) in _EXPLORE_CANDIDATES:
            if src != cur.state:
                continue
            new = FramedRectangle(cur.rect.grow(al, be, ga, de), dst)
            if _transition_event(cur, new, infected, revealed):
                if chosen is not None:
                    raise AssertionError(
                        f"transition events not disjoint at {cur}")
                chosen = new
        if chosen is None:
            raise AssertionError(f"no transition event holds at {cur}")
        cur = chosen
        revealed |= cur.explored_cells()
        out.append(cur)
    return out


# ---------------------------------------------------------------------------
# Monte Carlo and exhaustive estimators
# ---------------------------------------------------------------------------

def mc_estimate(event: Callable[[Set[Site]], bool], cells: Iterable[Site],
                params: ModelParams, n: int, seed: int) -> Dict[str, object]:
    """Frequency estimate of an event over i.i.d. Bernoulli configurations
    on the given cells, with exact binomial standard error."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cells = sorted(set(cells))
    rng = np.random.Generator(np.random.Philox(seed))
    hits = 0
    for _ in range(n):
        mask = rng.random(len(cells)) < params.p
        config = {c for c, m in zip(cells, mask) if m}
        if event(config):
            hits += 1
    p_hat = hits / n
    return {
        "p_hat": p_hat,
        "std_err": math.sqrt(p_hat * (1.0 - p_hat) / n),
        "n": n,
        "seed": seed,
        "algorithm": "philox",
    }


def exact_event_prob(event: Callable[[Set[Site]], bool], cells: Iterable[Site],
                     params: ModelParams) -> float:
    """Exact probability by enumeration over all 2^|cells| configurations."""
    cells = sorted(set(cells))
    m = len(cells)
    if m > EXACT_ENUMERATION_MAX_CELLS:
        raise ValueError(f"{m} cells exceeds enumeration bound "
                         f"{EXACT_ENUMERATION_MAX_CELLS}")
    p = params.p
    total = 0.0
    for bits in range(1 << m):
        config = {cells[i] for i in range(m) if bits >> i & 1}
        if event(config):
            k = len(config)
            total += p ** k * (1.0 - p) ** (m - k)
    return total
