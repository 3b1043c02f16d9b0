"""Per-component search run inside an xy-trial.

After the level decomposition and family normalization, the still-active
vertices (unknowns plus unpartnered blacks) split into independent
components.  Each is shrunk further by cycle-pattern forcings on the
anchor/L3 part and local rules on the L4 part, then finished by a seeded
backtracking search:

  * short induced cycles through anchors pin colors (an anchor's partner
    must sit on any odd cycle through it whose other edges cannot match);
  * an L4 vertex with no live L4 neighbor is white; an isolated live L4
    edge is matched; a five-cycle in L3/L4 with a single L4-L4 edge forces
    that edge;
  * with long-induced-path freedom verified, two extra rules apply (L4
    degree >= 3 means white; a four-cycle with one L3 corner pins that
    corner as its anchor's partner) and surviving L4 components must be
    short paths or cycles of length 3, 6 or 9;
  * seeds: either the feasible colorings of the first live L4 component,
    or one black member of a designated family; branching completes the
    rest under a budget.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coloring import BLACK, WHITE, Coloring, assign_and_propagate, force_pair
from .decomposition import XyDecomposition
from .graph import bits, connected_components
from .patterns import ScanBudget, enumerate_short_induced_cycles


@dataclass
class ComponentTask:
    mask: int
    seed_budget: int
    branch_budget: int
    cycle_scan_limit: int = 50_000


@dataclass
class ComponentResult:
    status: str  # "colored" | "infeasible" | "budget" | "assumption"
    detail: str | None = None
    branches: int = 0


def _anchor_mask(dec: XyDecomposition) -> int:
    mask = 0
    for u in dec.anchors:
        mask |= 1 << u
    return mask


def _collect_cycles(dec: XyDecomposition, scan: int, limit: int) -> list[tuple[int, ...]]:
    found: list[tuple[int, ...]] = []
    try:
        for cyc in enumerate_short_induced_cycles(dec.g, scan, 9, limit):
            found.append(cyc)
    except ScanBudget:
        pass  # partial scan only weakens the reductions, never soundness
    return found


def reduce_cycles_anchor_l3(
    dec: XyDecomposition, comp: int, p9_trusted: bool, node_limit: int = 50_000
) -> tuple[str, str | None]:
    """Forcings from short induced cycles in the anchor/L3 part.

    On any such cycle, edges inside L3 cannot match, so matching edges on
    the cycle touch anchors only.  An odd cycle needs a matching edge,
    an even one here cannot carry exactly one; counting anchors settles
    what is forced.
    """
    g, c = dec.g, dec.coloring
    amask = _anchor_mask(dec) & comp
    scan = amask | (dec.l3 & comp)
    if not scan:
        return "ok", None
    for cyc in _collect_cycles(dec, scan, node_limit):
        size = len(cyc)
        apos = [i for i, v in enumerate(cyc) if amask >> v & 1]
        if len(apos) == 1:
            p = apos[0]
            u = cyc[p]
            n1, n2 = cyc[(p - 1) % size], cyc[(p + 1) % size]
            if size % 2 == 0:
                # no matching edge fits: both anchor edges stay out
                targets = ((1 << n1) | (1 << n2)) & c.unknown_mask()
            else:
                # the partner is one of the two cycle neighbors
                fam = dec.families[dec.fam_of[u]]
                targets = fam.members & ~(1 << n1) & ~(1 << n2) & c.unknown_mask()
            for v in bits(targets):
                bad = c._set(v, WHITE)
                if bad:
                    return "infeasible", str(bad)
        elif len(apos) == 2 and size in (7, 9):
            p, q = apos
            gap = (q - p) % size
            forced = -1
            if size == 7 and {gap, size - gap} == {3, 4}:
                # unique vertex two steps from both anchors must be black
                for i, v in enumerate(cyc):
                    d1 = min((i - p) % size, (p - i) % size)
                    d2 = min((i - q) % size, (q - i) % size)
                    if d1 >= 2 and d2 >= 2:
                        forced = v
            elif size == 9 and {gap, size - gap} == {4, 5}:
                forced = cyc[(p + 2) % size] if gap == 4 else cyc[(q + 2) % size]
            if forced >= 0:
                bad = c._set(forced, BLACK)
                if bad:
                    return "infeasible", str(bad)
        elif len(apos) == 3 and size == 9 and p9_trusted:
            gaps = {(apos[1] - apos[0]) % 9, (apos[2] - apos[1]) % 9, (apos[0] - apos[2]) % 9}
            if gaps == {3}:
                # the anchor/L3 component must be exactly the three families
                allowed = 0
                for i in apos:
                    u = cyc[i]
                    allowed |= (1 << u) | dec.families[dec.fam_of[u]].members
                comp3 = 0
                for piece in connected_components(g, scan):
                    if piece >> cyc[0] & 1:
                        comp3 = piece
                        break
                active3 = comp3 & (c.unknown_mask() | c.unmated_black_mask(comp3))
                if active3 & ~allowed:
                    return (
                        "assumption",
                        "three-anchor nine-cycle with vertices outside its families",
                    )
        bad = c.propagate()
        if bad:
            return "infeasible", str(bad)
    return "ok", None


def reduce_l4(
    dec: XyDecomposition, comp: int, p9_trusted: bool, node_limit: int = 50_000
) -> tuple[str, str | None]:
    """Local rules on the L4 part, run to a fixpoint."""
    g, c = dec.g, dec.coloring
    l3c = dec.l3 & comp
    l4c = dec.l4 & comp

    # structural one-shot rules first: five-cycles with a single L4-L4 edge
    if l3c | l4c:
        for cyc in _collect_cycles(dec, l3c | l4c, node_limit):
            if len(cyc) != 5:
                continue
            inner = [
                (a, b)
                for a, b in zip(cyc, cyc[1:] + cyc[:1])
                if dec.l4 >> a & 1 and dec.l4 >> b & 1
            ]
            if len(inner) == 1:
                a, b = inner[0]
                bad = force_pair(c, a, b)
                if bad:
                    return "infeasible", str(bad)
                dec.forced.append((a, b) if a < b else (b, a))
                bad = c.propagate()
                if bad:
                    return "infeasible", str(bad)

    if p9_trusted and l4c:
        # four-cycle with one L3 corner: that corner is its anchor's partner
        amask = _anchor_mask(dec)
        for b in bits(l4c):
            row_b = g.rows[b] & l4c
            for a in bits(row_b):
                for d in bits(row_b >> (a + 1) << (a + 1)):
                    if g.has_edge(a, d):
                        continue
                    for t in bits(g.rows[a] & g.rows[d] & l3c & ~g.rows[b]):
                        anchors_t = g.rows[t] & amask
                        if anchors_t.bit_count() == 1:
                            u = next(bits(anchors_t))
                            bad = force_pair(c, u, t)
                            if bad:
                                return "infeasible", str(bad)
                            dec.forced.append((u, t) if u < t else (t, u))
                            bad = c.propagate()
                            if bad:
                                return "infeasible", str(bad)

    for _ in range(g.n + 1):
        changed = False
        unknown4 = l4c & c.unknown_mask()
        for v in bits(unknown4):
            cand = g.rows[v] & dec.l4 & ~c.white
            if not cand:
                bad = c._set(v, WHITE)
                if bad:
                    return "infeasible", str(bad)
                changed = True
            elif p9_trusted and cand.bit_count() >= 3:
                # high degree in the live L4 graph rules out matching here
                bad = c._set(v, WHITE)
                if bad:
                    return "infeasible", str(bad)
                changed = True
            elif cand.bit_count() == 1:
                u = next(bits(cand))
                if c.color_of(u) == 0 and g.rows[u] & dec.l4 & ~c.white == 1 << v:
                    # isolated live edge: one endpoint black forces the other
                    bad = force_pair(c, v, u)
                    if bad:
                        return "infeasible", str(bad)
                    dec.forced.append((v, u) if v < u else (u, v))
                    changed = True
        bad = c.propagate()
        if bad:
            return "infeasible", str(bad)
        if not changed:
            return "ok", None
    return "ok", None


def validate_l4_shape(dec: XyDecomposition, comp: int) -> tuple[bool, str | None]:
    """Surviving live L4 components must be short paths (3..8 vertices) or
    cycles of length 3, 6 or 9; anything else breaks the structure the
    long-path-free guarantee promises."""
    g, c = dec.g, dec.coloring
    active4 = dec.l4 & comp & (c.unknown_mask() | c.unmated_black_mask(comp))
    for piece in connected_components(g, active4):
        size = piece.bit_count()
        degs = [(g.rows[v] & piece).bit_count() for v in bits(piece)]
        if any(d > 2 for d in degs):
            return False, f"L4 component with branching vertex (size {size})"
        ends = sum(1 for d in degs if d < 2)
        if ends == 0:
            if size not in (3, 6, 9):
                return False, f"L4 cycle of length {size}"
        else:
            if not 3 <= size <= 8:
                return False, f"L4 path on {size} vertices"
    return True, None


def _family_state(dec: XyDecomposition, comp: int, c: Coloring):
    """Families of this component still awaiting a partner, with live masks."""
    out = []
    for fam in dec.families:
        if not comp >> fam.anchor & 1:
            continue
        if c.mate[fam.anchor] >= 0:
            continue
        alive = fam.members & c.unknown_mask()
        if alive:
            out.append((fam, alive))
    return out


def _enumerate_l4_colorings(
    dec: XyDecomposition, piece: int, cap: int
) -> tuple[list[list[tuple[int, int]]], bool]:
    """All locally consistent colorings of one live L4 component, as
    assignment lists over its unknown vertices; capped."""
    g, c = dec.g, dec.coloring
    verts = list(bits(piece))
    colorings: list[list[tuple[int, int]]] = []
    assign: dict[int, int] = {}
    capped = False

    def local_color(v: int) -> int:
        if v in assign:
            return assign[v]
        return c.color_of(v)

    def consistent(v: int, color: int) -> bool:
        row = g.rows[v] & piece
        if color == WHITE:
            for u in bits(row):
                cu = local_color(u)
                if cu == WHITE:
                    return False
            return True
        blacks = [u for u in bits(row) if local_color(u) == BLACK]
        return len(blacks) <= 1

    def finished_ok() -> bool:
        for v in verts:
            if local_color(v) != BLACK:
                continue
            row = g.rows[v] & piece
            blacks = [u for u in bits(row) if local_color(u) == BLACK]
            if len(blacks) != 1:
                return False
        return True

    def rec(idx: int) -> bool:
        nonlocal capped
        if len(colorings) >= cap:
            capped = True
            return False
        if idx == len(verts):
            if finished_ok():
                colorings.append([(v, assign[v]) for v in verts if v in assign])
            return True
        v = verts[idx]
        if c.color_of(v) != 0:
            return rec(idx)
        for color in (BLACK, WHITE):
            if consistent(v, color):
                assign[v] = color
                if not rec(idx + 1):
                    del assign[v]
                    return False
                del assign[v]
        return True

    rec(0)
    return colorings, capped


def _build_seeds(
    dec: XyDecomposition, task: ComponentTask, c: Coloring
) -> tuple[list[list[tuple[int, int]]], bool]:
    """Seed assignments covering every completion of the component.

    Returns (seeds, capped); capped means exhausting the seeds must report
    a budget stop, not infeasibility.
    """
    comp = task.mask
    active4 = dec.l4 & comp & (c.unknown_mask() | c.unmated_black_mask(comp))
    if active4:
        piece = connected_components(dec.g, active4)[0]
        cap = max(3, task.seed_budget)
        return _enumerate_l4_colorings(dec, piece, cap)

    fams = _family_state(dec, comp, c)
    if not fams:
        return [], False
    strong = [
        (fam, alive)
        for fam, alive in fams
        if (alive & fam.out_mask).bit_count() >= 2
    ]
    pool = strong if strong else fams
    fam, alive = min(pool, key=lambda fa: (fa[1].bit_count(), fa[0].anchor))
    pinned = alive & (fam.out_mask | fam.internal_edge)
    free = alive & ~pinned
    order = list(bits(pinned))
    if free:
        # interchangeable members: trying the lowest one covers them all
        order.append(next(bits(free)))
    return [[(t, BLACK)] for t in order], False


def _pick_branch_vertex(dec: XyDecomposition, comp: int, c: Coloring) -> int:
    fams = _family_state(dec, comp, c)
    if fams:
        fam, alive = min(fams, key=lambda fa: (fa[1].bit_count(), fa[0].anchor))
        return next(bits(alive))
    rest = c.unknown_mask(comp)
    if rest:
        return next(bits(rest))
    return -1


def solve_component(
    dec: XyDecomposition, task: ComponentTask, p9_trusted: bool
) -> ComponentResult:
    """Color one active component completely, or report why not."""
    c = dec.coloring
    comp = task.mask

    status, detail = reduce_cycles_anchor_l3(dec, comp, p9_trusted, task.cycle_scan_limit)
    if status != "ok":
        return ComponentResult(status, detail)
    status, detail = reduce_l4(dec, comp, p9_trusted, task.cycle_scan_limit)
    if status != "ok":
        return ComponentResult(status, detail)

    if not c.unknown_mask(comp) and not c.unmated_black_mask(comp):
        return ComponentResult("colored")

    if p9_trusted:
        ok, detail = validate_l4_shape(dec, comp)
        if not ok:
            return ComponentResult("assumption", detail)

    seeds, capped = _build_seeds(dec, task, c)
    base = c.snapshot()
    branches = 0
    for seed in seeds:
        c.restore(base)
        bad = None
        for v, color in seed:
            bad = assign_and_propagate(c, v, color)
            if bad:
                break
        if bad:
            continue
        status, used = _complete(dec, comp, c, task.branch_budget - branches)
        branches += used
        if status == "colored":
            return ComponentResult("colored", branches=branches)
        if status == "budget":
            c.restore(base)
            return ComponentResult(
                "budget", f"branch budget {task.branch_budget} exhausted", branches
            )
    c.restore(base)
    if capped:
        return ComponentResult(
            "budget", f"seed budget {task.seed_budget} exhausted", branches
        )
    return ComponentResult(
        "infeasible", "every seed assignment failed", branches
    )


def _complete(
    dec: XyDecomposition, comp: int, c: Coloring, budget: int
) -> tuple[str, int]:
    """Backtracking completion of the component; black is tried first."""
    v = _pick_branch_vertex(dec, comp, c)
    if v < 0:
        if c.unmated_black_mask(comp):
            return "infeasible", 0
        return "colored", 0
    branches = 0
    stack = [(c.snapshot(), v, BLACK)]
    while stack:
        snap, v, color = stack.pop()
        c.restore(snap)
        if color == BLACK:
            stack.append((snap, v, WHITE))
        branches += 1
        if branches > budget:
            return "budget", branches
        if assign_and_propagate(c, v, color) is not None:
            continue
        u = _pick_branch_vertex(dec, comp, c)
        if u < 0:
            if c.unmated_black_mask(comp):
                continue
            return "colored", branches
        stack.append((c.snapshot(), u, BLACK))
    return "infeasible", branches
