"""Deterministic node-link-group layout.

Nodes are packed inside per-group circles with an incremental front-chain
packing; group circles are spread by a seeded repulsion/centering simulation
with hard collision resolution; convex hulls outline each group. Identical
inputs (snapshot, config, pinned, seed) produce bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping, Sequence

from .graph import GraphSnapshot

# Geometric tolerance for the overlap/containment guarantees, in canvas units.
EPSILON = 0.5


class SizeBy(Enum):
    CONSTANT = "constant"
    DEGREE = "degree"
    ASIL_RANK = "asil-rank"

    @classmethod
    def from_token(cls, token: str) -> "SizeBy":
        normalized = token.strip().lower().replace("_", "-")
        for member in cls:
            if member.value == normalized:
                return member
        raise ValueError(f"unknown size encoding {token!r}; use constant, degree, or asil-rank")


GROUPABLE_ATTRIBUTES = ("type", "asil", "severity", "exposure", "controllability")


@dataclass(frozen=True)
class LayoutConfig:
    group_by: str = "type"
    size_by: SizeBy = SizeBy.CONSTANT
    color_by: str = "type"  # passed through to clients, not used server-side
    seed: int = 0
    iterations: int = 300
    base_radius: float = 6.0
    group_padding: float = 12.0
    canvas: tuple[float, float] = (1200.0, 800.0)

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.base_radius <= 0:
            raise ValueError("base_radius must be > 0")
        if self.group_padding < 0:
            raise ValueError("group_padding must be >= 0")


@dataclass(frozen=True)
class GroupCircle:
    key: str
    label: str
    cx: float
    cy: float
    radius: float
    member_ids: tuple[str, ...]


@dataclass(frozen=True)
class NodePlacement:
    x: float
    y: float
    r: float
    group: str


@dataclass(frozen=True)
class LayoutResult:
    project_id: str
    node_positions: dict[str, NodePlacement]
    groups: tuple[GroupCircle, ...]
    hulls: dict[str, tuple[tuple[float, float], ...]]

    def group_centers(self) -> dict[str, tuple[float, float]]:
        return {g.key: (g.cx, g.cy) for g in self.groups}

    def to_dict(self) -> dict:
        return {
            "project": self.project_id,
            "nodes": {
                node_id: {"x": p.x, "y": p.y, "r": p.r, "group": p.group}
                for node_id, p in self.node_positions.items()
            },
            "groups": [
                {
                    "key": g.key,
                    "label": g.label,
                    "cx": g.cx,
                    "cy": g.cy,
                    "R": g.radius,
                    "members": list(g.member_ids),
                }
                for g in self.groups
            ],
            "hulls": {key: [list(v) for v in vertices] for key, vertices in self.hulls.items()},
        }


class _Lcg:
    """Small deterministic generator so layouts never depend on global RNG state."""

    def __init__(self, seed: int):
        self._state = (seed * 2654435761 + 104729) & 0xFFFFFFFF or 1

    def next(self) -> float:
        self._state = (self._state * 1664525 + 1013904223) & 0xFFFFFFFF
        return self._state / 0x100000000


class _Circle:
    __slots__ = ("id", "x", "y", "r")

    def __init__(self, circle_id: str, r: float):
        self.id = circle_id
        self.x = 0.0
        self.y = 0.0
        self.r = r


# Front-chain packing: each new circle is placed tangent to a chain pair; the
# chain is advanced past any intersecting circle before retrying.


class _ChainNode:
    __slots__ = ("circle", "next", "previous")

    def __init__(self, circle: _Circle):
        self.circle = circle
        self.next: "_ChainNode | None" = None
        self.previous: "_ChainNode | None" = None


def _place(b: _Circle, a: _Circle, c: _Circle) -> None:
    """Position c tangent to both b and a, on the outer side of the b->a axis."""
    dx = b.x - a.x
    dy = b.y - a.y
    d2 = dx * dx + dy * dy
    if d2:
        a2 = (a.r + c.r) ** 2
        b2 = (b.r + c.r) ** 2
        if a2 > b2:
            x = (d2 + b2 - a2) / (2 * d2)
            y = math.sqrt(max(0.0, b2 / d2 - x * x))
            c.x = b.x - x * dx - y * dy
            c.y = b.y - x * dy + y * dx
        else:
            x = (d2 + a2 - b2) / (2 * d2)
            y = math.sqrt(max(0.0, a2 / d2 - x * x))
            c.x = a.x + x * dx - y * dy
            c.y = a.y + x * dy + y * dx
    else:
        c.x = a.x + c.r
        c.y = a.y


def _intersects(a: _Circle, b: _Circle) -> bool:
    dr = a.r + b.r - 1e-6
    dx = b.x - a.x
    dy = b.y - a.y
    return dr > 0 and dr * dr > dx * dx + dy * dy


def _score(node: _ChainNode) -> float:
    a = node.circle
    b = node.next.circle
    ab = a.r + b.r
    dx = (a.x * b.r + b.x * a.r) / ab
    dy = (a.y * b.r + b.y * a.r) / ab
    return dx * dx + dy * dy


def _pack_circles(circles: Sequence[_Circle]) -> None:
    n = len(circles)
    if n == 0:
        return
    first = circles[0]
    first.x = first.y = 0.0
    if n == 1:
        return
    second = circles[1]
    first.x = -second.r
    second.x = first.r
    second.y = 0.0
    if n == 2:
        return
    _place(second, first, circles[2])

    a = _ChainNode(first)
    b = _ChainNode(second)
    c = _ChainNode(circles[2])
    a.next = c.previous = b
    b.next = a.previous = c
    c.next = b.previous = a

    i = 3
    while i < n:
        circle = circles[i]
        # The insertion edge is always (a, b) with b = a.next.
        _place(a.circle, b.circle, circle)
        node = _ChainNode(circle)

        # Walk outward from the insertion edge; on intersection, shrink the
        # chain to the intersected node and retry the same circle.
        j = b.next
        k = a.previous
        sj = b.circle.r
        sk = a.circle.r
        spliced = False
        while True:
            if sj <= sk:
                if _intersects(j.circle, node.circle):
                    b = j
                    a.next = b
                    b.previous = a
                    spliced = True
                    break
                sj += j.circle.r
                j = j.next
            else:
                if _intersects(k.circle, node.circle):
                    a = k
                    a.next = b
                    b.previous = a
                    spliced = True
                    break
                sk += k.circle.r
                k = k.previous
            if j is k.next:
                break
        if spliced:
            continue

        node.previous = a
        node.next = b
        a.next = b.previous = node
        b = node

        # Restart insertion from the chain edge nearest the origin.
        best = _score(a)
        cursor = b.next
        while cursor is not b:
            candidate = _score(cursor)
            if candidate < best:
                a = cursor
                best = candidate
            cursor = cursor.next
        b = a.next
        i += 1


# Smallest enclosing circle of a set of circles: iterative Welzl-style search
# over a support basis of at most three circles.


def _encloses_not(a: _Circle, b: _Circle) -> bool:
    dr = a.r - b.r
    dx = b.x - a.x
    dy = b.y - a.y
    return dr < 0 or dr * dr < dx * dx + dy * dy


def _encloses_weak(a: _Circle, b: _Circle) -> bool:
    dr = a.r - b.r + max(a.r, b.r, 1.0) * 1e-9
    dx = b.x - a.x
    dy = b.y - a.y
    return dr > 0 and dr * dr > dx * dx + dy * dy


def _encloses_weak_all(a: _Circle, basis: list[_Circle]) -> bool:
    return all(_encloses_weak(a, b) for b in basis)


def _basis_circle_2(a: _Circle, b: _Circle) -> _Circle:
    dx = b.x - a.x
    dy = b.y - a.y
    dr = b.r - a.r
    length = math.sqrt(dx * dx + dy * dy)
    out = _Circle("", (length + a.r + b.r) / 2)
    out.x = (a.x + b.x + dx / length * dr) / 2
    out.y = (a.y + b.y + dy / length * dr) / 2
    return out


def _basis_circle_3(a: _Circle, b: _Circle, c: _Circle) -> _Circle:
    a2 = a.x - b.x
    a3 = a.x - c.x
    b2 = a.y - b.y
    b3 = a.y - c.y
    c2 = b.r - a.r
    c3 = c.r - a.r
    d1 = a.x * a.x + a.y * a.y - a.r * a.r
    d2 = d1 - b.x * b.x - b.y * b.y + b.r * b.r
    d3 = d1 - c.x * c.x - c.y * c.y + c.r * c.r
    ab = a3 * b2 - a2 * b3
    xa = (b2 * d3 - b3 * d2) / (ab * 2) - a.x
    xb = (b3 * c2 - b2 * c3) / ab
    ya = (a3 * d2 - a2 * d3) / (ab * 2) - a.y
    yb = (a2 * c3 - a3 * c2) / ab
    qa = xb * xb + yb * yb - 1
    qb = 2 * (a.r + xa * xb + ya * yb)
    qc = xa * xa + ya * ya - a.r * a.r
    if abs(qa) > 1e-6:
        r = -(qb + math.sqrt(max(0.0, qb * qb - 4 * qa * qc))) / (2 * qa)
    else:
        r = -qc / qb
    out = _Circle("", r)
    out.x = a.x + xa + xb * r
    out.y = a.y + ya + yb * r
    return out


def _basis_circle(basis: list[_Circle]) -> _Circle:
    if len(basis) == 1:
        a = basis[0]
        out = _Circle("", a.r)
        out.x, out.y = a.x, a.y
        return out
    if len(basis) == 2:
        return _basis_circle_2(basis[0], basis[1])
    return _basis_circle_3(basis[0], basis[1], basis[2])


def _extend_basis(basis: list[_Circle], p: _Circle) -> list[_Circle]:
    if _encloses_weak_all(p, basis):
        return [p]
    for a in basis:
        if _encloses_not(p, a) and _encloses_weak_all(_basis_circle_2(a, p), basis):
            return [a, p]
    for i in range(len(basis) - 1):
        for j in range(i + 1, len(basis)):
            a, b = basis[i], basis[j]
            if (
                _encloses_not(_basis_circle_2(a, b), p)
                and _encloses_not(_basis_circle_2(a, p), b)
                and _encloses_not(_basis_circle_2(b, p), a)
                and _encloses_weak_all(_basis_circle_3(a, b, p), basis)
            ):
                return [a, b, p]
    raise RuntimeError("enclosing-circle basis extension failed")


def _enclose(circles: Sequence[_Circle]) -> _Circle:
    items = list(circles)
    rng = _Lcg(len(items))
    for i in range(len(items) - 1, 0, -1):  # deterministic shuffle
        j = int(rng.next() * (i + 1))
        items[i], items[j] = items[j], items[i]
    basis: list[_Circle] = []
    enclosing: _Circle | None = None
    i = 0
    while i < len(items):
        p = items[i]
        if enclosing is not None and _encloses_weak(enclosing, p):
            i += 1
        else:
            basis = _extend_basis(basis, p)
            enclosing = _basis_circle(basis)
            i = 0
    return enclosing


def pack_group(members: Sequence[tuple[str, float]]) -> tuple[dict[str, tuple[float, float]], float]:
    """Pack member circles (id, radius) around the origin.

    Packing order is radius descending with id ascending as tie-break. Returns
    positions relative to the enclosing circle's center plus its radius.
    """
    if not members:
        raise ValueError("cannot pack an empty group")
    for member_id, radius in members:
        if radius <= 0:
            raise ValueError(f"member {member_id!r} has non-positive radius")
    circles = [_Circle(m, r) for m, r in sorted(members, key=lambda m: (-m[1], m[0]))]
    _pack_circles(circles)
    enclosing = _enclose(circles)
    positions = {c.id: (c.x - enclosing.x, c.y - enclosing.y) for c in circles}
    return positions, enclosing.r


def compute_hull(points: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    """Convex hull in counter-clockwise order (monotone chain).

    Degenerate inputs collapse: one distinct point yields itself, collinear
    points yield the two extreme endpoints.
    """
    if not points:
        raise ValueError("cannot hull an empty point set")
    unique = sorted(set(points))
    if len(unique) == 1:
        return [unique[0]]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[float, float]] = []
    for p in unique:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(unique):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:  # all points collinear
        return [unique[0], unique[-1]]
    return hull


def _resolve_collisions(
    centers: dict[str, list[float]],
    radii: Mapping[str, float],
    movable: set[str],
    order: Sequence[str],
    canvas_center: tuple[float, float],
    max_sweeps: int = 500,
    park_on_stall: bool = True,
) -> None:
    """Push overlapping circles apart until all pairs are separated.

    Pinned (non-movable) circles never move. Runs sweeps to a fixed point; if
    relaxation stalls, remaining movable offenders are re-seated on an outer
    ring, which cannot overlap anything.
    """
    pairs = [(a, b) for i, a in enumerate(order) for b in order[i + 1 :]]
    for sweep in range(max_sweeps):
        moved = False
        for a, b in pairs:
            a_movable = a in movable
            b_movable = b in movable
            if not a_movable and not b_movable:
                continue
            ax, ay = centers[a]
            bx, by = centers[b]
            required = radii[a] + radii[b]
            dx = bx - ax
            dy = by - ay
            distance = math.hypot(dx, dy)
            if distance >= required - 1e-9:
                continue
            if distance < 1e-12:
                angle = 2.399963229728653 * (sweep + 1)  # deterministic golden-angle nudge
                dx, dy = math.cos(angle), math.sin(angle)
                distance = 1.0
                correction = required
            else:
                correction = required - distance
            ux, uy = dx / distance, dy / distance
            if a_movable and b_movable:
                half = correction / 2
                centers[a][0] -= ux * half
                centers[a][1] -= uy * half
                centers[b][0] += ux * half
                centers[b][1] += uy * half
            elif a_movable:
                centers[a][0] -= ux * correction
                centers[a][1] -= uy * correction
            else:
                centers[b][0] += ux * correction
                centers[b][1] += uy * correction
            moved = True
        if not moved:
            return
    if not park_on_stall:
        return

    # Relaxation stalled: park still-overlapping movable circles outside everything.
    outer = max(
        math.hypot(centers[k][0] - canvas_center[0], centers[k][1] - canvas_center[1]) + radii[k]
        for k in order
    )
    for key in order:
        if key not in movable:
            continue
        overlapping = any(
            other != key
            and math.hypot(centers[other][0] - centers[key][0], centers[other][1] - centers[key][1])
            < radii[other] + radii[key] - 1e-9
            for other in order
        )
        if overlapping:
            outer += radii[key] + 1.0
            centers[key][0] = canvas_center[0] + outer
            centers[key][1] = canvas_center[1]
            outer += radii[key] + 1.0


def layout_groups(
    group_radii: Mapping[str, float],
    config: LayoutConfig,
    pinned: Mapping[str, tuple[float, float]] | None = None,
) -> dict[str, tuple[float, float]]:
    """Place group circles: seeded ring start, fixed-iteration repulsion and
    centering, then hard collision resolution. Pinned centers are held fixed."""
    if not group_radii:
        raise ValueError("no groups to place")
    pinned = dict(pinned or {})
    order = sorted(group_radii)
    movable = [k for k in order if k not in pinned]
    center_x, center_y = config.canvas[0] / 2, config.canvas[1] / 2

    centers: dict[str, list[float]] = {}
    for key in order:
        if key in pinned:
            centers[key] = [float(pinned[key][0]), float(pinned[key][1])]

    rng = _Lcg(config.seed)
    if len(movable) == 1 and not pinned:
        centers[movable[0]] = [center_x, center_y]
    elif movable:
        ring = max(sum(group_radii[k] for k in movable) / math.pi * 1.3, 1.0)
        offset = rng.next() * 2 * math.pi
        for i, key in enumerate(movable):
            angle = offset + 2 * math.pi * i / len(movable)
            centers[key] = [center_x + ring * math.cos(angle), center_y + ring * math.sin(angle)]

    movable_set = set(movable)
    for _ in range(config.iterations):
        forces = {key: [0.0, 0.0] for key in movable}
        for key in movable:
            kx, ky = centers[key]
            fx = (center_x - kx) * 0.05
            fy = (center_y - ky) * 0.05
            for other in order:
                if other == key:
                    continue
                ox, oy = centers[other]
                dx = kx - ox
                dy = ky - oy
                d2 = dx * dx + dy * dy
                cap = (group_radii[key] + group_radii[other]) * 0.25
                if d2 < 1e-12:
                    magnitude = cap
                    dx, dy = 1.0, 0.0
                    d2 = 1.0
                else:
                    magnitude = min(group_radii[key] * group_radii[other] / d2, cap)
                norm = math.sqrt(d2)
                fx += dx / norm * magnitude
                fy += dy / norm * magnitude
            forces[key] = [fx, fy]
        for key in movable:
            centers[key][0] += forces[key][0]
            centers[key][1] += forces[key][1]
        _resolve_collisions(
            centers,
            group_radii,
            movable_set,
            order,
            (center_x, center_y),
            max_sweeps=1,
            park_on_stall=False,
        )

    _resolve_collisions(centers, group_radii, movable_set, order, (center_x, center_y))
    return {key: (centers[key][0], centers[key][1]) for key in order}


def _group_value(node, attribute: str) -> str:
    if attribute == "type":
        return node.type
    if attribute == "asil":
        return node.asil.render()
    if attribute == "severity":
        return node.sec.severity.value
    if attribute == "exposure":
        return node.sec.exposure.value
    if attribute == "controllability":
        return node.sec.controllability.value
    raise ValueError(
        f"cannot group by {attribute!r}; known attributes: {', '.join(GROUPABLE_ATTRIBUTES)}"
    )


def _node_radius(config: LayoutConfig, degree: int, asil_rank: int | None) -> float:
    if config.size_by is SizeBy.DEGREE:
        return config.base_radius * (1 + 0.1 * degree)
    if config.size_by is SizeBy.ASIL_RANK:
        return config.base_radius * (1 + 0.15 * asil_rank) if asil_rank is not None else config.base_radius
    return config.base_radius


_HULL_DIRECTIONS = [(math.cos(k * math.pi / 4), math.sin(k * math.pi / 4)) for k in range(8)]


def layout_project(
    snapshot: GraphSnapshot,
    config: LayoutConfig | None = None,
    pinned: Mapping[str, tuple[float, float]] | None = None,
) -> LayoutResult:
    """Partition nodes by the grouping attribute, pack each group, place the
    group circles, and outline each group with a hull around its node circles."""
    config = config or LayoutConfig()
    project_id = snapshot.project_id
    if not snapshot.nodes:
        return LayoutResult(project_id=project_id, node_positions={}, groups=(), hulls={})

    partitions: dict[str, list[str]] = {}
    for node_id in sorted(snapshot.nodes):
        key = _group_value(snapshot.nodes[node_id], config.group_by)
        partitions.setdefault(key, []).append(node_id)

    radii = {
        node_id: _node_radius(config, snapshot.degree(node_id), snapshot.nodes[node_id].asil.rank)
        for node_id in snapshot.nodes
    }

    local_positions: dict[str, dict[str, tuple[float, float]]] = {}
    group_radii: dict[str, float] = {}
    for key in sorted(partitions):
        members = [(node_id, radii[node_id]) for node_id in partitions[key]]
        positions, enclose_radius = pack_group(members)
        local_positions[key] = positions
        group_radii[key] = enclose_radius + config.group_padding

    pinned_known = {k: v for k, v in (pinned or {}).items() if k in group_radii}
    centers = layout_groups(group_radii, config, pinned_known)

    node_positions: dict[str, NodePlacement] = {}
    groups = []
    hulls: dict[str, tuple[tuple[float, float], ...]] = {}
    for key in sorted(partitions):
        cx, cy = centers[key]
        members = partitions[key]
        hull_points = []
        for node_id in members:
            lx, ly = local_positions[key][node_id]
            x, y = cx + lx, cy + ly
            r = radii[node_id]
            node_positions[node_id] = NodePlacement(x=x, y=y, r=r, group=key)
            hull_points.extend((x + r * ux, y + r * uy) for ux, uy in _HULL_DIRECTIONS)
        groups.append(
            GroupCircle(
                key=key,
                label=f"{key} ({len(members)})",
                cx=cx,
                cy=cy,
                radius=group_radii[key],
                member_ids=tuple(members),
            )
        )
        hulls[key] = tuple(compute_hull(hull_points))
    return LayoutResult(
        project_id=project_id, node_positions=node_positions, groups=tuple(groups), hulls=hulls
    )


def align_layouts(layouts: Sequence[LayoutResult], reference: str) -> list[LayoutResult]:
    """Pin every group that exists in the reference layout to the reference's
    center; re-resolve collisions for the rest. Idempotent."""
    by_id = {l.project_id: l for l in layouts}
    if reference not in by_id:
        raise ValueError(f"unknown reference layout {reference!r}")
    reference_centers = by_id[reference].group_centers()

    aligned = []
    for layout in layouts:
        if layout.project_id == reference:
            aligned.append(layout)
            continue
        order = sorted(g.key for g in layout.groups)
        radii = {g.key: g.radius for g in layout.groups}
        old_centers = layout.group_centers()
        centers = {}
        movable = set()
        for key in order:
            if key in reference_centers:
                centers[key] = [reference_centers[key][0], reference_centers[key][1]]
            else:
                centers[key] = [old_centers[key][0], old_centers[key][1]]
                movable.add(key)
        if order:
            mean_x = sum(centers[k][0] for k in order) / len(order)
            mean_y = sum(centers[k][1] for k in order) / len(order)
            _resolve_collisions(centers, radii, movable, order, (mean_x, mean_y))
        aligned.append(_translate_groups(layout, {k: (centers[k][0], centers[k][1]) for k in order}))
    return aligned


def _translate_groups(layout: LayoutResult, new_centers: Mapping[str, tuple[float, float]]) -> LayoutResult:
    deltas = {
        g.key: (new_centers[g.key][0] - g.cx, new_centers[g.key][1] - g.cy) for g in layout.groups
    }
    node_positions = {
        node_id: replace(p, x=p.x + deltas[p.group][0], y=p.y + deltas[p.group][1])
        for node_id, p in layout.node_positions.items()
    }
    groups = tuple(
        replace(g, cx=new_centers[g.key][0], cy=new_centers[g.key][1]) for g in layout.groups
    )
    hulls = {
        key: tuple((x + deltas[key][0], y + deltas[key][1]) for x, y in vertices)
        for key, vertices in layout.hulls.items()
    }
    return LayoutResult(
        project_id=layout.project_id, node_positions=node_positions, groups=groups, hulls=hulls
    )
