"""Exact lattice polygon geometry in the plane.

Everything here runs on integers (plus Fractions for edge intersections):
convex hulls by monotone chain, lattice point counts double-checked
against the area/boundary identity 2*area = 2i + b - 2, triangulation
into primitive triangles, and a canonical form under affine unimodular
equivalence obtained by anchoring each directed hull edge and taking the
lexicographically least vertex listing.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DegenerateInputError, InvariantViolation, PreconditionError
from .wpolytope import Point3, WeightedPolytope, decompose

Point2 = tuple[int, int]
Triangle = tuple[Point2, Point2, Point2]


def _cross(o: Point2, a: Point2, b: Point2) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class LatticePolygon:
    """Convex lattice polygon with its full lattice point inventory.

    vertices is a counterclockwise cycle with no three consecutive
    collinear points.  lattice_points lists every lattice point of the
    closed polygon in row-major order; i and b are the interior and
    boundary counts, n = i + b.
    """

    vertices: tuple[Point2, ...]
    lattice_points: tuple[Point2, ...]
    i: int
    b: int
    n: int

    @property
    def area2(self) -> int:
        """Twice the enclosed area."""
        vs = self.vertices
        return sum(
            vs[k][0] * vs[(k + 1) % len(vs)][1] - vs[(k + 1) % len(vs)][0] * vs[k][1]
            for k in range(len(vs))
        )

    def bounding_box(self) -> tuple[int, int, int, int]:
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    def to_json_dict(self) -> dict:
        return {"vertices": [[x, y] for x, y in self.vertices]}


@dataclass(frozen=True)
class UnimodularAffineMap:
    """Affine map x -> L x + t with integer L, |det L| = 1."""

    linear: tuple[tuple[int, int], tuple[int, int]]
    translation: tuple[int, int]

    def __post_init__(self) -> None:
        if abs(self.det) != 1:
            raise PreconditionError(f"linear part {self.linear} is not unimodular")

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.linear
        return a * d - b * c

    @classmethod
    def identity(cls) -> "UnimodularAffineMap":
        return cls(((1, 0), (0, 1)), (0, 0))

    def apply(self, p: Point2) -> Point2:
        (a, b), (c, d) = self.linear
        return (a * p[0] + b * p[1] + self.translation[0],
                c * p[0] + d * p[1] + self.translation[1])

    def compose(self, other: "UnimodularAffineMap") -> "UnimodularAffineMap":
        """The map applying `other` first, then self."""
        (a, b), (c, d) = self.linear
        (e, f), (g2, h) = other.linear
        linear = ((a * e + b * g2, a * f + b * h),
                  (c * e + d * g2, c * f + d * h))
        tx, ty = other.translation
        translation = (a * tx + b * ty + self.translation[0],
                       c * tx + d * ty + self.translation[1])
        return UnimodularAffineMap(linear, translation)

    def inverse(self) -> "UnimodularAffineMap":
        (a, b), (c, d) = self.linear
        s = self.det  # 1/det == det for det = +-1
        inv = ((d * s, -b * s), (-c * s, a * s))
        tx, ty = self.translation
        return UnimodularAffineMap(
            inv, (-(inv[0][0] * tx + inv[0][1] * ty), -(inv[1][0] * tx + inv[1][1] * ty))
        )


_MIRROR = UnimodularAffineMap(((1, 0), (0, -1)), (0, 0))


def _hull_cycle(points: list[Point2]) -> tuple[Point2, ...]:
    """Monotone-chain hull; counterclockwise from the lex-least vertex."""
    pts = sorted(set(points))
    if len(pts) < 3:
        raise DegenerateInputError("need at least 3 distinct points")
    lower: list[Point2] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point2] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    cycle = tuple(lower[:-1] + upper[:-1])
    if len(cycle) < 3:
        raise DegenerateInputError("points are collinear")
    return cycle


def _edges(cycle: tuple[Point2, ...]) -> list[tuple[Point2, Point2]]:
    return [(cycle[k], cycle[(k + 1) % len(cycle)]) for k in range(len(cycle))]


def _hull_lattice_points(cycle: tuple[Point2, ...]) -> tuple[Point2, ...]:
    """All lattice points of the closed polygon, row by row.

    Per row the slice is an interval whose ends come from exact rational
    edge intersections, so this stays correct for thin slanted shapes.
    """
    ys = [p[1] for p in cycle]
    edges = _edges(cycle)
    out: list[Point2] = []
    for y in range(min(ys), max(ys) + 1):
        xs: list[Fraction] = []
        for (px, py), (qx, qy) in edges:
            if py == qy:
                if py == y:
                    xs.append(Fraction(px))
                    xs.append(Fraction(qx))
            elif min(py, qy) <= y <= max(py, qy):
                t = Fraction(y - py, qy - py)
                xs.append(px + t * (qx - px))
        if not xs:
            continue
        lo = math.ceil(min(xs))
        hi = math.floor(max(xs))
        out.extend((x, y) for x in range(lo, hi + 1))
    return tuple(out)


def _on_boundary(p: Point2, edges: list[tuple[Point2, Point2]]) -> bool:
    for a, b in edges:
        if _cross(a, b, p) == 0:
            if min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]):
                return True
    return False


def _build_polygon(cycle: tuple[Point2, ...]) -> LatticePolygon:
    """Validate a CCW strictly convex cycle and take its lattice inventory.

    The interior count is derived from 2*area = 2i + b - 2 and verified
    against a direct classification of the enumerated points.
    """
    if len(cycle) < 3:
        raise DegenerateInputError("polygon needs at least 3 vertices")
    k = len(cycle)
    for idx in range(k):
        turn = _cross(cycle[idx], cycle[(idx + 1) % k], cycle[(idx + 2) % k])
        if turn <= 0:
            raise DegenerateInputError(
                f"vertex cycle is not strictly convex counterclockwise at {cycle[(idx + 1) % k]}"
            )
    area2 = sum(
        cycle[j][0] * cycle[(j + 1) % k][1] - cycle[(j + 1) % k][0] * cycle[j][1]
        for j in range(k)
    )
    edges = _edges(cycle)
    b_gcd = sum(gcd(abs(qx - px), abs(qy - py)) for (px, py), (qx, qy) in edges)
    if (area2 - b_gcd) % 2 != 0:
        raise InvariantViolation(f"area/boundary parity fails for {cycle}")
    i_pick = (area2 - b_gcd + 2) // 2
    points = _hull_lattice_points(cycle)
    b_direct = sum(1 for p in points if _on_boundary(p, edges))
    i_direct = len(points) - b_direct
    if b_direct != b_gcd or i_direct != i_pick:
        raise InvariantViolation(
            f"lattice counts disagree for {cycle}: "
            f"direct (i={i_direct}, b={b_direct}) vs derived (i={i_pick}, b={b_gcd})"
        )
    return LatticePolygon(
        vertices=cycle,
        lattice_points=points,
        i=i_pick,
        b=b_gcd,
        n=i_pick + b_gcd,
    )


def convex_hull(points: list[Point2] | tuple[Point2, ...]) -> LatticePolygon:
    """Convex hull of the given lattice points as a LatticePolygon."""
    for p in points:
        if len(p) != 2 or not all(isinstance(c, int) and not isinstance(c, bool) for c in p):
            raise DegenerateInputError(f"not a lattice point: {p!r}")
    return _build_polygon(_hull_cycle([tuple(p) for p in points]))


def counts(poly: LatticePolygon) -> tuple[int, int]:
    """(interior, boundary) counts; cross-checked when the polygon was built."""
    return (poly.i, poly.b)


def polygon_from_json_dict(data: dict) -> LatticePolygon:
    if not isinstance(data, dict) or "vertices" not in data:
        raise DegenerateInputError("polygon JSON must have a 'vertices' key")
    return convex_hull([tuple(v) for v in data["vertices"]])


# ---------------------------------------------------------------------------
# triangulation


def triangulate(poly: LatticePolygon) -> tuple[Triangle, ...]:
    """Split the polygon into primitive lattice triangles.

    Start with the fan from the first vertex, then insert the remaining
    boundary lattice points in cycle order and the interior points in
    lex order, splitting the triangles they land in.  The result has
    exactly 2i + b - 2 triangles, each of twice-area 1.
    """
    verts = poly.vertices
    tris: list[Triangle] = [
        (verts[0], verts[s], verts[s + 1]) for s in range(1, len(verts) - 1)
    ]
    for q in _boundary_cycle_points(poly):
        tris = _insert_boundary(tris, q)
    boundary = set()
    edges = _edges(verts)
    for p in poly.lattice_points:
        if _on_boundary(p, edges):
            boundary.add(p)
    for q in sorted(p for p in poly.lattice_points if p not in boundary):
        tris = _insert_interior(tris, q)
    expected = 2 * poly.i + poly.b - 2
    if len(tris) != expected:
        raise InvariantViolation(
            f"triangulation produced {len(tris)} pieces, expected {expected}"
        )
    for t in tris:
        if _cross(t[0], t[1], t[2]) != 1:
            raise InvariantViolation(f"non-primitive piece {t}")
    return tuple(tris)


def _boundary_cycle_points(poly: LatticePolygon) -> list[Point2]:
    """Non-vertex boundary lattice points, walking the cycle from vertex 0."""
    out: list[Point2] = []
    for (px, py), (qx, qy) in _edges(poly.vertices):
        g = gcd(abs(qx - px), abs(qy - py))
        sx, sy = (qx - px) // g, (qy - py) // g
        out.extend((px + j * sx, py + j * sy) for j in range(1, g))
    return out


def _tri_position(t: Triangle, q: Point2) -> tuple[str, int]:
    """Locate q relative to a CCW triangle: ('in'|'edge'|'out', edge index)."""
    cs = [_cross(t[e], t[(e + 1) % 3], q) for e in range(3)]
    if all(c > 0 for c in cs):
        return ("in", -1)
    for e in range(3):
        if cs[e] == 0 and cs[(e + 1) % 3] > 0 and cs[(e + 2) % 3] > 0:
            return ("edge", e)
    return ("out", -1)


def _split_at_edge(t: Triangle, e: int, q: Point2) -> list[Triangle]:
    a, b, c = t[e], t[(e + 1) % 3], t[(e + 2) % 3]
    return [(a, q, c), (q, b, c)]


def _insert_boundary(tris: list[Triangle], q: Point2) -> list[Triangle]:
    out: list[Triangle] = []
    done = False
    for t in tris:
        if not done:
            kind, e = _tri_position(t, q)
            if kind == "edge":
                out.extend(_split_at_edge(t, e, q))
                done = True
                continue
        out.append(t)
    if not done:
        raise InvariantViolation(f"boundary point {q} not on any triangle edge")
    return out


def _insert_interior(tris: list[Triangle], q: Point2) -> list[Triangle]:
    hits: list[tuple[int, str, int]] = []
    for idx, t in enumerate(tris):
        kind, e = _tri_position(t, q)
        if kind != "out":
            hits.append((idx, kind, e))
    if len(hits) == 1 and hits[0][1] == "in":
        idx = hits[0][0]
        a, b, c = tris[idx]
        return tris[:idx] + [(a, b, q), (b, c, q), (c, a, q)] + tris[idx + 1:]
    if len(hits) == 2 and all(kind == "edge" for _, kind, _ in hits):
        out: list[Triangle] = []
        lookup = {idx: e for idx, _, e in hits}
        for idx, t in enumerate(tris):
            if idx in lookup:
                out.extend(_split_at_edge(t, lookup[idx], q))
            else:
                out.append(t)
        return out
    raise InvariantViolation(f"interior point {q} lands in {len(hits)} triangles")


# ---------------------------------------------------------------------------
# canonical form and equivalence


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
        old_t, t = t, old_t - quot * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _anchor_map(u: Point2, v: Point2, cycle: tuple[Point2, ...]) -> UnimodularAffineMap:
    """The unique map sending u to the origin, edge u->v along +x, and the
    polygon into the upper half-plane with the top row's least x in [0, h)."""
    ex, ey = v[0] - u[0], v[1] - u[1]
    g = gcd(abs(ex), abs(ey))
    px, py = ex // g, ey // g
    _, alpha, beta = _egcd(px, py)
    linear = ((alpha, beta), (-py, px))
    base = UnimodularAffineMap(
        linear,
        (-(linear[0][0] * u[0] + linear[0][1] * u[1]),
         -(linear[1][0] * u[0] + linear[1][1] * u[1])),
    )
    pts = [base.apply(p) for p in cycle]
    h = max(p[1] for p in pts)
    if h < 1 or min(p[1] for p in pts) != 0:
        raise InvariantViolation("edge anchoring left the polygon outside y >= 0")
    mtop = min(p[0] for p in pts if p[1] == h)
    shear = UnimodularAffineMap(((1, -(mtop // h)), (0, 1)), (0, 0))
    return shear.compose(base)


def _canonical_cycle(
    vertices: tuple[Point2, ...], include_mirror: bool = True
) -> tuple[tuple[Point2, ...], UnimodularAffineMap]:
    """Least vertex listing over all edge anchorings (and the mirror image)."""
    bases: list[tuple[tuple[Point2, ...], UnimodularAffineMap]] = [
        (vertices, UnimodularAffineMap.identity())
    ]
    if include_mirror:
        mirrored = tuple(_MIRROR.apply(p) for p in reversed(vertices))
        bases.append((mirrored, _MIRROR))
    best: tuple[Point2, ...] | None = None
    best_map: UnimodularAffineMap | None = None
    for cycle, base_map in bases:
        k = len(cycle)
        for s in range(k):
            m = _anchor_map(cycle[s], cycle[(s + 1) % k], cycle)
            rotated = cycle[s:] + cycle[:s]
            cand = tuple(m.apply(p) for p in rotated)
            if best is None or cand < best:
                best = cand
                best_map = m.compose(base_map)
    assert best is not None and best_map is not None
    return best, best_map


def _canonical(
    poly: LatticePolygon, include_mirror: bool = True
) -> tuple[tuple[Point2, ...], UnimodularAffineMap]:
    return _canonical_cycle(poly.vertices, include_mirror)


def canonical_form(poly: LatticePolygon, include_mirror: bool = True) -> LatticePolygon:
    """Canonical representative of the polygon's equivalence class.

    With include_mirror=False equivalence is restricted to orientation
    preserving maps (determinant +1).
    """
    cycle, _ = _canonical(poly, include_mirror)
    return _build_polygon(cycle)


def equivalent(
    p1: LatticePolygon, p2: LatticePolygon, include_mirror: bool = True
) -> tuple[bool, UnimodularAffineMap | None]:
    """Equivalence test with a verified witness map sending p1 onto p2."""
    c1, m1 = _canonical(p1, include_mirror)
    c2, m2 = _canonical(p2, include_mirror)
    if c1 != c2:
        return (False, None)
    witness = m2.inverse().compose(m1)
    image = {witness.apply(p) for p in p1.lattice_points}
    if image != set(p2.lattice_points):
        raise InvariantViolation("equivalence witness does not map point sets")
    return (True, witness)


def random_unimodular_map(seed: int, size: int) -> UnimodularAffineMap:
    """Deterministic fuzzing map: `size` elementary shears, an optional
    axis swap (only when size >= 2), and a translation bounded by size."""
    if size < 0:
        raise PreconditionError(f"size must be >= 0, got {size}")
    if size == 0:
        return UnimodularAffineMap.identity()
    rng = random.Random(seed)
    m = UnimodularAffineMap.identity()
    for _ in range(size):
        t = rng.choice([-3, -2, -1, 1, 2, 3])
        if rng.random() < 0.5:
            step = UnimodularAffineMap(((1, t), (0, 1)), (0, 0))
        else:
            step = UnimodularAffineMap(((1, 0), (t, 1)), (0, 0))
        m = step.compose(m)
    if size >= 2 and rng.random() < 0.5:
        m = UnimodularAffineMap(((0, 1), (1, 0)), (0, 0)).compose(m)
    shift = UnimodularAffineMap(
        ((1, 0), (0, 1)), (rng.randint(-size, size), rng.randint(-size, size))
    )
    return shift.compose(m)


def apply_map(poly: LatticePolygon, m: UnimodularAffineMap) -> LatticePolygon:
    """Image polygon under an affine unimodular map."""
    return convex_hull([m.apply(p) for p in poly.vertices])


# ---------------------------------------------------------------------------
# projection from the degree plane to Z^2


def projection_coordinates(
    p: WeightedPolytope, triple: tuple[Point3, Point3, Point3]
) -> list[Point2]:
    """Coefficients (alpha1, alpha2) of every row over the triple.

    Writing a row as alpha1*t1 + alpha2*t2 + alpha3*t3 forces
    alpha1 + alpha2 + alpha3 = 1, so the first two coefficients identify
    the row; they are the row's coordinates after projection.
    """
    images: list[Point2] = []
    for row in p.points:
        dec = decompose(p, triple, row)
        a1, a2, a3 = dec.alphas
        if a1 + a2 + a3 != 1:
            raise InvariantViolation(
                f"{p.quadruple}: affine coefficients of {row} sum to {a1 + a2 + a3}"
            )
        images.append((a1, a2))
    for pt, expected in zip(triple, ((1, 0), (0, 1), (0, 0))):
        if images[p.points.index(pt)] != expected:
            raise InvariantViolation(f"triple row {pt} did not project to {expected}")
    return images


def project(
    p: WeightedPolytope, triple: tuple[Point3, Point3, Point3]
) -> LatticePolygon:
    """Projected polygon; point count and interior count must be preserved."""
    images = projection_coordinates(p, triple)
    poly = convex_hull(images)
    if set(images) != set(poly.lattice_points):
        raise InvariantViolation(
            f"{p.quadruple}: projection gained or lost lattice points"
        )
    if poly.i != len(p.interior):
        raise InvariantViolation(
            f"{p.quadruple}: projected interior count {poly.i} != {len(p.interior)}"
        )
    return poly
