"""Exact planar geometry for directed networks drawn in a disc.

Everything here works over rational coordinates (fractions.Fraction), so all
derived data -- face incidences, winding numbers, crossing counts -- is exact.

A network is drawn with its boundary vertices on the rim of a disc, sources
listed clockwise and sinks counterclockwise.  For bookkeeping the disc is
closed off by an axis-aligned square drawn well outside the picture: every
boundary vertex gets a spoke out to its radial projection on the square, and
the square perimeter joins the projections.  Faces of the resulting plane
graph are in bijection with the supplied face markers.

Conventions, fixed once and used everywhere:

* Winding numbers are counted clockwise-positive, by intersecting the ray
  going straight down from a face marker with the oriented curve.  A segment
  crossing the ray below the marker while moving in the -x direction counts
  +1, in the +x direction -1.  The crossing is attributed half-open in x so a
  curve passing exactly through a vertex is counted once.

* Each path from a source to a sink is closed up by the return arc that runs
  from the sink to its square projection, clockwise along the square, and
  back down to the source.  The winding vector of that closed loop is the
  exponent vector of the path.

* Per-edge exponent vectors are obtained from a reference point O on the
  square, placed in the boundary gap between the last source and the first
  sink reached clockwise from it.  With A(b) the winding vector of the open
  arc from O to boundary vertex b, an internal edge contributes its own
  segment crossings, a source stub adds A(source), and a sink stub subtracts
  A(sink).  Summing these along any path reproduces the loop winding above.

* The exchange matrix E (twice the skew form on faces) is accumulated edge by
  edge: an edge adds w to E[left face, right face], where w counts +1 for
  each endpoint that is a split vertex the edge leaves or a merge vertex it
  enters, and -1 for a split vertex it enters or a merge vertex it leaves.
  Boundary endpoints contribute nothing.
"""

from fractions import Fraction
from functools import cmp_to_key


def _frac_point(p):
    x, y = p
    return (Fraction(x), Fraction(y))


def _dir_half(d):
    # 0 for angles in (0, 180] degrees measured from +x, 1 for the rest;
    # (1, 0) itself opens the first half.
    dx, dy = d
    return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1


def _dir_cmp(a, b):
    ha, hb = _dir_half(a), _dir_half(b)
    if ha != hb:
        return -1 if ha < hb else 1
    cross = a[0] * b[1] - a[1] * b[0]
    if cross > 0:
        return -1
    if cross < 0:
        return 1
    if a[0] * b[0] + a[1] * b[1] > 0:
        return 0
    # opposite directions land in different halves, so this is unreachable
    raise ValueError("cannot order opposite directions")


def sort_ccw(directions):
    """Sort direction vectors counterclockwise starting just above +x."""
    return sorted(directions, key=cmp_to_key(_dir_cmp))


def _segment_ray_crossing(p1, p2, marker):
    """Signed crossing of segment p1->p2 with the downward ray from marker.

    Returns +1 when the segment passes below the marker moving in -x, -1
    moving in +x, else 0.  Half-open in x: the endpoint with smaller x is
    excluded on one side so chains of segments count each crossing once.
    """
    (x1, y1), (x2, y2) = p1, p2
    xf, yf = marker
    if x1 == x2:
        return 0
    if x2 <= xf < x1:
        sign = 1
    elif x1 <= xf < x2:
        sign = -1
    else:
        return 0
    y_at = y1 + (y2 - y1) * (xf - x1) / (x2 - x1)
    return sign if y_at < yf else 0


def _polyline_crossings(points, markers, closed=False):
    pts = list(points)
    if closed:
        pts.append(pts[0])
    vec = [0] * len(markers)
    for p1, p2 in zip(pts, pts[1:]):
        for i, m in enumerate(markers):
            vec[i] += _segment_ray_crossing(p1, p2, m)
    return vec


def _point_in_polygon(pt, poly):
    """Crossing-parity test with the same half-open downward ray."""
    inside = False
    n = len(poly)
    for k in range(n):
        if _segment_ray_crossing(poly[k], poly[(k + 1) % n], pt) != 0:
            inside = not inside
    return inside


def _orient(a, b, c):
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _proper_cross(a, b, c, d):
    return (
        _orient(a, b, c) * _orient(a, b, d) < 0
        and _orient(c, d, a) * _orient(c, d, b) < 0
    )


def path_self_crossings(points):
    """Transversal self-intersections of an open polyline.

    Proper crossings of non-adjacent segments count once each.  A vertex the
    path visits repeatedly counts once per pair of passes whose incoming and
    outgoing directions interleave around the vertex; pairs sharing a
    direction (e.g. a reused edge) are tangential and count zero.
    """
    pts = [(_frac_point(p)) for p in points]
    segs = list(zip(pts, pts[1:]))
    count = 0
    for i in range(len(segs)):
        a, b = segs[i]
        for j in range(i + 1, len(segs)):
            c, d = segs[j]
            if a in (c, d) or b in (c, d):
                continue
            if _proper_cross(a, b, c, d):
                count += 1
    passes = {}
    for k in range(1, len(pts) - 1):
        v = pts[k]
        d_in = (pts[k - 1][0] - v[0], pts[k - 1][1] - v[1])
        d_out = (pts[k + 1][0] - v[0], pts[k + 1][1] - v[1])
        passes.setdefault(v, []).append((d_in, d_out))
    for plist in passes.values():
        for i in range(len(plist)):
            for j in range(i + 1, len(plist)):
                count += _passes_interleave(plist[i], plist[j])
    return count


def _same_ray(a, b):
    return a[0] * b[1] == a[1] * b[0] and a[0] * b[0] + a[1] * b[1] > 0


def _passes_interleave(p1, p2):
    for d1 in p1:
        for d2 in p2:
            if _same_ray(d1, d2):
                return 0
    labeled = [(d, 0) for d in p1] + [(d, 1) for d in p2]
    labeled.sort(key=cmp_to_key(lambda a, b: _dir_cmp(a[0], b[0])))
    tags = [t for _, t in labeled]
    return 1 if tags[0] == tags[2] and tags[1] == tags[3] else 0


class Disc:
    """Scaffolding around a network drawn in a disc.

    Builds the outer square, boundary projections, the reference point O and
    arc potentials, and (on demand) the face structure of the plane graph.
    """

    def __init__(self, vertices, edges, sources, sinks, coords, markers):
        self.vertices = list(vertices)
        self.edges = list(edges)
        self.sources = list(sources)
        self.sinks = list(sinks)
        self.pos = {v: _frac_point(coords[v]) for v in self.vertices}
        self.markers = [_frac_point(m) for m in markers]
        boundary = set(self.sources) | set(self.sinks)
        if len(boundary) != len(self.sources) + len(self.sinks):
            raise ValueError("sources and sinks must be disjoint")
        self.boundary = boundary

        xs = [p[0] for p in self.pos.values()]
        ys = [p[1] for p in self.pos.values()]
        self.center = (sum(xs) / len(xs), sum(ys) / len(ys))
        extent = max(
            max(abs(x - self.center[0]) for x in xs),
            max(abs(y - self.center[1]) for y in ys),
        )
        if extent == 0:
            raise ValueError("degenerate drawing: all vertices coincide")
        self.R = 4 * extent

        self.proj = {}
        self.tval = {}
        for b in self.boundary:
            p = self.pos[b]
            dx, dy = p[0] - self.center[0], p[1] - self.center[1]
            m = max(abs(dx), abs(dy))
            if m == 0:
                raise ValueError(f"boundary vertex {b!r} sits at the center")
            rel = (dx * self.R / m, dy * self.R / m)
            self.proj[b] = (self.center[0] + rel[0], self.center[1] + rel[1])
            self.tval[b] = self._perimeter_t(rel)
        if len(set(self.tval.values())) != len(self.tval):
            raise ValueError("boundary vertices must sit at distinct angles")

        self._check_boundary_order()
        t_last_source = self.tval[self.sources[-1]]
        t_first_sink = self.tval[self.sinks[-1]]
        gap = (t_first_sink - t_last_source) % (8 * self.R)
        self.t_origin = (t_last_source + gap / 2) % (8 * self.R)
        self._potentials = {}
        self._faces = None

    # -- square perimeter ---------------------------------------------------

    def _perimeter_t(self, rel):
        # clockwise perimeter coordinate, starting at the east midpoint
        x, y = rel
        r = self.R
        if x == r and y <= 0:
            return -y
        if y == -r:
            return r + (r - x)
        if x == -r:
            return 3 * r + (y + r)
        if y == r:
            return 5 * r + (x + r)
        if x == r:
            return 7 * r + (r - y)
        raise ValueError("point not on the scaffold square")

    def _point_at_t(self, t):
        r = self.R
        t = t % (8 * r)
        if t <= r:
            rel = (r, -t)
        elif t <= 3 * r:
            rel = (r - (t - r), -r)
        elif t <= 5 * r:
            rel = (-r, -r + (t - 3 * r))
        elif t <= 7 * r:
            rel = (-r + (t - 5 * r), r)
        else:
            rel = (r, r - (t - 7 * r))
        return (self.center[0] + rel[0], self.center[1] + rel[1])

    def _corners_between(self, t1, t2):
        """Square corners on the clockwise walk from t1 to t2, in order."""
        r = self.R
        width = (t2 - t1) % (8 * r)
        out = []
        for tc in (r, 3 * r, 5 * r, 7 * r):
            d = (tc - t1) % (8 * r)
            if 0 < d < width:
                out.append((d, self._point_at_t(tc)))
        out.sort(key=lambda pair: pair[0])
        return [p for _, p in out]

    def _check_boundary_order(self):
        order = sorted(self.boundary, key=lambda b: self.tval[b])
        expected = self.sources + list(reversed(self.sinks))
        if len(order) != len(expected):
            raise ValueError("inconsistent boundary data")
        shift = order.index(expected[0])
        rotated = order[shift:] + order[:shift]
        if rotated != expected:
            raise ValueError(
                "boundary vertices are not in clockwise order "
                "(sources clockwise, then sinks reversed)"
            )

    # -- winding vectors ----------------------------------------------------

    def crossings(self, points, closed=False):
        return _polyline_crossings(points, self.markers, closed=closed)

    def return_arc(self, sink, source):
        """Waypoints of the clockwise arc sink -> square -> source."""
        t1, t2 = self.tval[sink], self.tval[source]
        return (
            [self.pos[sink], self.proj[sink]]
            + self._corners_between(t1, t2)
            + [self.proj[source], self.pos[source]]
        )

    def loop_winding(self, path_vertices):
        """Winding vector of path plus clockwise return arc, per marker."""
        first, last = path_vertices[0], path_vertices[-1]
        if first not in self.sources or last not in self.sinks:
            raise ValueError("path must run from a source to a sink")
        pts = [self.pos[v] for v in path_vertices]
        pts += self.return_arc(last, first)[1:]
        return tuple(self.crossings(pts, closed=False))

    def potential(self, b):
        """Winding vector A(b) of the clockwise arc from O to boundary b."""
        if b not in self._potentials:
            t_b = self.tval[b]
            pts = (
                [self._point_at_t(self.t_origin)]
                + self._corners_between(self.t_origin, t_b)
                + [self.proj[b], self.pos[b]]
            )
            self._potentials[b] = self.crossings(pts)
        return self._potentials[b]

    def edge_exponents(self):
        """Integer exponent vector for every edge, in input order."""
        out = []
        for frm, to in self.edges:
            vec = self.crossings([self.pos[frm], self.pos[to]])
            if frm in self.sources:
                a = self.potential(frm)
                vec = [x + y for x, y in zip(vec, a)]
            if to in self.sinks:
                a = self.potential(to)
                vec = [x - y for x, y in zip(vec, a)]
            out.append(tuple(vec))
        return out

    # -- faces --------------------------------------------------------------

    def _scaffold_graph(self):
        pos = dict(self.pos)
        adj = {v: set() for v in self.vertices}

        def add(u, v):
            if v in adj[u]:
                raise ValueError(f"parallel edges between {u!r} and {v!r}")
            adj[u].add(v)
            adj[v].add(u)

        for frm, to in self.edges:
            add(frm, to)
        square = {}
        for b in self.boundary:
            square.setdefault(self.proj[b], []).append(b)
        for c in (
            self._point_at_t(self.R),
            self._point_at_t(3 * self.R),
            self._point_at_t(5 * self.R),
            self._point_at_t(7 * self.R),
        ):
            square.setdefault(c, [])
        sq_ids = {}
        for p, members in square.items():
            vid = ("sq", p)
            sq_ids[p] = vid
            pos[vid] = p
            adj[vid] = set()
        for p, members in square.items():
            for b in members:
                add(b, sq_ids[p])
        ring = sorted(square, key=lambda p: self._perimeter_t(
            (p[0] - self.center[0], p[1] - self.center[1])
        ))
        for i, p in enumerate(ring):
            add(sq_ids[p], sq_ids[ring[(i + 1) % len(ring)]])
        return pos, adj

    def faces(self):
        """Bounded faces and the marker each contains.

        Returns (orbit list, left-face index per edge, right-face index per
        edge) where faces are numbered by their marker's position in the
        marker list.
        """
        if self._faces is not None:
            return self._faces
        pos, adj = self._scaffold_graph()
        rotation = {}
        rot_index = {}
        for v, nbrs in adj.items():
            ordered = sorted(
                nbrs,
                key=cmp_to_key(
                    lambda a, b: _dir_cmp(
                        (pos[a][0] - pos[v][0], pos[a][1] - pos[v][1]),
                        (pos[b][0] - pos[v][0], pos[b][1] - pos[v][1]),
                    )
                ),
            )
            rotation[v] = ordered
            rot_index[v] = {u: i for i, u in enumerate(ordered)}

        orbit_of = {}
        orbits = []
        for v, nbrs in adj.items():
            for u in nbrs:
                dart = (v, u)
                if dart in orbit_of:
                    continue
                orbit = []
                d = dart
                while d not in orbit_of:
                    orbit_of[d] = len(orbits)
                    orbit.append(d)
                    a, b = d
                    nb = rotation[b]
                    d = (b, nb[(rot_index[b][a] - 1) % len(nb)])
                if d != dart:
                    raise ValueError("face walk failed to close")
                orbits.append(orbit)

        face_marker = {}
        outer = None
        for oid, orbit in enumerate(orbits):
            poly = [pos[u] for u, _ in orbit]
            area2 = sum(
                poly[k][0] * poly[(k + 1) % len(poly)][1]
                - poly[(k + 1) % len(poly)][0] * poly[k][1]
                for k in range(len(poly))
            )
            if area2 < 0:
                if outer is not None:
                    raise ValueError("drawing is not a planar embedding")
                outer = oid
                continue
            hits = [
                i for i, m in enumerate(self.markers) if _point_in_polygon(m, poly)
            ]
            if len(hits) != 1:
                raise ValueError(
                    f"face must contain exactly one marker, found {len(hits)}"
                )
            face_marker[oid] = hits[0]
        if outer is None or len(face_marker) != len(self.markers):
            raise ValueError("faces do not match the marker list")

        lefts, rights = [], []
        for frm, to in self.edges:
            lo = orbit_of[(frm, to)]
            ro = orbit_of[(to, frm)]
            if lo == outer or ro == outer:
                raise ValueError("network edge touches the outer face")
            lefts.append(face_marker[lo])
            rights.append(face_marker[ro])
        self._faces = (orbits, lefts, rights)
        return self._faces

    def exchange_matrix(self):
        """Twice the face skew form, from the per-endpoint edge rule."""
        _, lefts, rights = self.faces()
        indeg = {v: 0 for v in self.vertices}
        outdeg = {v: 0 for v in self.vertices}
        for frm, to in self.edges:
            outdeg[frm] += 1
            indeg[to] += 1
        vtype = {}
        for v in self.vertices:
            if v in self.boundary:
                if (v in self.sources and (indeg[v], outdeg[v]) != (0, 1)) or (
                    v in self.sinks and (indeg[v], outdeg[v]) != (1, 0)
                ):
                    raise ValueError(f"boundary vertex {v!r} must carry one stub")
                vtype[v] = "boundary"
            elif (indeg[v], outdeg[v]) == (1, 2):
                vtype[v] = "split"
            elif (indeg[v], outdeg[v]) == (2, 1):
                vtype[v] = "merge"
            else:
                raise ValueError(
                    f"internal vertex {v!r} must be a split (1 in, 2 out) "
                    f"or a merge (2 in, 1 out)"
                )
        n = len(self.markers)
        e = [[0] * n for _ in range(n)]
        for k, (frm, to) in enumerate(self.edges):
            w = 0
            if vtype[frm] == "split":
                w += 1
            elif vtype[frm] == "merge":
                w -= 1
            if vtype[to] == "merge":
                w += 1
            elif vtype[to] == "split":
                w -= 1
            left, right = lefts[k], rights[k]
            if w and left != right:
                e[left][right] += w
                e[right][left] -= w
        return e


def derive_network_data(vertices, edges, sources, sinks, coords, markers):
    """Exchange matrix and per-edge exponents for a drawn network.

    ``edges`` is a list of (from, to) vertex pairs.  Returns (E, exponents)
    with E a square integer matrix over the faces (one per marker, in marker
    order) and exponents a tuple of integer vectors, one per edge.
    """
    disc = Disc(vertices, edges, sources, sinks, coords, markers)
    return disc.exchange_matrix(), disc.edge_exponents()


def path_winding_vector(net, path_vertices):
    """Winding vector of a source-to-sink path closed by its return arc."""
    if net.geometry is None:
        raise ValueError("network has no drawing to take windings in")
    disc = Disc(
        net.vertices,
        [(e.frm, e.to) for e in net.edges],
        net.sources,
        net.sinks,
        net.geometry.coords,
        net.geometry.face_markers,
    )
    return disc.loop_winding(path_vertices)
