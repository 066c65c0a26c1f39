"""Planar directed networks and their quantum transport matrices.

A network carries a skew form on its face variables (the exchange matrix
divided by two), a set of directed edges between named vertices, and lists of
boundary sources and sinks.  Each edge holds an integer exponent vector; the
transport amplitude from source a to sink c is the sum over directed paths of
the ordered monomial with exponent the sum of the path's edge vectors.

Edge exponents and the skew form can be derived from an exact planar drawing
(vertex coordinates plus one marker point per face); see the geometry module
for the conventions.  Builders for standard families are provided at the
bottom of the file.
"""

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .qalg import QElem, QScalar, SkewForm, weyl
from .ncmat import QMatrix, matmul
from . import geometry


class CyclicWithoutGeometry(ValueError):
    """Transport through a cyclic network needs a drawing for path signs."""


class TruncationRequired(ValueError):
    """A cyclic network needs max_cycle_uses to bound path enumeration."""


@dataclass
class Edge:
    frm: str
    to: str
    exponent: tuple | None = None


@dataclass
class Geometry:
    coords: dict
    face_markers: list


class Network:
    def __init__(
        self,
        form,
        vertices,
        edges,
        sources,
        sinks,
        geometry=None,
        max_cycle_uses=None,
        generators=None,
    ):
        self.form = form
        self.vertices = list(vertices)
        self.edges = list(edges)
        self.sources = list(sources)
        self.sinks = list(sinks)
        self.geometry = geometry
        self.max_cycle_uses = max_cycle_uses
        self.generators = (
            list(generators)
            if generators is not None
            else [f"x{i}" for i in range(form.n)]
        )
        if len(self.generators) != form.n:
            raise ValueError("one generator name per skew-form row required")
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("vertex names must be unique")
        for e in self.edges:
            if e.frm not in vset or e.to not in vset:
                raise ValueError(f"edge {e.frm!r}->{e.to!r} uses unknown vertex")
            if e.exponent is not None and len(e.exponent) != form.n:
                raise ValueError("edge exponent length must match the form size")
        for b in self.sources + self.sinks:
            if b not in vset:
                raise ValueError(f"unknown boundary vertex {b!r}")
        if set(self.sources) & set(self.sinks):
            raise ValueError("sources and sinks must be disjoint")
        if self.geometry is not None:
            missing = vset - set(self.geometry.coords)
            if missing:
                raise ValueError(f"drawing lacks coordinates for {sorted(missing)}")
            if len(self.geometry.face_markers) != form.n:
                raise ValueError("one face marker per generator required")
        self._acyclic = None

    @property
    def is_acyclic(self):
        if self._acyclic is None:
            indeg = {v: 0 for v in self.vertices}
            out = {v: [] for v in self.vertices}
            for e in self.edges:
                indeg[e.to] += 1
                out[e.frm].append(e.to)
            queue = [v for v, d in indeg.items() if d == 0]
            seen = 0
            while queue:
                v = queue.pop()
                seen += 1
                for w in out[v]:
                    indeg[w] -= 1
                    if indeg[w] == 0:
                        queue.append(w)
            self._acyclic = seen == len(self.vertices)
        return self._acyclic

    def ensure_exponents(self):
        """Fill in edge exponents, deriving them from the drawing if needed."""
        if all(e.exponent is not None for e in self.edges):
            return
        if self.geometry is None:
            if self.is_acyclic:
                raise ValueError("edges lack exponents and there is no drawing")
            raise CyclicWithoutGeometry(
                "cyclic network without a drawing to derive exponents from"
            )
        e_mat, exps = geometry.derive_network_data(
            self.vertices,
            [(e.frm, e.to) for e in self.edges],
            self.sources,
            self.sinks,
            self.geometry.coords,
            self.geometry.face_markers,
        )
        if tuple(tuple(r) for r in e_mat) != self.form.E:
            raise ValueError("drawing disagrees with the stored skew form")
        for e, vec in zip(self.edges, exps):
            if e.exponent is None:
                e.exponent = tuple(vec)
            elif tuple(e.exponent) != tuple(vec):
                raise ValueError("drawing disagrees with stored edge exponents")


def _coord_to_json(x):
    f = Fraction(x)
    return int(f) if f.denominator == 1 else [f.numerator, f.denominator]


def _coord_from_json(v):
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, int) for t in v):
        return Fraction(v[0], v[1])
    raise ValueError(f"coordinates must be ints or [num, den] pairs, got {v!r}")


def network_to_dict(net):
    doc = {
        "generators": list(net.generators),
        "epsilon2": [list(r) for r in net.form.E],
        "vertices": list(net.vertices),
        "edges": [
            {
                "from": e.frm,
                "to": e.to,
                "exponent": list(e.exponent) if e.exponent is not None else None,
            }
            for e in net.edges
        ],
        "sources": list(net.sources),
        "sinks": list(net.sinks),
        "geometry": None,
        "max_cycle_uses": net.max_cycle_uses,
    }
    if net.geometry is not None:
        doc["geometry"] = {
            "coords": {
                v: [_coord_to_json(x), _coord_to_json(y)]
                for v, (x, y) in net.geometry.coords.items()
            },
            "face_markers": [
                [_coord_to_json(x), _coord_to_json(y)]
                for x, y in net.geometry.face_markers
            ],
        }
    return doc


def network_from_dict(doc):
    try:
        e_rows = doc["epsilon2"]
        vertices = doc["vertices"]
        edges_doc = doc["edges"]
        sources = doc["sources"]
        sinks = doc["sinks"]
    except KeyError as exc:
        raise ValueError(f"network document is missing {exc.args[0]!r}") from exc
    form = SkewForm(e_rows)
    edges = []
    for ed in edges_doc:
        exp = ed.get("exponent")
        edges.append(
            Edge(ed["from"], ed["to"], tuple(exp) if exp is not None else None)
        )
    geom = None
    gdoc = doc.get("geometry")
    if gdoc is not None:
        coords = {
            v: (_coord_from_json(xy[0]), _coord_from_json(xy[1]))
            for v, xy in gdoc["coords"].items()
        }
        markers = [
            (_coord_from_json(xy[0]), _coord_from_json(xy[1]))
            for xy in gdoc["face_markers"]
        ]
        geom = Geometry(coords=coords, face_markers=markers)
    return Network(
        form=form,
        vertices=vertices,
        edges=edges,
        sources=sources,
        sinks=sinks,
        geometry=geom,
        max_cycle_uses=doc.get("max_cycle_uses"),
        generators=doc.get("generators"),
    )


def load_network(path):
    with open(path, encoding="utf-8") as fh:
        return network_from_dict(json.load(fh))


def save_network(net, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(network_to_dict(net), fh, indent=1)
        fh.write("\n")


# ---------------------------------------------------------------------------
# transport
# ---------------------------------------------------------------------------


def transport_entry(net, a, c):
    """Transport amplitude from source index a to sink index c."""
    net.ensure_exponents()
    src = net.sources[a]
    snk = net.sinks[c]
    out = {v: [] for v in net.vertices}
    for e in net.edges:
        out[e.frm].append(e)
    n = net.form.n
    total = QElem.zero(net.form)

    if net.is_acyclic:
        def walk(v, vec):
            nonlocal total
            if v == snk:
                total = total + weyl(net.form, tuple(vec))
                return
            for e in out[v]:
                walk(e.to, [x + y for x, y in zip(vec, e.exponent)])

        walk(src, [0] * n)
        return total

    if net.geometry is None:
        raise CyclicWithoutGeometry(
            "path signs in a cyclic network require a drawing"
        )
    if net.max_cycle_uses is None:
        raise TruncationRequired(
            "cyclic network: set max_cycle_uses to bound path enumeration"
        )
    coords = net.geometry.coords
    uses = {id(e): 0 for e in net.edges}

    def walk(v, vec, trail):
        nonlocal total
        if v == snk:
            sign = geometry.path_self_crossings([coords[u] for u in trail])
            coeff = QScalar.from_int(-1 if sign % 2 else 1)
            total = total + weyl(net.form, tuple(vec), coeff)
            return
        for e in out[v]:
            if uses[id(e)] >= net.max_cycle_uses:
                continue
            uses[id(e)] += 1
            walk(e.to, [x + y for x, y in zip(vec, e.exponent)], trail + [e.to])
            uses[id(e)] -= 1

    walk(src, [0] * n, [src])
    return total


def transport_matrix(net):
    """Matrix of transport amplitudes, sinks indexing rows, sources columns."""
    data = [
        [transport_entry(net, a, c) for a in range(len(net.sources))]
        for c in range(len(net.sinks))
    ]
    return QMatrix.from_rows(net.form, data)


@dataclass
class BlockTransport:
    n1: int
    m: int
    n2: int
    M11: QMatrix
    M12: QMatrix
    M21: QMatrix
    M22: QMatrix

    @property
    def matrix(self):
        return QMatrix.from_blocks([[self.M11, self.M12], [self.M21, self.M22]])


def block_split(m, n1, msize, n2):
    """Split an (m+n2) x (n1+m) transport matrix into its four blocks."""
    if n1 < 1 or msize < 1 or n2 < 1:
        raise ValueError("all block sizes must be at least 1")
    if m.rows != msize + n2 or m.cols != n1 + msize:
        raise ValueError(
            f"matrix is {m.rows}x{m.cols}, expected "
            f"{msize + n2}x{n1 + msize} for split ({n1},{msize},{n2})"
        )
    return BlockTransport(
        n1=n1,
        m=msize,
        n2=n2,
        M11=m.submatrix(0, msize, 0, n1),
        M12=m.submatrix(0, msize, n1, n1 + msize),
        M21=m.submatrix(msize, msize + n2, 0, n1),
        M22=m.submatrix(msize, msize + n2, n1, n1 + msize),
    )


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _network_from_drawing(vertices, edges, sources, sinks, coords, markers,
                          generators):
    e_mat, exps = geometry.derive_network_data(
        vertices, edges, sources, sinks, coords, markers
    )
    form = SkewForm(e_mat)
    edge_objs = [Edge(f, t, vec) for (f, t), vec in zip(edges, exps)]
    geom = Geometry(
        coords={v: (Fraction(x), Fraction(y)) for v, (x, y) in coords.items()},
        face_markers=[(Fraction(x), Fraction(y)) for x, y in markers],
    )
    return Network(
        form=form,
        vertices=vertices,
        edges=edge_objs,
        sources=sources,
        sinks=sinks,
        geometry=geom,
        generators=generators,
    )


def build_triangle(n):
    """Triangular n-by-n network with sources on the right slope.

    Sources 1..n enter on the northeast side, sinks 1'..n' leave on the
    northwest side and sinks 1''..n'' through the bottom.  Rows r = 0..n-1
    hold split vertices g(r, j), interleaved with merge vertices b(r, j).
    Faces are labelled (rho, c) and ordered lexicographically.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    half = Fraction(1, 2)
    coords = {}
    vertices = []

    def gname(r, j):
        return f"g{r}_{j}"

    def bname(r, j):
        return f"b{r}_{j}"

    for r in range(n):
        for j in range(1, n - r + 1):
            vertices.append(gname(r, j))
            coords[gname(r, j)] = (j + r * half, Fraction(r))
    for r in range(1, n):
        for j in range(1, n - r + 1):
            vertices.append(bname(r, j))
            coords[bname(r, j)] = (j + r * half, r - Fraction(2, 5))

    edges = []
    for r in range(1, n):
        for j in range(1, n - r + 1):
            edges.append((gname(r, j), bname(r, j)))
            edges.append((bname(r, j), gname(r - 1, j)))
            edges.append((gname(r - 1, j + 1), bname(r, j)))

    sources = [str(s) for s in range(1, n + 1)]
    for s in range(1, n + 1):
        g = gname(n - s, s)
        coords[str(s)] = (coords[g][0] + 1, coords[g][1] + Fraction(3, 5))
        vertices.append(str(s))
        edges.append((str(s), g))
    sinks = []
    for t in range(1, n + 1):
        g = gname(n - t, 1)
        lab = f"{t}'"
        sinks.append(lab)
        vertices.append(lab)
        coords[lab] = (coords[g][0] - 1, coords[g][1] + Fraction(3, 5))
        edges.append((g, lab))
    for j in range(1, n + 1):
        lab = f"{j}''"
        sinks.append(lab)
        vertices.append(lab)
        coords[lab] = (Fraction(j), Fraction(-1))
        edges.append((gname(0, j), lab))

    faces = [
        (rho, c) for rho in range(n + 1) for c in range(1, n + 2 - rho)
    ]
    markers = [(c + (rho - 1) * half, rho - Fraction(1, 4)) for rho, c in faces]
    generators = [f"f{rho}_{c}" for rho, c in faces]
    return _network_from_drawing(
        vertices, edges, sources, sinks, coords, markers, generators
    )


def build_chain(n1, n2, bridge=False):
    """Chain of n1 merges feeding n2 splits along a west-running backbone.

    Sources a1..a{n1} drop onto the merges, a{n1+1} enters the east end;
    sink c1 leaves the west end and c2..c{n2+1} hang off the splits.  With
    ``bridge`` set, the eastmost entry and the lowest branch are rerouted
    through an extra split/merge pair enclosing one more face, which makes
    the lowest transport entry a two-path sum.
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("n1 and n2 must be at least 1")
    half = Fraction(1, 2)
    coords = {}
    vertices = []
    edges = []

    merges = [f"B{j}" for j in range(1, n1 + 1)]
    splits = [f"W{s}" for s in range(1, n2 + 1)]
    for j, v in enumerate(merges, start=1):
        vertices.append(v)
        coords[v] = (Fraction(10 + j), Fraction(0))
    for s, v in enumerate(splits, start=1):
        vertices.append(v)
        coords[v] = (Fraction(10 - s), Fraction(0))

    sources = [f"a{j}" for j in range(1, n1 + 2)]
    for j in range(1, n1 + 1):
        vertices.append(f"a{j}")
        coords[f"a{j}"] = (10 + j + half, Fraction(2 + n1 - j))
        edges.append((f"a{j}", f"B{j}"))
    vertices.append(f"a{n1 + 1}")
    if bridge:
        vertices.append("U")
        coords["U"] = (Fraction(11 + n1), Fraction(0))
        coords[f"a{n1 + 1}"] = (Fraction(12 + n1), Fraction(1))
        edges.append((f"a{n1 + 1}", "U"))
        edges.append(("U", f"B{n1}"))
    else:
        coords[f"a{n1 + 1}"] = (Fraction(11 + n1), Fraction(1))
        edges.append((f"a{n1 + 1}", f"B{n1}"))

    for j in range(n1, 1, -1):
        edges.append((f"B{j}", f"B{j - 1}"))
    edges.append(("B1", "W1"))
    for s in range(1, n2):
        edges.append((f"W{s}", f"W{s + 1}"))

    sinks = [f"c{i}" for i in range(1, n2 + 2)]
    vertices.append("c1")
    coords["c1"] = (Fraction(9 - n2), Fraction(1))
    edges.append((f"W{n2}", "c1"))
    branch_end = {}
    for s in range(1, n2 + 1):
        lab = f"c{n2 + 2 - s}"
        vertices.append(lab)
        coords[lab] = (10 - s - half, Fraction(-2 - (n2 - s)))
        branch_end[s] = lab
    for s in range(2, n2 + 1):
        edges.append((f"W{s}", branch_end[s]))
    if bridge:
        vertices.append("V")
        wx, wy = coords["W1"]
        cx, cy = coords[branch_end[1]]
        coords["V"] = ((wx + cx) / 2, (wy + cy) / 2)
        edges.append(("W1", "V"))
        edges.append(("U", "V"))
        edges.append(("V", branch_end[1]))
    else:
        edges.append(("W1", branch_end[1]))

    generators = ["N"] + [f"E{j}" for j in range(1, n1 + 1)] + ["S"]
    generators += [f"W{i}" for i in range(1, n2 + 1)]
    markers = [(Fraction(41, 4), Fraction(1, 4))]
    for j in range(1, n1 + 1):
        if j == n1 and not bridge:
            # without the bridge the last two stubs meet at the same merge,
            # so this face is a narrow wedge; sit the marker higher up
            markers.append((10 + n1 + Fraction(1, 4), half))
        else:
            markers.append((10 + j + half, Fraction(1, 8)))
    markers.append((Fraction(11 + n1), Fraction(-n2 - 2)))
    markers.append((Fraction(19, 2) - n2, Fraction(-1, 8)))
    for i in range(2, n2 + 1):
        markers.append((Fraction(17, 2) + i - n2, Fraction(-1, 4)))
    if bridge:
        generators.append("L")
        markers.append((Fraction(10), Fraction(-1, 4)))
    return _network_from_drawing(
        vertices, edges, sources, sinks, coords, markers, generators
    )


# ---------------------------------------------------------------------------
# composite networks glued from three transport fragments
# ---------------------------------------------------------------------------


def assemble_composite(t11, t12, t21, t22, t23, t31, t32):
    """Blocks of a network glued from three fragments in series.

    The first fragment maps inputs (n1 | m2) to outputs (m2 | m2) with
    transport pieces t12, t11 (upper) and t21 acting on the loopback wires;
    the middle fragment maps m2 wires to (k) with piece t22 and injects m1
    fresh wires through t23; the last fragment reads the k wires through t31
    (to m1 outputs) and t32 (to n2 outputs).  The glued network has block
    transport

        M11 = [t21 t12 ; t31 t22 t12]        M12 = [[t21 t11, 0],
        M21 = t32 t22 t12                            [t31 t22 t11, t31 t23]]
        M22 = [t32 t22 t11 | t32 t23]

    giving a (m2+m1, n1, n2) block system that satisfies the loopback
    identity M22 M12^-1 M11 = M21 whenever M12 is invertible.
    """
    m2 = t11.rows
    if t11.cols != m2 or t21.rows != m2 or t21.cols != m2:
        raise ValueError("t11 and t21 must be square of the same size")
    if t12.rows != m2:
        raise ValueError("t12 must have as many rows as t11")
    n1 = t12.cols
    k = t22.rows
    if t22.cols != m2 or t23.rows != k:
        raise ValueError("t22/t23 row counts must match")
    m1 = t23.cols
    if t31.rows != m1 or t31.cols != k or t32.cols != k:
        raise ValueError("t31/t32 must read the middle wires")
    n2 = t32.rows
    form = t11.form
    z = QMatrix.zero(m2, m1, form)
    top11 = matmul(t21, t12)
    bot11 = matmul(t31, matmul(t22, t12))
    m11 = QMatrix.from_blocks([[top11], [bot11]])
    m12 = QMatrix.from_blocks(
        [
            [matmul(t21, t11), z],
            [matmul(t31, matmul(t22, t11)), matmul(t31, t23)],
        ]
    )
    m21 = matmul(t32, matmul(t22, t12))
    m22 = QMatrix.from_blocks([[matmul(t32, matmul(t22, t11)), matmul(t32, t23)]])
    return BlockTransport(n1=n1, m=m2 + m1, n2=n2, M11=m11, M12=m12, M21=m21, M22=m22)


# ---------------------------------------------------------------------------
# the staircase example: closed-form level entries
# ---------------------------------------------------------------------------


def hat_matrix(r):
    """(r+1)-square 0/1 transport matrix with ones where i - j + 1 >= 0."""
    if r < 1:
        raise ValueError("r must be at least 1")
    return [[1 if i - j + 1 >= 0 else 0 for j in range(r + 1)] for i in range(r + 1)]


def _int_matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [
        [sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
        for i in range(n)
    ]


def hat_m12_inverse_power(r, p):
    """p-th power of the inverse of the r-square lower-triangular ones block."""
    if r < 1 or p < 0:
        raise ValueError("need r >= 1 and p >= 0")
    inv = [
        [1 if i == j else (-1 if i == j + 1 else 0) for j in range(r)]
        for i in range(r)
    ]
    out = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    for _ in range(p):
        out = _int_matmul(out, inv)
    return out


def f_rp(r, p, mode="matrix"):
    """Scalar level entry of the staircase example.

    All three modes agree: "matrix" contracts the corner blocks of the
    staircase transport matrix against the p-th inverse power of its middle
    block, "recursion" uses f(r, p+1) = f(r, p) - f(r-1, p) with first row
    and column one, and "closed" evaluates the binomial form directly.
    """
    if r < 1 or p < 1:
        raise ValueError("need r >= 1 and p >= 1")
    if mode == "matrix":
        hat = hat_matrix(r)
        col = [[hat[i][0]] for i in range(r)]
        row = [hat[r][1:]]
        mid = _int_matmul(hat_m12_inverse_power(r, p), col)
        return _int_matmul(row, mid)[0][0]
    if mode == "recursion":
        memo = {}

        def f(rr, pp):
            if rr == 1 or pp == 1:
                return 1
            if (rr, pp) not in memo:
                memo[rr, pp] = f(rr, pp - 1) - f(rr - 1, pp - 1)
            return memo[rr, pp]

        return f(r, p)
    if mode == "closed":
        if p == 1:
            return 1
        return (-1) ** (r - 1) * comb(p - 2, r - 1)
    raise ValueError(f"unknown mode {mode!r}")


def _monomial_matrix(form, rows, cols, rng):
    data = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            exps = tuple(rng.randint(-1, 2) for _ in range(form.n))
            row.append(weyl(form, exps, QScalar.v_power(rng.randint(-2, 2))))
        data.append(row)
    return QMatrix.from_rows(form, data)


def build_composite_example(seed=2024):
    """A deterministic generic instance of the three-fragment composite.

    The square fragments are lower-triangular with monomial entries and the
    fresh-wire fragment keeps a single route, so M12 is invertible and the
    loopback identity M22 M12^-1 M11 = M21 holds by construction.
    """
    rng = random.Random(seed)
    e = [[0] * 8 for _ in range(8)]
    for i in range(8):
        for j in range(i + 1, 8):
            e[i][j] = rng.randint(-2, 2)
            e[j][i] = -e[i][j]
    form = SkewForm(e)
    z = QElem.zero(form)

    def lower(m):
        rows = [
            [m.entry(i, j) if j <= i else z for j in range(m.cols)]
            for i in range(m.rows)
        ]
        return QMatrix.from_rows(form, rows)

    m2, n1, k, m1, n2 = 2, 2, 2, 1, 2
    t11 = lower(_monomial_matrix(form, m2, m2, rng))
    t12 = _monomial_matrix(form, m2, n1, rng)
    t21 = lower(_monomial_matrix(form, m2, m2, rng))
    t22 = _monomial_matrix(form, k, m2, rng)
    t23 = _monomial_matrix(form, k, m1, rng)
    t23 = QMatrix.from_rows(form, [[t23.entry(0, 0)]] + [[z]] * (k - 1))
    t31 = _monomial_matrix(form, m1, k, rng)
    t32 = _monomial_matrix(form, n2, k, rng)
    return assemble_composite(t11, t12, t21, t22, t23, t31, t32)
