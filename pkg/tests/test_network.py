"""Tests for planar directed networks and their transport matrices.

All frozen matrices below (transport entries, exchange matrices) were derived
by hand from the planar pictures before the builders were implemented: path
exponents by counting windings of path-plus-return-arc loops around each face
marker (clockwise positive), exchange matrices from the local rule that an
edge adds +-1 (per internal endpoint) to E[left, right], with sign +1 for a
split vertex the edge leaves or a merge vertex it enters.
"""

import json
import random
from collections import defaultdict
from fractions import Fraction

import pytest

from qtransport.qalg import QElem, QScalar, SkewForm, qmul, weyl
from qtransport.ncmat import QMatrix, invert_restricted, matmul
from qtransport.geometry import path_winding_vector
from qtransport.network import (
    CyclicWithoutGeometry,
    Edge,
    Geometry,
    Network,
    TruncationRequired,
    assemble_composite,
    block_split,
    build_chain,
    build_triangle,
    f_rp,
    hat_m12_inverse_power,
    hat_matrix,
    load_network,
    network_from_dict,
    save_network,
    transport_entry,
    transport_matrix,
)

Q = QScalar.q_power(1)
QQ = QScalar.q_power(1) - QScalar.q_power(-1)


def wv(form, vec, coeff=None):
    return weyl(form, tuple(vec), coeff)


# ---------------------------------------------------------------------------
# bowtie chain (n1 = n2 = 1, no bridge): fully hand-checked
# ---------------------------------------------------------------------------

BOWTIE_E = [
    [0, -1, 2, -1],
    [1, 0, -1, 0],
    [-2, 1, 0, 1],
    [1, 0, -1, 0],
]


def test_bowtie_epsilon_frozen():
    net = build_chain(1, 1)
    assert [list(r) for r in net.form.E] == BOWTIE_E


def test_bowtie_transport_frozen():
    net = build_chain(1, 1)
    m = transport_matrix(net)
    form = net.form
    # faces ordered (N, E1, S, W1)
    assert m.entry(0, 0) == wv(form, (1, 0, 0, 0))  # a1 -> c1
    assert m.entry(0, 1) == wv(form, (1, 1, 0, 0))  # a2 -> c1
    assert m.entry(1, 0) == wv(form, (1, 0, 0, 1))  # a1 -> c2
    assert m.entry(1, 1) == wv(form, (1, 1, 0, 1))  # a2 -> c2


def test_bowtie_groupoid_identity_native():
    # For the plain chain, M22 M12^-1 M11 = M21 holds exactly.
    net = build_chain(1, 1)
    b = block_split(transport_matrix(net), 1, 1, 1)
    lhs = matmul(matmul(b.M22, invert_restricted(b.M12)), b.M11)
    assert lhs == b.M21


# ---------------------------------------------------------------------------
# bridged bowtie: the two-path M22 entry and the modified quiver
# ---------------------------------------------------------------------------

BRIDGED_E = [
    [0, -1, 0, -1, 2],
    [1, 0, 1, 0, -2],
    [0, -1, 0, -1, 2],
    [1, 0, 1, 0, -2],
    [-2, 2, -2, 2, 0],
]


def test_bridged_bowtie_epsilon_frozen():
    net = build_chain(1, 1, bridge=True)
    assert [list(r) for r in net.form.E] == BRIDGED_E


def test_bridged_bowtie_transport_frozen():
    net = build_chain(1, 1, bridge=True)
    m = transport_matrix(net)
    form = net.form
    # faces ordered (N, E1, S, W1, L) where L is the bridge loop face
    assert m.entry(0, 0) == wv(form, (1, 0, 0, 0, 0))
    assert m.entry(0, 1) == wv(form, (1, 1, 0, 0, 0))
    assert m.entry(1, 0) == wv(form, (1, 0, 0, 1, 0))
    assert m.entry(1, 1) == wv(form, (1, 1, 0, 1, 0)) + wv(form, (1, 1, 0, 1, 1))


def test_bridged_bowtie_breaks_groupoid():
    net = build_chain(1, 1, bridge=True)
    b = block_split(transport_matrix(net), 1, 1, 1)
    lhs = matmul(matmul(b.M22, invert_restricted(b.M12)), b.M11)
    assert lhs != b.M21


def test_chain_block_structure():
    net = build_chain(2, 2, bridge=True)
    m = transport_matrix(net)
    assert (m.rows, m.cols) == (3, 3)
    b = block_split(m, 2, 1, 2)
    # M12 is a 1x1 unit monomial even with the bridge
    assert len(b.M12.entry(0, 0).terms) == 1
    # only the lowest sink sees the two parallel routes
    assert len(b.M22.entry(1, 0).terms) == 2
    assert len(b.M22.entry(0, 0).terms) == 1
    assert all(len(b.M11.entry(i, j).terms) == 1 for i in range(1) for j in range(2))
    assert all(len(b.M21.entry(i, j).terms) == 1 for i in range(2) for j in range(2))


# ---------------------------------------------------------------------------
# triangle network, n = 2: fully hand-checked
# ---------------------------------------------------------------------------

TRIANGLE2_E = [
    [0, -1, 0, 1, 0, 0],
    [1, 0, -1, -2, 2, 0],
    [0, 1, 0, 0, -1, 0],
    [-1, 2, 0, 0, -2, 1],
    [0, -2, 1, 2, 0, -1],
    [0, 0, 0, -1, 1, 0],
]


def test_triangle2_labels_and_faces():
    net = build_triangle(2)
    assert net.sources == ["1", "2"]
    assert net.sinks == ["1'", "2'", "1''", "2''"]
    assert net.form.n == 6  # faces (0,1)..(2,1), lexicographic


def test_triangle2_epsilon_frozen():
    net = build_triangle(2)
    assert [list(r) for r in net.form.E] == TRIANGLE2_E


def test_triangle2_transport_frozen():
    net = build_triangle(2)
    m = transport_matrix(net)
    f = net.form
    assert (m.rows, m.cols) == (4, 2)
    assert m.entry(0, 0) == wv(f, (0, 0, 0, 0, 0, 1))
    assert m.entry(0, 1).is_zero()
    assert m.entry(1, 0) == wv(f, (0, 0, 0, 1, 0, 1))
    assert m.entry(1, 1) == wv(f, (0, 0, 0, 1, 1, 1))
    assert m.entry(2, 0) == wv(f, (1, 0, 0, 1, 0, 1))
    assert m.entry(2, 1) == wv(f, (1, 0, 0, 1, 1, 1))
    assert m.entry(3, 0).is_zero()
    assert m.entry(3, 1) == wv(f, (1, 1, 0, 1, 1, 1))


def test_triangle2_scalar_commutation_identities():
    # Entry-level commutation: with T = transport matrix,
    #   T[1->1'] T[1->2'] = q T[1->2'] T[1->1']
    #   [T[1->2'], T[2->2'']] = 0
    #   [T[1->2'], T[2->1'']] = (q - q^-1) T[1->1''] T[2->2']
    m = transport_matrix(build_triangle(2))
    t11p, t12p = m.entry(0, 0), m.entry(1, 0)
    t22p = m.entry(1, 1)
    t11pp, t21pp = m.entry(2, 0), m.entry(2, 1)
    t22pp = m.entry(3, 1)
    assert qmul(t11p, t12p) == qmul(t12p, t11p).scale(Q)
    assert qmul(t12p, t22pp) == qmul(t22pp, t12p)
    lhs = qmul(t12p, t21pp) - qmul(t21pp, t12p)
    assert lhs == qmul(t11pp, t22p).scale(QQ)


def test_triangle_structural_zeros():
    # Left-sink block lower-triangular, bottom-sink block upper-triangular.
    for n in (2, 3):
        m = transport_matrix(build_triangle(n))
        for s in range(n):
            for t in range(n):
                left = m.entry(t, s)
                bottom = m.entry(n + t, s)
                assert left.is_zero() == (t < s)
                assert bottom.is_zero() == (t > s)


def test_triangle6_boundary_labels():
    net = build_triangle(6)
    assert net.sources == [str(i) for i in range(1, 7)]
    assert net.sinks == [f"{i}'" for i in range(1, 7)] + [f"{i}''" for i in range(1, 7)]
    assert net.form.n == 28  # C(8, 2) faces


def _figure_pattern_E(n):
    """The triangle quiver generalized from the reference picture.

    Solid weight-2 arrows: (rho,c+1)->(rho,c), (rho,c)->(rho+1,c) for c >= 2,
    (rho,c)->(rho-1,c+1); dashed weight-1 arrows run around the boundary.
    """
    faces = [(rho, c) for rho in range(n + 1) for c in range(1, n + 2 - rho)]
    idx = {f: i for i, f in enumerate(faces)}
    e = [[0] * len(faces) for _ in faces]

    def add(f, g, w):
        e[idx[f]][idx[g]] += w
        e[idx[g]][idx[f]] -= w

    for rho in range(1, n):
        for c in range(1, n - rho + 1):
            add((rho, c + 1), (rho, c), 2)
            add((rho, c), (rho - 1, c + 1), 2)
    for rho in range(0, n - 1):
        for c in range(2, n - rho + 1):
            add((rho, c), (rho + 1, c), 2)
    for rho in range(0, n):
        add((rho, 1), (rho + 1, 1), 1)
    for rho in range(1, n + 1):
        add((rho, n + 1 - rho), (rho - 1, n + 2 - rho), 1)
    for c in range(1, n + 1):
        add((0, c + 1), (0, c), 1)
    return e


def test_triangle_quiver_matches_figure_pattern():
    for n in (2, 3, 4):
        net = build_triangle(n)
        assert [list(r) for r in net.form.E] == _figure_pattern_E(n)


# ---------------------------------------------------------------------------
# generic transport machinery
# ---------------------------------------------------------------------------


def _enumerate_paths(net, src, sink):
    """Independent brute-force path enumerator (acyclic networks)."""
    out = defaultdict(list)
    for e in net.edges:
        out[e.frm].append(e)
    done = []
    stack = [(src, [])]
    while stack:
        v, path = stack.pop()
        if v == sink:
            done.append(path)
            continue
        for e in out[v]:
            stack.append((e.to, path + [e]))
    return done


def _oracle_entry(net, a, c):
    total = QElem.zero(net.form)
    for path in _enumerate_paths(net, net.sources[a], net.sinks[c]):
        vec = [0] * net.form.n
        for e in path:
            for i, x in enumerate(e.exponent):
                vec[i] += x
        total = total + wv(net.form, vec)
    return total


@pytest.mark.parametrize(
    "net",
    [build_triangle(2), build_triangle(3), build_chain(2, 2, bridge=True)],
    ids=["triangle2", "triangle3", "chain22b"],
)
def test_transport_matches_bruteforce_dfs(net):
    for a in range(len(net.sources)):
        for c in range(len(net.sinks)):
            assert transport_entry(net, a, c) == _oracle_entry(net, a, c)


@pytest.mark.parametrize(
    "net",
    [build_triangle(2), build_chain(2, 1, bridge=True), build_chain(1, 2)],
    ids=["triangle2", "chain21b", "chain12"],
)
def test_per_edge_exponents_match_loop_windings(net):
    # The per-edge integer vectors must sum, along every path, to the winding
    # vector of the closed loop (path + clockwise return arc).
    for a in range(len(net.sources)):
        for c in range(len(net.sinks)):
            for path in _enumerate_paths(net, net.sources[a], net.sinks[c]):
                vec = [0] * net.form.n
                for e in path:
                    for i, x in enumerate(e.exponent):
                        vec[i] += x
                verts = [net.sources[a]] + [e.to for e in path]
                assert tuple(vec) == path_winding_vector(net, verts)


def test_transport_matrix_shape_and_indexing():
    net = build_chain(2, 1)
    m = transport_matrix(net)
    assert (m.rows, m.cols) == (2, 3)
    for i in range(m.rows):
        for j in range(m.cols):
            assert m.entry(i, j) == transport_entry(net, j, i)


def test_block_split_slices():
    net = build_chain(2, 2)
    m = transport_matrix(net)
    b = block_split(m, 2, 1, 2)
    assert (b.n1, b.m, b.n2) == (2, 1, 2)
    assert b.M11 == m.submatrix(0, 1, 0, 2)
    assert b.M12 == m.submatrix(0, 1, 2, 3)
    assert b.M21 == m.submatrix(1, 3, 0, 2)
    assert b.M22 == m.submatrix(1, 3, 2, 3)
    assert b.matrix == m
    with pytest.raises(ValueError):
        block_split(m, 2, 2, 2)
    with pytest.raises(ValueError):
        block_split(m, 3, 0, 3)


# ---------------------------------------------------------------------------
# cyclic networks
# ---------------------------------------------------------------------------


def _cyclic_fixture(with_geometry=True, max_cycle_uses=2):
    # a -> P -> Q -> R -> c with a back edge R -> P; the exit segment R -> c
    # crosses P -> Q transversally, so the shortest path carries sign -1.
    form = SkewForm([[0]])
    edges = [
        Edge("a", "P", (0,)),
        Edge("P", "Q", (1,)),
        Edge("Q", "R", (0,)),
        Edge("R", "P", (0,)),
        Edge("R", "c", (0,)),
    ]
    geom = None
    if with_geometry:
        coords = {
            "a": (Fraction(0), Fraction(2)),
            "P": (Fraction(0), Fraction(0)),
            "Q": (Fraction(-1), Fraction(-1)),
            "R": (Fraction(1), Fraction(-1)),
            "c": (Fraction(-2), Fraction(1)),
        }
        geom = Geometry(coords=coords, face_markers=[(Fraction(0), Fraction(-Fraction(2, 3)))])
    return Network(
        form=form,
        vertices=["a", "P", "Q", "R", "c"],
        edges=edges,
        sources=["a"],
        sinks=["c"],
        geometry=geom,
        max_cycle_uses=max_cycle_uses,
    )


def test_cyclic_transport_frozen():
    net = _cyclic_fixture()
    form = net.form
    # one crossing on the short path, two on the once-around path
    expected = wv(form, (1,), QScalar.from_int(-1)) + wv(form, (2,))
    assert transport_entry(net, 0, 0) == expected


def test_cyclic_truncation_bound_one():
    net = _cyclic_fixture(max_cycle_uses=1)
    assert transport_entry(net, 0, 0) == wv(net.form, (1,), QScalar.from_int(-1))


def test_cyclic_requires_truncation():
    net = _cyclic_fixture(max_cycle_uses=None)
    with pytest.raises(TruncationRequired):
        transport_entry(net, 0, 0)


def test_cyclic_requires_geometry():
    net = _cyclic_fixture(with_geometry=False)
    with pytest.raises(CyclicWithoutGeometry):
        transport_entry(net, 0, 0)


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------


def test_network_roundtrip(tmp_path):
    net = build_chain(2, 1, bridge=True)
    path = tmp_path / "chain.json"
    save_network(net, path)
    again = load_network(path)
    assert again.form == net.form
    assert again.sources == net.sources
    assert again.sinks == net.sinks
    assert transport_matrix(again) == transport_matrix(net)
    assert again.geometry is not None
    assert again.geometry.coords == net.geometry.coords
    assert again.geometry.face_markers == net.geometry.face_markers


def test_network_loader_validates(tmp_path):
    doc = {
        "generators": ["x", "y"],
        "epsilon2": [[0, 1], [1, 0]],  # not skew
        "vertices": ["a", "c"],
        "edges": [{"from": "a", "to": "c", "exponent": [1, 0]}],
        "sources": ["a"],
        "sinks": ["c"],
    }
    with pytest.raises(ValueError):
        network_from_dict(doc)
    doc["epsilon2"] = [[0, 1], [-1, 0]]
    net = network_from_dict(doc)
    assert transport_entry(net, 0, 0) == wv(net.form, (1, 0))
    doc["edges"][0]["exponent"] = [1]
    with pytest.raises(ValueError):
        network_from_dict(doc)
    doc["edges"][0]["exponent"] = [1, 0]
    doc["edges"][0]["to"] = "nowhere"
    with pytest.raises(ValueError):
        network_from_dict(doc)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(json.JSONDecodeError):
        load_network(bad)


# ---------------------------------------------------------------------------
# composite assembly of three fragments
# ---------------------------------------------------------------------------


def _monomial_matrix(form, rows, cols, gen_offset, rng):
    data = []
    n = form.n
    for i in range(rows):
        row = []
        for j in range(cols):
            vec = [0] * n
            vec[(gen_offset + i + 2 * j) % n] = 1
            vec[(gen_offset + 3 * i + j + 1) % n] += 1
            row.append(wv(form, vec, QScalar.v_power(rng.randint(-2, 2))))
        data.append(row)
    return QMatrix.from_rows(form, data)


def test_assemble_composite_structure_commutative():
    # With commuting generators the block entries are plain monomial sums.
    form = SkewForm([[0] * 7 for _ in range(7)])
    gens = [wv(form, tuple(1 if k == i else 0 for k in range(7))) for i in range(7)]
    t11, t12, t21, t22, t23, t31, t32 = (
        QMatrix.from_rows(form, [[g]]) for g in gens
    )
    b = assemble_composite(t11, t12, t21, t22, t23, t31, t32)
    assert (b.n1, b.m, b.n2) == (1, 2, 1)
    onehot = lambda *idx: tuple(1 if k in idx else 0 for k in range(7))
    assert b.M11.entry(0, 0) == wv(form, onehot(2, 1))  # T21 T12
    assert b.M11.entry(1, 0) == wv(form, onehot(5, 3, 1))  # T31 T22 T12
    assert b.M12.entry(0, 0) == wv(form, onehot(2, 0))  # T21 T11
    assert b.M12.entry(0, 1).is_zero()
    assert b.M12.entry(1, 0) == wv(form, onehot(5, 3, 0))  # T31 T22 T11
    assert b.M12.entry(1, 1) == wv(form, onehot(5, 4))  # T31 T23
    assert b.M21.entry(0, 0) == wv(form, onehot(6, 3, 1))  # T32 T22 T12
    assert b.M22.entry(0, 0) == wv(form, onehot(6, 3, 0))  # T32 T22 T11
    assert b.M22.entry(0, 1) == wv(form, onehot(6, 4))  # T32 T23


def test_assemble_composite_groupoid_any_form():
    # M22 M12^-1 M11 = M21 is a ring identity: it needs invertibility of the
    # fragments but no commutation at all.
    rng = random.Random(2024)
    e = [[0] * 8 for _ in range(8)]
    for i in range(8):
        for j in range(i + 1, 8):
            e[i][j] = rng.randint(-2, 2)
            e[j][i] = -e[i][j]
    form = SkewForm(e)
    sizes = dict(m2=2, n1=2, k=2, m1=1, n2=2)
    t11 = _monomial_matrix(form, sizes["m2"], sizes["m2"], 0, rng)
    t12 = _monomial_matrix(form, sizes["m2"], sizes["n1"], 1, rng)
    t21 = _monomial_matrix(form, sizes["m2"], sizes["m2"], 2, rng)
    t22 = _monomial_matrix(form, sizes["k"], sizes["m2"], 3, rng)
    t23 = _monomial_matrix(form, sizes["k"], sizes["m1"], 4, rng)
    t31 = _monomial_matrix(form, sizes["m1"], sizes["k"], 5, rng)
    t32 = _monomial_matrix(form, sizes["n2"], sizes["k"], 6, rng)
    # the identity needs T11, T21 and the corner T31 T23 of M12 invertible:
    # triangularize the square fragments and keep one route through T23
    t11 = _triangularize(t11)
    t21 = _triangularize(t21)
    z = QElem.zero(form)
    t23 = QMatrix.from_rows(
        form, [[t23.entry(0, 0)]] + [[z]] * (sizes["k"] - 1)
    )
    b = assemble_composite(t11, t12, t21, t22, t23, t31, t32)
    lhs = matmul(matmul(b.M22, invert_restricted(b.M12)), b.M11)
    assert lhs == b.M21


def _triangularize(m):
    z = QElem.zero(m.form)
    rows = [
        [m.entry(i, j) if j <= i else z for j in range(m.cols)]
        for i in range(m.rows)
    ]
    return QMatrix.from_rows(m.form, rows)


def test_assemble_composite_shape_validation():
    form = SkewForm([[0]])
    one = QMatrix.from_rows(form, [[QElem.one(form)]])
    two = QMatrix.from_rows(form, [[QElem.one(form), QElem.one(form)]])
    with pytest.raises(ValueError):
        assemble_composite(two, one, one, one, one, one, one)


# ---------------------------------------------------------------------------
# hat-matrix example
# ---------------------------------------------------------------------------


def test_hat_matrix_frozen():
    assert hat_matrix(2) == [[1, 1, 0], [1, 1, 1], [1, 1, 1]]
    h = hat_matrix(5)
    for i in range(6):
        for j in range(6):
            assert h[i][j] == (1 if i - j + 1 >= 0 else 0)


def test_hat_m12_inverse_power_binomials():
    from math import comb

    for r in (2, 3, 5):
        for p in (1, 2, 4, 7):
            m = hat_m12_inverse_power(r, p)
            for i in range(r):
                for j in range(r):
                    want = (-1) ** (i - j) * comb(p, i - j) if i >= j else 0
                    assert m[i][j] == want


def test_f_rp_frozen_values():
    assert f_rp(3, 5) == 3
    assert f_rp(2, 2) == 0
    for p in range(1, 9):
        assert f_rp(1, p) == 1
    for r in range(1, 9):
        assert f_rp(r, 1) == 1


def test_f_rp_modes_agree():
    for r in range(1, 9):
        for p in range(1, 9):
            a = f_rp(r, p, mode="matrix")
            b = f_rp(r, p, mode="recursion")
            c = f_rp(r, p, mode="closed")
            assert a == b == c, (r, p)


def test_f_rp_recursion_relation():
    # f^r_{p+1} = f^r_p - f^{r-1}_p
    for r in range(2, 7):
        for p in range(1, 7):
            assert f_rp(r, p + 1) == f_rp(r, p) - f_rp(r - 1, p)


def test_f_rp_rejects_bad_mode():
    with pytest.raises(ValueError):
        f_rp(2, 2, mode="guess")
