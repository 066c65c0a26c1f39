"""Exact identity checkers for transport matrices over the quantum torus.

Every checker recomputes both sides of an algebraic identity and returns a
CheckReport listing the first offending entry of each failing relation.
Nothing here is numerical: coefficients stay Laurent polynomials in v
throughout, so a pass is an exact statement about the network, not an
approximation.
"""

import time
from dataclasses import dataclass

from .ncmat import (
    QMatrix,
    classical_act,
    invert_restricted,
    lift1,
    lift2,
    matmul,
    sheet_product,
    transpose_q,
)
from .qalg import QScalar
from .rmat import (
    CMatrix,
    build_P,
    build_P_rect,
    build_R,
    partial_transpose_t1,
    transpose,
    yang_baxter_residual,
)

# q - q^-1, the coefficient of every permutation correction term
QQ = QScalar.q_power(1) - QScalar.q_power(-1)


@dataclass
class CheckReport:
    """Outcome of one checker.

    residuals holds one record per failing relation: the relation label with
    the position of the first nonzero entry, and that entry rendered.
    """

    name: str
    parameters: dict
    passed: bool
    residuals: list
    timing_ms: float

    def to_json(self):
        return {
            "name": self.name,
            "parameters": self.parameters,
            "passed": self.passed,
            "residuals": self.residuals,
            "timing_ms": self.timing_ms,
        }


def _first_nonzero(mat):
    if isinstance(mat, CMatrix):
        for (i, j), val in sorted(mat.entries.items()):
            if not val.is_zero():
                return f"[{i},{j}]", val.render()
        return None
    for i in range(mat.rows):
        for j in range(mat.cols):
            x = mat.entry(i, j)
            if not x.is_zero():
                return f"[{i},{j}]", x.render()
    return None


def _finish(name, parameters, items, t0):
    residuals = []
    for label, mat in items:
        hit = _first_nonzero(mat)
        if hit is not None:
            residuals.append({"index": label + hit[0], "value": hit[1]})
    return CheckReport(
        name=name,
        parameters=parameters,
        passed=not residuals,
        residuals=residuals,
        timing_ms=(time.perf_counter() - t0) * 1000.0,
    )


def _r_pair(k):
    """R and its transposed inverse, the two constant exchange forms."""
    return build_R(k), transpose(build_R(k, inverse_q=True))


def check_rmatrix(k):
    """All constant R-matrix identities at size k."""
    t0 = time.perf_counter()
    r = build_R(k)
    ri = build_R(k, inverse_q=True)
    rt = transpose(r)
    rit = transpose(ri)
    p = build_P(k)
    ident = CMatrix.identity(k * k)
    spectral = QScalar.q_power(2) + QScalar.q_power(-2)
    items = [
        ("yang-baxter", yang_baxter_residual(r, k)),
        ("inverse", r * ri - ident),
        ("hecke", r * rt - (r * p).scale(QQ) - ident),
        ("hecke-inv", ri * transpose(ri) + (ri * p).scale(QQ) - ident),
        ("flip", p * r - rt * p),
        ("skein", r - rit - p.scale(QQ)),
        ("spectral", r * rt + rit * ri - ident.scale(spectral)),
    ]
    for nm, a in (("t1(R)", partial_transpose_t1(r)), ("t1(R*)", partial_transpose_t1(rit))):
        for nm2, b in (("R", r), ("R*", rit)):
            items.append((f"commute:{nm},{nm2}", a * b - b * a))
    return _finish("rmatrix", {"k": k}, items, t0)


def _rtt_items(m, tag=""):
    """Self-exchange residuals of one matrix, in both constant forms."""
    r_out, rit_out = _r_pair(m.rows)
    r_in, rit_in = _r_pair(m.cols)
    s12 = sheet_product(m, m, 12)
    s21 = sheet_product(m, m, 21)
    items = []
    for nm, c_out, c_in in (("R", r_out, r_in), ("R*", rit_out, rit_in)):
        lhs = classical_act(c_out, s12, "left")
        rhs = classical_act(c_in, s21, "right")
        items.append((tag + nm, lhs - rhs))
    return items


def check_rtt(m):
    """Self-exchange relations of a full transport matrix."""
    t0 = time.perf_counter()
    return _finish("rtt", {"rows": m.rows, "cols": m.cols}, _rtt_items(m), t0)


def check_blocks(b):
    """The complete set of exchange relations among the four blocks."""
    t0 = time.perf_counter()
    n1, m, n2 = b.n1, b.m, b.n2
    r_m = build_R(m)
    r_n1 = build_R(n1)
    r_n2 = build_R(n2)
    items = []
    items += _rtt_items(b.M11, "M11:")
    items += _rtt_items(b.M12, "M12:")
    items += _rtt_items(b.M21, "M21:")
    items += _rtt_items(b.M22, "M22:")
    items.append((
        "M12,M11",
        sheet_product(b.M12, b.M11, 21)
        - classical_act(r_m, sheet_product(b.M12, b.M11, 12), "left"),
    ))
    items.append((
        "M12,M22",
        sheet_product(b.M12, b.M22, 12)
        - classical_act(r_m, sheet_product(b.M12, b.M22, 21), "right"),
    ))
    items.append((
        "M11,M21",
        sheet_product(b.M11, b.M21, 12)
        - classical_act(r_n1, sheet_product(b.M11, b.M21, 21), "right"),
    ))
    items.append((
        "M22,M21",
        sheet_product(b.M22, b.M21, 21)
        - classical_act(r_n2, sheet_product(b.M22, b.M21, 12), "left"),
    ))
    items.append((
        "M12,M21",
        sheet_product(b.M12, b.M21, 12) - sheet_product(b.M12, b.M21, 21),
    ))
    items.append((
        "M11,M22",
        sheet_product(b.M11, b.M22, 12)
        - sheet_product(b.M11, b.M22, 21)
        - classical_act(
            build_P_rect(n1, m), sheet_product(b.M12, b.M21, 21), "right"
        ).scale(QQ),
    ))
    return _finish("blocks", {"n1": n1, "m": m, "n2": n2}, items, t0)


def affine_level_residual(tser, k, p):
    """Summed level-(k,p) exchange residual of a one-sided level family.

    R (1)T_k (2)T_p + (q-q^-1) P sum_{m=1..p} (1)T_{k+m} (2)T_{p-m}
    minus the same with the sheets read in the other order and the constant
    matrices acting on the column side instead.
    """
    r_out, p_out = build_R(tser.rows), build_P(tser.rows)
    r_in, p_in = build_R(tser.cols), build_P(tser.cols)
    tk, tp = tser.get(k), tser.get(p)
    res = classical_act(r_out, sheet_product(tk, tp, 12), "left") - classical_act(
        r_in, sheet_product(tk, tp, 21), "right"
    )
    sum12 = None
    sum21 = None
    for m in range(1, p + 1):
        a, c = tser.get(k + m), tser.get(p - m)
        s12 = sheet_product(a, c, 12)
        s21 = sheet_product(a, c, 21)
        sum12 = s12 if sum12 is None else sum12 + s12
        sum21 = s21 if sum21 is None else sum21 + s21
    if sum12 is not None:
        res = res + classical_act(p_out, sum12, "left").scale(QQ)
        res = res - classical_act(p_in, sum21, "right").scale(QQ)
    return res


def check_affine(tser, kmax, pmax):
    """Summed level relations over 0 <= k <= kmax, 0 <= p <= pmax."""
    t0 = time.perf_counter()
    items = [
        (f"S({k},{p})", affine_level_residual(tser, k, p))
        for k in range(kmax + 1)
        for p in range(pmax + 1)
    ]
    return _finish("affine", {"kmax": kmax, "pmax": pmax}, items, t0)


def loop_component_residual(x, y, a, b):
    """One spectral component of the exchange relation of two families.

    R* (1)X_{a+1} (2)Y_b - R (1)X_a (2)Y_{b+1}
    minus the sheet-reversed products with the constants on the column side.
    """
    r_out, rit_out = _r_pair(x.rows)
    r_in, rit_in = _r_pair(x.cols)
    return (
        classical_act(rit_out, sheet_product(x.get(a + 1), y.get(b), 12), "left")
        - classical_act(r_out, sheet_product(x.get(a), y.get(b + 1), 12), "left")
        - classical_act(rit_in, sheet_product(x.get(a + 1), y.get(b), 21), "right")
        + classical_act(r_in, sheet_product(x.get(a), y.get(b + 1), 21), "right")
    )


def check_loop(tser, lo, hi):
    """Componentwise exchange relations of a two-sided level family."""
    t0 = time.perf_counter()
    items = [
        (f"C({a},{b})", loop_component_residual(tser, tser, a, b))
        for a in range(lo, hi + 1)
        for b in range(lo, hi + 1)
    ]
    return _finish("loop", {"lo": lo, "hi": hi}, items, t0)


def check_subalgebra(tser):
    """Exchange relations of the level-0 and level-(-1) generators alone."""
    t0 = time.perf_counter()
    tp0 = tser.get(0)
    tm1 = tser.get(-1)
    r_out, _ = _r_pair(tp0.rows)
    r_in, _ = _r_pair(tp0.cols)
    items = _rtt_items(tp0, "T+0:")
    items.append((
        "T-1,T+0",
        classical_act(r_out, sheet_product(tm1, tp0, 12), "left")
        - classical_act(r_in, sheet_product(tm1, tp0, 21), "right"),
    ))
    items += _rtt_items(tm1, "T-1:")
    return _finish("subalgebra", {}, items, t0)


def check_groupoid(b):
    """Does M22 M12^-1 M11 reproduce M21 exactly?"""
    t0 = time.perf_counter()
    inv = invert_restricted(b.M12)
    res = matmul(matmul(b.M22, inv), b.M11) - b.M21
    items = [("M22 M12^-1 M11 - M21", res)]
    return _finish("groupoid", {"n1": b.n1, "m": b.m, "n2": b.n2}, items, t0)


def check_aux_inverse(b):
    """Exchange relations of the inverse middle block with its neighbours.

    (2)M22 R^-1 (1)M12^-1 = (1)M12^-1 (2)M22,
    (1)M12^-1 R^-1 (2)M11 = (2)M11 (1)M12^-1,
    (1)M12^-1 (2)M12^-1 R = R (2)M12^-1 (1)M12^-1,
    and, with G = M22 M12^-1 M11, the cross relation
    (1)G (2)M11 R^-1 = (2)M11 (1)G - (q-q^-1) (1)M21 (2)M11 P.
    """
    t0 = time.perf_counter()
    m, n1, n2 = b.m, b.n1, b.n2
    inv = invert_restricted(b.M12)
    r_m = build_R(m)
    rinv_m = build_R(m, inverse_q=True)
    items = []
    lhs = matmul(lift2(b.M22, m), classical_act(rinv_m, lift1(inv, m), "left"))
    rhs = matmul(lift1(inv, n2), lift2(b.M22, m))
    items.append(("M22,M12^-1", lhs - rhs))
    lhs = matmul(lift1(inv, m), classical_act(rinv_m, lift2(b.M11, m), "left"))
    rhs = matmul(lift2(b.M11, m), lift1(inv, n1))
    items.append(("M12^-1,M11", lhs - rhs))
    items.append((
        "M12^-1,M12^-1",
        classical_act(r_m, sheet_product(inv, inv, 12), "right")
        - classical_act(r_m, sheet_product(inv, inv, 21), "left"),
    ))
    g = matmul(matmul(b.M22, inv), b.M11)
    rinv_n1 = build_R(n1, inverse_q=True)
    items.append((
        "G,M11",
        classical_act(rinv_n1, sheet_product(g, b.M11, 12), "right")
        - sheet_product(g, b.M11, 21)
        + classical_act(
            build_P(n1), sheet_product(b.M21, b.M11, 12), "right"
        ).scale(QQ),
    ))
    return _finish("aux-inverse", {"n1": n1, "m": m, "n2": n2}, items, t0)


def _chain1(x, c, y):
    """(1)x . c . (2)y on the doubled space, c a matrix of scalars."""
    n = x.rows
    return matmul(lift1(x, n), classical_act(c, lift2(y, n), "left"))


def _chain2(y, c, x):
    """(2)y . c . (1)x on the doubled space."""
    n = y.rows
    return matmul(lift2(y, n), classical_act(c, lift1(x, n), "left"))


def reflection_constant_residual(a0):
    """R (1)A R^t1 (2)A - (2)A R^t1 (1)A R for one square matrix A."""
    r = build_R(a0.rows)
    rt1 = partial_transpose_t1(r)
    return classical_act(r, _chain1(a0, rt1, a0), "left") - classical_act(
        r, _chain2(a0, rt1, a0), "right"
    )


def check_reflection_constant(a0):
    """Constant reflection relation of a single square matrix."""
    t0 = time.perf_counter()
    if a0.rows != a0.cols:
        raise ValueError("reflection checks need a square matrix")
    items = [("constant", reflection_constant_residual(a0))]
    return _finish("reflection", {"size": a0.rows}, items, t0)


def reflection_affine_residual(aser, alpha, beta):
    """Bidegree (alpha, beta) component of the spectral reflection relation."""
    r, rit = _r_pair(aser.rows)
    rt1 = partial_transpose_t1(r)
    ritt1 = partial_transpose_t1(rit)
    a = aser.get
    left = (
        classical_act(rit, _chain1(a(alpha), ritt1, a(beta)), "left")
        - classical_act(rit, _chain1(a(alpha + 1), rt1, a(beta + 1)), "left")
        - classical_act(r, _chain1(a(alpha - 1), ritt1, a(beta + 1)), "left")
        + classical_act(r, _chain1(a(alpha), rt1, a(beta + 2)), "left")
    )
    right = (
        classical_act(rit, _chain2(a(beta), ritt1, a(alpha)), "right")
        - classical_act(rit, _chain2(a(beta + 1), rt1, a(alpha + 1)), "right")
        - classical_act(r, _chain2(a(beta + 1), ritt1, a(alpha - 1)), "right")
        + classical_act(r, _chain2(a(beta + 2), rt1, a(alpha)), "right")
    )
    return left - right


def check_reflection_affine(aser, kmax):
    """Spectral reflection relation over a window of bidegrees."""
    t0 = time.perf_counter()
    items = [
        (f"({a},{b})", reflection_affine_residual(aser, a, b))
        for a in range(0, kmax + 1)
        for b in range(-1, kmax)
    ]
    return _finish("reflection-affine", {"kmax": kmax}, items, t0)


def check_disc_reflection(m):
    """Reflection relation of a transport matrix whose sink rows split in half.

    With M1 the top half and M2 the bottom half, A = M1^t M2 must be
    upper-triangular and satisfy the constant reflection relation.
    """
    t0 = time.perf_counter()
    if m.rows % 2 != 0:
        raise ValueError("need an even number of sink rows")
    half = m.rows // 2
    m1 = m.submatrix(0, half, 0, m.cols)
    m2 = m.submatrix(half, m.rows, 0, m.cols)
    a = matmul(transpose_q(m1), m2)
    zero = QMatrix.zero(1, 1, a.form).entry(0, 0)
    lower = QMatrix.from_rows(
        a.form,
        [
            [a.entry(i, j) if i > j else zero for j in range(a.cols)]
            for i in range(a.rows)
        ],
    )
    items = [
        ("triangular", lower),
        ("reflection", reflection_constant_residual(a)),
    ]
    return _finish("disc-reflection", {"rows": m.rows, "cols": m.cols}, items, t0)


def check_appendix(b):
    """Quadratic relation of the deep negative levels with the level defect.

    With T_k = M22 M12^-k M11 and D = T_1 - M21:
    R* (1)T_2 (2)T_2 - (2)T_2 (1)T_2 R*
      = (q - q^-1) [ P (1)T_3 (2)D - (2)D (1)T_3 P ].
    """
    t0 = time.perf_counter()
    inv = invert_restricted(b.M12)
    acc = matmul(inv, b.M11)
    raw = {}
    for k in (1, 2, 3):
        raw[k] = matmul(b.M22, acc)
        acc = matmul(inv, acc)
    t2, t3 = raw[2], raw[3]
    d = raw[1] - b.M21
    _, rit_out = _r_pair(t2.rows)
    _, rit_in = _r_pair(t2.cols)
    p_out, p_in = build_P(t2.rows), build_P(t2.cols)
    res = (
        classical_act(rit_out, sheet_product(t2, t2, 12), "left")
        - classical_act(rit_in, sheet_product(t2, t2, 21), "right")
        - classical_act(p_out, sheet_product(t3, d, 12), "left").scale(QQ)
        + classical_act(p_in, sheet_product(t3, d, 21), "right").scale(QQ)
    )
    items = [("appendix", res)]
    return _finish("appendix", {"n1": b.n1, "m": b.m, "n2": b.n2}, items, t0)
