"""Quantum torus algebra with exact Laurent-polynomial coefficients.

The torus has generators w_1..w_N subject to w_i w_j = q^{-2 eps_ij} w_j w_i,
where eps is a skew-symmetric half-integer form.  We work over Z[v, v^-1] with
q = v^2 and store the integer matrix E = 2*eps, so every phase that appears is
an integer power of v.  Elements are kept in the Weyl (symmetric-ordered)
monomial basis

    :w^a: ,  a in Z^N,

with the product rule  :w^a: :w^b: = v^{-a.E.b} :w^{a+b}:  (a.E.b = a^T E b).
"""

from __future__ import annotations


class NotAUnit(ValueError):
    """Raised when a monomial inverse is requested for a non-invertible element."""


class QScalar:
    """A Laurent polynomial in v with integer coefficients, stored sparsely."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms: {v-exponent: coefficient}, zero coefficients dropped
        clean = {}
        if terms:
            for k, c in terms.items():
                if c:
                    clean[int(k)] = int(c)
        self.terms = clean

    @classmethod
    def zero(cls) -> "QScalar":
        return cls()

    @classmethod
    def one(cls) -> "QScalar":
        return cls({0: 1})

    @classmethod
    def from_int(cls, n: int) -> "QScalar":
        return cls({0: n})

    @classmethod
    def v_power(cls, k: int) -> "QScalar":
        return cls({k: 1})

    @classmethod
    def q_power(cls, k: int) -> "QScalar":
        """q^k with q = v^2."""
        return cls({2 * k: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {0: 1}

    def __add__(self, other: "QScalar") -> "QScalar":
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        res = QScalar.__new__(QScalar)
        res.terms = out
        return res

    def __neg__(self) -> "QScalar":
        res = QScalar.__new__(QScalar)
        res.terms = {k: -c for k, c in self.terms.items()}
        return res

    def __sub__(self, other: "QScalar") -> "QScalar":
        return self + (-other)

    def __mul__(self, other: "QScalar") -> "QScalar":
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                s = out.get(k, 0) + c1 * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        res = QScalar.__new__(QScalar)
        res.terms = out
        return res

    def __pow__(self, n: int) -> "QScalar":
        if n < 0:
            raise ValueError("negative powers are only defined for units; use bar/v_power")
        out = QScalar.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, QScalar) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def bar(self) -> "QScalar":
        """The involution v -> v^-1."""
        res = QScalar.__new__(QScalar)
        res.terms = {-k: c for k, c in self.terms.items()}
        return res

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            c = self.terms[k]
            parts.append(f"{c}" if k == 0 else f"{c}*v^{k}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return self.render()


def scalar_add(x: QScalar, y: QScalar) -> QScalar:
    return x + y


def scalar_mul(x: QScalar, y: QScalar) -> QScalar:
    return x * y


def bar(x):
    """v -> v^-1 on scalars; coefficient-wise on Weyl-basis elements.

    The Weyl monomials :w^a: are fixed by the bar involution, which therefore
    acts on an element purely through its coefficients (and reverses products).
    """
    return x.bar()


class SkewForm:
    """The commutation data of the torus: an integer skew-symmetric matrix E = 2*eps."""

    __slots__ = ("E", "n")

    def __init__(self, E):
        rows = [tuple(int(x) for x in row) for row in E]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("E must be square")
        for i in range(n):
            for j in range(n):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError("E must be skew-symmetric")
        self.E = tuple(rows)
        self.n = n

    def pairing(self, a, b) -> int:
        """a^T E b for integer exponent vectors a, b."""
        E = self.E
        total = 0
        for i, ai in enumerate(a):
            if ai:
                row = E[i]
                total += ai * sum(row[j] * bj for j, bj in enumerate(b) if bj)
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, SkewForm) and self.E == other.E

    def __hash__(self):
        return hash(self.E)

    def __repr__(self) -> str:
        return f"SkewForm({[list(r) for r in self.E]})"


def _same_form(a: "QElem", b: "QElem") -> SkewForm:
    if a.form is not b.form and a.form != b.form:
        raise ValueError("elements live on different quantum tori")
    return a.form


class QElem:
    """An element of the quantum torus in the Weyl monomial basis.

    terms maps an exponent vector (tuple of ints of length form.n) to its
    QScalar coefficient; zero coefficients are never stored.
    """

    __slots__ = ("form", "terms")

    def __init__(self, form: SkewForm, terms=None):
        self.form = form
        clean = {}
        if terms:
            for exps, c in terms.items():
                key = tuple(int(e) for e in exps)
                if len(key) != form.n:
                    raise ValueError("exponent vector has wrong length")
                if not c.is_zero():
                    clean[key] = c
        self.terms = clean

    @classmethod
    def zero(cls, form: SkewForm) -> "QElem":
        return cls(form)

    @classmethod
    def one(cls, form: SkewForm) -> "QElem":
        return cls(form, {(0,) * form.n: QScalar.one()})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "QElem") -> "QElem":
        form = _same_form(self, other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(exps, None)
            else:
                out[exps] = s
        res = QElem.__new__(QElem)
        res.form = form
        res.terms = out
        return res

    def __neg__(self) -> "QElem":
        res = QElem.__new__(QElem)
        res.form = self.form
        res.terms = {exps: -c for exps, c in self.terms.items()}
        return res

    def __sub__(self, other: "QElem") -> "QElem":
        return self + (-other)

    def scale(self, c: QScalar) -> "QElem":
        out = {}
        for exps, x in self.terms.items():
            p = x * c
            if not p.is_zero():
                out[exps] = p
        res = QElem.__new__(QElem)
        res.form = self.form
        res.terms = out
        return res

    def __mul__(self, other: "QElem") -> "QElem":
        return qmul(self, other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QElem)
            and self.form == other.form
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.form, frozenset((e, c) for e, c in self.terms.items())))

    def bar(self) -> "QElem":
        res = QElem.__new__(QElem)
        res.form = self.form
        res.terms = {exps: c.bar() for exps, c in self.terms.items()}
        return res

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms):
            coeff = self.terms[exps].render()
            body = ",".join(str(e) for e in exps)
            parts.append(f"({coeff}) * w[{body}]")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return self.render()


def weyl(form: SkewForm, exponents, coeff: QScalar | None = None) -> QElem:
    """The Weyl-ordered monomial :w^a: (optionally scaled by a coefficient)."""
    return QElem(form, {tuple(exponents): QScalar.one() if coeff is None else coeff})


def qmul(x: QElem, y: QElem) -> QElem:
    """Product in the torus: :w^a: :w^b: = v^{-a.E.b} :w^{a+b}:."""
    form = _same_form(x, y)
    pairing = form.pairing
    out = {}
    for ea, ca in x.terms.items():
        for eb, cb in y.terms.items():
            key = tuple(a + b for a, b in zip(ea, eb))
            c = (ca * cb) * QScalar.v_power(-pairing(ea, eb))
            s = out.get(key)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    res = QElem.__new__(QElem)
    res.form = form
    res.terms = out
    return res


def invert_monomial(x: QElem) -> QElem:
    """Invert a single Weyl monomial with unit coefficient +-v^k.

    Since a.E.a = 0, the inverse of c :w^a: is c^-1 :w^{-a}: with no extra
    phase.  Anything that is not such a monomial raises NotAUnit.
    """
    if len(x.terms) != 1:
        raise NotAUnit("not a single monomial")
    (exps, c), = x.terms.items()
    if len(c.terms) != 1:
        raise NotAUnit("coefficient is not a monomial in v")
    (k, n), = c.terms.items()
    if n not in (1, -1):
        raise NotAUnit("coefficient is not a unit of Z[v, v^-1]")
    return weyl(x.form, tuple(-e for e in exps), QScalar({-k: n}))
