"""Matrices with noncommuting quantum-torus entries.

QMatrix is dense: every entry is a QElem over one shared SkewForm.  Products
never reorder factors, so the left/right structure of every identity is
preserved exactly.  Composite (tensor-square) indices are sheet-1-major,
matching the classical matrices in rmat.
"""

from __future__ import annotations

from .qalg import NotAUnit, QElem, SkewForm, invert_monomial, qmul
from .rmat import CMatrix


class NotInvertibleInSupportedClass(ValueError):
    """Raised when invert_restricted gets a matrix outside its supported class."""


class QMatrix:
    """A dense rows x cols matrix of quantum-torus elements."""

    __slots__ = ("rows", "cols", "form", "data")

    def __init__(self, rows: int, cols: int, form: SkewForm, data):
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("data does not match shape")
        self.rows = rows
        self.cols = cols
        self.form = form
        self.data = data

    @classmethod
    def from_rows(cls, form: SkewForm, rows) -> "QMatrix":
        data = [list(r) for r in rows]
        return cls(len(data), len(data[0]) if data else 0, form, data)

    @classmethod
    def zero(cls, rows: int, cols: int, form: SkewForm) -> "QMatrix":
        z = QElem.zero(form)
        return cls(rows, cols, form, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int, form: SkewForm) -> "QMatrix":
        z = QElem.zero(form)
        one = QElem.one(form)
        return cls(n, n, form, [[one if i == j else z for j in range(n)] for i in range(n)])

    def entry(self, i: int, j: int) -> QElem:
        return self.data[i][j]

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.data for x in row)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.form == other.form
            and self.data == other.data
        )

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return QMatrix(
            self.rows,
            self.cols,
            self.form,
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
        )

    def __neg__(self) -> "QMatrix":
        return QMatrix(
            self.rows, self.cols, self.form, [[-x for x in row] for row in self.data]
        )

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scale(self, c) -> "QMatrix":
        return QMatrix(
            self.rows,
            self.cols,
            self.form,
            [[x.scale(c) for x in row] for row in self.data],
        )

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "QMatrix":
        return QMatrix(
            r1 - r0,
            c1 - c0,
            self.form,
            [row[c0:c1] for row in self.data[r0:r1]],
        )

    @classmethod
    def from_blocks(cls, blocks) -> "QMatrix":
        """Assemble from a 2D grid of QMatrix blocks with matching shapes."""
        form = blocks[0][0].form
        data = []
        for brow in blocks:
            height = brow[0].rows
            if any(b.rows != height for b in brow):
                raise ValueError("block row heights differ")
            for i in range(height):
                data.append([x for b in brow for x in b.data[i]])
        width = len(data[0]) if data else 0
        if any(len(r) != width for r in data):
            raise ValueError("block column widths differ")
        return cls(len(data), width, form, data)

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols})"


def matmul(a: QMatrix, b: QMatrix) -> QMatrix:
    """(a b)[i, j] = sum_k a[i, k] b[k, j], factors kept in this order."""
    if a.cols != b.rows:
        raise ValueError("shape mismatch")
    if a.form != b.form:
        raise ValueError("matrices live on different quantum tori")
    z = QElem.zero(a.form)
    data = []
    for i in range(a.rows):
        arow = a.data[i]
        out_row = []
        for j in range(b.cols):
            acc = z
            for k in range(a.cols):
                x = arow[k]
                y = b.data[k][j]
                if x.is_zero() or y.is_zero():
                    continue
                acc = acc + qmul(x, y)
            out_row.append(acc)
        data.append(out_row)
    return QMatrix(a.rows, b.cols, a.form, data)


def transpose_q(m: QMatrix) -> QMatrix:
    """Entry-position transpose; the noncommuting entries are not touched."""
    return QMatrix(
        m.cols,
        m.rows,
        m.form,
        [[m.data[i][j] for i in range(m.rows)] for j in range(m.cols)],
    )


def sheet_product(a: QMatrix, b: QMatrix, order) -> QMatrix:
    """Tensor-leg product on the composite index space.

    order 12: entry ((i,k),(j,l)) = a[i,j] b[k,l]   (sheet-1 factors first);
    order 21: entry ((i,k),(j,l)) = b[k,l] a[i,j]   (sheet-2 factors first).
    Rows are composite over (a-rows, b-rows), columns over (a-cols, b-cols),
    sheet-1-major.
    """
    if a.form != b.form:
        raise ValueError("matrices live on different quantum tori")
    order = int(order)
    if order not in (12, 21):
        raise ValueError("order must be 12 or 21")
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    z = QElem.zero(a.form)
    data = [[z] * cols for _ in range(rows)]
    for i in range(a.rows):
        for j in range(a.cols):
            x = a.data[i][j]
            if x.is_zero():
                continue
            for k in range(b.rows):
                for l in range(b.cols):
                    y = b.data[k][l]
                    if y.is_zero():
                        continue
                    data[i * b.rows + k][j * b.cols + l] = (
                        qmul(x, y) if order == 12 else qmul(y, x)
                    )
    return QMatrix(rows, cols, a.form, data)


def lift1(a: QMatrix, d2: int) -> QMatrix:
    """a acting on sheet 1: entry ((i,k),(j,l)) = a[i,j] delta_kl."""
    rows = a.rows * d2
    cols = a.cols * d2
    z = QElem.zero(a.form)
    data = [[z] * cols for _ in range(rows)]
    for i in range(a.rows):
        for j in range(a.cols):
            x = a.data[i][j]
            if x.is_zero():
                continue
            for k in range(d2):
                data[i * d2 + k][j * d2 + k] = x
    return QMatrix(rows, cols, a.form, data)


def lift2(b: QMatrix, d1: int) -> QMatrix:
    """b acting on sheet 2: entry ((i,k),(j,l)) = delta_ij b[k,l]."""
    rows = d1 * b.rows
    cols = d1 * b.cols
    z = QElem.zero(b.form)
    data = [[z] * cols for _ in range(rows)]
    for i in range(d1):
        for k in range(b.rows):
            for l in range(b.cols):
                x = b.data[k][l]
                if x.is_zero():
                    continue
                data[i * b.rows + k][i * b.cols + l] = x
    return QMatrix(rows, cols, b.form, data)


def classical_act(c: CMatrix, m: QMatrix, side: str) -> QMatrix:
    """Multiply by a matrix of commuting scalars on the given side."""
    if side == "left":
        if c.cols != m.rows:
            raise ValueError("shape mismatch")
        z = QElem.zero(m.form)
        data = [[z] * m.cols for _ in range(c.rows)]
        for (r, k), val in c.entries.items():
            mrow = m.data[k]
            row = data[r]
            for j in range(m.cols):
                x = mrow[j]
                if not x.is_zero():
                    row[j] = row[j] + x.scale(val)
        return QMatrix(c.rows, m.cols, m.form, data)
    if side == "right":
        if m.cols != c.rows:
            raise ValueError("shape mismatch")
        z = QElem.zero(m.form)
        data = [[z] * c.cols for _ in range(m.rows)]
        for (k, cc), val in c.entries.items():
            for i in range(m.rows):
                x = m.data[i][k]
                if not x.is_zero():
                    data[i][cc] = data[i][cc] + x.scale(val)
        return QMatrix(m.rows, c.cols, m.form, data)
    raise ValueError("side must be 'left' or 'right'")


def invert_restricted(m: QMatrix) -> QMatrix:
    """Two-sided inverse for the supported class of matrices.

    Supported: a 1x1 unit monomial; any matrix that splits (recursively) as a
    2x2 block-triangular matrix with invertible diagonal blocks.  Triangular
    matrices with unit-monomial diagonal are the basic closed case.  The
    result is verified two-sided before it is returned.
    """
    inv = _invert_inner(m)
    ident = QMatrix.identity(m.rows, m.form)
    if matmul(m, inv) != ident or matmul(inv, m) != ident:
        raise NotInvertibleInSupportedClass(
            "inverse verification failed; matrix is outside the supported class"
        )
    return inv


def _invert_inner(m: QMatrix) -> QMatrix:
    if m.rows != m.cols:
        raise NotInvertibleInSupportedClass("matrix is not square")
    n = m.rows
    if n == 1:
        try:
            return QMatrix.from_rows(m.form, [[invert_monomial(m.entry(0, 0))]])
        except NotAUnit as exc:
            raise NotInvertibleInSupportedClass(str(exc)) from exc
    for s in range(1, n):
        upper_right_zero = all(
            m.entry(i, j).is_zero() for i in range(s) for j in range(s, n)
        )
        lower_left_zero = all(
            m.entry(i, j).is_zero() for i in range(s, n) for j in range(s)
        )
        if not (upper_right_zero or lower_left_zero):
            continue
        a = _invert_inner(m.submatrix(0, s, 0, s))
        d = _invert_inner(m.submatrix(s, n, s, n))
        if upper_right_zero:
            # [[A, 0], [B, D]]^-1 = [[A^-1, 0], [-D^-1 B A^-1, D^-1]]
            b = m.submatrix(s, n, 0, s)
            off = -matmul(matmul(d, b), a)
            return QMatrix.from_blocks(
                [[a, QMatrix.zero(s, n - s, m.form)], [off, d]]
            )
        # [[A, B], [0, D]]^-1 = [[A^-1, -A^-1 B D^-1], [0, D^-1]]
        b = m.submatrix(0, s, s, n)
        off = -matmul(matmul(a, b), d)
        return QMatrix.from_blocks([[a, off], [QMatrix.zero(n - s, s, m.form), d]])
    raise NotInvertibleInSupportedClass(
        "no zero block corner found at any split point"
    )
