"""Exact linear algebra over Q and over prime fields.

Everything downstream (cohomology ranks, spectral sequence pages) reduces to
exact rank computations, so no floating point is allowed anywhere.  Scalars
are `fractions.Fraction` over Q, plain ints in [0, p) over F_p.  Matrices are
sparse, keyed by (row, col); vectors are sparse dicts col -> scalar.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class ExactLinError(ValueError):
    pass


class ContainmentError(ExactLinError):
    """Raised when a claimed subspace inclusion fails."""


class RationalField:
    name = "Q"

    def of(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise ExactLinError(f"cannot coerce {value!r} into Q")

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def to_str(self, a):
        return str(a)

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


class PrimeField:
    def __init__(self, p):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ExactLinError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.zero = 0
        self.one = 1 % p

    def of(self, value):
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise ExactLinError(
                    f"denominator of {value} vanishes mod {self.p}"
                )
            return value.numerator * pow(den, -1, self.p) % self.p
        raise ExactLinError(f"cannot coerce {value!r} into F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"0 is not invertible in F_{self.p}")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def to_str(self, a):
        return str(a % self.p)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


QQ = RationalField()


def field_by_name(name):
    """Resolve "Q" or "F<p>" to a field object."""
    if name == "Q":
        return QQ
    if name.startswith("F") and name[1:].isdigit():
        return PrimeField(int(name[1:]))
    raise ExactLinError(f"unknown field {name!r}")


class Matrix:
    """Sparse matrix acting on column vectors: self maps k^cols -> k^rows.

    No zero entries are stored; indices are bounds-checked on insertion.
    """

    __slots__ = ("rows", "cols", "entries", "field")

    def __init__(self, rows, cols, entries=None, field=QQ):
        if rows < 0 or cols < 0:
            raise ExactLinError("negative matrix dimensions")
        self.rows = rows
        self.cols = cols
        self.field = field
        self.entries = {}
        if entries:
            for (r, c), v in entries.items():
                self[r, c] = v

    @classmethod
    def zero(cls, rows, cols, field=QQ):
        return cls(rows, cols, None, field)

    @classmethod
    def identity(cls, n, field=QQ):
        m = cls(n, n, None, field)
        for i in range(n):
            m.entries[(i, i)] = field.one
        return m

    @classmethod
    def from_rows(cls, rows_data, field=QQ):
        rows = len(rows_data)
        cols = len(rows_data[0]) if rows else 0
        m = cls(rows, cols, None, field)
        for r, row in enumerate(rows_data):
            if len(row) != cols:
                raise ExactLinError("ragged rows")
            for c, v in enumerate(row):
                m[r, c] = field.of(v)
        return m

    @classmethod
    def from_columns(cls, vectors, ambient_dim, field=QQ):
        """Assemble column vectors (sparse dicts) into a matrix."""
        m = cls(ambient_dim, len(vectors), None, field)
        for c, vec in enumerate(vectors):
            for r, v in vec.items():
                m[r, c] = v
        return m

    def __getitem__(self, key):
        return self.entries.get(key, self.field.zero)

    def __setitem__(self, key, value):
        r, c = key
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise ExactLinError(f"index {key} out of bounds")
        if self.field.is_zero(value):
            self.entries.pop(key, None)
        else:
            self.entries[key] = value

    def add_to(self, r, c, value):
        self[r, c] = self.field.add(self[r, c], value)

    def is_zero(self):
        return not self.entries

    def transpose(self):
        t = Matrix(self.cols, self.rows, None, self.field)
        for (r, c), v in self.entries.items():
            t.entries[(c, r)] = v
        return t

    def compose(self, other):
        """Matrix product self @ other (apply other first)."""
        if self.cols != other.rows:
            raise ExactLinError("shape mismatch in compose")
        f = self.field
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out = Matrix(self.rows, other.cols, None, f)
        for (r, k), a in self.entries.items():
            for c, b in by_row.get(k, ()):
                out.add_to(r, c, f.mul(a, b))
        return out

    def apply(self, vec):
        """Apply to a sparse column vector, returning a sparse vector."""
        f = self.field
        out = {}
        by_col = {}
        for (r, c), v in self.entries.items():
            by_col.setdefault(c, []).append((r, v))
        for c, x in vec.items():
            for r, a in by_col.get(c, ()):
                s = f.add(out.get(r, f.zero), f.mul(a, x))
                if f.is_zero(s):
                    out.pop(r, None)
                else:
                    out[r] = s
        return out

    def row_dicts(self):
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.field == other.field
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {len(self.entries)} nonzero)"


@dataclass
class RrefResult:
    matrix: "Matrix"
    rank: int
    pivot_cols: list


def _rref_rows(rows, ncols, field):
    """Reduced row echelon form on a list of sparse row dicts, in place-ish.

    Returns (reduced rows with zero rows dropped, pivot column list).
    """
    f = field
    reduced = []
    pivots = []
    work = [dict(r) for r in rows if r]
    # process columns left to right, selecting pivot rows greedily
    for row in work:
        # reduce against existing pivots
        for prow, pcol in zip(reduced, pivots):
            coef = row.get(pcol)
            if coef is None:
                continue
            for c, v in prow.items():
                s = f.sub(row.get(c, f.zero), f.mul(coef, v))
                if f.is_zero(s):
                    row.pop(c, None)
                else:
                    row[c] = s
        if not row:
            continue
        pcol = min(row)
        inv = f.inv(row[pcol])
        row = {c: f.mul(inv, v) for c, v in row.items()}
        # back-substitute into earlier pivot rows
        for i, prow in enumerate(reduced):
            coef = prow.get(pcol)
            if coef is None:
                continue
            for c, v in row.items():
                s = f.sub(prow.get(c, f.zero), f.mul(coef, v))
                if f.is_zero(s):
                    prow.pop(c, None)
                else:
                    prow[c] = s
        reduced.append(row)
        pivots.append(pcol)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [reduced[i] for i in order], [pivots[i] for i in order]


def rref(m):
    """Reduced row echelon form of a Matrix."""
    rows, pivots = _rref_rows(m.row_dicts(), m.cols, m.field)
    out = Matrix(m.rows, m.cols, None, m.field)
    for r, row in enumerate(rows):
        for c, v in row.items():
            out.entries[(r, c)] = v
    return RrefResult(out, len(pivots), pivots)


def rank(m):
    return rref(m).rank


def kernel_basis(m):
    """Basis of {v : m v = 0}, as a Subspace of k^cols."""
    f = m.field
    res = rref(m)
    pivset = set(res.pivot_cols)
    rows = res.matrix.row_dicts()[: res.rank]
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        vec = {free: f.one}
        for row, pcol in zip(rows, res.pivot_cols):
            coef = row.get(free)
            if coef is not None:
                vec[pcol] = f.neg(coef)
        basis.append(vec)
    return Subspace(m.cols, basis, f)


def image_basis(m):
    """Column space of m, as a Subspace of k^rows."""
    cols = {}
    for (r, c), v in m.entries.items():
        cols.setdefault(c, {})[r] = v
    return Subspace.span(m.rows, list(cols.values()), m.field)


class Subspace:
    """A subspace of k^ambient_dim, stored by a reduced (RREF) basis.

    The canonical basis makes equality and containment tests cheap, and the
    length of the basis is the dimension by construction.
    """

    __slots__ = ("ambient_dim", "basis", "pivots", "field")

    def __init__(self, ambient_dim, basis, field=QQ):
        self.ambient_dim = ambient_dim
        self.field = field
        rows, pivots = _rref_rows(basis, ambient_dim, field)
        for row in rows:
            if row and max(row) >= ambient_dim:
                raise ExactLinError("vector exceeds ambient dimension")
        self.basis = rows
        self.pivots = pivots

    @classmethod
    def span(cls, ambient_dim, vectors, field=QQ):
        return cls(ambient_dim, vectors, field)

    @classmethod
    def full(cls, ambient_dim, field=QQ):
        return cls(ambient_dim, [{i: field.one} for i in range(ambient_dim)], field)

    @property
    def dim(self):
        return len(self.basis)

    def reduce(self, vec):
        """Residue of vec after reduction modulo the subspace basis."""
        f = self.field
        vec = dict(vec)
        for row, pcol in zip(self.basis, self.pivots):
            coef = vec.get(pcol)
            if coef is None:
                continue
            for c, v in row.items():
                s = f.sub(vec.get(c, f.zero), f.mul(coef, v))
                if f.is_zero(s):
                    vec.pop(c, None)
                else:
                    vec[c] = s
        return vec

    def contains(self, vec):
        return not self.reduce(vec)

    def contains_subspace(self, other):
        return all(self.contains(v) for v in other.basis)

    def sum(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ExactLinError("ambient dimension mismatch")
        return Subspace(self.ambient_dim, self.basis + other.basis, self.field)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __repr__(self):
        return f"Subspace(dim {self.dim} of k^{self.ambient_dim})"


def subquotient_dim(z, b):
    """dim Z/B for subspaces B <= Z of the same ambient space.

    Raises ContainmentError when B is not contained in Z.
    """
    if z.ambient_dim != b.ambient_dim:
        raise ContainmentError("ambient dimension mismatch")
    if not z.contains_subspace(b):
        raise ContainmentError("B is not contained in Z")
    return z.dim - b.dim


def preimage_subspace(m, target):
    """{v : m v in target}, as a Subspace of the domain k^cols.

    Computed as the kernel of q . m where q projects onto a complement of
    the target, i.e. reduction of each column modulo the target basis.
    """
    if target.ambient_dim != m.rows:
        raise ExactLinError("target lives in the wrong space")
    f = m.field
    cols = {}
    for (r, c), v in m.entries.items():
        cols.setdefault(c, {})[r] = v
    residues = {c: target.reduce(vec) for c, vec in cols.items()}
    red = Matrix(m.rows, m.cols, None, f)
    for c, vec in residues.items():
        for r, v in vec.items():
            red.entries[(r, c)] = v
    return kernel_basis(red)


def apply_to_subspace(m, sub):
    """Image m(sub) as a Subspace of the codomain."""
    if sub.ambient_dim != m.cols:
        raise ExactLinError("subspace lives in the wrong space")
    return Subspace.span(m.rows, [m.apply(v) for v in sub.basis], m.field)
