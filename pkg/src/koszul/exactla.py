"""Exact sparse linear algebra over Q and prime fields.

Scalars are `fractions.Fraction` over the rationals and plain ints in
[0, p) over F_p.  Everything downstream (complex slices, bar words, duals,
resolutions) reduces to the Gaussian elimination in this module, so ranks
and kernels here are exact by construction; there is no floating point
anywhere in the package.
"""

from fractions import Fraction


class EngineError(Exception):
    """Base class for errors raised by the engine."""


class RefusalError(EngineError):
    """A precondition fails in a documented way (bad window, divergent
    weight bound, non-Artin input).  The computation is refused, not wrong."""


class StructuralError(EngineError):
    """Input data violates a structural invariant (d^2 != 0, index out of
    range, inconsistent shapes)."""


class InvalidComplexError(StructuralError):
    """d^2 != 0 somewhere; carries the offending degree."""

    def __init__(self, degree, message=None):
        self.degree = degree
        super().__init__(message or f"d^2 != 0 starting at degree {degree}")


# ---------------------------------------------------------------------------
# fields


class Field:
    """The rationals (p=None) or the prime field F_p.

    Elements are Fractions over Q and ints in [0, p) over F_p; the methods
    below are total on valid elements and never lose exactness.
    """

    __slots__ = ("p",)

    def __init__(self, p=None):
        if p is not None:
            if not isinstance(p, int) or p < 2:
                raise RefusalError(f"field characteristic must be a prime, got {p!r}")
            if not _is_prime(p):
                raise RefusalError(f"{p} is not prime")
        self.p = p

    @property
    def characteristic(self):
        return 0 if self.p is None else self.p

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def of_int(self, n):
        return Fraction(n) if self.p is None else n % self.p

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(a)
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a == 0 if self.p is None else a % self.p == 0

    def parse(self, text):
        """Parse '7', '-3' or '3/2' (the latter only over Q)."""
        text = text.strip()
        if "/" in text:
            if self.p is not None:
                num, _, den = text.partition("/")
                return self.div(self.of_int(int(num)), self.of_int(int(den)))
            return Fraction(text)
        return self.of_int(int(text))

    def format(self, a):
        if self.p is None:
            f = Fraction(a)
            return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
        return str(a % self.p)

    @property
    def name(self):
        return "Q" if self.p is None else f"Fp:{self.p}"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"Field({self.p})" if self.p is not None else "Field(Q)"


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


QQ = Field()


# ---------------------------------------------------------------------------
# sparse vectors (dict index -> nonzero scalar)


def vec_add_into(field, acc, vec, coeff):
    """acc += coeff * vec, in place, dropping zeros."""
    if field.is_zero(coeff):
        return acc
    for i, v in vec.items():
        s = field.add(acc.get(i, field.zero), field.mul(coeff, v))
        if field.is_zero(s):
            acc.pop(i, None)
        else:
            acc[i] = s
    return acc


def vec_scale(field, coeff, vec):
    if field.is_zero(coeff):
        return {}
    return {i: field.mul(coeff, v) for i, v in vec.items()}


class SpanTracker:
    """Incremental row echelon over sparse dict-vectors.

    Pivot rows are normalized (lead coefficient 1) and keyed by their lead
    index.  With track=True every inserted vector gets a tag and `reduce`
    reports the expression of the reducible part in terms of the tagged
    inserts, which is how membership certificates, kernels and structure
    constants are extracted everywhere downstream.
    """

    def __init__(self, field, track=False):
        self.field = field
        self.track = track
        self.pivots = {}  # lead index -> (vector, combo or None)

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, vec):
        """Return (residual, combo): vec = sum(combo[t] * insert_t) + residual."""
        field = self.field
        v = dict(vec)
        combo = {} if self.track else None
        while v:
            lead = min(v)
            hit = self.pivots.get(lead)
            if hit is None:
                break
            pvec, pcombo = hit
            c = v[lead]
            vec_add_into(field, v, pvec, field.neg(c))
            if self.track:
                vec_add_into(field, combo, pcombo, c)
        return v, combo

    def insert(self, vec, tag=None):
        """Insert vec if independent of the current span; return True if it
        extended the span."""
        field = self.field
        v, combo = self.reduce(vec)
        if not v:
            return False
        lead = min(v)
        lam = field.inv(v[lead])
        pvec = vec_scale(field, lam, v)
        pcombo = None
        if self.track:
            pcombo = vec_scale(field, field.neg(lam), combo)
            pcombo[tag] = field.add(pcombo.get(tag, field.zero), lam)
            if field.is_zero(pcombo[tag]):
                del pcombo[tag]
        self.pivots[lead] = (pvec, pcombo)
        return True

    def contains(self, vec):
        residual, _ = self.reduce(vec)
        return not residual


# ---------------------------------------------------------------------------
# sparse matrices


class SparseMatrix:
    """Immutable sparse matrix; entries maps (row, col) to a nonzero scalar.

    Duplicate coordinates are rejected and zero values are dropped, so the
    stored support is canonical for a given matrix.
    """

    __slots__ = ("field", "rows", "cols", "entries", "_by_col")

    def __init__(self, field, rows, cols, entries=()):
        if rows < 0 or cols < 0:
            raise StructuralError(f"negative shape ({rows}, {cols})")
        self.field = field
        self.rows = rows
        self.cols = cols
        stored = {}
        items = entries.items() if isinstance(entries, dict) else entries
        for key, value in items:
            i, j = key
            if not (0 <= i < rows and 0 <= j < cols):
                raise StructuralError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            if key in stored:
                raise StructuralError(f"duplicate entry at ({i}, {j})")
            if not field.is_zero(value):
                stored[key] = value
        self.entries = stored
        self._by_col = None

    def is_zero(self):
        return not self.entries

    def transpose(self):
        return SparseMatrix(
            self.field, self.cols, self.rows,
            (((j, i), v) for (i, j), v in self.entries.items()))

    def column(self, j):
        if not (0 <= j < self.cols):
            raise StructuralError(f"column {j} outside a {self.rows}x{self.cols} matrix")
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def columns(self):
        """All columns at once, as a list of dict-vectors (cached; callers
        must not mutate the returned dicts)."""
        if self._by_col is None:
            cols = [dict() for _ in range(self.cols)]
            for (i, j), v in self.entries.items():
                cols[j][i] = v
            self._by_col = cols
        return self._by_col

    def row_vectors(self):
        rows = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def apply(self, vec):
        """Matrix times a sparse column vector (dict col -> scalar)."""
        field = self.field
        out = {}
        if not vec:
            return out
        cols = self.columns()
        for j, c in vec.items():
            if not (0 <= j < self.cols):
                raise StructuralError(f"vector index {j} outside {self.cols} columns")
            vec_add_into(field, out, cols[j], c)
        return out

    def compose(self, other):
        """self @ other (apply other first)."""
        if other.rows != self.cols:
            raise StructuralError(
                f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        out = {}
        field = self.field
        for j, col in enumerate(other.columns()):
            image = self.apply(col)
            for i, v in image.items():
                out[(i, j)] = v
        return SparseMatrix(field, self.rows, other.cols, out)

    def rank(self):
        tracker = SpanTracker(self.field)
        source = self.row_vectors() if self.rows <= self.cols else self.columns()
        for v in source:
            if v:
                tracker.insert(v)
        return tracker.rank

    def nullspace_basis(self):
        """Basis of the kernel, as dict-vectors over column indices.

        Column j is reduced against the pivot columns accepted so far; if it
        is dependent the tracked combo turns into the kernel vector
        e_j - sum(combo).  Basis size is cols - rank by construction.
        """
        field = self.field
        tracker = SpanTracker(field, track=True)
        kernel = []
        for j, col in enumerate(self.columns()):
            if not col:
                kernel.append({j: field.one})
                continue
            residual, combo = tracker.reduce(col)
            if residual:
                tracker.insert(col, tag=j)
            else:
                v = {j: field.one}
                vec_add_into(field, v, combo, field.neg(field.one))
                kernel.append(v)
        return kernel

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and other.field == self.field
                and other.rows == self.rows and other.cols == self.cols
                and other.entries == self.entries)

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, {len(self.entries)} entries)"


def matrix_from_columns(field, rows, columns):
    """Assemble a matrix whose j-th column is columns[j] (dict row -> scalar)."""
    entries = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            entries[(i, j)] = v
    return SparseMatrix(field, rows, len(columns), entries)


# ---------------------------------------------------------------------------
# degree windows and complex slices


class Window:
    """A closed interval [lo, hi] of cohomological degrees."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        if lo > hi:
            raise RefusalError(f"empty degree window [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    def __contains__(self, d):
        return self.lo <= d <= self.hi

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def interior(self):
        return range(self.lo + 1, self.hi)

    def padded(self, k=1):
        return Window(self.lo - k, self.hi + k)

    def mirrored(self):
        return Window(-self.hi, -self.lo)

    def intersect(self, other):
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise RefusalError(f"windows [{self.lo},{self.hi}] and [{other.lo},{other.hi}] do not meet")
        return Window(lo, hi)

    def __eq__(self, other):
        return isinstance(other, Window) and (other.lo, other.hi) == (self.lo, self.hi)

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Window({self.lo}, {self.hi})"


class CochainComplexSlice:
    """A cochain complex materialized on a degree window.

    basis maps degree -> tuple of labels; diff maps degree d to the matrix of
    d_d : C^d -> C^{d+1} (rows indexed by the degree d+1 basis, columns by the
    degree d basis).  Degrees absent from basis are zero.  The differential
    raises degree by exactly one.
    """

    def __init__(self, field, window, basis, diff):
        self.field = field
        self.window = window
        self.basis = {d: tuple(labels) for d, labels in basis.items() if labels}
        for d in self.basis:
            if d not in window:
                raise StructuralError(f"basis at degree {d} outside window {window!r}")
        self.diff = {}
        for d, m in diff.items():
            if m is None:
                continue
            nd, nd1 = self.dim(d), self.dim(d + 1)
            if (m.rows, m.cols) != (nd1, nd):
                raise StructuralError(
                    f"differential at degree {d} has shape {m.rows}x{m.cols}, "
                    f"expected {nd1}x{nd}")
            if not m.is_zero():
                self.diff[d] = m

    def dim(self, d):
        return len(self.basis.get(d, ()))

    def dims(self):
        return {d: len(b) for d, b in sorted(self.basis.items())}

    def d_at(self, d):
        m = self.diff.get(d)
        if m is None:
            return SparseMatrix(self.field, self.dim(d + 1), self.dim(d))
        return m

    def validate_complex(self):
        """Check d^2 = 0 for every degree d with d, d+1, d+2 in the window."""
        for d in range(self.window.lo, self.window.hi - 1):
            if self.d_at(d + 1).compose(self.d_at(d)).is_zero():
                continue
            raise InvalidComplexError(d)

    def cohomology(self, representatives=True):
        """Cohomology on the interior of the window.

        Reliable degrees are those d with d-1, d, d+1 all in the window; the
        two boundary degrees are only flagged.  Validates d^2 = 0 first.
        """
        self.validate_complex()
        field = self.field
        dims, reps = {}, {}
        for d in self.window.interior():
            boundary_tracker = SpanTracker(field)
            for col in self.d_at(d - 1).columns():
                if col:
                    boundary_tracker.insert(col)
            cycles = self.d_at(d).nullspace_basis()
            dims[d] = len(cycles) - boundary_tracker.rank
            if representatives:
                chosen = []
                for z in cycles:
                    if boundary_tracker.insert(z):
                        chosen.append(z)
                if len(chosen) != dims[d]:
                    raise InvalidComplexError(d, "boundaries escape the cycle space")
                reps[d] = tuple(chosen)
        unreliable = frozenset({self.window.lo, self.window.hi})
        return CohomologyReport(
            field=field, window=self.window, dims=dims, unreliable=unreliable,
            representatives=reps if representatives else None)

    def euler_characteristic(self):
        """Alternating sum of basis dimensions over the whole window."""
        total = 0
        for d, labels in self.basis.items():
            total += len(labels) if d % 2 == 0 else -len(labels)
        return total


class CohomologyReport:
    """Cohomology dimensions on the reliable degrees of a window.

    dims covers exactly the interior degrees; the window's two boundary
    degrees appear in `unreliable` and get no number at all.  When a ring
    structure has been computed, `ring` maps ((d1, i1), (d2, i2)) to the
    lincomb {(d3, i3): scalar} of the product of the chosen representatives,
    and `ring_skipped` lists representative pairs whose product degree was
    not reliable.
    """

    def __init__(self, field, window, dims, unreliable, representatives=None,
                 ring=None, ring_skipped=()):
        self.field = field
        self.window = window
        self.dims = dims
        self.unreliable = unreliable
        self.representatives = representatives
        self.ring = ring
        self.ring_skipped = tuple(ring_skipped)

    def dim(self, d):
        if d in self.unreliable or d not in self.dims:
            if d in self.window and d in self.unreliable:
                raise RefusalError(f"degree {d} is at the window boundary and unreliable")
            return 0
        return self.dims[d]

    def nonzero_dims(self):
        return {d: n for d, n in sorted(self.dims.items()) if n}

    def __repr__(self):
        return f"CohomologyReport({self.nonzero_dims()}, unreliable={sorted(self.unreliable)})"
