"""Augmented dg algebras, presented degreewise, and their window slices.

A DgAlgebraSpec describes a possibly infinite-dimensional algebra through a
per-degree basis enumerator together with differential, multiplication and
augmentation on basis labels.  Slicing a spec over a degree window produces a
FiniteDga: honest structure constants inside the window, with anything
landing outside truncated to zero and the affected degrees recorded.

Conventions used throughout the package: the differential raises
cohomological degree by one, a shift satisfies (M[n])^i = M^{i+n} (so k[n]
sits in degree -n), and the unit is itself a basis label whose augmentation
value is 1 while all other basis labels augment to 0.
"""

from .exactla import (
    Window, SparseMatrix, CochainComplexSlice, SpanTracker,
    RefusalError, StructuralError, matrix_from_columns, vec_add_into,
    vec_scale, CohomologyReport,
)

# Linear combinations of basis labels are plain dicts {label: nonzero scalar};
# the vec_* helpers from exactla work on them unchanged.


def lc_equal(field, a, b):
    keys = set(a) | set(b)
    zero = field.zero
    for k in keys:
        if not field.is_zero(field.sub(a.get(k, zero), b.get(k, zero))):
            return False
    return True





class DgAlgebraSpec:
    """An augmented dg algebra given by degreewise basis enumeration.

    basis(d) returns a finite ordered tuple of labels for degree d; degree,
    diff, mult and aug act on labels, with diff/mult returning lincombs.
    min_degree/max_degree bound the degrees where the basis can be nonempty
    (None meaning unbounded on that side); the bar construction relies on
    them to settle convergence without scanning all of Z.  total_dimension
    is the global dimension when finite, else None.
    """

    def __init__(self, field, name, basis, degree, diff, mult, unit, aug,
                 min_degree=None, max_degree=None, total_dimension=None):
        self.field = field
        self.name = name
        self._basis = basis
        self._degree = degree
        self._diff = diff
        self._mult = mult
        self.unit = unit
        self._aug = aug
        self.min_degree = min_degree
        self.max_degree = max_degree
        self.total_dimension = total_dimension

    def basis(self, d):
        if self.min_degree is not None and d < self.min_degree:
            return ()
        if self.max_degree is not None and d > self.max_degree:
            return ()
        return tuple(self._basis(d))

    def degree(self, label):
        return self._degree(label)

    def diff(self, label):
        return self._diff(label)

    def mult(self, a, b):
        return self._mult(a, b)

    def aug(self, label):
        return self._aug(label)

    def __repr__(self):
        return f"DgAlgebraSpec({self.name})"


class ValidationReport:
    """Outcome of the axiom checks, one verdict per named axiom plus the
    first witnessing basis tuple for each failure."""

    def __init__(self, subject, checks, witnesses):
        self.subject = subject
        self.checks = dict(checks)
        self.witnesses = dict(witnesses)
        self.ok = all(self.checks.values())

    def __bool__(self):
        return self.ok

    def raise_if_failed(self):
        if not self.ok:
            name = next(n for n, v in self.checks.items() if not v)
            raise StructuralError(
                f"{self.subject}: axiom '{name}' fails at {self.witnesses.get(name)!r}")

    def __repr__(self):
        bad = {n: self.witnesses.get(n) for n, v in self.checks.items() if not v}
        return f"ValidationReport(ok={self.ok}, failures={bad})"


class FiniteDga:
    """An augmented dg algebra materialized on a degree window.

    basis maps degree to an ordered tuple of labels; diff is stored as a full
    table label -> lincomb with terms outside the window dropped (source
    degrees affected by that are in truncated_diff_sources).  Products are
    computed lazily through mult_fn and memoized; a product whose degree
    falls outside the window is zero here, and the set of such out-of-window
    landing degrees is precomputed in truncated_products.  complete=True
    asserts the window contains the entire algebra, which makes every stored
    number honest rather than merely window-accurate.
    """

    def __init__(self, field, window, basis, diff, mult_fn, unit, aug,
                 complete, name="", spec=None, truncated_products=frozenset(),
                 truncated_diff_sources=frozenset()):
        self.field = field
        self.window = window
        self.basis = {d: tuple(ls) for d, ls in basis.items() if ls}
        self.index = {}
        for d, labels in self.basis.items():
            if d not in window:
                raise StructuralError(f"basis at degree {d} escapes window {window!r}")
            for i, l in enumerate(labels):
                if l in self.index:
                    raise StructuralError(f"duplicate basis label {l!r}")
                self.index[l] = (d, i)
        self.unit = unit
        self.name = name
        self.spec = spec
        self.complete = complete
        self._diff = {}
        for l, lc in diff.items():
            if l not in self.index:
                raise StructuralError(f"differential given for unknown label {l!r}")
            d = self.index[l][0]
            for m, c in lc.items():
                if m not in self.index or self.index[m][0] != d + 1:
                    raise StructuralError(
                        f"d({l!r}) has a term {m!r} not in the degree {d + 1} basis")
            if lc:
                self._diff[l] = dict(lc)
        self.aug = {}
        for l, c in aug.items():
            if field.is_zero(c):
                continue
            if l not in self.index or self.index[l][0] != 0:
                raise StructuralError(f"augmentation is nonzero on {l!r} outside degree 0")
            self.aug[l] = c
        self._mult_fn = mult_fn
        self._mult_memo = {}
        self.truncated_products = frozenset(truncated_products)
        self.truncated_diff_sources = frozenset(truncated_diff_sources)
        self._complex = None

    # -- basic queries ----------------------------------------------------

    def degree(self, label):
        try:
            return self.index[label][0]
        except KeyError:
            raise StructuralError(f"unknown basis label {label!r}") from None

    def labels(self, d):
        return self.basis.get(d, ())

    def dim(self, d):
        return len(self.basis.get(d, ()))

    def dims(self):
        return {d: len(ls) for d, ls in sorted(self.basis.items())}

    def total_dimension(self):
        return sum(len(ls) for ls in self.basis.values())

    def aug_of(self, label):
        return self.aug.get(label, self.field.zero)

    # -- structure maps ---------------------------------------------------

    def diff(self, label):
        self.degree(label)
        return self._diff.get(label, {})

    def diff_lc(self, lc):
        out = {}
        for l, c in lc.items():
            vec_add_into(self.field, out, self.diff(l), c)
        return out

    def mult(self, a, b):
        key = (a, b)
        hit = self._mult_memo.get(key)
        if hit is not None:
            return hit
        d3 = self.degree(a) + self.degree(b)
        if d3 not in self.window:
            lc = {}
        else:
            lc = {m: c for m, c in self._mult_fn(a, b).items() if not self.field.is_zero(c)}
            for m in lc:
                if m not in self.index or self.index[m][0] != d3:
                    raise StructuralError(
                        f"product {a!r}*{b!r} has a term {m!r} not in the degree {d3} basis")
        self._mult_memo[key] = lc
        return lc

    def mult_lc(self, lca, lcb):
        field = self.field
        out = {}
        for a, ca in lca.items():
            for b, cb in lcb.items():
                vec_add_into(field, out, self.mult(a, b), field.mul(ca, cb))
        return out

    def vector(self, lc, d):
        """Index-vector of a lincomb concentrated in degree d."""
        out = {}
        for l, c in lc.items():
            dd, i = self.index[l]
            if dd != d:
                raise StructuralError(f"label {l!r} has degree {dd}, expected {d}")
            out[i] = c
        return out

    def lincomb(self, vec, d):
        labels = self.labels(d)
        return {labels[i]: c for i, c in vec.items()}

    # -- derived structures -----------------------------------------------

    def complex(self):
        if self._complex is None:
            diffs = {}
            for d in self.window.degrees():
                labels = self.labels(d)
                if not labels or d + 1 not in self.window:
                    continue
                cols = [self.vector(self.diff(l), d + 1) if self.diff(l) else {}
                        for l in labels]
                diffs[d] = matrix_from_columns(self.field, self.dim(d + 1), cols)
            self._complex = CochainComplexSlice(self.field, self.window, self.basis, diffs)
        return self._complex

    def cohomology(self, representatives=True):
        return self.complex().cohomology(representatives=representatives)

    def as_spec(self, name=None):
        """Re-present this slice as a spec that is truthful inside the window
        (and silent outside; callers must ensure their window arithmetic never
        needs degrees this slice cannot see)."""
        degrees = sorted(self.basis)
        lo = degrees[0] if degrees else 0
        hi = degrees[-1] if degrees else 0
        return DgAlgebraSpec(
            self.field, name or f"{self.name}|slice",
            basis=lambda d: self.basis.get(d, ()),
            degree=lambda l: self.index[l][0],
            diff=self.diff,
            mult=self.mult,
            unit=self.unit,
            aug=self.aug_of,
            min_degree=lo, max_degree=hi,
            total_dimension=self.total_dimension() if self.complete else None)

    # -- axioms -------------------------------------------------------------

    def validate(self):
        """Check d^2, Leibniz, associativity, unit and augmentation axioms.

        Each check is restricted to basis tuples for which every intermediate
        degree lies in the window, so truncation can never produce a spurious
        failure; a genuine sign error always leaves a witness on some small
        window.
        """
        field, w = self.field, self.window
        checks, witnesses = {}, {}

        def record(name, witness):
            if checks.get(name, True):
                checks[name] = False
                witnesses[name] = witness

        checks["d_squared"] = True
        for d, labels in sorted(self.basis.items()):
            if d + 1 not in w or d + 2 not in w:
                continue
            for l in labels:
                if self.diff_lc(self.diff(l)):
                    record("d_squared", (l,))

        checks["leibniz"] = True
        all_labels = [(d, l) for d, ls in sorted(self.basis.items()) for l in ls]
        for d1, a in all_labels:
            if d1 + 1 not in w:
                continue
            for d2, b in all_labels:
                if d2 + 1 not in w or d1 + d2 not in w or d1 + d2 + 1 not in w:
                    continue
                lhs = self.diff_lc(self.mult(a, b))
                rhs = self.mult_lc(self.diff(a), {b: field.one})
                sign = field.one if d1 % 2 == 0 else field.neg(field.one)
                vec_add_into(field, rhs, self.mult_lc({a: sign}, self.diff(b)), field.one)
                if not lc_equal(field, lhs, rhs):
                    record("leibniz", (a, b))

        checks["associativity"] = True
        for d1, a in all_labels:
            for d2, b in all_labels:
                if d1 + d2 not in w:
                    continue
                for d3, c in all_labels:
                    if d2 + d3 not in w or d1 + d2 + d3 not in w:
                        continue
                    left = self.mult_lc(self.mult(a, b), {c: field.one})
                    right = self.mult_lc({a: field.one}, self.mult(b, c))
                    if not lc_equal(field, left, right):
                        record("associativity", (a, b, c))

        checks["unit"] = True
        if 0 in w:
            if self.unit not in self.index or self.index[self.unit][0] != 0:
                record("unit", (self.unit,))
            else:
                for d, a in all_labels:
                    if (not lc_equal(field, self.mult(self.unit, a), {a: field.one})
                            or not lc_equal(field, self.mult(a, self.unit), {a: field.one})):
                        record("unit", (a,))

        checks["augmentation"] = True
        if 0 in w and self.unit in self.index:
            if field.is_zero(field.sub(self.aug_of(self.unit), field.one)):
                pass
            else:
                record("augmentation", (self.unit,))
            zero_labels = self.labels(0)
            for a in zero_labels:
                for b in zero_labels:
                    got = field.zero
                    for m, c in self.mult(a, b).items():
                        got = field.add(got, field.mul(c, self.aug_of(m)))
                    want = field.mul(self.aug_of(a), self.aug_of(b))
                    if not field.is_zero(field.sub(got, want)):
                        record("augmentation", (a, b))
            for l in self.labels(-1):
                got = field.zero
                for m, c in self.diff(l).items():
                    got = field.add(got, field.mul(c, self.aug_of(m)))
                if not field.is_zero(got):
                    record("augmentation", (l,))

        return ValidationReport(self.name or "dg algebra", checks, witnesses)

    def __repr__(self):
        return f"FiniteDga({self.name}, window={self.window!r}, dims={self.dims()})"


def algebra_slice(spec, window):
    """Materialize a spec over a window.

    The slice is marked complete when the spec's degree bounds certify that
    the window holds the entire basis.
    """
    basis = {}
    for d in window.degrees():
        labels = spec.basis(d)
        for l in labels:
            if spec.degree(l) != d:
                raise StructuralError(
                    f"{spec.name}: basis({d}) lists {l!r} of degree {spec.degree(l)}")
        if labels:
            basis[d] = labels
    index = {l: d for d, ls in basis.items() for l in ls}

    diff = {}
    truncated_diff = set()
    for d, labels in basis.items():
        for l in labels:
            full = spec.diff(l)
            if not full:
                continue
            if d + 1 in window:
                diff[l] = full
            else:
                truncated_diff.add(d)

    truncated_products = set()
    present = sorted(basis)
    for d1 in present:
        for d2 in present:
            if d1 + d2 not in window:
                truncated_products.add(d1 + d2)

    complete = (spec.min_degree is not None and spec.max_degree is not None
                and window.lo <= spec.min_degree and spec.max_degree <= window.hi)

    return FiniteDga(
        spec.field, window, basis, diff, spec.mult, spec.unit,
        {l: spec.aug(l) for d, ls in basis.items() if d == 0 for l in ls},
        complete, name=f"{spec.name}[{window.lo},{window.hi}]", spec=spec,
        truncated_products=truncated_products,
        truncated_diff_sources=truncated_diff)


def finite_dga_from_tables(field, window, basis, diff, mult_table, unit, aug,
                           complete, name=""):
    """Build a FiniteDga from explicit finite tables (mult_table keyed by
    label pairs; missing in-window pairs mean a zero product)."""
    def mult_fn(a, b):
        return mult_table.get((a, b), {})
    present = sorted(d for d, ls in basis.items() if ls)
    truncated = set()
    for d1 in present:
        for d2 in present:
            if d1 + d2 not in window:
                truncated.add(d1 + d2)
    return FiniteDga(field, window, basis, diff, mult_fn, unit, aug, complete,
                     name=name, truncated_products=truncated)


# ---------------------------------------------------------------------------
# builders


def base_field_algebra(field):
    """k itself: one basis label in degree 0."""
    return DgAlgebraSpec(
        field, "k",
        basis=lambda d: ("1",) if d == 0 else (),
        degree=lambda l: 0,
        diff=lambda l: {},
        mult=lambda a, b: {"1": field.one},
        unit="1",
        aug=lambda l: field.one,
        min_degree=0, max_degree=0, total_dimension=1)


def square_zero(field, n):
    """k + k[n]: unit plus one square-zero generator e in degree -n."""
    if not isinstance(n, int) or n < 0:
        raise RefusalError(f"square_zero needs an integer n >= 0, got {n!r}")
    one, zero = field.one, field.zero

    def mult(a, b):
        if a == "1":
            return {b: one}
        if b == "1":
            return {a: one}
        return {}

    def basis(d):
        if n == 0:
            return ("1", "e") if d == 0 else ()
        if d == 0:
            return ("1",)
        return ("e",) if d == -n else ()

    return DgAlgebraSpec(
        field, f"square_zero({n})",
        basis=basis,
        degree=lambda l: 0 if l == "1" else -n,
        diff=lambda l: {},
        mult=mult,
        unit="1",
        aug=lambda l: one if l == "1" else zero,
        min_degree=-n, max_degree=0, total_dimension=2)


def truncated_polynomial(field, m, d):
    """k[x]/x^m with |x| = d (d <= 0; odd d only in characteristic 2, or d = 0)."""
    if not isinstance(m, int) or m < 2:
        raise RefusalError(f"truncated_polynomial needs m >= 2, got {m!r}")
    if not isinstance(d, int) or d > 0:
        raise RefusalError(f"generator degree must be <= 0, got {d!r}")
    if d % 2 != 0 and field.characteristic != 2:
        raise RefusalError(
            f"odd generator degree {d} needs characteristic 2 (else x^2 = 0 is forced)")
    one, zero = field.one, field.zero
    labels = ["1"] + [f"x^{i}" if i > 1 else "x" for i in range(1, m)]
    power = {l: i for i, l in enumerate(labels)}

    def basis(dd):
        if d == 0:
            return tuple(labels) if dd == 0 else ()
        return tuple(l for l in labels if power[l] * d == dd)

    def mult(a, b):
        i = power[a] + power[b]
        return {labels[i]: one} if i < m else {}

    return DgAlgebraSpec(
        field, f"truncated_polynomial({m},{d})",
        basis=basis,
        degree=lambda l: power[l] * d,
        diff=lambda l: {},
        mult=mult,
        unit="1",
        aug=lambda l: one if l == "1" else zero,
        min_degree=d * (m - 1), max_degree=0, total_dimension=m)


def free_assoc(field, gens):
    """Tensor algebra on generators with zero differential.

    gens is a list of (name, degree) pairs.  Degree-0 generators are rejected
    (degreewise bases would be infinite) and so are mixed-sign degree sets,
    for the same reason.  Words are labels like "u*v*u", with "1" the empty
    word.
    """
    gens = [(str(n), int(d)) for n, d in gens]
    if not gens:
        raise RefusalError("free_assoc needs at least one generator")
    names = [n for n, _ in gens]
    if len(set(names)) != len(names):
        raise RefusalError(f"duplicate generator names in {names}")
    for n, d in gens:
        if not n or "*" in n or any(c.isspace() for c in n):
            raise RefusalError(f"bad generator name {n!r}")
        if d == 0:
            raise RefusalError(
                f"generator {n!r} in degree 0 would make every degreewise basis infinite")
    signs = {1 if d > 0 else -1 for _, d in gens}
    if len(signs) > 1:
        raise RefusalError(
            "mixed-sign generator degrees would make every degreewise basis infinite")
    sign = signs.pop()
    degree_of = dict(gens)
    one, zero = field.one, field.zero

    memo = {}

    def words(d):
        if d == 0:
            return ("1",)
        if (d > 0) != (sign > 0):
            return ()
        if d in memo:
            return memo[d]
        out = []
        for n, dg in gens:
            rest = d - dg
            if rest != 0 and (rest > 0) != (sign > 0):
                continue
            for tail in words(rest):
                out.append(n if tail == "1" else f"{n}*{tail}")
        memo[d] = tuple(out)
        return memo[d]

    def degree(label):
        if label == "1":
            return 0
        return sum(degree_of[p] for p in label.split("*"))

    def mult(a, b):
        if a == "1":
            return {b: one}
        if b == "1":
            return {a: one}
        return {f"{a}*{b}": one}

    spec = DgAlgebraSpec(
        field, "free<" + ",".join(f"{n}:{d}" for n, d in gens) + ">",
        basis=words,
        degree=degree,
        diff=lambda l: {},
        mult=mult,
        unit="1",
        aug=lambda l: one if l == "1" else zero,
        min_degree=0 if sign > 0 else None,
        max_degree=0 if sign < 0 else None)
    spec.free_gens = tuple(gens)
    return spec


def opposite(spec):
    """The opposite algebra: a *op b = (-1)^{|a||b|} b a."""
    field = spec.field

    def mult(a, b):
        raw = spec.mult(b, a)
        if spec.degree(a) % 2 != 0 and spec.degree(b) % 2 != 0:
            return vec_scale(field, field.neg(field.one), raw)
        return dict(raw)

    out = DgAlgebraSpec(
        field, spec.name + "^op",
        basis=spec.basis, degree=spec.degree, diff=spec.diff, mult=mult,
        unit=spec.unit, aug=spec.aug,
        min_degree=spec.min_degree, max_degree=spec.max_degree,
        total_dimension=spec.total_dimension)
    return out


def tensor_algebra(a, b, name=None):
    """Tensor product of two complete slices, with the Koszul sign
    (x ox t)(x' ox t') = (-1)^{|t||x'|} xx' ox tt'.  Labels are (a, b) pairs.
    Completeness of both factors is required so every stored product is
    honest."""
    if not (a.complete and b.complete):
        raise RefusalError("tensor_algebra needs complete factors")
    if a.field != b.field:
        raise StructuralError("tensor factors over different fields")
    field = a.field
    window = Window(a.window.lo + b.window.lo, a.window.hi + b.window.hi)
    basis = {}
    for d1, ls1 in a.basis.items():
        for d2, ls2 in b.basis.items():
            basis.setdefault(d1 + d2, []).extend((x, y) for x in ls1 for y in ls2)
    basis = {d: tuple(ls) for d, ls in basis.items()}

    diff = {}
    for d, labels in basis.items():
        for (x, y) in labels:
            lc = {}
            for m, c in a.diff(x).items():
                lc[(m, y)] = c
            sgn = field.one if a.degree(x) % 2 == 0 else field.neg(field.one)
            for m, c in b.diff(y).items():
                key = (x, m)
                s = field.add(lc.get(key, field.zero), field.mul(sgn, c))
                if field.is_zero(s):
                    lc.pop(key, None)
                else:
                    lc[key] = s
            if lc:
                diff[(x, y)] = lc

    def mult_fn(p, q):
        x, y = p
        u, v = q
        sgn = (field.neg(field.one)
               if b.degree(y) % 2 != 0 and a.degree(u) % 2 != 0 else field.one)
        out = {}
        xu = a.mult(x, u)
        yv = b.mult(y, v)
        for m, c in xu.items():
            for n, e in yv.items():
                vec_add_into(field, out, {(m, n): field.mul(sgn, field.mul(c, e))}, field.one)
        return out

    aug = {}
    for x in a.labels(0):
        for y in b.labels(0):
            c = field.mul(a.aug_of(x), b.aug_of(y))
            if not field.is_zero(c):
                aug[(x, y)] = c

    return FiniteDga(field, window, basis, diff, mult_fn, (a.unit, b.unit), aug,
                     complete=True, name=name or f"{a.name}(x){b.name}")


# ---------------------------------------------------------------------------
# cohomology with products


def full_cohomology(fdga, representatives=True):
    """Cohomology of a complete slice on every degree of its window.

    Padding the window by one empty degree on each side makes all original
    degrees interior, which is honest precisely because the slice is
    complete."""
    if not fdga.complete:
        raise RefusalError("full_cohomology needs a complete slice")
    padded = fdga.window.padded(1)
    slice_ = CochainComplexSlice(fdga.field, padded, fdga.basis,
                                 {d: fdga.complex().d_at(d) for d in fdga.window.degrees()
                                  if fdga.dim(d) and fdga.dim(d + 1)})
    return slice_.cohomology(representatives=representatives)


def cohomology_ring(fdga, full=False):
    """Cohomology of the underlying complex together with structure constants
    of the induced ring on reliable degrees.

    The returned report's `ring` maps ((d1,i1),(d2,i2)) to the lincomb, over
    class indices (d3,i3), of the product of the chosen representatives.
    Pairs whose product degree is not reliable are listed in ring_skipped.
    The constants depend on the representative choice; only dimensions and
    structural facts derived from them (powers spanning, nilpotence) are
    meaningful across implementations.
    """
    field = fdga.field
    base = full_cohomology(fdga) if full else fdga.cohomology()
    reliable = sorted(base.dims)
    class_degrees = [d for d in reliable if base.dims[d] > 0]

    trackers = {}

    def tracker_at(d3):
        t = trackers.get(d3)
        if t is None:
            t = SpanTracker(field, track=True)
            if d3 - 1 in fdga.window:
                for k, col in enumerate(fdga.complex().d_at(d3 - 1).columns()):
                    if col:
                        t.insert(col, tag=("b", k))
            for i, rep in enumerate(base.representatives.get(d3, ())):
                t.insert(rep, tag=("h", i))
            trackers[d3] = t
        return t

    ring = {}
    skipped = []
    for d1 in class_degrees:
        for d2 in class_degrees:
            d3 = d1 + d2
            if d3 not in base.dims:
                skipped.append((d1, d2, d3))
                continue
            t = tracker_at(d3)
            for i1, r1 in enumerate(base.representatives[d1]):
                for i2, r2 in enumerate(base.representatives[d2]):
                    prod = fdga.mult_lc(fdga.lincomb(r1, d1), fdga.lincomb(r2, d2))
                    vecp = fdga.vector(prod, d3) if prod else {}
                    residual, combo = t.reduce(vecp)
                    if residual:
                        raise StructuralError(
                            f"product of cocycles escapes cocycles at degree {d3}")
                    value = {}
                    for tag, c in combo.items():
                        if tag[0] == "h":
                            value[(d3, tag[1])] = c
                    ring[((d1, i1), (d2, i2))] = value
    return CohomologyReport(field, base.window, base.dims, base.unreliable,
                            representatives=base.representatives,
                            ring=ring, ring_skipped=skipped)


def connective_cover(fdga, name=None):
    """The subalgebra (degrees < 0 unchanged, kernel of d in degree 0).

    For a complete slice whose cohomology vanishes in positive degrees this
    inclusion is a quasi-isomorphism, which is exactly when the cover is a
    legitimate stand-in for resolution and bar purposes.  Refused otherwise.
    """
    if not fdga.complete:
        raise RefusalError("connective cover needs a complete slice")
    field = fdga.field
    h = full_cohomology(fdga, representatives=False)
    for d, n in h.dims.items():
        if d > 0 and n:
            raise RefusalError(
                f"cohomology is nonzero in positive degree {d}; no connective cover")
    if not any(d > 0 for d in fdga.basis):
        return fdga
    if 0 not in fdga.window:
        raise RefusalError("window must contain degree 0")

    d0 = fdga.complex().d_at(0)
    kernel = d0.nullspace_basis()
    unit_vec = fdga.vector({fdga.unit: field.one}, 0)
    if d0.apply(unit_vec):
        raise StructuralError("unit is not a cocycle")

    aug_of_vec = lambda v: _apply_functional(field, fdga, v)
    tracker = SpanTracker(field)
    chosen = []
    tracker.insert(unit_vec)
    chosen.append(("1", unit_vec))
    for v in kernel:
        adj = dict(v)
        vec_add_into(field, adj, unit_vec, field.neg(aug_of_vec(v)))
        if tracker.insert(adj):
            chosen.append((f"c{len(chosen)}", adj))

    zero_tracker = SpanTracker(field, track=True)
    for lbl, v in chosen:
        zero_tracker.insert(v, tag=lbl)

    def express0(vec):
        residual, combo = zero_tracker.reduce(vec)
        if residual:
            raise StructuralError("vector outside the degree-0 kernel")
        return dict(combo)

    window = Window(min(fdga.window.lo, 0), 0)
    basis = {d: ls for d, ls in fdga.basis.items() if d < 0}
    basis[0] = tuple(lbl for lbl, _ in chosen)
    vec_of = dict(chosen)

    def to_old(lc):
        out = {}
        for l, c in lc.items():
            if l in vec_of:
                vec_add_into(field, out, fdga.lincomb(vec_of[l], 0), c)
            else:
                vec_add_into(field, out, {l: field.one}, c)
        return out

    for lbl, _ in chosen:
        if any(lbl in ls for d, ls in basis.items() if d < 0):
            raise StructuralError(f"degree-0 cover label {lbl!r} collides with the input basis")

    diff = {}
    for d, labels in basis.items():
        if d >= 0:
            continue
        for l in labels:
            old = fdga.diff(l)
            if not old:
                continue
            diff[l] = express0(fdga.vector(old, 0)) if d + 1 == 0 else old

    def mult_fn(x, y):
        prod = fdga.mult_lc(to_old({x: field.one}), to_old({y: field.one}))
        dx = 0 if x in vec_of else fdga.degree(x)
        dy = 0 if y in vec_of else fdga.degree(y)
        if dx + dy == 0:
            return express0(fdga.vector(prod, 0))
        return prod

    aug = {lbl: (field.one if lbl == "1" else field.zero) for lbl, _ in chosen}

    return FiniteDga(field, window, basis, diff, mult_fn, "1", aug,
                     complete=True, name=name or f"{fdga.name}|cover")


def _apply_functional(field, fdga, vec):
    labels = fdga.labels(0)
    total = field.zero
    for i, c in vec.items():
        total = field.add(total, field.mul(c, fdga.aug_of(labels[i])))
    return total


# ---------------------------------------------------------------------------
# maps of dg algebras


class DgaMap:
    """A degree-0 map of window slices given on basis labels; labels missing
    from images are sent to zero."""

    def __init__(self, source, target, images, name=""):
        self.source = source
        self.target = target
        self.images = {l: dict(lc) for l, lc in images.items() if lc}
        self.name = name

    def apply(self, lc):
        field = self.target.field
        out = {}
        for l, c in lc.items():
            vec_add_into(field, out, self.images.get(l, {}), c)
        return out

    def validate_map(self, check_augmentation=True):
        # check_augmentation=False validates a map of dg algebras that is
        # not required to respect the chosen augmentations (the far endpoint
        # evaluation of a path object is the standing example)
        field = self.target.field
        src, tgt = self.source, self.target
        checks, witnesses = {}, {}

        def record(name, witness):
            if checks.get(name, True):
                checks[name] = False
                witnesses[name] = witness

        checks["degree"] = True
        for l, lc in self.images.items():
            d = src.degree(l)
            for m in lc:
                if m not in tgt.index or tgt.index[m][0] != d:
                    record("degree", (l, m))

        all_labels = [(d, l) for d, ls in sorted(src.basis.items()) for l in ls]

        checks["chain"] = True
        for d, l in all_labels:
            if d + 1 not in src.window or d + 1 not in tgt.window:
                continue
            lhs = self.apply(src.diff(l))
            rhs = tgt.diff_lc(self.apply({l: field.one}))
            if not lc_equal(field, lhs, rhs):
                record("chain", (l,))

        checks["multiplicative"] = True
        for d1, a in all_labels:
            for d2, b in all_labels:
                if d1 + d2 not in src.window or d1 + d2 not in tgt.window:
                    continue
                lhs = self.apply(src.mult(a, b))
                rhs = tgt.mult_lc(self.apply({a: field.one}), self.apply({b: field.one}))
                if not lc_equal(field, lhs, rhs):
                    record("multiplicative", (a, b))

        checks["unit"] = True
        if 0 in src.window and 0 in tgt.window and src.unit in src.index:
            if not lc_equal(field, self.apply({src.unit: field.one}),
                             {tgt.unit: field.one}):
                record("unit", (src.unit,))

        if check_augmentation:
            checks["augmentation"] = True
            for a in src.labels(0):
                got = field.zero
                for m, c in self.apply({a: field.one}).items():
                    got = field.add(got, field.mul(c, tgt.aug_of(m)))
                if not field.is_zero(field.sub(got, src.aug_of(a))):
                    record("augmentation", (a,))

        return ValidationReport(self.name or "dga map", checks, witnesses)

    def __repr__(self):
        return f"DgaMap({self.source.name} -> {self.target.name})"
