"""Ext dimensions via stepwise minimal semifree resolutions.

Independent of the bar construction: the resolution of k adjoins free
generators degree by degree from 0 downward, each stage killing exactly the
remaining cohomology of (resolution -> k) at its top unprocessed degree.
Over a local connective algebra the construction stays minimal, so
Hom(resolution, k) has zero differential and Ext^i is a literal count of
generators in degree -i.
"""

from .exactla import (
    SpanTracker, RefusalError, StructuralError, matrix_from_columns,
    vec_add_into,
)
from .dga import connective_cover
from .artin import is_artin


class ResolutionState:
    """A semifree resolution of k over a connective complete slice.

    gens is the ordered list (label, degree, delta): delta is the value of
    the differential on 1 (x) gen, a lincomb over (algebra label, earlier
    gen label) pairs.  The free module has basis a (x) g in degree
    |a| + |g|, differential d(a (x) g) = da (x) g + (-1)^{|a|} a delta(g),
    and comparison map epsilon_of (the augmentation against degree-0
    generators).
    """

    def __init__(self, algebra, depth):
        self.algebra = algebra
        self.depth = depth
        self.certified_above = -depth
        self.gens = [("g0", 0, {})]
        self._degree = {"g0": 0}
        self._delta = {"g0": {}}

    def _adjoin(self, label, degree, delta):
        self.gens.append((label, degree, delta))
        self._degree[label] = degree
        self._delta[label] = delta

    def gen_counts(self):
        counts = {}
        for _, s, _ in self.gens:
            counts[s] = counts.get(s, 0) + 1
        return counts

    def generator_degrees(self):
        return [s for _, s, _ in self.gens]

    def basis(self, t):
        out = []
        for g, s, _ in self.gens:
            for a in self.algebra.labels(t - s):
                out.append((a, g))
        return tuple(out)

    def diff_lc(self, lc):
        a_ = self.algebra
        field = a_.field
        out = {}
        for (a, g), c in lc.items():
            for a2, c2 in a_.diff(a).items():
                vec_add_into(field, out, {(a2, g): c2}, c)
            sign = field.one if a_.degree(a) % 2 == 0 else field.neg(field.one)
            coeff = field.mul(c, sign)
            if field.is_zero(coeff):
                continue
            for (b, g2), c2 in self._delta[g].items():
                for ab, c3 in a_.mult(a, b).items():
                    vec_add_into(field, out, {(ab, g2): field.mul(c2, c3)},
                                 coeff)
        return out

    def epsilon_of(self, lc):
        a_ = self.algebra
        total = a_.field.zero
        for (a, g), c in lc.items():
            if self._degree[g] == 0 and a_.degree(a) == 0:
                total = a_.field.add(total, a_.field.mul(c, a_.aug_of(a)))
        return total

    def __repr__(self):
        return (f"ResolutionState({self.algebra.name}, gens="
                f"{self.generator_degrees()}, depth={self.depth})")


def minimal_resolution(fdga, depth):
    """Resolve k over an Artin slice by adjoining generators from 0 down.

    Works degree by degree: at stage t the defect space (cocycles modulo
    boundaries, intersected with ker eps at t = 0) is computed exactly, and
    one generator per surviving class is adjoined at t - 1.  Adjoining a
    generator with differential z also makes every A^0-multiple of z a
    boundary, so classes in the same cyclic module are never double-counted;
    that, plus locality of H^0, is what keeps the resolution minimal, and
    minimality is certified rather than assumed.  Positive-degree chains are
    removed up front by the connective cover (a quasi-isomorphism whenever
    the Artin verdict holds).  After the run the cone of (resolution -> k)
    is acyclic in all degrees above -depth.
    """
    report = is_artin(fdga)
    if not report.verdict:
        raise RefusalError(
            f"{fdga.name}: minimal resolutions need an Artin algebra, got "
            f"connective={report.connective}, local={report.h0_local}, "
            f"residue_is_k={report.residue_is_k}")
    if not isinstance(depth, int) or depth < 0:
        raise RefusalError(f"depth must be a nonnegative integer, got {depth!r}")
    a = connective_cover(fdga)
    field = a.field
    state = ResolutionState(a, depth)
    counter = 1
    a0 = a.labels(0)

    for t in range(0, -depth, -1):
        basis_t = state.basis(t)
        if not basis_t:
            continue
        basis_up = state.basis(t + 1)
        idx_t = {p: i for i, p in enumerate(basis_t)}
        idx_up = {p: i for i, p in enumerate(basis_up)}

        nrows = len(basis_up) + (1 if t == 0 else 0)
        cols = []
        for p in basis_t:
            image = state.diff_lc({p: field.one})
            col = {idx_up[q]: c for q, c in image.items()}
            if t == 0:
                e = state.epsilon_of({p: field.one})
                if not field.is_zero(e):
                    col[len(basis_up)] = e
            cols.append(col)
        kernel = matrix_from_columns(field, nrows, cols).nullspace_basis()

        boundaries = SpanTracker(field)
        for p in state.basis(t - 1):
            image = state.diff_lc({p: field.one})
            vec = {idx_t[q]: c for q, c in image.items()}
            if vec:
                boundaries.insert(vec)

        for v in kernel:
            residual, _ = boundaries.reduce(v)
            if not residual:
                continue
            z = {basis_t[i]: c for i, c in v.items()}
            for g2, s2, _ in state.gens:
                if s2 != t:
                    continue
                alpha = field.zero
                for (x, g), c in z.items():
                    if g == g2 and a.degree(x) == 0:
                        alpha = field.add(alpha, field.mul(c, a.aug_of(x)))
                if not field.is_zero(alpha):
                    raise StructuralError(
                        f"resolution lost minimality at degree {t}: a defect "
                        f"class has unit component on generator {g2!r}")
            label = f"g{counter}"
            counter += 1
            state._adjoin(label, t - 1, z)
            # d(s (x) new gen) = s z for every degree-0 s: the whole
            # A^0-orbit of z becomes a boundary at this degree
            for s in a0:
                w = {}
                for (b, g2), c in z.items():
                    for sb, c2 in a.mult(s, b).items():
                        vec_add_into(field, w, {idx_t[(sb, g2)]: c2}, c)
                if w:
                    boundaries.insert(w)
    return state


def ext_dims(fdga, window):
    """Graded dimensions of Ext_A(k, k) over the window, by resolution.

    Minimality makes Hom(resolution, k) a zero-differential complex, so the
    dimension in degree i is the number of generators in degree -i.  Depth
    is chosen from the window; degrees below 0 report 0.
    """
    depth = max(0, window.hi)
    res = minimal_resolution(fdga, depth)
    counts = res.gen_counts()
    return {d: counts.get(-d, 0) for d in window.degrees()}
