"""The Koszul dual: graded dual of the bar coalgebra.

Dualizing the bar slice degreewise puts the functional on a word of bar
degree -d in degree d.  The product is convolution against deconcatenation,
which on the word basis is concatenation with the Koszul sign of the two
functionals; the unit is the functional dual to the empty word and the
augmentation is evaluation at the empty word.  The differential is the
(signed) transpose of the bar differential, so the dual of a slice is again
a finite dg algebra and the generic validators apply to it.

Cohomology of the dual slice is Ext over the input algebra in every
reliable degree; the resolution oracle in extres recomputes the same
numbers without any bar construction.
"""

from .exactla import Window, RefusalError
from .dga import FiniteDga, cohomology_ring
from .bar import bar_complex, weight_bound


class DualSlice:
    """The Koszul dual of a spec, materialized on a window.

    algebra is a FiniteDga whose labels are the bar words; window is the
    requested window (the algebra itself covers one padded degree more on
    each side, so cohomology is reliable on all requested degrees)."""

    def __init__(self, spec, window, bar, algebra):
        self.spec = spec
        self.window = window
        self.bar = bar
        self.algebra = algebra
        self.field = spec.field
        self.max_weight = bar.max_weight

    def dims(self):
        return self.algebra.dims()

    def homology_dims(self):
        """Ext dimensions (cohomology of the dual) on the requested degrees."""
        rep = self.algebra.cohomology(representatives=False)
        return {d: rep.dims.get(d, 0) for d in self.window.degrees()}

    def cohomology(self, representatives=True):
        return self.algebra.cohomology(representatives=representatives)

    def validate(self):
        return self.algebra.validate()

    def as_spec(self, name=None):
        return self.algebra.as_spec(name or f"dual({self.spec.name})")

    def __repr__(self):
        return f"DualSlice({self.spec.name}, window={self.window!r})"


def koszul_dual_slice(spec, window, max_weight=None):
    """Materialize the Koszul dual of spec on a window.

    Runs the bar construction on the mirrored window and dualizes: label
    degrees flip sign, the differential transposes with the sign
    (df)(x) = (-1)^{|f|} f(dx), and words multiply by concatenation with
    the Koszul sign of their degrees.  Convergence refusals propagate from
    the bar side.
    """
    bar = bar_complex(spec, window.mirrored(), max_weight=max_weight)
    field = spec.field
    one, neg = field.one, field.neg

    dual_window = window.padded(1)
    basis = {}
    for d in dual_window.degrees():
        words = bar.basis.get(-d, ())
        if words:
            basis[d] = words

    diff = {}
    for d, words in basis.items():
        if d + 1 not in dual_window:
            continue
        sources = basis.get(d + 1, ())
        if not sources:
            continue
        mat = bar.complex.d_at(-d - 1)  # bar degree -d-1 -> -d
        sign = one if d % 2 == 0 else neg(one)
        for (i, j), c in mat.entries.items():
            lc = diff.setdefault(words[i], {})
            lc[sources[j]] = field.mul(sign, c)

    def word_degree(word):
        return -sum(spec.degree(l) - 1 for l in word)

    def mult_fn(x, y):
        exp = word_degree(x) * word_degree(y)
        return {x + y: one if exp % 2 == 0 else neg(one)}

    algebra = FiniteDga(
        field, dual_window, basis, diff, mult_fn,
        unit=(), aug={(): one} if 0 in dual_window else {}, complete=False,
        name=f"dual({spec.name})")
    return DualSlice(spec, window, bar, algebra)


def dual_cohomology_dims(spec, window, max_weight=None):
    """Ext dims of spec on the requested degrees, via the dual slice."""
    return koszul_dual_slice(spec, window, max_weight=max_weight).homology_dims()


def dual_cohomology_ring(spec, window, max_weight=None):
    """Cohomology of the dual slice with structure constants.

    The constants depend on the chosen cocycle representatives; only
    basis-independent statements (dimensions, powers being nonzero or
    spanning, nilpotence) are stable answers.
    """
    dual = koszul_dual_slice(spec, window, max_weight=max_weight)
    return cohomology_ring(dual.algebra)


def check_power_generation(report, g):
    """True iff the reported cohomology is one-dimensional exactly at the
    nonnegative multiples of g and the powers of a degree-g class stay
    nonzero through every reliable degree.

    report must carry ring structure constants (dual_cohomology_ring)."""
    if not isinstance(g, int) or g < 1:
        raise RefusalError(f"generator degree must be a positive integer, got {g!r}")
    if report.ring is None:
        raise RefusalError("power generation needs a report with ring structure")
    field = report.field
    for d, n in report.dims.items():
        want = 1 if (d >= 0 and d % g == 0) else 0
        if n != want:
            return False
    if report.dims.get(g, 0) != 1:
        return False

    gen = (g, 0)
    power = {gen: field.one}
    m = 1
    while (m + 1) * g in report.dims:
        nxt = {}
        for cls, c in power.items():
            for cls2, c2 in report.ring.get((cls, gen), {}).items():
                s = field.add(nxt.get(cls2, field.zero), field.mul(c, c2))
                if field.is_zero(s):
                    nxt.pop(cls2, None)
                else:
                    nxt[cls2] = s
        if not nxt:
            return False
        power = nxt
        m += 1
    return True


def bidual_cohomology(spec, window, max_weight=None):
    """Cohomology dims of the double dual on the requested window.

    The inner dual is computed on a window deep enough that every product
    the outer bar construction needs is honest.  Refused (as
    "non-convergent biduality") when the dual is not coconnected enough:
    a finite outer weight bound requires the dual's augmentation-ideal
    cohomology to sit in degrees >= 2, anything in degrees <= 1 makes the
    outer weight filtration non-stabilizing.
    """
    outer_bar_window = window.mirrored().padded(1)
    inner_hi = max(3, outer_bar_window.hi + 2)
    inner = koszul_dual_slice(spec, Window(-2, inner_hi))

    rep = inner.algebra.cohomology(representatives=False)
    for d, n in rep.dims.items():
        if d < 0 and n:
            raise RefusalError(
                f"non-convergent biduality: dual of {spec.name} has cohomology "
                f"in negative degree {d}")
    if rep.dims.get(0, 0) > 1:
        raise RefusalError(
            f"non-convergent biduality: dual of {spec.name} has "
            "augmentation-ideal cohomology in degree 0")

    dual_spec = inner.as_spec()
    if weight_bound(dual_spec, outer_bar_window) is None:
        raise RefusalError(
            f"non-convergent biduality: dual of {spec.name} has generators in "
            "degree <= 1, the outer weight filtration does not stabilize")

    outer = koszul_dual_slice(dual_spec, window, max_weight=max_weight)
    return outer.homology_dims()
