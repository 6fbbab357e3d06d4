"""Module layer tests: Koszul complexes and their filtration certificate,
strict vs derived tensor, Laurent modules, the t-action fiber."""

import pytest
from hypothesis import given, settings, strategies as st

from koszul.exactla import Window, QQ, Field, RefusalError
from koszul.dga import square_zero, free_assoc
from koszul.dgmod import (
    DgModuleSpec, trivial_module, zero_module, regular_module,
    laurent_module, koszul_complex, module_slice, validate_module,
    verify_free_filtration, strict_tensor, derived_tensor_dims,
    rhom_from_k_dims,
)

F5 = Field(5)


def nonzero(dims):
    return {d: n for d, n in dims.items() if n}


# ---------------------------------------------------------------------------
# basic builders


def test_trivial_regular_zero_validate():
    spec = square_zero(QQ, 1)
    w = Window(-4, 4)
    assert validate_module(trivial_module(spec), w)
    assert validate_module(regular_module(spec), w)
    assert validate_module(zero_module(spec), w)


def test_module_slice_shape():
    spec = square_zero(QQ, 1)
    s = module_slice(regular_module(spec), Window(-2, 1))
    assert s.dims() == {-1: 1, 0: 1}
    s.validate_complex()


def test_laurent_module():
    lau = laurent_module(QQ, 2)
    assert validate_module(lau, Window(-6, 6))
    assert lau.basis(4) == ("t^2",) and lau.basis(3) == ()
    assert lau.basis(-2) == ("t^-1",)
    assert lau.left_act("t*t", "t^-1") == {"t": QQ.one}
    with pytest.raises(RefusalError):
        laurent_module(QQ, 3)
    with pytest.raises(RefusalError):
        laurent_module(QQ, 0)


# ---------------------------------------------------------------------------
# Koszul complexes


@pytest.mark.parametrize("n", range(5))
def test_koszul_complex_validates(n):
    kos = koszul_complex(QQ, n)
    w = Window(-1, 3 * (n + 1) + 1)
    assert validate_module(kos, w)
    module_slice(kos, w).validate_complex()


@pytest.mark.parametrize("n", range(5))
def test_koszul_cohomology_is_k(n):
    kos = koszul_complex(QQ, n)
    w = Window(-1, 3 * (n + 1) + 1)
    rep = module_slice(kos, w).cohomology(representatives=False)
    assert rep.nonzero_dims() == {0: 1}


def test_koszul_complex_labels():
    kos = koszul_complex(QQ, 1)
    assert kos.basis(0) == ("z",)
    assert kos.basis(1) == ("1",)
    assert kos.basis(2) == ("uz",)
    assert kos.basis(4) == ("u^2z",)
    assert kos.diff("1") == {"uz": QQ.one}
    assert kos.diff("u^2z") == {}
    with pytest.raises(RefusalError):
        koszul_complex(QQ, -1)


def test_koszul_bimodule_signs():
    # n = 0: u carries a sign onto the non-z part, z picks one up per u
    kos = koszul_complex(QQ, 0)
    minus = QQ.neg(QQ.one)
    assert kos.left_act("u", "1") == {"u": minus}
    assert kos.left_act("u", "z") == {"uz": QQ.one}
    assert kos.right_act("u", "e") == {"uz": minus}
    assert kos.right_act("z", "e") == {}


def test_validate_module_catches_broken_unit():
    kos = koszul_complex(QQ, 1)
    broken = DgModuleSpec(
        QQ, "broken", kos.algebra, "left",
        basis=kos.basis, degree=kos.degree, diff=kos.diff,
        left_act=lambda a, m: {} if a == "1" else kos.left_act(a, m),
        min_degree=0)
    report = validate_module(broken, Window(0, 4))
    assert not report.checks["left_unit"]


def test_validate_module_catches_broken_bimodule():
    kos = koszul_complex(QQ, 0)

    def flat_right(m, y):
        if y == "1":
            return {m: QQ.one}
        if m.endswith("z"):
            return {}
        return {(m + "z") if m != "1" else "z": QQ.one}  # sign dropped

    broken = DgModuleSpec(
        QQ, "broken", kos.algebra, "bi",
        basis=kos.basis, degree=kos.degree, diff=kos.diff,
        left_act=kos.left_act, right_act=flat_right,
        right_algebra=kos.right_algebra, min_degree=0)
    report = validate_module(broken, Window(-1, 4))
    assert not report.checks["bimodule"]


# ---------------------------------------------------------------------------
# filtration certificate and the two tensors


@pytest.mark.parametrize("n", range(5))
def test_free_filtration_certificate(n):
    kos = koszul_complex(QQ, n)
    cert = verify_free_filtration(kos, Window(0, 3 * (n + 1)))
    assert cert
    assert [s["generator_degree"] for s in cert.steps] == [0, n]
    with pytest.raises(RefusalError):
        verify_free_filtration(regular_module(square_zero(QQ, 1)), Window(-1, 0))


@pytest.mark.parametrize("n", (1, 2, 3))
def test_strict_tensor_dims(n):
    kos = koszul_complex(QQ, n)
    w = Window(-1, n + 2)
    s = strict_tensor(kos, w)
    s.validate_complex()
    assert {d: len(ls) for d, ls in s.basis.items()} == {0: 1, n: 1}


@pytest.mark.parametrize("n", (1, 2))
def test_strict_tensor_matches_derived(n):
    kos = koszul_complex(QQ, n)
    w = Window(-1, n + 2)
    strict_h = strict_tensor(kos, w).cohomology(representatives=False)
    base = kos.algebra
    k = trivial_module(base)
    derived = derived_tensor_dims(k, base, k, Window(0, n + 1))
    assert strict_h.nonzero_dims() == nonzero(derived) == {0: 1, n: 1}


def test_strict_tensor_needs_certificate():
    with pytest.raises(RefusalError):
        strict_tensor(regular_module(square_zero(QQ, 1)), Window(-1, 0))


@settings(max_examples=10, deadline=None)
@given(n=st.integers(0, 4), p=st.sampled_from([None, 5]))
def test_koszul_cohomology_any_field(n, p):
    field = QQ if p is None else Field(p)
    kos = koszul_complex(field, n)
    w = Window(-1, 2 * (n + 1) + 1)
    rep = module_slice(kos, w).cohomology(representatives=False)
    assert rep.nonzero_dims() == {0: 1}


# ---------------------------------------------------------------------------
# the t-action fiber (RHom from k)


def test_rhom_from_k_on_laurent_vanishes():
    lau = laurent_module(QQ, 2)
    assert rhom_from_k_dims(lau, Window(-6, 6)) == {d: 0 for d in range(-6, 7)}


def test_rhom_from_k_on_free_rank_one():
    base = free_assoc(QQ, [("t", 2)])
    dims = rhom_from_k_dims(regular_module(base), Window(-6, 6))
    assert nonzero(dims) == {-1: 1}


def test_rhom_refusals():
    two_gen = free_assoc(QQ, [("t", 2), ("s", 4)])
    with pytest.raises(RefusalError):
        rhom_from_k_dims(regular_module(two_gen), Window(-2, 2))
