# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

import pydantic
import pytest

import charpoly
import qstruct
import rea
import ring
import tensor
from rea import Generator, NCPoly
from tests.unit.helpers import assert_all_zero, assert_passed


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_alpha_table(n):
    """
    arrange: none.
    act: build the α table.
    assert: the closed form satisfies its anchor and recursion.
    """
    table = charpoly.alpha_table(n)
    assert len(table.alphas) == n
    assert_all_zero(charpoly.alpha_residuals(table))


def test_alpha_values():
    """
    arrange: none.
    act: compute α_1 and α_2 for N=2.
    assert: α_1 = q^-2 and α_2 = 1/|ε_q|².
    """
    assert charpoly.alpha_closed_form(2, 1) == ring.qpow(-2)
    assert charpoly.alpha_closed_form(2, 2) == ring.RatFunc(1, 1 + ring.qpow(2))
    with pytest.raises(ValueError):
        charpoly.alpha_table(2).alpha(3)


def test_charpoly_leading_coefficient_is_validated():
    """
    arrange: coefficients whose leading term is not (-1)^N.
    act: build a CharPoly.
    assert: validation fails.
    """
    with pytest.raises(pydantic.ValidationError):
        charpoly.CharPoly(coefficients=(NCPoly.one(), NCPoly.one()))


@pytest.mark.parametrize("i", [1, 2])
def test_sigma_formula_in_identity_representation(i):
    """
    arrange: L = 1 with the structure constants for N=2.
    act: evaluate the σ contraction.
    assert: σ(i) = q^{i(1-N)} qbinom(N, i).
    """
    rhat = qstruct.build_rhat(2)
    eps = qstruct.build_eps(2, rhat)
    identity = tensor.TensorOp.identity(2, 1, tensor.RATFUNC)
    value = charpoly.sigma_formula(
        identity, rhat.op, eps.v, charpoly.alpha_closed_form(2, i), i
    )
    assert value == ring.qbinom(2, i) * ring.qpow(-i)


def test_symmetrize_identity():
    """
    arrange: the scalar identity for N=2.
    act: symmetrize it.
    assert: S_2(1) = 1 + R̂².
    """
    rhat = qstruct.build_rhat(2)
    identity = tensor.TensorOp.identity(2, 1, tensor.LAURENT)
    expected = tensor.TensorOp.identity(2, 2, tensor.LAURENT) + rhat.op @ rhat.op
    assert charpoly.symmetrize(identity, rhat.op, 2) == expected


def test_n1_engine(engine1):
    """
    arrange: the engine for N=1.
    act: compute s_q(1), σ_q(1) and the identities.
    assert: everything reduces to the single generator l.
    """
    l = NCPoly.generator(Generator(1, 1))
    assert engine1.s_q(1).value == l
    assert engine1.sigma_q(1).value == l
    assert engine1.det_l().value == l
    assert engine1.newton_residual(1) == 0
    assert engine1.cayley_hamilton_residual().is_zero
    assert_all_zero(engine1.b_relation_residual())
    assert_passed(engine1.inverse_check())
    assert_passed(engine1.higher_trace(2))


def test_s_q1(engine2):
    """
    arrange: the engine for N=2.
    act: compute s_q(0) and s_q(1).
    assert: s_q(0) = q^{1-N} N_q and s_q(1) = q^-2 l_1_1 + l_2_2.
    """
    assert engine2.s_q(0).value == ring.qpow(-1) * ring.qnum(2)
    expected = NCPoly({(Generator(1, 1),): ring.qpow(-2), (Generator(2, 2),): 1})
    assert engine2.s_q(1).value == expected
    assert engine2.sigma_q(0).value == 1


def test_central_elements(engine2):
    """
    arrange: the engine for N=2, which asserts centrality.
    act: compute s_q(i), σ_q(i) and Det L.
    assert: each commutes with every generator.
    """
    for i in (1, 2):
        assert rea.is_central(engine2.s_q(i).value, engine2.system)
        assert rea.is_central(engine2.sigma_q(i).value, engine2.system)
    assert engine2.det_l().kind == charpoly.ElementKind.DET


def test_invalid_indices(engine2):
    """
    arrange: the engine for N=2.
    act: request out-of-range indices.
    assert: ValueError is raised.
    """
    with pytest.raises(ValueError):
        engine2.s_q(-1)
    with pytest.raises(ValueError):
        engine2.sigma_q(3)
    with pytest.raises(ValueError):
        engine2.telescoping_residual(1, 1)
    with pytest.raises(ValueError):
        engine2.higher_trace_residual(0)
    with pytest.raises(ValueError):
        charpoly.CharacteristicEngine(0)


@pytest.mark.parametrize("sigma_first", [False, True])
def test_newton_relations(engine2, sigma_first):
    """
    arrange: the engine for N=2.
    act: compute the Newton residuals in one multiplication order.
    assert: they vanish.
    """
    assert_all_zero(engine2.newton_residual(i, sigma_first) for i in (1, 2))


def test_telescoping_lemma(engine2):
    """
    arrange: the engine for N=2.
    act: compute the splitting residual for i=2, p=1.
    assert: it vanishes.
    """
    assert engine2.telescoping_residual(2, 1) == 0


def test_charpoly_two_forms(engine2):
    """
    arrange: the engine for N=2.
    act: build Δ(x) and its product form.
    assert: the forms agree and the leading coefficient is 1.
    """
    delta = engine2.charpoly()
    assert delta.degree == 2
    assert delta.coefficients[2] == 1
    assert delta.coefficients[1] == -engine2.sigma_q(1).value
    assert_all_zero(engine2.charpoly_residuals())


def test_b_matrix_relation(engine2):
    """
    arrange: the engine for N=2.
    act: compute the B-matrix residual with β = q² and β = q³.
    assert: only β = q² satisfies the relation.
    """
    assert len(engine2.build_b()) == 2
    assert_all_zero(engine2.b_relation_residual())
    perturbed = engine2.b_relation_residual(ring.qpow(3))
    assert not perturbed[2].is_zero


@pytest.mark.parametrize("sigma_first", [False, True])
def test_cayley_hamilton(engine2, sigma_first):
    """
    arrange: the engine for N=2.
    act: evaluate Δ(L).
    assert: it vanishes.
    """
    assert engine2.cayley_hamilton_residual(sigma_first).is_zero


def test_inverse_formula(engine2):
    """
    arrange: the engine for N=2.
    act: build the adjugate and check both products.
    assert: adj = σ_q(1) - L and both products equal σ_q(2).
    """
    expected = (
        tensor.TensorOp.identity(2, 1, rea.NCPOLY) * engine2.sigma_q(1).value - engine2.l
    )
    assert engine2.adjugate() == rea.normal_form_matrix(expected, engine2.system)
    cert = engine2.inverse_check()
    assert_passed(cert)
    assert cert.claim == "inverse-formula-n2"


@pytest.mark.parametrize("p", [1, 2])
def test_higher_traces(engine2, p):
    """
    arrange: the engine for N=2.
    act: express s_q(2+p) through lower traces.
    assert: the certificate passes.
    """
    cert = engine2.higher_trace(p)
    assert_passed(cert)
    assert cert.claim == f"higher-trace-p{p}-n2"


def test_symmetrizer(engine2):
    """
    arrange: the engine for N=2.
    act: commute S_2(L) with R̂ and contract ε_q against S_2(L^i).
    assert: both identities hold.
    """
    assert_all_zero(engine2.symmetrizer_commutation_residuals())
    assert_all_zero(engine2.symmetrizer_trace_residual(i) for i in (1, 2))


def test_symmetrizer_n3(engine3):
    """
    arrange: the engine for N=3.
    act: commute S_3(L) with R̂ and contract ε_q against S_3(L^i).
    assert: both identities hold.
    """
    assert_all_zero(engine3.symmetrizer_commutation_residuals())
    assert_all_zero(engine3.symmetrizer_trace_residual(i) for i in (1, 2))


@pytest.mark.parametrize("sigma_first", [False, True])
def test_cayley_hamilton_n3(engine3, sigma_first):
    """
    arrange: the engine for N=3.
    act: compute the Cayley-Hamilton residual in either multiplication order.
    assert: it vanishes.
    """
    assert engine3.cayley_hamilton_residual(sigma_first).is_zero


@pytest.mark.n3
def test_n3_identities(engine3):
    """
    arrange: the engine for N=3.
    act: compute the Newton, Cayley-Hamilton, B-matrix and inverse residuals.
    assert: they all vanish.
    """
    assert_all_zero(engine3.newton_residual(i) for i in (1, 2, 3))
    assert_all_zero(engine3.newton_residual(i, sigma_first=True) for i in (1, 2, 3))
    assert engine3.cayley_hamilton_residual().is_zero
    assert_all_zero(engine3.b_relation_residual())
    assert_all_zero(engine3.charpoly_residuals())
    assert_passed(engine3.inverse_check())
    assert_passed(engine3.higher_trace(1))


@pytest.mark.n3
def test_n3_telescoping(engine3):
    """
    arrange: the engine for N=3.
    act: compute every splitting residual.
    assert: they vanish.
    """
    assert_all_zero(engine3.telescoping_residual(i, p) for i in (2, 3) for p in range(1, i))
