# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

from fractions import Fraction

import pydantic
import pytest

import qstruct
import ring
import tensor
from ring import LAMBDA
from tests.unit.helpers import assert_all_zero


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_rhat_axioms(n):
    """
    arrange: build R̂ for dimension n.
    act: compute the braid, Hecke and q-trace residuals.
    assert: every residual vanishes.
    """
    rhat = qstruct.build_rhat(n)
    d = qstruct.build_d(n)
    assert qstruct.hecke_residual(rhat).is_zero
    if n > 1:
        assert qstruct.yang_baxter_residual(rhat).is_zero
    assert qstruct.qtrace_rhat_residual(rhat, d).is_zero


def test_rhat_entries():
    """
    arrange: none.
    act: build R̂ for N=2.
    assert: entries follow the placement q, 1, λ.
    """
    op = qstruct.build_rhat(2).op
    assert op.entry((1, 1), (1, 1)) == ring.Q
    assert op.entry((2, 1), (1, 2)) == ring.ONE
    assert op.entry((1, 2), (2, 1)) == ring.ONE
    assert op.entry((1, 2), (1, 2)) == LAMBDA
    assert op.entry((2, 1), (2, 1)) == ring.ZERO
    assert len(op.entries) == 5


def test_rhat_inverse():
    """
    arrange: build R̂ for N=3.
    act: multiply R̂ by R̂ - λ.
    assert: the product is the identity.
    """
    rhat = qstruct.build_rhat(3)
    assert rhat.op @ rhat.inverse() == tensor.TensorOp.identity(3, 2, tensor.LAURENT)


def test_rhat_at_q_one_is_the_flip():
    """
    arrange: build R̂ for N=2.
    act: specialize to q = 1.
    assert: R̂ becomes the flip, an involution.
    """
    flip = qstruct.specialize(qstruct.build_rhat(2).op, 1)
    assert flip @ flip == tensor.TensorOp.identity(2, 2, tensor.RATIONAL)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_eps_eigenrelations(n):
    """
    arrange: build R̂ and ε_q.
    act: compute the left and right eigenrelation residuals and the norm residual.
    assert: ε_q is a -1/q eigenvector on both sides with the expected norm.
    """
    rhat = qstruct.build_rhat(n)
    eps = qstruct.build_eps(n, rhat)
    assert_all_zero(qstruct.eps_left_residuals(rhat, eps))
    assert_all_zero(qstruct.eps_right_residuals(rhat, eps))
    assert qstruct.eps_norm_residual(eps).is_zero


def test_eps_closed_form():
    """
    arrange: none.
    act: build ε_q for N=3.
    assert: entries are (-q)^inv and vanish off permutations.
    """
    eps = qstruct.build_eps(3)
    assert eps.v.entry((1, 2, 3)) == 1
    assert eps.v.entry((2, 1, 3)) == -ring.Q
    assert eps.v.entry((3, 2, 1)) == -ring.qpow(3)
    assert eps.v.entry((1, 1, 2)) == ring.ZERO
    assert len(eps.v.entries) == 6


def test_eps_norm_values():
    """
    arrange: none.
    act: compute the expected norm for N=2.
    assert: |ε_q|² = 1 + q² = q 2_q.
    """
    assert qstruct.eps_norm_expected(2) == 1 + ring.qpow(2)
    assert qstruct.eps_norm_expected(1) == ring.ONE


@pytest.mark.parametrize("n", [2, 3])
def test_solve_eps_kernel(n):
    """
    arrange: build R̂.
    act: solve the joint kernel by elimination.
    assert: it is one-dimensional and agrees with the closed form.
    """
    rhat = qstruct.build_rhat(n)
    solved = qstruct.solve_eps(n, rhat)
    assert qstruct.kernel_dimension(n, rhat) == 1
    assert solved.v == qstruct.build_eps(n).v.map(ring.RatFunc.coerce, tensor.RATFUNC)


def test_inversions():
    """
    arrange: none.
    act: count inversions.
    assert: counts match.
    """
    assert qstruct.inversions((1, 2, 3)) == 0
    assert qstruct.inversions((3, 2, 1)) == 3
    assert qstruct.inversions((2, 3, 1)) == 2


def test_d_matrix():
    """
    arrange: none.
    act: build D for N=3 and attempt an invalid diagonal.
    assert: D = diag(q^-2, 1, q^2); other diagonals are rejected.
    """
    d = qstruct.build_d(3)
    assert d.diagonal == (ring.qpow(-2), ring.ONE, ring.qpow(2))
    with pytest.raises(pydantic.ValidationError):
        qstruct.DMatrix(n=2, diagonal=(ring.ONE, ring.ONE))


def test_qtrace_of_identity():
    """
    arrange: the identity on one leg for N=3.
    act: take its q-trace.
    assert: Tr_q 1 = N_q.
    """
    d = qstruct.build_d(3)
    identity = tensor.TensorOp.identity(3, 1, tensor.LAURENT)
    assert qstruct.qtrace(identity, d) == ring.qnum(3)
    with pytest.raises(tensor.ShapeError):
        qstruct.qtrace(tensor.TensorOp.identity(3, 2, tensor.LAURENT), d)


def test_chain():
    """
    arrange: build R̂ for N=3.
    act: build the chains of length 0 and 2.
    assert: length 0 is the identity and length 2 is R̂_1R̂_2.
    """
    rhat = qstruct.build_rhat(3)
    assert qstruct.chain(rhat.op, 0, 3) == tensor.TensorOp.identity(3, 3, tensor.LAURENT)
    assert qstruct.chain(rhat.op, 2, 3) == rhat.at(1, 3) @ rhat.at(2, 3)


def test_hecke_projector_is_idempotent():
    """
    arrange: build R̂ for N=2.
    act: square the q-symmetric projector.
    assert: it is idempotent.
    """
    projector = qstruct.hecke_projector(qstruct.build_rhat(2))
    assert projector @ projector == projector


def test_specialize():
    """
    arrange: build ε_q for N=2.
    act: specialize at q = 3/5.
    assert: coefficients become exact rationals.
    """
    eps = qstruct.specialize(qstruct.build_eps(2).v, Fraction(3, 5))
    assert eps.ring is tensor.RATIONAL
    assert eps.entry((2, 1)) == Fraction(-3, 5)
