# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

"""GL_q(N) structure constants: the braiding R̂, the q-antisymmetric tensor ε_q and the
q-trace weights D.

Conventions (checked at construction, never assumed):
 - R̂ entries: R̂^{ii}_{ii} = q, R̂^{ji}_{ij} = 1 for i != j, R̂^{ij}_{ij} = λ for i < j,
   with λ = q - 1/q. R̂ satisfies the braid relation and the Hecke condition
   R̂² = 1 + λR̂.
 - ε_q at a permutation σ of 1..N equals (-q)^{inv(σ)} and vanishes on repeated indices.
   Every R̂_i acts on ε_q as -1/q from both contraction sides, and the self-pairing of ε_q is
   q^{N(N-1)/2} N_q!.
 - D = diag(q^{1-N}, q^{3-N}, ..., q^{N-1}), so Tr_q(1) = N_q and Tr_q over the second leg of
   R̂ is q^N times the identity.
"""

import itertools
import logging

import pydantic

import ring
import tensor
from ring import LAMBDA, LaurentPoly
from tensor import CoTensor, TensorOp

logger = logging.getLogger(__name__)

# solve_eps eliminates over N^N unknowns; beyond this the cross-check is skipped.
_SOLVE_EPS_MAX_N = 4


class ConventionError(Exception):
    """A structure-constant axiom failed at construction."""


class RHat(pydantic.BaseModel):
    """The GL_q(N) braiding on two legs.

    Attributes:
        n: Dimension of each leg.
        op: Operator on 2 legs with Laurent coefficients.
    """

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = pydantic.Field(ge=1)
    op: TensorOp

    def at(self, i: int, total: int) -> TensorOp:
        """R̂_i, acting on legs i and i+1 of a `total`-leg space."""
        return tensor.embed(self.op, i, total)

    def inverse(self) -> TensorOp:
        """R̂^{-1} = R̂ - λ·1."""
        return self.op - tensor.TensorOp.identity(self.n, 2, tensor.LAURENT) * LAMBDA


class EpsilonTensor(pydantic.BaseModel):
    """The q-antisymmetric rank-N tensor ε_q, normalized to 1 at (1, ..., N).

    Attributes:
        n: Dimension and rank.
        v: The cotensor.
    """

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = pydantic.Field(ge=1)
    v: CoTensor

    @property
    def norm(self) -> LaurentPoly:
        """Self-pairing of ε_q."""
        return tensor.full_pairing(self.v, self.v)


class DMatrix(pydantic.BaseModel):
    """Diagonal q-trace weights.

    Attributes:
        n: Dimension.
        diagonal: D_1, ..., D_N.
    """

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = pydantic.Field(ge=1)
    diagonal: tuple[LaurentPoly, ...]

    @pydantic.model_validator(mode="after")
    def _validate_diagonal(self) -> "DMatrix":
        expected = tuple(ring.qpow(2 * a - self.n - 1) for a in range(1, self.n + 1))
        if self.diagonal != expected:
            raise ValueError(f"D entries must be q^(2a-N-1), got {self.diagonal}")
        return self

    @property
    def op(self) -> TensorOp:
        """D as a one-leg operator."""
        return TensorOp(
            self.n, 1, tensor.LAURENT, {(a, a): d for a, d in enumerate(self.diagonal)}
        )


def _rhat_op(n: int) -> TensorOp:
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], LaurentPoly] = {}
    for i in range(1, n + 1):
        entries[((i, i), (i, i))] = ring.Q
        for j in range(1, n + 1):
            if i != j:
                entries[((j, i), (i, j))] = ring.ONE
            if i < j:
                entries[((i, j), (i, j))] = LAMBDA
    return TensorOp.from_indices(n, 2, tensor.LAURENT, entries)


def yang_baxter_residual(rhat: RHat) -> TensorOp:
    """R̂_1R̂_2R̂_1 - R̂_2R̂_1R̂_2 on three legs."""
    r1, r2 = rhat.at(1, 3), rhat.at(2, 3)
    return tensor.product([r1, r2, r1]) - tensor.product([r2, r1, r2])


def hecke_residual(rhat: RHat) -> TensorOp:
    """R̂² - λR̂ - 1."""
    identity = TensorOp.identity(rhat.n, 2, tensor.LAURENT)
    return rhat.op @ rhat.op - rhat.op * LAMBDA - identity


def eps_left_residuals(rhat: RHat, eps: EpsilonTensor) -> list[CoTensor]:
    """ε_q R̂_i + q^{-1} ε_q for i = 1..N-1."""
    return [
        tensor.contract_left(eps.v, rhat.at(i, rhat.n)) + eps.v * ring.Q_INV
        for i in range(1, rhat.n)
    ]


def eps_right_residuals(rhat: RHat, eps: EpsilonTensor) -> list[CoTensor]:
    """R̂_i ε_q + q^{-1} ε_q for i = 1..N-1."""
    return [
        tensor.contract_right(rhat.at(i, rhat.n), eps.v) + eps.v * ring.Q_INV
        for i in range(1, rhat.n)
    ]


def eps_norm_expected(n: int) -> LaurentPoly:
    """q^{N(N-1)/2} N_q!."""
    return ring.qfact(n).shift(n * (n - 1) // 2)


def eps_norm_residual(eps: EpsilonTensor) -> LaurentPoly:
    """|ε_q|² - q^{N(N-1)/2} N_q!."""
    return eps.norm - eps_norm_expected(eps.n)


def qtrace_rhat_residual(rhat: RHat, d: DMatrix) -> TensorOp:
    """Tr_q over the second leg of R̂, minus q^N times the identity."""
    traced = qtrace_leg(rhat.op, 2, d)
    return traced - TensorOp.identity(rhat.n, 1, tensor.LAURENT) * ring.qpow(rhat.n)


def build_rhat(n: int) -> RHat:
    """Construct R̂ and verify its axioms.

    Args:
        n: Dimension, at least 1.

    Returns:
        The braiding.

    Raises:
        ConventionError: If the braid relation, the Hecke condition or the two-sided ε_q
            eigenrelation fails.
    """
    rhat = RHat(n=n, op=_rhat_op(n))
    if not hecke_residual(rhat).is_zero:
        raise ConventionError(f"Hecke condition fails for N={n}")
    if n >= 2 and not yang_baxter_residual(rhat).is_zero:
        raise ConventionError(f"braid relation fails for N={n}")
    eps = EpsilonTensor(n=n, v=_eps_closed_form(n))
    for side, residuals in (
        ("left", eps_left_residuals(rhat, eps)),
        ("right", eps_right_residuals(rhat, eps)),
    ):
        for i, residual in enumerate(residuals, start=1):
            if not residual.is_zero:
                raise ConventionError(f"ε_q is not a -1/q eigenvector of R̂_{i} on the {side}")
    logger.debug("built R̂ for N=%d with %d entries", n, len(rhat.op.entries))
    return rhat


def inversions(perm: tuple[int, ...]) -> int:
    """Inversion count of a sequence."""
    return sum(1 for a, b in itertools.combinations(perm, 2) if a > b)


def _eps_closed_form(n: int) -> CoTensor:
    return CoTensor.from_indices(
        n,
        n,
        tensor.LAURENT,
        {
            perm: LaurentPoly.monomial(inversions(perm), (-1) ** inversions(perm))
            for perm in itertools.permutations(range(1, n + 1))
        },
    )


def build_eps(n: int, rhat: RHat | None = None) -> EpsilonTensor:
    """Closed-form ε_q, cross-checked against the kernel computed by solve_eps.

    Args:
        n: Dimension, at least 1.
        rhat: The braiding, built when omitted.

    Returns:
        The q-antisymmetric tensor.

    Raises:
        ConventionError: If the closed form disagrees with the kernel.
    """
    eps = EpsilonTensor(n=n, v=_eps_closed_form(n))
    if n <= _SOLVE_EPS_MAX_N:
        solved = solve_eps(n, rhat)
        if solved.v != eps.v.map(ring.RatFunc.coerce, tensor.RATFUNC):
            raise ConventionError(f"closed-form ε_q disagrees with the solved kernel for N={n}")
    return eps


def solve_eps(n: int, rhat: RHat | None = None) -> EpsilonTensor:
    """Joint kernel of the R̂_i + 1/q acting on rank-N cotensors, by exact elimination.

    Args:
        n: Dimension, at least 1.
        rhat: The braiding, built when omitted.

    Returns:
        The kernel vector normalized to 1 at (1, ..., N), with RatFunc coefficients.

    Raises:
        ConventionError: If the kernel is not one-dimensional.
    """
    basis = _eps_system(n, rhat or build_rhat(n))
    free = [k for k in range(n**n) if k not in basis]
    if len(free) != 1:
        raise ConventionError(f"ε_q kernel has dimension {len(free)} for N={n}, expected 1")
    (free_key,) = free
    solution = {free_key: ring.RatFunc(1)}
    for pivot, row in basis.items():
        value = -row.get(free_key, ring.RatFunc(0))
        if value:
            solution[pivot] = value
    anchor = solution.get(tensor.encode(tuple(range(1, n + 1)), n))
    if not anchor:
        raise ConventionError("ε_q kernel vanishes at (1, ..., N)")
    logger.debug("solved ε_q kernel for N=%d: %d nonzero entries", n, len(solution))
    return EpsilonTensor(
        n=n,
        v=CoTensor(n, n, tensor.RATFUNC, {k: v / anchor for k, v in solution.items()}),
    )


def _eps_system(n: int, rhat: RHat) -> dict[int, dict[int, ring.RatFunc]]:
    """Reduced equations sum_I ε_I (R̂_i + 1/q)^I_J = 0, one per (i, J)."""
    rows: list[dict[int, LaurentPoly]] = []
    for i in range(1, n):
        shifted = rhat.at(i, n) + TensorOp.identity(n, n, tensor.LAURENT) * ring.Q_INV
        columns: dict[int, dict[int, LaurentPoly]] = {}
        for (row, col), value in shifted.entries.items():
            columns.setdefault(col, {})[row] = value
        rows.extend(columns.values())
    return ring.row_reduce(rows, key=lambda k: k)


def kernel_dimension(n: int, rhat: RHat | None = None) -> int:
    """Dimension of the joint kernel of the R̂_i + 1/q on rank-N cotensors."""
    return n**n - len(_eps_system(n, rhat or build_rhat(n)))


def build_d(n: int) -> DMatrix:
    """The q-trace weights for dimension n."""
    return DMatrix(n=n, diagonal=tuple(ring.qpow(2 * a - n - 1) for a in range(1, n + 1)))


def qtrace(x: TensorOp, d: DMatrix) -> tensor.Coeff:
    """Tr_q X = sum_i D_i X^i_i for a one-leg operator over any ring.

    Raises:
        tensor.ShapeError: If X is not a one-leg operator of dimension N.
    """
    if x.legs != 1 or x.dim != d.n:
        raise tensor.ShapeError(f"q-trace needs a one-leg operator of dimension {d.n}")
    target = tensor.promote(x.ring, tensor.LAURENT)
    return target.sum(
        d.diagonal[a] * x.entries[(a, a)] for a in range(d.n) if (a, a) in x.entries
    )


def qtrace_leg(x: TensorOp, leg: int, d: DMatrix) -> TensorOp:
    """Contract D into leg `leg` of X, leaving an operator on the remaining legs.

    Raises:
        tensor.ShapeError: If the leg is out of range.
    """
    if not 1 <= leg <= x.legs or x.dim != d.n:
        raise tensor.ShapeError(f"cannot take the q-trace over leg {leg} of {x!r}")
    target = tensor.promote(x.ring, tensor.LAURENT)
    products: dict[tuple[int, int], list[tensor.Coeff]] = {}
    for (row, col), value in x.entries.items():
        r, c = tensor.decode(row, x.dim, x.legs), tensor.decode(col, x.dim, x.legs)
        if r[leg - 1] != c[leg - 1]:
            continue
        key = (
            tensor.encode(r[: leg - 1] + r[leg:], x.dim),
            tensor.encode(c[: leg - 1] + c[leg:], x.dim),
        )
        products.setdefault(key, []).append(d.diagonal[r[leg - 1] - 1] * value)
    entries = {k: target.sum(v) for k, v in products.items()}
    return TensorOp(x.dim, x.legs - 1, target, entries)


def chain(braiding: TensorOp, p: int, total: int) -> TensorOp:
    """R̂_1 R̂_2 ... R̂_p on `total` legs; the identity when p = 0.

    Args:
        braiding: Two-leg operator, R̂ or a specialization of it.
        p: Number of factors.
        total: Number of legs of the result.
    """
    if p == 0:
        return TensorOp.identity(braiding.dim, total, braiding.ring)
    return tensor.product(tensor.embed(braiding, i, total) for i in range(1, p + 1))


def hecke_projector(rhat: RHat) -> TensorOp:
    """The q-symmetric projector P_+ = (R̂ + 1/q)/2_q."""
    shifted = rhat.op + TensorOp.identity(rhat.n, 2, tensor.LAURENT) * ring.Q_INV
    return shifted.map(lambda v: ring.RatFunc(v, ring.qnum(2)), tensor.RATFUNC)


def specialize(op: TensorOp | CoTensor, q0: ring.Rational) -> TensorOp | CoTensor:
    """Evaluate every coefficient at a rational q0.

    Raises:
        ring.ZeroDenominatorError: If a denominator vanishes at q0.
    """
    return op.map(lambda v: ring.eval_at(v, q0), tensor.RATIONAL)
