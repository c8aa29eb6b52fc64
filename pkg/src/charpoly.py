# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

"""Central elements and characteristic identities of the reflection equation algebra.

The CharacteristicEngine computes, for one N, the elements

 - s_q(i) = q^{1-N} Tr_q L^i (trace-like),
 - σ_q(i) = α_i ε_q (L_1 R̂_1 ... R̂_{i-1})^i ε_q (determinant-like),

and verifies the identities tying them together as exact equalities of normal forms: the
quantum Newton relations, the two forms of the characteristic polynomial Δ(x), the B-matrix
relation (L - x)B(L, x)ε_q = ε_q Δ(x), the Cayley-Hamilton identity Δ(L) = 0, the inverse
formula, and the recurrence for higher traces.

Boundary conventions: σ_q(0) = 1 and s_q(0) = q^{1-N} N_q. Polynomials in the scalar variable x
are lists of coefficients indexed by the power of x.
"""

import enum
import functools
import logging
from collections.abc import Callable, Iterable, Sequence

import pydantic

import certificate
import qstruct
import rea
import ring
import tensor
from rea import NCPoly
from ring import RatFunc
from tensor import CoTensor, TensorOp

logger = logging.getLogger(__name__)

BETA = ring.qpow(2)


class CentralityError(Exception):
    """A computed element fails to commute with some generator."""


class IdentityError(Exception):
    """An identity that must hold by construction has a nonzero residual."""


class ElementKind(enum.StrEnum):
    """Kinds of central elements."""

    S = "s"
    SIGMA = "sigma"
    DET = "det"


class CentralElement(pydantic.BaseModel):
    """A central element in normal form.

    Attributes:
        kind: s, sigma or det.
        index: The index i of s_q(i) or σ_q(i); N for the determinant.
        value: Normal form.
    """

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: ElementKind
    index: int = pydantic.Field(ge=0)
    value: NCPoly


class CharPoly(pydantic.BaseModel):
    """Δ(x) = sum_i c_i x^i with c_i = (-1)^i σ_q(N-i).

    Attributes:
        coefficients: c_0, ..., c_N.
    """

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coefficients: tuple[NCPoly, ...]

    @pydantic.model_validator(mode="after")
    def _validate_leading(self) -> "CharPoly":
        n = len(self.coefficients) - 1
        if n < 1 or self.coefficients[-1] != NCPoly.scalar((-1) ** n):
            raise ValueError("the leading coefficient of Δ(x) must be (-1)^N")
        return self

    @property
    def degree(self) -> int:
        """N."""
        return len(self.coefficients) - 1


class AlphaTable(pydantic.BaseModel):
    """Normalizing constants α_1, ..., α_N of σ_q.

    Attributes:
        n: Dimension N.
        alphas: α_1, ..., α_N.
    """

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = pydantic.Field(ge=1)
    alphas: tuple[RatFunc, ...]

    def alpha(self, i: int) -> RatFunc:
        """α_i for 1 <= i <= N."""
        if not 1 <= i <= self.n:
            raise ValueError(f"α index {i} outside 1..{self.n}")
        return self.alphas[i - 1]


def alpha_closed_form(n: int, i: int) -> RatFunc:
    """α_i = qbinom(N, i) q^{-i(N-i)} / |ε_q|²."""
    return ring.qbinom(n, i) * ring.qpow(-i * (n - i)) / qstruct.eps_norm_expected(n)


def alpha_residuals(table: AlphaTable) -> list[RatFunc]:
    """Anchor residual followed by one recursion residual per p = 2..N."""
    n = table.n
    expected = RatFunc(ring.qpow(1 - n) * ring.qnum(n), qstruct.eps_norm_expected(n))
    anchor = table.alpha(1) - expected
    recursion = [
        table.alpha(p)
        - ring.qpow(2 * p - 1 - n)
        * RatFunc(ring.qnum(n - p + 1), ring.qnum(p))
        * table.alpha(p - 1)
        for p in range(2, n + 1)
    ]
    return [anchor, *recursion]


def alpha_table(n: int) -> AlphaTable:
    """Closed-form α table, checked against its recursion and anchor.

    Raises:
        IdentityError: If the recursion or the anchor fails.
    """
    table = AlphaTable(n=n, alphas=tuple(alpha_closed_form(n, i) for i in range(1, n + 1)))
    if any(alpha_residuals(table)):
        raise IdentityError(f"α closed form violates its recursion for N={n}")
    return table


def sigma_contraction(
    ops: Sequence[TensorOp],
    gram: TensorOp,
    reduce: Callable[[CoTensor], CoTensor] | None = None,
) -> tensor.Coeff:
    """sum_{A,B} G^{A,B} (ops[0] ops[1] ... ops[-1])^A_B, evaluated row by row.

    Args:
        ops: Operators on the open legs of the Gram tensor, multiplied left to right.
        gram: Scalar Gram tensor from partial_pairing.
        reduce: Optional normalization of the running row vector.

    Returns:
        The contraction.
    """
    first = ops[0]
    target = functools.reduce(tensor.promote, (op.ring for op in ops), gram.ring)
    rows: dict[int, list[tuple[int, tensor.Coeff]]] = {}
    for (row, col), weight in gram.entries.items():
        rows.setdefault(row, []).append((col, weight))
    terms = []
    for row, weights in sorted(rows.items()):
        v = CoTensor(first.dim, first.legs, first.ring, {row: first.ring.one})
        for op in ops:
            v = tensor.contract_left(v, op)
            if reduce is not None:
                v = reduce(v)
        terms.extend(weight * v.entries[col] for col, weight in weights if col in v.entries)
    return target.sum(terms)


def sigma_formula(
    l_matrix: TensorOp,
    braiding: TensorOp,
    eps: CoTensor,
    alpha: tensor.Coeff,
    i: int,
    reduce: Callable[[CoTensor], CoTensor] | None = None,
) -> tensor.Coeff:
    """α_i ε (L_1 R̂_1 ... R̂_{i-1})^i ε over any coefficient ring.

    Args:
        l_matrix: One-leg matrix L (generators, or a commuting substitution).
        braiding: R̂ or a specialization of it.
        eps: The rank-N tensor ε.
        alpha: α_i in the ring of the result.
        i: Index, 1 <= i <= N.
        reduce: Optional normalization of intermediate row vectors.

    Returns:
        σ(i) before normal form.
    """
    n = l_matrix.dim
    m = tensor.embed(l_matrix, 1, i) @ qstruct.chain(braiding, i - 1, i)
    gram = tensor.partial_pairing(eps, eps, range(i + 1, n + 1))
    return alpha * sigma_contraction([m] * i, gram, reduce)


def symmetrize(x: TensorOp, braiding: TensorOp, n: int) -> TensorOp:
    """S_N(X) = sum_{k=0}^{N-1} (R̂_k ... R̂_1) X_1 (R̂_1 ... R̂_k) on N legs.

    Args:
        x: One-leg operator (NC matrix or scalar).
        braiding: R̂.
        n: Number of legs.
    """
    x1 = tensor.embed(x, 1, n)
    terms = [x1]
    for k in range(1, n):
        right = qstruct.chain(braiding, k, n)
        left = tensor.product(tensor.embed(braiding, j, n) for j in range(k, 0, -1))
        terms.append(left @ x1 @ right)
    return functools.reduce(lambda a, b: a + b, terms)


def _xpoly_nf(values: Iterable[CoTensor], system: rea.RewriteSystem) -> list[CoTensor]:
    return [v.map(system.normal_form, rea.NCPOLY) for v in values]


class CharacteristicEngine:
    """Central elements and identities of the reflection equation algebra for one N."""

    def __init__(self, n: int, check_centrality: bool = True):
        """Build the structure constants, the rewrite system and the α table.

        Args:
            n: Dimension N, at least 1.
            check_centrality: Whether s_q(i) and σ_q(i) for i <= N are tested for centrality.
        """
        if n < 1:
            raise ValueError(f"N must be at least 1, got {n}")
        self.n = n
        self.check_centrality = check_centrality
        self.rhat = qstruct.build_rhat(n)
        self.eps = qstruct.build_eps(n, self.rhat)
        self.d = qstruct.build_d(n)
        self.alphas = alpha_table(n)
        self.relations = rea.derive_relations(self.rhat)
        self.system = rea.build_rewrite_system(self.relations, n)
        self.l = rea.generator_matrix(n)
        self._powers: dict[int, TensorOp] = {
            0: TensorOp.identity(n, 1, rea.NCPOLY),
            1: self.l,
        }
        self._s: dict[int, NCPoly] = {}
        self._sigma: dict[int, NCPoly] = {}
        self._checked: set[tuple[ElementKind, int]] = set()
        self._relation_cotensors: dict[ring.LaurentPoly, list[CoTensor]] = {}

    def nf(self, p: NCPoly | tensor.Coeff) -> NCPoly:
        """Normal form."""
        return self.system.normal_form(p)

    def _nf_cotensor(self, v: CoTensor) -> CoTensor:
        return v.map(self.system.normal_form, rea.NCPOLY)

    def power(self, k: int) -> TensorOp:
        """L^k with normal-formed entries."""
        if k < 0:
            raise ValueError(f"negative matrix power: {k}")
        for j in range(max(self._powers) + 1, k + 1):
            self._powers[j] = rea.nc_mat_mul(self._powers[j - 1], self.l, self.system)
        return self._powers[k]

    def _central(self, kind: ElementKind, index: int, value: NCPoly) -> CentralElement:
        if self.check_centrality and (kind, index) not in self._checked:
            report = rea.is_central(value, self.system)
            if not report:
                raise CentralityError(
                    f"{kind}({index}) does not commute with {report.generator}: {report.residual}"
                )
            self._checked.add((kind, index))
        return CentralElement(kind=kind, index=index, value=value)

    def s_q(self, i: int) -> CentralElement:
        """s_q(i) = q^{1-N} Tr_q L^i; centrality is asserted for i <= N.

        Raises:
            ValueError: If i is negative.
            CentralityError: If s_q(i) is not central.
        """
        if i < 0:
            raise ValueError(f"s_q index must be nonnegative, got {i}")
        if i not in self._s:
            if i == 0:
                value = NCPoly.scalar(ring.qpow(1 - self.n) * ring.qnum(self.n))
            else:
                value = self.nf(ring.qpow(1 - self.n) * qstruct.qtrace(self.power(i), self.d))
            self._s[i] = value
            logger.debug("s_q(%d) for N=%d has %d terms", i, self.n, len(value.terms))
        if i > self.n:
            return CentralElement(kind=ElementKind.S, index=i, value=self._s[i])
        return self._central(ElementKind.S, i, self._s[i])

    def sigma_q(self, i: int) -> CentralElement:
        """σ_q(i) for 0 <= i <= N, with σ_q(0) = 1.

        Raises:
            ValueError: If i is out of range.
            CentralityError: If σ_q(i) is not central.
        """
        if not 0 <= i <= self.n:
            raise ValueError(f"σ_q index {i} outside 0..{self.n}")
        if i not in self._sigma:
            if i == 0:
                value = NCPoly.one()
            else:
                value = self.nf(
                    sigma_formula(
                        self.l,
                        self.rhat.op,
                        self.eps.v,
                        self.alphas.alpha(i),
                        i,
                        self._nf_cotensor,
                    )
                )
            self._sigma[i] = value
            logger.debug("σ_q(%d) for N=%d has %d terms", i, self.n, len(value.terms))
        return self._central(ElementKind.SIGMA, i, self._sigma[i])

    def det_l(self) -> CentralElement:
        """Det L = q^{1-N} σ_q(N)."""
        value = self.nf(self.sigma_q(self.n).value * ring.qpow(1 - self.n))
        return self._central(ElementKind.DET, self.n, value)

    def newton_residual(self, i: int, sigma_first: bool = False) -> NCPoly:
        """(i_q/q^{i-1}) σ_q(i) + sum_{p=1}^{i-1} (-1)^p s_q(p) σ_q(i-p) + (-1)^i s_q(i).

        Args:
            i: 1 <= i <= N.
            sigma_first: Multiply σ_q(i-p) s_q(p) instead of s_q(p) σ_q(i-p).

        Returns:
            The normal form of the residual.
        """
        if not 1 <= i <= self.n:
            raise ValueError(f"Newton index {i} outside 1..{self.n}")
        terms = [RatFunc(ring.qnum(i), ring.qpow(i - 1)) * self.sigma_q(i).value]
        for p in range(1, i):
            s, sigma = self.s_q(p).value, self.sigma_q(i - p).value
            terms.append((sigma * s if sigma_first else s * sigma) * (-1) ** p)
        terms.append(self.s_q(i).value * (-1) ** i)
        return self.nf(NCPoly.sum(terms))

    def _sandwich(self, power: int, chain_length: int, repeats: int) -> NCPoly:
        """ε (L^power C)(L C)^repeats ε on chain_length+1 legs, C = R̂_1...R̂_chain_length."""
        legs = chain_length + 1
        chain = qstruct.chain(self.rhat.op, chain_length, legs)
        first = tensor.embed(self.power(power), 1, legs) @ chain
        step = tensor.embed(self.l, 1, legs) @ chain
        gram = tensor.partial_pairing(self.eps.v, self.eps.v, range(legs + 1, self.n + 1))
        return sigma_contraction([first] + [step] * repeats, gram, self._nf_cotensor)

    def telescoping_residual(self, i: int, p: int) -> NCPoly:
        """Residual of the term-by-term splitting of s_q(i-p) σ_q(p), 1 <= p <= i-1 < N.

        With C_k = R̂_1...R̂_k:

            s_q(i-p)σ_q(p) = α_p (p_q/q^{p-1}) ε(L^{i-p+1}C_{p-1})(LC_{p-1})^{p-1}ε
                + α_p ((N-p)_q/q^{N-p-1}) ε(L^{i-p}C_p)(LC_p)^p ε
        """
        if not (1 <= p < i <= self.n):
            raise ValueError(f"telescoping needs 1 <= p < i <= N, got i={i}, p={p}")
        n = self.n
        alpha = self.alphas.alpha(p)
        first = alpha * RatFunc(ring.qnum(p), ring.qpow(p - 1)) * self._sandwich(
            i - p + 1, p - 1, p - 1
        )
        second = alpha * RatFunc(ring.qnum(n - p), ring.qpow(n - p - 1)) * self._sandwich(
            i - p, p, p
        )
        lhs = self.s_q(i - p).value * self.sigma_q(p).value
        return self.nf(lhs - first - second)

    def charpoly(self) -> CharPoly:
        """Δ(x) = sum_i (-x)^i σ_q(N-i)."""
        return CharPoly(
            coefficients=tuple(
                self.sigma_q(self.n - k).value * (-1) ** k for k in range(self.n + 1)
            )
        )

    def build_b(self, beta: ring.LaurentPoly = BETA) -> list[TensorOp]:
        """B(L, x) = R̂_1...R̂_{N-1} prod_{i=1}^{N-1} [(L_1 - β^i x) R̂_1...R̂_{N-1}].

        Args:
            beta: The shift; q² gives the B-matrix relation.

        Returns:
            Operators on N legs, the coefficients of x^0, x^1, ..., x^{N-1}.
        """
        n = self.n
        chain = qstruct.chain(self.rhat.op, n - 1, n).map(NCPoly.coerce, rea.NCPOLY)
        l1 = tensor.embed(self.l, 1, n)
        result = [chain]
        for i in range(1, n):
            shifted = [TensorOp.zero(n, n, rea.NCPOLY)] * (len(result) + 1)
            for k, coeff in enumerate(result):
                shifted[k] = shifted[k] + tensor.compose(coeff, l1, self.nf)
                shifted[k + 1] = shifted[k + 1] - coeff * beta**i
            result = [tensor.compose(op, chain, self.nf) for op in shifted]
        return result

    def relation_cotensors(self, beta: ring.LaurentPoly = BETA) -> list[CoTensor]:
        """(L_1 - x) B(L, x) ε_q, coefficient-wise in x."""
        if beta not in self._relation_cotensors:
            b_eps = [tensor.contract_right(op, self.eps.v) for op in self.build_b(beta)]
            l1 = tensor.embed(self.l, 1, self.n)
            result = [CoTensor(self.n, self.n, rea.NCPOLY) for _ in range(len(b_eps) + 1)]
            for k, v in enumerate(b_eps):
                result[k] = result[k] + tensor.contract_right(l1, v)
                result[k + 1] = result[k + 1] - v
            self._relation_cotensors[beta] = _xpoly_nf(result, self.system)
        return self._relation_cotensors[beta]

    def b_relation_residual(self, beta: ring.LaurentPoly = BETA) -> list[CoTensor]:
        """(L - x)B(L, x)ε_q - ε_q Δ(x), one cotensor per power of x."""
        coefficients = self.charpoly().coefficients
        return _xpoly_nf(
            (
                w - self.eps.v * c
                for w, c in zip(self.relation_cotensors(beta), coefficients, strict=True)
            ),
            self.system,
        )

    def product_form(self) -> list[NCPoly]:
        """(1/|ε_q|²) ε_q prod_{i=0}^{N-1} [(L - q^{2i}x) R̂_1...R̂_{N-1}] ε_q."""
        norm = RatFunc(1, self.eps.norm)
        return [
            self.nf(norm * tensor.full_pairing(self.eps.v, w))
            for w in self.relation_cotensors(BETA)
        ]

    def charpoly_residuals(self) -> list[NCPoly]:
        """Coefficient-wise difference of the product form and sum_i (-x)^i σ_q(N-i)."""
        return [
            self.nf(a - b)
            for a, b in zip(self.product_form(), self.charpoly().coefficients, strict=True)
        ]

    def cayley_hamilton_residual(self, sigma_first: bool = False) -> TensorOp:
        """sum_{i=0}^{N} (-1)^i L^i σ_q(N-i), entrywise normal form.

        Args:
            sigma_first: Multiply σ_q(N-i) L^i instead of L^i σ_q(N-i).
        """
        terms = []
        for i in range(self.n + 1):
            sigma = self.sigma_q(self.n - i).value * (-1) ** i
            terms.append(sigma * self.power(i) if sigma_first else self.power(i) * sigma)
        total = functools.reduce(lambda a, b: a + b, terms)
        return rea.normal_form_matrix(total, self.system)

    def adjugate(self) -> TensorOp:
        """sum_{i=0}^{N-1} (-1)^i L^i σ_q(N-i-1)."""
        terms = [
            self.power(i) * (self.sigma_q(self.n - i - 1).value * (-1) ** i)
            for i in range(self.n)
        ]
        return rea.normal_form_matrix(functools.reduce(lambda a, b: a + b, terms), self.system)

    def inverse_residuals(self) -> tuple[TensorOp, TensorOp]:
        """L·adj - σ_q(N)·1 and adj·L - σ_q(N)·1."""
        adj = self.adjugate()
        det = TensorOp.identity(self.n, 1, rea.NCPOLY) * self.sigma_q(self.n).value
        return (
            rea.nc_mat_mul(self.l, adj, self.system) - det,
            rea.nc_mat_mul(adj, self.l, self.system) - det,
        )

    def inverse_check(self) -> certificate.Certificate:
        """Certificate for L·adj = adj·L = σ_q(N)·1."""
        stopwatch = certificate.Stopwatch()
        left, right = self.inverse_residuals()
        return certificate.certify(
            certificate.claim_id("inverse-formula", n=self.n),
            self.n,
            [
                rea.normal_form_matrix(left, self.system),
                rea.normal_form_matrix(right, self.system),
            ],
            stopwatch=stopwatch,
        )

    def higher_trace_residual(self, p: int) -> NCPoly:
        """s_q(N+p) - sum_{i<N} (-1)^{N+1+i} σ_q(N-i) s_q(i+p)."""
        if p < 1:
            raise ValueError(f"higher trace offset must be at least 1, got {p}")
        n = self.n
        rhs = NCPoly.sum(
            self.sigma_q(n - i).value * self.s_q(i + p).value * (-1) ** (n + 1 + i)
            for i in range(n)
        )
        return self.nf(self.s_q(n + p).value - rhs)

    def higher_trace(self, p: int) -> certificate.Certificate:
        """Certificate for the recurrence expressing s_q(N+p) through lower traces."""
        stopwatch = certificate.Stopwatch()
        return certificate.certify(
            certificate.claim_id("higher-trace", p=p, n=self.n),
            self.n,
            self.higher_trace_residual(p),
            {"p": p},
            stopwatch,
        )

    def symmetrizer_commutation_residuals(self) -> list[TensorOp]:
        """[S_N(L), R̂_i] for i = 1..N-1, entrywise normal form."""
        s = symmetrize(self.l, self.rhat.op, self.n)
        return [
            rea.normal_form_matrix(s @ braid - braid @ s, self.system)
            for braid in (self.rhat.at(i, self.n) for i in range(1, self.n))
        ]

    def symmetrizer_trace_residual(self, i: int) -> CoTensor:
        """ε_q S_N(L^i) - s_q(i) ε_q."""
        s = symmetrize(self.power(i), self.rhat.op, self.n)
        lhs = tensor.contract_left(self.eps.v, s)
        return self._nf_cotensor(lhs - self.s_q(i).value * self.eps.v)
