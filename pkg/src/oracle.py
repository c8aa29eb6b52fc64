# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

"""Independent numeric verification at exact rational q.

Identities proved symbolically are re-checked in explicit finite-dimensional representations
of the reflection equation algebra, with exact sympy rationals throughout. The classical check
specializes to q = 1 and compares the engine against textbook formulas for a random rational
matrix.
"""

import enum
import fractions
import functools
import itertools
import logging
import math
import operator
import random
import typing

import pydantic
import sympy
from sympy.physics.quantum import TensorProduct

import certificate
import charpoly
import qstruct
import rea
import ring
import tensor
from rea import Generator, NCPoly

logger = logging.getLogger(__name__)

Q_SAMPLES = (fractions.Fraction(3, 5), fractions.Fraction(7, 2))
# bound on numerators and denominators of random classical matrices
ENTRY_BOUND = 10


class RepresentationError(ValueError):
    """No candidate matrix assignment satisfies the reflection equation."""


class Check(enum.StrEnum):
    """Identities evaluated in a representation."""

    REFLECTION = "reflection"
    NEWTON = "newton"
    CAYLEY = "cayley"
    INVERSE = "inverse"
    ALL = "all"


@functools.cache
def _structure(n: int) -> tuple[qstruct.RHat, qstruct.EpsilonTensor]:
    rhat = qstruct.build_rhat(n)
    return rhat, qstruct.build_eps(n, rhat)


def _rational(value: fractions.Fraction | int) -> sympy.Rational:
    value = fractions.Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _matrix_text(m: sympy.Matrix) -> str:
    return "" if m.is_zero_matrix else str(m.tolist())


def rhat_matrix(n: int, qval: fractions.Fraction) -> sympy.Matrix:
    """R̂ at q = qval as an N² × N² matrix, rows ordered like tensor keys."""
    return _rhat_matrix(n, fractions.Fraction(qval)).copy()


@functools.cache
def _rhat_matrix(n: int, qval: fractions.Fraction) -> sympy.Matrix:
    op = qstruct.specialize(_structure(n)[0].op, qval)
    m = sympy.zeros(n * n, n * n)
    for (row, col), value in op.entries.items():
        m[row, col] = _rational(value)
    return m


def reflection_residual(
    n: int, d: int, images: typing.Mapping[Generator, sympy.Matrix], qval: fractions.Fraction
) -> sympy.Matrix:
    """L_1R̂L_1R̂ - R̂L_1R̂L_1 on V ⊗ V ⊗ W, with W the d-dimensional carrier."""
    r = TensorProduct(rhat_matrix(n, qval), sympy.eye(d))
    l1 = sympy.zeros(n * n * d, n * n * d)
    for g, image in images.items():
        unit = sympy.zeros(n, n)
        unit[g.row - 1, g.col - 1] = 1
        l1 += TensorProduct(unit, sympy.eye(n), image)
    return l1 * r * l1 * r - r * l1 * r * l1


class Representation(pydantic.BaseModel):
    """Matrices satisfying the reflection equation at q = qval.

    Attributes:
        n: Dimension N.
        d: Carrier dimension.
        qval: The rational value of q.
        images: Image of every generator, a d × d matrix.
        name: Short name used in claim ids.
        placement: How the images were chosen.
    """

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = pydantic.Field(ge=1)
    d: int = pydantic.Field(ge=1)
    qval: fractions.Fraction
    images: dict[Generator, typing.Any]
    name: str
    placement: str

    @pydantic.model_validator(mode="after")
    def _validate_reflection(self) -> "Representation":
        if self.qval == 0:
            raise ValueError("q cannot be specialized to 0")
        if set(self.images) != set(rea.generators(self.n)):
            raise ValueError("every generator needs an image")
        if any(m.shape != (self.d, self.d) for m in self.images.values()):
            raise ValueError(f"images must be {self.d} × {self.d} matrices")
        residual = reflection_residual(self.n, self.d, self.images, self.qval)
        if not residual.is_zero_matrix:
            raise ValueError(f"images violate the reflection equation ({self.placement})")
        return self

    def block(self) -> sympy.Matrix:
        """The Nd × Nd block matrix with blocks images[l_a_b]."""
        return sympy.Matrix.vstack(
            *(
                sympy.Matrix.hstack(
                    *(self.images[Generator(a, b)] for b in range(1, self.n + 1))
                )
                for a in range(1, self.n + 1)
            )
        )

    def evaluate(self, p: NCPoly) -> sympy.Matrix:
        """Image of a polynomial.

        Raises:
            ring.ZeroDenominatorError: If a coefficient is singular at qval.
        """
        result = sympy.zeros(self.d, self.d)
        for word, c in p.terms.items():
            product = sympy.eye(self.d)
            for g in word:
                product = product * self.images[g]
            result += _rational(ring.eval_at(c, self.qval)) * product
        return result


def rep_identity(n: int, qval: fractions.Fraction) -> Representation:
    """l^i_j ↦ δ^i_j on a one-dimensional carrier."""
    return Representation(
        n=n,
        d=1,
        qval=fractions.Fraction(qval),
        images={g: sympy.Matrix([[1 if g.row == g.col else 0]]) for g in rea.generators(n)},
        name="identity",
        placement="l^i_j = delta^i_j",
    )


def _rsquared_candidates(n: int, qval: fractions.Fraction) -> list[tuple[str, dict]]:
    r = rhat_matrix(n, qval)
    r2 = r * r

    def key(a: int, b: int) -> int:
        return (a - 1) * n + (b - 1)

    first = {
        g: sympy.Matrix(n, n, lambda c, d: r2[key(c + 1, g.row), key(d + 1, g.col)])
        for g in rea.generators(n)
    }
    second = {
        g: sympy.Matrix(n, n, lambda c, d: r2[key(g.row, c + 1), key(g.col, d + 1)])
        for g in rea.generators(n)
    }
    return [("(L^a_b)^c_d = (R^2)^{ca}_{db}", first), ("(L^a_b)^c_d = (R^2)^{ac}_{bd}", second)]


def rep_rsquared(n: int, qval: fractions.Fraction) -> Representation:
    """The braiding squared on an auxiliary leg; candidate placements are tried in order.

    Raises:
        RepresentationError: If neither placement satisfies the reflection equation.
    """
    for placement, images in _rsquared_candidates(n, qval):
        try:
            rep = Representation(
                n=n,
                d=n,
                qval=fractions.Fraction(qval),
                images=images,
                name="rsquared",
                placement=placement,
            )
        except pydantic.ValidationError:
            logger.debug("placement %s rejected for N=%d", placement, n)
            continue
        logger.info("selected placement %s for N=%d at q=%s", placement, n, qval)
        return rep
    raise RepresentationError(f"no R̂² placement satisfies the reflection equation for N={n}")


def minimal_degree_report(rep: Representation) -> int:
    """Degree of the minimal polynomial of the block matrix of L."""
    block = rep.block()
    size = block.shape[0]
    power = sympy.eye(size)
    vectors = []
    for degree in range(size + 1):
        vectors.append(power.reshape(size * size, 1))
        if sympy.Matrix.hstack(*vectors).rank() < len(vectors):
            return degree
        power = power * block
    return size


def _newton_residuals(rep: Representation, engine: charpoly.CharacteristicEngine) -> list[str]:
    q0 = rep.qval
    s = [rep.evaluate(engine.s_q(i).value) for i in range(rep.n + 1)]
    sigma = [rep.evaluate(engine.sigma_q(i).value) for i in range(rep.n + 1)]
    texts = []
    for i in range(1, rep.n + 1):
        weight = ring.eval_at(ring.RatFunc(ring.qnum(i), ring.qpow(i - 1)), q0)
        total = _rational(weight) * sigma[i]
        for p in range(1, i):
            total += (-1) ** p * s[p] * sigma[i - p]
        total += (-1) ** i * s[i]
        texts.append(_matrix_text(total))
    return texts


def _cayley_residual(rep: Representation, engine: charpoly.CharacteristicEngine) -> sympy.Matrix:
    block = rep.block()
    total = sympy.zeros(*block.shape)
    for i in range(rep.n + 1):
        sigma = rep.evaluate(engine.sigma_q(rep.n - i).value)
        total += (-1) ** i * block**i * TensorProduct(sympy.eye(rep.n), sigma)
    return total


def _inverse_residuals(
    rep: Representation, engine: charpoly.CharacteristicEngine
) -> list[sympy.Matrix]:
    block = rep.block()
    adj = sympy.zeros(*block.shape)
    for i in range(rep.n):
        sigma = rep.evaluate(engine.sigma_q(rep.n - i - 1).value)
        adj += (-1) ** i * block**i * TensorProduct(sympy.eye(rep.n), sigma)
    det = TensorProduct(sympy.eye(rep.n), rep.evaluate(engine.sigma_q(rep.n).value))
    return [block * adj - det, adj * block - det]


def eval_identity(
    rep: Representation, check: Check, engine: charpoly.CharacteristicEngine
) -> certificate.Certificate:
    """Evaluate one identity in a representation; the residual must be exactly zero.

    Args:
        rep: A verified representation.
        check: The identity; ALL is expanded by eval_checks.
        engine: Symbolic engine for the same N.

    Returns:
        The certificate.
    """
    stopwatch = certificate.Stopwatch()
    parameters: dict[str, certificate.ParameterValue] = {
        "q": str(rep.qval),
        "rep": rep.placement,
    }
    claim = certificate.claim_id(
        f"rep-{rep.name}-{check}", n=rep.n, q=str(rep.qval).replace("/", "_")
    )
    try:
        match check:
            case Check.REFLECTION:
                residual: typing.Any = _matrix_text(
                    reflection_residual(rep.n, rep.d, rep.images, rep.qval)
                )
            case Check.NEWTON:
                residual = _newton_residuals(rep, engine)
            case Check.CAYLEY:
                residual = _matrix_text(_cayley_residual(rep, engine))
            case Check.INVERSE:
                residual = [_matrix_text(m) for m in _inverse_residuals(rep, engine)]
            case _:
                raise ValueError(f"cannot evaluate '{check}' as a single identity")
    except ring.ZeroDenominatorError as exc:
        logger.exception("evaluation of %s at q=%s failed", check, rep.qval)
        return certificate.failed(claim, rep.n, str(exc), parameters)
    return certificate.certify(claim, rep.n, residual, parameters, stopwatch)


def identity_rep_values(
    rep: Representation, engine: charpoly.CharacteristicEngine
) -> certificate.Certificate:
    """In L = 1: s_q(i) = q^{1-N} N_q and σ_q(i) = q^{i(1-N)} qbinom(N, i)."""
    n, q0 = rep.n, rep.qval
    witness = []
    for i in range(1, n + 1):
        expected_s = ring.eval_at(ring.qpow(1 - n) * ring.qnum(n), q0)
        expected_sigma = ring.eval_at(ring.qbinom(n, i) * ring.qpow(i * (1 - n)), q0)
        got_s = rep.evaluate(engine.s_q(i).value)[0, 0]
        got_sigma = rep.evaluate(engine.sigma_q(i).value)[0, 0]
        if got_s != _rational(expected_s):
            witness.append(f"s_q({i}) = {got_s}, expected {expected_s}")
        if got_sigma != _rational(expected_sigma):
            witness.append(f"sigma_q({i}) = {got_sigma}, expected {expected_sigma}")
    return certificate.certify(
        certificate.claim_id("rep-identity-values", n=n, q=str(q0).replace("/", "_")),
        n,
        "; ".join(witness),
        {"q": str(q0)},
    )


def eval_checks(
    rep: Representation, check: Check, engine: charpoly.CharacteristicEngine
) -> list[certificate.Certificate]:
    """Certificates for one identity, or for all of them plus the minimal-degree report."""
    if check != Check.ALL:
        return [eval_identity(rep, check, engine)]
    certificates = [
        eval_identity(rep, c, engine)
        for c in (Check.REFLECTION, Check.NEWTON, Check.CAYLEY, Check.INVERSE)
    ]
    degree = minimal_degree_report(rep)
    certificates.append(
        certificate.certify(
            certificate.claim_id(
                f"rep-{rep.name}-minimal-degree", n=rep.n, q=str(rep.qval).replace("/", "_")
            ),
            rep.n,
            "" if degree <= rep.n else f"minimal polynomial degree {degree} exceeds N",
            {"q": str(rep.qval), "rep": rep.placement, "minimal_degree": degree},
        )
    )
    return certificates


def random_rational_matrix(n: int, seed: int) -> sympy.Matrix:
    """Seeded N × N matrix with entries a/b, |a| <= 10, 1 <= b <= 10."""
    rng = random.Random(seed)  # nosec B311 reproducible test data
    return sympy.Matrix(
        n,
        n,
        lambda i, j: sympy.Rational(
            rng.randint(-ENTRY_BOUND, ENTRY_BOUND), rng.randint(1, ENTRY_BOUND)
        ),
    )


def sigma_principal_minors(a: sympy.Matrix, i: int) -> sympy.Rational:
    """Sum of the principal i × i minors."""
    n = a.shape[0]
    if i == 0:
        return sympy.Integer(1)
    return sum(
        (a.extract(list(rows), list(rows)).det() for rows in itertools.combinations(range(n), i)),
        sympy.Integer(0),
    )


def sigma_levi_civita(a: sympy.Matrix, i: int) -> sympy.Rational:
    """1/(i!(N-i)!) sum ε_{a_1..a_i c} ε_{b_1..b_i c} A_{a_1 b_1} ... A_{a_i b_i}."""
    n = a.shape[0]
    total = sympy.Integer(0)
    perms = list(itertools.permutations(range(n)))
    for left in perms:
        for right in perms:
            if left[i:] != right[i:]:
                continue
            term = sympy.LeviCivita(*left) * sympy.LeviCivita(*right)
            for k in range(i):
                term *= a[left[k], right[k]]
            total += term
    return total / (math.factorial(i) * math.factorial(n - i))


def _rational_op(a: sympy.Matrix) -> tensor.TensorOp:
    n = a.shape[0]
    return tensor.TensorOp(
        n,
        1,
        tensor.RATIONAL,
        {
            (i, j): fractions.Fraction(int(a[i, j].p), int(a[i, j].q))
            for i in range(n)
            for j in range(n)
        },
    )


def sigma_engine_formula(a: sympy.Matrix, i: int) -> sympy.Rational:
    """The engine's σ contraction at q = 1 with L replaced by a commuting matrix."""
    n = a.shape[0]
    if i == 0:
        return sympy.Integer(1)
    value = charpoly.sigma_formula(
        _rational_op(a),
        qstruct.specialize(_structure(n)[0].op, 1),
        qstruct.specialize(_structure(n)[1].v, 1),
        ring.eval_at(charpoly.alpha_closed_form(n, i), 1),
        i,
    )
    return _rational(value)


def trace_engine_formula(a: sympy.Matrix, i: int) -> sympy.Rational:
    """q^{1-N} Tr_q A^i at q = 1, through the engine's operator powers and q-trace.

    Powers use tensor composition over RatFunc; the trace uses `qstruct.qtrace`.
    """
    n = a.shape[0]
    op = _rational_op(a).map(lambda v: ring.RatFunc(v.numerator, v.denominator), tensor.RATFUNC)
    power = functools.reduce(
        operator.matmul, [op] * i, tensor.TensorOp.identity(n, 1, tensor.RATFUNC)
    )
    value = qstruct.qtrace(power, qstruct.build_d(n)) * ring.qpow(1 - n)
    return _rational(ring.eval_at(value, 1))


def classical_check(n: int, seed: int, a: sympy.Matrix | None = None) -> certificate.Certificate:
    """σ, s, Newton and Cayley-Hamilton at q = 1 for a seeded random rational matrix.

    σ(i) is computed from principal minors, from the Levi-Civita contraction, from the
    engine's contraction formula at q = 1 and from sympy's characteristic polynomial; s(i) from
    trace powers and from the engine's q-trace formula. All paths must agree exactly.

    Args:
        n: Dimension N.
        seed: Seed of the random matrix.
        a: Explicit matrix instead of a random one.

    Returns:
        The certificate; its witness names every disagreeing pair.
    """
    stopwatch = certificate.Stopwatch()
    a = random_rational_matrix(n, seed) if a is None else a
    x = sympy.Symbol("x")
    charpoly_coeffs = a.charpoly(x).all_coeffs()
    witness = []
    sigma = [sympy.Integer(1)]
    for i in range(1, n + 1):
        paths = {
            "principal-minors": sigma_principal_minors(a, i),
            "levi-civita": sigma_levi_civita(a, i),
            "engine-formula": sigma_engine_formula(a, i),
            "sympy-charpoly": (-1) ** i * charpoly_coeffs[i],
        }
        if len(set(paths.values())) != 1:
            witness.append(f"sigma({i}) paths disagree: {paths}")
        sigma.append(paths["principal-minors"])
    s = [sympy.Integer(n)]
    for i in range(1, n + 1):
        direct, engine = (a**i).trace(), trace_engine_formula(a, i)
        if direct != engine:
            witness.append(f"s({i}): trace {direct} != engine {engine}")
        s.append(direct)
    for i in range(1, n + 1):
        newton = i * sigma[i] + sum((-1) ** p * s[p] * sigma[i - p] for p in range(1, i))
        newton += (-1) ** i * s[i]
        if newton != 0:
            witness.append(f"Newton relation {i}: residual {newton}")
    cayley = sympy.zeros(n, n)
    for i in range(n + 1):
        cayley += (-1) ** i * a**i * sigma[n - i]
    if not cayley.is_zero_matrix:
        witness.append(f"Cayley-Hamilton residual {cayley.tolist()}")
    return certificate.certify(
        certificate.claim_id("classical-limit", n=n, seed=seed),
        n,
        "; ".join(witness),
        {"seed": seed, "matrix": str(a.tolist())},
        stopwatch,
    )


def symbolic_collapse_check(
    engine: charpoly.CharacteristicEngine, seed: int
) -> certificate.Certificate:
    """The symbolic s_q(i), σ_q(i) at q = 1 under a commuting substitution are the classical
    trace powers and principal-minor sums."""
    n = engine.n
    a = random_rational_matrix(n, seed)

    def substitute(p: NCPoly) -> sympy.Rational:
        total = sympy.Integer(0)
        for word, c in p.terms.items():
            term = _rational(ring.eval_at(c, 1))
            for g in word:
                term *= a[g.row - 1, g.col - 1]
            total += term
        return total

    witness = []
    for i in range(1, n + 1):
        sigma, expected_sigma = substitute(engine.sigma_q(i).value), sigma_principal_minors(a, i)
        if sigma != expected_sigma:
            witness.append(f"sigma_q({i}) at q=1: {sigma} != {expected_sigma}")
        s, expected_s = substitute(engine.s_q(i).value), (a**i).trace()
        if s != expected_s:
            witness.append(f"s_q({i}) at q=1: {s} != {expected_s}")
    return certificate.certify(
        certificate.claim_id("q1-collapse", n=n, seed=seed),
        n,
        "; ".join(witness),
        {"seed": seed},
    )
