# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

"""The reflection equation algebra generated by the entries l_i_j of an N×N matrix L subject
to R̂L_1R̂L_1 = L_1R̂L_1R̂.

The quadratic exchange relations are derived componentwise from the reflection equation and
eliminated over RatFunc into one rewrite rule per inversion g_a g_b (g_a > g_b in the row-major
generator order). Rewriting the leftmost inversion of each word until none is left gives the
normal form: a combination of nondecreasing words.

Words are tuples of Generator; the monomial order is degree-lex.
"""

import itertools
import logging
import random
import re
import typing
from collections.abc import Iterable, Mapping

import pydantic

import certificate
import ring
import tensor
from qstruct import RHat
from ring import RatFunc
from tensor import TensorOp

logger = logging.getLogger(__name__)

_NC_TERM_RE = re.compile(r"\[([^\[\]]+)\]((?:\*l_\d+_\d+)*)")
_GENERATOR_RE = re.compile(r"^l_(\d+)_(\d+)$")

# degree-4 confluence is exhaustive up to this many words, sampled beyond
_EXHAUSTIVE_WORD_LIMIT = 4096
_CONFLUENCE_SAMPLE = 512


class PBWError(Exception):
    """Leading monomials of the eliminated relations are not exactly the inversions."""


class Generator(typing.NamedTuple):
    """The generator l^row_col; tuples order row-major."""

    row: int
    col: int

    def __str__(self) -> str:
        return f"l_{self.row}_{self.col}"

    @classmethod
    def parse(cls, text: str) -> "Generator":
        """Parse ``l_i_j``.

        Raises:
            ValueError: If the text is not a generator name.
        """
        match = _GENERATOR_RE.match(text.strip())
        if not match:
            raise ValueError(f"invalid generator: '{text}'")
        return cls(int(match.group(1)), int(match.group(2)))


Word = tuple[Generator, ...]


def generators(n: int) -> list[Generator]:
    """All N² generators in order."""
    return [Generator(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]


def word_key(word: Word) -> tuple[int, Word]:
    """Degree-lex sort key."""
    return len(word), word


def is_sorted(word: Word) -> bool:
    """Whether the word has no inversion."""
    return all(a <= b for a, b in itertools.pairwise(word))


class NCPoly:
    """Noncommutative polynomial in the generators with RatFunc coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, RatFunc | ring.LaurentPoly | int] | None = None):
        """Construct from a word -> coefficient map; zero coefficients are dropped."""
        self.terms: dict[Word, RatFunc] = {}
        for word, c in (terms or {}).items():
            value = RatFunc.coerce(c)
            if value:
                self.terms[tuple(word)] = value

    @classmethod
    def _trusted(cls, terms: dict[Word, RatFunc]) -> "NCPoly":
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def scalar(cls, value: RatFunc | ring.LaurentPoly | int) -> "NCPoly":
        """The constant polynomial value·1."""
        return cls({(): value})

    @classmethod
    def one(cls) -> "NCPoly":
        """The unit."""
        return cls.scalar(1)

    @classmethod
    def generator(cls, g: Generator) -> "NCPoly":
        """A single generator."""
        return cls({(g,): 1})

    @classmethod
    def coerce(cls, value: "NCPoly | RatFunc | ring.LaurentPoly | int") -> "NCPoly":
        """Embed a scalar as a constant polynomial."""
        if isinstance(value, NCPoly):
            return value
        return cls.scalar(value)

    @classmethod
    def sum(cls, values: Iterable["NCPoly | RatFunc | ring.LaurentPoly | int"]) -> "NCPoly":
        """Sum of an iterable, merging terms in one pass."""
        acc: dict[Word, RatFunc] = {}
        for value in values:
            for word, c in cls.coerce(value).terms.items():
                current = acc.get(word)
                acc[word] = c if current is None else current + c
        return cls._trusted({w: c for w, c in acc.items() if c})

    @property
    def degree(self) -> int:
        """Length of the longest word (0 for the zero polynomial)."""
        return max((len(w) for w in self.terms), default=0)

    def coeff(self, word: Iterable[Generator]) -> RatFunc:
        """Coefficient of a word."""
        return self.terms.get(tuple(word), RatFunc(0))

    def map_coeffs(self, fn: typing.Callable[[RatFunc], RatFunc]) -> "NCPoly":
        """Apply fn to every coefficient."""
        return NCPoly({w: fn(c) for w, c in self.terms.items()})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __neg__(self) -> "NCPoly":
        return NCPoly._trusted({w: -c for w, c in self.terms.items()})

    def __add__(self, other: object) -> "NCPoly":
        if not isinstance(other, NCPoly | RatFunc | ring.LaurentPoly | int):
            return NotImplemented
        return NCPoly.sum([self, other])

    __radd__ = __add__

    def __sub__(self, other: object) -> "NCPoly":
        if not isinstance(other, NCPoly | RatFunc | ring.LaurentPoly | int):
            return NotImplemented
        return NCPoly.sum([self, -NCPoly.coerce(other)])

    def __rsub__(self, other: object) -> "NCPoly":
        if not isinstance(other, RatFunc | ring.LaurentPoly | int):
            return NotImplemented
        return NCPoly.sum([other, -self])

    def __mul__(self, other: object) -> "NCPoly":
        if isinstance(other, RatFunc | ring.LaurentPoly | int):
            scalar = RatFunc.coerce(other)
            if not scalar:
                return NCPoly()
            return NCPoly._trusted({w: c * scalar for w, c in self.terms.items()})
        if not isinstance(other, NCPoly):
            return NotImplemented
        acc: dict[Word, RatFunc] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                word = w1 + w2
                current = acc.get(word)
                acc[word] = c1 * c2 if current is None else current + c1 * c2
        return NCPoly._trusted({w: c for w, c in acc.items() if c})

    def __rmul__(self, other: object) -> "NCPoly":
        if isinstance(other, RatFunc | ring.LaurentPoly | int):
            # scalars commute with every word
            return self * other
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RatFunc | ring.LaurentPoly | int):
            other = NCPoly.coerce(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        """Canonical text: ``[coeff]*l_1_1*l_1_2`` terms in degree-lex order, or ``0``."""
        if not self.terms:
            return "0"
        return " + ".join(
            f"[{self.terms[w]}]" + "".join(f"*{g}" for g in w)
            for w in sorted(self.terms, key=word_key)
        )

    def __repr__(self) -> str:
        return f"NCPoly('{self}')"

    @classmethod
    def parse(cls, text: str) -> "NCPoly":
        """Parse the canonical text form.

        Raises:
            ValueError: If the text is malformed.
        """
        text = text.strip()
        if text == "0":
            return cls()
        matches = list(_NC_TERM_RE.finditer(text))
        if " + ".join(m.group(0) for m in matches) != text:
            raise ValueError(f"invalid noncommutative polynomial: '{text}'")
        terms: dict[Word, RatFunc] = {}
        for m in matches:
            word = tuple(Generator.parse(g) for g in m.group(2).split("*") if g)
            terms[word] = RatFunc.parse(m.group(1))
        return cls(terms)


NCPOLY = tensor.register_ring(
    tensor.CoefficientRing(
        name="ncpoly",
        zero=NCPoly(),
        one=NCPoly.one(),
        rank=3,
        from_text=NCPoly.parse,
        add_all=NCPoly.sum,
        coerce=NCPoly.coerce,
    )
)

NCMatrix = TensorOp


def generator_matrix(n: int) -> NCMatrix:
    """The quantum matrix L = (l^i_j) as a one-leg operator with NCPoly entries."""
    return TensorOp.from_indices(
        n, 1, NCPOLY, {((g.row,), (g.col,)): NCPoly.generator(g) for g in generators(n)}
    )


def derive_relations(rhat: RHat) -> list[NCPoly]:
    """Componentwise expansion of L_1R̂L_1R̂ - R̂L_1R̂L_1 on two legs.

    Returns:
        The nonzero homogeneous quadratic relations, in entry key order.
    """
    l1 = tensor.embed(generator_matrix(rhat.n), 1, 2)
    r = rhat.op
    residual = tensor.product([l1, r, l1, r]) - tensor.product([r, l1, r, l1])
    relations = [NCPoly.coerce(v) for _, _, v in residual.items()]
    logger.debug("derived %d nonzero relations for N=%d", len(relations), rhat.n)
    return relations


class RewriteRule(pydantic.BaseModel):
    """Serialized rewrite rule."""

    lhs: list[str]
    tail: list[dict[str, typing.Any]]


class RewriteSystem:
    """Confluent rewrite rules g_a g_b -> tail for every inversion g_a > g_b."""

    def __init__(self, n: int, rules: Mapping[tuple[Generator, Generator], NCPoly]):
        """Construct from a complete rule set.

        Args:
            n: Dimension N.
            rules: One tail per inversion; tails are combinations of sorted words.
        """
        self.n = n
        self.rules = dict(rules)
        self._memo: dict[bool, dict[Word, dict[Word, RatFunc]]] = {False: {}, True: {}}

    @property
    def rule_count(self) -> int:
        """Number of rules."""
        return len(self.rules)

    def _find_inversion(self, word: Word, rightmost: bool) -> int | None:
        positions = range(len(word) - 2, -1, -1) if rightmost else range(len(word) - 1)
        for k in positions:
            if word[k] > word[k + 1]:
                return k
        return None

    def _reduce_word(self, word: Word, rightmost: bool) -> dict[Word, RatFunc]:
        memo = self._memo[rightmost]
        cached = memo.get(word)
        if cached is not None:
            return cached
        k = self._find_inversion(word, rightmost)
        if k is None:
            result = {word: RatFunc(1)}
        else:
            prefix, suffix = word[:k], word[k + 2 :]
            acc: dict[Word, RatFunc] = {}
            for tail_word, c in self.rules[(word[k], word[k + 1])].terms.items():
                for w, d in self._reduce_word(prefix + tail_word + suffix, rightmost).items():
                    current = acc.get(w)
                    acc[w] = c * d if current is None else current + c * d
            result = {w: c for w, c in acc.items() if c}
        memo[word] = result
        return result

    def normal_form(
        self, p: NCPoly | RatFunc | ring.LaurentPoly | int, rightmost: bool = False
    ) -> NCPoly:
        """Rewrite until every word is sorted.

        Args:
            p: The polynomial; scalars are accepted.
            rightmost: Rewrite the rightmost inversion first instead of the leftmost.

        Returns:
            The normal form.
        """
        acc: dict[Word, RatFunc] = {}
        for word, c in NCPoly.coerce(p).terms.items():
            if is_sorted(word):
                reduced = {word: RatFunc(1)}
            else:
                reduced = self._reduce_word(word, rightmost)
            for w, d in reduced.items():
                current = acc.get(w)
                acc[w] = c * d if current is None else current + c * d
        return NCPoly._trusted({w: c for w, c in acc.items() if c})

    def dump_json(self) -> str:
        """Rules as a JSON list ordered by left-hand side."""
        rules = [
            RewriteRule(
                lhs=[str(a), str(b)],
                tail=[
                    {"word": [str(g) for g in w], "coeff": str(tail.terms[w])}
                    for w in sorted(tail.terms, key=word_key)
                ],
            )
            for (a, b), tail in sorted(self.rules.items())
        ]
        return pydantic.TypeAdapter(list[RewriteRule]).dump_json(rules, indent=2).decode() + "\n"


def build_rewrite_system(relations: Iterable[NCPoly], n: int) -> RewriteSystem:
    """Eliminate the relations into one rule per inversion.

    Args:
        relations: Homogeneous quadratic relations.
        n: Dimension N.

    Returns:
        The rewrite system.

    Raises:
        PBWError: If the leading words are not exactly the inversions.
    """
    basis = ring.row_reduce((r.terms for r in relations), key=word_key)
    inversions = {(a, b) for a in generators(n) for b in generators(n) if a > b}
    leading = set(basis)
    if leading != inversions:
        missing = sorted(inversions - leading)
        extra = sorted(leading - inversions)
        raise PBWError(
            f"leading words differ from the inversions: missing {missing}, unexpected {extra}"
        )
    rules = {
        lead: NCPoly({w: -c for w, c in row.items() if w != lead}) for lead, row in basis.items()
    }
    logger.info("built rewrite system for N=%d with %d rules", n, len(rules))
    return RewriteSystem(n, rules)


def relation_rank(relations: Iterable[NCPoly]) -> int:
    """Rank of the linear span of the relations."""
    return len(ring.row_reduce((r.terms for r in relations), key=word_key))


def confluence_words(n: int, degree: int, seed: int = 0) -> tuple[list[Word], bool]:
    """Words checked by check_confluence and whether the set is exhaustive."""
    total = n ** (2 * degree)
    if degree == 3 or total <= _EXHAUSTIVE_WORD_LIMIT:
        return [tuple(w) for w in itertools.product(generators(n), repeat=degree)], True
    rng = random.Random(seed)  # nosec B311 reproducible sampling
    gens = generators(n)
    sample = [tuple(rng.choice(gens) for _ in range(degree)) for _ in range(_CONFLUENCE_SAMPLE)]
    return sample, False


def check_confluence(
    system: RewriteSystem, degree: int = 3, seed: int = 0
) -> certificate.Certificate:
    """Leftmost-first and rightmost-first reduction agree on every checked word.

    Args:
        system: The rewrite system.
        degree: Word length, at least 3.
        seed: Seed of the sampled word set.

    Returns:
        A certificate whose witness names the first disagreeing word.

    Raises:
        ValueError: If the degree is below 3.
    """
    if degree < 3:
        raise ValueError(f"confluence needs degree >= 3, got {degree}")
    stopwatch = certificate.Stopwatch()
    words, exhaustive = confluence_words(system.n, degree, seed)
    witness = ""
    for word in words:
        poly = NCPoly({word: 1})
        left, right = system.normal_form(poly), system.normal_form(poly, rightmost=True)
        if left != right:
            witness = f"{'*'.join(map(str, word))}: leftmost {left} != rightmost {right}"
            logger.error("confluence fails at %s", witness)
            break
    parameters: dict[str, certificate.ParameterValue] = {
        "degree": degree,
        "words": len(words),
        "exhaustive": exhaustive,
    }
    if not exhaustive:
        parameters["seed"] = seed
    return certificate.certify(
        certificate.claim_id("confluence", d=degree, n=system.n),
        system.n,
        witness,
        parameters,
        stopwatch,
    )


class CentralityReport(pydantic.BaseModel):
    """Outcome of a centrality test.

    Attributes:
        central: Whether every commutator vanished.
        generator: First generator with a nonzero commutator.
        residual: Normal form of that commutator.
    """

    central: bool
    generator: str | None = None
    residual: str = ""

    def __bool__(self) -> bool:
        return self.central


def is_central(p: NCPoly, system: RewriteSystem) -> CentralityReport:
    """Whether p commutes with every generator after normal form."""
    for g in generators(system.n):
        x = NCPoly.generator(g)
        residual = system.normal_form(p * x - x * p)
        if residual:
            return CentralityReport(central=False, generator=str(g), residual=str(residual))
    return CentralityReport(central=True)


def nc_mat_mul(a: NCMatrix, b: NCMatrix, system: RewriteSystem | None = None) -> NCMatrix:
    """Matrix product with word order preserved, optionally normal-formed per entry."""
    return tensor.compose(a, b, system.normal_form if system else None)


def nc_mat_pow(a: NCMatrix, k: int, system: RewriteSystem | None = None) -> NCMatrix:
    """a^k; a^0 is the identity."""
    if k < 0:
        raise ValueError(f"negative matrix power: {k}")
    result = TensorOp.identity(a.dim, a.legs, NCPOLY)
    for _ in range(k):
        result = nc_mat_mul(result, a, system)
    return result


def normal_form_matrix(a: NCMatrix, system: RewriteSystem) -> NCMatrix:
    """Normal form of every entry."""
    return a.map(system.normal_form, NCPOLY)
