# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

"""Sparse multi-leg tensors of dimension N per leg.

A TensorOp on k legs is a linear operator on the k-fold tensor power of an N-dimensional space,
stored as a sparse map from (row, column) multi-index pairs to coefficients. A CoTensor on k
legs is a sparse map from multi-indices to coefficients; it is contracted against operators
from either side.

Multi-indices are 1-based tuples, stored as row-major base-N integer keys. Leg 1 is the most
significant digit, so sorting keys sorts multi-indices lexicographically.

Coefficients come from a CoefficientRing. Every product in this module keeps the coefficient
of the left operand on the left, so noncommutative coefficients (words in the generators of
the reflection equation algebra) are never reordered.
"""

import fractions
import functools
import itertools
import logging
import operator
import typing
from collections.abc import Callable, Iterable, Iterator, Mapping

import pydantic

import ring

logger = logging.getLogger(__name__)

Coeff = typing.Any
MultiIndex = tuple[int, ...]


class ShapeError(ValueError):
    """Tensor shapes, leg sets or coefficient rings are incompatible."""


class CoefficientRing(pydantic.BaseModel):
    """Contract of a coefficient ring used by tensors.

    Attributes:
        name: Tag used in serialized tensors.
        zero: Additive identity.
        one: Multiplicative identity.
        rank: Promotion rank; mixing two rings yields the one with the higher rank.
        to_text: Canonical text form of a coefficient.
        from_text: Parser for the canonical text form.
        add_all: Sum of an iterable of coefficients.
        coerce: Conversion of a value from a lower-ranked ring into this one.
    """

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    zero: Coeff
    one: Coeff
    rank: int
    to_text: Callable[[Coeff], str] = str
    from_text: Callable[[str], Coeff]
    add_all: Callable[[Iterable[Coeff]], Coeff] | None = None
    coerce: Callable[[Coeff], Coeff] | None = None

    def sum(self, values: Iterable[Coeff]) -> Coeff:
        """Sum of values, zero when empty."""
        if self.add_all is not None:
            return self.add_all(values)
        return functools.reduce(operator.add, values, self.zero)


_RINGS: dict[str, CoefficientRing] = {}


def register_ring(coefficient_ring: CoefficientRing) -> CoefficientRing:
    """Make a coefficient ring available by name."""
    _RINGS[coefficient_ring.name] = coefficient_ring
    return coefficient_ring


def get_ring(name: str) -> CoefficientRing:
    """Look up a registered coefficient ring.

    Raises:
        ShapeError: If no ring with this name is registered.
    """
    try:
        return _RINGS[name]
    except KeyError:
        raise ShapeError(f"unknown coefficient ring: {name}")


LAURENT = register_ring(
    CoefficientRing(
        name="laurent",
        zero=ring.ZERO,
        one=ring.ONE,
        rank=1,
        from_text=ring.LaurentPoly.parse,
    )
)
RATFUNC = register_ring(
    CoefficientRing(
        name="ratfunc",
        zero=ring.RatFunc(0),
        one=ring.RatFunc(1),
        rank=2,
        from_text=ring.RatFunc.parse,
        coerce=ring.RatFunc.coerce,
    )
)
RATIONAL = register_ring(
    CoefficientRing(
        name="rational",
        zero=fractions.Fraction(0),
        one=fractions.Fraction(1),
        rank=2,
        from_text=fractions.Fraction,
        coerce=fractions.Fraction,
    )
)


def promote(a: CoefficientRing, b: CoefficientRing) -> CoefficientRing:
    """Coefficient ring of a product or sum of values from a and b.

    Raises:
        ShapeError: If the rings cannot be mixed.
    """
    if a.name == b.name:
        return a
    if a.rank == b.rank:
        raise ShapeError(f"cannot mix coefficient rings {a.name} and {b.name}")
    return a if a.rank > b.rank else b


def encode(index: MultiIndex, dim: int) -> int:
    """Row-major integer key of a 1-based multi-index."""
    key = 0
    for i in index:
        key = key * dim + (i - 1)
    return key


def decode(key: int, dim: int, legs: int) -> MultiIndex:
    """Inverse of encode."""
    digits = []
    for _ in range(legs):
        key, digit = divmod(key, dim)
        digits.append(digit + 1)
    return tuple(reversed(digits))


def all_indices(dim: int, legs: int) -> Iterator[MultiIndex]:
    """All multi-indices in key order."""
    return itertools.product(range(1, dim + 1), repeat=legs)


def _collect(
    products: Mapping[typing.Any, list[Coeff]], coefficient_ring: CoefficientRing
) -> dict:
    coerce = coefficient_ring.coerce
    result = {}
    for key, values in products.items():
        total = values[0] if len(values) == 1 else coefficient_ring.sum(values)
        if total:
            result[key] = coerce(total) if coerce else total
    return result


class TensorOp:
    """Sparse linear operator on `legs` tensor legs of dimension `dim`."""

    __slots__ = ("dim", "entries", "legs", "ring")

    def __init__(
        self,
        dim: int,
        legs: int,
        coefficient_ring: CoefficientRing,
        entries: Mapping[tuple[int, int], Coeff] | None = None,
    ):
        """Construct a tensor operator.

        Args:
            dim: Dimension of each leg.
            legs: Number of legs.
            coefficient_ring: Ring of the coefficients.
            entries: Sparse map (row key, column key) -> coefficient; zeros are dropped.

        Raises:
            ShapeError: If a key is out of range.
        """
        if dim < 1 or legs < 0:
            raise ShapeError(f"invalid tensor shape: dim={dim}, legs={legs}")
        self.dim = dim
        self.legs = legs
        self.ring = coefficient_ring
        size = dim**legs
        self.entries: dict[tuple[int, int], Coeff] = {}
        for (row, col), value in (entries or {}).items():
            if not (0 <= row < size and 0 <= col < size):
                raise ShapeError(f"entry ({row}, {col}) out of range for {legs} legs of {dim}")
            if value:
                self.entries[(row, col)] = value

    @classmethod
    def from_indices(
        cls,
        dim: int,
        legs: int,
        coefficient_ring: CoefficientRing,
        entries: Mapping[tuple[MultiIndex, MultiIndex], Coeff],
    ) -> "TensorOp":
        """Construct from a map keyed by (row multi-index, column multi-index)."""
        for row, col in entries:
            if len(row) != legs or len(col) != legs or not all(
                1 <= i <= dim for i in row + col
            ):
                raise ShapeError(f"invalid multi-index pair {row}, {col}")
        return cls(
            dim,
            legs,
            coefficient_ring,
            {(encode(r, dim), encode(c, dim)): v for (r, c), v in entries.items()},
        )

    @classmethod
    def identity(cls, dim: int, legs: int, coefficient_ring: CoefficientRing) -> "TensorOp":
        """Identity operator."""
        return cls(
            dim, legs, coefficient_ring, {(k, k): coefficient_ring.one for k in range(dim**legs)}
        )

    @classmethod
    def zero(cls, dim: int, legs: int, coefficient_ring: CoefficientRing) -> "TensorOp":
        """Zero operator."""
        return cls(dim, legs, coefficient_ring)

    def entry(self, row: MultiIndex, col: MultiIndex) -> Coeff:
        """Coefficient at a (row, column) multi-index pair."""
        return self.entries.get((encode(row, self.dim), encode(col, self.dim)), self.ring.zero)

    def items(self) -> list[tuple[MultiIndex, MultiIndex, Coeff]]:
        """Entries as (row, column, coefficient), sorted by key."""
        return [
            (decode(r, self.dim, self.legs), decode(c, self.dim, self.legs), v)
            for (r, c), v in sorted(self.entries.items(), key=operator.itemgetter(0))
        ]

    @property
    def is_zero(self) -> bool:
        """Whether no entry is stored."""
        return not self.entries

    def map(
        self, fn: Callable[[Coeff], Coeff], coefficient_ring: CoefficientRing | None = None
    ) -> "TensorOp":
        """Apply fn to every entry, optionally moving to another ring."""
        return TensorOp(
            self.dim,
            self.legs,
            coefficient_ring or self.ring,
            {k: fn(v) for k, v in self.entries.items()},
        )

    def _check_shape(self, other: "TensorOp") -> None:
        if (self.dim, self.legs) != (other.dim, other.legs):
            raise ShapeError(
                f"shape mismatch: ({self.dim}, {self.legs}) vs ({other.dim}, {other.legs})"
            )

    def __add__(self, other: object) -> "TensorOp":
        if not isinstance(other, TensorOp):
            return NotImplemented
        self._check_shape(other)
        target = promote(self.ring, other.ring)
        entries: dict[tuple[int, int], list[Coeff]] = {}
        for source in (self.entries, other.entries):
            for k, v in source.items():
                entries.setdefault(k, []).append(v)
        return TensorOp(self.dim, self.legs, target, _collect(entries, target))

    def __neg__(self) -> "TensorOp":
        return self.map(operator.neg)

    def __sub__(self, other: object) -> "TensorOp":
        if not isinstance(other, TensorOp):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: Coeff) -> "TensorOp":
        """Entry times scalar (scalar on the right)."""
        if isinstance(scalar, TensorOp | CoTensor):
            return NotImplemented
        return self.map(lambda v: v * scalar, _ring_of(scalar, self.ring))

    def __rmul__(self, scalar: Coeff) -> "TensorOp":
        """Scalar times entry (scalar on the left)."""
        return self.map(lambda v: scalar * v, _ring_of(scalar, self.ring))

    def __matmul__(self, other: "TensorOp") -> "TensorOp":
        return compose(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorOp):
            return NotImplemented
        return (self.dim, self.legs) == (other.dim, other.legs) and self.entries == other.entries

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"TensorOp(dim={self.dim}, legs={self.legs}, "
            f"ring={self.ring.name}, nnz={len(self.entries)})"
        )


class CoTensor:
    """Sparse rank-`legs` tensor of dimension `dim`, contracted against operators."""

    __slots__ = ("dim", "entries", "legs", "ring")

    def __init__(
        self,
        dim: int,
        legs: int,
        coefficient_ring: CoefficientRing,
        entries: Mapping[int, Coeff] | None = None,
    ):
        """Construct a cotensor from a sparse key -> coefficient map; zeros are dropped.

        Raises:
            ShapeError: If a key is out of range.
        """
        if dim < 1 or legs < 0:
            raise ShapeError(f"invalid tensor shape: dim={dim}, legs={legs}")
        self.dim = dim
        self.legs = legs
        self.ring = coefficient_ring
        size = dim**legs
        self.entries: dict[int, Coeff] = {}
        for key, value in (entries or {}).items():
            if not 0 <= key < size:
                raise ShapeError(f"entry {key} out of range for {legs} legs of {dim}")
            if value:
                self.entries[key] = value

    @classmethod
    def from_indices(
        cls,
        dim: int,
        legs: int,
        coefficient_ring: CoefficientRing,
        entries: Mapping[MultiIndex, Coeff],
    ) -> "CoTensor":
        """Construct from a map keyed by multi-index."""
        for index in entries:
            if len(index) != legs or not all(1 <= i <= dim for i in index):
                raise ShapeError(f"invalid multi-index {index}")
        return cls(dim, legs, coefficient_ring, {encode(i, dim): v for i, v in entries.items()})

    @classmethod
    def unit(
        cls, dim: int, index: MultiIndex, coefficient_ring: CoefficientRing
    ) -> "CoTensor":
        """The basis cotensor e_index."""
        return cls.from_indices(dim, len(index), coefficient_ring, {index: coefficient_ring.one})

    def entry(self, index: MultiIndex) -> Coeff:
        """Coefficient at a multi-index."""
        return self.entries.get(encode(index, self.dim), self.ring.zero)

    def items(self) -> list[tuple[MultiIndex, Coeff]]:
        """Entries as (multi-index, coefficient), sorted by key."""
        return [(decode(k, self.dim, self.legs), v) for k, v in sorted(self.entries.items())]

    @property
    def is_zero(self) -> bool:
        """Whether no entry is stored."""
        return not self.entries

    def map(
        self, fn: Callable[[Coeff], Coeff], coefficient_ring: CoefficientRing | None = None
    ) -> "CoTensor":
        """Apply fn to every entry, optionally moving to another ring."""
        return CoTensor(
            self.dim, self.legs, coefficient_ring or self.ring,
            {k: fn(v) for k, v in self.entries.items()},
        )

    def _check_shape(self, other: "CoTensor") -> None:
        if (self.dim, self.legs) != (other.dim, other.legs):
            raise ShapeError(
                f"shape mismatch: ({self.dim}, {self.legs}) vs ({other.dim}, {other.legs})"
            )

    def __add__(self, other: object) -> "CoTensor":
        if not isinstance(other, CoTensor):
            return NotImplemented
        self._check_shape(other)
        target = promote(self.ring, other.ring)
        entries: dict[int, list[Coeff]] = {}
        for source in (self.entries, other.entries):
            for k, v in source.items():
                entries.setdefault(k, []).append(v)
        return CoTensor(self.dim, self.legs, target, _collect(entries, target))

    def __neg__(self) -> "CoTensor":
        return self.map(operator.neg)

    def __sub__(self, other: object) -> "CoTensor":
        if not isinstance(other, CoTensor):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: Coeff) -> "CoTensor":
        """Entry times scalar (scalar on the right)."""
        if isinstance(scalar, TensorOp | CoTensor):
            return NotImplemented
        return self.map(lambda v: v * scalar, _ring_of(scalar, self.ring))

    def __rmul__(self, scalar: Coeff) -> "CoTensor":
        """Scalar times entry (scalar on the left)."""
        return self.map(lambda v: scalar * v, _ring_of(scalar, self.ring))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoTensor):
            return NotImplemented
        return (self.dim, self.legs) == (other.dim, other.legs) and self.entries == other.entries

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"CoTensor(dim={self.dim}, legs={self.legs}, "
            f"ring={self.ring.name}, nnz={len(self.entries)})"
        )


def _ring_of(scalar: Coeff, fallback: CoefficientRing) -> CoefficientRing:
    """Ring of the result of multiplying a fallback-ring value by a scalar."""
    for candidate in sorted(_RINGS.values(), key=lambda r: -r.rank):
        if candidate.rank > fallback.rank and isinstance(scalar, type(candidate.one)):
            return candidate
    return fallback


def embed(op: TensorOp, start: int, total: int) -> TensorOp:
    """Place op on legs start..start+m-1 of a `total`-leg space, identity elsewhere.

    Args:
        op: Operator on m legs.
        start: 1-based position of the first leg op acts on.
        total: Number of legs of the result.

    Returns:
        The embedded operator.

    Raises:
        ShapeError: If the placement does not fit.
    """
    if start < 1 or start + op.legs - 1 > total:
        raise ShapeError(f"cannot place {op.legs} legs at position {start} of {total}")
    before = start - 1
    after = total - before - op.legs
    inner = op.dim ** (op.legs + after)
    outer = op.dim**after
    entries = {}
    for prefix in range(op.dim**before):
        for suffix in range(outer):
            for (row, col), value in op.entries.items():
                entries[
                    (prefix * inner + row * outer + suffix, prefix * inner + col * outer + suffix)
                ] = value
    return TensorOp(op.dim, total, op.ring, entries)


def compose(
    a: TensorOp, b: TensorOp, reduce: Callable[[Coeff], Coeff] | None = None
) -> TensorOp:
    """Operator product a.b: (ab)^I_K = sum_J a^I_J b^J_K, coefficients of a on the left.

    Args:
        a: Left factor.
        b: Right factor.
        reduce: Optional normalization applied to each result entry.

    Returns:
        The product.

    Raises:
        ShapeError: If shapes or rings are incompatible.
    """
    a._check_shape(b)
    target = promote(a.ring, b.ring)
    b_rows: dict[int, list[tuple[int, Coeff]]] = {}
    for (row, col), value in b.entries.items():
        b_rows.setdefault(row, []).append((col, value))
    products: dict[tuple[int, int], list[Coeff]] = {}
    for (row, mid), left in a.entries.items():
        for col, right in b_rows.get(mid, ()):
            products.setdefault((row, col), []).append(left * right)
    entries = _collect(products, target)
    if reduce is not None:
        entries = {k: reduce(v) for k, v in entries.items()}
    return TensorOp(a.dim, a.legs, target, entries)


def product(ops: Iterable[TensorOp], reduce: Callable[[Coeff], Coeff] | None = None) -> TensorOp:
    """Left-to-right product of a non-empty sequence of operators."""
    ops = list(ops)
    if not ops:
        raise ShapeError("product of an empty operator sequence")
    return functools.reduce(lambda x, y: compose(x, y, reduce), ops)


def contract_left(v: CoTensor, op: TensorOp) -> CoTensor:
    """Row-side contraction (vA)_J = sum_I v_I A^I_J."""
    if (v.dim, v.legs) != (op.dim, op.legs):
        raise ShapeError(f"cannot contract a ({v.dim}, {v.legs}) cotensor with {op!r}")
    target = promote(v.ring, op.ring)
    rows: dict[int, list[tuple[int, Coeff]]] = {}
    for (row, col), value in op.entries.items():
        rows.setdefault(row, []).append((col, value))
    products: dict[int, list[Coeff]] = {}
    for row, left in v.entries.items():
        for col, right in rows.get(row, ()):
            products.setdefault(col, []).append(left * right)
    return CoTensor(v.dim, v.legs, target, _collect(products, target))


def contract_right(op: TensorOp, v: CoTensor) -> CoTensor:
    """Column-side contraction (Av)_I = sum_J A^I_J v_J."""
    if (v.dim, v.legs) != (op.dim, op.legs):
        raise ShapeError(f"cannot contract {op!r} with a ({v.dim}, {v.legs}) cotensor")
    target = promote(v.ring, op.ring)
    products: dict[int, list[Coeff]] = {}
    for (row, col), left in op.entries.items():
        right = v.entries.get(col)
        if right is not None:
            products.setdefault(row, []).append(left * right)
    return CoTensor(v.dim, v.legs, target, _collect(products, target))


def full_pairing(u: CoTensor, v: CoTensor) -> Coeff:
    """sum_I u_I v_I, coefficients of u on the left."""
    u._check_shape(v)
    target = promote(u.ring, v.ring)
    return target.sum(value * v.entries[k] for k, value in u.entries.items() if k in v.entries)


def partial_pairing(u: CoTensor, v: CoTensor, shared: Iterable[int]) -> TensorOp:
    """Gram tensor G^{A,B} = sum_C u^{AC} v^{BC} over the shared legs C.

    Args:
        u: Left cotensor; its open legs index the rows of G.
        v: Right cotensor; its open legs index the columns of G.
        shared: 1-based legs summed over. May be empty (outer product) or all legs (the
            result is a 0-leg operator holding the full pairing).

    Returns:
        A TensorOp on the open legs.

    Raises:
        ShapeError: If the shapes differ or a leg is out of range.
    """
    u._check_shape(v)
    shared = sorted(set(shared))
    if any(not 1 <= leg <= u.legs for leg in shared):
        raise ShapeError(f"invalid shared legs {shared} for {u.legs} legs")
    open_legs = [leg for leg in range(1, u.legs + 1) if leg not in shared]
    target = promote(u.ring, v.ring)

    def split(key: int) -> tuple[int, MultiIndex]:
        index = decode(key, u.dim, u.legs)
        return (
            encode(tuple(index[leg - 1] for leg in open_legs), u.dim),
            tuple(index[leg - 1] for leg in shared),
        )

    v_by_shared: dict[MultiIndex, list[tuple[int, Coeff]]] = {}
    for key, value in v.entries.items():
        col, rest = split(key)
        v_by_shared.setdefault(rest, []).append((col, value))
    products: dict[tuple[int, int], list[Coeff]] = {}
    for key, left in u.entries.items():
        row, rest = split(key)
        for col, right in v_by_shared.get(rest, ()):
            products.setdefault((row, col), []).append(left * right)
    return TensorOp(u.dim, len(open_legs), target, _collect(products, target))


def weighted_trace(op: TensorOp, gram: TensorOp) -> Coeff:
    """sum_{A,B} G^{A,B} op^A_B, Gram coefficients on the left."""
    op._check_shape(gram)
    target = promote(op.ring, gram.ring)
    return target.sum(
        weight * op.entries[k] for k, weight in gram.entries.items() if k in op.entries
    )


class _EntryFile(pydantic.BaseModel):
    row: list[int]
    col: list[int] | None = None
    coeff: str


class _TensorFile(pydantic.BaseModel):
    """Serialized TensorOp or CoTensor."""

    dim: int = pydantic.Field(ge=1)
    legs: int = pydantic.Field(ge=0)
    ring: str
    entries: list[_EntryFile]

    @pydantic.model_validator(mode="after")
    def _validate_entries(self) -> "_TensorFile":
        kinds = {entry.col is None for entry in self.entries}
        if len(kinds) > 1:
            raise ValueError("entries mix operator and cotensor forms")
        return self


def dump_json(tensor: TensorOp | CoTensor) -> str:
    """Serialize to the tensor file format, entries in key order."""
    if isinstance(tensor, TensorOp):
        entries = [
            _EntryFile(row=list(r), col=list(c), coeff=tensor.ring.to_text(v))
            for r, c, v in tensor.items()
        ]
    else:
        entries = [
            _EntryFile(row=list(i), coeff=tensor.ring.to_text(v)) for i, v in tensor.items()
        ]
    model = _TensorFile(dim=tensor.dim, legs=tensor.legs, ring=tensor.ring.name, entries=entries)
    return model.model_dump_json(indent=2, exclude_none=True) + "\n"


def load_json(text: str, cotensor: bool = False) -> TensorOp | CoTensor:
    """Parse the tensor file format.

    Args:
        text: JSON text produced by dump_json.
        cotensor: Whether an entry-less file denotes a CoTensor.

    Returns:
        A CoTensor when entries carry only `row`, else a TensorOp.

    Raises:
        ShapeError: If the ring is unknown or an index is invalid.
        pydantic.ValidationError: If the document is malformed.
    """
    model = _TensorFile.model_validate_json(text)
    coefficient_ring = get_ring(model.ring)
    if model.entries:
        cotensor = model.entries[0].col is None
    if cotensor:
        return CoTensor.from_indices(
            model.dim,
            model.legs,
            coefficient_ring,
            {tuple(e.row): coefficient_ring.from_text(e.coeff) for e in model.entries},
        )
    return TensorOp.from_indices(
        model.dim,
        model.legs,
        coefficient_ring,
        {
            (tuple(e.row), tuple(e.col or [])): coefficient_ring.from_text(e.coeff)
            for e in model.entries
        },
    )
