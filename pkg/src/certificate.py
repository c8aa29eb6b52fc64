# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

"""Verification certificates.

A certificate binds one claim (an identity checked for one N and one parameter set) to the
outcome of one exact computation:
 - pass: the residual normal-formed to zero; the witness is empty.
 - fail: the residual is nonzero; the witness holds its canonical text.

Certificates are rendered either as JSON lines (one object per line, fixed field order) or as a
human-readable report from `templates/certificates.txt.j2`. Wall time is only emitted on
request so that identical runs produce byte-identical streams.
"""

import enum
import pathlib
import time
import typing

import jinja2
import pydantic

import tensor

ENGINE_VERSION = "1.0.0"

_REPORT_TEMPLATE = pathlib.Path(__file__).parent.parent / "templates/certificates.txt.j2"

ParameterValue = str | int | bool


class Status(enum.StrEnum):
    """Outcome of a verification."""

    PASS = "pass"
    FAIL = "fail"


class Conventions(pydantic.BaseModel):
    """Conventions every certificate is computed under."""

    model_config = pydantic.ConfigDict(frozen=True)

    rhat_placement: str = "R^ii_ii = q, R^ji_ij = 1 (i != j), R^ij_ij = q - 1/q (i < j)"
    eps_normalization: str = "eps(1..N) = 1, eps(sigma) = (-q)^inv(sigma)"
    qtrace_weights: str = "D = diag(q^(1-N), q^(3-N), ..., q^(N-1))"
    generator_order: str = "row-major"
    monomial_order: str = "degree-lex"
    q_samples: tuple[str, ...] = ("3/5", "7/2")


class Certificate(pydantic.BaseModel):
    """Structured verification report.

    Attributes:
        claim: Stable claim id, e.g. ``newton-relation-i2-n3``.
        n: Dimension N.
        parameters: Extra parameters of the claim.
        status: pass or fail.
        witness: Canonical text of the nonzero residual; empty on pass.
        wall_time: Seconds spent, only set when timing is requested.
        engine_version: Version of this engine.
        conventions: Conventions the computation used.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    claim: str
    n: int = pydantic.Field(ge=1)
    parameters: dict[str, ParameterValue] = {}
    status: Status
    witness: str = ""
    wall_time: float | None = None
    engine_version: str = ENGINE_VERSION
    conventions: Conventions = Conventions()

    @pydantic.model_validator(mode="after")
    def _validate_witness(self) -> "Certificate":
        if (self.status == Status.PASS) != (self.witness == ""):
            raise ValueError("a certificate passes exactly when its witness is empty")
        return self

    @property
    def passed(self) -> bool:
        """Whether the claim was verified."""
        return self.status == Status.PASS


def claim_id(slug: str, **params: ParameterValue) -> str:
    """Build a claim id from a descriptive slug and its parameters, in the given order.

    For example ``claim_id("newton-relation", i=2, n=3)`` is ``newton-relation-i2-n3``.
    """
    return "-".join([slug, *(f"{k}{v}" for k, v in params.items())])


def describe(residual: typing.Any) -> str:
    """Canonical text of a residual, empty when it is zero.

    Args:
        residual: A scalar, NCPoly, TensorOp, CoTensor, text, or a sequence of these.

    Returns:
        The witness text.
    """
    if residual is None or isinstance(residual, str):
        return residual or ""
    if isinstance(residual, tensor.TensorOp):
        return "; ".join(
            f"{''.join(map(str, r))}->{''.join(map(str, c))}: {residual.ring.to_text(v)}"
            for r, c, v in residual.items()
        )
    if isinstance(residual, tensor.CoTensor):
        return "; ".join(
            f"{''.join(map(str, i))}: {residual.ring.to_text(v)}" for i, v in residual.items()
        )
    if isinstance(residual, list | tuple):
        parts = [describe(item) for item in residual]
        return " | ".join(f"[{k}] {p}" for k, p in enumerate(parts) if p)
    # scalars, NCPoly and exact rationals print canonically
    return str(residual) if residual else ""


class Stopwatch:
    """Measures the wall time of one verification."""

    def __init__(self) -> None:
        """Start measuring."""
        self._start = time.perf_counter()

    def elapsed(self) -> float:
        """Seconds since construction."""
        return round(time.perf_counter() - self._start, 6)


def certify(
    claim: str,
    n: int,
    residual: typing.Any,
    parameters: dict[str, ParameterValue] | None = None,
    stopwatch: Stopwatch | None = None,
) -> Certificate:
    """Build a certificate from a residual; the claim passes iff the residual is zero.

    Args:
        claim: Claim id.
        n: Dimension N.
        residual: Residual of the identity (see describe).
        parameters: Extra claim parameters.
        stopwatch: When given, the certificate records the elapsed time.

    Returns:
        The certificate.
    """
    witness = describe(residual)
    return Certificate(
        claim=claim,
        n=n,
        parameters=parameters or {},
        status=Status.FAIL if witness else Status.PASS,
        witness=witness,
        wall_time=stopwatch.elapsed() if stopwatch else None,
    )


def failed(
    claim: str, n: int, reason: str, parameters: dict[str, ParameterValue] | None = None
) -> Certificate:
    """A failed certificate carrying an error description as its witness."""
    return Certificate(
        claim=claim,
        n=n,
        parameters=parameters or {},
        status=Status.FAIL,
        witness=reason or "failed",
    )


def render_json_lines(certificates: typing.Iterable[Certificate], timing: bool = False) -> str:
    """One JSON object per certificate and line, in the given order."""
    exclude = None if timing else {"wall_time"}
    return "".join(f"{c.model_dump_json(exclude=exclude)}\n" for c in certificates)


def render_text(certificates: typing.Iterable[Certificate], timing: bool = False) -> str:
    """Human-readable report."""
    certificates = list(certificates)
    template = _REPORT_TEMPLATE.read_text(encoding="utf-8")
    return (
        jinja2.Environment(
            loader=jinja2.BaseLoader(),
            autoescape=False,  # noqa: S701  # nosec B701
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        .from_string(template)
        .render(
            certificates=certificates,
            timing=timing,
            passed=sum(1 for c in certificates if c.passed),
            conventions=certificates[0].conventions if certificates else Conventions(),
            engine_version=ENGINE_VERSION,
        )
    )
