# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

"""Command-line driver: one subcommand per family of verifications.

Every subcommand streams certificates in a fixed order and exits with
 - 0 when every certificate passes,
 - 1 when any certificate fails,
 - 2 when the flags are invalid.
The dump subcommands write tensors in the tensor file format instead.
"""

import argparse
import fractions
import logging
import pathlib
import sys
import typing
from collections.abc import Callable, Sequence

import pydantic

import certificate
import charpoly
import oracle
import qstruct
import rea
import ring
import tensor
from certificate import Certificate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

DEFAULT_SEEDS = range(20)

# inclusive N ranges accepted per subcommand
_STRUCTURE_RANGE = (1, 5)
_ALGEBRA_RANGE = (1, 3)
_N_RANGES: dict[str, tuple[int, int]] = {
    "axioms": _STRUCTURE_RANGE,
    "dump-rhat": _STRUCTURE_RANGE,
    "dump-eps": _STRUCTURE_RANGE,
    "alpha": (1, 6),
    "classical": (1, 4),
}

_RECOVERABLE_ERRORS = (
    qstruct.ConventionError,
    rea.PBWError,
    charpoly.CentralityError,
    charpoly.IdentityError,
    oracle.RepresentationError,
    ring.ZeroDenominatorError,
)


class InvalidArgumentsError(Exception):
    """Invalid command-line arguments."""


class RunOptions(pydantic.BaseModel):
    """Validated run parameters.

    Attributes:
        command: Subcommand name.
        n: Dimension N.
        json_output: Emit JSON lines instead of the text report.
        out: Output file, or "-" for standard output.
        timing: Include wall times.
        verbose: Log at DEBUG level.
        q: Rational q for eval; both default samples when omitted.
        rep: Representation for eval.
        check: Identity for eval.
        seed: Seed for classical and sampled confluence; 0..19 for classical when omitted.
        p: Offset of the higher trace.
        degree: Word length for confluence.
        dump: File receiving the rewrite rules.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    command: str
    n: int
    json_output: bool = False
    out: str = "-"
    timing: bool = False
    verbose: bool = False
    q: fractions.Fraction | None = None
    rep: typing.Literal["identity", "rsquared", "all"] = "all"
    check: oracle.Check = oracle.Check.ALL
    seed: int | None = pydantic.Field(default=None, ge=0)
    p: int = pydantic.Field(default=1, ge=1)
    degree: int = pydantic.Field(default=3, ge=3)
    dump: str | None = None

    @pydantic.field_validator("q", mode="before")
    @classmethod
    def _parse_q(cls, value: typing.Any) -> fractions.Fraction | None:
        if value is None or isinstance(value, fractions.Fraction):
            return value
        try:
            q = fractions.Fraction(str(value))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"q must be a rational A/B, got '{value}'") from exc
        if q == 0:
            raise ValueError("q cannot be 0")
        return q

    @pydantic.model_validator(mode="after")
    def _validate_n(self) -> "RunOptions":
        low, high = _N_RANGES.get(self.command, _ALGEBRA_RANGE)
        if not low <= self.n <= high:
            raise ValueError(f"{self.command} accepts --n in {low}..{high}, got {self.n}")
        return self

    @property
    def q_samples(self) -> tuple[fractions.Fraction, ...]:
        """The q values to evaluate at."""
        return (self.q,) if self.q is not None else oracle.Q_SAMPLES

    @property
    def seeds(self) -> Sequence[int]:
        """Seeds for the classical check."""
        return [self.seed] if self.seed is not None else DEFAULT_SEEDS


class Session:
    """Runs subcommands for one set of options, sharing the symbolic engine."""

    def __init__(self, options: RunOptions):
        """Initialize the session.

        Args:
            options: Validated options.
        """
        self.options = options
        self.n = options.n
        self._engine: charpoly.CharacteristicEngine | None = None

    @property
    def engine(self) -> charpoly.CharacteristicEngine:
        """The symbolic engine, built on first use.

        Centrality is reported by the central step rather than raised by the engine.
        """
        if self._engine is None:
            self._engine = charpoly.CharacteristicEngine(self.n, check_centrality=False)
        return self._engine

    def _certify(
        self,
        slug: str,
        residual: typing.Any,
        parameters: dict[str, certificate.ParameterValue] | None = None,
        stopwatch: certificate.Stopwatch | None = None,
        **claim_params: certificate.ParameterValue,
    ) -> Certificate:
        return certificate.certify(
            certificate.claim_id(slug, **claim_params, n=self.n),
            self.n,
            residual,
            parameters,
            stopwatch if self.options.timing else None,
        )

    def _timer(self) -> certificate.Stopwatch | None:
        return certificate.Stopwatch() if self.options.timing else None

    def axioms(self) -> list[Certificate]:
        """Braid relation, Hecke condition, ε_q eigenrelation, ε_q norm, q-trace of R̂."""
        rhat = qstruct.build_rhat(self.n)
        eps = qstruct.build_eps(self.n, rhat)
        d = qstruct.build_d(self.n)
        return [
            self._certify(
                "yang-baxter", qstruct.yang_baxter_residual(rhat) if self.n > 1 else None
            ),
            self._certify("hecke-condition", qstruct.hecke_residual(rhat)),
            self._certify(
                "eps-eigenrelation-both-sides",
                qstruct.eps_left_residuals(rhat, eps) + qstruct.eps_right_residuals(rhat, eps),
                {"kernel_dimension": qstruct.kernel_dimension(self.n, rhat)}
                if self.n <= 4
                else {},
            ),
            self._certify("eps-norm", qstruct.eps_norm_residual(eps)),
            self._certify("qtrace-rhat", qstruct.qtrace_rhat_residual(rhat, d)),
        ]

    def relations(self) -> list[Certificate]:
        """Relation rank and PBW leading words; optionally dump the rewrite rules."""
        engine = self.engine
        expected = self.n**2 * (self.n**2 - 1) // 2
        rank = rea.relation_rank(engine.relations)
        if self.options.dump:
            pathlib.Path(self.options.dump).write_text(engine.system.dump_json(), encoding="utf-8")
            logger.info("wrote %d rules to %s", engine.system.rule_count, self.options.dump)
        return [
            self._certify(
                "relation-rank",
                "" if rank == expected else f"rank {rank} != {expected}",
                {"rank": rank},
            ),
            self._certify(
                "pbw-leading-words",
                "" if engine.system.rule_count == expected else "rule count mismatch",
                {"rules": engine.system.rule_count},
            ),
        ]

    def confluence(self) -> list[Certificate]:
        """Leftmost and rightmost reduction agree."""
        return [
            rea.check_confluence(self.engine.system, self.options.degree, self.options.seed or 0)
        ]

    def central(self) -> list[Certificate]:
        """Centrality of s_q(i) and σ_q(i) for i <= N."""
        engine = self.engine
        certificates = []
        for kind, element in (("s", engine.s_q), ("sigma", engine.sigma_q)):
            for i in range(1, self.n + 1):
                stopwatch = self._timer()
                report = rea.is_central(element(i).value, engine.system)
                witness = "" if report else f"[{report.generator}, {kind}] = {report.residual}"
                certificates.append(self._certify(f"central-{kind}", witness, {}, stopwatch, i=i))
        return certificates

    def symmetrizer(self) -> list[Certificate]:
        """S_N(L) commutes with every R̂_i; ε_q S_N(L^i) = s_q(i) ε_q."""
        engine = self.engine
        certificates = [
            self._certify("symmetrizer-commutes", engine.symmetrizer_commutation_residuals())
        ]
        for i in range(1, self.n + 1):
            certificates.append(
                self._certify("symmetrizer-trace", engine.symmetrizer_trace_residual(i), i=i)
            )
        return certificates

    def alpha(self) -> list[Certificate]:
        """Closed form, recursion and anchor of the α table."""
        table = charpoly.AlphaTable(
            n=self.n,
            alphas=tuple(charpoly.alpha_closed_form(self.n, i) for i in range(1, self.n + 1)),
        )
        return [
            self._certify(
                "alpha-table",
                charpoly.alpha_residuals(table),
                {f"alpha_{i}": str(a) for i, a in enumerate(table.alphas, start=1)},
            )
        ]

    def newton(self) -> list[Certificate]:
        """Quantum Newton relations for i = 1..N, in both multiplication orders."""
        certificates = []
        for i in range(1, self.n + 1):
            stopwatch = self._timer()
            residual = [
                self.engine.newton_residual(i),
                self.engine.newton_residual(i, sigma_first=True),
            ]
            certificates.append(self._certify("newton-relation", residual, {}, stopwatch, i=i))
        return certificates

    def telescoping(self) -> list[Certificate]:
        """Term-by-term splitting of s_q(i-p) σ_q(p)."""
        return [
            self._certify(
                "telescoping-lemma", self.engine.telescoping_residual(i, p), {}, None, i=i, p=p
            )
            for i in range(2, self.n + 1)
            for p in range(1, i)
        ]

    def charpoly(self) -> list[Certificate]:
        """The two forms of Δ(x) agree; its leading coefficient is (-1)^N."""
        stopwatch = self._timer()
        delta = self.engine.charpoly()
        return [
            self._certify("charpoly-two-forms", self.engine.charpoly_residuals(), {}, stopwatch),
            self._certify(
                "charpoly-leading",
                rea.NCPoly.sum([delta.coefficients[-1], (-1) ** (self.n + 1)]),
            ),
        ]

    def cayley(self) -> list[Certificate]:
        """Δ(L) = 0 with σ on either side."""
        stopwatch = self._timer()
        residual = [
            self.engine.cayley_hamilton_residual(),
            self.engine.cayley_hamilton_residual(sigma_first=True),
        ]
        return [self._certify("cayley-hamilton", residual, {}, stopwatch)]

    def bmatrix(self) -> list[Certificate]:
        """(L - x)B(L, x)ε_q = ε_q Δ(x), and its failure for the shift q³."""
        stopwatch = self._timer()
        certificates = [
            self._certify(
                "b-matrix-relation", self.engine.b_relation_residual(), {"beta": "q^2"}, stopwatch
            )
        ]
        if self.n >= 2:
            perturbed = self.engine.b_relation_residual(ring.qpow(3))
            failed = any(not r.is_zero for r in perturbed)
            certificates.append(
                self._certify(
                    "b-matrix-shift-forced",
                    "" if failed else "the relation also holds with beta = q^3",
                    {"beta": "q^3"},
                )
            )
        return certificates

    def inverse(self) -> list[Certificate]:
        """L·adj = adj·L = σ_q(N)·1."""
        return [self.engine.inverse_check()]

    def higher(self) -> list[Certificate]:
        """s_q(N+p) through lower traces."""
        return [self.engine.higher_trace(self.options.p)]

    def det(self) -> list[Certificate]:
        """Det L = q^{1-N} σ_q(N), central; SL_q(N) is the quotient by Det L = 1."""
        stopwatch = self._timer()
        det = self.engine.det_l()
        report = rea.is_central(det.value, self.engine.system)
        return [
            self._certify(
                "quantum-determinant",
                "" if report else f"[{report.generator}, Det L] = {report.residual}",
                {"det": str(det.value), "sl_q": "quotient by Det L = 1"},
                stopwatch,
            )
        ]

    def eval(self) -> list[Certificate]:
        """Identities in explicit representations at rational q."""
        builders: list[tuple[str, Callable[[int, fractions.Fraction], oracle.Representation]]] = [
            ("identity", oracle.rep_identity),
            ("rsquared", oracle.rep_rsquared),
        ]
        certificates = []
        for q0 in self.options.q_samples:
            for name, build in builders:
                if self.options.rep not in (name, "all"):
                    continue
                try:
                    rep = build(self.n, q0)
                except (pydantic.ValidationError, *_RECOVERABLE_ERRORS) as exc:
                    logger.exception("representation %s at q=%s failed", name, q0)
                    certificates.append(
                        certificate.failed(
                            certificate.claim_id(
                                f"rep-{name}", n=self.n, q=str(q0).replace("/", "_")
                            ),
                            self.n,
                            str(exc),
                        )
                    )
                    continue
                certificates.extend(oracle.eval_checks(rep, self.options.check, self.engine))
                if name == "identity" and self.options.check == oracle.Check.ALL:
                    certificates.append(oracle.identity_rep_values(rep, self.engine))
        return certificates

    def classical(self) -> list[Certificate]:
        """q = 1 against the textbook formulas."""
        certificates = [oracle.classical_check(self.n, seed) for seed in self.options.seeds]
        if self.n <= _ALGEBRA_RANGE[1]:
            certificates.append(oracle.symbolic_collapse_check(self.engine, self.options.seeds[0]))
        return certificates

    def suite(self) -> list[Certificate]:
        """The full pipeline."""
        certificates = []
        for step in (
            self.axioms,
            self.relations,
            self.confluence,
            self.central,
            self.symmetrizer,
            self.alpha,
            self.newton,
            self.telescoping,
            self.charpoly,
            self.cayley,
            self.bmatrix,
            self.inverse,
            self.higher,
            self.det,
            self.eval,
            self.classical,
        ):
            certificates.extend(_guarded(step, step.__name__, self.n))
        return certificates


def _guarded(step: Callable[[], list[Certificate]], name: str, n: int) -> list[Certificate]:
    """Run a step, turning engine failures into a failed certificate."""
    try:
        return step()
    except _RECOVERABLE_ERRORS as exc:
        logger.exception("%s failed for N=%d", name, n)
        reason = f"{type(exc).__name__}: {exc}"
        return [certificate.failed(certificate.claim_id(name, n=n), n, reason)]


_COMMANDS: dict[str, str] = {
    "axioms": "R-matrix axioms, epsilon tensor and q-trace",
    "dump-rhat": "write the R-matrix in the tensor file format",
    "dump-eps": "write the epsilon tensor in the tensor file format",
    "relations": "relation rank, PBW check and rewrite rules",
    "confluence": "agreement of reduction strategies",
    "central": "centrality of s_q(i) and sigma_q(i)",
    "symmetrizer": "symmetrizer identities",
    "alpha": "normalizing constants of sigma_q",
    "newton": "quantum Newton relations",
    "telescoping": "term-by-term lemma behind the Newton relations",
    "charpoly": "the two forms of the characteristic polynomial",
    "cayley": "quantum Cayley-Hamilton identity",
    "bmatrix": "B-matrix relation and its negative control",
    "inverse": "inverse matrix formula",
    "higher": "higher power traces",
    "det": "quantum determinant",
    "eval": "identities in explicit representations at rational q",
    "classical": "classical limit against textbook formulas",
    "suite": "the full pipeline",
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="dimension N")
    common.add_argument("--json", action="store_true", dest="json_output", help="JSON lines")
    common.add_argument("--out", default="-", help="output file, '-' for standard output")
    common.add_argument("--timing", action="store_true", help="include wall times")
    common.add_argument("--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog="rea-verify",
        description="Exact verification of characteristic identities of the GL_q(N) "
        "reflection equation algebra.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text in _COMMANDS.items():
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        if name == "relations":
            sub.add_argument("--dump", help="write the rewrite rules as JSON")
        if name == "confluence":
            sub.add_argument("--degree", type=int, default=3, help="word length (>= 3)")
            sub.add_argument("--seed", type=int, help="seed of sampled word sets")
        if name == "higher":
            sub.add_argument("--p", type=int, default=1, help="offset p >= 1")
        if name == "eval":
            sub.add_argument("--q", help="rational q as A/B")
            sub.add_argument("--rep", choices=["identity", "rsquared", "all"], default="all")
            sub.add_argument("--check", choices=[c.value for c in oracle.Check], default="all")
        if name == "classical":
            sub.add_argument("--seed", type=int, help="seed of the random matrix")
    return parser


def parse_options(argv: Sequence[str] | None = None) -> RunOptions:
    """Parse and validate arguments.

    Raises:
        InvalidArgumentsError: If validation fails.
    """
    args = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(args).items() if v is not None}
    try:
        return RunOptions(**values)
    except pydantic.ValidationError as exc:
        raise InvalidArgumentsError(str(exc)) from exc


def _write(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        pathlib.Path(out).write_text(text, encoding="utf-8")


def run(options: RunOptions) -> int:
    """Execute a subcommand and write its output.

    Returns:
        The exit code.
    """
    if options.command in ("dump-rhat", "dump-eps"):
        rhat = qstruct.build_rhat(options.n)
        target: tensor.TensorOp | tensor.CoTensor = (
            rhat.op if options.command == "dump-rhat" else qstruct.build_eps(options.n, rhat).v
        )
        _write(tensor.dump_json(target), options.out)
        return EXIT_OK
    session = Session(options)
    step = getattr(session, options.command.replace("-", "_"))
    certificates = _guarded(step, options.command, options.n)
    if options.json_output:
        text = certificate.render_json_lines(certificates, options.timing)
    else:
        text = certificate.render_text(certificates, options.timing)
    _write(text, options.out)
    failed = [c.claim for c in certificates if not c.passed]
    if failed:
        logger.warning("%d certificate(s) failed: %s", len(failed), ", ".join(failed))
        return EXIT_FAILED
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point.

    Returns:
        0 if every certificate passes, 1 on a failure, 2 on invalid arguments
        or an output path that cannot be written.
    """
    try:
        options = parse_options(argv)
    except InvalidArgumentsError as exc:
        sys.stderr.write(f"invalid arguments: {exc}\n")
        return EXIT_INVALID
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    logging.basicConfig(
        level=logging.DEBUG if options.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return run(options)
    except OSError as exc:
        sys.stderr.write(f"cannot write output: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: nocover
    sys.exit(main())
