# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

"""Unit test helpers."""

import typing

import certificate
import rea
import ring

__all__ = ["assert_all_zero", "assert_passed", "laurent"]


def laurent(**coeffs: int) -> ring.LaurentPoly:
    """Build a Laurent polynomial from keyword exponents.

    Args:
        coeffs: Coefficients keyed ``e<k>`` or ``m<k>`` for q^k and q^-k.

    Returns:
        The Laurent polynomial.
    """
    return ring.LaurentPoly(
        {(-int(k[1:]) if k[0] == "m" else int(k[1:])): c for k, c in coeffs.items()}
    )


def assert_all_zero(residuals: typing.Iterable[typing.Any]) -> None:
    """Check that every residual vanishes.

    Args:
        residuals: NCPoly, scalars, TensorOp or CoTensor values.
    """
    for k, residual in enumerate(residuals):
        if isinstance(residual, rea.NCPoly | ring.LaurentPoly | ring.RatFunc):
            assert not residual, f"residual {k} is {residual}"
        else:
            assert residual.is_zero, f"residual {k} is {certificate.describe(residual)}"


def assert_passed(cert: certificate.Certificate) -> None:
    """Check that a certificate passed, showing its witness otherwise.

    Args:
        cert: The certificate.
    """
    assert cert.passed, f"{cert.claim} failed: {cert.witness}"
