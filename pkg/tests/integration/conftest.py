# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

"""Fixtures for command-line integration tests."""

import json
import pathlib
import subprocess  # nosec
import sys
from collections.abc import Callable

import pytest

CLI = pathlib.Path(__file__).parent.parent.parent / "src" / "cli.py"


@pytest.fixture(name="run_cli", scope="session")
def run_cli_fixture() -> Callable[..., subprocess.CompletedProcess]:
    """Run the command line in a fresh interpreter."""

    def run(*args: str) -> subprocess.CompletedProcess:
        """Invoke the command line.

        Args:
            args: command-line arguments.

        Returns:
            The completed process with text output captured.
        """
        return subprocess.run(
            [sys.executable, str(CLI), *args],
            capture_output=True,
            text=True,
            check=False,
            timeout=30 * 60,
        )  # nosec B603

    return run


@pytest.fixture(name="run_json", scope="session")
def run_json_fixture(run_cli) -> Callable[..., tuple[int, list[dict]]]:
    """Run the command line with --json and parse the certificates."""

    def run(*args: str) -> tuple[int, list[dict]]:
        """Invoke the command line and decode its JSON lines.

        Args:
            args: command-line arguments, without --json.

        Returns:
            The exit code and the decoded certificates.
        """
        result = run_cli(*args, "--json")
        certs = [json.loads(line) for line in result.stdout.splitlines() if line]
        return result.returncode, certs

    return run
