"""The mono-forge console script, a thin wrapper around the forge management command."""
import os
import sys
from collections.abc import Sequence
from importlib.metadata import PackageNotFoundError
from importlib.metadata import version

import django
from django.core.management import load_command_class


def version_header() -> str:
    """The line written to stderr before every command."""
    try:
        return f"mono-forge {version('monoforge')}"
    except PackageNotFoundError:
        return "mono-forge (not installed)"


def run(argv: Sequence[str]) -> int:
    """Run `forge` with the given arguments and return its exit code.

    0 on success, 1 on domain errors, 2 on malformed input or usage errors.
    """
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "monoforge.settings")
    django.setup()
    command = load_command_class("cli", "forge")
    try:
        command.run_from_argv(["mono-forge", "forge", *argv])
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 1
    return 0


def main() -> None:
    """Console script entry point."""
    sys.exit(run(sys.argv[1:]))
