"""Drift analysis laboratory."""

from ._driftlab import *  # noqa: F401,F403
from ._driftlab import ConfigError, run_cli

__version__ = "0.1.0"


def main(argv=None):
    import sys

    code, out, err = run_cli(list(sys.argv[1:] if argv is None else argv))
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code
