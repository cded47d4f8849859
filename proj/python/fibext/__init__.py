"""Extremal simultaneous approximation of (xi, xi^2) over Z, Z[i], Z[sqrt(-5)] and F_p[u]."""

import json as _json

from ._fibext import (
    FibextError,
    RunReport,
    fib_length,
    fib_word,
    palindrome_length,
    palindrome_prefix,
    version,
)
from . import _fibext

__all__ = [
    "FibextError",
    "RunReport",
    "construct",
    "degenerate_decompose",
    "fib_length",
    "fib_word",
    "oracle",
    "palindrome_length",
    "palindrome_prefix",
    "report",
    "rho",
    "verify",
    "version",
]


def _config_text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def _literal(x):
    return x if isinstance(x, str) else _json.dumps(x)


def construct(config, threads=1):
    """Run the construction pipeline for a config (dict or JSON text)."""
    return _fibext.run_construct(_config_text(config), threads)


def oracle(config, threads=1):
    """Run the minimal-point oracle and its cross-check against the construction."""
    return _fibext.run_oracle(_config_text(config), threads)


def verify(config, threads=1):
    """Run both pipelines."""
    return _fibext.run_verify(_config_text(config), threads)


def report(run):
    """The JSON report of a run as a dict."""
    return _json.loads(run.json())


def rho(domain, a, b, p=0):
    """Certified rho = min(|a|, |b|) - 1 as an exact rational string."""
    return _fibext.rho(domain, _literal(a), _literal(b), p)


def degenerate_decompose(domain, x, p=0):
    """(unit, m, n) with x = unit * (m^2, m n, n^2); coordinates as literals."""
    return _fibext.degenerate_decompose(domain, [_literal(c) for c in x], p)
