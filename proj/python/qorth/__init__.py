"""q-orthogonal polynomials at configurable precision.

Values go in and come out as decimal strings so nothing is lost to binary
floats. Gram and suite results come back as parsed JSON.
"""

import json

from ._qorth import (
    DegenerateCoefficient,
    IncompatiblePair,
    PoleError,
    PreconditionError,
    QorthError,
    RunConfig,
    SignViolation,
    TruncationFailure,
    identity_ids,
    qpoch,
    qpoch_inf,
)
from . import _qorth

__all__ = [
    "DegenerateCoefficient",
    "IncompatiblePair",
    "PoleError",
    "PreconditionError",
    "QorthError",
    "RunConfig",
    "SignViolation",
    "TruncationFailure",
    "evaluate",
    "gram",
    "identity_ids",
    "qpoch",
    "qpoch_inf",
    "sweep",
    "verify",
]


def _config(command, **options):
    config = RunConfig()
    config.command = command
    for key, value in options.items():
        if value is None:
            continue
        if not hasattr(config, key):
            raise TypeError(f"unknown option {key!r}")
        if key in ("q", "s", "a", "x", "phi", "mu", "a_from", "a_to"):
            value = str(value)
        setattr(config, key, value)
    return config


def evaluate(family, n, *, x=None, phi=None, mu=None, q="0.5", s=None, s_mode=None,
             bits=256, tol_exp=200):
    """P_n at one point, as a decimal string."""
    config = _config("eval", family=family, n=n, x=x, phi=phi, mu=mu, q=q, s=s,
                     s_mode=s_mode, bits=bits, tol_exp=tol_exp, output="json")
    _, text = _qorth.cmd_eval(config)
    return json.loads(text)["value"]


def gram(measure="hermite-extremal", N=8, *, q="0.5", a=None, s=None, s_mode=None,
         parity="even", family=None, bits=256, tol_exp=200, threads=0):
    """Gram report of a family against a discrete measure."""
    config = _config("gram", measure=measure, N=N, q=q, a=a, s=s, s_mode=s_mode,
                     parity=parity, family=family, bits=bits, tol_exp=tol_exp,
                     threads=threads, output="json")
    _, text = _qorth.cmd_gram(config)
    return json.loads(text)


def verify(*, q="0.5", only=None, skip=None, k_max=6, bits=256, tol_exp=200):
    """Identity reports, one dict per check."""
    config = _config("verify", q=q, only=list(only or []), skip=list(skip or []),
                     k_max=k_max, bits=bits, tol_exp=tol_exp, output="json")
    _, text = _qorth.cmd_verify(config)
    return json.loads(text)


def sweep(*, q="0.5", a_from="q", a_to="0.95", steps=10, N=8, bits=256, tol_exp=200):
    """Extremal Hermite measures across a range of a."""
    config = _config("sweep", q=q, a_from=a_from, a_to=a_to, steps=steps, N=N, bits=bits,
                     tol_exp=tol_exp, output="json")
    _, text = _qorth.cmd_sweep(config)
    return json.loads(text)
