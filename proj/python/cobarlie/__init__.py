"""Rational homotopy Lie algebras from the cobar construction.

Thin wrappers over the native core. Reports come back as plain dicts with the
same layout as the command line JSON output.
"""

import json

from . import _core
from ._core import BudgetExceeded, InvalidInput, VerificationFailure, w_terms

__all__ = [
    "BudgetExceeded",
    "InvalidInput",
    "VerificationFailure",
    "bar",
    "compare",
    "homotopy",
    "show_cdga",
    "show_space",
    "verify",
    "w_terms",
]

_ERRORS = {1: VerificationFailure, 2: InvalidInput, 3: BudgetExceeded}


def _run(args):
    code, out, err = _core.run_cli([str(a) for a in args])
    if code != 0 and not out:
        raise _ERRORS.get(code, RuntimeError)(err.strip())
    return code, json.loads(out)


def verify(n_max=6, pq_max=4, flip_sign=False):
    """Identity suite results as a list of dicts."""
    rows = _core.verify_identities(n_max, pq_max, flip_sign)
    keys = ("identity", "instance", "pass", "counterexample")
    return [dict(zip(keys, r)) for r in rows]


def homotopy(space, N, T, q_max=None, seed=0, budget=None):
    args = ["homotopy", "--space", space, "-N", N, "-T", T, "--seed", seed]
    if q_max is not None:
        args += ["--qmax", q_max]
    if budget is not None:
        args += ["--budget", budget]
    return _run(args)[1]


def bar(cdga, N, T, t_max=None):
    args = ["bar", "--cdga", cdga, "-N", N, "-T", T]
    if t_max is not None:
        args += ["--qmax", t_max]
    return _run(args)[1]


def compare(space, cdga, N, T):
    return _run(["compare", "--space", space, "--cdga", cdga, "-N", N, "-T", T])[1]


def show_space(spec):
    return json.loads(_core.space_json(spec))


def show_cdga(spec):
    return json.loads(_core.cdga_json(spec))
