"""Novikov homology, Lichnerowicz-De Rham calculus, Moser flows, and
beta-generating families on tori.

Structured arguments may be Python dicts or JSON strings; results come back
as plain Python objects.
"""

import json as _json

from lcslab import _core
from lcslab._core import LcsError, laurent_rank, moser_residual

__version__ = _core.__version__

__all__ = [
    "LcsError",
    "novikov_betti",
    "verify_duality",
    "circle_morse_novikov",
    "d_eta",
    "parse_one_form",
    "displaceability",
    "moser_residual",
    "beta_critical_points",
    "theorem_check",
    "laurent_rank",
]


def _dumps(obj):
    return obj if isinstance(obj, str) else _json.dumps(obj)


def novikov_betti(complex, cocycle, field="Q"):
    """Novikov Betti numbers of (complex, cocycle) over Q or F2."""
    if not isinstance(cocycle, (str, dict)):
        cocycle = {"edge_values": list(cocycle)}
    return _core.novikov_betti(_dumps(complex), _dumps(cocycle), field)


def verify_duality(complex, cocycle, field="Q"):
    if not isinstance(cocycle, (str, dict)):
        cocycle = {"edge_values": list(cocycle)}
    return _core.verify_duality(_dumps(complex), _dumps(cocycle), field)


def circle_morse_novikov(f, period):
    """Morse-Novikov data of eta = f(theta) dtheta with the given integral."""
    return _json.loads(_core.circle_morse_novikov(f, period))


def d_eta(beta, eta):
    """Lichnerowicz-De Rham differential of a form (form-JSON dicts)."""
    return _json.loads(_core.d_eta(_dumps(beta), _dumps(eta)))


def parse_one_form(expr):
    return _json.loads(_core.parse_one_form(expr))


def displaceability(beta, tmax=1.0, samples=100, grid=16):
    return _json.loads(_core.displaceability(beta, tmax, samples, grid))


def beta_critical_points(family, beta, q_seeds=64, xi_seeds=33):
    return _json.loads(_core.beta_critical_points(_dumps(family), beta, q_seeds, xi_seeds))


def theorem_check(family, beta, complex, field="Q", q_seeds=64, xi_seeds=33):
    return _json.loads(
        _core.theorem_check(_dumps(family), beta, _dumps(complex), field, q_seeds, xi_seeds)
    )
