"""Python bindings for the mwumech library.

All operations exchange JSON strings; helpers here add dict-level wrappers so
callers can stay in native Python types.
"""

import json as _json

from ._mwumech import (  # noqa: F401
    MwumechError,
    decompose,
    generate_instance,
    json_to_csv,
    measured_alpha,
    mechanism_audit,
    mechanism_run,
    solve_cover,
    solve_pack,
)

__all__ = [
    "MwumechError",
    "decompose",
    "generate_instance",
    "json_to_csv",
    "measured_alpha",
    "mechanism_audit",
    "mechanism_run",
    "solve_cover",
    "solve_pack",
    "solve_cover_dict",
    "solve_pack_dict",
    "decompose_dict",
    "mechanism_audit_dict",
]


def solve_cover_dict(problem, epsilon=0.25):
    """Solve a covering LP given as a dict; returns the report as a dict."""
    return _json.loads(solve_cover(_json.dumps(problem), epsilon))


def solve_pack_dict(problem, epsilon=0.25):
    """Solve a packing LP or auction welfare problem given as a dict."""
    return _json.loads(solve_pack(_json.dumps(problem), epsilon))


def decompose_dict(instance, x_star, epsilon=0.25, alpha_mode="exact"):
    """Decompose a scaled fractional allocation into integral allocations."""
    payload = _json.dumps({"instance": instance, "x_star": list(x_star)})
    return _json.loads(decompose(payload, epsilon, alpha_mode))


def mechanism_audit_dict(instance, epsilon0=0.5, epsilon=0.25, alpha_mode="exact", seed=1,
                         monte_carlo=False, samples=20000):
    """Run the exact truthfulness audit; returns the report as a dict."""
    report = mechanism_audit(_json.dumps(instance), epsilon0, epsilon, alpha_mode, seed,
                             monte_carlo, samples)
    return _json.loads(report)
