"""L_p discrepancy of point sets and certified curse-of-dimensionality bounds."""

import json

from ._core import (
    Certificate,
    ConsistencyError,
    Error,
    I_integral,
    NoBalanceError,
    ResourceError,
    ValidationError,
    alpha_decay,
    certificate,
    certified_min_n,
    decompose,
    default_certificate,
    discrepancy,
    fooling_check,
    generate,
    initial_discrepancy,
    initial_error,
    normalized_error_lb,
    optimize_a,
    pow2_minus_1,
    run_cli,
    solve_c,
)


def certificate_dict(cert):
    return json.loads(cert.to_json())


__all__ = [
    "Certificate",
    "ConsistencyError",
    "Error",
    "I_integral",
    "NoBalanceError",
    "ResourceError",
    "ValidationError",
    "alpha_decay",
    "certificate",
    "certificate_dict",
    "certified_min_n",
    "decompose",
    "default_certificate",
    "discrepancy",
    "fooling_check",
    "generate",
    "initial_discrepancy",
    "initial_error",
    "normalized_error_lb",
    "optimize_a",
    "pow2_minus_1",
    "run_cli",
    "solve_c",
]
