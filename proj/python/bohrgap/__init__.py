"""Python interface to the bohrgap core.

Low-level primitives come straight from the extension module; the experiment
runners return the decoded report (the ``report`` member of the JSON envelope).
"""

from __future__ import annotations

import json
from typing import Any, Optional

from . import _core
from ._core import (
    CapacityError,
    InvalidParameter,
    NonPositiveEpsilon,
    SCHEMA_VERSION,
    build_level,
    epsilon,
    evaluate,
    norms,
    partial_sum,
    prime_at,
    structure_checks,
    sup_norm_lower,
    walsh_norm_identity_check,
)

__all__ = [
    "CapacityError",
    "InvalidParameter",
    "NonPositiveEpsilon",
    "SCHEMA_VERSION",
    "bounded",
    "bounds",
    "build_level",
    "converge",
    "diverge",
    "epsilon",
    "evaluate",
    "kronecker",
    "norms",
    "partial_sum",
    "prime_at",
    "structure_checks",
    "sup_norm_lower",
    "verify",
    "walsh_norm_identity_check",
]


def _rho(rho: Any) -> str:
    if isinstance(rho, str):
        return rho
    return ",".join(str(r) for r in rho)


def _open(text: str, kind: str) -> dict:
    doc = json.loads(text)
    if doc["schemaVersion"] != SCHEMA_VERSION or doc["kind"] != kind:
        raise ValueError(f"unexpected envelope {doc['kind']} v{doc['schemaVersion']}")
    return doc["report"]


def bounds(M: int = 2, rho: Any = "1,1") -> dict:
    return _open(_core.bounds_json(M, _rho(rho)), "bounds")


def verify(M: int = 2, rho: Any = "1,1", X: Optional[float] = None, Lmax: int = 5, seed: int = 0) -> dict:
    return _open(_core.verify_json(M, _rho(rho), X, Lmax, seed), "verify")


def bounded(
    M: int = 2,
    rho: Any = "1,1",
    X: Optional[float] = None,
    Lmax: int = 6,
    sigma: float = 1.0,
    samples: int = 200,
    seed: int = 0,
    t_range: float = 1e4,
) -> dict:
    return _open(_core.bounded_json(M, _rho(rho), X, Lmax, sigma, samples, seed, t_range), "bounded")


def diverge(M: int = 2, rho: Any = "1,1", X: Optional[float] = None, Lmax: int = 8, sigma: float = 0.2) -> dict:
    return _open(_core.diverge_json(M, _rho(rho), X, Lmax, sigma), "diverge")


def converge(
    M: int = 2, rho: Any = "1,1", X: Optional[float] = None, Lmax: int = 8, epsilon: Optional[float] = None
) -> dict:
    return _open(_core.converge_json(M, _rho(rho), X, Lmax, epsilon), "converge")


def kronecker(
    M: int = 2,
    rho: Any = "1,1",
    L_K: int = 1,
    delta: float = 0.2,
    t_max: float = 1e7,
    mode: str = "trajectory",
    seed: int = 0,
) -> dict:
    if mode not in ("trajectory", "fixed"):
        raise ValueError(f"unknown mode {mode!r}")
    return _open(_core.kronecker_json(M, _rho(rho), L_K, delta, t_max, mode == "fixed", seed), "kronecker")
