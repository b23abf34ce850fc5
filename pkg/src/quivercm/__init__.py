"""Cyclic quiver varieties: points, group action, reflection functors,
trace invariants, and a symbolic path-rewriting verifier."""

from .weyl import (
    INF,
    DimVector,
    ParamVector,
    RootClass,
    classify_root,
    dual_reflection,
    in_sigma_tau,
    is_generic,
    reduce_to_cm,
    ringel_p,
    simple_reflection,
)

__all__ = [
    "INF",
    "DimVector",
    "ParamVector",
    "RootClass",
    "classify_root",
    "dual_reflection",
    "in_sigma_tau",
    "is_generic",
    "reduce_to_cm",
    "ringel_p",
    "simple_reflection",
]

__version__ = "0.1.0"
