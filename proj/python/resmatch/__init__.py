"""Matching with vertical and horizontal reservations.

Instances are JSON text in the same format the ``resmatch`` command reads.
"""

import json

from ._resmatch import InstanceError, generate, independence_summary, policies, violations
from ._resmatch import audit as _audit
from ._resmatch import run as _run

__all__ = ["InstanceError", "audit", "generate", "independence_summary", "policies", "run", "validate",
           "violations"]


def validate(instance: str) -> bool:
    return not violations(instance)


def run(instance: str, policy: str = "no-transfer", break_ties: bool = False, trace: bool = False):
    """Matching as a list of (individual, institution, category) triples.

    With ``trace=True`` returns ``(matching, trace_dict)``.
    """
    out = _run(instance, policy, break_ties)
    if trace:
        return out["matching"], json.loads(out["trace"])
    return out["matching"]


def audit(**kwargs) -> dict:
    return json.loads(_audit(**kwargs))
