"""Exception hierarchy shared by the solvers and pipelines."""

from __future__ import annotations

import json
from pathlib import Path


class PierceLabError(Exception):
    """Base class for every error raised by pierce_lab."""


class InvalidParameters(PierceLabError, ValueError):
    pass


class UnpierceableMember(PierceLabError, ValueError):
    """A set system contains an empty member, so no hitting set exists."""

    def __init__(self, set_index: int):
        super().__init__(f"unpierceable member: set {set_index} is empty")
        self.set_index = set_index


class SolverBudgetExhausted(PierceLabError):
    """Raised when a branch-and-bound search exceeds its node budget.

    ``lower`` and ``upper`` are the best bounds proven before giving up.
    """

    def __init__(self, nodes: int, lower: int, upper: int | None):
        super().__init__(
            f"solver budget exhausted after {nodes} nodes "
            f"(best bounds: {lower} <= value <= {upper})"
        )
        self.nodes = nodes
        self.lower = lower
        self.upper = upper


class HypothesisViolation(PierceLabError):
    """The input does not satisfy a pipeline's preconditions.

    ``witness`` identifies the offending rectangles (indices) or subset.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message}: witness {witness}")
        self.witness = witness


class TheoremViolation(PierceLabError):
    """A proven bound failed on a concrete instance.

    This should never happen; when it does the instance is a counterexample
    (or a bug) and is written to ``dump_path`` if one was supplied.
    """

    def __init__(self, message: str, instance=None, dump_path: str | Path | None = None):
        self.instance = instance
        self.dump_path = None
        if dump_path is not None and instance is not None:
            from .serialize import instance_to_dict

            path = Path(dump_path)
            path.parent.mkdir(parents=True, exist_ok=True)
            payload = instance_to_dict(instance) if hasattr(instance, "rects") else instance
            path.write_text(json.dumps(payload, indent=1) + "\n")
            self.dump_path = path
        suffix = f" (counterexample written to {self.dump_path})" if self.dump_path else ""
        super().__init__(f"theorem violation: {message}{suffix}")
