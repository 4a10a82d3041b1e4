"""Error taxonomy.

Argument and configuration mistakes raise plain ``ValueError`` (CLI exit
code 1). A model breaking its own numerical contract mid-computation, e.g.
a single-outcome probability leaving [0, 1], raises
``ContractViolationError`` (CLI exit code 2): by that point the arguments
were fine and the numbers themselves went wrong.
"""

from __future__ import annotations


class ContractViolationError(RuntimeError):
    """A numerical contract was broken while evaluating a model."""
