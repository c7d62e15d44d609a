# SPDX-License-Identifier: Apache-2.0
"""CNF transformations for projected AllSAT enumeration.

Thin wrapper over the C++ core; see the README for the full toolkit.
"""

from enumcnf._core import (
    BudgetError,
    AigerFormatError,
    Encoding,
    Formula,
    FormulaParseError,
    encode,
    enumerate_projected,
    gen_random,
    load_aiger,
    parse,
    verify,
)

__all__ = [
    "AigerFormatError",
    "BudgetError",
    "Encoding",
    "Formula",
    "FormulaParseError",
    "encode",
    "enumerate_projected",
    "gen_random",
    "load_aiger",
    "parse",
    "verify",
]
