"""
Element inspection.

Reads a JSON-encoded element and prints its Iwasawa invariants.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict

from iwasawa.algebra import FiniteLevelElt, element_from_dict
from iwasawa.invariants import invariants, invariants_series
from iwasawa.types import STATUS_LAMBDA_TRUNCATED, STATUS_ZERO, ElementParseError

from ..config import ExperimentConfig
from . import ExperimentModule, register_experiment
from .base import EXIT_FAIL, EXIT_OK, EXIT_ZERO, CommandResult

logger = logging.getLogger(__name__)


COMMANDS = [
    {
        "name": "invariants",
        "description": "Print mu and lambda of a JSON-encoded element",
        "inputSchema": {
            "type": "object",
            "properties": {
                "element": {
                    "type": "string",
                    "positional": True,
                    "description": "Path to a {p, N, level|deg, coeffs} JSON file",
                },
            },
            "required": ["element"],
        },
    },
]


def load_element(path: str):
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ElementParseError(f"cannot read {path}", context=str(e))
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ElementParseError(f"{path} is not valid JSON", context=str(e))
    return element_from_dict(data)


def cmd_invariants(args: Dict[str, Any]) -> CommandResult:
    element = load_element(args["element"])
    if isinstance(element, FiniteLevelElt):
        result = invariants(element)
    else:
        result = invariants_series(element)
    logger.debug(f"invariants of {args['element']}: {result}")
    exit_code = {STATUS_ZERO: EXIT_ZERO, STATUS_LAMBDA_TRUNCATED: EXIT_FAIL}.get(result.status, EXIT_OK)
    return CommandResult(report=result.to_dict(), exit_code=exit_code, text=str(result))


def execute(config: ExperimentConfig, command: str, args: Dict[str, Any]) -> CommandResult:
    """Execute an inspection command."""
    if command == "invariants":
        return cmd_invariants(args)
    raise ValueError(f"Unknown command: {command}")


register_experiment(ExperimentModule(
    name="elements",
    description="Inspect JSON-encoded elements",
    commands=COMMANDS,
    execute=execute,
))
