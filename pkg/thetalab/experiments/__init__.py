"""
Experiment Modules

Each module exposes one or more CLI commands over the iwasawa library.
Modules are imported on load and register themselves; the CLI builds its
sub-commands from the registry and dispatches through `execute`.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

from ..config import ExperimentConfig
from .base import CommandResult

logger = logging.getLogger(__name__)


@dataclass
class ExperimentModule:
    """A group of commands registered with the CLI."""
    name: str
    description: str
    commands: List[Dict[str, Any]]
    execute: Callable[[ExperimentConfig, str, Dict[str, Any]], CommandResult]


# Registry of available experiment modules
_registry: Dict[str, ExperimentModule] = {}


# =============================================================================
# REGISTRATION FUNCTIONS
# =============================================================================

def register_experiment(module: ExperimentModule):
    """Register an experiment module."""
    _registry[module.name] = module


def get_all_experiments() -> Dict[str, ExperimentModule]:
    """Get all registered experiment modules."""
    return _registry.copy()


def find_command(command: str) -> Optional[ExperimentModule]:
    """The module that provides a command, if any."""
    for module in _registry.values():
        if any(c["name"] == command for c in module.commands):
            return module
    return None


def get_available_commands() -> Dict[str, str]:
    """All commands with their descriptions."""
    return {
        c["name"]: c["description"] for module in _registry.values() for c in module.commands
    }


# =============================================================================
# MODULE LOADING
# =============================================================================

def _import_all_experiments():
    """Import all experiment modules to populate the registry."""
    from . import elements  # noqa: F401
    from . import lemmas  # noqa: F401
    from . import nonordinary  # noqa: F401
    from . import ordinary  # noqa: F401


_import_all_experiments()

_total_commands = sum(len(m.commands) for m in _registry.values())
logger.debug(f"Loaded {len(_registry)} experiment modules with {_total_commands} commands")
