"""
Theta-Iwasawa experiment CLI

Computes invariants of stored elements and runs the seeded experiments over
the iwasawa library. Sub-commands are built from the experiment registry:

    theta-iwasawa invariants element.json
    theta-iwasawa verify-lemmas --p 5 --trials 100 --seed 1
    theta-iwasawa ordinary --p 5 --a-p 1 --trials 50 --seed 7
    theta-iwasawa nonordinary --p 5 --a-p 0 --mu 0 --lambda 1 --n-max 3 --format csv

Logs go to stderr; stdout (or --out) carries only the report.

Exit codes: 0 ok, 1 a check failed, 2 configuration error, 3 unreadable
element, 4 element is zero at the working precision.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from .config import ExperimentConfig
from .experiments import find_command, get_all_experiments
from .experiments.base import EXIT_OK, render, safe_execute, write_output

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(message)s",
    handlers=[logging.StreamHandler(sys.stderr)],
)
logger = logging.getLogger(__name__)

_TYPES = {"integer": int, "string": str}


def _add_schema_arguments(parser: argparse.ArgumentParser, schema: Dict[str, Any]):
    """Translate a command inputSchema into argparse arguments."""
    for name, prop in schema.get("properties", {}).items():
        kwargs: Dict[str, Any] = {
            "type": _TYPES[prop["type"]],
            "help": prop.get("description", ""),
        }
        if "enum" in prop:
            kwargs["choices"] = prop["enum"]
        if prop.get("positional"):
            parser.add_argument(name, **kwargs)
            continue
        kwargs["default"] = prop.get("default")
        kwargs["dest"] = name
        flag = prop.get("flag", "--" + name.replace("_", "-"))
        parser.add_argument(flag, **kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="theta-iwasawa",
        description="Finite-level Iwasawa invariants and theta-element experiments",
    )
    parser.add_argument(
        "--list-experiments",
        action="store_true",
        help="List available experiment modules and exit",
    )
    parser.add_argument(
        "--debug",
        action="store_true",
        help="Enable debug logging",
    )
    subparsers = parser.add_subparsers(dest="command")
    for module in get_all_experiments().values():
        for command in module.commands:
            sub = subparsers.add_parser(command["name"], help=command["description"])
            _add_schema_arguments(sub, command["inputSchema"])
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Command-line entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.debug:
        logging.getLogger().setLevel(logging.DEBUG)

    if args.list_experiments:
        print("Available experiments:")
        for name, module in sorted(get_all_experiments().items()):
            commands = ", ".join(c["name"] for c in module.commands)
            print(f"  {name}: {module.description} ({commands})")
        return EXIT_OK

    if not args.command:
        parser.print_help(sys.stderr)
        return 2

    module = find_command(args.command)
    if module is None:
        parser.error(f"unknown command {args.command}")
    config = ExperimentConfig.from_args(args)
    result = safe_execute(module.execute, config, args.command, vars(args))
    if "error" in result.report:
        return result.exit_code
    write_output(render(result, config.fmt), config.out)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
