"""
Base utilities for experiment modules.
"""

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from iwasawa.types import (
    STATUS_ZERO,
    VERDICT_FAIL,
    VERDICT_HYPOTHESIS,
    VERDICT_PASS,
    ElementParseError,
    IwasawaError,
    PrecisionExhaustedError,
)

from ..config import FORMAT_CSV, ConfigError, ExperimentConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_ZERO = 4

STAIRCASE_COLUMNS = [
    "trial", "n", "parity", "mu_theta", "lambda_theta", "q_n", "expected_lambda", "verdict",
]

DEGENERATE = "degenerate"

TrialFunc = Callable[[int, np.random.SeedSequence, ExperimentConfig], Dict[str, Any]]


# =============================================================================
# Command schemas
# =============================================================================

# Shared argument definitions, keyed by ExperimentConfig field.
CONFIG_PROPERTIES: Dict[str, Dict[str, Any]] = {
    "p": {"type": "integer", "default": 5, "description": "Odd prime p >= 3"},
    "precision": {"type": "integer", "default": 20, "description": "Working precision N (residues mod p^N)"},
    "n_max": {"type": "integer", "default": 4, "description": "Highest level n"},
    "trunc": {"type": "integer", "description": "Truncation degree D (default: p^n_max)"},
    "trials": {"type": "integer", "default": 100, "description": "Number of random trials"},
    "seed": {"type": "integer", "default": 1, "description": "Root seed"},
    "a_p": {"type": "integer", "description": "Hecke eigenvalue a_p (default: random unit / 0)"},
    "mu": {"type": "integer", "default": 0, "description": "Target mu of drawn L-series"},
    "lam": {"type": "integer", "default": 1, "flag": "--lambda", "description": "Target lambda of drawn L-series"},
    "perturb": {"type": "string", "description": "Negative control: add 1 to coefficient INDEX of theta_LEVEL (LEVEL:INDEX)"},
    "workers": {"type": "integer", "default": 1, "description": "Worker processes"},
    "out": {"type": "string", "description": "Output file (default: stdout)"},
    "fmt": {"type": "string", "default": "json", "enum": ["json", "csv"], "flag": "--format", "description": "Report format"},
}


def config_schema(*names: str) -> Dict[str, Any]:
    """inputSchema over a subset of the shared config arguments."""
    return {
        "type": "object",
        "properties": {name: dict(CONFIG_PROPERTIES[name]) for name in names},
        "required": [],
    }


@dataclass
class CommandResult:
    """What a command hands back to the CLI."""
    report: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = EXIT_OK
    rows: List[Dict[str, Any]] = field(default_factory=list)
    columns: List[str] = field(default_factory=list)
    text: Optional[str] = None


# =============================================================================
# Trials
# =============================================================================

def trial_seeds(seed: int, trials: int) -> List[np.random.SeedSequence]:
    """Independent child streams, one per trial, fixed by the root seed."""
    return np.random.SeedSequence(seed).spawn(trials)


def run_trials(func: TrialFunc, config: ExperimentConfig) -> List[Dict[str, Any]]:
    """Run func for every trial, in a process pool when workers > 1; results come back in trial order."""
    seeds = trial_seeds(config.seed, config.trials)
    if config.workers == 1:
        results = []
        for index, seq in enumerate(seeds):
            results.append(func(index, seq, config))
            logger.debug(f"trial {index + 1}/{config.trials} done")
        return results

    keyed: Dict[int, Dict[str, Any]] = {}
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        futures = {pool.submit(func, i, seq, config): i for i, seq in enumerate(seeds)}
        for future in as_completed(futures):
            keyed[futures[future]] = future.result()
    logger.info(f"{config.trials} trials finished on {config.workers} workers")
    return [keyed[i] for i in range(config.trials)]


def classify(report: Dict[str, Any]) -> str:
    """Bucket a theorem report: zero-at-precision draws count as degenerate."""
    if report["verdict"] == VERDICT_HYPOTHESIS and report.get("reason") == STATUS_ZERO:
        return DEGENERATE
    return report["verdict"]


def tally(reports: List[Dict[str, Any]]) -> Dict[str, int]:
    counts = {VERDICT_PASS: 0, VERDICT_FAIL: 0, VERDICT_HYPOTHESIS: 0, DEGENERATE: 0}
    for report in reports:
        counts[classify(report)] += 1
    counts["trials"] = len(reports)
    return counts


def staircase_rows(reports: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """Flatten per-trial level rows into CSV records."""
    rows = []
    for report in reports:
        for row in report.get("rows", []):
            record = {"trial": report["trial"]}
            record.update({k: row[k] for k in STAIRCASE_COLUMNS if k != "trial"})
            rows.append(record)
    return rows


def theorem_result(command: str, config: ExperimentConfig, reports: List[Dict[str, Any]]) -> CommandResult:
    summary = tally(reports)
    logger.info(
        f"{command}: {summary[VERDICT_PASS]} pass, {summary[VERDICT_FAIL]} fail, "
        f"{summary[VERDICT_HYPOTHESIS]} hypothesis-not-met, {summary[DEGENERATE]} degenerate"
    )
    return CommandResult(
        report={
            "command": command,
            "config": config.to_dict(),
            "summary": summary,
            "trials": reports,
        },
        exit_code=EXIT_FAIL if summary[VERDICT_FAIL] else EXIT_OK,
        rows=staircase_rows(reports),
        columns=list(STAIRCASE_COLUMNS),
    )


# =============================================================================
# Output
# =============================================================================

def render(result: CommandResult, fmt: str) -> str:
    if result.text is not None:
        return result.text + "\n"
    if fmt == FORMAT_CSV:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=result.columns, lineterminator="\n")
        writer.writeheader()
        for row in result.rows:
            writer.writerow({k: "" if row.get(k) is None else row[k] for k in result.columns})
        return buffer.getvalue()
    return json.dumps(result.report, indent=2, sort_keys=True) + "\n"


def write_output(text: str, out: Optional[str]):
    if out is None:
        print(text, end="")
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"wrote {path}")


def safe_execute(
    execute: Callable[[ExperimentConfig, str, Dict[str, Any]], CommandResult],
    config: ExperimentConfig,
    command: str,
    args: Dict[str, Any],
) -> CommandResult:
    """Run a command, turning library errors into exit codes."""
    try:
        return execute(config, command, args)
    except ConfigError as e:
        logger.error(f"configuration error: {e}")
        return CommandResult(report={"error": str(e)}, exit_code=EXIT_CONFIG)
    except ElementParseError as e:
        logger.error(f"cannot read element: {e}")
        return CommandResult(report={"error": str(e)}, exit_code=EXIT_PARSE)
    except PrecisionExhaustedError as e:
        logger.error(str(e))
        return CommandResult(report={"error": str(e)}, exit_code=EXIT_ZERO)
    except IwasawaError as e:
        logger.error(f"{command} failed: {e}")
        return CommandResult(report={"error": str(e)}, exit_code=EXIT_FAIL)
