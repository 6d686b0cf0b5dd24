"""
Command-line entry point
"""
import argparse
import logging
import sys
from typing import List, Optional, Tuple

from pydantic import ValidationError

from ..config import get_settings
from ..models.schemas import Command, OutputFormat, PropagationMode, Report, Verb
from ..services import ModelService
from ..utils.exceptions import ModelValidationError, PeakExplainerError, ScenarioError, UsageError
from ..utils.report_writer import ReportWriter
from ..utils.scenario_parser import parse_scenario
from .commands import CommandHandlers

logger = logging.getLogger(__name__)
settings = get_settings()

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

VERB_HELP = {
    Verb.VALIDATE: "check the scenario against the supported model class",
    Verb.SOLVE: "print reward heights and the peak list",
    Verb.EXPLAIN: "dominant peak and collected rewards at a state",
    Verb.MAP: "region-of-dominance map",
    Verb.CONTRIBUTIONS: "relative contribution of each collected peak at a state",
    Verb.PATH: "greedy path from a state into its terminal cycle",
    Verb.CHECK: "compare peak values with tabular value iteration",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peakmap",
        description=f"{settings.app_name}: explain optimal behaviour in deterministic MDPs through reward peaks",
    )
    parser.add_argument("--version", action="version", version=f"{settings.app_name} {settings.app_version}")
    parser.add_argument("--log-level", default=None, help="logging level for stderr")
    subparsers = parser.add_subparsers(dest="verb", required=True)

    for verb, help_text in VERB_HELP.items():
        sub = subparsers.add_parser(verb.value, help=help_text)
        sub.add_argument("scenario", help="scenario file")
        sub.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat],
                         default=OutputFormat.TEXT.value)
        if verb in (Verb.EXPLAIN, Verb.CONTRIBUTIONS, Verb.PATH):
            sub.add_argument("--state", required=True, help="x,y on grids, state index on graphs")
        if verb in (Verb.EXPLAIN, Verb.MAP):
            sub.add_argument("--mode", choices=[m.value for m in PropagationMode],
                             default=PropagationMode.ACHIEVABLE.value)
        if verb == Verb.MAP:
            sub.add_argument("--ppm", dest="ppm_path", default=None, help="also write a P6 image here")
            sub.add_argument("--scale", type=int, default=None, help="pixels per cell")
        if verb == Verb.CHECK:
            sub.add_argument("--budget", type=float, default=None, help="max allowed abs difference")
    return parser


def parse_command(argv: Optional[List[str]] = None) -> Tuple[Command, Optional[str]]:
    """Parse argv into a Command; argparse exits with status 2 on usage errors"""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        command = Command(
            verb=args.verb,
            scenario_path=args.scenario,
            state=getattr(args, "state", None),
            output_format=args.output_format,
            mode=getattr(args, "mode", PropagationMode.ACHIEVABLE.value),
            ppm_path=getattr(args, "ppm_path", None),
            scale=getattr(args, "scale", None),
            budget=getattr(args, "budget", None),
        )
    except ValidationError as e:
        parser.error(str(e))
    return command, args.log_level


def _error_report(verb: Verb, exc: Exception) -> Report:
    report = Report(verb=verb)
    report.section("error").add("type", type(exc).__name__).add("message", str(exc))
    return report


def run(command: Command, text: str) -> Tuple[int, str]:
    """
    Execute one command against scenario text

    Args:
        command: parsed command
        text: scenario file contents

    Returns:
        (exit code, report text); 0 on success, 1 on validation or check
        failure, 2 on usage errors
    """
    writer = ReportWriter()
    model_service = ModelService()
    try:
        model = model_service.build_model(parse_scenario(text))
        validation = model_service.validate_model(model)
        handlers = CommandHandlers()
        if command.verb == Verb.VALIDATE:
            code = EXIT_OK if validation.ok else EXIT_FAILURE
            return code, writer.write(handlers.validation_report(validation), command.output_format)
        if not validation.ok:
            raise ModelValidationError(validation)
        code, report = handlers.handle(command, model)
        return code, writer.write(report, command.output_format)
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE, writer.write(_error_report(command.verb, e), command.output_format)
    except (ScenarioError, ModelValidationError) as e:
        logger.error(f"Rejected scenario: {e}")
        return EXIT_FAILURE, writer.write(_error_report(command.verb, e), command.output_format)
    except PeakExplainerError as e:
        logger.error(f"{command.verb.value} failed: {e}")
        return EXIT_FAILURE, writer.write(_error_report(command.verb, e), command.output_format)


def main(argv: Optional[List[str]] = None) -> int:
    command, log_level = parse_command(argv)
    logging.basicConfig(
        level=(log_level or settings.log_level).upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        with open(command.scenario_path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        logger.error(f"Cannot read scenario: {e}")
        print(f"peakmap: cannot read {command.scenario_path}: {e.strerror}", file=sys.stderr)
        return EXIT_USAGE

    code, output = run(command, text)
    sys.stdout.write(output)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
