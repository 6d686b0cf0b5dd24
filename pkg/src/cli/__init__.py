from .main import build_parser, parse_command, run, main
from .commands import CommandHandlers, parse_state, state_label

__all__ = [
    "build_parser", "parse_command", "run", "main",
    "CommandHandlers", "parse_state", "state_label"
]
