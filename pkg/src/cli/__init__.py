from .commands import COMMANDS, Command, RunConfig, build_parser, run

__all__ = ["COMMANDS", "Command", "RunConfig", "build_parser", "run"]
