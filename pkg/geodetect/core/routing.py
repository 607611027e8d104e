"""
Command Routing

Feature routers register subcommands with a decorator; ``main`` includes
every router and builds one argparse parser from them.
"""

import argparse
from typing import Any, Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

Handler = Callable[[argparse.Namespace, Any], int]


class Argument(BaseModel):
    model_config = ConfigDict(frozen=True)

    flags: Tuple[str, ...]
    options: Dict[str, Any] = Field(default_factory=dict)


def argument(*flags: str, **options) -> Argument:
    """Declares one argparse argument of a command."""
    return Argument(flags=flags, options=options)


class Command(BaseModel):
    name: str
    handler: Handler
    arguments: Tuple[Argument, ...]
    help: Optional[str] = None


class CommandRouter:
    def __init__(self):
        self.commands: List[Command] = []

    def command(self, name: str, *arguments: Argument, help: Optional[str] = None):
        """Registers the decorated ``handler(args, settings) -> exit code``."""

        def decorator(handler: Handler) -> Handler:
            self.commands.append(Command(name=name, handler=handler, arguments=arguments, help=help))
            return handler

        return decorator

    def include_router(self, router: "CommandRouter") -> None:
        known = {command.name for command in self.commands}
        for command in router.commands:
            if command.name in known:
                raise ValueError(f"command {command.name!r} is registered twice")
            self.commands.append(command)
            known.add(command.name)

    def build_parser(
        self,
        prog: str,
        global_arguments: Tuple[Argument, ...] = (),
        parser_class=argparse.ArgumentParser,
    ) -> argparse.ArgumentParser:
        """
        One subparser per command. Global arguments are attached to the main
        parser and to every subparser with suppressed defaults, so they may
        appear before or after the subcommand.
        """
        common = parser_class(add_help=False)
        for declared in global_arguments:
            common.add_argument(*declared.flags, default=argparse.SUPPRESS, **declared.options)

        parser = parser_class(prog=prog, parents=[common])
        subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=parser_class)
        subparsers.required = True
        for command in self.commands:
            sub = subparsers.add_parser(command.name, help=command.help, parents=[common])
            for declared in command.arguments:
                sub.add_argument(*declared.flags, **declared.options)
            sub.set_defaults(handler=command.handler)
        return parser
