import os
import re
from collections import OrderedDict
from textwrap import indent, wrap

from ..commands import (
    CommandResult,
    create_commander,
    filter_public_commands,
    filter_root_commands,
    var,
)
from ..error import CommandError
from ..utils import TaggedString, join_generator_string, strip_tags

command = create_commander(
    "help", description="List and describe all available commands."
)


def _str(text):
    return text.strip() if isinstance(text, str) else ""


def _wrap_indent(text: str, prefix: str, text_width: int):
    separator = os.linesep * 2
    paragraphs = [
        os.linesep.join(wrap(_str(paragraph), width=text_width))
        for paragraph in text.split(separator)
    ]
    return indent(separator.join(paragraphs), prefix)


def _render_description(cmd, text_width, prefix="  - "):
    doc = re.sub(r"[ ]{2,}", " ", _str(cmd.__doc__))
    body_indent = "\t" + " " * len(prefix)
    if doc:
        lines = _wrap_indent(doc, body_indent, text_width).split(os.linesep)
        lines[0] = lines[0].replace(body_indent, "\t" + prefix, 1)
        doc = os.linesep + os.linesep.join(lines)
    for token in cmd.tokens:
        if not token.name or not (token.description or token.choices):
            continue
        name = strip_tags(str(token)) + ": "
        token_indent = body_indent + " " * len(name)
        details = []
        if token.description:
            width = max(text_width - len(token_indent), 20)
            details.extend(wrap(token.description, width))
        if token.choices:
            details.append(" | ".join(sorted(map(str, token.choices))))
        details = (os.linesep + token_indent).join(details)
        doc += os.linesep + body_indent + name + details
    return TaggedString.help(doc) if doc else ""


def is_command_root(root, command):
    if root is command:
        return True
    return command.parent is not None and is_command_root(root, command.parent)


@join_generator_string()
def describe_command_list(commands: dict):
    yield TaggedString.label("Supported Commands")
    for label in commands:
        yield "\t%s" % label
    yield 'Use "%s" for a detailed help on individual commands' % str(help_command)


@join_generator_string()
def describe_command(all_commands, root, output_width=80):
    yield TaggedString.header("%s command" % root_name(root))
    if root.__commander__.__doc__:
        doc = root.__commander__.__doc__
        yield TaggedString.help(_wrap_indent(doc, "", output_width))
    yield ""
    yield TaggedString.label("Supported Subcommands")
    for cmd in filter_public_commands(all_commands):
        if is_command_root(root, cmd):
            yield "\t{}{}\n".format(cmd, _render_description(cmd, output_width))


def root_name(cmd) -> str:
    """the leading keyword a root command is looked up by"""
    return strip_tags(str(cmd.tokens[0])) if cmd.tokens else strip_tags(str(cmd))


def find_root_commands(commands):
    roots = sorted(filter_root_commands(commands), key=root_name)
    return OrderedDict((root_name(cmd), cmd) for cmd in roots)


@command("help", is_abstract=True)
def help():
    """Shows available commands and documentation"""


@command(
    var("command", is_optional=True), parent=help, inject=["commands", "output_width"]
)
def help_command(commands, output_width, command=None):
    command_map = find_root_commands(commands)
    if command is None:
        yield CommandResult(
            describe_command_list(command_map), data={"commands": list(command_map)}
        )
        return
    try:
        root = command_map[command]
    except KeyError as exc:
        raise CommandError('No help for command "%s" available' % command) from exc
    yield CommandResult(
        describe_command(commands, root, output_width), data={"command": command}
    )
