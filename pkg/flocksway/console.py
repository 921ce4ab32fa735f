import curses
import enum
import json
import typing

import blessings

from .utils import render_tags, strip_tags


class OutputFormat(enum.Enum):
    HUMAN = "human"
    JSON = "json"


def _json_default(value):
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if hasattr(value, "tolist"):
        return value.tolist()
    return str(value)


class Console:
    """writes command results and errors to the process output

    Human output renders the tagged strings of a result with blessings when the
    stream is a terminal and strips the tags otherwise. Failures go to
    ``errors`` in human mode; JSON output keeps everything on ``output`` so
    that a consumer sees one document per result.
    """

    def __init__(
        self,
        output: typing.TextIO,
        errors: typing.Optional[typing.TextIO] = None,
        output_format: OutputFormat = OutputFormat.HUMAN,
    ):
        self.output = output
        self.errors = errors or output
        self.output_format = output_format
        self.terminal: typing.Optional[blessings.Terminal] = None
        self.linesep = "\n"

    def configure_auto(self, force_disable_style=False):
        if force_disable_style or not self.output.isatty():
            self.terminal = None
            return
        try:
            self.terminal = blessings.Terminal(stream=self.output)
        except curses.error:
            self.terminal = None

    def _format_output(self, s):
        if self.terminal and self.terminal.number_of_colors:
            return render_tags(s, self.terminal)
        return strip_tags(s)

    def send_data(self, result) -> int:
        """write one result (or error) and return its status"""
        status = getattr(result, "status", 0)
        if self.output_format is OutputFormat.JSON:
            content = json.dumps(
                {
                    "data": getattr(result, "data", None),
                    "status": status,
                    "code": getattr(result, "code", None),
                },
                default=_json_default,
            )
            stream = self.output
        else:
            content = self._format_output(str(result))
            stream = self.output if getattr(result, "success", True) else self.errors
        if content:
            stream.write(content + self.linesep)
            stream.flush()
        return status
