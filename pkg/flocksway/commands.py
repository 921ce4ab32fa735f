"""a small declarative command parser

Commands are plain generator functions registered on a commander with a
sequence of tokens: keywords that have to match literally and variables
that capture (and transform) the argument at their position. A command may
extend a parent command, inheriting its tokens; abstract parents only exist
to be extended.

    command = create_commander("greet", description="Say hello.")

    @command("greet", var("name", description="who to greet"))
    def greet(name):
        yield CommandResult("hello %s" % name)
"""

import enum
from functools import update_wrapper
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Set

from .error import CommandError
from .transformation import transform_value
from .utils import TaggedString, TokenMismatch, join_generator_string, tokenize_args
from .validation import ValidationError, one_of, validate, validate_value


class _Undefined:
    pass


class CommandResult:
    def __init__(self, message, data=None, success=True, status=None) -> None:
        self.message = message
        self.data = data
        self.success = success
        self.status = status if status is not None else (0 if success else 1)
        self.code = None

    def __str__(self):
        return self.message


def _normalize_choices(choices):
    if choices is None:
        return set()
    if isinstance(choices, type) and issubclass(choices, enum.Enum):
        return {str(item.value) for item in choices}
    if isinstance(choices, dict):
        return dict(choices)
    return {str(choice) for choice in choices}


class _Token:
    is_variable = False

    def __init__(
        self,
        value: Any = _Undefined,
        name: Optional[str] = None,
        is_optional: bool = False,
        greedy: bool = False,
        transform=None,
        choices=None,
        description: Optional[str] = None,
        aliases: Optional[Iterable[str]] = None,
    ):
        self.value = value
        self.name = name
        self.is_optional = is_optional
        self.greedy = greedy
        self.transform = transform
        self.description = description
        self.aliases = frozenset(aliases or ())
        self.choices = _normalize_choices(choices)

    def matches(self, arg: str) -> bool:
        if self.value is not _Undefined:
            return arg == self.value or arg in self.aliases
        if self.choices:
            validate_value(one_of(set(self.choices)), arg)
        if self.transform is not None:
            # transformation errors surface as token mismatches so that the
            # user gets a precise complaint instead of "unknown command"
            transform_value(self.transform, arg)
        return True

    def get_label(self, with_error=None) -> str:
        label = self.name.upper() if self.name else str(self.value)
        if self.greedy:
            label = "[%s [...]]" % label
        if self.is_optional:
            tagged = TaggedString.error if with_error else TaggedString.optional
            label = "[%s]" % tagged(label)
        elif self.name:
            label = TaggedString.var(label)
        return label

    def __str__(self):
        return self.get_label()


class _Variable(_Token):
    is_variable = True


def var(
    name,
    is_optional=False,
    transform=None,
    greedy=False,
    choices=None,
    description=None,
):
    return _Variable(
        name=name,
        is_optional=is_optional,
        greedy=greedy,
        transform=transform,
        choices=choices,
        description=description,
    )


def keyword(value, aliases=None):
    return _Token(value, aliases=aliases)


class _MatchType(enum.IntEnum):
    INVALID = 0
    PARTIAL = 1
    EXACT = 2


class _CommandMatch:
    def __init__(
        self,
        command: "_Command",
        type: _MatchType,
        token_mismatches: Sequence[TokenMismatch] = (),
    ):
        self.command = command
        self.type = type
        self.token_mismatches = tuple(token_mismatches)


class _CommandMatches:
    def __init__(self, matches: Sequence[_CommandMatch]):
        self.matches = list(matches)

    def _of_type(self, *types) -> List[_CommandMatch]:
        return [match for match in self.matches if match.type in types]

    @property
    def exact_match(self) -> Optional[_CommandMatch]:
        exact = self._of_type(_MatchType.EXACT)
        if len(exact) > 1:
            raise CommandError(
                "ambiguous command definitions: %s"
                % ", ".join(match.command.get_label() for match in exact)
            )
        return exact[0] if exact else None

    def suggestable(self, resolve, args) -> List[_CommandMatch]:
        matches = self._of_type(_MatchType.EXACT, _MatchType.PARTIAL)
        if matches or len(args) < 2:
            return matches
        # drop trailing arguments until something matches
        shorter = args[:-1]
        return resolve(shorter).suggestable(resolve, shorter)

    @join_generator_string()
    def suggestion(self, resolve, args) -> Iterator[str]:
        matches = self.suggestable(resolve, args)
        if len(matches) != 1:
            yield 'Could not find the command for "%s"' % " ".join(args)
            if matches:
                yield "Did you mean one of:" if len(matches) > 1 else "Did you mean:"
                for match in sorted(matches, key=lambda m: m.command.get_label()):
                    yield "\t%s" % match.command.get_label()
            return
        match = matches[0]
        if match.type is _MatchType.EXACT:
            yield "You have provided too many arguments for this command."
            yield "Usage:\n\t" + match.command.get_label()
        elif match.token_mismatches:
            for mismatch in match.token_mismatches:
                yield "{}: {}".format(mismatch.token.get_label(), mismatch.exception)
        else:
            yield "You have not provided sufficient arguments for this command."
            yield "Usage:\n\t" + match.command.get_label()


class _Command:
    def __init__(self, func, tokens, parent, is_abstract, inject):
        self.func = func
        self.tokens = tokens
        self.parent = parent
        self.is_abstract = is_abstract
        self.inject = list(inject or ())

    def __call__(self, args: Sequence[str], context: Dict[str, Any]):
        kwargs = _build_args(self.all_tokens, args)
        for key in self.all_injections:
            try:
                kwargs[key] = context[key]
            except KeyError:
                raise CommandError('"%s" was not provided to the commander' % key)
        try:
            return self.func(**kwargs)
        except ValidationError as exc:
            for token in self.all_tokens:
                if token.name and token.name == exc.field:
                    exc.field = token
            raise

    def __getattr__(self, name: str) -> Any:
        return getattr(self.func, name)

    def __str__(self):
        return " ".join(str(token) for token in self.all_tokens)

    @property
    def all_tokens(self) -> List[_Token]:
        return (self.parent.all_tokens if self.parent else []) + self.tokens

    @property
    def all_injections(self) -> List[str]:
        return (self.parent.all_injections if self.parent else []) + self.inject

    @property
    def is_executable(self) -> bool:
        return not self.is_abstract

    def match(self, args: Sequence[str]) -> _CommandMatch:
        if not self.is_executable:
            return _CommandMatch(self, _MatchType.INVALID)
        tokens = self.all_tokens
        mismatches = []
        for index, arg in enumerate(args):
            if index < len(tokens):
                token = tokens[index]
            elif tokens and tokens[-1].greedy:
                token = tokens[-1]
            else:
                return _CommandMatch(self, _MatchType.INVALID)
            try:
                if not token.matches(arg):
                    return _CommandMatch(self, _MatchType.INVALID)
            except ValidationError as exc:
                if not token.is_variable:
                    return _CommandMatch(self, _MatchType.INVALID)
                mismatches.append(TokenMismatch(token, exc, arg))
        missing = any(not token.is_optional for token in tokens[len(args) :])
        if missing or mismatches:
            return _CommandMatch(self, _MatchType.PARTIAL, mismatches)
        return _CommandMatch(self, _MatchType.EXACT)

    def get_label(self, with_errors: Sequence[TokenMismatch] = ()) -> str:
        failed = {id(mismatch.token) for mismatch in with_errors}
        return " ".join(
            token.get_label(with_error=id(token) in failed) for token in self.all_tokens
        )


def _build_args(tokens: Sequence[_Token], args: Sequence[str]) -> Dict[str, Any]:
    pending = list(args)
    result = {}
    for token in tokens:
        if not pending:
            break
        if not token.name:
            pending.pop(0)
            continue
        if token.greedy:
            values, pending = pending, []
            if token.transform is not None:
                values = [transform_value(token.transform, v) for v in values]
            result[token.name] = values
        else:
            value = pending.pop(0)
            if token.transform is not None:
                value = transform_value(token.transform, value)
            result[token.name] = value
    return result


def filter_public_commands(commands) -> List[_Command]:
    return [command for command in commands if command.is_executable]


def filter_root_commands(commands) -> Set[_Command]:
    return {command for command in commands if command.parent is None}


def create_commander(name, description=None):
    commands: List[_Command] = []
    context: Dict[str, Any] = {"commands": commands}

    def _resolve(args) -> _CommandMatches:
        return _CommandMatches(
            [command.match(args) for command in filter_public_commands(commands)]
        )

    class Commander:
        def __init__(self):
            self.name = name
            self.__doc__ = description or ""
            self.commands = commands

        @staticmethod
        def validate(**kwargs):
            return validate(**kwargs)

        @staticmethod
        def provide(key, value) -> None:
            context[key] = value

        @staticmethod
        @tokenize_args()
        def dispatch(args) -> Iterator[CommandResult]:
            resolved = _resolve(args)
            match = resolved.exact_match
            if match is None:
                raise CommandError(
                    resolved.suggestion(_resolve, args), code="INVALID_COMMAND"
                )
            try:
                yield from match.command(args, context) or ()
            except ValidationError as exc:
                field = " for field %s" % exc.field if exc.field else ""
                raise CommandError(
                    "Invalid argument{}: {}".format(field, exc),
                    code="INVALID_ARGUMENT_FORMAT",
                ) from exc

        @classmethod
        def fire(cls, args) -> List[CommandResult]:
            return list(cls.dispatch(args))

        def __call__(
            self, *tokens, parent=None, is_abstract=False, inject=None
        ):
            tokens = [
                token if isinstance(token, _Token) else keyword(token)
                for token in tokens
            ]

            def decorator(func):
                command = _Command(func, tokens, parent, is_abstract, inject)
                update_wrapper(command, func)
                command.__commander__ = self
                commands.append(command)
                return command

            return decorator

        def compose(self, *commanders) -> "Commander":
            for commander in commanders:
                commands.extend(commander.commands)
            return self

        def __str__(self):
            return name

    return Commander()
