import unittest

from flocksway.commands import CommandResult, create_commander, keyword, var
from flocksway.error import CommandError
from flocksway.transformation import to_int
from flocksway.utils import split_options, strip_tags
from flocksway.validation import is_gte


def build_commander():
    command = create_commander("toy", description="Commands for testing.")

    @command("greet", var("name"))
    def greet(name):
        yield CommandResult("hello %s" % name)

    @command("sum", var("numbers", greedy=True, is_optional=True, transform=to_int))
    def total(numbers=None):
        yield CommandResult(str(sum(numbers or ())), data=sum(numbers or ()))

    @command("paint", is_abstract=True)
    def paint():
        pass

    @command(
        keyword("wall", aliases=["walls"]),
        var("color", choices=("red", "green")),
        parent=paint,
    )
    def paint_wall(color):
        yield CommandResult("painted %s" % color)

    @command("door", var("color"), parent=paint)
    def paint_door(color):
        yield CommandResult("painted the door %s" % color)

    @command("wait", var("seconds", transform=to_int))
    @command.validate(seconds=is_gte(0))
    def wait(seconds):
        yield CommandResult("waited %d" % seconds, data=seconds)

    @command("salute", inject=["greeting"])
    def salute(greeting):
        yield CommandResult(greeting)

    return command


class DispatchTest(unittest.TestCase):
    def setUp(self):
        self.command = build_commander()

    def error_of(self, line):
        with self.assertRaises(CommandError) as context:
            self.command.fire(line)
        return strip_tags(str(context.exception))

    def test_variable(self):
        (result,) = self.command.fire("greet world")
        self.assertEqual(str(result), "hello world")
        self.assertEqual(result.status, 0)

    def test_quoted_argument(self):
        (result,) = self.command.fire('greet "big world"')
        self.assertEqual(str(result), "hello big world")

    def test_token_list(self):
        (result,) = self.command.fire(["greet", "you"])
        self.assertEqual(str(result), "hello you")

    def test_greedy_variable(self):
        self.assertEqual(self.command.fire("sum 1 2 3")[0].data, 6)
        self.assertEqual(self.command.fire("sum")[0].data, 0)

    def test_child_command_and_alias(self):
        self.assertEqual(str(self.command.fire("paint wall red")[0]), "painted red")
        (result,) = self.command.fire("paint walls green")
        self.assertEqual(str(result), "painted green")

    def test_abstract_parent_is_not_executable(self):
        self.assertIn("not provided sufficient arguments", self.error_of("paint wall"))
        message = self.error_of("paint")
        self.assertIn('Could not find the command for "paint"', message)
        self.assertIn("Did you mean one of:", message)

    def test_unknown_command(self):
        self.assertIn('Could not find the command for "gret"', self.error_of("gret"))

    def test_suggestions(self):
        message = self.error_of("paint floor red")
        self.assertIn("Did you mean one of:", message)
        self.assertIn("paint door COLOR", message)
        self.assertIn("paint wall COLOR", message)

    def test_too_many_arguments(self):
        self.assertIn("too many arguments", self.error_of("greet a b"))

    def test_choices(self):
        self.assertIn("must be one of: green, red", self.error_of("paint wall blue"))

    def test_transformation_mismatch(self):
        self.assertIn("must be an integer", self.error_of("sum 1 two"))

    def test_validate_decorator(self):
        self.assertEqual(self.command.fire("wait 3")[0].data, 3)
        message = self.error_of("wait -1")
        self.assertIn("Invalid argument for field SECONDS", message)

    def test_comment_lines_are_skipped(self):
        self.assertEqual(self.command.fire("# greet world"), [])

    def test_injection(self):
        self.assertIn("was not provided", self.error_of("salute"))
        self.command.provide("greeting", "ahoy")
        self.assertEqual(str(self.command.fire("salute")[0]), "ahoy")

    def test_compose(self):
        other = create_commander("other")

        @other("ping")
        def ping():
            yield CommandResult("pong")

        self.command.compose(other)
        self.assertEqual(str(self.command.fire("ping")[0]), "pong")

    def test_failed_results_default_to_status_one(self):
        self.assertEqual(CommandResult("no", success=False).status, 1)
        self.assertEqual(CommandResult("no", success=False, status=2).status, 2)


class SplitOptionsTest(unittest.TestCase):
    def test_pairs(self):
        self.assertEqual(
            split_options(["--k", "5", "--alpha=pi/2"]), {"k": "5", "alpha": "pi/2"}
        )

    def test_switches(self):
        self.assertEqual(
            split_options(["--fast", "--k", "2"], switches=["fast"]),
            {"fast": "true", "k": "2"},
        )

    def test_errors(self):
        for tokens in (["k", "5"], ["--k"], ["--", "5"]):
            with self.assertRaises(CommandError):
                split_options(tokens)
