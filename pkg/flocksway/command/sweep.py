import dataclasses
import io

from ..commands import CommandResult, create_commander, var
from ..error import CommandError, InvalidArgumentError
from ..harness import (
    SWEEP_PRESETS,
    PROFILES,
    SweepSpec,
    SweepVariable,
    emit_csv,
    preset_spec,
    run_sweep,
    write_sweep_csv,
)
from ..transformation import to_int_list
from ..validation import each, is_gte
from . import int_setting, options_var, read_options

command = create_commander(
    "sweep",
    description=(
        "Run replicas over a range of flock or influencer counts and tabulate "
        "the steps until convergence and the lost agents per value."
    ),
)

SETTINGS = ("replicas", "workers", "profile", "output")


def _replicas(settings) -> int:
    profile = settings["profile"] or "desk"
    if profile not in PROFILES:
        raise CommandError(
            'unknown profile "%s", choose from %s' % (profile, ", ".join(PROFILES))
        )
    return int_setting(settings, "replicas", PROFILES[profile], minimum=1)


def _emit(spec: SweepSpec, settings):
    workers = int_setting(settings, "workers", 1, minimum=1)
    table = run_sweep(spec, workers=workers)
    data = [dataclasses.asdict(row) for row in table]
    if settings["output"]:
        emit_csv(table, settings["output"])
        message = "wrote %d rows to %s" % (len(table), settings["output"])
    else:
        text = io.StringIO()
        write_sweep_csv(table, text)
        message = text.getvalue().rstrip("\n")
    yield CommandResult(message, data=data)
    aborted = sum(row.aborted_count for row in table)
    if aborted:
        yield CommandResult(
            "%d replicas aborted with an error, see the aborted_count column"
            % aborted,
            data={"aborted": aborted},
            success=False,
            status=2,
        )


def _sweep(variable: SweepVariable, values, options):
    config, settings = read_options(options, *SETTINGS)
    try:
        spec = SweepSpec(
            variable=variable,
            values=tuple(values),
            replicas=_replicas(settings),
            base=config,
        )
    except InvalidArgumentError as exc:
        raise CommandError(str(exc)) from exc
    yield from _emit(spec, settings)


@command("sweep", is_abstract=True)
def sweep():
    """Sweeps write one CSV row per value to --output FILE or to the console.

    Options: --replicas N, --workers N, --profile desk|full and any
    configuration key for the base configuration. Replica r runs with
    seed + r."""


@command(
    "flock-count",
    var("values", transform=to_int_list, description="comma separated k values"),
    options_var(),
    parent=sweep,
)
@command.validate(values=each(is_gte(1)))
def sweep_flock_count(values, options=None):
    """Varies the number of flocking agents."""
    yield from _sweep(SweepVariable.FLOCK_COUNT, values, options)


@command(
    "influencer-count",
    var("values", transform=to_int_list, description="comma separated m values"),
    options_var(),
    parent=sweep,
)
@command.validate(values=each(is_gte(0)))
def sweep_influencer_count(values, options=None):
    """Varies the number of influencing agents."""
    yield from _sweep(SweepVariable.INFLUENCER_COUNT, values, options)


@command("preset", var("name", choices=SWEEP_PRESETS), options_var(), parent=sweep)
def sweep_preset(name, options=None):
    """Reproduces one of the stock experiments on the configured placement."""
    config, settings = read_options(options, *SETTINGS)
    spec = preset_spec(
        name,
        base=config,
        placement=config.placement,
        replicas=_replicas(settings),
    )
    yield from _emit(spec, settings)
