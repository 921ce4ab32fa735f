import contextlib

from ..commands import CommandResult, create_commander
from ..detection import RunRecord, write_record_csv
from ..error import OutputError
from ..harness import run_single
from ..spectral import write_reports_csv
from ..utils import TaggedString, columns, join_generator_string
from . import int_setting, options_var, read_options

command = create_commander("run", description="Simulate a single flock.")


def open_output(path):
    try:
        return open(path, "w", newline="")
    except OSError as exc:
        raise OutputError(
            "cannot write {}: {}".format(path, exc.strerror or exc), data={"path": path}
        ) from exc


@columns()
@join_generator_string()
def describe_record(record: RunRecord, seed: int):
    rows = [
        ("classification", record.classification.value),
        ("converged", str(record.converged).lower()),
        ("convergence step", record.convergence_step),
        ("lost since", record.t_star),
        ("lost agents", record.lost_count),
        ("steps", record.steps),
    ]
    yield TaggedString.header("run with seed %d" % seed)
    for label, value in rows:
        if value is not None:
            yield "{}\t{}".format(TaggedString.label(label), value)
    if record.error:
        yield TaggedString.error(record.error)


def record_data(record: RunRecord) -> dict:
    data = dict(zip(RunRecord.CSV_COLUMNS, record.as_row()))
    data["converged"] = record.converged
    data["lost_ids"] = sorted(record.lost_ids)
    return data


@command("run", options_var())
def run(options=None):
    """Simulates one flock until it converges, turns out lossy or hits max_steps.

    Besides configuration keys the options --config FILE, --trace FILE,
    --metrics FILE, --cadence N and --record FILE are understood. With a
    cadence the spectral report of the neighbor graph is sampled every N
    steps and written to the metrics file."""
    config, settings = read_options(options, "trace", "metrics", "cadence", "record")
    cadence = int_setting(settings, "cadence", 1 if settings["metrics"] else 0)

    with contextlib.ExitStack() as stack:
        trace = None
        if settings["trace"]:
            trace = stack.enter_context(open_output(settings["trace"]))
        result = run_single(config, cadence=cadence, trace=trace)

    if settings["metrics"]:
        with open_output(settings["metrics"]) as stream:
            write_reports_csv(result.metrics, stream)
    if settings["record"]:
        with open_output(settings["record"]) as stream:
            write_record_csv(result.record, stream)

    record = result.record
    failed = record.error is not None
    yield CommandResult(
        describe_record(record, config.seed),
        data=dict(record_data(record), seed=config.seed),
        success=not failed,
        status=2 if failed else 0,
    )
