import io

from ..commands import CommandResult, create_commander
from ..dynamics import write_trace
from ..model import init_state, make_rng
from .run import open_output
from . import options_var, read_options

command = create_commander("place", description="Emit an initial placement.")


@command("place", options_var())
def place(options=None):
    """Writes the initial agents as step,id,role,x,y,theta CSV to --output
    FILE or to the console."""
    config, settings = read_options(options, "output")
    state = init_state(config, make_rng(config.seed))
    data = {
        "eta": state.eta,
        "agents": [
            {
                "id": agent.id,
                "role": agent.role.value,
                "x": agent.position[0],
                "y": agent.position[1],
                "theta": agent.heading,
            }
            for agent in state.agents
        ],
    }
    if settings["output"]:
        with open_output(settings["output"]) as stream:
            write_trace(state, stream, header=True)
        message = "wrote %d agents to %s" % (state.n, settings["output"])
    else:
        text = io.StringIO()
        write_trace(state, text, header=True)
        message = text.getvalue().rstrip("\n")
    yield CommandResult(message, data=data)
