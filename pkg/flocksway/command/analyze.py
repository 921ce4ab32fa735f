import dataclasses
import logging
import math

from ..commands import CommandResult, create_commander
from ..dynamics import convergence_horizon_Z, transition_matrix
from ..error import InfeasibleInfluence, StepSizeTooLarge
from ..matrices import (
    dump_matrix,
    gershgorin_bound,
    matrix_properties,
    spectral_radius_estimate,
)
from ..model import Role, init_state, make_rng
from ..spectral import rates
from ..topology import Scope, build_neighbor_graph, connected_components, dump_edge_list
from ..utils import TaggedString, columns, join_generator_string
from .run import open_output
from . import options_var, read_options

logger = logging.getLogger(__name__)

command = create_commander(
    "analyze",
    description="Inspect the neighbor graph and transition matrix of a placement.",
)


def component_influence(graph, flocking_graph):
    """(size, influencing neighbors) of every connected flock component"""
    result = []
    for component in connected_components(flocking_graph):
        influencers = {
            j
            for i in component
            for j in graph.neighbors(i)
            if graph.vertex_roles[j] is Role.INFLUENCING
        }
        result.append((len(component), len(influencers)))
    return result


def _horizon(size, influencers, eps):
    try:
        return convergence_horizon_Z(size, influencers, eps)
    except InfeasibleInfluence as exc:
        logger.debug("no horizon: %s", exc)
        return None


def _finite(value):
    return value if value is None or math.isfinite(value) else str(value)


@columns()
@join_generator_string()
def describe_analysis(data):
    yield TaggedString.header("placement with seed %d" % data["seed"])
    for key in ("agents", "components", "max_degree", "lambda2", "mu2", "dt_rate"):
        if data.get(key) is not None:
            yield "{}\t{}".format(TaggedString.label(key), data[key])
    for key, value in data["matrix"].items():
        yield "{}\t{}".format(TaggedString.label(key), value)
    yield TaggedString.label("components (size, influencers, horizon)")
    for item in data["component_influence"]:
        yield "\t{size}\t{influencers}\t{horizon}".format(**item)


@command("analyze", options_var())
def analyze(options=None):
    """Reports λ₂, μ₂ and the rates of the initial influencing neighbors
    graph, the properties of the configured rule's transition matrix and the
    convergence horizon of every flock component.

    --matrix FILE stores the transition matrix, --edges FILE the edge list."""
    config, settings = read_options(options, "matrix", "edges")
    state = init_state(config, make_rng(config.seed))
    graph = build_neighbor_graph(state, Scope.ALL, config.R)
    flock = build_neighbor_graph(state, Scope.FLOCKING_ONLY, config.R)

    data = {
        "seed": config.seed,
        "agents": state.n,
        "components": state.eta,
        "max_degree": graph.max_degree,
    }
    try:
        report = rates(graph, config.epsilon, theta=state.headings)
    except StepSizeTooLarge as exc:
        logger.warning("no spectral report: %s", exc)
    else:
        data.update(
            lambda2=report.lambda2,
            mu2=report.mu2,
            dt_rate=_finite(report.dt_rate),
            ct_rate=report.ct_rate,
            delta_norm=report.delta_norm,
            eigenvalues=list(report.eigenvalues),
        )

    matrix = transition_matrix(
        graph, config.update_rule, config.epsilon, config.ct_step
    )
    properties = dataclasses.asdict(matrix_properties(matrix))
    properties.update(
        gershgorin_bound=gershgorin_bound(matrix),
        spectral_radius=spectral_radius_estimate(matrix),
    )
    data["matrix"] = properties
    data["component_influence"] = [
        {
            "size": size,
            "influencers": influencers,
            "horizon": _horizon(size, influencers, config.z_epsilon),
        }
        for size, influencers in component_influence(graph, flock)
    ]

    if settings["matrix"]:
        with open_output(settings["matrix"]) as stream:
            dump_matrix(matrix, stream)
    if settings["edges"]:
        with open_output(settings["edges"]) as stream:
            dump_edge_list(graph, stream)

    yield CommandResult(describe_analysis(data), data=data)
