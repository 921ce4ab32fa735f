import dataclasses
import io
import math
import os
import tempfile
import unittest

import numpy as np

from flocksway.detection import RunClass, RunRecord
from flocksway.error import InvalidArgumentError, OutputError, SimulationError
from flocksway.harness import (
    DESK_REPLICAS,
    FULL_REPLICAS,
    SweepRow,
    SweepSpec,
    SweepVariable,
    aggregate,
    check_finite,
    emit_csv,
    load_sweep_csv,
    on_run_finished,
    preset_spec,
    read_sweep_csv,
    run_single,
    run_sweep,
    write_sweep_csv,
)
from flocksway.matrices import perron
from flocksway.model import (
    InfluencerPlacement,
    Placement,
    SimConfig,
    Topology,
    UpdateRule,
    init_state,
    make_rng,
)
from flocksway.topology import Scope, build_neighbor_graph

from . import SLOW_TESTS, corpus_size, make_state

LONE_AGENT = SimConfig(k=1, m=0)
LED_PAIR = SimConfig(
    k=2, m=1, topology=Topology.FIXED, update_rule=UpdateRule.PERRON_DT
)


def initial_heading(config):
    return float(init_state(config, make_rng(config.seed)).headings[0])


class RunSingleTest(unittest.TestCase):
    def test_aligned_agent_converges_at_once(self):
        config = LONE_AGENT.replace(desired_orientation=initial_heading(LONE_AGENT))
        record = run_single(config).record
        self.assertTrue(record.converged)
        self.assertEqual(record.convergence_step, 0)
        self.assertEqual(record.steps, 0)
        self.assertIs(record.classification, RunClass.CLEAN)

    def test_lone_agent_facing_away_is_totally_lossy(self):
        config = LONE_AGENT.replace(
            desired_orientation=initial_heading(LONE_AGENT) + math.pi
        )
        record = run_single(config).record
        self.assertIs(record.classification, RunClass.TOTALLY_LOSSY)
        self.assertEqual(record.steps, 2800)
        self.assertEqual(record.lost_ids, {0})

    def test_step_cap(self):
        config = LONE_AGENT.replace(
            desired_orientation=initial_heading(LONE_AGENT) + math.pi, max_steps=5
        )
        record = run_single(config).record
        self.assertIs(record.classification, RunClass.TRUNCATED)
        self.assertFalse(record.converged)
        self.assertEqual(record.steps, 5)

    def test_fixed_lone_agent_is_never_lost(self):
        config = LONE_AGENT.replace(
            topology=Topology.FIXED,
            desired_orientation=initial_heading(LONE_AGENT) + math.pi,
            max_steps=3000,
        )
        record = run_single(config).record
        self.assertIs(record.classification, RunClass.TRUNCATED)
        self.assertEqual(record.lost_ids, frozenset())
        self.assertEqual(record.steps, 3000)

    def test_fixed_chain_with_small_steps_is_not_lossy(self):
        base = SimConfig(
            k=20,
            m=1,
            topology=Topology.FIXED,
            update_rule=UpdateRule.PERRON_DT,
            epsilon=0.04,
            placement=Placement.RANDOM_CHAIN,
            max_steps=3000,
        )
        for seed in range(3):
            record = run_single(base.replace(seed=seed)).record
            with self.subTest(seed=seed):
                self.assertIn(
                    record.classification, (RunClass.CLEAN, RunClass.TRUNCATED)
                )
                self.assertEqual(record.lost_ids, frozenset())

    def test_influencer_leads_a_pair(self):
        result = run_single(LED_PAIR)
        self.assertTrue(result.record.converged)
        self.assertLess(result.record.convergence_step, 10_000)
        self.assertIsNone(result.record.error)
        self.assertAlmostEqual(result.final_state.headings[2], LED_PAIR.alpha)

    def test_continuous_time_run(self):
        config = LED_PAIR.replace(update_rule=UpdateRule.LINEAR_CT)
        record = run_single(config).record
        self.assertTrue(record.converged)
        self.assertLess(record.convergence_step, 100)

    def test_metrics_cadence(self):
        result = run_single(LED_PAIR, cadence=1)
        self.assertEqual(len(result.metrics), result.record.steps + 1)
        self.assertEqual([report.step for report in result.metrics[:3]], [0, 1, 2])
        self.assertGreater(result.metrics[0].lambda2, 0)
        sparse = run_single(LED_PAIR, cadence=5)
        self.assertEqual(len(sparse.metrics), result.record.steps // 5 + 1)
        self.assertEqual(run_single(LED_PAIR).metrics, ())

    def test_trace(self):
        trace = io.StringIO()
        record = run_single(LED_PAIR, trace=trace).record
        lines = trace.getvalue().splitlines()
        self.assertEqual(lines[0], "step,id,role,x,y,theta")
        self.assertEqual(len(lines), 1 + (record.steps + 1) * 3)
        self.assertTrue(lines[3].startswith("0,2,Influencing,"))

    def test_step_size_error_is_recorded(self):
        config = SimConfig(k=9, m=0, update_rule=UpdateRule.PERRON_DT, epsilon=0.3)
        with self.assertLogs("flocksway.harness", "WARNING"):
            record = run_single(config).record
        self.assertTrue(record.error.startswith("FLOCKSWAY.step_size"))
        self.assertFalse(record.converged)
        self.assertIs(record.classification, RunClass.ABORTED)

    def test_same_seed_same_run(self):
        first, second = run_single(LED_PAIR), run_single(LED_PAIR)
        self.assertEqual(first.record, second.record)
        self.assertEqual(
            first.final_state.headings.tolist(), second.final_state.headings.tolist()
        )

    def test_finished_signal(self):
        records = []

        def receiver(config, record):
            records.append(record)

        with on_run_finished.connected_to(receiver):
            result = run_single(LED_PAIR)
        self.assertEqual(records, [result.record])


class CheckFiniteTest(unittest.TestCase):
    def test_finite_state_passes(self):
        state = make_state([(0, 0), (1, 1)], [0.5, 1.0])
        self.assertIs(check_finite(state), state)

    def test_diverged_heading(self):
        state = make_state([(0, 0), (1, 1)], [0.5, math.nan], step=7)
        with self.assertRaises(SimulationError) as context:
            check_finite(state)
        self.assertIn("step 7", str(context.exception))
        self.assertEqual(context.exception.status, 2)


class SweepTest(unittest.TestCase):
    def setUp(self):
        self.spec = SweepSpec(
            variable=SweepVariable.FLOCK_COUNT,
            values=(1, 2),
            replicas=2,
            base=LED_PAIR,
        )

    def test_replica_seeds(self):
        config = self.spec.config_for(2, 1)
        self.assertEqual((config.k, config.seed), (2, 1))
        spec = SweepSpec(SweepVariable.INFLUENCER_COUNT, (3,), 1, LED_PAIR)
        self.assertEqual(spec.config_for(3, 0).m, 3)

    def test_rows(self):
        table = run_sweep(self.spec)
        self.assertEqual([row.value for row in table], [1, 2])
        for row in table:
            self.assertEqual(row.variable, "FlockCount")
            self.assertEqual(row.replicas, 2)
            self.assertLessEqual(row.min_steps, row.mean_steps)
            self.assertLessEqual(row.mean_steps, row.max_steps)
            self.assertEqual(row.totally_lossy_count, 0)

    def test_workers_do_not_change_the_table(self):
        serial = run_sweep(self.spec, workers=1)
        self.assertEqual(serial, run_sweep(self.spec, workers=2))

    def test_invalid_specs(self):
        with self.assertRaises(InvalidArgumentError):
            SweepSpec(SweepVariable.FLOCK_COUNT, (), 2)
        with self.assertRaises(InvalidArgumentError):
            SweepSpec(SweepVariable.FLOCK_COUNT, (10,), 0)


def _record(classification, steps, lost=(), error=None):
    return RunRecord(
        converged=classification is RunClass.CLEAN,
        convergence_step=steps if classification is RunClass.CLEAN else None,
        lost_ids=frozenset(lost),
        classification=classification,
        steps=steps,
        error=error,
    )


class AggregateTest(unittest.TestCase):
    def test_undecided_runs_are_counted_apart(self):
        records = [
            _record(RunClass.CLEAN, 100),
            _record(RunClass.LOSSY, 300, lost=[1, 2]),
            _record(RunClass.TRUNCATED, 5000),
            _record(RunClass.ABORTED, 0, error="FLOCKSWAY.step_size: too large"),
        ]
        row = aggregate(SweepVariable.FLOCK_COUNT, 10, records)
        self.assertEqual(row.replicas, 4)
        self.assertEqual((row.min_steps, row.max_steps), (100, 300))
        self.assertEqual(row.mean_steps, 200)
        self.assertEqual(row.mean_lost, 1)
        self.assertEqual((row.lossy_count, row.totally_lossy_count), (1, 0))
        self.assertEqual((row.truncated_count, row.aborted_count), (1, 1))

    def test_only_aborted_runs(self):
        records = [_record(RunClass.ABORTED, 0, error="boom")] * 3
        row = aggregate(SweepVariable.INFLUENCER_COUNT, 2, records)
        self.assertIsNone(row.mean_steps)
        self.assertIsNone(row.min_steps)
        self.assertIsNone(row.max_steps)
        self.assertIsNone(row.mean_lost)
        self.assertEqual(row.aborted_count, 3)

    def test_sweep_with_aborted_replicas(self):
        base = SimConfig(m=0, update_rule=UpdateRule.PERRON_DT, epsilon=0.3)
        spec = SweepSpec(SweepVariable.FLOCK_COUNT, (9,), 2, base)
        with self.assertLogs("flocksway.harness", "WARNING"):
            (row,) = run_sweep(spec)
        self.assertEqual(row.aborted_count, 2)
        self.assertIsNone(row.mean_steps)


class SweepCsvTest(unittest.TestCase):
    ROW = SweepRow(
        variable="InfluencerCount",
        value=10,
        replicas=4,
        mean_steps=12.5,
        min_steps=10,
        max_steps=16,
        mean_lost=0.25,
        lossy_count=1,
        totally_lossy_count=0,
        truncated_count=1,
        aborted_count=0,
    )

    def test_format(self):
        stream = io.StringIO()
        write_sweep_csv([self.ROW], stream)
        self.assertEqual(
            stream.getvalue().splitlines(),
            [
                "variable,value,replicas,mean_steps,min_steps,max_steps,"
                "mean_lost,lossy_count,totally_lossy_count,truncated_count,"
                "aborted_count",
                "InfluencerCount,10,4,12.5,10,16,0.25,1,0,1,0",
            ],
        )

    def test_written_table_loads(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "sweep.csv")
            emit_csv([self.ROW], path)
            self.assertEqual(load_sweep_csv(path), [self.ROW])

    def test_rows_without_statistics_load(self):
        row = dataclasses.replace(
            self.ROW,
            mean_steps=None,
            min_steps=None,
            max_steps=None,
            mean_lost=None,
            lossy_count=0,
            truncated_count=0,
            aborted_count=4,
        )
        stream = io.StringIO()
        write_sweep_csv([row], stream)
        self.assertEqual(
            stream.getvalue().splitlines()[1], "InfluencerCount,10,4,,,,,0,0,0,4"
        )
        stream.seek(0)
        self.assertEqual(read_sweep_csv(stream), [row])

    def test_unwritable_path(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "missing", "sweep.csv")
            with self.assertRaises(OutputError) as context:
                emit_csv([self.ROW], path)
        self.assertEqual(context.exception.status, 2)

    def test_foreign_table(self):
        with self.assertRaises(InvalidArgumentError):
            read_sweep_csv(io.StringIO("step,lambda2\n0,1\n"))


class PresetTest(unittest.TestCase):
    def test_fixed_flock(self):
        spec = preset_spec("fixed-flock")
        self.assertIs(spec.variable, SweepVariable.FLOCK_COUNT)
        self.assertEqual(spec.values, (10, 20, 30, 40, 50))
        self.assertEqual(spec.replicas, DESK_REPLICAS)
        self.assertEqual(spec.base.m, 1)
        self.assertIs(spec.base.topology, Topology.FIXED)
        self.assertIs(
            spec.base.influencer_placement, InfluencerPlacement.DROP_RANDOM_AREA
        )

    def test_switching_influencers(self):
        spec = preset_spec("switching-influencers", profile="full")
        self.assertIs(spec.variable, SweepVariable.INFLUENCER_COUNT)
        self.assertEqual(spec.values, tuple(range(10, 91, 10)))
        self.assertEqual(spec.replicas, FULL_REPLICAS)
        self.assertEqual(spec.base.k, 50)
        self.assertIs(spec.base.topology, Topology.SWITCHING)
        self.assertIs(
            spec.base.influencer_placement, InfluencerPlacement.DROP_RANDOM_AREA_PLUS
        )

    def test_random_placement(self):
        spec = preset_spec("fixed-influencers", placement=Placement.RANDOM_CHAIN)
        self.assertEqual(spec.base.k, 100)
        self.assertIs(spec.base.placement, Placement.RANDOM_CHAIN)
        self.assertIs(
            spec.base.influencer_placement, InfluencerPlacement.INTERSECTION_POINTS
        )

    def test_explicit_replicas_and_base(self):
        spec = preset_spec("switching-flock", base=SimConfig(seed=7), replicas=3)
        self.assertEqual(spec.replicas, 3)
        self.assertEqual(spec.base.seed, 7)

    def test_unknown_names(self):
        with self.assertRaises(InvalidArgumentError):
            preset_spec("everything")
        with self.assertRaises(InvalidArgumentError):
            preset_spec("fixed-flock", profile="huge")


@unittest.skipUnless(SLOW_TESTS, "set FLOCKSWAY_SLOW_TESTS to run")
class SweepTrendTest(unittest.TestCase):
    WORKERS = os.cpu_count() or 1

    def assertMostlyMonotone(self, values, decreasing=False):
        """at most one adjacent step against the direction"""
        steps = [b - a for a, b in zip(values, values[1:])]
        against = [step for step in steps if (step > 0 if decreasing else step < 0)]
        self.assertLessEqual(len(against), 1, values)

    def test_larger_flocks_take_longer(self):
        published = (638.88, 2078.14, 5364.04, 9327.34, 18365.39)
        table = run_sweep(preset_spec("fixed-flock"), workers=self.WORKERS)
        means = [row.mean_steps for row in table]
        self.assertEqual([row.value for row in table], [10, 20, 30, 40, 50])
        for smaller, larger in zip(means, means[1:]):
            self.assertLess(smaller, larger)
        for mean_steps, expected in zip(means, published):
            self.assertLess(mean_steps, 3 * expected)
            self.assertGreater(mean_steps, expected / 3)

    def test_more_influencers_settle_faster(self):
        table = run_sweep(preset_spec("fixed-influencers"), workers=self.WORKERS)
        means = [row.mean_steps for row in table]
        self.assertMostlyMonotone(means, decreasing=True)
        self.assertLess(abs(means[-1] - means[-2]), 0.25 * means[-2])

    def test_lost_agents_on_switching_graphs(self):
        spec = preset_spec("switching-flock")
        grid = run_sweep(spec, workers=self.WORKERS)
        scattered = run_sweep(
            preset_spec("switching-flock", placement=Placement.RANDOM_CHAIN),
            workers=self.WORKERS,
        )
        lost = [row.mean_lost for row in grid]
        self.assertMostlyMonotone(lost)
        self.assertGreater(lost[-1], lost[0])
        for on_grid, on_chain in zip(grid, scattered):
            self.assertLessEqual(
                on_grid.totally_lossy_count, on_chain.totally_lossy_count
            )

        table = run_sweep(preset_spec("switching-influencers"), workers=self.WORKERS)
        lost = [row.mean_lost for row in table]
        self.assertMostlyMonotone(lost, decreasing=True)
        self.assertLess(lost[-1], lost[0])


class DesiredConsensusTest(unittest.TestCase):
    def test_fixed_perron_runs_meet_the_contraction_bound(self):
        for seed in range(corpus_size(50, 5)):
            config = SimConfig(
                k=4 + seed % 22,
                m=1,
                topology=Topology.FIXED,
                update_rule=UpdateRule.PERRON_DT,
                influencer_placement=InfluencerPlacement.INTERSECTION_POINTS,
                epsilon=0.1,
                seed=seed,
            )
            state = init_state(config, make_rng(seed))
            g = build_neighbor_graph(state, Scope.ALL, config.R)
            # the influencer is pinned at α, so the flocking block of the
            # Perron matrix carries the error θ - α from step to step
            block = perron(g, config.epsilon)[: config.k, : config.k]
            contraction = float(np.abs(np.linalg.eigvalsh(block)).max())
            self.assertLess(contraction, 1)
            error = np.linalg.norm(state.flocking_headings - config.alpha)
            steps = math.log(0.01 / error) / math.log(contraction)
            bound = max(0, math.floor(steps) + 1)
            limit = math.ceil(1.1 * bound) + 1

            record = run_single(config.replace(max_steps=limit)).record
            with self.subTest(seed=seed, k=config.k):
                self.assertIs(record.classification, RunClass.CLEAN)
                self.assertLessEqual(record.convergence_step, 1.1 * bound)
