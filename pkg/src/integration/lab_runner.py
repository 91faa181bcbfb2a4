"""
Experiment dispatch for the command line.

Each subcommand has an async handler that builds the system from the resolved
RunConfig, checks the theorem hypotheses, runs the experiment and returns a
LabResult for the ArtifactWriter. Independent trials go to a process pool and
come back in trial-index order.
"""

import asyncio
import functools
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from ..classification.lambda_class import classify_lambda, cloud_oracle
from ..engine.observers import TraceObserver
from ..engine.orbit import finite_time_lyapunov, run_orbit
from ..engine.symbols import SymbolStream
from ..exceptions import InvalidParameterError
from ..processors.artifact_writer import LabResult
from ..series.linearization import PROBE_ORDER, koenigs_linearizer, linearization_residual, taylor_at_zero
from ..stats.circle import invariant_candidate_check, unit_circle_curve
from ..stats.coverage import coverage_probe
from ..stats.measure import EqualAreaGrid, empirical_cesaro_measure
from ..stats.nonnormal import non_normality_probe
from ..stats.occupation import OccupationResult, ensure_regular_start, occupation_trial
from ..stats.returns import collect_return_times, return_time_trial, running_mean_shifts, tail_scaling
from ..stats.sojourn import occupation_identity_check, sojourn_decomposition, sojourn_frequency_bound
from ..stats.tail import (
    default_k,
    hill_tail_index,
    mechanism_durations,
    predicted_tail_index,
    tail_frame,
)
from ..systems.catalog import IfsSystem, make_critical
from ..systems.hypotheses import HypothesisReport, check_hypotheses, lyapunov_at_origin
from ..validators.config_validator import ConfigValidator, RunConfig

COMMANDS = (
    "simulate",
    "occupation",
    "sojourn",
    "kac",
    "tail",
    "measure",
    "coverage",
    "classify-lambda",
    "linearize",
    "curve",
    "invariants-check",
    "probe-nonnormal",
    "mobius",
    "logistic",
)

# Resolved-config layers applied under the run file for the preset subcommands
PRESETS: Dict[str, Dict[str, Any]] = {
    "mobius": {"system": {"family": "mobius", "p0": 0.5}},
    "logistic": {"system": {"family": "logistic", "p0": 0.6}, "run": {"epsilon": 0.05}},
}

MEAN_SHIFT_BASE = 1000


class LabRunner:
    """Run one subcommand against a resolved configuration"""

    def __init__(self, config: RunConfig, validator: ConfigValidator, force: bool = False):
        self.config = config
        self.validator = validator
        self.force = force
        self.handlers: Dict[str, Callable] = {
            "simulate": self._handle_simulate,
            "occupation": self._handle_occupation,
            "sojourn": self._handle_sojourn,
            "kac": self._handle_kac,
            "tail": self._handle_tail,
            "measure": self._handle_measure,
            "coverage": self._handle_coverage,
            "classify-lambda": self._handle_classify_lambda,
            "linearize": self._handle_linearize,
            "curve": self._handle_curve,
            "invariants-check": self._handle_invariants_check,
            "probe-nonnormal": self._handle_probe_nonnormal,
            "mobius": self._handle_mobius,
            "logistic": self._handle_logistic,
        }

    async def run(self, command: str) -> LabResult:
        if command not in self.handlers:
            raise InvalidParameterError(f"Unknown command: {command}")
        logger.info(f"Running {command} with {self.config.system.family} system")
        try:
            result = await self.handlers[command]()
        except Exception as e:
            logger.error(f"Error running {command}: {str(e)}")
            raise
        logger.info(f"Finished {command}")
        return result

    # ------------------------------------------------------------------ helpers

    def _system(self, p0: Optional[float] = None) -> IfsSystem:
        return self.config.system.build(p0)

    def _checked(self, command: str, system: IfsSystem) -> HypothesisReport:
        report = check_hypotheses(system)
        self.validator.enforce_hypotheses(command, report, self.force)
        return report

    def _lambda(self) -> complex:
        lam = self.config.system.lam
        if lam is None:
            raise InvalidParameterError("This command needs system.lambda")
        return complex(*lam)

    def _lambda_report(self) -> Optional[Dict[str, Any]]:
        """Hypothesis report of the critical system for lambda, when one exists"""
        try:
            return check_hypotheses(make_critical(self._lambda(), self.config.system.p0)).model_dump()
        except InvalidParameterError as e:
            logger.warning(f"No critical system for this lambda: {str(e)}")
            return None

    async def _map_trials(self, fn: Callable, arguments: Sequence[tuple]) -> List[Any]:
        """fn(*args) for every args, in order; threads > 1 uses a process pool"""
        threads = self.config.run.threads
        if threads == 1 or len(arguments) == 1:
            return [fn(*args) for args in arguments]
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [loop.run_in_executor(pool, functools.partial(fn, *args)) for args in arguments]
            return list(await asyncio.gather(*futures))

    async def _occupation(self, system: IfsSystem) -> OccupationResult:
        run = self.config.run
        ensure_regular_start(system, run.start)
        arguments = [
            (system, run.start, run.epsilon, run.n_steps, run.seed, index) for index in range(run.trials)
        ]
        fractions = await self._map_trials(occupation_trial, arguments)
        return OccupationResult(list(fractions), run.epsilon, run.n_steps)

    async def _sojourns(self, system: IfsSystem) -> list:
        run = self.config.run
        arguments = [
            (system, run.start, run.epsilon, run.r_far, run.n_steps, run.seed, index)
            for index in range(run.trials)
        ]
        return await self._map_trials(sojourn_decomposition, arguments)

    # ----------------------------------------------------------------- handlers

    async def _handle_simulate(self) -> LabResult:
        system = self._system()
        report = self._checked("simulate", system)
        run = self.config.run
        trace = TraceObserver(run.trace_limit)
        state = run_orbit(system, run.start, SymbolStream(run.seed, 0, system.p0), run.n_steps, (trace,))
        final = state.point
        summary = {
            "steps": state.step,
            "final_point": None if final.is_infinity else final.to_complex(),
            "final_anchor": state.anchor,
            "final_log_offset": state.log_offset,
            "lyapunov_estimate": finite_time_lyapunov(state) if state.step else None,
            "lyapunov_at_origin": lyapunov_at_origin(system),
            "trace_rows": len(trace.rows),
        }
        return LabResult(
            "simulate",
            frames={"trace": trace.to_frame()},
            documents={"simulate_summary": summary},
            hypothesis=report.model_dump(),
            summary=summary,
        )

    async def _handle_occupation(self) -> LabResult:
        system = self._system()
        report = self._checked("occupation", system)
        result = await self._occupation(system)
        frame = pd.DataFrame({"trial": np.arange(len(result.fractions)), "fraction": result.fractions})
        summary = {**result.summary(), "regime": report.regime}
        return LabResult(
            "occupation",
            frames={"occupation": frame},
            documents={"occupation_summary": summary},
            hypothesis=report.model_dump(),
            summary=summary,
        )

    async def _handle_sojourn(self) -> LabResult:
        system = self._system()
        report = self._checked("sojourn", system)
        records = await self._sojourns(system)

        rows = []
        for index, record in enumerate(records):
            occupation = record.inside_count / record.length if record.length else 0.0
            bound = sojourn_frequency_bound(record)
            rows.append(
                {
                    "trial": index,
                    "laminar_phases": len(record.etas),
                    "bursts": len(record.xis),
                    "mean_eta": float(np.mean(record.etas)) if record.etas else None,
                    "mean_xi": float(np.mean(record.xis)) if record.xis else None,
                    "occupation": occupation,
                    "frequency_bound": float(bound) if bound is not None else None,
                    "identity_residual": str(occupation_identity_check(record)),
                    "single_phase": record.single_phase,
                }
            )
        trials = pd.DataFrame(rows)
        summary = {
            "trials": len(records),
            "identity_exact": all(occupation_identity_check(r) == 0 for r in records),
            "min_bursts": int(trials["bursts"].min()),
            "mean_xi": float(np.mean([x for r in records for x in r.xis])) if any(r.xis for r in records) else None,
            "mean_eta": float(np.mean([e for r in records for e in r.etas])) if any(r.etas for r in records) else None,
            "regime": report.regime,
        }
        return LabResult(
            "sojourn",
            frames={"sojourn": records[0].to_frame(), "sojourn_trials": trials},
            documents={"sojourn_summary": {**summary, "first_trial": records[0].summary()}},
            hypothesis=report.model_dump(),
            summary=summary,
        )

    async def _handle_kac(self) -> LabResult:
        system = self._system()
        report = self._checked("kac", system)
        run = self.config.run
        arguments = [(system, run.inner_radius, run.cap, run.seed, index) for index in range(run.samples)]
        sample = collect_return_times(await self._map_trials(return_time_trial, arguments), run.cap)

        sizes = []
        size = MEAN_SHIFT_BASE
        while size <= sample.values.size:
            sizes.append(size)
            size *= 2
        shifts = running_mean_shifts(sample.values, sizes) if len(sizes) > 1 else []
        exponents = [n for n in self.config.probe.tail_exponents if 2 ** n < run.cap]
        scaling = tail_scaling(sample.values, run.cap, exponents, system.p0) if exponents else None

        frame = pd.DataFrame(
            {"sample": np.arange(sample.values.size), "return_time": sample.values, "censored": sample.censored}
        )
        summary = {
            **sample.summary(),
            "inner_radius": run.inner_radius,
            "mean_shift_sizes": sizes,
            "mean_shifts": shifts,
            "tail_scaling": scaling.to_dict() if scaling is not None else None,
            "regime": report.regime,
        }
        return LabResult(
            "kac",
            frames={"kac": frame, "tail": tail_frame(sample.values)},
            documents={"kac_summary": summary},
            hypothesis=report.model_dump(),
            summary=summary,
        )

    async def _laminar_durations(self, system: IfsSystem) -> Tuple[np.ndarray, int]:
        """Pooled eta_k in trial order, adding batches of run.trials until sojourn_target phases"""
        run = self.config.run
        target = run.sojourn_target
        durations: List[int] = []
        used = 0
        while used < run.max_trials:
            batch = range(used, min(used + run.trials, run.max_trials))
            arguments = [
                (system, run.start, run.epsilon, run.r_far, run.n_steps, run.seed, index) for index in batch
            ]
            for record in await self._map_trials(sojourn_decomposition, arguments):
                durations.extend(record.etas)
            used = batch.stop
            logger.debug(f"{len(durations)} laminar phases after {used} trials")
            if len(durations) >= target:
                break
        if len(durations) < target:
            logger.warning(f"Only {len(durations)} laminar phases in {used} trials; target was {target}")
        elif target:
            durations = durations[:target]
        return np.array(durations, dtype=float), used

    async def _handle_tail(self) -> LabResult:
        system = self._system()
        report = self._checked("tail", system)
        probe = self.config.probe
        durations, trials_used = await self._laminar_durations(system)

        k = min(probe.hill_k, default_k(durations.size))
        if k < probe.hill_k:
            logger.warning(f"hill_k={probe.hill_k} too large for {durations.size} laminar phases; using k={k}")
        estimate = hill_tail_index(durations, k, probe.bootstrap, self.config.run.seed)
        oracle_samples = mechanism_durations(system.p0, durations.size, self.config.run.seed)
        oracle = hill_tail_index(oracle_samples, k, probe.bootstrap, self.config.run.seed)
        summary = {
            "laminar": estimate.to_dict(),
            "mechanism": oracle.to_dict(),
            "predicted_alpha": predicted_tail_index(system.p0),
            "trials_used": trials_used,
            "regime": report.regime,
        }
        return LabResult(
            "tail",
            frames={"tail": tail_frame(durations)},
            documents={"tail_summary": summary},
            hypothesis=report.model_dump(),
            summary=summary,
        )

    async def _handle_measure(self) -> LabResult:
        system = self._system()
        report = self._checked("measure", system)
        return self._measure_result("measure", system, report)

    def _measure_result(self, command: str, system: IfsSystem, report: HypothesisReport) -> LabResult:
        run, probe = self.config.run, self.config.probe
        histogram = empirical_cesaro_measure(
            system,
            run.start,
            run.n_steps,
            run.burnin,
            EqualAreaGrid.for_cells(probe.cells),
            run.seed,
            0,
            probe.near_radius,
        )
        summary = {**histogram.summary(), "regime": report.regime}
        return LabResult(
            command,
            frames={"histogram": histogram.to_frame()},
            documents={"measure_summary": summary},
            hypothesis=report.model_dump(),
            summary=summary,
        )

    async def _handle_coverage(self) -> LabResult:
        system = self._system()
        report = self._checked("coverage", system)
        probe = self.config.probe
        coverage = coverage_probe(system, self.config.run.start, probe.depth, probe.cells, probe.budget)
        summary = {**coverage.summary(), "regime": report.regime}
        return LabResult(
            "coverage",
            frames={"coverage": coverage.to_frame()},
            documents={"coverage_summary": summary},
            hypothesis=report.model_dump(),
            summary=summary,
        )

    async def _handle_classify_lambda(self) -> LabResult:
        lam = self._lambda()
        probe = self.config.probe
        scale_sign = -1 if abs(lam) > 1.0 else 1
        result = classify_lambda(lam, probe.qmax, probe.tol, scale_sign)
        payload = result.to_dict(lam)
        payload["oracle"] = cloud_oracle(lam, result)
        return LabResult(
            "classify-lambda",
            documents={"lambda_class": payload},
            hypothesis=self._lambda_report(),
            summary=payload,
        )

    async def _handle_linearize(self) -> LabResult:
        system = self._system()
        order = self.config.probe.K_series
        target = system.map0 if self.config.probe.map == "f0" else system.map1
        phi = koenigs_linearizer(taylor_at_zero(target, order))
        f1 = taylor_at_zero(system.map1, order)
        residual = linearization_residual(phi, f1, f1.multiplier)
        payload = {
            "map": self.config.probe.map,
            "K": order,
            "phi": phi.as_pairs(),
            "residual_f1": residual.as_pairs(),
        }
        return LabResult(
            "linearize",
            documents={"linearization": payload},
            hypothesis=check_hypotheses(system).model_dump(),
            summary=payload,
        )

    async def _handle_curve(self) -> LabResult:
        lam = self._lambda()
        curve = unit_circle_curve(lam, self.config.probe.curve_samples)
        summary = {"lambda": lam, **curve.summary()}
        return LabResult(
            "curve",
            frames={"curve": curve.frame},
            documents={"curve_summary": summary},
            hypothesis=self._lambda_report(),
            summary=summary,
        )

    async def _handle_invariants_check(self) -> LabResult:
        lam = self._lambda()
        rows = invariant_candidate_check(lam)
        frame = pd.DataFrame(
            {"set": [row["set"] for row in rows], "invariant": [row["invariant"] for row in rows]}
        )
        summary = {"lambda": lam, "sets": len(rows), "invariant_sets": int(frame["invariant"].sum())}
        return LabResult(
            "invariants-check",
            frames={"invariants": frame},
            documents={"invariants": {"lambda": lam, "sets": rows}},
            hypothesis=self._lambda_report(),
            summary=summary,
        )

    async def _handle_probe_nonnormal(self) -> LabResult:
        lam = self._lambda()
        probe = self.config.probe
        report = non_normality_probe(lam, probe.scale, probe.cycles, PROBE_ORDER)
        frame = pd.DataFrame(
            {
                "step": np.arange(len(report.ratios)),
                "symbol": pd.array([None] + report.symbols, dtype="Int64"),
                "ratio": report.ratios,
            }
        )
        summary = {"lambda": lam, "scale": probe.scale, **report.summary()}
        return LabResult(
            "probe-nonnormal",
            frames={"nonnormal": frame},
            documents={"nonnormal_summary": summary},
            hypothesis=self._lambda_report(),
            summary=summary,
        )

    async def _handle_mobius(self) -> LabResult:
        system = self._system()
        report = self._checked("mobius", system)
        measured = self._measure_result("mobius", system, report)
        occupation = await self._occupation(system)
        measured.frames["occupation"] = pd.DataFrame(
            {"trial": np.arange(len(occupation.fractions)), "fraction": occupation.fractions}
        )
        summary = {
            "mu": system.parameter,
            "lyapunov_at_origin": lyapunov_at_origin(system),
            "measure": measured.summary,
            "occupation": occupation.summary(),
        }
        measured.documents = {"mobius_summary": summary}
        measured.summary = summary
        return measured

    async def _handle_logistic(self) -> LabResult:
        """Occupation of (0, epsilon) with p(g2) as configured and with the probabilities swapped"""
        base = self._system()
        report = self._checked("logistic", base)
        frames = []
        runs = {}
        for p0 in (base.p0, base.p1):
            system = base.with_p0(p0)
            result = await self._occupation(system)
            frames.append(
                pd.DataFrame(
                    {"p_g2": p0, "trial": np.arange(len(result.fractions)), "fraction": result.fractions}
                )
            )
            runs[f"p_g2={p0:g}"] = {**result.summary(), "regime": check_hypotheses(system).regime}
        summary = {"runs": runs, "concentrates": max(runs, key=lambda key: runs[key]["median"])}
        if math.isclose(base.p0, base.p1):
            logger.warning("p(g2) = p(g4); the swapped run repeats the first")
        return LabResult(
            "logistic",
            frames={"logistic_occupation": pd.concat(frames, ignore_index=True)},
            documents={"logistic_summary": summary},
            hypothesis=report.model_dump(),
            summary=summary,
        )
