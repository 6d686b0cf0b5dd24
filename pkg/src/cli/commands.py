"""
Per-verb report builders for the command-line surface
"""
import logging
from typing import List, Optional, Tuple

from ..config import get_settings
from ..models.mdp import MdpModel, PeakSet, StateId
from ..models.schemas import (
    CollectionReport, Command, PropagationMode, Report, ValidationReport, Verb
)
from ..services import ExplainService, ModelService, OracleService, PeakSolver
from ..utils.exceptions import RenderError, UsageError
from ..utils.map_renderer import MapRenderer

logger = logging.getLogger(__name__)
settings = get_settings()


def state_label(model: MdpModel, s: StateId) -> str:
    """'x,y' on grids, the raw index otherwise"""
    if model.is_grid:
        x, y = model.coords(s)
        return f"{x},{y}"
    return str(s)


def parse_state(model: MdpModel, text: str) -> StateId:
    """
    Resolve a --state option against the model

    Raises:
        UsageError: malformed or out-of-range state
    """
    text = text.strip()
    try:
        if model.is_grid:
            x_text, y_text = text.split(",")
            x, y = int(x_text), int(y_text)
            if not (0 <= x < model.width and 0 <= y < model.height):
                raise UsageError(f"state {text} outside {model.width}x{model.height} grid")
            return model.state_at(x, y)
        s = int(text)
    except ValueError:
        expected = "x,y" if model.is_grid else "a state index"
        raise UsageError(f"--state {text!r}: expected {expected}")
    if not 0 <= s < model.num_states:
        raise UsageError(f"state {s} outside [0, {model.num_states})")
    return s


class CommandHandlers:
    """Builds the report for each verb from a validated model"""

    def __init__(self):
        self.model_service = ModelService()
        self.solver = PeakSolver()
        self.explainer = ExplainService(self.solver)
        self.oracle = OracleService()
        self.renderer = MapRenderer()

    def validation_report(self, report: ValidationReport) -> Report:
        out = Report(verb=Verb.VALIDATE)
        out.section("validation").add("ok", report.ok).add("violations", len(report.violations))
        for issue in report.violations:
            out.section("violation").add("code", issue.code).add("message", issue.message)
        return out

    def handle(self, command: Command, model: MdpModel) -> Tuple[int, Report]:
        """Dispatch a verb; the model must already be valid"""
        state = parse_state(model, command.state) if command.state is not None else None
        peakset = self.solver.solve(model)
        handlers = {
            Verb.SOLVE: lambda: self.solve(peakset),
            Verb.EXPLAIN: lambda: self.explain(peakset, state, command.mode),
            Verb.MAP: lambda: self.map(peakset, command),
            Verb.CONTRIBUTIONS: lambda: self.contributions(peakset, state),
            Verb.PATH: lambda: self.path(peakset, state),
            Verb.CHECK: lambda: self.check(peakset, command.budget),
        }
        result = handlers[command.verb]()
        if isinstance(result, tuple):
            return result
        return 0, result

    def solve(self, peakset: PeakSet) -> Report:
        model = peakset.model
        heights = peakset.heights
        rewards = peakset.rewards
        report = Report(verb=Verb.SOLVE)
        (report.section("model")
         .add("states", model.num_states)
         .add("rewards", model.num_rewards)
         .add("gamma", model.gamma)
         .add("sweeps", heights.sweeps)
         .add("closure_rounds", heights.closure_rounds))

        for i, reward in enumerate(rewards):
            (report.section("height")
             .add("reward", reward.id)
             .add("state", state_label(model, reward.state))
             .add("value", reward.value)
             .add("height", float(heights.heights[i]))
             .add("best_next", rewards[int(heights.best_next[i])].id)
             .add("ties", [rewards[j].id for j in heights.tie_sets[i]]))

        for peak in peakset.peaks:
            (report.section("peak")
             .add("id", peak.id)
             .add("kind", peak.kind)
             .add("members", [rewards[m].id for m in peak.members])
             .add("anchors", [(state_label(model, s), h) for s, h in peak.anchors])
             .add("cycle_length", peak.cycle_length)
             .add("parent", rewards[peak.parent].id if peak.parent is not None else None))
        return report

    def explain(self, peakset: PeakSet, s: StateId, mode: PropagationMode) -> Report:
        model = peakset.model
        action = self.explainer.policy_action(model, peakset, s)
        dominance = self.explainer.dominant_peak(peakset, s, mode)
        rule = self.explainer.collected_rewards_rule(peakset, s)
        chain = self.explainer.event_chain(peakset, s)
        agree = rule.as_set() == chain.as_set()
        if not agree:
            logger.warning(f"Collection rule and event chain disagree at state {s}")

        report = Report(verb=Verb.EXPLAIN)
        (report.section("query")
         .add("state", state_label(model, s))
         .add("value", self.solver.value_at(peakset, s))
         .add("action", model.action_name(s, action)))
        (report.section("dominance")
         .add("mode", dominance.mode)
         .add("dominant", dominance.dominant)
         .add("value", dominance.value)
         .add("co_dominant", dominance.co_dominant)
         .add("destination", dominance.destination)
         .add("detour", dominance.detour))
        self._collection_section(report, rule)
        self._collection_section(report, chain)
        report.section("agreement").add("equal", agree)
        return report

    def _collection_section(self, report: Report, collection: CollectionReport) -> None:
        (report.section("collected")
         .add("method", collection.method)
         .add("dominant", collection.dominant)
         .add("rewards", [(entry.reward, entry.count.value) for entry in collection.entries]))

    def map(self, peakset: PeakSet, command: Command) -> Report:
        dmap = self.explainer.region_map(peakset, command.mode)
        report = Report(verb=Verb.MAP)
        section = (report.section("map")
                   .add("mode", command.mode)
                   .add("peaks", [p.id for p in peakset.cycle_peaks])
                   .add("co_dominant_cells", sum(dmap.co_dominant))
                   .add("detour_cells", sum(dmap.detours)))
        symbols = self.renderer.peak_symbols(peakset)
        if symbols is not None and peakset.model.is_grid:
            section.add("legend", [(symbol, peak_id) for peak_id, symbol in symbols.items()])
        section.add("grid", self.renderer.render_ascii_map(dmap, peakset))

        if command.ppm_path:
            data = self.renderer.render_ppm_map(dmap, peakset, command.scale)
            try:
                with open(command.ppm_path, "wb") as handle:
                    handle.write(data)
            except OSError as e:
                logger.error(f"Cannot write {command.ppm_path}: {e}")
                raise RenderError(f"cannot write {command.ppm_path}: {e.strerror or e}")
            logger.info(f"Wrote {len(data)} bytes to {command.ppm_path}")
            report.section("ppm").add("path", command.ppm_path).add("bytes", len(data))
        return report

    def contributions(self, peakset: PeakSet, s: StateId) -> Report:
        result = self.explainer.relative_contributions(peakset, s)
        report = Report(verb=Verb.CONTRIBUTIONS)
        (report.section("contributions")
         .add("state", state_label(peakset.model, s))
         .add("value", result.value)
         .add("peaks", result.peaks)
         .add("ordered_values", result.ordered_values)
         .add("differences", result.differences)
         .add("ratios", result.ratios))
        return report

    def path(self, peakset: PeakSet, s: StateId) -> Report:
        model = peakset.model
        trace = self.explainer.optimal_path(model, peakset, s)

        def labels(states: List[int]) -> List[str]:
            return [state_label(model, t) for t in states]

        report = Report(verb=Verb.PATH)
        (report.section("path")
         .add("start", state_label(model, s))
         .add("states", labels(trace.states))
         .add("k_max", trace.k_max)
         .add("plus", labels(trace.plus))
         .add("cycle", labels(trace.cycle))
         .add("events", [(event.step, event.reward) for event in trace.events]))
        return report

    def check(self, peakset: PeakSet, budget: Optional[float]) -> Tuple[int, Report]:
        budget = settings.check_budget if budget is None else budget
        model = peakset.model
        table = self.oracle.value_iteration(model)
        comparison = self.oracle.compare_value_functions(self.solver.value_table(peakset), table.values)
        passed = comparison.max_abs_diff <= budget
        if not passed:
            logger.warning(f"Peak values differ from the oracle by {comparison.max_abs_diff:.3e}")

        report = Report(verb=Verb.CHECK)
        (report.section("check")
         .add("states", model.num_states)
         .add("oracle_sweeps", table.iterations)
         .add("oracle_residual", table.residual)
         .add("max_abs_diff", comparison.max_abs_diff)
         .add("max_rel_diff", comparison.max_rel_diff)
         .add("argmax_state", state_label(model, comparison.argmax_state))
         .add("budget", budget)
         .add("pass", passed))
        return (0 if passed else 1), report
