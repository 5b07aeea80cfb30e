"""
Branch-and-cut driver

Nodes are processed best bound first. Each node runs a cut loop on its LP
relaxation (connectivity rows, 2-matching rows), then either accepts an
integral point as incumbent, or rounds the fractional point and branches.
Cuts are globally valid and go into one pool shared by every node.

Solutions whose GV ring is the base alone cannot be expressed by the
model's degree rows; when every target is within range of the base such a
route is evaluated up front and offered as the first incumbent.
"""

import logging
import math
import threading
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from django.conf import settings

from formulation.model_builder import ModelOptions, build_model
from formulation.objective import evaluate_objective, point_to_solution
from instances.domain import BASE, Instance
from lp.backends import INFEASIBLE, OPTIMAL as LP_OPTIMAL
from lp.relaxation import ModelRelaxation
from separation.cut_pool import CutPool, separate_all
from tsp.tours import tsp_exact, tsp_heuristic
from verification.domain import Solution
from verification.feasibility import check_feasibility

from .rounding import lp_rounding
from .tree import Node, NodeQueue, is_integral, select_branching_column, split

logger = logging.getLogger(__name__)

STATUS_OPTIMAL = 'optimal'
STATUS_TIME_LIMIT = 'time_limit'
STATUS_INFEASIBLE = 'infeasible'
STATUSES = (STATUS_OPTIMAL, STATUS_TIME_LIMIT, STATUS_INFEASIBLE)


@dataclass
class SolveReport:
    status: str
    incumbent: Optional[Solution] = None
    cost: Optional[float] = None
    bound: float = -math.inf
    gap: Optional[float] = None
    nodes: int = 0
    cut_counts: Dict[str, int] = field(default_factory=dict)
    rounding_successes: int = 0
    wall_time: float = 0.0

    @property
    def total_cuts(self) -> int:
        return sum(self.cut_counts.values())


def optimality_gap(cost: Optional[float], bound: float, tol: float = 1e-6) -> Optional[float]:
    """(incumbent - bound) / incumbent, 0 once they meet within tol * max(1, incumbent)."""
    if cost is None:
        return None
    if cost - bound <= tol * max(1.0, abs(cost)):
        return 0.0
    if not math.isfinite(bound):
        return math.inf
    return (cost - bound) / abs(cost) if cost else math.inf


def base_only_solution(inst: Instance, exact_cap: Optional[int] = None) -> Optional[Solution]:
    """Every target flown from the base, or None when some target is out of range."""
    if not np.all(inst.in_range[BASE]):
        return None
    if inst.n == 1:
        return Solution.from_routes([BASE])
    cap = settings.TSP_SETTINGS['held_karp_max_nodes'] if exact_cap is None else exact_cap
    nodes = list(range(inst.n))
    if inst.n <= cap:
        tour = tsp_exact(inst.d, nodes)
    else:
        logger.warning(f"[UPDATE] Base-only route over {inst.n} targets routed heuristically")
        tour = tsp_heuristic(inst.d, nodes)
    return Solution.from_routes([BASE], {BASE: tour[1:]})


class BranchAndCut:
    """
    One exact solve of an instance

    Args:
        inst: instance
        options: ModelOptions
        time_limit / node_limit: stop criteria; the report then carries
            status time_limit with the best bound and incumbent so far
        use_rounding: run the LP rounding heuristic on fractional points
        workers: threads pulling nodes from the shared queue
        backend: LP backend name
    """

    def __init__(self, inst: Instance, options: Optional[ModelOptions] = None,
                 time_limit: Optional[float] = None, node_limit: Optional[int] = None,
                 use_rounding: bool = True, workers: Optional[int] = None,
                 backend: Optional[str] = None, max_cut_rounds: Optional[int] = None,
                 max_cuts_per_round: Optional[int] = None):
        conf = settings.BNC_SETTINGS
        self.inst = inst
        self.options = options or ModelOptions()
        self.time_limit = conf['time_limit'] if time_limit is None else time_limit
        self.node_limit = conf['node_limit'] if node_limit is None else node_limit
        self.use_rounding = use_rounding
        self.workers = max(1, conf['workers'] if workers is None else workers)
        self.backend = backend
        self.max_cut_rounds = conf['max_cut_rounds'] if max_cut_rounds is None else max_cut_rounds
        self.max_cuts_per_round = conf['max_cuts_per_round'] if max_cuts_per_round is None else max_cuts_per_round
        self.int_tol = settings.SOLVER_TOLERANCES['integrality']
        self.cmp_tol = settings.SOLVER_TOLERANCES['comparison']

        self.model = build_model(inst, self.options)
        self.relaxation = ModelRelaxation(self.model)
        self.pool = CutPool()
        self.queue = NodeQueue()

        self.incumbent: Optional[Solution] = None
        self.incumbent_cost = math.inf
        self.nodes = 0
        self.rounding_successes = 0
        self.limit_hit = False
        self.unresolved_bound = math.inf

        self._lock = threading.RLock()
        self._idle = threading.Condition(self._lock)
        self._in_progress: Dict[int, float] = {}
        self._started = 0.0

    # ------------------------------------------------------------------
    # Incumbent
    # ------------------------------------------------------------------

    def _prunable(self, bound: float) -> bool:
        with self._lock:
            cost = self.incumbent_cost
        return bound >= cost - self.cmp_tol * max(1.0, abs(cost)) if math.isfinite(cost) else False

    def offer(self, sol: Solution, source: str) -> bool:
        """Accept sol as incumbent if feasible and cheaper."""
        report = check_feasibility(self.inst, sol, strict_rings=self.options.strict_rings)
        if not report['ok']:
            logger.debug(f"Rejected {source} candidate: {report['violations'][:3]}")
            return False
        cost = evaluate_objective(self.inst, sol, use_penalty_f=self.options.use_penalty_f)
        with self._lock:
            if cost < self.incumbent_cost - 1e-9:
                self.incumbent, self.incumbent_cost = sol.canonical(), cost
                logger.info(f"[UPDATE] New incumbent {cost:.6f} from {source} after {self.nodes} node(s)")
                return True
        return False

    # ------------------------------------------------------------------
    # Node processing
    # ------------------------------------------------------------------

    def _out_of_time(self) -> bool:
        return time.perf_counter() - self._started > self.time_limit

    def _leave_open(self, bound: float):
        """The node's subtree stays unexplored; its bound caps the reported bound."""
        with self._lock:
            self.unresolved_bound = min(self.unresolved_bound, bound)

    def _solve_node_lp(self, node: Node, basis):
        result, point, value = self.relaxation.solve(node.fixings, warm_basis=basis, backend=self.backend)
        if result.status not in (LP_OPTIMAL, INFEASIBLE) and self.backend != 'highs':
            logger.warning(f"[UPDATE] LP ended with {result.status}, retrying with HiGHS")
            result, point, value = self.relaxation.solve(node.fixings, backend='highs')
        return result, point, value

    def process(self, node: Node) -> List[Node]:
        """Cut loop, incumbent check and branching for one node; returns the children."""
        if self._prunable(node.parent_bound):
            return []
        basis = node.basis
        rounds = 0
        while True:
            rows_seen = self.relaxation.n_rows
            result, point, value = self._solve_node_lp(node, basis)
            if result.status == INFEASIBLE:
                return []
            if not result.is_optimal:
                logger.error(f"[ERROR] Node at depth {node.depth} left unresolved: LP {result.status}")
                self._leave_open(node.parent_bound)
                return []
            basis = result.basis
            bound = max(value, node.parent_bound)
            with self._lock:
                self._in_progress[id(node)] = bound
            if self._prunable(bound):
                return []
            if self.options.use_penalty_f and value >= self.inst.big:
                return []

            integral = is_integral(point, self.int_tol)
            cuts = separate_all(point, self.inst, pool=self.pool, max_cuts=self.max_cuts_per_round)
            if cuts and self._out_of_time():
                self._leave_open(bound)
                return []
            if cuts and (rounds < self.max_cut_rounds or integral):
                added = self.pool.add(cuts)
                self.relaxation.add_rows(added)
                rounds += 1
                continue
            if not cuts and self.relaxation.n_rows != rows_seen:
                # another worker added rows meanwhile
                continue
            break

        if integral:
            sol = point_to_solution(self.inst, point, self.int_tol)
            verdict = check_feasibility(self.inst, sol, strict_rings=self.options.strict_rings)
            if not verdict['ok']:
                logger.error(
                    f"[ERROR] Integral point at depth {node.depth} is infeasible and no cut separates it: "
                    f"{verdict['violations'][:3]}"
                )
                self._leave_open(bound)
                return []
            self.offer(sol, source='lp')
            return []

        if self.use_rounding:
            rounded = lp_rounding(point, self.inst)
            if self.offer(rounded, source='rounding'):
                with self._lock:
                    self.rounding_successes += 1
            if self._prunable(bound):
                return []

        col = select_branching_column(self.model, point, self.int_tol)
        if col is None:
            logger.error(f"[ERROR] No branching column on a fractional point at depth {node.depth}")
            self._leave_open(bound)
            return []
        down, up = split(self.model, node, col, float(point[col]))
        logger.debug(
            f"Branch on {self.model.layout.name(col)} = {point[col]:.4f} at depth {node.depth}, bound {bound:.6f}"
        )
        return [node.child(col, *down, bound=bound, basis=basis),
                node.child(col, *up, bound=bound, basis=basis)]

    # ------------------------------------------------------------------
    # Tree loop
    # ------------------------------------------------------------------

    def _worker(self):
        while True:
            with self._idle:
                while True:
                    if self.limit_hit:
                        return
                    node = self.queue.pop()
                    if node is not None:
                        if self._out_of_time() or self.nodes >= self.node_limit:
                            self.queue.push(node)
                            self.limit_hit = True
                            self._idle.notify_all()
                            return
                        break
                    if not self._in_progress:
                        self._idle.notify_all()
                        return
                    self._idle.wait(timeout=0.05)
                self.nodes += 1
                self._in_progress[id(node)] = node.parent_bound

            children = []
            try:
                children = self.process(node)
            finally:
                # children are queued before the node stops counting as in progress
                for child in children:
                    self.queue.push(child)
                with self._idle:
                    self._in_progress.pop(id(node), None)
                    self._idle.notify_all()

    def run(self) -> SolveReport:
        self._started = time.perf_counter()
        logger.info(
            f"Branch-and-cut on {self.inst!r}: {self.model.n_columns} columns, "
            f"{self.relaxation.n_rows} rows, {self.workers} worker(s)"
        )

        if not self.options.strict_rings:
            base_only = base_only_solution(self.inst)
            if base_only is not None:
                self.offer(base_only, source='base-only route')

        if self.relaxation.trivially_infeasible:
            logger.warning("[UPDATE] Static rows infeasible on the fixed columns")
        else:
            self.queue.push(Node())
            if self.workers == 1:
                self._worker()
            else:
                threads = [threading.Thread(target=self._worker, name=f"bnc-worker-{k}") for k in range(self.workers)]
                for thread in threads:
                    thread.start()
                for thread in threads:
                    thread.join()

        return self._report()

    def _report(self) -> SolveReport:
        wall = time.perf_counter() - self._started
        cost = self.incumbent_cost if self.incumbent is not None else None
        open_bound = min([self.queue.min_bound(), self.unresolved_bound] + list(self._in_progress.values()))
        if self.limit_hit or math.isfinite(self.unresolved_bound):
            status = STATUS_TIME_LIMIT
            bound = min(open_bound, cost) if cost is not None else open_bound
        elif cost is None:
            status = STATUS_INFEASIBLE
            bound = math.inf
        else:
            status = STATUS_OPTIMAL
            bound = cost

        gap = optimality_gap(cost, bound, self.cmp_tol)
        if status == STATUS_TIME_LIMIT and gap == 0.0 and not math.isfinite(self.unresolved_bound):
            status = STATUS_OPTIMAL
        report = SolveReport(
            status=status,
            incumbent=self.incumbent,
            cost=cost,
            bound=bound,
            gap=gap,
            nodes=self.nodes,
            cut_counts=dict(self.pool.counts),
            rounding_successes=self.rounding_successes,
            wall_time=wall,
        )
        tag = '[SUCCESS]' if status == STATUS_OPTIMAL else '[UPDATE]'
        logger.info(
            f"{tag} Branch-and-cut {status}: cost {cost}, bound {bound}, {self.nodes} node(s), "
            f"{report.total_cuts} cut(s), {wall:.2f}s"
        )
        return report


def solve_exact(inst: Instance, time_limit: Optional[float] = None, node_limit: Optional[int] = None,
                use_rounding: bool = True, use_valid_ineq: bool = True,
                options: Optional[ModelOptions] = None, workers: Optional[int] = None,
                backend: Optional[str] = None) -> SolveReport:
    """
    Exact branch-and-cut solve

    Args:
        inst: validated instance
        time_limit: seconds, defaults to BNC_SETTINGS['time_limit']
        node_limit: defaults to BNC_SETTINGS['node_limit']
        use_rounding: LP rounding heuristic on fractional points
        use_valid_ineq: static neighborhood / edge-exclusion rows
        options: ModelOptions; use_valid_ineq overrides its flag
        workers: tree workers, defaults to BNC_SETTINGS['workers']
        backend: LP backend name

    Returns:
        SolveReport
    """
    base = options or ModelOptions()
    options = ModelOptions(
        use_penalty_f=base.use_penalty_f,
        include_valid_inequalities=use_valid_ineq,
        strict_rings=base.strict_rings,
    )
    solver = BranchAndCut(inst, options=options, time_limit=time_limit, node_limit=node_limit,
                          use_rounding=use_rounding, workers=workers, backend=backend)
    return solver.run()
