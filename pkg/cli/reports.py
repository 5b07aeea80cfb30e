"""
Bench report rows, CSV I/O, gap summaries and plot-data export
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from django.conf import settings
from django.core.exceptions import ValidationError

from instances.domain import Instance
from verification.metrics import relative_gap

from .runners import METHOD_BNC, METHOD_GTSP, MethodRun
from .serializers import BENCH_COLUMNS, BenchRowSerializer

logger = logging.getLogger(__name__)

COLUMN_RENAMES = {'gap_pct': 'gap%', 'class_tag': 'class'}
HISTOGRAM_BINS = 10


def gap_percent(cost: Optional[float], reference: Optional[float]) -> Optional[float]:
    if cost is None or reference is None:
        return None
    if reference <= 0:
        return 0.0 if cost <= settings.SOLVER_TOLERANCES['comparison'] else None
    return relative_gap(cost, reference)


def reference_cost(runs: Sequence[MethodRun]) -> Optional[float]:
    """Best proven optimum among the runs, None when nothing was proven."""
    proven = [run.cost for run in runs if run.proven_optimal and run.cost is not None]
    return min(proven) if proven else None


def bench_rows(name: str, inst: Instance, runs: Sequence[MethodRun]) -> List[Dict]:
    """
    Report lines of one instance, validated through BenchRowSerializer

    Raises:
        ValidationError: a row breaks the report schema
    """
    reference = reference_cost(runs)
    rows = []
    for run in runs:
        serializer = BenchRowSerializer(data={
            'instance': name,
            'method': run.method,
            'cost': run.cost,
            'bound': run.bound,
            'gap_pct': gap_percent(run.cost, reference),
            'nodes': run.nodes,
            'cuts': run.cuts,
            'seconds': run.seconds,
            'class_tag': inst.class_tag,
            'n': inst.n,
            'alpha': inst.alpha,
            'status': run.status,
        })
        if not serializer.is_valid():
            raise ValidationError(f"bench row for {name}/{run.method} is invalid: {serializer.errors}")
        rows.append(dict(serializer.validated_data))
    return rows


def rows_to_frame(rows: Sequence[Dict]) -> pd.DataFrame:
    frame = pd.DataFrame(list(rows), columns=list(BenchRowSerializer().fields))
    return frame.rename(columns=COLUMN_RENAMES)[list(BENCH_COLUMNS)]


def write_report(rows: Sequence[Dict], path) -> pd.DataFrame:
    frame = rows_to_frame(rows).sort_values(['instance', 'method'], kind='stable')
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    logger.info(f"[SUCCESS] Wrote {len(frame)} bench rows to {path}")
    return frame


def read_report(path) -> pd.DataFrame:
    """
    Raises:
        ValidationError: missing columns
    """
    frame = pd.read_csv(path, dtype={'instance': str, 'method': str, 'class': str, 'status': str})
    missing = [c for c in BENCH_COLUMNS if c not in frame.columns]
    if missing:
        raise ValidationError(f"{path}: report lacks columns {missing}")
    return frame


# ============================================================================
# SUMMARIES AND PLOT DATA
# ============================================================================

def summarize(frame: pd.DataFrame) -> pd.DataFrame:
    """Gap (max, mean, std) and runtime statistics per class, size, alpha and method."""
    keys = ['class', 'n', 'alpha', 'method']
    if frame.empty:
        return pd.DataFrame(columns=keys + ['instances', 'gap_max', 'gap_mean', 'gap_std',
                                            'seconds_mean', 'seconds_max'])
    return (
        frame.groupby(keys, sort=True)
        .agg(instances=('instance', 'nunique'),
             gap_max=('gap%', 'max'),
             gap_mean=('gap%', 'mean'),
             gap_std=('gap%', 'std'),
             seconds_mean=('seconds', 'mean'),
             seconds_max=('seconds', 'max'))
        .reset_index()
    )


def cost_scatter(frame: pd.DataFrame) -> pd.DataFrame:
    """Proven optimum against heuristic cost, one line per instance having both."""
    optimal = frame[frame['status'] == 'optimal'].groupby('instance')['cost'].min().rename('optimal_cost')
    heuristic = frame[frame['method'] == METHOD_GTSP].groupby('instance')['cost'].min().rename('heuristic_cost')
    meta = frame.groupby('instance')[['class', 'n', 'alpha']].first()
    joined = pd.concat([meta, optimal, heuristic], axis=1, join='inner').dropna()
    return joined.reset_index().rename(columns={'index': 'instance'})


def heuristic_time_histogram(frame: pd.DataFrame, class_tag: str = 'C', bins: int = HISTOGRAM_BINS) -> pd.DataFrame:
    seconds = frame[(frame['method'] == METHOD_GTSP) & (frame['class'] == class_tag)]['seconds'].to_numpy(float)
    if seconds.size == 0:
        return pd.DataFrame(columns=['bin_left', 'bin_right', 'count'])
    counts, edges = np.histogram(seconds, bins=bins)
    return pd.DataFrame({'bin_left': edges[:-1], 'bin_right': edges[1:], 'count': counts})


def export_plotdata(frame: pd.DataFrame, out_dir) -> List[Path]:
    """
    Write the plot-ready CSVs

    runtime_boxplot.csv       n, method, seconds (one line per run)
    cost_scatter.csv          instance, class, n, alpha, optimal_cost, heuristic_cost
    heuristic_time_hist.csv   class C heuristic runtimes binned
    cut_counts.csv            branch-and-cut cuts and nodes per instance
    gap_summary.csv           summarize()
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tables = {
        'runtime_boxplot.csv': frame[['n', 'method', 'seconds']].sort_values(['n', 'method'], kind='stable'),
        'cost_scatter.csv': cost_scatter(frame),
        'heuristic_time_hist.csv': heuristic_time_histogram(frame),
        'cut_counts.csv': frame[frame['method'] == METHOD_BNC][['instance', 'n', 'alpha', 'cuts', 'nodes']],
        'gap_summary.csv': summarize(frame),
    }
    written = []
    for name, table in tables.items():
        path = out_dir / name
        table.to_csv(path, index=False)
        written.append(path)
    logger.info(f"[SUCCESS] Exported {len(written)} plot-data files to {out_dir}")
    return written
