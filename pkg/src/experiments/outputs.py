import json
import os
from datetime import datetime, timezone
from typing import Any, Dict, Hashable, List, Optional
import numpy as np
import pandas as pd
from numerics.utils import logger
from penalties.l0 import signature_label
from solver.trace import RunTrace

TRACE_COLUMNS = ['k', 'phi', 'delta', 'resid', 'activity', 'dist_to_xstar', 'identified']
FLOAT_FORMAT = '%.17g'


def activity_label(sig: Hashable) -> str:
    """Text form of an activity signature: support hash, rank, or '|'-joined parts."""
    if isinstance(sig, (int, np.integer)):
        return f'r{int(sig)}'
    if isinstance(sig, tuple) and all((isinstance(v, (int, np.integer)) for v in sig)):
        return signature_label(sig)
    if isinstance(sig, tuple):
        return '|'.join((activity_label(part) for part in sig))
    return str(sig)


def trace_frame(trace: RunTrace, K: Optional[int]=None) -> pd.DataFrame:
    rows = [{'k': r.k, 'phi': r.phi, 'delta': r.delta, 'resid': r.resid, 'activity': activity_label(r.signature), 'dist_to_xstar': r.dist, 'identified': int(K is not None and r.k >= K)} for r in trace.records]
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def _to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return str(obj)
    return obj


def write_trace_csv(output_path: str, trace: RunTrace, feasibility: Optional[Dict[str, Any]]=None, K: Optional[int]=None):
    """Trace CSV with '#' header lines for seed, schedule and feasibility report."""
    os.makedirs(os.path.dirname(output_path) or '.', exist_ok=True)
    df = trace_frame(trace, K)
    with open(output_path, 'w', encoding='utf-8', newline='') as f:
        f.write(f'# seed={trace.seed}\n')
        f.write(f'# schedule={json.dumps(_to_jsonable(trace.schedule), sort_keys=True)}\n')
        f.write(f'# feasibility={json.dumps(_to_jsonable(feasibility), sort_keys=True)}\n')
        f.write(f'# termination={trace.termination}\n')
        df.to_csv(f, index=False, float_format=FLOAT_FORMAT, na_rep='nan', lineterminator='\n')
    logger.info(f'Saved trace ({len(df)} rows) to {output_path}')


def read_trace_csv(input_path: str) -> pd.DataFrame:
    return pd.read_csv(input_path, comment='#', encoding='utf-8')


def write_table_csv(output_path: str, rows: List[Dict[str, Any]], columns: Optional[List[str]]=None):
    os.makedirs(os.path.dirname(output_path) or '.', exist_ok=True)
    df = pd.DataFrame([_to_jsonable(r) for r in rows], columns=columns)
    df.to_csv(output_path, index=False, float_format=FLOAT_FORMAT, na_rep='nan', lineterminator='\n', encoding='utf-8')
    logger.info(f'Saved table ({len(df)} rows) to {output_path}')


def write_json(output_path: str, data: Any):
    os.makedirs(os.path.dirname(output_path) or '.', exist_ok=True)
    with open(output_path, 'w', encoding='utf-8') as f:
        json.dump(_to_jsonable(data), f, indent=2, sort_keys=True)
    logger.info(f'Saved {output_path}')


def write_metadata(output_dir: str, command: str, config_path: str, extra: Optional[Dict[str, Any]]=None):
    """Sidecar with the run timestamp; the only non-deterministic artifact."""
    meta = {'command': command, 'config': os.path.abspath(config_path), 'created_at': datetime.now(timezone.utc).isoformat()}
    meta.update(extra or {})
    write_json(os.path.join(output_dir, 'metadata.json'), meta)
