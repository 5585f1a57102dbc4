from typing import Hashable, Optional, Sequence, Union
from solver.trace import RunTrace

MIN_RUN = 5


def detect_identification(trace: Union[RunTrace, Sequence[Hashable]], x_star_signature: Hashable, min_run: int=MIN_RUN) -> Optional[int]:
    """Smallest K from which every recorded signature equals ``x_star_signature``.

    Returns None when the final run of matches is shorter than ``min_run``.
    """
    if isinstance(trace, RunTrace):
        ks = [r.k for r in trace.records]
        sigs = trace.signatures
    else:
        sigs = list(trace)
        ks = list(range(1, len(sigs) + 1))
    run = 0
    for sig in reversed(sigs):
        if sig != x_star_signature:
            break
        run += 1
    if run < min_run:
        return None
    return ks[len(sigs) - run]
