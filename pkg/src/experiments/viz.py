import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence
import numpy as np
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
from numerics.errors import PlotError
from numerics.utils import logger

SVG_HASHSALT = 'mifb'


@dataclass
class PlotSeries:
    """One polyline of ||x_k - x*|| against k.

    ``marker_k`` places the identification dot; ``predicted_rate`` draws a
    dashed line rho^(k - K) anchored at the marker.
    """
    label: str
    ks: Sequence[int]
    values: Sequence[float]
    marker_k: Optional[int] = None
    predicted_rate: Optional[float] = None


class ConvergenceVisualizer:

    def __init__(self, output_dir: str='results/figures'):
        self.output_dir = output_dir
        os.makedirs(output_dir, exist_ok=True)
        plt.style.use('default')
        matplotlib.rcParams['svg.hashsalt'] = SVG_HASHSALT

    def _positive(self, series: PlotSeries):
        ks = np.asarray(series.ks, dtype=np.float64)
        vals = np.asarray(series.values, dtype=np.float64)
        keep = np.isfinite(vals) & (vals > 0)
        dropped = int(vals.size - keep.sum())
        if dropped:
            logger.warning(f"Dropped {dropped} non-positive points from '{series.label}' on the log plot")
        return (ks[keep], vals[keep])

    def plot_distances(self, series: List[PlotSeries], title: str='Distance to the limit point', ylabel: str='||x_k - x*||', output_filename: str='distances.svg') -> str:
        if not series:
            raise PlotError('nothing to plot: empty series list')
        output_path = os.path.join(self.output_dir, output_filename)
        try:
            fig, ax = plt.subplots(figsize=(8, 5))
            for idx, item in enumerate(series):
                color = plt.cm.tab10(idx % 10)
                ks, vals = self._positive(item)
                if ks.size == 0:
                    continue
                ax.plot(ks, vals, color=color, linewidth=1.5, label=item.label)
                if item.marker_k is not None:
                    at = np.flatnonzero(ks == item.marker_k)
                    if at.size:
                        ax.plot(ks[at[0]], vals[at[0]], 'o', color='green', markersize=6)
                        if item.predicted_rate is not None and item.predicted_rate > 0:
                            tail = ks[ks >= item.marker_k]
                            ax.plot(tail, vals[at[0]] * item.predicted_rate ** (tail - item.marker_k), '--', color=color, linewidth=1.0, label=f'{item.label} predicted')
            ax.set_yscale('log')
            ax.set_xlabel('k', fontsize=12)
            ax.set_ylabel(ylabel, fontsize=12)
            ax.set_title(title, fontsize=14, fontweight='bold')
            ax.grid(True, alpha=0.3)
            ax.legend(fontsize=9)
            fig.savefig(output_path, format='svg', bbox_inches='tight', metadata={'Date': None})
            plt.close(fig)
        except Exception as e:
            plt.close('all')
            logger.error(f'Error plotting {output_filename}: {e}')
            raise PlotError(f'could not render {output_path}: {e}') from e
        logger.info(f'Saved plot to {output_path}')
        return output_path


def render_plot(series: List[PlotSeries], style: Optional[Dict[str, str]], output_path: str) -> str:
    style = style or {}
    visualizer = ConvergenceVisualizer(os.path.dirname(output_path) or '.')
    return visualizer.plot_distances(series, title=style.get('title', 'Distance to the limit point'), ylabel=style.get('ylabel', '||x_k - x*||'), output_filename=os.path.basename(output_path))
