from .base import ManifoldInfo, Penalty, ProxResult
from .l0 import L0Penalty, prox_l0, l0_value, manifold_info_l0, support
from .rank import RankPenalty, TruncatedSVD, prox_rank, rank_value, manifold_info_rank, hard_threshold_singular_values
from .product import ProductPenalty, product_penalty, check_partition
from .zero import ZeroPenalty
__all__ = ['ManifoldInfo', 'Penalty', 'ProxResult', 'L0Penalty', 'prox_l0', 'l0_value', 'manifold_info_l0', 'support', 'RankPenalty', 'TruncatedSVD', 'prox_rank', 'rank_value', 'manifold_info_rank', 'hard_threshold_singular_values', 'ProductPenalty', 'product_penalty', 'check_partition', 'ZeroPenalty']
