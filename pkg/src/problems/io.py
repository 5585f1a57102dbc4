import json
import os
from typing import Any, Dict
import numpy as np
from numerics.errors import ConfigError
from numerics.utils import logger
from problems.pcp import PCPLoss, pcp_penalty
from problems.regression import LeastSquaresLoss
from penalties.l0 import L0Penalty
from problems.smooth import CompositeProblem
from problems.svm import SVMLoss, svm_penalty


def problem_to_dict(problem: CompositeProblem) -> Dict[str, Any]:
    return {'metadata': problem.metadata, 'dimension': problem.dimension, 'lipschitz_L': problem.lipschitz_L, 'penalty': problem.penalty.describe(), 'smooth': problem.smooth.to_dict(), 'ground_truth': {k: np.asarray(v).tolist() for k, v in problem.ground_truth.items()}}


def save_problem(problem: CompositeProblem, output_path: str):
    if os.path.dirname(output_path):
        os.makedirs(os.path.dirname(output_path), exist_ok=True)
    with open(output_path, 'w', encoding='utf-8') as f:
        json.dump(problem_to_dict(problem), f, indent=2)
    logger.info(f'Saved problem instance to {output_path}')


def problem_from_dict(data: Dict[str, Any]) -> CompositeProblem:
    meta = data['metadata']
    smooth = data['smooth']
    truth = {k: np.asarray(v) for k, v in data.get('ground_truth', {}).items()}
    kind = meta.get('kind')
    if kind == 'sparse_regression':
        loss = LeastSquaresLoss(smooth['A'], smooth['y'])
        penalty = L0Penalty(loss.dimension, meta['mu'])
    elif kind == 'pcp':
        loss = PCPLoss(smooth['y'])
        penalty = pcp_penalty(loss.shape, meta['mu1'], meta['mu2'])
    elif kind == 'sparse_svm':
        loss = SVMLoss(smooth['features'], smooth['labels'], smooth['loss_kind'])
        penalty = svm_penalty(loss.dimension - 1, meta['mu'])
    else:
        raise ConfigError(f'unknown problem kind {kind!r}')
    return CompositeProblem(smooth=loss, penalty=penalty, dimension=loss.dimension, metadata=meta, ground_truth=truth)


def load_problem(input_path: str) -> CompositeProblem:
    with open(input_path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    logger.info(f'Loaded problem instance from {input_path}')
    return problem_from_dict(data)
