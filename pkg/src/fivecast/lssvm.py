"""Least squares support vector machine for regression.

Equality constraints replace the inequality pair of classic SVR, so
fitting reduces to one square linear system over the bias and the dual
coefficients:

    | 0   1'              |  | bias |     | 0 |
    | 1   K + I / gamma   |  | coef |  =  | y |

solved by the package's pivoted elimination.  A round or two of
iterative refinement keeps the residual near machine level even for
large gamma.  Prediction is the kernel expansion plus the bias.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DomainError, ShapeError
from .kernels import KernelSpec, gram, kernel_column

_REFINE_ROUNDS = 2


@dataclass(frozen=True)
class LssvmModel:
    kernel: KernelSpec
    inputs: np.ndarray
    coefs: np.ndarray  # one per training sample, sums to ~0
    bias: float
    gamma: float
    kkt_residual: float  # max-norm residual of the solved system


def fit(inputs, targets, kernel: KernelSpec, gamma: float = 100.0) -> LssvmModel:
    """Assemble and solve the saddle-point system."""
    x = np.asarray(inputs, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if x.ndim != 2:
        raise ShapeError(f"inputs must be 2-D, got ndim={x.ndim}")
    if y.ndim != 1 or y.shape[0] != x.shape[0]:
        raise ShapeError(f"targets must be 1-D with {x.shape[0]} entries")
    n = x.shape[0]
    if n == 0:
        raise DomainError("no training samples")
    if not gamma > 0.0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    a = np.zeros((n + 1, n + 1))
    a[0, 1:] = 1.0
    a[1:, 0] = 1.0
    a[1:, 1:] = gram(kernel, x) + np.eye(n) / gamma
    rhs = np.zeros(n + 1)
    rhs[1:] = y
    sol = linalg.solve(a, rhs)
    bound = 1e-8 * max(1.0, float(np.max(np.abs(y))))
    residual = float(np.max(np.abs(a @ sol - rhs)))
    for _ in range(_REFINE_ROUNDS):
        if residual <= bound:
            break
        sol = sol + linalg.solve(a, rhs - a @ sol)
        residual = float(np.max(np.abs(a @ sol - rhs)))
    return LssvmModel(
        kernel=kernel,
        inputs=x.copy(),
        coefs=sol[1:],
        bias=float(sol[0]),
        gamma=float(gamma),
        kkt_residual=residual,
    )


def predict(model: LssvmModel, x) -> float:
    col = kernel_column(model.kernel, model.inputs, x)
    return float(model.coefs @ col + model.bias)


def predict_batch(model: LssvmModel, inputs) -> np.ndarray:
    arr = np.asarray(inputs, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != model.inputs.shape[1]:
        raise ShapeError(f"inputs must be (n, {model.inputs.shape[1]}), got {arr.shape}")
    return np.array([predict(model, row) for row in arr])
