"""Width-N Gaussian MLP: parameters, forward pass, prototypes, projection.

The network is f(x) = sum_j a_j * exp(-(w_j*x + b_j)^2) + c. Each hidden
unit peaks at the prototype location -b_j/w_j, which is what the
reconstruction metrics operate on. Hidden weights are kept away from zero
(|w_j| >= W_FLOOR) so the prototype map stays well defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

W_FLOOR = 0.1


@dataclass
class Params:
    """Parameters of a width-N Gaussian MLP, all float64."""

    a: np.ndarray
    w: np.ndarray
    b: np.ndarray
    c: float

    @property
    def width(self) -> int:
        return self.a.shape[0]

    def copy(self) -> "Params":
        return Params(self.a.copy(), self.w.copy(), self.b.copy(), float(self.c))

    def validate(self) -> None:
        n = self.a.shape[0]
        if n < 1:
            raise ValueError("width must be >= 1")
        if not (self.w.shape[0] == n and self.b.shape[0] == n):
            raise ValueError("a, w, b must have identical length")
        if not (
            np.all(np.isfinite(self.a))
            and np.all(np.isfinite(self.w))
            and np.all(np.isfinite(self.b))
            and np.isfinite(self.c)
        ):
            raise ValueError("parameters must be finite")


@dataclass
class Dataset:
    """N scalar pairs (x_i, y_i) in [0,1]^2 with strictly increasing x."""

    x: np.ndarray
    y: np.ndarray

    @property
    def size(self) -> int:
        return self.x.shape[0]

    def validate(self, min_gap: float | None = None) -> None:
        if self.x.shape != self.y.shape:
            raise ValueError("x and y must have the same length")
        if np.any(self.x < 0.0) or np.any(self.x > 1.0):
            raise ValueError("x must lie in [0,1]")
        if np.any(self.y < 0.0) or np.any(self.y > 1.0):
            raise ValueError("y must lie in [0,1]")
        gaps = np.diff(self.x)
        if np.any(gaps <= 0.0):
            raise ValueError("x must be strictly increasing")
        if min_gap is not None and np.any(gaps < min_gap - 1e-12):
            raise ValueError(f"consecutive x gaps must be >= {min_gap}")


@dataclass
class Reconstruction:
    """Prototype inputs and their model outputs, sorted by ascending x_hat."""

    x_hat: np.ndarray
    y_hat: np.ndarray

    @property
    def size(self) -> int:
        return self.x_hat.shape[0]


def init_params(n: int, rng: np.random.Generator) -> Params:
    """Draw fresh parameters for a width-n model.

    a_j, b_j, c ~ U(-0.1, 0.1). w_j has a fair-coin sign and magnitude
    ~ U[0.1, 1), i.e. uniform over (-1, -0.1] u [0.1, 1) with each half
    equally likely. Draw order (a, w-sign, w-magnitude, b, c) is fixed so
    a given generator state always yields the same Params.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a = rng.uniform(-0.1, 0.1, n)
    sign = np.where(rng.integers(0, 2, n) == 1, 1.0, -1.0)
    mag = rng.uniform(W_FLOOR, 1.0, n)
    w = sign * mag
    b = rng.uniform(-0.1, 0.1, n)
    c = float(rng.uniform(-0.1, 0.1))
    return Params(a=a, w=w, b=b, c=c)


def forward(p: Params, x) -> np.ndarray | float:
    """Evaluate the model at scalar or vector x."""
    xv = np.asarray(x, dtype=float)
    z = np.multiply.outer(xv, p.w) + p.b
    out = np.exp(-z * z) @ p.a + p.c
    if np.isscalar(x) or xv.ndim == 0:
        return float(out)
    return out


def prototypes(p: Params) -> np.ndarray:
    """Prototype locations -b_j/w_j in unit index order.

    Requires the projection invariant |w_j| >= W_FLOOR; otherwise the
    division is numerically meaningless and we refuse.
    """
    if np.any(np.abs(p.w) < W_FLOOR - 1e-12):
        raise ValueError(f"|w_j| >= {W_FLOOR} required; call project_weights first")
    return -p.b / p.w


def reconstruct(p: Params) -> Reconstruction:
    """Pair every prototype with the model output there, sorted by location.

    Ties in prototype location keep the lower unit index first (stable sort).
    """
    xh = prototypes(p)
    order = np.argsort(xh, kind="stable")
    xh = xh[order]
    yh = forward(p, xh)
    return Reconstruction(x_hat=xh, y_hat=np.asarray(yh, dtype=float))


def project_weights(p: Params) -> Params:
    """Clamp each hidden weight to |w_j| >= W_FLOOR, preserving sign.

    An exact zero is pushed to +W_FLOOR (deterministic tie-break). Idempotent.
    """
    w = p.w.copy()
    small = np.abs(w) < W_FLOOR
    sign = np.where(w[small] >= 0.0, 1.0, -1.0)
    w[small] = sign * W_FLOOR
    return Params(a=p.a.copy(), w=w, b=p.b.copy(), c=float(p.c))
