"""Linear maximal monotone operators with exact resolvents.

Three kinds are supported:

``skew``
    ``T(z) = (1/a) [[0, 1], [-1, 0]] z`` on R^2. Monotone with zero gap,
    the worst case for the upper contraction regime.
``scalar``
    ``T(z) = z / a`` on R. Strongly monotone, the worst case for the lower
    regime.
``dense``
    ``T(z) = A z`` for a nonsingular matrix with ``A + A^T`` positive
    semidefinite.

Every operator has the unique zero ``z* = 0``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

__all__ = [
    "Kind",
    "InverseModulus",
    "OperatorSpec",
    "skew",
    "scalar",
    "dense",
    "apply",
    "resolvent",
    "monotonicity_gap",
    "from_config",
    "to_config",
    "load_config",
]

_PSD_TOL = 1e-12
_SKEW = np.array([[0.0, 1.0], [-1.0, 0.0]])


class Kind(str, Enum):
    DENSE = "dense"
    SKEW = "skew"
    SCALAR = "scalar"


@dataclass(frozen=True)
class InverseModulus:
    """Lipschitz modulus ``a`` of ``T^-1`` at the origin, valid for ``||w|| <= tau``."""

    a: float
    tau: float = math.inf

    def __post_init__(self):
        if not self.a >= 0:
            raise ValueError(f"inverse modulus a must be >= 0, got {self.a}")
        if not self.tau > 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")


@dataclass(frozen=True, eq=False)
class OperatorSpec:
    kind: Kind
    matrix: np.ndarray = field(repr=False)
    modulus: InverseModulus

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def a(self) -> float:
        return self.modulus.a

    @property
    def zero(self) -> np.ndarray:
        return np.zeros(self.dimension)


def skew(a: float, tau: float = math.inf) -> OperatorSpec:
    if not a > 0:
        raise ValueError(f"skew rotation needs a > 0, got {a}")
    return OperatorSpec(Kind.SKEW, _SKEW / a, InverseModulus(float(a), tau))


def scalar(a: float, tau: float = math.inf) -> OperatorSpec:
    if not a > 0:
        raise ValueError(f"scalar operator needs a > 0, got {a}")
    return OperatorSpec(Kind.SCALAR, np.array([[1.0 / a]]), InverseModulus(float(a), tau))


def dense(matrix, tau: float = math.inf) -> OperatorSpec:
    """Wrap a square matrix as a monotone operator.

    The inverse modulus is ``||A^-1||_2``, the global Lipschitz constant of
    ``T^-1``. Singular or non-monotone matrices are rejected.
    """
    A = np.array(matrix, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValueError(f"matrix must be square and nonempty, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has nonfinite entries")
    sym_min = np.linalg.eigvalsh(A + A.T).min()
    if sym_min < -_PSD_TOL * max(1.0, np.abs(A).max()):
        raise ValueError(f"A + A^T is not positive semidefinite (min eigenvalue {sym_min:.3e})")
    sigma = np.linalg.svd(A, compute_uv=False)
    if sigma[-1] <= sigma[0] * 1e-14 or sigma[-1] == 0.0:
        raise ValueError("matrix is singular; the zero of T would not be unique")
    A.setflags(write=False)
    return OperatorSpec(Kind.DENSE, A, InverseModulus(float(1.0 / sigma[-1]), tau))


def _as_vector(spec: OperatorSpec, z) -> np.ndarray:
    v = np.atleast_1d(np.asarray(z, dtype=float))
    if v.shape != (spec.dimension,):
        raise ValueError(f"expected a vector of dimension {spec.dimension}, got shape {v.shape}")
    return v


def apply(spec: OperatorSpec, z) -> np.ndarray:
    return spec.matrix @ _as_vector(spec, z)


def resolvent(spec: OperatorSpec, c: float, z) -> np.ndarray:
    """Return ``(I + cT)^-1 z``.

    Closed forms are used for the skew and scalar operators; dense operators
    go through an LU solve of ``(I + cA) x = z``.
    """
    if not c > 0:
        raise ValueError(f"proximal parameter c must be > 0, got {c}")
    v = _as_vector(spec, z)
    a = spec.a
    if spec.kind is Kind.SCALAR:
        t = a / c
        return t * v / (t + 1.0)
    if spec.kind is Kind.SKEW:
        M = np.array([[a, -c], [c, a]])
        return (a / (a * a + c * c)) * (M @ v)
    K = np.eye(spec.dimension) + c * spec.matrix
    try:
        x = np.linalg.solve(K, v)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"I + cA is singular for c={c}") from exc
    if not np.all(np.isfinite(x)):
        raise ValueError(f"I + cA is numerically singular for c={c}")
    return x


def monotonicity_gap(spec: OperatorSpec, x, y) -> float:
    """``<x - y, T(x) - T(y)>``; nonnegative for every valid spec."""
    d = _as_vector(spec, x) - _as_vector(spec, y)
    return float(d @ (spec.matrix @ d))


def from_config(doc: dict[str, Any]) -> OperatorSpec:
    """Build a spec from ``{"kind": "skew"|"scalar", "a": ...}`` or ``{"kind": "dense", "matrix": [[...]]}``.

    An optional ``"tau"`` key sets a finite regularity radius.
    """
    try:
        kind = Kind(doc["kind"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"unknown or missing operator kind in {doc!r}") from exc
    tau = float(doc.get("tau", math.inf))
    if kind is Kind.DENSE:
        if "matrix" not in doc:
            raise ValueError("dense operator config needs a 'matrix' entry")
        return dense(doc["matrix"], tau=tau)
    if "a" not in doc:
        raise ValueError(f"{kind.value} operator config needs an 'a' entry")
    builder = skew if kind is Kind.SKEW else scalar
    return builder(float(doc["a"]), tau=tau)


def to_config(spec: OperatorSpec) -> dict[str, Any]:
    doc: dict[str, Any] = {"kind": spec.kind.value}
    if spec.kind is Kind.DENSE:
        doc["matrix"] = spec.matrix.tolist()
    else:
        doc["a"] = spec.a
    if math.isfinite(spec.modulus.tau):
        doc["tau"] = spec.modulus.tau
    return doc


def load_config(path: str | Path) -> OperatorSpec:
    with open(path, encoding="utf-8") as fh:
        return from_config(json.load(fh))
