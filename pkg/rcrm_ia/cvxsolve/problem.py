"""Nuclear-norm minimization problems with Hermitian lower-bound constraints.

The free complex entries of all matrix variables are stacked into one real
vector ``theta``: the real parts of every free entry (variables in order,
entries row-major within each mask) followed by the imaginary parts. Every
objective term and constraint is an affine map of ``theta``, compiled once to
a real matrix by probing the defining callable on basis vectors.
"""

import json
import logging
import os
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from rcrm_ia.errors import ContractViolation
from rcrm_ia.numerics import eigh_hermitian_part, nuclear_norm

logger = logging.getLogger(__name__)

Shape = Tuple[int, int]


def to_real(X: np.ndarray) -> np.ndarray:
    """Real parts of ``X`` (row-major) followed by its imaginary parts."""
    flat = np.asarray(X, dtype=np.complex128).ravel()
    return np.concatenate([flat.real, flat.imag])


def from_real(y: np.ndarray, shape: Shape) -> np.ndarray:
    n = shape[0] * shape[1]
    return (y[:n] + 1j * y[n:]).reshape(shape)


@dataclass(frozen=True, eq=False)
class AffineMap:
    """X(theta) = from_real(G @ theta + offset, shape)."""

    G: np.ndarray
    offset: np.ndarray
    shape: Shape

    def apply(self, theta: np.ndarray) -> np.ndarray:
        return from_real(self.G @ theta + self.offset, self.shape)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.G)


@dataclass(frozen=True, eq=False)
class VariableLayout:
    """Shapes of the matrix variables and the masks of their free entries.

    Entries outside a mask are fixed to zero.
    """

    shapes: Tuple[Shape, ...]
    masks: Tuple[np.ndarray, ...]

    @classmethod
    def dense(cls, shapes: Sequence[Shape]) -> "VariableLayout":
        shapes = tuple(tuple(s) for s in shapes)
        return cls(shapes=shapes, masks=tuple(np.ones(s, dtype=bool) for s in shapes))

    def __post_init__(self):
        if len(self.shapes) != len(self.masks):
            raise ContractViolation("one mask per variable is required")
        for s, m in zip(self.shapes, self.masks):
            if m.shape != tuple(s):
                raise ContractViolation(f"mask of shape {m.shape} for a variable of shape {s}")

    @property
    def n_complex(self) -> int:
        return int(sum(int(m.sum()) for m in self.masks))

    @property
    def n_real(self) -> int:
        return 2 * self.n_complex

    def unpack(self, theta: np.ndarray) -> List[np.ndarray]:
        n = self.n_complex
        z = theta[:n] + 1j * theta[n:]
        out, pos = [], 0
        for s, m in zip(self.shapes, self.masks):
            X = np.zeros(s, dtype=np.complex128)
            cnt = int(m.sum())
            X[m] = z[pos:pos + cnt]
            pos += cnt
            out.append(X)
        return out

    def pack(self, matrices: Sequence[np.ndarray]) -> np.ndarray:
        if len(matrices) != len(self.shapes):
            raise ContractViolation(f"expected {len(self.shapes)} matrices, got {len(matrices)}")
        z = []
        for X, s, m in zip(matrices, self.shapes, self.masks):
            X = np.asarray(X, dtype=np.complex128)
            if X.shape != tuple(s):
                raise ContractViolation(f"matrix of shape {X.shape} for a variable of shape {s}")
            z.append(X[m])
        z = np.concatenate(z) if z else np.zeros(0, dtype=np.complex128)
        return np.concatenate([z.real, z.imag])


def compile_affine(fn: Callable[[List[np.ndarray]], Sequence[np.ndarray]],
                   layout: VariableLayout) -> List[AffineMap]:
    """Compile a real-linear-plus-constant callable into affine maps.

    ``fn`` takes the unpacked variables and returns a list of complex
    matrices; conjugation of variables is allowed. One map is returned per
    output matrix.
    """
    n = layout.n_real
    base = [np.asarray(Y, dtype=np.complex128) for Y in fn(layout.unpack(np.zeros(n)))]
    offsets = [to_real(Y) for Y in base]
    columns = [np.zeros((off.size, n)) for off in offsets]
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        for i, Y in enumerate(fn(layout.unpack(e))):
            columns[i][:, j] = to_real(Y) - offsets[i]
    return [AffineMap(G=G, offset=off, shape=Y.shape)
            for G, off, Y in zip(columns, offsets, base)]


@dataclass(frozen=True, eq=False)
class NuclearLmiProblem:
    """minimize sum_k ||J_k(theta)||_*  s.t.  S_k(theta) = S_k^H, lambda_min(S_k) >= eps.

    ``equality_constraints`` lists the (variable, row, column) entries fixed
    to zero by the masks.
    """

    layout: VariableLayout
    nuclear_terms: Tuple[AffineMap, ...]
    lmi_terms: Tuple[AffineMap, ...]
    eps: float
    hermitian_constraints: bool = True
    name: str = "problem"

    def __post_init__(self):
        if not self.eps > 0:
            raise ContractViolation(f"eps must be positive, got {self.eps}")
        n = self.layout.n_real
        for term in self.nuclear_terms + self.lmi_terms:
            if term.G.shape[1] != n or term.G.shape[0] != 2 * term.shape[0] * term.shape[1]:
                raise ContractViolation(f"affine map {term.G.shape} inconsistent with {n} unknowns")
        for term in self.lmi_terms:
            if term.shape[0] != term.shape[1]:
                raise ContractViolation(f"LMI term must be square, got {term.shape}")

    @property
    def free_vars(self) -> Tuple[Shape, ...]:
        return self.layout.shapes

    @property
    def free_masks(self) -> Tuple[np.ndarray, ...]:
        return self.layout.masks

    @property
    def equality_constraints(self) -> List[Tuple[int, int, int]]:
        return [(i, int(r), int(c)) for i, m in enumerate(self.layout.masks)
                for r, c in zip(*np.nonzero(~m))]

    def unpack(self, theta: np.ndarray) -> List[np.ndarray]:
        return self.layout.unpack(theta)

    def pack(self, matrices: Sequence[np.ndarray]) -> np.ndarray:
        return self.layout.pack(matrices)

    def objective(self, theta: np.ndarray) -> float:
        return float(sum(nuclear_norm(t.apply(theta)) for t in self.nuclear_terms))

    def lmi_violation(self, theta: np.ndarray) -> float:
        """Largest of eps - lambda_min(herm S_k) and ||S_k - S_k^H||_F, floored at 0."""
        worst = 0.0
        for t in self.lmi_terms:
            S = t.apply(theta)
            worst = max(worst, self.eps - float(eigh_hermitian_part(S)[0][0]),
                        float(np.linalg.norm(S - S.conj().T)))
        return worst

    def to_json(self) -> dict:
        """JSON-ready description for cross-checking with an external modeling tool."""
        def term(t: AffineMap) -> dict:
            return {"shape": list(t.shape), "G": t.G.ravel().tolist(),
                    "G_shape": list(t.G.shape), "offset": t.offset.tolist()}
        return {
            "name": self.name,
            "free_vars": [list(s) for s in self.layout.shapes],
            "free_masks": [m.astype(int).tolist() for m in self.layout.masks],
            "nuclear_terms": [term(t) for t in self.nuclear_terms],
            "lmi_terms": [term(t) for t in self.lmi_terms],
            "eps": self.eps,
            "hermitian_constraints": self.hermitian_constraints,
        }


def dump_problem(path: str, problem: NuclearLmiProblem) -> None:
    """Write ``problem.to_json()`` to ``path``."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(problem.to_json(), f)
    except OSError as exc:
        logger.error("Error saving problem to %s: %s", path, exc)
        raise OSError(f"cannot write problem dump {path}: {exc}") from exc
    logger.debug("Saved problem %s to %s", problem.name, path)


def stacked_operator(problem: NuclearLmiProblem) -> Tuple[np.ndarray, np.ndarray, List[slice]]:
    """All maps stacked: (A, b, slices), nuclear terms first then LMI terms."""
    terms = problem.nuclear_terms + problem.lmi_terms
    slices, pos = [], 0
    for t in terms:
        slices.append(slice(pos, pos + t.G.shape[0]))
        pos += t.G.shape[0]
    n = problem.layout.n_real
    if not terms:
        return np.zeros((0, n)), np.zeros(0), slices
    A = np.vstack([t.G for t in terms])
    b = np.concatenate([t.offset for t in terms])
    return A, b, slices
