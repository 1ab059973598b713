"""Limiting-frame pairings and the regulator independence matrix.

The frame is (e0, e1, e2, d_1..d_dk): a rank-3 nilpotent block polarized
by Q(e0,e2) = Q(e2,e0) = -1, Q(e1,e1) = 1, orthogonal to the d-classes,
whose Gram matrix defaults to the identity.  The monodromy logarithm
sends e2 -> e1 -> e0 -> 0 and kills every d-class.

Normal-function models are evaluated at small complex t, their imaginary
parts paired against the real frame vector eta and the d-classes, and the
limits extrapolated along a shrinking |t| sequence.  The (1 + dk) square
matrix of limits is lower triangular up to extrapolation error with -L in
the corner, so its determinant witnesses linear independence whenever the
limit invariant L is nonzero.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np


class ExtrapolationError(RuntimeError):
    """Extrapolation residuals failed to settle."""


DEFAULT_DK = 19
DEFAULT_ARG = 0.3


def default_t_sequence(arg: float = DEFAULT_ARG) -> tuple[complex, ...]:
    """|t| = 1e-2 .. 1e-12 in decade-squared steps, fixed argument."""
    phase = cmath.exp(1j * arg)
    return tuple(10.0 ** (-2 * k) * phase for k in range(1, 7))


@dataclass(frozen=True)
class Frame:
    dk: int = DEFAULT_DK
    q_d: np.ndarray | None = None
    gram: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        q = np.eye(self.dk) if self.q_d is None else np.asarray(self.q_d, dtype=float)
        if q.shape != (self.dk, self.dk) or not np.allclose(q, q.T):
            raise ValueError("q_d must be a symmetric dk x dk matrix")
        g = np.zeros((3 + self.dk, 3 + self.dk))
        g[0, 2] = g[2, 0] = -1.0
        g[1, 1] = 1.0
        g[3:, 3:] = q
        object.__setattr__(self, "q_d", q)
        object.__setattr__(self, "gram", g)

    @property
    def dim(self) -> int:
        return 3 + self.dk

    def basis(self, name: str, j: int = 0) -> np.ndarray:
        """Unit frame vector: name in e0|e1|e2, or 'd' with 1-based j."""
        v = np.zeros(self.dim, dtype=complex)
        if name == "d":
            if not 1 <= j <= self.dk:
                raise ValueError(f"d-index out of range: {j}")
            v[2 + j] = 1.0
        else:
            v[{"e0": 0, "e1": 1, "e2": 2}[name]] = 1.0
        return v


FrameVector = np.ndarray


def imag_log_coeff(t: complex) -> float:
    """Im of log(t)/(2 pi i): -log|t| / (2 pi)."""
    if t == 0:
        raise ValueError("t = 0")
    return -math.log(abs(t)) / (2.0 * math.pi)


def monodromy(v: FrameVector) -> FrameVector:
    """N: e2 -> e1 -> e0 -> 0, d_i -> 0."""
    out = np.zeros_like(v)
    out[0] = v[1]
    out[1] = v[2]
    return out


def conjugate_at(v: FrameVector, t: complex, frame: Frame) -> FrameVector:
    """Conjugate of a frame vector at parameter t.

    Coefficients are conjugated and the basis conjugation rules applied:
    e0 and d_i are real, e1 gains 2i Im(l) e0, e2 gains 2i Im(l) e1 and
    loses 2 Im(l)^2 e0, with Im(l) = -log|t| / (2 pi).
    """
    if v.shape != (frame.dim,):
        raise ValueError("frame vector dimension mismatch")
    iml = imag_log_coeff(t)
    w = np.conj(v)
    out = w.copy()
    out[0] = w[0] + 2j * iml * w[1] - 2.0 * iml * iml * w[2]
    out[1] = w[1] + 2j * iml * w[2]
    return out


def imaginary_part(v: FrameVector, t: complex, frame: Frame) -> FrameVector:
    """-(i/2) (v - conj(v)) with the frame conjugation at t."""
    return -0.5j * (v - conjugate_at(v, t, frame))


def pair(u: FrameVector, v: FrameVector, frame: Frame) -> complex:
    """Bilinear extension of the polarization Gram data."""
    if u.shape != (frame.dim,) or v.shape != (frame.dim,):
        raise ValueError("frame vector dimension mismatch")
    return complex(u @ frame.gram @ v)


@dataclass(frozen=True)
class PolyTail:
    """Holomorphic tail modeled as a low-degree polynomial in t."""

    coeffs: tuple[complex, ...] = (0j,)

    def __call__(self, t: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc


def _seeded_tails(rng: np.random.Generator | None, count: int, degree: int = 3):
    if rng is None:
        return [PolyTail() for _ in range(count)]
    out = []
    for _ in range(count):
        c = rng.uniform(-0.7, 0.7, degree + 1) + 1j * rng.uniform(-0.7, 0.7, degree + 1)
        out.append(PolyTail(tuple(c)))
    return out


@dataclass(frozen=True)
class EtaModel:
    """eta = e2 + i Im(l) e1 + g(t) e0 + sum h_i(t) d_i."""

    g: PolyTail
    h: tuple[PolyTail, ...]

    @classmethod
    def build(cls, frame: Frame, rng: np.random.Generator | None = None) -> "EtaModel":
        tails = _seeded_tails(rng, 1 + frame.dk)
        return cls(tails[0], tuple(tails[1:]))

    def at(self, t: complex, frame: Frame) -> FrameVector:
        if len(self.h) != frame.dk:
            raise ValueError("eta tails do not match frame")
        v = np.zeros(frame.dim, dtype=complex)
        v[2] = 1.0
        v[1] = 1j * imag_log_coeff(t)
        v[0] = self.g(t)
        for i, h in enumerate(self.h):
            v[3 + i] = h(t)
        return v

    def reality_residual(self, t: complex, frame: Frame) -> float:
        """|conj(eta) - eta|; zero for real tails, O(tails) otherwise."""
        v = self.at(t, frame)
        return float(np.linalg.norm(conjugate_at(v, t, frame) - v))


@dataclass(frozen=True)
class NormalFunctionModel:
    """Either the limit-type model R or a singular-type model R_i.

    kind "R":  R(t) = i L e0 + t (a0 e0 + a1 e1 + a2 e2 + sum b_j d_j).
    kind "Ri": R_i(t) = a0 e0 + a1 e1 + a2 e2 + i log(t) d_i
               + sum_{j != i} b_j d_j; pairings use Im(R_i / log t).
    """

    kind: Literal["R", "Ri"]
    L: float = 0.0
    i: int = 0
    a: tuple[PolyTail, PolyTail, PolyTail] = (PolyTail(), PolyTail(), PolyTail())
    b: tuple[PolyTail, ...] = ()

    @classmethod
    def limit_type(cls, L: float, frame: Frame, rng: np.random.Generator | None = None):
        tails = _seeded_tails(rng, 3 + frame.dk)
        return cls("R", L=L, a=tuple(tails[:3]), b=tuple(tails[3:]))

    @classmethod
    def singular_type(cls, i: int, frame: Frame, rng: np.random.Generator | None = None):
        if not 1 <= i <= frame.dk:
            raise ValueError(f"singularity index out of range: {i}")
        tails = _seeded_tails(rng, 3 + frame.dk)
        return cls("Ri", i=i, a=tuple(tails[:3]), b=tuple(tails[3:]))

    def at(self, t: complex, frame: Frame) -> FrameVector:
        if len(self.b) != frame.dk:
            raise ValueError("tails do not match frame")
        v = np.zeros(frame.dim, dtype=complex)
        v[0] = self.a[0](t)
        v[1] = self.a[1](t)
        v[2] = self.a[2](t)
        for j, bj in enumerate(self.b):
            v[3 + j] = bj(t)
        if self.kind == "R":
            v *= t
            v[0] += 1j * self.L
        else:
            v[3 + (self.i - 1)] = 1j * cmath.log(t)
        return v

    def pairing_vector(self, t: complex, frame: Frame) -> FrameVector:
        """Im R(t) for the limit type, Im(R_i(t)/log t) for the singular."""
        v = self.at(t, frame)
        if self.kind == "Ri":
            v = v / cmath.log(t)
        return imaginary_part(v, t, frame)


def _neville_to_zero(xs: Sequence[float], ys: Sequence[complex]):
    n = len(xs)
    tab = [list(ys)]
    for k in range(1, n):
        row = []
        for i in range(n - k):
            num = xs[i + k] * tab[k - 1][i] - xs[i] * tab[k - 1][i + 1]
            row.append(num / (xs[i + k] - xs[i]))
        tab.append(row)
    diag = [tab[k][0] for k in range(n)]
    residuals = [abs(diag[k] - diag[k - 1]) for k in range(1, n)]
    return diag[-1], residuals


@dataclass(frozen=True)
class PairingLimit:
    value: complex
    samples: tuple[complex, ...]
    residuals: tuple[float, ...]


def limit_of_pairing(
    nf: NormalFunctionModel,
    target,
    frame: Frame,
    t_sequence: Sequence[complex] | None = None,
) -> PairingLimit:
    """Extrapolated limit of the pairing along a shrinking t sequence.

    ``target`` is an :class:`EtaModel` or a 1-based d-class index.  The
    extrapolation variable is 1/log|t| for the singular models, whose
    error terms decay that slowly, and |t| itself for the limit-type
    model, whose error terms are O(t polylog t).  Residuals that grow
    instead of settling raise :class:`ExtrapolationError`.
    """
    ts = tuple(t_sequence) if t_sequence is not None else default_t_sequence()
    if len(ts) < 3:
        raise ValueError("need at least 3 sample points")
    mags = [abs(t) for t in ts]
    if any(m == 0 for m in mags) or any(m2 >= m1 for m1, m2 in zip(mags, mags[1:])):
        raise ValueError("t sequence must be nonzero with strictly decreasing |t|")

    def target_at(t: complex) -> np.ndarray:
        if isinstance(target, EtaModel):
            return target.at(t, frame)
        return frame.basis("d", int(target))

    vals = [pair(nf.pairing_vector(t, frame), target_at(t), frame) for t in ts]
    xs = [1.0 / math.log(abs(t)) for t in ts] if nf.kind == "Ri" else [abs(t) for t in ts]
    value, residuals = _neville_to_zero(xs, vals)
    scale = max(1.0, abs(value))
    if residuals and residuals[-1] > max(1e-6 * scale, min(residuals)) and residuals[-1] >= residuals[0]:
        raise ExtrapolationError(f"pairing limit not converging: residuals {residuals}")
    return PairingLimit(value, tuple(vals), tuple(residuals))


@dataclass(frozen=True)
class IndependenceResult:
    matrix: np.ndarray
    det: complex
    L: float
    verdict: Literal["independent", "fail"]

    def to_json_dict(self, t_sequence):
        return {
            "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in self.matrix],
            "det": [float(self.det.real), float(self.det.imag)],
            "L": float(self.L),
            "verdict": self.verdict,
            "t_sequence": [[float(t.real), float(t.imag)] for t in t_sequence],
        }


def independence_matrix(
    frame: Frame,
    L: float,
    seed: int | None = None,
    t_sequence: Sequence[complex] | None = None,
) -> IndependenceResult:
    """The (1 + dk) x (1 + dk) matrix of pairing limits and its determinant.

    Row 0 pairs the limit-type model against (eta, d_1..d_dk); row i pairs
    the i-th singular model.  With zero tails (seed None) the matrix is
    exactly block triangular with determinant -L; seeded tails perturb it
    by the extrapolation error only.  L must be nonzero for the argument
    to show anything.
    """
    if L == 0:
        raise ValueError("the independence argument needs L != 0")
    rng = np.random.default_rng(seed) if seed is not None else None
    eta = EtaModel.build(frame, rng)
    r_model = NormalFunctionModel.limit_type(L, frame, rng)
    singular = [NormalFunctionModel.singular_type(i, frame, rng) for i in range(1, frame.dk + 1)]
    ts = tuple(t_sequence) if t_sequence is not None else default_t_sequence()

    n = 1 + frame.dk
    mat = np.zeros((n, n), dtype=complex)
    targets = [eta] + list(range(1, frame.dk + 1))
    for col, tg in enumerate(targets):
        mat[0, col] = limit_of_pairing(r_model, tg, frame, ts).value
    for row, model in enumerate(singular, start=1):
        for col, tg in enumerate(targets):
            mat[row, col] = limit_of_pairing(model, tg, frame, ts).value
    det = complex(np.linalg.det(mat))
    verdict = "independent" if abs(det) > 0.1 * abs(L) else "fail"
    return IndependenceResult(mat, det, L, verdict)
