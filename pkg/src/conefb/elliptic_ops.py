"""Uniformly elliptic operators on symmetric matrices.

Pucci extremal operators, linear operators tr(A M), Bellman envelopes
(max of traces), and the rescaling F_r(M) = F(rM)/r.  Eigenvalues of the
2x2 and 3x3 symmetric arguments are computed in-house: closed form in 2d,
cyclic Jacobi sweeps in 3d.
"""

from __future__ import annotations

import math

import numpy as np

JACOBI_TOL = 1e-13

VARIANTS = ("pucci_plus", "pucci_minus", "linear", "bellman")


def _check_symmetric(M):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("expected a square matrix")
    tol = 1e-12 * max(1.0, float(np.max(np.abs(M))))
    if np.max(np.abs(M - M.T)) > tol:
        raise ValueError("matrix is not symmetric within 1e-12")
    return M


def _eig2(M):
    a, b, d = M[0, 0], M[0, 1], M[1, 1]
    mid = 0.5 * (a + d)
    rad = math.hypot(0.5 * (a - d), b)
    w = np.array([mid - rad, mid + rad])
    if rad < 1e-300:
        return w, np.eye(2)
    v0 = np.array([b, w[0] - a])
    alt = np.array([w[0] - d, b])
    if np.dot(alt, alt) > np.dot(v0, v0):
        v0 = alt
    n0 = np.linalg.norm(v0)
    v0 = np.array([1.0, 0.0]) if n0 < 1e-300 else v0 / n0
    v1 = np.array([-v0[1], v0[0]])
    return w, np.column_stack([v0, v1])


def _eig3_jacobi(M):
    A = M.copy()
    V = np.eye(3)
    scale = max(np.linalg.norm(A), 1e-300)
    for _ in range(64):
        off = math.sqrt(A[0, 1] ** 2 + A[0, 2] ** 2 + A[1, 2] ** 2)
        if off <= JACOBI_TOL * scale:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            apq = A[p, q]
            if abs(apq) <= 0.25 * JACOBI_TOL * scale:
                continue
            theta = 0.5 * (A[q, q] - A[p, p]) / apq
            t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            R = np.eye(3)
            R[p, p] = R[q, q] = c
            R[p, q] = s
            R[q, p] = -s
            A = R.T @ A @ R
            V = V @ R
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = V[:, order]
    for j in range(3):
        k = int(np.argmax(np.abs(V[:, j])))
        if V[k, j] < 0:
            V[:, j] = -V[:, j]
    return w, V


def eig_sym(M):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a 2x2/3x3 symmetric M."""
    M = _check_symmetric(M)
    n = M.shape[0]
    if n == 2:
        return _eig2(M)
    if n == 3:
        return _eig3_jacobi(M)
    raise ValueError("only 2x2 and 3x3 matrices are supported")


def pucci_plus(M, lam, Lam):
    """Maximal Pucci operator: Lam * sum(e_i > 0) + lam * sum(e_i < 0)."""
    w, _ = eig_sym(M)
    return float(Lam * np.sum(w[w > 0]) + lam * np.sum(w[w < 0]))


def pucci_minus(M, lam, Lam):
    """Minimal Pucci operator: lam * sum(e_i > 0) + Lam * sum(e_i < 0)."""
    w, _ = eig_sym(M)
    return float(lam * np.sum(w[w > 0]) + Lam * np.sum(w[w < 0]))


class OperatorSpec:
    """A uniformly elliptic operator F with constants (lam, Lam).

    variant is one of 'pucci_plus', 'pucci_minus', 'linear' (with matrix A),
    'bellman' (max of traces over a list of matrices).  F(0) = 0 is asserted
    at construction; for linear/bellman variants every coefficient matrix
    must have spectrum inside [lam, Lam].
    """

    def __init__(self, lam, Lam, variant, matrix=None, matrices=None):
        if lam <= 0 or Lam < lam:
            raise ValueError("need 0 < lam <= Lam")
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        self.lam = float(lam)
        self.Lam = float(Lam)
        self.variant = variant
        self.matrix = None
        self.matrices = None
        if variant == "linear":
            if matrix is None:
                raise ValueError("linear variant requires a matrix")
            self.matrix = _check_symmetric(matrix)
            self._check_spectrum(self.matrix)
        elif variant == "bellman":
            if not matrices:
                raise ValueError("bellman variant requires a list of matrices")
            self.matrices = [_check_symmetric(A) for A in matrices]
            for A in self.matrices:
                self._check_spectrum(A)
        n = 2 if self.dim_hint() is None else self.dim_hint()
        if abs(self.evaluate(np.zeros((n, n)))) > 1e-14:
            raise ValueError("operator does not satisfy F(0) = 0")

    def _check_spectrum(self, A):
        w, _ = eig_sym(A)
        if w[0] < self.lam - 1e-10 or w[-1] > self.Lam + 1e-10:
            raise ValueError("coefficient spectrum escapes [lam, Lam]")

    def dim_hint(self):
        if self.matrix is not None:
            return self.matrix.shape[0]
        if self.matrices:
            return self.matrices[0].shape[0]
        return None

    @classmethod
    def pucci_max(cls, lam, Lam):
        return cls(lam, Lam, "pucci_plus")

    @classmethod
    def pucci_min(cls, lam, Lam):
        return cls(lam, Lam, "pucci_minus")

    @classmethod
    def laplace(cls, dim=2):
        return cls(1.0, 1.0, "linear", matrix=np.eye(dim))

    @classmethod
    def linear(cls, A, lam=None, Lam=None):
        w, _ = eig_sym(np.asarray(A, dtype=float))
        lam = float(w[0]) if lam is None else lam
        Lam = float(w[-1]) if Lam is None else Lam
        return cls(lam, Lam, "linear", matrix=A)

    def evaluate(self, M):
        return evaluate(self, M)

    def derivative(self, M):
        """dF/dM at M (a policy/linearization matrix with spectrum in [lam, Lam])."""
        M = _check_symmetric(M)
        if self.variant == "linear":
            return self.matrix
        if self.variant == "bellman":
            traces = [float(np.trace(A @ M)) for A in self.matrices]
            return self.matrices[int(np.argmax(traces))]
        w, V = eig_sym(M)
        if self.variant == "pucci_plus":
            c = np.where(w >= 0, self.Lam, self.lam)
        else:
            c = np.where(w >= 0, self.lam, self.Lam)
        return (V * c) @ V.T

    def __repr__(self):
        return f"OperatorSpec({self.variant}, lam={self.lam}, Lam={self.Lam})"


def evaluate(spec, M, debug=False):
    """Value of the operator at symmetric M.

    With debug=True the Pucci sandwich with constants (lam/n, Lam) is
    asserted around the returned value.
    """
    M = _check_symmetric(M)
    if spec.variant == "pucci_plus":
        val = pucci_plus(M, spec.lam, spec.Lam)
    elif spec.variant == "pucci_minus":
        val = pucci_minus(M, spec.lam, spec.Lam)
    elif spec.variant == "linear":
        val = float(np.trace(spec.matrix @ M))
    else:
        val = max(float(np.trace(A @ M)) for A in spec.matrices)
    if debug:
        n = M.shape[0]
        lo = pucci_minus(M, spec.lam / n, spec.Lam)
        hi = pucci_plus(M, spec.lam / n, spec.Lam)
        slack = 1e-10 * (1.0 + abs(val))
        assert lo - slack <= val <= hi + slack, "Pucci sandwich violated"
    return val


class RescaledOperator:
    """Evaluator for F_r(M) = F(rM)/r; same ellipticity class as F."""

    def __init__(self, spec, r):
        if r <= 0:
            raise ValueError("rescaling factor must be positive")
        self.base = spec
        self.r = float(r)
        self.lam = spec.lam
        self.Lam = spec.Lam
        self.variant = spec.variant

    def evaluate(self, M):
        return evaluate(self.base, self.r * np.asarray(M, dtype=float)) / self.r

    def derivative(self, M):
        return self.base.derivative(self.r * np.asarray(M, dtype=float))


def rescale(spec, r):
    return RescaledOperator(spec, r)


def random_symmetric(rng, n, scale=1.0):
    A = rng.standard_normal((n, n))
    return scale * 0.5 * (A + A.T)


def random_psd(rng, n, scale=1.0):
    B = rng.standard_normal((n, n))
    return scale * (B.T @ B) / n


def ellipticity_check(spec, n=2, samples=10_000, seed=0):
    """Sampled certification of membership in the uniformly elliptic class.

    Checks, on `samples` random pairs (M, N >= 0):
      - monotonicity F(M+N) >= F(M),
      - lam*||N|| <= F(M+N) - F(M) <= n*Lam*||N||  (||.|| the operator norm;
        the trace bound carries the dimensional factor n),
      - the Pucci sandwich M^-_{lam/n,Lam}(M) <= F(M) <= M^+_{lam/n,Lam}(M).

    Returns the number of violations (0 when the operator certifies).
    """
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(samples):
        M = random_symmetric(rng, n)
        N = random_psd(rng, n)
        opnorm = float(np.max(np.abs(eig_sym(N)[0])))
        d = evaluate(spec, M + N) - evaluate(spec, M)
        slack = 1e-10 * (1.0 + opnorm)
        if d < -slack:
            bad += 1
            continue
        if d < spec.lam * opnorm - slack or d > n * spec.Lam * opnorm + slack:
            bad += 1
            continue
        v = evaluate(spec, M)
        if not (pucci_minus(M, spec.lam / n, spec.Lam) - 1e-10 <= v
                <= pucci_plus(M, spec.lam / n, spec.Lam) + 1e-10):
            bad += 1
    return bad
