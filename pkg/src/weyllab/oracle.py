"""Floating-point Monte Carlo cross-checks of the symbolic operators.

The only module that touches floats.  Importance sampling draws from the
normalized Gaussian e^(-|x|^2/4) in orthonormalized coordinates, so the
integrand reduces to the polynomial itself and the variance stays finite for
the bounded degrees used here.

The coordinate gram matrix of the Cartan dual is positive definite and is
realized by a real Cholesky-style factor.  The trace-form gram of the full
dual in the split basis is indefinite; the Gaussian integral over the
compact form is nevertheless the Wick evaluation with covariance 2*gram (a
polynomial identity in the gram entries), and a complex factor M with
M M^T = gram realizes exactly those covariances.  Estimates then live in the
real part; the imaginary part has zero mean and is folded into the error
estimate via the real-part variance.

Randomness is a counter-based generator (Philox) with one substream per
sample block derived from (seed, stream, block); the reduction order is
fixed, so estimates are bit-reproducible for a fixed configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exact import MultiPoly, RingError
from .laplace import QuadraticSpace, g_star_space, h_star_space
from .liealg import LieAlgebraData, is_invariant, restrict
from .rootsys import disc_poly

_MAX_DEGREE = 10
_SINGULAR_TOL = 1e-9


@dataclass(frozen=True)
class McConfig:
    samples: int
    seed: int
    #: the real value assigned to f*hbar; negative for convergence
    fhbar: float
    block_size: int = 200_000

    def __post_init__(self):
        if self.samples < 10_000:
            raise ValueError("at least 10^4 samples are required")
        if not self.fhbar < 0:
            raise ValueError("f*hbar must be negative for the integral to converge")
        if self.block_size < 1:
            raise ValueError("block size must be positive")


def _compile(p: MultiPoly):
    return [(float(c), exp) for exp, c in sorted(p.items())]


def _evaluate(compiled, y: np.ndarray) -> np.ndarray:
    acc = np.zeros(y.shape[0], dtype=y.dtype)
    for coeff, exp in compiled:
        term = np.full(y.shape[0], coeff, dtype=y.dtype)
        for j, e in enumerate(exp):
            if e:
                term = term * y[:, j] ** e
        acc += term
    return acc


def _sqrt_factor(space: QuadraticSpace) -> np.ndarray:
    """A matrix M with M M^T = gram; real for positive definite grams,
    complex otherwise.  Coordinate samples are y = M z with z standard."""
    g = np.array([[float(x) for x in row] for row in space.gram])
    eigenvalues, vectors = np.linalg.eigh(g)
    if np.min(np.abs(eigenvalues)) < _SINGULAR_TOL:
        raise ValueError("the quadratic space is singular")
    if np.min(eigenvalues) > 0:
        return vectors @ np.diag(np.sqrt(eigenvalues))
    roots = np.sqrt(eigenvalues.astype(complex))
    return vectors.astype(complex) @ np.diag(roots)


def _mean_stderr(space: QuadraticSpace, p: MultiPoly, cfg: McConfig, stream: int, scale: float):
    """Mean and standard error of p over the normalized Gaussian, the sample
    point scaled by ``scale`` in orthonormal coordinates."""
    if p.ring != space.ring:
        raise RingError("polynomial does not live on this quadratic space")
    if p.total_degree() > _MAX_DEGREE:
        raise ValueError(f"Monte Carlo checks are bounded to degree {_MAX_DEGREE}")
    factor = _sqrt_factor(space).T * (math.sqrt(2.0) * scale)
    r = space.ring.nvars
    compiled = _compile(p)
    sums: list[float] = []
    sq_sums: list[float] = []
    remaining = cfg.samples
    block = 0
    while remaining > 0:
        n = min(cfg.block_size, remaining)
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence((cfg.seed, stream, block)))
        )
        z = rng.standard_normal((n, r))
        y = z @ factor
        values = np.real(_evaluate(compiled, y))
        sums.append(float(np.sum(values)))
        sq_sums.append(float(np.sum(values * values)))
        remaining -= n
        block += 1
    total = math.fsum(sums)
    total_sq = math.fsum(sq_sums)
    mean = total / cfg.samples
    variance = max(total_sq / cfg.samples - mean * mean, 0.0)
    return mean, math.sqrt(variance / cfg.samples)


def gauss_mc(space: QuadraticSpace, cfg: McConfig, p: MultiPoly) -> tuple[float, float]:
    """Monte Carlo estimate of the Gaussian evaluation operator at the real
    value cfg.fhbar assigned to f*hbar; returns (estimate, standard error).

    Matches ``laplace.e_value(space, p, fhbar)`` within a few standard errors.
    """
    scale = 1.0 / math.sqrt(-2.0 * cfg.fhbar)
    return _mean_stderr(space, p, cfg, stream=0, scale=scale)


def weyl_ratio(L: LieAlgebraData, cfg: McConfig, p: MultiPoly) -> tuple[float, float]:
    """Ratio of the Gaussian-weighted integral of an invariant polynomial over
    the full dual to the matching disc^2-weighted integral over the Cartan
    dual.  Independent of p; equals (4 pi)^phi+ / c for the reduction
    constant c (see laplace.c_constant).
    """
    if not is_invariant(L, p):
        raise ValueError("the reduction ratio is only claimed for invariant polynomials")
    rs = L.root_system
    gspace, hspace = g_star_space(L), h_star_space(rs)
    disc = disc_poly(rs)
    mean_g, err_g = _mean_stderr(gspace, p, cfg, stream=1, scale=1.0)
    mean_h, err_h = _mean_stderr(hspace, disc * disc * restrict(L, p), cfg, stream=2, scale=1.0)
    dim_g, dim_h = gspace.ring.nvars, hspace.ring.nvars
    num = (4.0 * math.pi) ** (dim_g / 2.0) * mean_g
    den = (4.0 * math.pi) ** (dim_h / 2.0) * mean_h
    err_num = (4.0 * math.pi) ** (dim_g / 2.0) * err_g
    err_den = (4.0 * math.pi) ** (dim_h / 2.0) * err_h
    ratio = num / den
    stderr = abs(ratio) * math.sqrt((err_num / num) ** 2 + (err_den / den) ** 2)
    return ratio, stderr
