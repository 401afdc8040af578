"""Numerical solution of the runtime-balancing systems.

Every exponent is handled in log2 form: a running time ``gamma**n`` is
represented by ``c = log2(gamma)``.  The hypercube system in unknowns
``(c, a_1 .. a_k)`` with ``a_{k+1} = 1/2`` is

    c = H(a_1)
    2c(a_{i+1} - 2a_i + a_{i-1}) = a_i H(a_{i-1}/a_i)      i = 2..k
    2c(2a_k + 1) = 2 + H(2a_k)

and the restricted-density variant replaces the last row by the
``sqrt(mu^n C(n/2, a_k n)) gamma_2^{(1/2 - a_k) n}`` balance while the
middle rows keep the unrestricted ``c_2``.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import optimize

from .cost import entropy, entropy_derivative

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-9
STEP_TOL = 1e-12
_RHO_CLAMP = 1.0 - 1e-15
DEFAULT_K = 6


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residuals: Sequence[float] = ()):
        super().__init__(message)
        self.residuals = tuple(residuals)


@dataclass(frozen=True)
class ExponentSolution:
    k: int
    gamma: float
    alpha: tuple[float, ...]
    residuals: tuple[float, ...]

    @property
    def c(self) -> float:
        return math.log2(self.gamma)

    @property
    def max_residual(self) -> float:
        return max(abs(r) for r in self.residuals)


@dataclass(frozen=True)
class CurvePoint:
    mu: float
    gamma_mu: float


def _ratio_entropy(lo: float, hi: float) -> tuple[float, float]:
    rho = min(lo / hi, _RHO_CLAMP)
    return entropy(rho), rho


def _levels(alpha: Sequence[float]) -> list[float]:
    return list(alpha) + [0.5]


def hypercube_residuals(c: float, alpha: Sequence[float]) -> np.ndarray:
    a = _levels(alpha)
    k = len(alpha)
    r = [c - entropy(a[0])]
    for j in range(1, k):
        h, _ = _ratio_entropy(a[j - 1], a[j])
        r.append(2 * c * (a[j + 1] - 2 * a[j] + a[j - 1]) - a[j] * h)
    r.append(2 * c * (2 * a[k - 1] + 1) - 2 - entropy(2 * a[k - 1]))
    return np.array(r)


def restricted_residuals(c_mu: float, alpha: Sequence[float], mu: float, c2: float) -> np.ndarray:
    a = _levels(alpha)
    k = len(alpha)
    r = [c_mu - entropy(a[0])]
    for j in range(1, k):
        h, _ = _ratio_entropy(a[j - 1], a[j])
        r.append(2 * c2 * (a[j + 1] - 2 * a[j] + a[j - 1]) - a[j] * h)
    ak = a[k - 1]
    r.append(2 * c_mu - math.log2(mu) - 0.5 * entropy(2 * ak) - c2 * (1 - 2 * ak))
    return np.array(r)


def _jacobian(c: float, alpha: Sequence[float], mu: float | None, c2: float | None) -> np.ndarray:
    k = len(alpha)
    a = _levels(alpha)
    mid_c = c if mu is None else c2
    J = np.zeros((k + 1, k + 1))
    J[0, 0] = 1.0
    J[0, 1] = -entropy_derivative(a[0])
    for j in range(1, k):
        h, rho = _ratio_entropy(a[j - 1], a[j])
        dh = entropy_derivative(rho)
        if mu is None:
            J[j, 0] = 2 * (a[j + 1] - 2 * a[j] + a[j - 1])
        J[j, j] = 2 * mid_c - dh
        J[j, j + 1] = -4 * mid_c - (h - rho * dh)
        if j + 1 < k:
            J[j, j + 2] = 2 * mid_c
    ak = a[k - 1]
    if mu is None:
        J[k, 0] = 2 * (2 * ak + 1)
        J[k, k] = 4 * c - 2 * entropy_derivative(2 * ak)
    else:
        J[k, 0] = 2.0
        J[k, k] = -entropy_derivative(2 * ak) + 2 * c2
    return J


def _admissible(z: np.ndarray) -> bool:
    a = z[1:]
    return bool(0 < a[0] and np.all(np.diff(a) > 0) and a[-1] < 0.5 and 0 < z[0] < 1)


def _damped_newton(
    F: Callable[[np.ndarray], np.ndarray],
    J: Callable[[np.ndarray], np.ndarray],
    z0: np.ndarray,
    max_iter: int = 200,
) -> np.ndarray:
    z = np.array(z0, dtype=float)
    r = F(z)
    for _ in range(max_iter):
        norm = np.max(np.abs(r))
        if norm < 1e-14:
            break
        step = np.linalg.solve(J(z), -r)
        t = 1.0
        while t > 1e-10:
            cand = z + t * step
            if _admissible(cand):
                rc = F(cand)
                if np.max(np.abs(rc)) < norm:
                    break
            t *= 0.5
        else:
            break
        z, r = cand, rc
        if np.max(np.abs(t * step)) < STEP_TOL:
            break
    return z


def _solve_system(F, J, z0, what: str) -> np.ndarray:
    z = _damped_newton(F, J, z0)
    if not (_admissible(z) and np.max(np.abs(F(z))) < RESIDUAL_TOL):
        log.info("damped Newton stalled on %s; retrying with hybrid Powell", what)
        sol = optimize.root(F, z0, jac=J, method="hybr", tol=1e-14)
        z = sol.x
    res = F(z)
    if not _admissible(z) or np.max(np.abs(res)) >= RESIDUAL_TOL:
        raise ConvergenceError(f"{what}: no admissible root found", res)
    return z


def initial_guess(k: int) -> np.ndarray:
    return np.r_[0.86, np.linspace(0.27, 0.35, k)]


@lru_cache(maxsize=None)
def solve_gamma(k: int = DEFAULT_K) -> ExponentSolution:
    """Balanced level fractions and base ``gamma`` for ``k`` levels."""
    if k < 2:
        raise ValueError("need at least two levels")
    F = lambda z: hypercube_residuals(z[0], z[1:])
    Jf = lambda z: _jacobian(z[0], z[1:], None, None)
    z = _solve_system(F, Jf, initial_guess(k), f"hypercube system k={k}")
    return ExponentSolution(k, 2.0 ** z[0], tuple(z[1:]), tuple(F(z)))


@lru_cache(maxsize=None)
def _restricted_solution(mu: float, k: int) -> tuple[float, tuple[float, ...], tuple[float, ...]]:
    if not 1.0 < mu <= 2.0:
        raise ValueError(f"mu={mu} outside (1, 2]")
    base = solve_gamma(k)
    c2 = base.c
    F = lambda z: restricted_residuals(z[0], z[1:], mu, c2)
    Jf = lambda z: _jacobian(z[0], z[1:], mu, c2)
    z = _solve_system(F, Jf, np.r_[base.c, base.alpha], f"restricted system mu={mu}")
    return z[0], tuple(z[1:]), tuple(F(z))


def solve_gamma_mu(mu: float, k: int = DEFAULT_K) -> CurvePoint:
    c_mu, _, _ = _restricted_solution(float(mu), k)
    return CurvePoint(float(mu), 2.0 ** c_mu)


def gamma_mu_residuals(mu: float, k: int = DEFAULT_K) -> tuple[float, ...]:
    return _restricted_solution(float(mu), k)[2]


def _sign_changes(f: Callable[[float], float], lo: float, hi: float, points: int = 64) -> int:
    xs = np.linspace(lo, hi, points)
    vals = np.array([f(x) for x in xs])
    return int(np.count_nonzero(np.diff(np.sign(vals)) != 0))


def _bisect(f: Callable[[float], float], lo: float, hi: float, what: str, xtol: float = 1e-13) -> float:
    if f(lo) * f(hi) > 0:
        raise ConvergenceError(f"{what}: root not bracketed in [{lo}, {hi}]", (f(lo), f(hi)))
    if _sign_changes(f, lo, hi) > 1:
        log.warning("%s: more than one sign change in [%g, %g]; returning the bisection root", what, lo, hi)
    return optimize.bisect(f, lo, hi, xtol=xtol, maxiter=500)


@lru_cache(maxsize=None)
def solve_mu0(k: int = DEFAULT_K) -> float:
    """Density at which the restricted hybrid matches classical search."""
    return _bisect(lambda mu: solve_gamma_mu(mu, k).gamma_mu - mu, 1.6, 1.9, "mu0")


def tsp_sides(alpha: float) -> tuple[float, float]:
    """(preprocessing, quantum) exponents of the TSP algorithm, base 2."""
    return entropy((1 - alpha) / 4), 0.5 * (1 + 0.5 + entropy(alpha) / 4)


@lru_cache(maxsize=None)
def solve_tsp_alpha() -> tuple[float, float]:
    def gap(a: float) -> float:
        pre, quant = tsp_sides(a)
        return pre - quant

    alpha = _bisect(gap, 1e-12, 0.5, "tsp balance")
    return alpha, tsp_sides(alpha)[0]


def setcover_sides(alpha: float, beta: float) -> tuple[float, float]:
    pre_arg = (1 - alpha) / 4 + beta / 2
    pre = entropy(pre_arg) if pre_arg <= 0.5 else 1.0
    quant = 0.5 * (
        1 + (1 + beta) / 2 + entropy(min((alpha + 2 * beta) / (1 + 2 * beta), 1.0)) * (1 + 2 * beta) / 4
    )
    return pre, quant


def setcover_exponent_at(alpha: float, beta: float) -> float:
    return max(setcover_sides(alpha, beta))


@lru_cache(maxsize=None)
def solve_setcover_balance(beta: float) -> tuple[float, float]:
    """Balanced ``(alpha, exponent)`` of the set-cover algorithm."""
    if not 0.0 <= beta < 0.2:
        raise ValueError(f"beta={beta} outside [0, 0.2)")

    def gap(a: float) -> float:
        pre, quant = setcover_sides(a, beta)
        return pre - quant

    lo, hi = 1e-12, 0.5
    if gap(lo) <= 0:
        return lo, setcover_exponent_at(lo, beta)
    if gap(hi) >= 0:
        return hi, setcover_exponent_at(hi, beta)
    alpha = _bisect(gap, lo, hi, f"set cover balance beta={beta}")
    return alpha, setcover_exponent_at(alpha, beta)


def solve_setcover_exponent(beta: float) -> float:
    return solve_setcover_balance(beta)[1]


def bandwidth_exponent(mu0: float | None = None) -> float:
    """Base of the bandwidth running time, ``sqrt(5 * mu0)``."""
    if mu0 is None:
        mu0 = solve_mu0()
    return math.sqrt(5.0 * mu0)


def warmup_terms() -> tuple[float, float]:
    """log2 exponents of the Hamiltonian-cycle warm-up: (classical, quantum)."""
    return entropy(0.25), 0.5 * (1 + 0.5 * entropy(0.5))


def warmup_hamiltonian_exponent() -> float:
    return 2.0 ** max(warmup_terms())


def parse_grid(spec: str) -> list[float]:
    """``"1.70:2.00:0.01"`` -> inclusive grid rounded to the step's decimals."""
    try:
        lo, hi, step = (float(p) for p in spec.split(":"))
    except ValueError as exc:
        raise ValueError(f"grid must be lo:hi:step, got {spec!r}") from exc
    if step <= 0 or hi < lo:
        raise ValueError(f"bad grid {spec!r}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    digits = max(0, -int(math.floor(math.log10(step))) + 1)
    return [round(lo + i * step, digits) for i in range(count)]


def emit_curve(mu_grid: Iterable[float], k: int = DEFAULT_K) -> list[CurvePoint]:
    return [solve_gamma_mu(mu, k) for mu in mu_grid]


def write_curve_csv(points: Sequence[CurvePoint], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["mu", "gamma_mu"])
        for p in points:
            writer.writerow([f"{p.mu:.6f}", f"{p.gamma_mu:.6f}"])
