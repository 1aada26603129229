"""
High precision Dedekind eta and Delta, the weight-12 section of the Hodge bundle and the Kahler potential
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np
from mpmath import mp, mpc, mpf
from sympy.core.intfunc import igcdex

from errors import ModularError

MIN_IMAG = 1e-3
MAX_ENTRY = 10 ** 6
MAX_TERMS = 200000
GUARD_DIGITS = 10
ACCEPTANCE_RESIDUAL = 1e-9
METRIC_TOLERANCE = 1e-6
FD_STEP = 1e-4
FD_TOL = 1e-30
MAX_ORDER = 24
ORACLE_TOL = 1e-30
ORACLE_RESIDUAL = 1e-12
METRIC_SAMPLES = 50

Gamma = Tuple[Tuple[int, int], Tuple[int, int]]
IDENTITY_GAMMA: Gamma = ((1, 0), (0, 1))
T_GAMMA: Gamma = ((1, 1), (0, 1))
S_GAMMA: Gamma = ((0, -1), (1, 0))


def working_digits(tol: float) -> int:
    """Twice the requested digits plus guard digits."""
    if not tol > 0:
        raise ModularError(f"tolerance must be positive, got {tol}")
    return 2 * max(1, math.ceil(-math.log10(tol))) + GUARD_DIGITS


def residual_threshold(tol: float) -> float:
    """Pass threshold for residual checks at a given evaluation tolerance."""
    return max(ACCEPTANCE_RESIDUAL, 10 * tol)


def check_gamma(gamma: Gamma):
    (a, b), (c, d) = gamma
    if a * d - b * c != 1:
        raise ModularError(f"{gamma} does not have determinant 1")
    if max(abs(a), abs(b), abs(c), abs(d)) > MAX_ENTRY:
        raise ModularError(f"entries of {gamma} exceed {MAX_ENTRY}")


def mobius(gamma: Gamma, tau):
    (a, b), (c, d) = gamma
    return (a * tau + b) / (c * tau + d)


def automorphy(gamma: Gamma, tau):
    (_, _), (c, d) = gamma
    return c * tau + d


@dataclass(frozen=True)
class CertifiedValue:
    value: mpc
    bound: mpf
    terms: int
    digits: int


def eta(tau, tol: float = 1e-15) -> CertifiedValue:
    """
    Dedekind eta as q^(1/24) times the truncated product of (1 - q^n).

    Args:
        tau (complex): Point of the upper half plane, Im tau >= MIN_IMAG
        tol (float): Absolute error target

    Returns:
        CertifiedValue: Value, absolute error bound and number of factors used
    """
    digits = working_digits(tol)
    with mp.workdps(digits):
        tau = mpc(tau)
        if tau.imag < MIN_IMAG:
            raise ModularError(f"Im tau = {float(tau.imag):.3e} is below {MIN_IMAG}")
        q = mp.exp(2j * mp.pi * tau)
        r = abs(q)
        prefactor = mp.exp(2j * mp.pi * tau / 24)
        product = mpc(1)
        term = mpc(1)
        n = 0
        while True:
            n += 1
            if n > MAX_TERMS:
                logging.error(f"eta at {tau} did not reach {tol} within {MAX_TERMS} factors")
                raise ModularError(f"tolerance {tol} unreachable within {MAX_TERMS} factors at tau = {tau}")
            term *= q
            product *= 1 - term
            # |log of the dropped factors| <= sum_{k>n} r^k / (1 - r^k) <= r^(n+1) / (1 - r)^2
            tail = r ** (n + 1) / (1 - r) ** 2
            if tail < 1:
                # exp(t) - 1 <= e t for t < 1
                bound = abs(prefactor * product) * tail * mp.e
                if bound < tol:
                    break
        return CertifiedValue(prefactor * product, bound, n, digits)


def delta(tau, tol: float = 1e-15) -> CertifiedValue:
    """Delta = eta^24, with the bound propagated from eta."""
    e = eta(tau, tol)
    with mp.workdps(e.digits):
        value = e.value ** 24
        relative = e.bound / abs(e.value)
        bound = abs(value) * ((1 + relative) ** 24 - 1)
        if abs(value) <= bound:
            raise ModularError(f"Delta at {tau} is not separated from 0")
        return CertifiedValue(value, bound, e.terms, e.digits)


def eta_transformation_check(tau, tol: float = 1e-15):
    """Relative residual of eta(-1/tau) = sqrt(-i tau) eta(tau)."""
    with mp.workdps(working_digits(tol)):
        tau = mpc(tau)
        left = eta(-1 / tau, tol).value
        right = mp.sqrt(-1j * tau) * eta(tau, tol).value
        return abs(left - right) / abs(right)


def delta_modularity_residual(gamma: Gamma, tau, tol: float = 1e-15):
    """
    |Delta(gamma tau) - (c tau + d)^12 Delta(tau)| relative to the right hand side.

    Args:
        gamma (tuple): ((a, b), (c, d)) in SL(2, Z)
        tau (complex): Point of the upper half plane
        tol (float): Evaluation tolerance

    Returns:
        mpf: Relative residual
    """
    check_gamma(gamma)
    with mp.workdps(working_digits(tol)):
        tau = mpc(tau)
        left = delta(mobius(gamma, tau), tol).value
        right = automorphy(gamma, tau) ** 12 * delta(tau, tol).value
        return abs(left - right) / abs(right)


class GeneratorKind(str, Enum):
    TRANSLATION = "translation"
    GAMMA = "gamma"
    PERMUTATION = "permutation"


@dataclass(frozen=True)
class HGenerator:
    """Generator of H_max: a quarter-period translation, gamma in one slot or a factor permutation."""
    kind: GeneratorKind
    slot: int = 0
    gamma: Gamma = IDENTITY_GAMMA
    perm: Tuple[int, int, int] = (0, 1, 2)
    translation: Tuple[int, ...] = (0, 0, 0, 0, 0, 0)


def _permutation_sign(perm) -> int:
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def section_equivariance_residual(h: HGenerator, taus, tol: float = 1e-15):
    """
    |h^* sigma / sigma - 1| for sigma = prod Delta(tau_i) (dz1 ^ dz2 ^ dz3)^12.

    Args:
        h (HGenerator): Generator of H_max
        taus (tuple): Three points of the upper half plane
        tol (float): Evaluation tolerance

    Returns:
        mpf: Residual of the pullback against sigma
    """
    with mp.workdps(working_digits(tol)):
        taus = [mpc(t) for t in taus]
        if h.kind == GeneratorKind.TRANSLATION:
            return mpf(0)
        deltas = [delta(t, tol).value for t in taus]
        original = deltas[0] * deltas[1] * deltas[2]
        if h.kind == GeneratorKind.GAMMA:
            check_gamma(h.gamma)
            moved = list(deltas)
            i = h.slot
            moved[i] = delta(mobius(h.gamma, taus[i]), tol).value * automorphy(h.gamma, taus[i]) ** -12
            pulled = moved[0] * moved[1] * moved[2]
        else:
            moved = [deltas[h.perm[i]] for i in range(3)]
            pulled = moved[0] * moved[1] * moved[2] * _permutation_sign(h.perm) ** 12
        return abs(pulled / original - 1)


def kahler_potential(taus, tol: float = 1e-15):
    """K = -sum log(Im tau_i |eta(tau_i)|^4)."""
    with mp.workdps(working_digits(tol)):
        total = mpf(0)
        for t in taus:
            t = mpc(t)
            total -= mp.log(t.imag * abs(eta(t, tol).value) ** 4)
        return total


@dataclass(frozen=True)
class KahlerMetric:
    analytic: np.ndarray
    finite_difference: np.ndarray
    max_relative_error: float
    min_eigenvalue: float


def kahler_metric(taus) -> KahlerMetric:
    """
    Metric g_{i jbar} = d_i dbar_j K, analytically and by central differences.

    Args:
        taus (tuple): Three points of the upper half plane

    Returns:
        KahlerMetric: Both matrices, their relative disagreement and the smallest eigenvalue
    """
    taus = [complex(t) for t in taus]
    analytic = np.diag([1 / (4 * t.imag ** 2) for t in taus]).astype(complex)
    steps = [FD_STEP * t.imag for t in taus]

    def potential(shifts):
        point = [mpc(t) + s for t, s in zip(taus, shifts)]
        return kahler_potential(point, FD_TOL)

    def shifted(i, di, j, dj):
        shifts = [0j, 0j, 0j]
        shifts[i] += di
        shifts[j] += dj
        return potential(shifts)

    def second(i, di, j, dj):
        """Central second difference of K along directions di (slot i) and dj (slot j)."""
        with mp.workdps(working_digits(FD_TOL)):
            value = (shifted(i, di, j, dj) - shifted(i, di, j, -dj)
                     - shifted(i, -di, j, dj) + shifted(i, -di, j, -dj))
            return float(value / (4 * abs(di) * abs(dj)))

    finite = np.zeros((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            hx, hy = steps[i], steps[j]
            xx = second(i, hx, j, hy)
            yy = second(i, 1j * hx, j, 1j * hy)
            xy = second(i, hx, j, 1j * hy)
            yx = second(i, 1j * hx, j, hy)
            finite[i, j] = (xx + yy + 1j * (xy - yx)) / 4

    scale = np.abs(analytic).max()
    error = float(np.abs(finite - analytic).max() / scale)
    eigenvalues = np.linalg.eigvalsh((finite + finite.conj().T) / 2)
    return KahlerMetric(analytic, finite, error, float(eigenvalues.min()))


@dataclass(frozen=True)
class Multiplier:
    epsilon: complex
    modulus_deviation: float
    order: Optional[int]
    bare_modulus: float


def eta_multiplier_order(gamma: Gamma, tau, tol: float = 1e-15) -> Multiplier:
    """
    Multiplier eps = eta(gamma tau) / ((c tau + d)^(1/2) eta(tau)) and its order.

    Args:
        gamma (tuple): ((a, b), (c, d)) in SL(2, Z)
        tau (complex): Point of the upper half plane
        tol (float): Evaluation tolerance

    Returns:
        Multiplier: eps, ||eps| - 1|, the least k <= 24 with eps^k = 1 and |eta(gamma tau)/eta(tau)|
    """
    check_gamma(gamma)
    threshold = residual_threshold(tol)
    with mp.workdps(working_digits(tol)):
        tau = mpc(tau)
        moved = eta(mobius(gamma, tau), tol).value
        base = eta(tau, tol).value
        epsilon = moved / (mp.sqrt(automorphy(gamma, tau)) * base)
        deviation = float(abs(abs(epsilon) - 1))
        if deviation > threshold:
            raise ModularError(f"multiplier of {gamma} has modulus {float(abs(epsilon))}")
        order = next((k for k in range(1, MAX_ORDER + 1) if abs(epsilon ** k - 1) < threshold), None)
        if order is None:
            logging.error(f"No multiplier order <= {MAX_ORDER} for {gamma} at {tau}")
            raise ModularError(f"multiplier of {gamma} has no order <= {MAX_ORDER}")
        return Multiplier(complex(epsilon), deviation, order, float(abs(moved / base)))


def random_gamma(rng, bound: int = 10) -> Gamma:
    """Element of SL(2, Z) with entries bounded by `bound` in absolute value."""
    while True:
        c, d = (int(v) for v in rng.integers(-bound, bound + 1, size=2))
        if c == 0 and abs(d) != 1 or math.gcd(c, d) != 1:
            continue
        if c == 0:
            a, b = d, int(rng.integers(-bound, bound + 1))
        else:
            x, y, g = igcdex(d, c)
            a, b = int(x) * g, -int(y) * g
            k = round(-a / c)
            a, b = a + k * c, b + k * d
        if a * d - b * c == 1 and max(abs(a), abs(b), abs(c), abs(d)) <= bound:
            return (a, b), (c, d)


def random_tau(rng, low: float = 0.5, high: float = 3.0) -> complex:
    return complex(float(rng.uniform(-0.5, 0.5)), float(rng.uniform(low, high)))


def multiplier_histogram(samples: int, seed: int, bound: int = 10, tol: float = 1e-15):
    """
    Orders of the eta multiplier over random gamma, with eps^12 values and bare moduli.

    Returns:
        tuple: (Counter of orders, sorted set of rounded eps^12, max |eta(gamma tau)/eta(tau)|)
    """
    rng = np.random.default_rng(seed)
    orders = Counter()
    twelfth = set()
    bare = 0.0
    for _ in range(samples):
        m = eta_multiplier_order(random_gamma(rng, bound), random_tau(rng), tol)
        orders[m.order] += 1
        value = m.epsilon ** 12
        twelfth.add((round(value.real), round(value.imag)))
        bare = max(bare, m.bare_modulus)
    return orders, sorted(twelfth), bare


def potential_invariance_residual(gamma: Gamma, taus, slot: int, tol: float = 1e-15):
    """|K(gamma tau) - K(tau)| with gamma acting on one slot of the triple."""
    check_gamma(gamma)
    with mp.workdps(working_digits(tol)):
        taus = [mpc(t) for t in taus]
        moved = list(taus)
        moved[slot] = mobius(gamma, taus[slot])
        return abs(kahler_potential(moved, tol) - kahler_potential(taus, tol))


def eta_oracle_residual(tau=1j, tol: float = 1e-15):
    """Distance between eta at tol and the oracle evaluated at tol 1e-30 with doubled precision."""
    value = eta(tau, tol).value
    oracle = eta(tau, ORACLE_TOL).value
    with mp.workdps(working_digits(ORACLE_TOL)):
        return abs(mpc(value) - oracle)


@dataclass(frozen=True)
class ModularSuite:
    samples: int
    max_delta_residual: float
    max_section_residual: float
    max_potential_residual: float
    max_metric_error: float
    min_eigenvalue: float
    multiplier_orders: Dict[int, int]
    twelfth_powers: Tuple[Tuple[int, int], ...]
    max_bare_modulus: float
    eta_oracle_residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return (self.max_delta_residual < self.threshold
                and self.max_section_residual < self.threshold
                and self.max_potential_residual < self.threshold
                and self.max_metric_error < METRIC_TOLERANCE
                and self.min_eigenvalue > 0
                and self.eta_oracle_residual < ORACLE_RESIDUAL
                and all(MAX_ORDER % k == 0 for k in self.multiplier_orders))


def modular_suite(samples: int = 100, seed: int = 0, tol: float = 1e-15, bound: int = 10,
                  metric_samples: int = METRIC_SAMPLES) -> ModularSuite:
    """
    Seeded batch of residual checks on random gamma and random moduli points.

    Args:
        samples (int): Number of random (gamma, tau) draws
        seed (int): numpy seed
        tol (float): Evaluation tolerance
        bound (int): Bound on the entries of gamma
        metric_samples (int): Number of triples for the finite difference metric check

    Returns:
        ModularSuite: Maxima of every residual, metric agreement and the multiplier histogram
    """
    if samples < 1:
        raise ModularError(f"sample count must be positive, got {samples}")
    rng = np.random.default_rng(seed)
    delta_max = section_max = potential_max = 0.0
    for _ in range(samples):
        gamma = random_gamma(rng, bound)
        taus = [random_tau(rng) for _ in range(3)]
        slot = int(rng.integers(0, 3))
        perm = tuple(int(i) for i in rng.permutation(3))
        delta_max = max(delta_max, float(delta_modularity_residual(gamma, taus[slot], tol)))
        for h in (HGenerator(GeneratorKind.GAMMA, slot=slot, gamma=gamma),
                  HGenerator(GeneratorKind.PERMUTATION, perm=perm)):
            section_max = max(section_max, float(section_equivariance_residual(h, taus, tol)))
        potential_max = max(potential_max, float(potential_invariance_residual(gamma, taus, slot, tol)))

    metric_error, eigenvalue = 0.0, math.inf
    for _ in range(min(samples, metric_samples)):
        metric = kahler_metric([random_tau(rng) for _ in range(3)])
        metric_error = max(metric_error, metric.max_relative_error)
        eigenvalue = min(eigenvalue, metric.min_eigenvalue)

    orders, twelfth, bare = multiplier_histogram(samples, seed + 1, bound, tol)
    suite = ModularSuite(
        samples=samples,
        max_delta_residual=delta_max,
        max_section_residual=section_max,
        max_potential_residual=potential_max,
        max_metric_error=metric_error,
        min_eigenvalue=eigenvalue,
        multiplier_orders=dict(sorted(orders.items())),
        twelfth_powers=tuple(twelfth),
        max_bare_modulus=bare,
        eta_oracle_residual=float(eta_oracle_residual(1j, tol)),
        threshold=residual_threshold(tol),
    )
    logging.info(f"Modular suite on {samples} samples: delta {delta_max:.3e}, section {section_max:.3e}, "
                 f"potential {potential_max:.3e}, metric {metric_error:.3e}")
    return suite
