"""
Quantized-feedback phasing: CLT approximation of the cooperative sum.

Conditioned on m lost phasing words, the real and imaginary parts of the sum
channel are treated as independent Gaussians X ~ N(mu_r, sigma_r^2) and
Y ~ N(0, sigma_i^2). The SNR X^2 + Y^2 then has the series CDF

    F(gamma | m) = sum_n a_n [1 - Q_{n+1}(sqrt(lambda)/sigma_r, sqrt(gamma)/sigma_r)]
    a_n = Gamma(n + 1/2) / (n! Gamma(1/2)) (sigma_r/sigma_i) t^n,
    t   = (sigma_i^2 - sigma_r^2) / sigma_i^2,

valid for |t| < 1. Near the radius of convergence a direct quadrature is
used instead. Word errors are independent per device, so the unconditional
CDF is a binomial mixture over m.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy import integrate, stats

from clusterlink.channel import ClusterConfig, FeedbackSideInfo, derive_powers
from clusterlink.exceptions import DomainError, NumericFailure
from clusterlink.metrics.service import ServiceSpec
from clusterlink.specfun import (
    DEFAULT_TOLERANCE,
    Tolerance,
    marcum_cdf_orders,
    rice_amplitude_mean,
    sinc_complement,
    uniform_cos2_moment,
    uniform_cos_moment,
)

logger = logging.getLogger('clusterlink.analytic')

# Series used only while |t| stays below this
SERIES_RADIUS = 0.95

# Integration window around the mean of X, in standard deviations
QUADRATURE_SPAN = 14.0


class Branch:
    SERIES = 'series'
    QUADRATURE = 'quadrature'


@dataclass(frozen=True)
class GaussianSumMoments:
    """Gaussian parameters of the sum channel given the error count."""

    mu_r: float
    sigma_r: float
    sigma_i: float

    def __post_init__(self):
        if not (self.sigma_r > 0 and self.sigma_i > 0):
            raise ValueError(f'sigma_r and sigma_i must be > 0, got {self.sigma_r}, {self.sigma_i}')

    @property
    def noncentrality(self) -> float:
        return self.mu_r * self.mu_r

    @property
    def series_parameter(self) -> float:
        """t = (sigma_i^2 - sigma_r^2) / sigma_i^2."""
        return 1.0 - (self.sigma_r / self.sigma_i) ** 2


@dataclass(frozen=True)
class CdfEvaluation:
    """A CDF value and how it was obtained."""

    value: float
    branch: str
    terms: int = 0


def moments(cfg: ClusterConfig, side: FeedbackSideInfo, error_count: int) -> GaussianSumMoments:
    """
    Mean and spreads of the sum channel with error_count lost phasing words.

    Correctly phased devices keep a residual phase uniform on the
    quantization cell (E cos = sinc(2^-N), E cos^2 = (1 + sinc(2^{1-N}))/2);
    devices with a lost word have a phase uniform on the circle.

    Raises:
        DomainError: If error_count is outside [0, |delta|]
        NumericFailure: If sigma_r^2 comes out non-positive
    """
    devices = cfg.active_devices
    if not 0 <= error_count <= devices:
        raise DomainError(f'error_count must be in [0, {devices}], got {error_count}')

    f = derive_powers(cfg).per_device_power_factor
    mean_power = cfg.mean_snr
    correct = devices - error_count
    half_width = side.cell_half_width

    amplitude = rice_amplitude_mean(mean_power, cfg.rice_factor)
    mean_in_phase = amplitude * uniform_cos_moment(half_width)

    mu_r = math.sqrt(f) * correct * mean_in_phase
    var_r = f * (
        0.5 * error_count * mean_power
        + correct * (mean_power * uniform_cos2_moment(half_width) - mean_in_phase ** 2)
    )
    var_i = f * (
        0.5 * error_count * mean_power
        + correct * 0.5 * mean_power * sinc_complement(2.0 * half_width / math.pi)
    )

    if not var_r > 0:
        raise NumericFailure(
            f'In-phase variance is not positive ({var_r})',
            partial_value=var_r,
            context={'error_count': error_count},
        )
    return GaussianSumMoments(mu_r=mu_r, sigma_r=math.sqrt(var_r), sigma_i=math.sqrt(var_i))


def mixture_weights(mom: GaussianSumMoments, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """
    Weights a_n of the chi-square mixture, truncated at convergence.

    Truncation happens once the remaining weight mass is bounded by
    tol.abs_tol and the partial sum is within tol.abs_tol of 1.

    Raises:
        DomainError: If |t| >= 1
        NumericFailure: If tol.max_terms is reached first
    """
    t = mom.series_parameter
    if not abs(t) < 1:
        raise DomainError(f'Series parameter |t| = {abs(t)} is outside the radius of convergence')

    weight = mom.sigma_r / mom.sigma_i
    weights: List[float] = [weight]
    total = weight
    for n in range(tol.max_terms):
        if abs(weight) / (1.0 - abs(t)) < tol.abs_tol and abs(total - 1.0) < tol.abs_tol:
            return np.array(weights)
        weight *= t * (n + 0.5) / (n + 1.0)
        weights.append(weight)
        total += weight

    raise NumericFailure(
        f'Mixture weights did not converge (t={t})',
        partial_value=total,
        terms=len(weights),
    )


def quadrature_cdf(mom: GaussianSumMoments, gamma: float) -> float:
    """
    P(X^2 + Y^2 <= gamma) by adaptive quadrature.

    Integrates the density of X against P(Y^2 <= gamma - x^2) =
    erf(sqrt(gamma - x^2) / (sigma_i sqrt 2)) over |x| <= sqrt(gamma).

    Raises:
        NumericFailure: If the integrator reports non-convergence
    """
    if gamma < 0:
        raise DomainError(f'gamma must be >= 0, got {gamma}')
    if gamma == 0:
        return 0.0

    radius = math.sqrt(gamma)
    lower = max(-radius, mom.mu_r - QUADRATURE_SPAN * mom.sigma_r)
    upper = min(radius, mom.mu_r + QUADRATURE_SPAN * mom.sigma_r)
    if lower >= upper:
        return 0.0

    scale = mom.sigma_i * math.sqrt(2.0)
    norm = 1.0 / (mom.sigma_r * math.sqrt(2.0 * math.pi))

    def integrand(x):
        z = (x - mom.mu_r) / mom.sigma_r
        return norm * math.exp(-0.5 * z * z) * math.erf(math.sqrt(max(gamma - x * x, 0.0)) / scale)

    points = [p for p in (mom.mu_r,) if lower < p < upper]
    with warnings.catch_warnings():
        warnings.simplefilter('error', integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(
                integrand, lower, upper, points=points or None,
                epsabs=1e-12, epsrel=1e-10, limit=400,
            )
        except integrate.IntegrationWarning as exc:
            raise NumericFailure(f'Quadrature did not converge: {exc}', context={'gamma': gamma})
    return min(1.0, max(0.0, value))


def mixture_cdf(mom: GaussianSumMoments, gamma: float, tol: Tolerance = DEFAULT_TOLERANCE) -> CdfEvaluation:
    """
    Conditional SNR CDF from the chi-square mixture series.

    Falls back to quadrature_cdf when |t| >= SERIES_RADIUS; the branch used
    is recorded on the result.
    """
    if gamma < 0:
        raise DomainError(f'gamma must be >= 0, got {gamma}')
    if gamma == 0:
        return CdfEvaluation(0.0, Branch.SERIES)
    if math.isinf(gamma):
        return CdfEvaluation(1.0, Branch.SERIES)

    if abs(mom.series_parameter) >= SERIES_RADIUS:
        logger.debug(f'[Mixture] |t|={abs(mom.series_parameter):.4f} outside series radius, using quadrature')
        return CdfEvaluation(quadrature_cdf(mom, gamma), Branch.QUADRATURE)

    weights = mixture_weights(mom, tol)
    a = abs(mom.mu_r) / mom.sigma_r
    b = math.sqrt(gamma) / mom.sigma_r
    components = marcum_cdf_orders(len(weights) - 1, a, b, tol)

    # Weights too small to move the result are left out
    used = np.abs(weights) >= 1e-3 * tol.abs_tol
    value = math.fsum(weights[used] * components[used])
    return CdfEvaluation(min(1.0, max(0.0, value)), Branch.SERIES, terms=len(weights))


def mixture_pdf(mom: GaussianSumMoments, gamma: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """
    Conditional SNR density sum_n a_n f_n(gamma), f_n the non-central
    chi-square density with 2n + 2 degrees of freedom scaled by sigma_r^2.
    """
    if gamma < 0:
        return 0.0
    weights = mixture_weights(mom, tol)
    scale = mom.sigma_r ** 2
    dof = 2.0 * np.arange(1, len(weights) + 1)
    x = gamma / scale
    if mom.noncentrality == 0:
        densities = stats.chi2.pdf(x, dof)
    else:
        densities = stats.ncx2.pdf(x, dof, mom.noncentrality / scale)
    return float(math.fsum(weights * densities) / scale)


def error_count_weights(devices: int, word_error_prob: float) -> np.ndarray:
    """Binomial probabilities of 0 .. devices lost phasing words."""
    return stats.binom.pmf(np.arange(devices + 1), devices, word_error_prob)


def conditional_components(
    cfg: ClusterConfig, side: FeedbackSideInfo, tol: Tolerance = DEFAULT_TOLERANCE,
) -> List[Tuple[int, float, GaussianSumMoments]]:
    """(m, weight, moments) for every error count with non-negligible weight."""
    components = []
    for m, weight in enumerate(error_count_weights(cfg.active_devices, side.word_error_prob)):
        if weight < tol.abs_tol:
            continue
        try:
            components.append((m, float(weight), moments(cfg, side, m)))
        except NumericFailure as exc:
            raise exc.with_context(error_count=m)
    return components


def snr_cdf_with_errors(
    cfg: ClusterConfig,
    side: FeedbackSideInfo,
    gamma: float,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> float:
    """
    Unconditional SNR CDF: binomial mixture over the number of lost words.

    Summed in ascending m with compensated summation.

    Raises:
        NumericFailure: From a conditional CDF, with the offending m attached
    """
    terms = []
    for m, weight, mom in conditional_components(cfg, side, tol):
        try:
            conditional = mixture_cdf(mom, gamma, tol).value
        except NumericFailure as exc:
            raise exc.with_context(error_count=m)
        terms.append(weight * conditional)
    return min(1.0, max(0.0, math.fsum(terms)))


def dor_feedback(
    cfg: ClusterConfig,
    side: FeedbackSideInfo,
    svc: ServiceSpec,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> float:
    """Delay outage rate under feedback phasing; 1 for saturated thresholds."""
    if svc.saturated:
        return 1.0
    return snr_cdf_with_errors(cfg, side, svc.dor_threshold, tol)
