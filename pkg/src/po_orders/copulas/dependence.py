"""Dependence measures of the bivariate copula generated by φ."""

import logging
import math

import numpy as np
from scipy import integrate

from .generators import GeneratorSpec

logger = logging.getLogger(__name__)


def kendall_tau(g: GeneratorSpec) -> float:
    """Kendall's tau of C(u, v) = φ(φ⁻¹(u) + φ⁻¹(v)).

    Uses tau = 1 + 4 ∫₀¹ φ⁻¹(u) φ′(φ⁻¹(u)) du, the Archimedean form of
    4 E[C(U, V)] − 1.
    """

    def integrand(u: float) -> float:
        # s φ′(s) = −exp(log s + log|φ′(s)|) with s = φ⁻¹(u)
        log_s = float(g._log_phi_inv_raw(np.asarray(u)))
        if not np.isfinite(log_s):
            return 0.0
        value = -float(np.exp(log_s + float(g.log_abs_derivative(log_s, 1))))
        return value if math.isfinite(value) else 0.0

    value, error = integrate.quad(integrand, 0.0, 1.0, limit=200, epsabs=1e-12)
    logger.debug("kendall tau %s%s = %.10f (quad error %.2e)", g.name, dict(g.params), 1.0 + 4.0 * value, error)
    return 1.0 + 4.0 * value
