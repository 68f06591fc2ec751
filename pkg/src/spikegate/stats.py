"""Gaussian density, maximum-likelihood fitting, and negative log likelihood.

Sigma is the MLE estimate (divide by n, not n-1): the NLL is a likelihood
quantity, and the MLE convention makes "the fit minimizes the NLL" exactly
true rather than approximately.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateData, NonPositiveSigma, TooFewValues
from .model import GaussianFit


def gaussian_pdf(v, mu: float, sigma: float):
    """Normal density exp(-(v-mu)^2/(2*sigma^2)) / (sqrt(2*pi)*sigma)."""
    if not (math.isfinite(sigma) and sigma > 0):
        raise NonPositiveSigma(f"sigma must be > 0, got {sigma!r}")
    v = np.asarray(v, dtype=np.float64)
    z = (v - mu) / sigma
    out = np.exp(-0.5 * z * z) / (math.sqrt(2.0 * math.pi) * sigma)
    return float(out) if out.ndim == 0 else out


def nll(values, mu: float, sigma: float) -> float:
    """Sum over values of 0.5*ln(2*pi*sigma^2) + (v-mu)^2/(2*sigma^2)."""
    if not (math.isfinite(sigma) and sigma > 0):
        raise NonPositiveSigma(f"sigma must be > 0, got {sigma!r}")
    values = np.asarray(values, dtype=np.float64)
    var = sigma * sigma
    return float(
        0.5 * values.size * math.log(2.0 * math.pi * var)
        + np.sum((values - mu) ** 2) / (2.0 * var)
    )


def fit_gaussian(values) -> GaussianFit:
    """Maximum-likelihood Gaussian fit of a sample.

    mu is the sample mean, sigma the MLE standard deviation, and the reported
    NLL is evaluated at the fitted parameters.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size < 2:
        raise TooFewValues(f"need at least 2 values, got {values.size}")
    if np.ptp(values) == 0:
        raise DegenerateData("all values equal; sigma would be 0")
    mu = float(values.mean())
    sigma = float(np.sqrt(np.mean((values - mu) ** 2)))
    return GaussianFit(mu, sigma, nll(values, mu, sigma), int(values.size))
