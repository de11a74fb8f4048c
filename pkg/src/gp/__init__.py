# src/gp/__init__.py
"""
Gaussian-process machinery: SE kernel derivatives, incremental Cholesky factors,
value and Jacobian posteriors, and MAP hyperparameter fitting.
"""

from .kernels import (
    KernelParams,
    se_kernel,
    se_kernel_grad1,
    se_kernel_hess12,
    kernel_matrix,
    kernel_vector,
    kernel_grad1_matrix,
)
from .cholesky import CholeskyFactor, cholesky, cholesky_append
from .posterior import (
    Dataset,
    GPModel,
    JacobianPosterior,
    ValuePosterior,
    factorize,
    posterior_jacobian,
    posterior_value,
)
from .hyperparameters import (
    FixedPrior,
    Hyperpriors,
    NormalPrior,
    UniformPrior,
    fit_hyperparameters_map,
    log_marginal_likelihood,
    log_posterior,
    parse_prior,
)

__all__ = [
    "KernelParams",
    "se_kernel",
    "se_kernel_grad1",
    "se_kernel_hess12",
    "kernel_matrix",
    "kernel_vector",
    "kernel_grad1_matrix",
    "CholeskyFactor",
    "cholesky",
    "cholesky_append",
    "Dataset",
    "GPModel",
    "JacobianPosterior",
    "ValuePosterior",
    "factorize",
    "posterior_jacobian",
    "posterior_value",
    "FixedPrior",
    "Hyperpriors",
    "NormalPrior",
    "UniformPrior",
    "fit_hyperparameters_map",
    "log_marginal_likelihood",
    "log_posterior",
    "parse_prior",
]
