#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "statnn/kernels.hpp"

namespace statnn {

enum class PriorFamily { normal, cauchy, student_t };

/// Symmetric weight distribution; the spectral dual of a stationary kernel.
/// `scale` is a frequency scale: scale = 1 corresponds to lengthscale 1.
struct WeightPrior {
    PriorFamily family = PriorFamily::normal;
    double dof = 3.0;    // student_t degrees of freedom (> 0)
    double scale = 1.0;  // > 0

    static WeightPrior normal(double scale = 1.0);
    static WeightPrior cauchy(double scale = 1.0);
    static WeightPrior student_t(double dof, double scale = 1.0);

    void validate() const;
    std::string describe() const;
};

double prior_log_pdf(const WeightPrior& prior, double w);
double prior_pdf(const WeightPrior& prior, double w);

/// d/dw of -log p(w); used by the network loss gradients.
double prior_neg_log_pdf_grad(const WeightPrior& prior, double w);

/// One draw using the caller's generator. Cauchy uses the tangent transform,
/// Student-t the normal/chi-square composition.
double prior_draw(const WeightPrior& prior, std::mt19937_64& rng);

/// n i.i.d. draws, deterministic in the seed.
std::vector<double> prior_sample(const WeightPrior& prior, std::uint64_t seed, std::size_t n);

/// Spectral density of the unit-lengthscale Matern family:
/// S(w) = 2 sqrt(pi) Gamma(nu + 1/2) / Gamma(nu) (2 nu)^nu (2 nu + w^2)^-(nu + 1/2).
/// Coincides with 2*pi times the Student-t(2 nu) density.
double matern_spectral_density(double nu, double w);

/// The dual weight prior of a stationary kernel (scale = 1 / lengthscale):
/// exponential -> Cauchy, matern-nu -> Student-t(2 nu), rbf -> normal.
WeightPrior prior_for_kernel(const KernelSpec& spec);

struct CosineTransformResult {
    double value = 0.0;
    double residual = 0.0;  // last accelerated-estimate change
    int intervals = 0;
    bool converged = false;
};

/// kappa(r) = integral of p(w) cos(w r) dw over the real line, by splitting at
/// the cosine zeros and accelerating the alternating tail (repeated averaging
/// of partial sums). Handles the heavy Cauchy tail through the oscillatory
/// damping; the non-oscillatory r = 0 case uses a tangent substitution.
CosineTransformResult cosine_transform(const WeightPrior& prior, double r, double abs_tol = 1e-9,
                                       int max_intervals = 200000);

/// Numerical Wiener-Khinchin oracle; throws Error(numeric) with the residual
/// estimate if the quadrature fails to converge.
double wiener_khinchin_numeric(const WeightPrior& prior, double r);

}  // namespace statnn
