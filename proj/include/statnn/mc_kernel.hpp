#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "statnn/activations.hpp"
#include "statnn/kernels.hpp"
#include "statnn/spectral.hpp"

namespace statnn {

/// One random single-hidden-layer network for Monte Carlo kernel estimation.
struct McConfig {
    ActivationKind activation = ActivationKind::sin;
    WeightPrior prior;
    int hidden_units = 1000;
    std::uint64_t seed = 0;
    int input_dim = 1;

    void validate() const;  // periodic activations only
};

struct NetworkDraw {
    Eigen::MatrixXd weights;  // K x d, i.i.d. from the prior per coordinate
    Eigen::VectorXd biases;   // K, Uniform(-pi, pi); zero when unused
};

/// Draws weights and (where the activation needs them) biases, deterministic
/// in the seed. Shared by the estimator and the Gram builder so a single
/// network backs the whole Gram matrix.
NetworkDraw draw_network(const McConfig& cfg);

/// (1/K) sum_k sigma(w_k.x + b_k) sigma(w_k.x' + b_k).
double mc_kernel_estimate(const McConfig& cfg, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& x_prime);

/// Gram of one random network over the rows of X; symmetric and PSD by
/// construction (it is an outer-product average).
Eigen::MatrixXd mc_gram(const McConfig& cfg, const Eigen::MatrixXd& X);

/// Mass of the odd-harmonic mixture the activation induces: 1 for sin/sincos
/// (exact duality), sum_k (2k+1)^-4 = pi^4/96 for triangle/periodic-relu.
double activation_mixture_mass(ActivationKind kind);

struct SweepRow {
    int hidden_units = 0;
    std::vector<double> maes;  // one mean-absolute-error per repeat
    double mean() const;
    double stddev() const;
    double median() const;
};

/// Mean absolute Gram error against the closed-form dual for each network
/// width in `hidden_unit_counts`, averaged over `repeats` independent draws.
/// Repeats use seed substreams so rows are independently reproducible.
std::vector<SweepRow> convergence_sweep(ActivationKind activation, const WeightPrior& prior,
                                        const KernelSpec& kernel,
                                        const std::vector<int>& hidden_unit_counts,
                                        const std::vector<double>& grid, int repeats,
                                        std::uint64_t seed);

struct TruncationRow {
    double r = 0.0;
    double kappa_one_term = 0.0;
    double kappa_full = 0.0;
    double abs_diff = 0.0;
};

/// Error of keeping only the first component of the odd-harmonic mixture
/// kappa(r) = sum_k lambda_k^-4 kappa_base(lambda_k r), lambda_k = 2k + 1,
/// with both sides normalized to kappa(0) = 1 and kappa_base evaluated by the
/// Wiener-Khinchin quadrature oracle.
std::vector<TruncationRow> triangle_truncation_error(const WeightPrior& prior,
                                                     const std::vector<double>& r_grid, int terms);

}  // namespace statnn
