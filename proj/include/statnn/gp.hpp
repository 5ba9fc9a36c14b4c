#pragma once

#include <Eigen/Dense>

#include "statnn/kernels.hpp"

namespace statnn {

/// Exact conjugate Gaussian-process regression posterior.
struct GpPosterior {
    KernelSpec kernel;
    Eigen::MatrixXd train_x;  // n x d
    Eigen::VectorXd train_y;  // n
    double noise_var = 0.0;
    Eigen::MatrixXd chol;   // lower factor of K + noise_var I (+ jitter if needed)
    Eigen::VectorXd alpha;  // (K + noise_var I)^-1 y
    double log_marginal = 0.0;
    double jitter = 0.0;  // extra diagonal added to make the factorization succeed
};

GpPosterior gp_fit(const KernelSpec& kernel, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   double noise_var);

/// Predictive mean and (noise-free, clamped-nonnegative) latent variance.
void gp_predict(const GpPosterior& post, const Eigen::MatrixXd& X_star, Eigen::VectorXd& mean,
                Eigen::VectorXd& var);

}  // namespace statnn
