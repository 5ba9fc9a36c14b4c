#pragma once

#include <Eigen/Dense>
#include <string>

namespace statnn {

enum class KernelFamily {
    matern,              // half-integer nu in {1/2, 3/2, 5/2, 7/2}
    rbf,                 // nu -> inf limit
    exponential,         // alias of matern nu = 1/2
    arccos,              // order 0 (step) or 1 (relu), non-stationary
    sigmoid_nn,          // erf-network kernel, non-stationary
    locally_stationary_matern,  // matern times a Gaussian decay envelope
};

/// Covariance-function descriptor with closed-form evaluation.
struct KernelSpec {
    KernelFamily family = KernelFamily::rbf;
    double nu = 1.5;           // matern smoothness (half-integer)
    double lengthscale = 1.0;  // ell > 0 (ignored by arccos)
    double variance = 1.0;     // output scale sigma^2 > 0
    int arccos_order = 1;      // 0 or 1
    double sigma0 = 1.0;       // sigmoid_nn bias scale
    double sigma = 1.0;        // sigmoid_nn weight scale
    double sigma_m = 1.0;      // envelope width of the locally stationary kernel

    static KernelSpec matern(double nu, double ell = 1.0, double var = 1.0);
    static KernelSpec rbf(double ell = 1.0, double var = 1.0);
    static KernelSpec exponential(double ell = 1.0, double var = 1.0);
    static KernelSpec arccos(int order, double var = 1.0);
    static KernelSpec sigmoid_nn(double sigma0, double sigma, double var = 1.0);
    static KernelSpec locally_stationary_matern(double nu, double sigma_m, double ell = 1.0,
                                                double var = 1.0);

    bool is_stationary() const;
    void validate() const;  // throws Error(config) on bad parameters
    std::string describe() const;
};

/// kappa(x, x'). Stationary families depend on ||x - x'|| only.
double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime);

/// Convenience for stationary families: kappa as a function of the distance r.
double kernel_eval_r(const KernelSpec& spec, double r);

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& X, const Eigen::MatrixXd& X_prime);

/// Symmetric Gram over one point set (exact symmetry by construction).
Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& X);

}  // namespace statnn
