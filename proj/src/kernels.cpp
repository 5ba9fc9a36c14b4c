#include "statnn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "statnn/error.hpp"

namespace statnn {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_supported_nu(double nu) {
    return nu == 0.5 || nu == 1.5 || nu == 2.5 || nu == 3.5;
}

// Half-integer Matern correlation at scaled distance rt = r / ell.
double matern_corr(double nu, double rt) {
    if (nu == 0.5) return std::exp(-rt);
    if (nu == 1.5) {
        const double a = std::sqrt(3.0) * rt;
        return (1.0 + a) * std::exp(-a);
    }
    if (nu == 2.5) {
        const double a = std::sqrt(5.0) * rt;
        return (1.0 + a + a * a / 3.0) * std::exp(-a);
    }
    if (nu == 3.5) {
        const double a = std::sqrt(7.0) * rt;
        return (1.0 + a + 0.4 * a * a + a * a * a / 15.0) * std::exp(-a);
    }
    throw Error(ErrorCategory::config, "matern: unsupported nu (use 1/2, 3/2, 5/2 or 7/2)");
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

// ArcCos kernel of order n with the inputs augmented by a unit bias coordinate.
double arccos_eval(int order, double var, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double xx = x.squaredNorm() + 1.0;
    const double yy = y.squaredNorm() + 1.0;
    const double xy = x.dot(y) + 1.0;
    const double nx = std::sqrt(xx);
    const double ny = std::sqrt(yy);
    const double theta = std::acos(clamp_unit(xy / (nx * ny)));
    if (order == 0) return var * (kPi - theta) / kPi;
    const double j1 = std::sin(theta) + (kPi - theta) * std::cos(theta);
    return var * nx * ny * j1 / kPi;
}

// Erf-network kernel with Sigma = diag(sigma0^2, sigma^2 I) on (1, x).
double sigmoid_nn_eval(const KernelSpec& s, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double s0 = s.sigma0 * s.sigma0;
    const double sw = s.sigma * s.sigma;
    const double xy = s0 + sw * x.dot(y);
    const double xx = s0 + sw * x.squaredNorm();
    const double yy = s0 + sw * y.squaredNorm();
    const double arg = 2.0 * xy / std::sqrt((1.0 + 2.0 * xx) * (1.0 + 2.0 * yy));
    return s.variance * (2.0 / kPi) * std::asin(clamp_unit(arg));
}

}  // namespace

KernelSpec KernelSpec::matern(double nu, double ell, double var) {
    KernelSpec s;
    s.family = KernelFamily::matern;
    s.nu = nu;
    s.lengthscale = ell;
    s.variance = var;
    return s;
}

KernelSpec KernelSpec::rbf(double ell, double var) {
    KernelSpec s;
    s.family = KernelFamily::rbf;
    s.lengthscale = ell;
    s.variance = var;
    return s;
}

KernelSpec KernelSpec::exponential(double ell, double var) {
    KernelSpec s;
    s.family = KernelFamily::exponential;
    s.nu = 0.5;
    s.lengthscale = ell;
    s.variance = var;
    return s;
}

KernelSpec KernelSpec::arccos(int order, double var) {
    KernelSpec s;
    s.family = KernelFamily::arccos;
    s.arccos_order = order;
    s.variance = var;
    return s;
}

KernelSpec KernelSpec::sigmoid_nn(double sigma0, double sigma, double var) {
    KernelSpec s;
    s.family = KernelFamily::sigmoid_nn;
    s.sigma0 = sigma0;
    s.sigma = sigma;
    s.variance = var;
    return s;
}

KernelSpec KernelSpec::locally_stationary_matern(double nu, double sigma_m, double ell, double var) {
    KernelSpec s;
    s.family = KernelFamily::locally_stationary_matern;
    s.nu = nu;
    s.sigma_m = sigma_m;
    s.lengthscale = ell;
    s.variance = var;
    return s;
}

bool KernelSpec::is_stationary() const {
    return family == KernelFamily::matern || family == KernelFamily::rbf ||
           family == KernelFamily::exponential;
}

void KernelSpec::validate() const {
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw Error(ErrorCategory::config, "kernel: variance must be positive");
    if (family != KernelFamily::arccos &&
        (!(lengthscale > 0.0) || !std::isfinite(lengthscale)))
        throw Error(ErrorCategory::config, "kernel: lengthscale must be positive");
    switch (family) {
        case KernelFamily::matern:
        case KernelFamily::locally_stationary_matern:
            if (!is_supported_nu(nu))
                throw Error(ErrorCategory::config, "kernel: nu must be one of 1/2, 3/2, 5/2, 7/2");
            break;
        case KernelFamily::arccos:
            if (arccos_order != 0 && arccos_order != 1)
                throw Error(ErrorCategory::config, "kernel: arccos order must be 0 or 1");
            break;
        case KernelFamily::sigmoid_nn:
            if (!(sigma0 > 0.0) || !(sigma > 0.0))
                throw Error(ErrorCategory::config, "kernel: sigmoid-nn scales must be positive");
            break;
        default:
            break;
    }
    if (family == KernelFamily::locally_stationary_matern && !(sigma_m > 0.0))
        throw Error(ErrorCategory::config, "kernel: sigma_m must be positive");
}

std::string KernelSpec::describe() const {
    std::ostringstream os;
    switch (family) {
        case KernelFamily::matern: os << "matern nu=" << nu; break;
        case KernelFamily::rbf: os << "rbf"; break;
        case KernelFamily::exponential: os << "exponential"; break;
        case KernelFamily::arccos: os << "arccos-" << arccos_order; break;
        case KernelFamily::sigmoid_nn:
            os << "sigmoid-nn sigma0=" << sigma0 << " sigma=" << sigma;
            break;
        case KernelFamily::locally_stationary_matern:
            os << "matern-ls nu=" << nu << " sigma_m=" << sigma_m;
            break;
    }
    if (family != KernelFamily::arccos) os << " lengthscale=" << lengthscale;
    os << " variance=" << variance;
    return os.str();
}

double kernel_eval_r(const KernelSpec& spec, double r) {
    spec.validate();
    if (!std::isfinite(r)) throw Error(ErrorCategory::numeric, "kernel_eval: non-finite distance");
    const double rt = std::abs(r) / spec.lengthscale;
    switch (spec.family) {
        case KernelFamily::rbf:
            return spec.variance * std::exp(-0.5 * rt * rt);
        case KernelFamily::exponential:
            return spec.variance * std::exp(-rt);
        case KernelFamily::matern:
            return spec.variance * matern_corr(spec.nu, rt);
        default:
            throw Error(ErrorCategory::config, "kernel_eval_r: kernel is not stationary");
    }
}

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime) {
    spec.validate();
    if (x.size() != x_prime.size())
        throw Error(ErrorCategory::config, "kernel_eval: dimension mismatch");
    if (x.size() == 0) throw Error(ErrorCategory::config, "kernel_eval: empty input");
    if (!x.allFinite() || !x_prime.allFinite())
        throw Error(ErrorCategory::numeric, "kernel_eval: non-finite input");

    switch (spec.family) {
        case KernelFamily::rbf:
        case KernelFamily::exponential:
        case KernelFamily::matern:
            return kernel_eval_r(spec, (x - x_prime).norm());
        case KernelFamily::arccos:
            return arccos_eval(spec.arccos_order, spec.variance, x, x_prime);
        case KernelFamily::sigmoid_nn:
            return sigmoid_nn_eval(spec, x, x_prime);
        case KernelFamily::locally_stationary_matern: {
            const double core =
                spec.variance * matern_corr(spec.nu, (x - x_prime).norm() / spec.lengthscale);
            const double env = std::exp(-x.squaredNorm() / (2.0 * spec.sigma_m * spec.sigma_m)) *
                               std::exp(-x_prime.squaredNorm() / (2.0 * spec.sigma_m * spec.sigma_m));
            return core * env;
        }
    }
    throw Error(ErrorCategory::config, "kernel_eval: unknown family");
}

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& X, const Eigen::MatrixXd& X_prime) {
    if (X.cols() != X_prime.cols())
        throw Error(ErrorCategory::config, "gram: dimension mismatch");
    Eigen::MatrixXd G(X.rows(), X_prime.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X_prime.rows(); ++j)
            G(i, j) = kernel_eval(spec, X.row(i).transpose(), X_prime.row(j).transpose());
    return G;
}

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& X) {
    Eigen::MatrixXd G(X.rows(), X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            G(i, j) = kernel_eval(spec, X.row(i).transpose(), X.row(j).transpose());
            G(j, i) = G(i, j);
        }
    }
    return G;
}

}  // namespace statnn
