#include "statnn/gp.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "statnn/error.hpp"

namespace statnn {

GpPosterior gp_fit(const KernelSpec& kernel, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   double noise_var) {
    kernel.validate();
    if (X.rows() < 1) throw Error(ErrorCategory::config, "gp_fit: need at least one training point");
    if (X.rows() != y.size()) throw Error(ErrorCategory::config, "gp_fit: X/y size mismatch");
    if (!(noise_var > 0.0) || !std::isfinite(noise_var))
        throw Error(ErrorCategory::config, "gp_fit: noise_var must be positive");
    if (!X.allFinite() || !y.allFinite())
        throw Error(ErrorCategory::numeric, "gp_fit: non-finite training data");

    GpPosterior post;
    post.kernel = kernel;
    post.train_x = X;
    post.train_y = y;
    post.noise_var = noise_var;

    const Eigen::MatrixXd K = gram(kernel, X);
    const Eigen::Index n = X.rows();

    // Jitter ladder: retry the factorization with a growing diagonal boost.
    double jitter = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt;
    for (int attempt = 0;; ++attempt) {
        Eigen::MatrixXd A = K;
        A.diagonal().array() += noise_var + jitter;
        llt.compute(A);
        if (llt.info() == Eigen::Success) break;
        if (attempt == 0) {
            jitter = 1e-10 * kernel.variance;
        } else {
            jitter *= 100.0;
        }
        if (jitter > 1e-6 * kernel.variance) {
            std::ostringstream os;
            os << "gp_fit: Cholesky failed up to jitter " << jitter
               << "; consider raising noise_var";
            throw Error(ErrorCategory::numeric, os.str());
        }
    }
    post.jitter = jitter;
    post.chol = llt.matrixL();
    post.alpha = llt.solve(y);
    const double quad = y.dot(post.alpha);
    const double logdet = 2.0 * post.chol.diagonal().array().log().sum();
    post.log_marginal =
        -0.5 * quad - 0.5 * logdet - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    return post;
}

void gp_predict(const GpPosterior& post, const Eigen::MatrixXd& X_star, Eigen::VectorXd& mean,
                Eigen::VectorXd& var) {
    if (X_star.cols() != post.train_x.cols())
        throw Error(ErrorCategory::config, "gp_predict: dimension mismatch");
    const Eigen::MatrixXd Ks = gram(post.kernel, post.train_x, X_star);  // n x m
    mean = Ks.transpose() * post.alpha;
    const Eigen::MatrixXd v = post.chol.triangularView<Eigen::Lower>().solve(Ks);
    var.resize(X_star.rows());
    for (Eigen::Index i = 0; i < X_star.rows(); ++i) {
        const double prior_var =
            kernel_eval(post.kernel, X_star.row(i).transpose(), X_star.row(i).transpose());
        var(i) = std::max(0.0, prior_var - v.col(i).squaredNorm());
    }
}

}  // namespace statnn
