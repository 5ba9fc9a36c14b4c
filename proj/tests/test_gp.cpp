#include <doctest.h>

#include <cmath>

#include "statnn/error.hpp"
#include "statnn/gp.hpp"
#include "test_util.hpp"

using namespace statnn;

namespace {

Eigen::MatrixXd sine_design(int n, Eigen::VectorXd& y) {
    Eigen::MatrixXd X(n, 1);
    y.resize(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = -3.0 + 6.0 * i / (n - 1.0);
        y(i) = std::sin(X(i, 0));
    }
    return X;
}

}  // namespace

TEST_CASE("single point near-interpolation") {
    Eigen::MatrixXd X(1, 1);
    X << 0.0;
    Eigen::VectorXd y(1);
    y << 1.0;
    const GpPosterior post = gp_fit(KernelSpec::rbf(), X, y, 1e-6);
    Eigen::VectorXd mean, var;
    gp_predict(post, X, mean, var);
    CHECK(std::abs(mean(0) - 1.0) <= 1e-5);
    CHECK(var(0) <= 1e-3);
}

TEST_CASE("zero targets give a zero posterior mean") {
    Eigen::VectorXd y;
    const Eigen::MatrixXd X = sine_design(10, y);
    y.setZero();
    const GpPosterior post = gp_fit(KernelSpec::matern(1.5), X, y, 0.01);
    CHECK(post.alpha.cwiseAbs().maxCoeff() == 0.0);
    Eigen::MatrixXd Xs(5, 1);
    Xs << -2.0, -1.0, 0.0, 1.0, 2.0;
    Eigen::VectorXd mean, var;
    gp_predict(post, Xs, mean, var);
    CHECK(mean.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dense sine design interpolates") {
    Eigen::VectorXd y;
    const Eigen::MatrixXd X = sine_design(20, y);
    const GpPosterior post = gp_fit(KernelSpec::rbf(), X, y, 1e-4);
    Eigen::VectorXd mean, var;
    gp_predict(post, X, mean, var);
    const double rmse = std::sqrt((mean - y).squaredNorm() / y.size());
    CHECK(rmse <= 0.02);
}

TEST_CASE("cholesky factor reconstructs the training covariance") {
    Eigen::VectorXd y;
    const Eigen::MatrixXd X = sine_design(15, y);
    const GpPosterior post = gp_fit(KernelSpec::matern(2.5), X, y, 0.05);
    Eigen::MatrixXd K = gram(post.kernel, X);
    K.diagonal().array() += post.noise_var + post.jitter;
    const Eigen::MatrixXd rec = post.chol * post.chol.transpose();
    CHECK((rec - K).cwiseAbs().maxCoeff() <= 1e-8 * K.cwiseAbs().maxCoeff());
}

TEST_CASE("reversion to the prior far from data") {
    Eigen::VectorXd y;
    const Eigen::MatrixXd X = sine_design(20, y);
    for (const KernelSpec& k :
         {KernelSpec::exponential(), KernelSpec::matern(1.5), KernelSpec::rbf()}) {
        const GpPosterior post = gp_fit(k, X, y, 0.01);
        Eigen::MatrixXd Xs(2, 1);
        Xs << -100.0, 100.0;
        Eigen::VectorXd mean, var;
        gp_predict(post, Xs, mean, var);
        const double max_y = y.cwiseAbs().maxCoeff();
        for (int i = 0; i < 2; ++i) {
            CHECK(var(i) >= 0.999 * k.variance);
            CHECK(var(i) <= k.variance + 1e-10);
            CHECK(std::abs(mean(i)) <= 1e-3 * max_y);
        }
    }
}

TEST_CASE("predictive variance bounded by the prior and nonnegative") {
    Eigen::VectorXd y;
    const Eigen::MatrixXd X = sine_design(20, y);
    const GpPosterior post = gp_fit(KernelSpec::matern(1.5), X, y, 1e-6);
    Eigen::MatrixXd Xs(41, 1);
    for (int i = 0; i < 41; ++i) Xs(i, 0) = -4.0 + 0.2 * i;
    Eigen::VectorXd mean, var;
    gp_predict(post, Xs, mean, var);
    for (int i = 0; i < var.size(); ++i) {
        CHECK(var(i) >= 0.0);
        const double prior = kernel_eval(post.kernel, Xs.row(i).transpose(), Xs.row(i).transpose());
        CHECK(var(i) <= prior + 1e-10);
    }
}

TEST_CASE("noise monotonicity of the predictive variance") {
    Eigen::VectorXd y;
    const Eigen::MatrixXd X = sine_design(12, y);
    Eigen::MatrixXd Xs(21, 1);
    for (int i = 0; i < 21; ++i) Xs(i, 0) = -5.0 + 0.5 * i;
    Eigen::VectorXd mean, var_lo, var_hi;
    double prev_noise = 1e-6;
    Eigen::VectorXd prev_var;
    for (double noise : {1e-6, 1e-4, 1e-2, 1e-1, 1.0}) {
        const GpPosterior post = gp_fit(KernelSpec::rbf(), X, y, noise);
        Eigen::VectorXd var;
        gp_predict(post, Xs, mean, var);
        if (prev_var.size() > 0)
            for (int i = 0; i < var.size(); ++i) CHECK(var(i) >= prev_var(i) - 1e-10);
        prev_var = var;
        prev_noise = noise;
    }
}

TEST_CASE("log marginal likelihood matches a direct dense computation") {
    Eigen::VectorXd y;
    const Eigen::MatrixXd X = sine_design(8, y);
    const double noise = 0.1;
    const GpPosterior post = gp_fit(KernelSpec::matern(1.5), X, y, noise);
    Eigen::MatrixXd K = gram(post.kernel, X);
    K.diagonal().array() += noise;
    const double direct = -0.5 * y.dot(K.inverse() * y) - 0.5 * std::log(K.determinant()) -
                          0.5 * y.size() * std::log(2.0 * std::acos(-1.0));
    CHECK(post.log_marginal == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("error paths") {
    Eigen::MatrixXd X(2, 1);
    X << 0.0, 1.0;
    Eigen::VectorXd y(2);
    y << 0.0, 1.0;
    CHECK_THROWS_AS((void)gp_fit(KernelSpec::rbf(), X, y, 0.0), Error);
    Eigen::VectorXd y3(3);
    y3.setZero();
    CHECK_THROWS_AS((void)gp_fit(KernelSpec::rbf(), X, y3, 0.1), Error);

    const GpPosterior post = gp_fit(KernelSpec::rbf(), X, y, 0.1);
    Eigen::MatrixXd Xs(1, 2);
    Xs.setZero();
    Eigen::VectorXd mean, var;
    CHECK_THROWS_AS(gp_predict(post, Xs, mean, var), Error);
}
