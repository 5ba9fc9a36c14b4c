#include <doctest.h>

#include <cmath>
#include <numbers>

#include "statnn/error.hpp"
#include "statnn/mc_kernel.hpp"
#include "statnn/rng.hpp"
#include "test_util.hpp"

using namespace statnn;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

Eigen::MatrixXd grid13() {
    Eigen::MatrixXd X(13, 1);
    for (int i = 0; i < 13; ++i) X(i, 0) = -3.0 + 0.5 * i;
    return X;
}

}  // namespace

TEST_CASE("single sincos unit is the exact product") {
    McConfig cfg{ActivationKind::sincos, WeightPrior::normal(), 1, 3, 1};
    const NetworkDraw net = draw_network(cfg);
    const double w = net.weights(0, 0);
    CHECK(net.biases(0) == 0.0);  // sincos draws no bias
    const double x = 0.7, xp = -1.2;
    const double expected = (std::sin(w * x) + std::cos(w * x)) * (std::sin(w * xp) + std::cos(w * xp));
    CHECK(mc_kernel_estimate(cfg, vec1(x), vec1(xp)) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("estimate at zero distance is near the prior mass of the activation") {
    McConfig cfg{ActivationKind::sin, WeightPrior::normal(), 5000, 42, 1};
    CHECK(std::abs(mc_kernel_estimate(cfg, vec1(0.0), vec1(0.0)) - 1.0) <= 0.05);
}

TEST_CASE("estimate recovers the matern-3/2 dual at r = 1") {
    McConfig cfg{ActivationKind::sin, WeightPrior::student_t(3), 5000, 42, 1};
    CHECK(std::abs(mc_kernel_estimate(cfg, vec1(0.0), vec1(1.0)) - 0.48335772459650765) <= 0.05);
}

TEST_CASE("gram consistency, determinism, symmetry") {
    McConfig cfg{ActivationKind::sin, WeightPrior::normal(), 500, 9, 1};
    Eigen::MatrixXd X1(1, 1);
    X1 << 0.4;
    CHECK(mc_gram(cfg, X1)(0, 0) ==
          doctest::Approx(mc_kernel_estimate(cfg, vec1(0.4), vec1(0.4))).epsilon(1e-15));

    const Eigen::MatrixXd A = mc_gram(cfg, grid13());
    const Eigen::MatrixXd B = mc_gram(cfg, grid13());
    CHECK((A - B).cwiseAbs().maxCoeff() == 0.0);  // bitwise reproducible
    CHECK((A - A.transpose()).cwiseAbs().maxCoeff() == 0.0);  // exactly symmetric
}

TEST_CASE("gram is PSD with zero jitter") {
    for (ActivationKind act : {ActivationKind::sin, ActivationKind::sincos,
                               ActivationKind::triangle, ActivationKind::periodic_relu}) {
        McConfig cfg{act, WeightPrior::normal(), 1000, 21, 1};
        Eigen::LLT<Eigen::MatrixXd> llt(mc_gram(cfg, grid13()));
        CHECK(llt.info() == Eigen::Success);
    }
}

TEST_CASE("multivariate inputs draw coordinatewise weights") {
    McConfig cfg{ActivationKind::sin, WeightPrior::normal(), 4000, 5, 3};
    Eigen::VectorXd x(3), xp(3);
    x << 0.0, 0.0, 0.0;
    xp << 0.6, 0.0, -0.8;  // distance 1
    CHECK(std::abs(mc_kernel_estimate(cfg, x, xp) - 0.60653065971263342) <= 0.06);
}

TEST_CASE("unbiasedness of the sin estimator across 200 seeds") {
    const double target = 0.60653065971263342;  // rbf at r = 1
    std::vector<double> vals;
    for (int s = 0; s < 200; ++s) {
        McConfig cfg{ActivationKind::sin, WeightPrior::normal(), 100, mix_seed(1234, s), 1};
        vals.push_back(mc_kernel_estimate(cfg, vec1(0.0), vec1(1.0)));
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= vals.size();
    double sd = 0.0;
    for (double v : vals) sd += (v - mean) * (v - mean);
    sd = std::sqrt(sd / (vals.size() - 1));
    CHECK(std::abs(mean - target) <= 3.0 * sd / std::sqrt(200.0));
}

TEST_CASE("triangle + cauchy gram stays near the exponential gram") {
    McConfig cfg{ActivationKind::triangle, WeightPrior::cauchy(), 5000, 8, 1};
    const Eigen::MatrixXd est = mc_gram(cfg, grid13()) / activation_mixture_mass(cfg.activation);
    const Eigen::MatrixXd target = gram(KernelSpec::exponential(), grid13());
    CHECK((est - target).cwiseAbs().maxCoeff() <= 0.06);
}

TEST_CASE("sweep medians decrease and settle below the paper-scale error") {
    const std::vector<int> ks = {10, 100, 1000, 5000};
    std::vector<double> grid;
    for (int i = 0; i < 13; ++i) grid.push_back(-3.0 + 0.5 * i);
    const auto rows = convergence_sweep(ActivationKind::sin, WeightPrior::normal(),
                                        KernelSpec::rbf(), ks, grid, 5, 0);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) CHECK(rows[i].median() > rows[i + 1].median());
    CHECK(rows.back().median() <= 0.03);
    for (const auto& row : rows) {
        CHECK(row.maes.size() == 5);
        CHECK(row.stddev() >= 0.0);
    }
}

TEST_CASE("truncation table is zero at r = 0 and small everywhere") {
    std::vector<double> rs;
    for (int i = 0; i <= 25; ++i) rs.push_back(0.2 * i);
    for (const WeightPrior& p :
         {WeightPrior::normal(), WeightPrior::student_t(3), WeightPrior::cauchy()}) {
        const auto rows = triangle_truncation_error(p, rs, 100);
        CHECK(rows.front().abs_diff <= 1e-9);  // both mixtures normalized at zero
        double worst = 0.0;
        for (const auto& row : rows) worst = std::max(worst, row.abs_diff);
        CHECK(worst <= 2e-2);
    }
}

TEST_CASE("one-term mixture equals the oracle itself") {
    const auto rows = triangle_truncation_error(WeightPrior::normal(), {0.5, 1.5}, 1);
    for (const auto& row : rows) {
        CHECK(row.abs_diff == 0.0);
        CHECK(row.kappa_one_term == doctest::Approx(row.kappa_full));
    }
}

TEST_CASE("error paths") {
    McConfig bad{ActivationKind::relu, WeightPrior::normal(), 10, 0, 1};
    CHECK_THROWS_AS(bad.validate(), Error);
    McConfig cfg{ActivationKind::sin, WeightPrior::normal(), 10, 0, 2};
    CHECK_THROWS_AS((void)mc_kernel_estimate(cfg, vec1(0.0), vec1(1.0)), Error);
    CHECK_THROWS_AS((void)convergence_sweep(ActivationKind::sin, WeightPrior::normal(),
                                            KernelSpec::rbf(), {}, {0.0}, 3, 0),
                    Error);
    CHECK_THROWS_AS((void)triangle_truncation_error(WeightPrior::normal(), {}, 10), Error);
    CHECK_THROWS_AS((void)triangle_truncation_error(WeightPrior::normal(), {1.0}, 0), Error);
}
