#include <doctest.h>

#include <cmath>
#include <random>

#include "statnn/error.hpp"
#include "statnn/kernels.hpp"
#include "test_util.hpp"

using namespace statnn;

namespace {

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

const std::vector<KernelSpec> kAllFamilies = {
    KernelSpec::matern(0.5),  KernelSpec::matern(1.5),        KernelSpec::matern(2.5),
    KernelSpec::matern(3.5),  KernelSpec::rbf(),              KernelSpec::exponential(),
    KernelSpec::arccos(0),    KernelSpec::arccos(1),          KernelSpec::sigmoid_nn(1.0, 1.0),
    KernelSpec::locally_stationary_matern(1.5, 2.0)};

}  // namespace

TEST_CASE("closed-form values") {
    CHECK(kernel_eval(KernelSpec::matern(1.5), vec1(0.0), vec1(1.0)) ==
          doctest::Approx(0.48335772459650765).epsilon(1e-12));
    CHECK(kernel_eval(KernelSpec::rbf(), vec1(0.0), vec1(0.0)) == doctest::Approx(1.0));
    CHECK(kernel_eval_r(KernelSpec::exponential(), 1.0) ==
          doctest::Approx(0.36787944117144232).epsilon(1e-12));
    // Exponential is definitionally matern 1/2.
    for (double r : {0.1, 0.7, 2.3})
        CHECK(kernel_eval_r(KernelSpec::exponential(), r) ==
              doctest::Approx(kernel_eval_r(KernelSpec::matern(0.5), r)).epsilon(1e-15));
}

TEST_CASE("lengthscale and variance scaling") {
    const KernelSpec k = KernelSpec::matern(2.5, 2.0, 3.0);
    CHECK(kernel_eval_r(k, 0.0) == doctest::Approx(3.0));
    CHECK(kernel_eval_r(k, 1.0) ==
          doctest::Approx(3.0 * kernel_eval_r(KernelSpec::matern(2.5), 0.5)).epsilon(1e-14));
}

TEST_CASE("gram examples") {
    Eigen::MatrixXd X0(1, 1);
    X0 << 0.0;
    CHECK(gram(KernelSpec::matern(1.5), X0)(0, 0) == doctest::Approx(1.0));

    Eigen::MatrixXd X(2, 1);
    X << 0.0, 1.0;
    const Eigen::MatrixXd G = gram(KernelSpec::rbf(), X);
    CHECK(G(0, 0) == doctest::Approx(1.0));
    CHECK(G(0, 1) == doctest::Approx(0.60653065971263342).epsilon(1e-12));
    CHECK(G(1, 0) == G(0, 1));

    // Exponential on an equispaced grid is Toeplitz with a unit diagonal.
    Eigen::MatrixXd Xg(13, 1);
    for (int i = 0; i < 13; ++i) Xg(i, 0) = -3.0 + 0.5 * i;
    const Eigen::MatrixXd Ge = gram(KernelSpec::exponential(), Xg);
    for (int i = 0; i < 13; ++i) {
        CHECK(Ge(i, i) == doctest::Approx(1.0));
        for (int j = 0; j < 13; ++j) {
            CHECK(Ge(i, j) == doctest::Approx(kernel_eval(KernelSpec::exponential(),
                                                          vec1(Xg(i, 0)), vec1(Xg(j, 0)))));
            if (i > 0 && j > 0) CHECK(Ge(i, j) == doctest::Approx(Ge(i - 1, j - 1)).epsilon(1e-14));
        }
    }
}

TEST_CASE("stationarity and isotropy") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const KernelSpec& k :
         {KernelSpec::matern(0.5), KernelSpec::matern(1.5), KernelSpec::matern(2.5),
          KernelSpec::rbf(), KernelSpec::exponential()}) {
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXd x(3), y(3), s(3);
            for (int j = 0; j < 3; ++j) {
                x(j) = u(rng);
                y(j) = u(rng);
                s(j) = u(rng);
            }
            const double base = kernel_eval(k, x, y);
            CHECK(std::abs(kernel_eval(k, x + s, y + s) - base) <= 1e-12);
            // Permuting coordinates of both inputs leaves the value unchanged.
            Eigen::VectorXd xp(3), yp(3);
            xp << x(2), x(0), x(1);
            yp << y(2), y(0), y(1);
            CHECK(std::abs(kernel_eval(k, xp, yp) - base) <= 1e-12);
        }
    }
}

TEST_CASE("symmetry in the arguments for every family") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const KernelSpec& k : kAllFamilies) {
        for (int trial = 0; trial < 50; ++trial) {
            Eigen::VectorXd x(2), y(2);
            x << u(rng), u(rng);
            y << u(rng), u(rng);
            CHECK(kernel_eval(k, x, y) == kernel_eval(k, y, x));
        }
    }
}

TEST_CASE("gram of 20 random points is PSD up to jitter for every family") {
    const Eigen::MatrixXd X = test_util::random_points(20, 2, 99);
    for (const KernelSpec& k : kAllFamilies) {
        Eigen::MatrixXd G = gram(k, X);
        G.diagonal().array() += 1e-9 * k.variance;
        Eigen::LLT<Eigen::MatrixXd> llt(G);
        CHECK(llt.info() == Eigen::Success);
    }
}

TEST_CASE("smoothness-ordered approach to the rbf limit") {
    // The deviation |kappa_nu(r) - kappa_rbf(r)| shrinks as nu grows on (0, 3].
    for (double r = 0.1; r <= 3.0; r += 0.1) {
        const double rbf = kernel_eval_r(KernelSpec::rbf(), r);
        const double d12 = std::abs(kernel_eval_r(KernelSpec::matern(0.5), r) - rbf);
        const double d32 = std::abs(kernel_eval_r(KernelSpec::matern(1.5), r) - rbf);
        const double d52 = std::abs(kernel_eval_r(KernelSpec::matern(2.5), r) - rbf);
        const double d72 = std::abs(kernel_eval_r(KernelSpec::matern(3.5), r) - rbf);
        CHECK(d12 > d32);
        CHECK(d32 > d52);
        CHECK(d52 > d72);
    }
    // The pointwise value ordering holds before the tail crossover near r ~ 2.1.
    for (double r = 0.1; r <= 2.0; r += 0.1) {
        CHECK(kernel_eval_r(KernelSpec::matern(0.5), r) < kernel_eval_r(KernelSpec::matern(1.5), r));
        CHECK(kernel_eval_r(KernelSpec::matern(1.5), r) < kernel_eval_r(KernelSpec::matern(2.5), r));
        CHECK(kernel_eval_r(KernelSpec::matern(2.5), r) < kernel_eval_r(KernelSpec::matern(3.5), r));
        CHECK(kernel_eval_r(KernelSpec::matern(3.5), r) < kernel_eval_r(KernelSpec::rbf(), r));
    }
}

TEST_CASE("locally stationary envelope decays along the diagonal") {
    const KernelSpec k = KernelSpec::locally_stationary_matern(1.5, 1.5);
    double prev = kernel_eval(k, vec1(0.0), vec1(0.0));
    CHECK(prev == doctest::Approx(1.0));
    for (double x = 0.25; x <= 4.0; x += 0.25) {
        const double v = kernel_eval(k, vec1(x), vec1(x));
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("arccos closed forms at aligned points") {
    // Identical inputs: theta = 0, so order 0 gives variance and order 1 gives
    // |x~|^2 / pi * pi = x^2 + 1.
    const Eigen::VectorXd x = vec1(1.0);
    CHECK(kernel_eval(KernelSpec::arccos(0), x, x) == doctest::Approx(1.0));
    CHECK(kernel_eval(KernelSpec::arccos(1), x, x) == doctest::Approx(2.0));
}

TEST_CASE("validation and error paths") {
    KernelSpec bad = KernelSpec::matern(1.5);
    bad.lengthscale = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = KernelSpec::matern(1.0);  // unsupported nu
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = KernelSpec::rbf();
    bad.variance = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);

    Eigen::VectorXd x2(2), x3(3);
    x2.setZero();
    x3.setZero();
    CHECK_THROWS_AS((void)kernel_eval(KernelSpec::rbf(), x2, x3), Error);
    Eigen::VectorXd xn(1);
    xn << std::nan("");
    CHECK_THROWS_AS((void)kernel_eval(KernelSpec::rbf(), xn, vec1(0.0)), Error);

    Eigen::MatrixXd A(2, 2), B(2, 3);
    A.setZero();
    B.setZero();
    CHECK_THROWS_AS((void)gram(KernelSpec::rbf(), A, B), Error);
    CHECK_THROWS_AS((void)kernel_eval_r(KernelSpec::arccos(1), 1.0), Error);
}
