#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "statnn/activations.hpp"
#include "statnn/error.hpp"
#include "test_util.hpp"

using namespace statnn;
using test_util::simpson;

namespace {
constexpr double kPi = std::numbers::pi;
const std::vector<ActivationKind> kPeriodic = {ActivationKind::sin, ActivationKind::sincos,
                                               ActivationKind::triangle,
                                               ActivationKind::periodic_relu};
}  // namespace

TEST_CASE("pointwise values") {
    CHECK(activate(ActivationKind::sin, kPi / 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(activate(ActivationKind::sincos, 0.0) == doctest::Approx(1.0));
    // Triangle peak and periodic-relu value at the origin.
    CHECK(activate(ActivationKind::triangle, kPi / 2.0) ==
          doctest::Approx(1.7447160499097199).epsilon(1e-12));
    CHECK(activate(ActivationKind::periodic_relu, 0.0) ==
          doctest::Approx(1.2337005501361698).epsilon(1e-12));
    CHECK(activate(ActivationKind::relu, -1.5) == 0.0);
    CHECK(activate(ActivationKind::relu, 2.5) == 2.5);
}

TEST_CASE("gradient values") {
    CHECK(activate_grad(ActivationKind::sin, 0.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(activate_grad(ActivationKind::sincos, 0.0) == doctest::Approx(1.0));
    CHECK(activate_grad(ActivationKind::triangle, 0.0) ==
          doctest::Approx(1.1107207345395916).epsilon(1e-12));
    // Left-derivative conventions at the kinks.
    CHECK(activate_grad(ActivationKind::relu, 0.0) == 0.0);
    const double kink = kPi / 2.0;  // triangle peak
    CHECK(activate_grad(ActivationKind::triangle, kink) ==
          doctest::Approx(1.1107207345395916));  // rising segment on the left
    CHECK(activate_grad(ActivationKind::triangle, kink + 1e-9) ==
          doctest::Approx(-1.1107207345395916));
}

TEST_CASE("gradients match central differences away from kinks") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    const double h = 1e-6;
    for (ActivationKind k : {ActivationKind::sin, ActivationKind::sincos, ActivationKind::triangle,
                             ActivationKind::periodic_relu, ActivationKind::relu}) {
        int checked = 0;
        while (checked < 1000) {
            const double x = u(rng);
            // Stay away from the piecewise-linear kink abscissae (multiples of pi/2).
            const double dist = std::abs(std::remainder(x, kPi / 2.0));
            if (dist < 1e-3) continue;
            const double fd = (activate(k, x + h) - activate(k, x - h)) / (2.0 * h);
            const double an = activate_grad(k, x);
            CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(fd)));
            ++checked;
        }
    }
}

TEST_CASE("periodicity over shifted periods") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (ActivationKind kind : kPeriodic) {
        for (int trial = 0; trial < 200; ++trial) {
            double x = u(rng);
            if (std::abs(std::remainder(x, kPi / 2.0)) < 1e-6) continue;
            for (int k = -3; k <= 3; ++k) {
                const double shifted = activate(kind, x + 2.0 * kPi * k);
                CHECK(std::abs(shifted - activate(kind, x)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("zero mean over one period") {
    for (ActivationKind kind : kPeriodic) {
        const double integral =
            simpson([kind](double x) { return activate(kind, x); }, -kPi, kPi, 20000);
        CHECK(std::abs(integral) <= 1e-9);
    }
}

TEST_CASE("fundamental harmonic matches the sinusoid scaling") {
    // Triangle: first Fourier sine coefficient equals sqrt(2).
    const double b1 =
        simpson([](double x) { return activate(ActivationKind::triangle, x) * std::sin(x); }, -kPi,
                kPi, 20000) /
        kPi;
    CHECK(b1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

    // Periodic relu: unit projection on both sin and cos, matching sincos.
    const double ps =
        simpson([](double x) { return activate(ActivationKind::periodic_relu, x) * std::sin(x); },
                -kPi, kPi, 20000) /
        kPi;
    const double pc =
        simpson([](double x) { return activate(ActivationKind::periodic_relu, x) * std::cos(x); },
                -kPi, kPi, 20000) /
        kPi;
    CHECK(ps == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(pc == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("boundedness of periodic kinds") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 5000; ++i) {
        const double x = u(rng);
        CHECK(std::abs(activate(ActivationKind::sin, x)) <= std::sqrt(2.0) + 1e-12);
        CHECK(std::abs(activate(ActivationKind::sincos, x)) <= std::sqrt(2.0) + 1e-12);
        CHECK(std::abs(activate(ActivationKind::triangle, x)) <= 1.7447160499097199 + 1e-12);
        CHECK(std::abs(activate(ActivationKind::periodic_relu, x)) <= 1.2337005501361698 + 1e-9);
    }
}

TEST_CASE("names round-trip and bias usage") {
    for (ActivationKind k : {ActivationKind::sin, ActivationKind::sincos, ActivationKind::triangle,
                             ActivationKind::periodic_relu, ActivationKind::relu})
        CHECK(activation_from_name(activation_name(k)) == k);
    CHECK_THROWS_AS((void)activation_from_name("tanh"), Error);
    CHECK_FALSE(activation_uses_bias(ActivationKind::sincos));
    CHECK(activation_uses_bias(ActivationKind::sin));
    CHECK_FALSE(activation_is_periodic(ActivationKind::relu));
}

TEST_CASE("non-finite input rejected") {
    CHECK_THROWS_AS((void)activate(ActivationKind::sin, std::nan("")), Error);
    CHECK_THROWS_AS(
        (void)activate_grad(ActivationKind::triangle, std::numeric_limits<double>::infinity()),
        Error);
}
