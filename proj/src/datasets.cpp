#include "statnn/datasets.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "statnn/error.hpp"

namespace statnn {

LabelledData make_banana(int n_per_class, double noise_std, std::uint64_t seed) {
    if (n_per_class < 1) throw Error(ErrorCategory::config, "banana: n_per_class must be >= 1");
    if (noise_std < 0.0) throw Error(ErrorCategory::config, "banana: noise_std must be >= 0");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    std::normal_distribution<double> noise(0.0, 1.0);

    LabelledData data;
    data.X.resize(2 * n_per_class, 2);
    data.y.resize(2 * n_per_class);
    for (int i = 0; i < n_per_class; ++i) {
        const double t0 = angle(rng);
        data.X(i, 0) = std::cos(t0) + noise_std * noise(rng);
        data.X(i, 1) = std::sin(t0) + noise_std * noise(rng);
        data.y(i) = 0.0;

        const double t1 = angle(rng);
        data.X(n_per_class + i, 0) = 1.0 - std::cos(t1) + noise_std * noise(rng);
        data.X(n_per_class + i, 1) = 0.5 - std::sin(t1) + noise_std * noise(rng);
        data.y(n_per_class + i) = 1.0;
    }
    return data;
}

}  // namespace statnn
