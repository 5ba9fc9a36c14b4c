#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace statnn {

struct LabelledData {
    Eigen::MatrixXd X;  // n x 2
    Eigen::VectorXd y;  // labels in {0, 1}
};

/// Two interleaved crescents in 2D: class 0 on the upper unit half-circle,
/// class 1 on a shifted lower half-circle, plus isotropic Gaussian noise.
LabelledData make_banana(int n_per_class, double noise_std, std::uint64_t seed);

}  // namespace statnn
