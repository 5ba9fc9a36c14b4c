#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace test_util {

// Composite Simpson quadrature; independent of the library's own integrators.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000) {
    if (n % 2 == 1) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Two-sided Kolmogorov-Smirnov statistic against an analytic CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double c = cdf(sample[i]);
        d = std::max(d, std::abs(c - static_cast<double>(i) / n));
        d = std::max(d, std::abs(c - static_cast<double>(i + 1) / n));
    }
    return d;
}

inline double stdnormal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Student-t CDF with three degrees of freedom (closed form).
inline double t3_cdf(double x) {
    const double z = x / std::sqrt(3.0);
    return 0.5 + (z / (1.0 + z * z) + std::atan(z)) / std::acos(-1.0);
}

// Central finite difference of a scalar function of a vector.
inline Eigen::VectorXd central_diff(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& x, double h = 1e-5) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double x0 = x(i);
        xp(i) = x0 + h;
        const double fp = f(xp);
        xp(i) = x0 - h;
        const double fm = f(xp);
        xp(i) = x0;
        g(i) = (fp - fm) / (2.0 * h);
    }
    return g;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline Eigen::MatrixXd random_points(int n, int d, std::uint64_t seed, double lo = -2.0,
                                     double hi = 2.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::MatrixXd X(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) X(i, j) = u(rng);
    return X;
}

}  // namespace test_util
