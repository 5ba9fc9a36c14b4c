#include "statnn/spectral.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "statnn/error.hpp"

namespace statnn {
namespace {

constexpr double kPi = std::numbers::pi;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * kPi);

// Student-t log density at unit scale.
double t_log_pdf(double dof, double w) {
    return std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
           0.5 * std::log(dof * kPi) - 0.5 * (dof + 1.0) * std::log1p(w * w / dof);
}

// 16-point Gauss-Legendre nodes/weights on [0, 1].
struct GaussLegendre16 {
    std::array<double, 16> x{}, w{};
    GaussLegendre16() {
        // Abscissae/weights on [-1, 1], positive half; mapped to [0, 1].
        static const double xs[8] = {0.0950125098376374, 0.2816035507792589,
                                     0.4580167776572274, 0.6178762444026438,
                                     0.7554044083550030, 0.8656312023878318,
                                     0.9445750230732326, 0.9894009349916499};
        static const double ws[8] = {0.1894506104550685, 0.1826034150449236,
                                     0.1691565193950025, 0.1495959888165767,
                                     0.1246289712555339, 0.0951585116824928,
                                     0.0622535239386479, 0.0271524594117541};
        for (int i = 0; i < 8; ++i) {
            x[2 * i] = 0.5 * (1.0 - xs[i]);
            x[2 * i + 1] = 0.5 * (1.0 + xs[i]);
            w[2 * i] = 0.5 * ws[i];
            w[2 * i + 1] = 0.5 * ws[i];
        }
    }
};
const GaussLegendre16 kGl16;

template <class F>
double gl_panel(const F& f, double a, double b) {
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += kGl16.w[i] * f(a + (b - a) * kGl16.x[i]);
    return (b - a) * s;
}

// Integrate f over [a, b] with panels no wider than the local feature scale of
// the prior density (absolute near the origin, relative in the tail).
template <class F>
double integrate_panels(const F& f, double a, double b, double feature_scale) {
    double s = 0.0;
    double lo = a;
    while (lo < b) {
        const double width = std::max(0.5 * feature_scale, lo / 8.0);
        const double hi = std::min(b, lo + width);
        s += gl_panel(f, lo, hi);
        lo = hi;
    }
    return s;
}

}  // namespace

WeightPrior WeightPrior::normal(double scale) { return {PriorFamily::normal, 3.0, scale}; }
WeightPrior WeightPrior::cauchy(double scale) { return {PriorFamily::cauchy, 1.0, scale}; }
WeightPrior WeightPrior::student_t(double dof, double scale) {
    return {PriorFamily::student_t, dof, scale};
}

void WeightPrior::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw Error(ErrorCategory::config, "prior: scale must be positive");
    if (family == PriorFamily::student_t && (!(dof > 0.0) || !std::isfinite(dof)))
        throw Error(ErrorCategory::config, "prior: student-t dof must be positive");
}

std::string WeightPrior::describe() const {
    std::ostringstream os;
    switch (family) {
        case PriorFamily::normal: os << "normal"; break;
        case PriorFamily::cauchy: os << "cauchy"; break;
        case PriorFamily::student_t: os << "student-t dof=" << dof; break;
    }
    os << " scale=" << scale;
    return os.str();
}

double prior_log_pdf(const WeightPrior& prior, double w) {
    prior.validate();
    if (!std::isfinite(w)) throw Error(ErrorCategory::numeric, "prior_log_pdf: non-finite w");
    const double z = w / prior.scale;
    const double log_scale = std::log(prior.scale);
    switch (prior.family) {
        case PriorFamily::normal:
            return -0.5 * z * z - kLogSqrt2Pi - log_scale;
        case PriorFamily::cauchy:
            return -std::log(kPi) - std::log1p(z * z) - log_scale;
        case PriorFamily::student_t:
            return t_log_pdf(prior.dof, z) - log_scale;
    }
    throw Error(ErrorCategory::config, "prior_log_pdf: unknown family");
}

double prior_pdf(const WeightPrior& prior, double w) { return std::exp(prior_log_pdf(prior, w)); }

double prior_neg_log_pdf_grad(const WeightPrior& prior, double w) {
    const double z = w / prior.scale;
    switch (prior.family) {
        case PriorFamily::normal:
            return z / prior.scale;
        case PriorFamily::cauchy:
            return 2.0 * z / ((1.0 + z * z) * prior.scale);
        case PriorFamily::student_t:
            return (prior.dof + 1.0) * z / ((prior.dof + z * z) * prior.scale);
    }
    throw Error(ErrorCategory::config, "prior_neg_log_pdf_grad: unknown family");
}

double prior_draw(const WeightPrior& prior, std::mt19937_64& rng) {
    switch (prior.family) {
        case PriorFamily::normal: {
            std::normal_distribution<double> n(0.0, 1.0);
            return prior.scale * n(rng);
        }
        case PriorFamily::cauchy: {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            return prior.scale * std::tan(kPi * (u(rng) - 0.5));
        }
        case PriorFamily::student_t: {
            std::normal_distribution<double> n(0.0, 1.0);
            std::chi_squared_distribution<double> chi(prior.dof);
            return prior.scale * n(rng) / std::sqrt(chi(rng) / prior.dof);
        }
    }
    throw Error(ErrorCategory::config, "prior_draw: unknown family");
}

std::vector<double> prior_sample(const WeightPrior& prior, std::uint64_t seed, std::size_t n) {
    prior.validate();
    if (n == 0) throw Error(ErrorCategory::config, "prior_sample: n must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<double> out(n);
    for (auto& v : out) v = prior_draw(prior, rng);
    return out;
}

double matern_spectral_density(double nu, double w) {
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw Error(ErrorCategory::config, "matern_spectral_density: nu must be positive");
    if (!std::isfinite(w)) throw Error(ErrorCategory::numeric, "matern_spectral_density: non-finite w");
    const double two_nu = 2.0 * nu;
    return 2.0 * std::sqrt(kPi) * std::exp(std::lgamma(nu + 0.5) - std::lgamma(nu)) *
           std::pow(two_nu, nu) * std::pow(two_nu + w * w, -(nu + 0.5));
}

WeightPrior prior_for_kernel(const KernelSpec& spec) {
    spec.validate();
    const double scale = 1.0 / spec.lengthscale;
    switch (spec.family) {
        case KernelFamily::rbf:
            return WeightPrior::normal(scale);
        case KernelFamily::exponential:
            return WeightPrior::cauchy(scale);
        case KernelFamily::matern:
            if (spec.nu == 0.5) return WeightPrior::cauchy(scale);
            return WeightPrior::student_t(2.0 * spec.nu, scale);
        default:
            throw Error(ErrorCategory::config,
                        "prior_for_kernel: no spectral dual for a non-stationary kernel");
    }
}

CosineTransformResult cosine_transform(const WeightPrior& prior, double r, double abs_tol,
                                       int max_intervals) {
    prior.validate();
    if (!std::isfinite(r)) throw Error(ErrorCategory::numeric, "cosine_transform: non-finite r");
    r = std::abs(r);

    CosineTransformResult res;
    if (r < 1e-14) {
        // Total mass via w = tan(t); the integrand stays bounded for every
        // prior family (for Cauchy it is exactly constant).
        const auto f = [&](double t) {
            const double c = std::cos(t);
            return prior_pdf(prior, std::tan(t)) / (c * c);
        };
        double s = 0.0;
        const int panels = 200;
        const double h = (kPi / 2.0) / panels;
        for (int i = 0; i < panels; ++i) s += gl_panel(f, i * h, std::min((i + 1) * h, kPi / 2.0 - 1e-14));
        res.value = 2.0 * s;
        res.intervals = panels;
        res.converged = true;
        return res;
    }

    const auto f = [&](double w) { return prior_pdf(prior, w) * std::cos(w * r); };
    const double half = kPi / r;

    // Head: up to the first zero of cos(w r).
    double a = kPi / (2.0 * r);
    double sum = integrate_panels(f, 0.0, a, prior.scale);

    // Alternating tail, accelerated by repeated averaging of partial sums.
    constexpr int kWindow = 14;
    std::array<double, kWindow> window{};
    int have = 0;
    double est_prev = 0.0;
    int stable = 0;
    for (int k = 0; k < max_intervals; ++k) {
        sum += integrate_panels(f, a, a + half, prior.scale);
        a += half;
        if (have < kWindow) {
            window[have++] = sum;
        } else {
            for (int i = 0; i + 1 < kWindow; ++i) window[i] = window[i + 1];
            window[kWindow - 1] = sum;
        }
        std::array<double, kWindow> avg = window;
        for (int len = have; len > 1; --len)
            for (int i = 0; i + 1 < len; ++i) avg[i] = 0.5 * (avg[i] + avg[i + 1]);
        const double est = avg[0];
        res.intervals = k + 1;
        if (k > 0) {
            res.residual = std::abs(est - est_prev);
            stable = (res.residual < abs_tol) ? stable + 1 : 0;
            if (stable >= 3 && k >= 8) {
                res.value = 2.0 * est;
                res.converged = true;
                return res;
            }
        }
        est_prev = est;
    }
    res.value = 2.0 * est_prev;
    res.converged = false;
    return res;
}

double wiener_khinchin_numeric(const WeightPrior& prior, double r) {
    const CosineTransformResult res = cosine_transform(prior, r);
    if (!res.converged) {
        std::ostringstream os;
        os << "wiener_khinchin_numeric: quadrature did not converge at r=" << r
           << " (residual estimate " << res.residual << " after " << res.intervals << " intervals)";
        throw Error(ErrorCategory::numeric, os.str());
    }
    return res.value;
}

}  // namespace statnn
