#include "statnn/mc_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "statnn/error.hpp"
#include "statnn/rng.hpp"

namespace statnn {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

void McConfig::validate() const {
    prior.validate();
    if (!activation_is_periodic(activation))
        throw Error(ErrorCategory::config, "mc kernel: activation must be periodic");
    if (hidden_units < 1) throw Error(ErrorCategory::config, "mc kernel: hidden_units must be >= 1");
    if (input_dim < 1) throw Error(ErrorCategory::config, "mc kernel: input_dim must be >= 1");
}

NetworkDraw draw_network(const McConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> ub(-kPi, kPi);
    NetworkDraw net;
    net.weights.resize(cfg.hidden_units, cfg.input_dim);
    net.biases = Eigen::VectorXd::Zero(cfg.hidden_units);
    const bool biased = activation_uses_bias(cfg.activation);
    for (int k = 0; k < cfg.hidden_units; ++k) {
        for (int j = 0; j < cfg.input_dim; ++j) net.weights(k, j) = prior_draw(cfg.prior, rng);
        if (biased) net.biases(k) = ub(rng);
    }
    return net;
}

double mc_kernel_estimate(const McConfig& cfg, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& x_prime) {
    if (x.size() != cfg.input_dim || x_prime.size() != cfg.input_dim)
        throw Error(ErrorCategory::config, "mc_kernel_estimate: dimension mismatch");
    const NetworkDraw net = draw_network(cfg);
    double acc = 0.0;
    for (int k = 0; k < cfg.hidden_units; ++k) {
        const double a = net.weights.row(k).dot(x) + net.biases(k);
        const double b = net.weights.row(k).dot(x_prime) + net.biases(k);
        acc += activate(cfg.activation, a) * activate(cfg.activation, b);
    }
    return acc / cfg.hidden_units;
}

Eigen::MatrixXd mc_gram(const McConfig& cfg, const Eigen::MatrixXd& X) {
    if (X.cols() != cfg.input_dim)
        throw Error(ErrorCategory::config, "mc_gram: dimension mismatch");
    const NetworkDraw net = draw_network(cfg);
    Eigen::MatrixXd phi(X.rows(), cfg.hidden_units);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (int k = 0; k < cfg.hidden_units; ++k)
            phi(i, k) = activate(cfg.activation, net.weights.row(k).dot(X.row(i)) + net.biases(k));
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(X.rows(), X.rows());
    G.selfadjointView<Eigen::Lower>().rankUpdate(phi, 1.0 / cfg.hidden_units);
    G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
    return G;
}

double activation_mixture_mass(ActivationKind kind) {
    switch (kind) {
        case ActivationKind::sin:
        case ActivationKind::sincos:
            return 1.0;
        case ActivationKind::triangle:
        case ActivationKind::periodic_relu:
            return std::pow(kPi, 4) / 96.0;
        default:
            throw Error(ErrorCategory::config, "activation_mixture_mass: activation must be periodic");
    }
}

double SweepRow::mean() const {
    double s = 0.0;
    for (double v : maes) s += v;
    return s / static_cast<double>(maes.size());
}

double SweepRow::stddev() const {
    if (maes.size() < 2) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double v : maes) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(maes.size() - 1));
}

double SweepRow::median() const {
    std::vector<double> v = maes;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<SweepRow> convergence_sweep(ActivationKind activation, const WeightPrior& prior,
                                        const KernelSpec& kernel,
                                        const std::vector<int>& hidden_unit_counts,
                                        const std::vector<double>& grid, int repeats,
                                        std::uint64_t seed) {
    if (hidden_unit_counts.empty() || grid.empty())
        throw Error(ErrorCategory::config, "convergence_sweep: empty K list or grid");
    if (repeats < 1) throw Error(ErrorCategory::config, "convergence_sweep: repeats must be >= 1");

    Eigen::MatrixXd X(grid.size(), 1);
    for (std::size_t i = 0; i < grid.size(); ++i) X(i, 0) = grid[i];
    const Eigen::MatrixXd target = gram(kernel, X);
    const double norm = activation_mixture_mass(activation);

    std::vector<SweepRow> rows;
    rows.reserve(hidden_unit_counts.size());
    for (std::size_t ki = 0; ki < hidden_unit_counts.size(); ++ki) {
        SweepRow row;
        row.hidden_units = hidden_unit_counts[ki];
        for (int rep = 0; rep < repeats; ++rep) {
            McConfig cfg{activation, prior, row.hidden_units, mix_seed(seed, ki, rep), 1};
            const Eigen::MatrixXd est = mc_gram(cfg, X) / norm;
            row.maes.push_back((est - target).cwiseAbs().mean());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<TruncationRow> triangle_truncation_error(const WeightPrior& prior,
                                                     const std::vector<double>& r_grid, int terms) {
    if (terms < 1) throw Error(ErrorCategory::config, "triangle_truncation_error: terms must be >= 1");
    if (r_grid.empty()) throw Error(ErrorCategory::config, "triangle_truncation_error: empty grid");

    std::vector<double> weights(terms);
    double mass = 0.0;
    for (int k = 0; k < terms; ++k) {
        const double lam = 2.0 * k + 1.0;
        weights[k] = 1.0 / (lam * lam * lam * lam);
        mass += weights[k];
    }

    std::vector<TruncationRow> rows;
    rows.reserve(r_grid.size());
    for (double r : r_grid) {
        TruncationRow row;
        row.r = r;
        row.kappa_one_term = wiener_khinchin_numeric(prior, r);
        double full = 0.0;
        for (int k = 0; k < terms; ++k)
            full += weights[k] * wiener_khinchin_numeric(prior, (2.0 * k + 1.0) * r);
        row.kappa_full = full / mass;
        row.abs_diff = std::abs(row.kappa_one_term - row.kappa_full);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace statnn
