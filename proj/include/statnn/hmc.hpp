#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "statnn/error.hpp"

namespace statnn {

/// Fixed-length leapfrog HMC with dual-averaging step-size adaptation during
/// warmup (Hoffman & Gelman 2014 scheme, identity mass matrix).
struct HmcConfig {
    int chains = 4;
    int warmup = 500;
    int iters = 2000;  // post-warmup draws per chain
    int leapfrog_steps = 32;
    std::uint64_t seed = 0;
    double target_accept = 0.8;

    void validate() const {
        if (chains < 1) throw Error(ErrorCategory::config, "hmc: chains must be >= 1");
        if (warmup < 100) throw Error(ErrorCategory::config, "hmc: warmup must be >= 100");
        if (iters < 1) throw Error(ErrorCategory::config, "hmc: iters must be >= 1");
        if (leapfrog_steps < 1) throw Error(ErrorCategory::config, "hmc: leapfrog_steps must be >= 1");
    }
};

struct HmcDiagnostics {
    double accept_rate = 0.0;  // mean Metropolis acceptance probability post-warmup
    int divergences = 0;       // post-warmup divergent transitions
    int post_warmup = 0;
    std::vector<double> step_sizes;  // adapted step size per chain
};

namespace detail {

// Target must expose: double operator()(const VectorXd& q, VectorXd& grad)
// returning the negative log density and filling its gradient.
template <class Target>
double leapfrog(const Target& target, Eigen::VectorXd& q, Eigen::VectorXd& p, Eigen::VectorXd& grad,
                double eps, int steps) {
    double nlp = 0.0;
    p -= 0.5 * eps * grad;
    for (int s = 0; s < steps; ++s) {
        q += eps * p;
        nlp = target(q, grad);
        if (s + 1 < steps) p -= eps * grad;
    }
    p -= 0.5 * eps * grad;
    return nlp;
}

struct DualAverage {
    double mu, log_eps, log_eps_bar = 0.0, h_bar = 0.0;
    double delta, gamma = 0.05, t0 = 10.0, kappa = 0.75;
    int m = 0;

    DualAverage(double eps0, double target) : mu(std::log(10.0 * eps0)), log_eps(std::log(eps0)), delta(target) {}

    void update(double accept_prob) {
        ++m;
        const double w = 1.0 / (m + t0);
        h_bar = (1.0 - w) * h_bar + w * (delta - accept_prob);
        log_eps = mu - std::sqrt(static_cast<double>(m)) / gamma * h_bar;
        const double rate = std::pow(static_cast<double>(m), -kappa);
        log_eps_bar = rate * log_eps + (1.0 - rate) * log_eps_bar;
    }

    double current() const { return std::exp(log_eps); }
    double adapted() const { return std::exp(log_eps_bar); }
};

// Heuristic initial step size: double/halve until the acceptance probability
// of a single leapfrog step crosses 1/2.
template <class Target>
double find_reasonable_epsilon(const Target& target, const Eigen::VectorXd& q0,
                               std::mt19937_64& rng) {
    const Eigen::Index dim = q0.size();
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd grad0(dim);
    const double nlp0 = target(q0, grad0);

    double eps = 1.0;
    Eigen::VectorXd p0(dim);
    for (Eigen::Index i = 0; i < dim; ++i) p0(i) = normal(rng);
    const double h0 = nlp0 + 0.5 * p0.squaredNorm();

    auto log_ratio = [&](double e) {
        Eigen::VectorXd q = q0, p = p0, grad = grad0;
        const double nlp = leapfrog(target, q, p, grad, e, 1);
        const double h1 = nlp + 0.5 * p.squaredNorm();
        if (!std::isfinite(h1)) return -1e10;
        return h0 - h1;
    };

    double lr = log_ratio(eps);
    const double dir = (lr > std::log(0.5)) ? 1.0 : -1.0;
    for (int it = 0; it < 50; ++it) {
        if (dir * lr <= dir * std::log(0.5)) break;
        eps *= std::pow(2.0, dir);
        lr = log_ratio(eps);
    }
    return eps;
}

}  // namespace detail

/// Runs `cfg.chains` independent chains (seed + chain index each) from the
/// given initial points (one row per chain). Returns the post-warmup draws
/// stacked chain-major, (chains * iters) x dim.
template <class Target>
Eigen::MatrixXd hmc_run(const Target& target, const Eigen::MatrixXd& inits, const HmcConfig& cfg,
                        HmcDiagnostics* diag = nullptr) {
    cfg.validate();
    if (inits.rows() != cfg.chains)
        throw Error(ErrorCategory::config, "hmc_run: need one initial point per chain");
    const Eigen::Index dim = inits.cols();

    Eigen::MatrixXd draws(static_cast<Eigen::Index>(cfg.chains) * cfg.iters, dim);
    double accept_sum = 0.0;
    long accept_count = 0;
    int divergences = 0;
    std::vector<double> step_sizes;

    for (int chain = 0; chain < cfg.chains; ++chain) {
        std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(chain));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);

        Eigen::VectorXd q = inits.row(chain).transpose();
        Eigen::VectorXd grad(dim);
        double nlp = target(q, grad);
        if (!std::isfinite(nlp))
            throw Error(ErrorCategory::sampling, "hmc_run: non-finite target at the initial point");

        detail::DualAverage da(detail::find_reasonable_epsilon(target, q, rng), cfg.target_accept);
        double eps = da.current();

        const int total = cfg.warmup + cfg.iters;
        for (int it = 0; it < total; ++it) {
            Eigen::VectorXd p(dim);
            for (Eigen::Index i = 0; i < dim; ++i) p(i) = normal(rng);
            const double h0 = nlp + 0.5 * p.squaredNorm();

            Eigen::VectorXd q_new = q, p_new = p, grad_new = grad;
            const double nlp_new = detail::leapfrog(target, q_new, p_new, grad_new, eps, cfg.leapfrog_steps);
            const double h1 = nlp_new + 0.5 * p_new.squaredNorm();

            const double delta_h = h0 - h1;
            const bool divergent = !std::isfinite(h1) || delta_h < -1000.0;
            const double accept_prob = divergent ? 0.0 : std::min(1.0, std::exp(delta_h));

            if (!divergent && unif(rng) < accept_prob) {
                q = q_new;
                grad = grad_new;
                nlp = nlp_new;
            }

            if (it < cfg.warmup) {
                da.update(accept_prob);
                eps = da.current();
                if (it == cfg.warmup - 1) eps = da.adapted();
            } else {
                accept_sum += accept_prob;
                ++accept_count;
                if (divergent) ++divergences;
                draws.row(static_cast<Eigen::Index>(chain) * cfg.iters + (it - cfg.warmup)) =
                    q.transpose();
            }
        }
        step_sizes.push_back(eps);
    }

    const int post = cfg.chains * cfg.iters;
    if (divergences * 10 > post)
        throw Error(ErrorCategory::sampling,
                    "hmc_run: more than 10% divergent transitions post-warmup (" +
                        std::to_string(divergences) + " of " + std::to_string(post) + ")");
    if (diag) {
        diag->accept_rate = accept_count > 0 ? accept_sum / static_cast<double>(accept_count) : 0.0;
        diag->divergences = divergences;
        diag->post_warmup = post;
        diag->step_sizes = std::move(step_sizes);
    }
    return draws;
}

}  // namespace statnn
