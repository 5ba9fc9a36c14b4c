#include "statnn/bnn.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "statnn/error.hpp"
#include "statnn/rng.hpp"

namespace statnn {
namespace {

constexpr double kPi = std::numbers::pi;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * kPi);

double sigmoid(double x) { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

// -log of the pushforward density of a Uniform(-pi, pi) bias under the
// sigmoid link, i.e. -log(sigmoid'(b_hat)); stable for large |b_hat|.
double bias_neg_log_density(double b_hat) {
    const double a = std::abs(b_hat);
    return a + 2.0 * std::log1p(std::exp(-a));
}

// log Gamma(shape, rate) density of exp(t) plus the log-Jacobian of exp,
// negated: -(shape log rate - lgamma(shape) + shape t - rate e^t).
double gamma_neg_log_density_log_space(double t, double shape, double rate) {
    return -(shape * std::log(rate) - std::lgamma(shape) + shape * t - rate * std::exp(t));
}

struct LossTerms {
    double data = 0.0;
    double weight_prior = 0.0;
    double bias_prior = 0.0;
    double output_prior = 0.0;
    double lengthscale_prior = 0.0;
    double noise_prior = 0.0;

    double total() const {
        return data + weight_prior + bias_prior + output_prior + lengthscale_prior + noise_prior;
    }
    void check_finite() const {
        const struct { const char* name; double v; } parts[] = {
            {"data", data},           {"weight-prior", weight_prior},
            {"bias-prior", bias_prior}, {"output-prior", output_prior},
            {"lengthscale-prior", lengthscale_prior}, {"noise-prior", noise_prior}};
        for (const auto& p : parts)
            if (!std::isfinite(p.v))
                throw Error(ErrorCategory::numeric,
                            std::string("neg_log_joint: non-finite ") + p.name + " term");
    }
};

// Shared forward pass keeping the intermediates backprop needs.
struct ForwardCache {
    Eigen::MatrixXd pre;      // n x K pre-activations
    Eigen::MatrixXd hidden;   // n x K activations
    Eigen::MatrixXd outputs;  // n x c
    Eigen::MatrixXd weight_part;  // n x K, X W^T / ell (bias excluded)
};

ForwardCache forward_cache(const BnnParams& p, ActivationKind act, const Eigen::MatrixXd& X) {
    if (X.cols() != p.input_dim())
        throw Error(ErrorCategory::config, "bnn_forward: input dimension mismatch");
    const double ell = std::exp(p.log_lengthscale);
    const double scale = 1.0 / std::sqrt(static_cast<double>(p.hidden_units()));
    ForwardCache c;
    c.weight_part = (X * p.hidden_weights.transpose()) / ell;
    c.pre = c.weight_part.rowwise() + p.biases().transpose();
    c.hidden = c.pre.unaryExpr([act](double v) { return activate(act, v); });
    c.outputs = (c.hidden * p.out_weights.transpose()) * scale;
    c.outputs.rowwise() += p.out_bias.transpose();
    return c;
}

LossTerms loss_terms(const BnnParams& p, const ForwardCache& c, const TaskSpec& task,
                     const WeightPrior& prior, const Hyperpriors& hyper) {
    LossTerms t;
    const Eigen::Index n = task.X.rows();

    if (task.kind == TaskKind::regression) {
        const double s = std::exp(p.log_noise);
        const Eigen::VectorXd resid = task.y - c.outputs.col(0);
        t.data = 0.5 * resid.squaredNorm() / (s * s) +
                 static_cast<double>(n) * (std::log(s) + kLogSqrt2Pi);
        t.noise_prior =
            gamma_neg_log_density_log_space(p.log_noise, hyper.noise_shape, hyper.noise_rate);
    } else {
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto row = c.outputs.row(i);
            const double m = row.maxCoeff();
            const double lse = m + std::log((row.array() - m).exp().sum());
            t.data += lse - row(static_cast<int>(task.y(i)));
        }
    }

    for (Eigen::Index k = 0; k < p.hidden_weights.rows(); ++k)
        for (Eigen::Index j = 0; j < p.hidden_weights.cols(); ++j)
            t.weight_prior -= prior_log_pdf(prior, p.hidden_weights(k, j));

    for (Eigen::Index k = 0; k < p.bias_raw.size(); ++k)
        t.bias_prior += bias_neg_log_density(p.bias_raw(k));

    t.output_prior = 0.5 * p.out_weights.squaredNorm() +
                     static_cast<double>(p.out_weights.size()) * kLogSqrt2Pi +
                     0.5 * p.out_bias.squaredNorm() +
                     static_cast<double>(p.out_bias.size()) * kLogSqrt2Pi;

    t.lengthscale_prior =
        gamma_neg_log_density_log_space(p.log_lengthscale, hyper.ell_shape, hyper.ell_rate);

    t.check_finite();
    return t;
}

}  // namespace

Eigen::VectorXd BnnParams::biases() const {
    return bias_raw.unaryExpr([](double v) { return 2.0 * kPi * sigmoid(v) - kPi; });
}

Eigen::Index BnnParams::flat_size(bool with_noise) const {
    return hidden_weights.size() + bias_raw.size() + out_weights.size() + out_bias.size() + 1 +
           (with_noise ? 1 : 0);
}

Eigen::VectorXd BnnParams::flatten(bool with_noise) const {
    Eigen::VectorXd theta(flat_size(with_noise));
    Eigen::Index off = 0;
    theta.segment(off, hidden_weights.size()) =
        Eigen::Map<const Eigen::VectorXd>(hidden_weights.data(), hidden_weights.size());
    off += hidden_weights.size();
    theta.segment(off, bias_raw.size()) = bias_raw;
    off += bias_raw.size();
    theta.segment(off, out_weights.size()) =
        Eigen::Map<const Eigen::VectorXd>(out_weights.data(), out_weights.size());
    off += out_weights.size();
    theta.segment(off, out_bias.size()) = out_bias;
    off += out_bias.size();
    theta(off++) = log_lengthscale;
    if (with_noise) theta(off++) = log_noise;
    return theta;
}

void BnnParams::unflatten(const Eigen::VectorXd& theta, bool with_noise) {
    if (theta.size() != flat_size(with_noise))
        throw Error(ErrorCategory::config, "BnnParams::unflatten: size mismatch");
    Eigen::Index off = 0;
    Eigen::Map<Eigen::VectorXd>(hidden_weights.data(), hidden_weights.size()) =
        theta.segment(off, hidden_weights.size());
    off += hidden_weights.size();
    bias_raw = theta.segment(off, bias_raw.size());
    off += bias_raw.size();
    Eigen::Map<Eigen::VectorXd>(out_weights.data(), out_weights.size()) =
        theta.segment(off, out_weights.size());
    off += out_weights.size();
    out_bias = theta.segment(off, out_bias.size());
    off += out_bias.size();
    log_lengthscale = theta(off++);
    if (with_noise) log_noise = theta(off++);
}

BnnParams BnnParams::zeros_like(const BnnParams& other) {
    BnnParams p;
    p.hidden_weights = Eigen::MatrixXd::Zero(other.hidden_weights.rows(), other.hidden_weights.cols());
    p.bias_raw = Eigen::VectorXd::Zero(other.bias_raw.size());
    p.out_weights = Eigen::MatrixXd::Zero(other.out_weights.rows(), other.out_weights.cols());
    p.out_bias = Eigen::VectorXd::Zero(other.out_bias.size());
    p.log_lengthscale = 0.0;
    p.log_noise = 0.0;
    return p;
}

void TaskSpec::validate() const {
    if (X.rows() != y.size()) throw Error(ErrorCategory::config, "task: X/y size mismatch");
    if (X.rows() < 1) throw Error(ErrorCategory::config, "task: empty data");
    if (!X.allFinite() || !y.allFinite())
        throw Error(ErrorCategory::numeric, "task: non-finite data");
    if (kind == TaskKind::classification) {
        if (classes < 2) throw Error(ErrorCategory::config, "task: need at least two classes");
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double label = y(i);
            if (label != std::floor(label) || label < 0 || label >= classes)
                throw Error(ErrorCategory::config, "task: class labels must be integers in [0, c)");
        }
    } else if (classes != 1) {
        throw Error(ErrorCategory::config, "task: regression uses a single output");
    }
}

TaskSpec TaskSpec::regression(Eigen::MatrixXd X, Eigen::VectorXd y) {
    TaskSpec t{TaskKind::regression, 1, std::move(X), std::move(y)};
    t.validate();
    return t;
}

TaskSpec TaskSpec::classification(Eigen::MatrixXd X, Eigen::VectorXd y, int classes) {
    TaskSpec t{TaskKind::classification, classes, std::move(X), std::move(y)};
    t.validate();
    return t;
}

BnnParams bnn_init(std::uint64_t seed, int input_dim, int hidden_units, int outputs,
                   ActivationKind activation, const WeightPrior& prior, double lengthscale_init) {
    (void)activation;  // the layer shape does not depend on the nonlinearity
    prior.validate();
    if (hidden_units < 1) throw Error(ErrorCategory::config, "bnn_init: hidden_units must be >= 1");
    if (input_dim < 1 || outputs < 1)
        throw Error(ErrorCategory::config, "bnn_init: bad dimensions");
    if (!(lengthscale_init > 0.0))
        throw Error(ErrorCategory::config, "bnn_init: lengthscale_init must be positive");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(-kPi, kPi);

    BnnParams p;
    p.hidden_weights.resize(hidden_units, input_dim);
    for (int k = 0; k < hidden_units; ++k)
        for (int j = 0; j < input_dim; ++j) p.hidden_weights(k, j) = prior_draw(prior, rng);

    // Uniform bias pushed through the inverse link so the constrained value is
    // exactly the draw.
    p.bias_raw.resize(hidden_units);
    for (int k = 0; k < hidden_units; ++k) {
        const double u = unif(rng);
        const double q = (u + kPi) / (2.0 * kPi);
        p.bias_raw(k) = std::log(q / (1.0 - q));
    }

    p.out_weights.resize(outputs, hidden_units);
    for (int c = 0; c < outputs; ++c)
        for (int k = 0; k < hidden_units; ++k) p.out_weights(c, k) = normal(rng);
    p.out_bias = Eigen::VectorXd::Zero(outputs);
    p.log_lengthscale = std::log(lengthscale_init);
    p.log_noise = 0.0;
    return p;
}

Eigen::MatrixXd bnn_forward(const BnnParams& params, ActivationKind activation,
                            const Eigen::MatrixXd& X) {
    return forward_cache(params, activation, X).outputs;
}

double neg_log_joint(const BnnParams& params, const TaskSpec& task, ActivationKind activation,
                     const WeightPrior& prior, const Hyperpriors& hyper) {
    task.validate();
    if (task.classes != params.outputs())
        throw Error(ErrorCategory::config, "neg_log_joint: output dimension mismatch");
    const ForwardCache c = forward_cache(params, activation, task.X);
    return loss_terms(params, c, task, prior, hyper).total();
}

BnnParams neg_log_joint_grad(const BnnParams& params, const TaskSpec& task,
                             ActivationKind activation, const WeightPrior& prior,
                             const Hyperpriors& hyper) {
    task.validate();
    if (task.classes != params.outputs())
        throw Error(ErrorCategory::config, "neg_log_joint_grad: output dimension mismatch");
    const ForwardCache c = forward_cache(params, activation, task.X);
    const Eigen::Index n = task.X.rows();
    const double ell = std::exp(params.log_lengthscale);
    const double scale = 1.0 / std::sqrt(static_cast<double>(params.hidden_units()));

    BnnParams g = BnnParams::zeros_like(params);

    // d(data term)/d(outputs)
    Eigen::MatrixXd d_out(n, params.outputs());
    if (task.kind == TaskKind::regression) {
        const double s = std::exp(params.log_noise);
        const Eigen::VectorXd resid = c.outputs.col(0) - task.y;
        d_out.col(0) = resid / (s * s);
        g.log_noise = static_cast<double>(n) - resid.squaredNorm() / (s * s) +
                      (-hyper.noise_shape + hyper.noise_rate * s);
    } else {
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto row = c.outputs.row(i);
            const double m = row.maxCoeff();
            Eigen::RowVectorXd soft = (row.array() - m).exp();
            soft /= soft.sum();
            d_out.row(i) = soft;
            d_out(i, static_cast<int>(task.y(i))) -= 1.0;
        }
        g.log_noise = 0.0;
    }

    g.out_bias = d_out.colwise().sum().transpose() + params.out_bias;
    g.out_weights = (d_out.transpose() * c.hidden) * scale + params.out_weights;

    const Eigen::MatrixXd d_hidden = (d_out * params.out_weights) * scale;  // n x K
    const Eigen::MatrixXd d_pre =
        d_hidden.cwiseProduct(c.pre.unaryExpr([activation](double v) { return activate_grad(activation, v); }));

    g.hidden_weights = (d_pre.transpose() * task.X) / ell;
    for (Eigen::Index k = 0; k < g.hidden_weights.rows(); ++k)
        for (Eigen::Index j = 0; j < g.hidden_weights.cols(); ++j)
            g.hidden_weights(k, j) += prior_neg_log_pdf_grad(prior, params.hidden_weights(k, j));

    // Bias path: chain through b = 2 pi sigmoid(b_hat) - pi, then add the
    // gradient of -log sigmoid'(b_hat), which is 2 sigmoid(b_hat) - 1.
    const Eigen::VectorXd d_bias = d_pre.colwise().sum().transpose();
    for (Eigen::Index k = 0; k < g.bias_raw.size(); ++k) {
        const double s = sigmoid(params.bias_raw(k));
        g.bias_raw(k) = d_bias(k) * 2.0 * kPi * s * (1.0 - s) + (2.0 * s - 1.0);
    }

    // d(pre)/d(log ell) = -weight_part.
    g.log_lengthscale = -(d_pre.cwiseProduct(c.weight_part)).sum() +
                        (-hyper.ell_shape + hyper.ell_rate * ell);
    return g;
}

MapResult map_fit(const BnnParams& init, const TaskSpec& task, ActivationKind activation,
                  const WeightPrior& prior, const MapConfig& cfg, const Hyperpriors& hyper) {
    if (!(cfg.step > 0.0)) throw Error(ErrorCategory::config, "map_fit: step must be positive");
    const bool with_noise = task.kind == TaskKind::regression;

    MapResult res;
    res.params = init;
    double loss = neg_log_joint(res.params, task, activation, prior, hyper);
    if (!std::isfinite(loss))
        throw Error(ErrorCategory::numeric, "map_fit: non-finite loss at the initial point");
    res.loss_trace.push_back(loss);

    double step = cfg.step;
    Eigen::VectorXd theta = res.params.flatten(with_noise);
    BnnParams trial = res.params;
    for (int it = 0; it < cfg.iters; ++it) {
        const BnnParams grad = neg_log_joint_grad(res.params, task, activation, prior, hyper);
        const Eigen::VectorXd g = grad.flatten(with_noise);
        bool accepted = false;
        for (int h = 0; h < 60; ++h) {
            trial.unflatten(theta - step * g, with_noise);
            double trial_loss;
            try {
                trial_loss = neg_log_joint(trial, task, activation, prior, hyper);
            } catch (const Error&) {
                trial_loss = std::numeric_limits<double>::infinity();
            }
            if (std::isfinite(trial_loss) && trial_loss <= loss) {
                res.params = trial;
                theta = trial.flatten(with_noise);
                loss = trial_loss;
                step *= 1.25;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        res.loss_trace.push_back(loss);
        if (!accepted) break;  // no descent at any representable step
    }
    return res;
}

PosteriorSamples PosteriorSamples::from_map(BnnParams params) {
    PosteriorSamples s;
    s.draws.push_back(std::move(params));
    s.provenance = Provenance::map_singleton;
    return s;
}

namespace {

struct BnnTarget {
    const TaskSpec& task;
    ActivationKind activation;
    const WeightPrior& prior;
    Hyperpriors hyper;
    bool with_noise;
    mutable BnnParams scratch;

    double operator()(const Eigen::VectorXd& q, Eigen::VectorXd& grad) const {
        scratch.unflatten(q, with_noise);
        double value;
        try {
            value = neg_log_joint(scratch, task, activation, prior, hyper);
            grad = neg_log_joint_grad(scratch, task, activation, prior, hyper).flatten(with_noise);
        } catch (const Error&) {
            // Treated as a divergent region by the sampler.
            grad = Eigen::VectorXd::Zero(q.size());
            return std::numeric_limits<double>::infinity();
        }
        return value;
    }
};

}  // namespace

PosteriorSamples bnn_hmc_sample(const TaskSpec& task, ActivationKind activation,
                                const WeightPrior& prior, int hidden_units, const HmcConfig& cfg,
                                const Hyperpriors& hyper, double lengthscale_init) {
    task.validate();
    const bool with_noise = task.kind == TaskKind::regression;
    const int d = static_cast<int>(task.X.cols());

    BnnParams proto = bnn_init(mix_seed(cfg.seed, 0, 0x1717), d, hidden_units, task.classes,
                               activation, prior, lengthscale_init);
    Eigen::MatrixXd inits(cfg.chains, proto.flat_size(with_noise));
    for (int chain = 0; chain < cfg.chains; ++chain) {
        const BnnParams p = bnn_init(mix_seed(cfg.seed, chain, 0x1717), d, hidden_units,
                                     task.classes, activation, prior, lengthscale_init);
        inits.row(chain) = p.flatten(with_noise).transpose();
    }

    BnnTarget target{task, activation, prior, hyper, with_noise, proto};
    PosteriorSamples out;
    const Eigen::MatrixXd draws = hmc_run(target, inits, cfg, &out.diagnostics);

    out.provenance = Provenance::hmc;
    out.draws.reserve(draws.rows());
    for (Eigen::Index i = 0; i < draws.rows(); ++i) {
        BnnParams p = proto;
        p.unflatten(draws.row(i).transpose(), with_noise);
        out.draws.push_back(std::move(p));
    }
    return out;
}

Predictive predictive(const PosteriorSamples& samples, ActivationKind activation,
                      const Eigen::MatrixXd& X_star, TaskKind kind, int classes,
                      const Eigen::VectorXd* targets) {
    if (samples.draws.empty())
        throw Error(ErrorCategory::config, "predictive: no posterior draws");
    const Eigen::Index n = X_star.rows();
    const std::size_t m = samples.draws.size();
    Predictive out;

    if (kind == TaskKind::regression) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd sq = Eigen::VectorXd::Zero(n);
        double noise_var_mean = 0.0;
        Eigen::MatrixXd all_f(n, m);
        std::vector<double> noise_sd(m);
        for (std::size_t j = 0; j < m; ++j) {
            const Eigen::VectorXd f = bnn_forward(samples.draws[j], activation, X_star).col(0);
            all_f.col(j) = f;
            mean += f;
            sq += f.cwiseAbs2();
            const double s = std::exp(samples.draws[j].log_noise);
            noise_sd[j] = s;
            noise_var_mean += s * s;
        }
        mean /= static_cast<double>(m);
        noise_var_mean /= static_cast<double>(m);
        out.mean = mean;
        out.variance = ((sq / static_cast<double>(m) - mean.cwiseAbs2()).cwiseMax(0.0).array() +
                        noise_var_mean)
                           .matrix();
        if (targets) {
            out.nlpd.resize(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                // -log of the Monte Carlo mixture of Gaussians.
                double max_log = -std::numeric_limits<double>::infinity();
                Eigen::VectorXd logs(m);
                for (std::size_t j = 0; j < m; ++j) {
                    const double s = noise_sd[j];
                    const double z = ((*targets)(i)-all_f(i, j)) / s;
                    logs(j) = -0.5 * z * z - std::log(s) - kLogSqrt2Pi;
                    max_log = std::max(max_log, logs(j));
                }
                out.nlpd(i) = -(max_log + std::log((logs.array() - max_log).exp().sum() /
                                                   static_cast<double>(m)));
            }
        }
        return out;
    }

    Eigen::MatrixXd prob_mean = Eigen::MatrixXd::Zero(n, classes);
    Eigen::MatrixXd prob_sq = Eigen::MatrixXd::Zero(n, classes);
    for (std::size_t j = 0; j < m; ++j) {
        const Eigen::MatrixXd f = bnn_forward(samples.draws[j], activation, X_star);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mx = f.row(i).maxCoeff();
            Eigen::RowVectorXd p = (f.row(i).array() - mx).exp();
            p /= p.sum();
            prob_mean.row(i) += p;
            prob_sq.row(i) += p.cwiseAbs2();
        }
    }
    prob_mean /= static_cast<double>(m);
    prob_sq /= static_cast<double>(m);

    out.class_probs = prob_mean;
    out.mean = prob_mean.col(classes > 1 ? 1 : 0);
    out.entropy.resize(n);
    out.variance.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double h = 0.0;
        for (int c = 0; c < classes; ++c) {
            const double p = prob_mean(i, c);
            if (p > 0.0) h -= p * std::log(p);
        }
        out.entropy(i) = h;
        out.variance(i) =
            std::max(0.0, (prob_sq.row(i) - prob_mean.row(i).cwiseAbs2()).mean());
    }
    if (targets) {
        out.nlpd.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double p = prob_mean(i, static_cast<int>((*targets)(i)));
            out.nlpd(i) = -std::log(std::max(p, 1e-300));
        }
    }
    return out;
}

}  // namespace statnn
