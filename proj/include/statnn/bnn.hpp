#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "statnn/activations.hpp"
#include "statnn/hmc.hpp"
#include "statnn/spectral.hpp"

namespace statnn {

/// Single-hidden-layer model: f(x) = V sigma((W / ell) x + b) / sqrt(K) + v0
/// with the constrained bias b = 2 pi sigmoid(b_hat) - pi and log-parameterized
/// lengthscale and measurement-noise scale.
struct BnnParams {
    Eigen::MatrixXd hidden_weights;  // K x d
    Eigen::VectorXd bias_raw;        // K, unconstrained
    Eigen::MatrixXd out_weights;     // c x K
    Eigen::VectorXd out_bias;        // c
    double log_lengthscale = 0.0;
    double log_noise = 0.0;  // log of the noise std (regression only)

    int hidden_units() const { return static_cast<int>(hidden_weights.rows()); }
    int input_dim() const { return static_cast<int>(hidden_weights.cols()); }
    int outputs() const { return static_cast<int>(out_weights.rows()); }

    /// Constrained biases in (-pi, pi).
    Eigen::VectorXd biases() const;

    /// Packing for samplers and finite-difference checks. `with_noise` drops
    /// log_noise for classification, where the loss does not touch it.
    Eigen::VectorXd flatten(bool with_noise) const;
    void unflatten(const Eigen::VectorXd& theta, bool with_noise);
    Eigen::Index flat_size(bool with_noise) const;

    static BnnParams zeros_like(const BnnParams& other);
};

enum class TaskKind { regression, classification };

struct TaskSpec {
    TaskKind kind = TaskKind::regression;
    int classes = 1;     // c; 1 for regression
    Eigen::MatrixXd X;   // n x d
    Eigen::VectorXd y;   // n targets (class index for classification)

    void validate() const;
    static TaskSpec regression(Eigen::MatrixXd X, Eigen::VectorXd y);
    static TaskSpec classification(Eigen::MatrixXd X, Eigen::VectorXd y, int classes);
};

/// Gamma(shape, rate) hyperpriors on the lengthscale and noise std.
struct Hyperpriors {
    double ell_shape = 2.0;
    double ell_rate = 0.5;
    double noise_shape = 0.5;
    double noise_rate = 1.0;
};

/// Draws the model layer from its priors: W from the weight prior, biases
/// uniform through the link, output weights standard normal (the 1/sqrt(K)
/// readout scaling lives in the forward pass), output bias at zero.
BnnParams bnn_init(std::uint64_t seed, int input_dim, int hidden_units, int outputs,
                   ActivationKind activation, const WeightPrior& prior,
                   double lengthscale_init = 1.0);

Eigen::MatrixXd bnn_forward(const BnnParams& params, ActivationKind activation,
                            const Eigen::MatrixXd& X);

double neg_log_joint(const BnnParams& params, const TaskSpec& task, ActivationKind activation,
                     const WeightPrior& prior, const Hyperpriors& hyper = {});

/// Manual backpropagation; returns a gradient congruent to BnnParams.
BnnParams neg_log_joint_grad(const BnnParams& params, const TaskSpec& task,
                             ActivationKind activation, const WeightPrior& prior,
                             const Hyperpriors& hyper = {});

struct MapConfig {
    double step = 1e-2;
    int iters = 1000;
    std::uint64_t seed = 0;
};

struct MapResult {
    BnnParams params;
    std::vector<double> loss_trace;  // non-increasing by construction
};

/// Monotone-safeguarded gradient descent (step halving on failure).
MapResult map_fit(const BnnParams& init, const TaskSpec& task, ActivationKind activation,
                  const WeightPrior& prior, const MapConfig& cfg, const Hyperpriors& hyper = {});

enum class Provenance { map_singleton, hmc };

struct PosteriorSamples {
    std::vector<BnnParams> draws;
    Provenance provenance = Provenance::map_singleton;
    HmcDiagnostics diagnostics;

    static PosteriorSamples from_map(BnnParams params);
};

/// Posterior sampling over the flattened parameters with per-chain
/// initialization from the prior.
PosteriorSamples bnn_hmc_sample(const TaskSpec& task, ActivationKind activation,
                                const WeightPrior& prior, int hidden_units, const HmcConfig& cfg,
                                const Hyperpriors& hyper = {}, double lengthscale_init = 1.0);

struct Predictive {
    Eigen::VectorXd mean;         // regression mean; classification: mean prob of class 1 column
    Eigen::MatrixXd class_probs;  // n x c posterior-mean probabilities (classification)
    Eigen::VectorXd variance;     // regression predictive variance / marginal variance
    Eigen::VectorXd entropy;      // classification only
    Eigen::VectorXd nlpd;         // per-point, when targets are given
};

/// Predictive reduction over the draws. Classification: probabilities are the
/// mean softmax, entropy is taken of the mean, and the marginal variance is
/// the across-draw variance of class probabilities averaged over classes.
/// Regression: variance is across-draw variance plus the mean noise variance;
/// the NLPD uses the Monte Carlo mixture density.
Predictive predictive(const PosteriorSamples& samples, ActivationKind activation,
                      const Eigen::MatrixXd& X_star, TaskKind kind, int classes,
                      const Eigen::VectorXd* targets = nullptr);

}  // namespace statnn
