#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "statnn/activations.hpp"
#include "statnn/kernels.hpp"
#include "statnn/spectral.hpp"

namespace statnn {

/// Flat `key = value` experiment configuration ('#' starts a comment).
class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;

    /// The resolved settings as a single provenance line, keys sorted.
    std::string describe() const;

private:
    std::map<std::string, std::string> kv_;
};

/// Kernel keys: family (matern|rbf|exponential|arccos-0|arccos-1|sigmoid-nn|
/// matern-ls), nu, lengthscale, variance, sigma_m, sigma0, sigma.
KernelSpec kernel_from_config(const Config& cfg);

/// Prior keys: prior.family (normal|cauchy|student-t), prior.dof, prior.scale.
WeightPrior prior_from_config(const Config& cfg);

ActivationKind activation_from_config(const Config& cfg);

}  // namespace statnn
