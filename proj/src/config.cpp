#include "statnn/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "statnn/error.hpp"

namespace statnn {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::io, "cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCategory::config,
                        "config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error(ErrorCategory::config,
                        "config line " + std::to_string(lineno) + ": empty key or value");
        cfg.kv_[key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

void Config::set(const std::string& key, const std::string& value) { kv_[key] = value; }

std::string Config::get_string(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end())
        throw Error(ErrorCategory::config, "missing required config key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string s = get_string(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCategory::config, "config key '" + key + "': not a number: '" + s + "'");
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
    const double v = get_double(key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw Error(ErrorCategory::config, "config key '" + key + "': not an integer");
    return i;
}

int Config::get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string s = get_string(key);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorCategory::config, "config key '" + key + "': not a seed: '" + s + "'");
    return v;
}

std::string Config::describe() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : kv_) {
        if (!first) os << " ";
        os << k << "=" << v;
        first = false;
    }
    return os.str();
}

KernelSpec kernel_from_config(const Config& cfg) {
    const std::string family = cfg.get_string("family");
    const double ell = cfg.get_double("lengthscale", 1.0);
    const double var = cfg.get_double("variance", 1.0);
    KernelSpec spec;
    if (family == "matern") {
        spec = KernelSpec::matern(cfg.get_double("nu"), ell, var);
    } else if (family == "rbf") {
        spec = KernelSpec::rbf(ell, var);
    } else if (family == "exponential") {
        spec = KernelSpec::exponential(ell, var);
    } else if (family == "arccos-0" || family == "arccos-1") {
        spec = KernelSpec::arccos(family.back() == '0' ? 0 : 1, var);
    } else if (family == "sigmoid-nn") {
        spec = KernelSpec::sigmoid_nn(cfg.get_double("sigma0", 1.0), cfg.get_double("sigma", 1.0), var);
    } else if (family == "matern-ls") {
        spec = KernelSpec::locally_stationary_matern(cfg.get_double("nu"), cfg.get_double("sigma_m"),
                                                     ell, var);
    } else {
        throw Error(ErrorCategory::config, "unknown kernel family '" + family + "'");
    }
    spec.validate();
    return spec;
}

WeightPrior prior_from_config(const Config& cfg) {
    const std::string family = cfg.get_string("prior.family");
    const double scale = cfg.get_double("prior.scale", 1.0);
    WeightPrior prior;
    if (family == "normal") {
        prior = WeightPrior::normal(scale);
    } else if (family == "cauchy") {
        prior = WeightPrior::cauchy(scale);
    } else if (family == "student-t") {
        prior = WeightPrior::student_t(cfg.get_double("prior.dof"), scale);
    } else {
        throw Error(ErrorCategory::config, "unknown prior family '" + family + "'");
    }
    prior.validate();
    return prior;
}

ActivationKind activation_from_config(const Config& cfg) {
    return activation_from_name(cfg.get_string("activation"));
}

}  // namespace statnn
