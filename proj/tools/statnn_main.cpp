// Command-line driver: deterministic experiments with CSV artifacts.
// Every subcommand is a pure function of (config, input files, seed); output
// files carry the resolved configuration as a first-line comment.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "statnn/bnn.hpp"
#include "statnn/config.hpp"
#include "statnn/csv.hpp"
#include "statnn/datasets.hpp"
#include "statnn/error.hpp"
#include "statnn/gp.hpp"
#include "statnn/kernels.hpp"
#include "statnn/mc_kernel.hpp"
#include "statnn/spectral.hpp"

namespace {

using namespace statnn;

int exit_code(ErrorCategory cat) {
    switch (cat) {
        case ErrorCategory::config: return 3;
        case ErrorCategory::io: return 4;
        case ErrorCategory::numeric: return 5;
        case ErrorCategory::sampling: return 6;
    }
    return 1;
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw Error(ErrorCategory::config, "config key '" + key + "': bad list entry '" + item + "'");
        }
    }
    if (out.empty()) throw Error(ErrorCategory::config, "config key '" + key + "': empty list");
    return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw Error(ErrorCategory::config, "grid.points must be >= 1");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return v;
}

std::vector<double> grid_from_config(const Config& cfg, double lo_def, double hi_def, int n_def) {
    return linspace(cfg.get_double("grid.min", lo_def), cfg.get_double("grid.max", hi_def),
                    cfg.get_int("grid.points", n_def));
}

std::string provenance(const std::string& subcommand, const Config& cfg) {
    return "statnn " + subcommand + " " + cfg.describe();
}

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

Config load_config(const CommonOpts& opts, const std::string& subcommand) {
    Config cfg = opts.config_path.empty() ? Config() : Config::from_file(opts.config_path);
    if (opts.seed_given) cfg.set("seed", std::to_string(opts.seed));
    if (!opts.out_path.empty()) cfg.set("out", opts.out_path);
    cfg.set("subcommand", subcommand);
    return cfg;
}

std::string out_path(const Config& cfg) { return cfg.get_string("out"); }

// ---------------------------------------------------------------------------

void cmd_gram(const Config& cfg) {
    const auto grid = grid_from_config(cfg, -3.0, 3.0, 13);
    Eigen::MatrixXd X(grid.size(), 1);
    for (std::size_t i = 0; i < grid.size(); ++i) X(i, 0) = grid[i];

    const std::string estimator = cfg.get_string("estimator", "closed");
    Eigen::MatrixXd G;
    if (estimator == "closed") {
        G = gram(kernel_from_config(cfg), X);
    } else if (estimator == "mc") {
        McConfig mc{activation_from_config(cfg), prior_from_config(cfg),
                    cfg.get_int("hidden_units", 1000), cfg.get_seed("seed", 0), 1};
        G = mc_gram(mc, X) / activation_mixture_mass(mc.activation);
    } else {
        throw Error(ErrorCategory::config, "estimator must be 'closed' or 'mc'");
    }

    std::vector<std::string> header(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::ostringstream os;
        os << grid[i];
        header[i] = os.str();
    }
    write_csv(out_path(cfg), provenance("gram", cfg), header, G);
}

void cmd_mc_verify(const Config& cfg) {
    const KernelSpec kernel = kernel_from_config(cfg);
    const WeightPrior prior = prior_for_kernel(kernel);
    const ActivationKind act = activation_from_config(cfg);
    const auto rs = grid_from_config(cfg, 0.0, 5.0, 11);

    // One random network evaluated against x = 0 across the whole r grid.
    Eigen::MatrixXd X(rs.size() + 1, 1);
    X(0, 0) = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i) X(i + 1, 0) = rs[i];
    McConfig mc{act, prior, cfg.get_int("hidden_units", 5000), cfg.get_seed("seed", 0), 1};
    const Eigen::MatrixXd G = mc_gram(mc, X) / activation_mixture_mass(act);

    Eigen::MatrixXd rows(rs.size(), 4);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const double closed = kernel_eval_r(kernel, rs[i]);
        rows(i, 0) = rs[i];
        rows(i, 1) = G(0, i + 1);
        rows(i, 2) = closed;
        rows(i, 3) = std::abs(G(0, i + 1) - closed);
    }
    write_csv(out_path(cfg), provenance("mc-verify", cfg),
              {"r", "kappa_mc", "kappa_closed", "abs_err"}, rows);
}

void cmd_sweep(const Config& cfg) {
    const KernelSpec kernel = kernel_from_config(cfg);
    const WeightPrior prior = prior_for_kernel(kernel);
    const ActivationKind act = activation_from_config(cfg);
    const auto ks_raw = parse_list(cfg.get_string("ks", "5,10,50,100,500,1000,5000"), "ks");
    std::vector<int> ks(ks_raw.begin(), ks_raw.end());
    const auto grid = grid_from_config(cfg, -3.0, 3.0, 13);

    const auto rows = convergence_sweep(act, prior, kernel, ks, grid,
                                        cfg.get_int("repeats", 5), cfg.get_seed("seed", 0));
    Eigen::MatrixXd table(rows.size(), 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        table(i, 0) = rows[i].hidden_units;
        table(i, 1) = rows[i].mean();
        table(i, 2) = rows[i].stddev();
    }
    write_csv(out_path(cfg), provenance("sweep", cfg), {"K", "mae_mean", "mae_std"}, table);
}

void cmd_triangle_error(const Config& cfg) {
    const WeightPrior prior = prior_from_config(cfg);
    const auto rs = grid_from_config(cfg, 0.0, 5.0, 51);
    const auto rows = triangle_truncation_error(prior, rs, cfg.get_int("terms", 100));
    Eigen::MatrixXd table(rows.size(), 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        table(i, 0) = rows[i].r;
        table(i, 1) = rows[i].kappa_one_term;
        table(i, 2) = rows[i].kappa_full;
        table(i, 3) = rows[i].abs_diff;
    }
    write_csv(out_path(cfg), provenance("triangle-error", cfg),
              {"r", "kappa_one_term", "kappa_full", "abs_diff"}, table);
}

void cmd_banana_gen(const Config& cfg) {
    const LabelledData data = make_banana(cfg.get_int("n_per_class", 100),
                                          cfg.get_double("noise_std", 0.1), cfg.get_seed("seed", 0));
    Eigen::MatrixXd rows(data.X.rows(), 3);
    rows.leftCols(2) = data.X;
    rows.col(2) = data.y;
    write_csv(out_path(cfg), provenance("banana-gen", cfg), {"x1", "x2", "label"}, rows);
}

void cmd_gp_fit(const Config& cfg) {
    const CsvTable train = read_csv(cfg.get_string("data"));
    const Eigen::Index d = train.values.cols() - 1;
    if (d < 1) throw Error(ErrorCategory::config, "gp-fit: training CSV needs features and a target");
    const Eigen::MatrixXd X = train.values.leftCols(d);
    const Eigen::VectorXd y = train.values.col(d);

    if (!cfg.has("noise_var"))
        throw Error(ErrorCategory::config, "gp-fit: an explicit noise_var is required");
    const GpPosterior post = gp_fit(kernel_from_config(cfg), X, y, cfg.get_double("noise_var"));

    if (d != 1) throw Error(ErrorCategory::config, "gp-fit: prediction grid supports 1D inputs only");
    const auto grid = grid_from_config(cfg, -5.0, 5.0, 101);
    Eigen::MatrixXd Xs(grid.size(), 1);
    for (std::size_t i = 0; i < grid.size(); ++i) Xs(i, 0) = grid[i];
    Eigen::VectorXd mean, var;
    gp_predict(post, Xs, mean, var);

    Eigen::MatrixXd rows(grid.size(), 3);
    rows.col(0) = Xs.col(0);
    rows.col(1) = mean;
    rows.col(2) = var;
    write_csv(out_path(cfg), provenance("gp-fit", cfg), {"x", "mean", "var"}, rows);
}

struct BnnRun {
    TaskSpec task;
    ActivationKind activation = ActivationKind::sin;
    WeightPrior prior;
    int hidden_units = 30;
    double lengthscale_init = 1.0;
};

BnnRun bnn_run_from_config(const Config& cfg) {
    const CsvTable train = read_csv(cfg.get_string("data"));
    const Eigen::Index d = train.values.cols() - 1;
    if (d < 1) throw Error(ErrorCategory::config, "bnn: training CSV needs features and a target");
    const Eigen::MatrixXd X = train.values.leftCols(d);
    const Eigen::VectorXd y = train.values.col(d);

    BnnRun run;
    const std::string kind = cfg.get_string("task", "regression");
    if (kind == "regression") {
        run.task = TaskSpec::regression(X, y);
    } else if (kind == "classification") {
        run.task = TaskSpec::classification(X, y, cfg.get_int("classes", 2));
    } else {
        throw Error(ErrorCategory::config, "task must be 'regression' or 'classification'");
    }
    run.activation = activation_from_config(cfg);
    run.prior = prior_from_config(cfg);
    run.hidden_units = cfg.get_int("hidden_units", 30);
    run.lengthscale_init = cfg.get_double("lengthscale_init", 1.0);
    return run;
}

Eigen::MatrixXd prediction_points(const Config& cfg, const TaskSpec& task) {
    if (cfg.has("predict")) {
        const CsvTable t = read_csv(cfg.get_string("predict"));
        if (t.values.cols() < task.X.cols())
            throw Error(ErrorCategory::config, "predict CSV has too few feature columns");
        return t.values.leftCols(task.X.cols());
    }
    if (task.X.cols() == 1) {
        const auto grid = grid_from_config(cfg, -5.0, 5.0, 101);
        Eigen::MatrixXd Xs(grid.size(), 1);
        for (std::size_t i = 0; i < grid.size(); ++i) Xs(i, 0) = grid[i];
        return Xs;
    }
    return task.X;
}

void write_predictions(const Config& cfg, const std::string& subcommand, const TaskSpec& task,
                       const Eigen::MatrixXd& Xs, const Predictive& pred) {
    const bool classify = task.kind == TaskKind::classification;
    const Eigen::Index d = Xs.cols();
    Eigen::MatrixXd rows(Xs.rows(), d + (classify ? 3 : 2));
    rows.leftCols(d) = Xs;
    rows.col(d) = pred.mean;
    rows.col(d + 1) = pred.variance;
    if (classify) rows.col(d + 2) = pred.entropy;

    std::vector<std::string> header;
    for (Eigen::Index j = 0; j < d; ++j) header.push_back("x" + std::to_string(j + 1));
    header.push_back("mean");
    header.push_back("variance");
    if (classify) header.push_back("entropy");
    write_csv(out_path(cfg), provenance(subcommand, cfg), header, rows);
}

void cmd_bnn_fit(const Config& cfg) {
    const BnnRun run = bnn_run_from_config(cfg);
    const std::uint64_t seed = cfg.get_seed("seed", 0);
    const BnnParams init =
        bnn_init(seed, static_cast<int>(run.task.X.cols()), run.hidden_units, run.task.classes,
                 run.activation, run.prior, run.lengthscale_init);
    MapConfig map_cfg{cfg.get_double("step", 1e-2), cfg.get_int("iters", 2000), seed};
    const MapResult fit = map_fit(init, run.task, run.activation, run.prior, map_cfg);

    const PosteriorSamples samples = PosteriorSamples::from_map(fit.params);
    const Eigen::MatrixXd Xs = prediction_points(cfg, run.task);
    const Predictive pred =
        predictive(samples, run.activation, Xs, run.task.kind, run.task.classes);
    write_predictions(cfg, "bnn-fit", run.task, Xs, pred);
}

HmcConfig hmc_from_config(const Config& cfg) {
    HmcConfig hmc;
    hmc.chains = cfg.get_int("chains", 4);
    hmc.warmup = cfg.get_int("warmup", 500);
    hmc.iters = cfg.get_int("iters", 2000);
    hmc.leapfrog_steps = cfg.get_int("leapfrog_steps", 32);
    hmc.seed = cfg.get_seed("seed", 0);
    return hmc;
}

void cmd_bnn_hmc(const Config& cfg) {
    const BnnRun run = bnn_run_from_config(cfg);
    const PosteriorSamples samples =
        bnn_hmc_sample(run.task, run.activation, run.prior, run.hidden_units, hmc_from_config(cfg),
                       Hyperpriors{}, run.lengthscale_init);
    const Eigen::MatrixXd Xs = prediction_points(cfg, run.task);
    const Predictive pred =
        predictive(samples, run.activation, Xs, run.task.kind, run.task.classes);
    write_predictions(cfg, "bnn-hmc", run.task, Xs, pred);
}

void cmd_regress_1d(const Config& cfg) {
    const CsvTable train = read_csv(cfg.get_string("data"));
    if (train.values.cols() != 2)
        throw Error(ErrorCategory::config, "regress-1d: training CSV must be (x, y)");
    const Eigen::MatrixXd X = train.values.leftCols(1);
    const Eigen::VectorXd y = train.values.col(1);
    const auto grid = grid_from_config(cfg, -15.0, 15.0, 121);
    Eigen::MatrixXd Xs(grid.size(), 1);
    for (std::size_t i = 0; i < grid.size(); ++i) Xs(i, 0) = grid[i];

    const std::string model = cfg.get_string("model", "gp");
    Eigen::VectorXd mean, var;          // over the grid
    Eigen::VectorXd train_mean;         // at the training inputs
    Eigen::VectorXd train_nlpd;
    double prior_var = 1.0;
    double edge_var = 0.0;
    double reversion_threshold = 0.0;

    if (model == "gp") {
        if (!cfg.has("noise_var"))
            throw Error(ErrorCategory::config, "regress-1d: gp model requires noise_var");
        const double noise_var = cfg.get_double("noise_var");
        const GpPosterior post = gp_fit(kernel_from_config(cfg), X, y, noise_var);
        gp_predict(post, Xs, mean, var);
        Eigen::VectorXd tvar;
        gp_predict(post, X, train_mean, tvar);
        train_nlpd.resize(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const double v = tvar(i) + noise_var;
            const double r = y(i) - train_mean(i);
            train_nlpd(i) = 0.5 * (std::log(2.0 * std::numbers::pi * v) + r * r / v);
        }
        prior_var = post.kernel.variance;
        edge_var = std::min(var(0), var(var.size() - 1));
        reversion_threshold = 0.999;
    } else if (model == "bnn-hmc" || model == "bnn-map") {
        const TaskSpec task = TaskSpec::regression(X, y);
        const ActivationKind act = activation_from_config(cfg);
        const WeightPrior prior = prior_from_config(cfg);
        const int hidden = cfg.get_int("hidden_units", 30);
        const double ell0 = cfg.get_double("lengthscale_init", 1.0);
        PosteriorSamples samples;
        if (model == "bnn-hmc") {
            samples = bnn_hmc_sample(task, act, prior, hidden, hmc_from_config(cfg), Hyperpriors{}, ell0);
        } else {
            const std::uint64_t seed = cfg.get_seed("seed", 0);
            const BnnParams init = bnn_init(seed, 1, hidden, 1, act, prior, ell0);
            MapConfig map_cfg{cfg.get_double("step", 1e-2), cfg.get_int("map_iters", 2000), seed};
            samples = PosteriorSamples::from_map(
                map_fit(init, task, act, prior, map_cfg).params);
        }
        const Predictive grid_pred = predictive(samples, act, Xs, TaskKind::regression, 1);
        mean = grid_pred.mean;
        var = grid_pred.variance;
        const Predictive train_pred = predictive(samples, act, X, TaskKind::regression, 1, &y);
        train_mean = train_pred.mean;
        train_nlpd = train_pred.nlpd;

        // Latent (noise-free) variance against the prior output variance of
        // the network, which equals the activation's harmonic mass.
        double noise_var_mean = 0.0;
        for (const auto& dws : samples.draws) {
            const double s = std::exp(dws.log_noise);
            noise_var_mean += s * s;
        }
        noise_var_mean /= static_cast<double>(samples.draws.size());
        prior_var = activation_mixture_mass(act);
        edge_var = std::min(var(0), var(var.size() - 1)) - noise_var_mean;
        reversion_threshold = 0.8;
    } else {
        throw Error(ErrorCategory::config, "regress-1d: model must be gp, bnn-map or bnn-hmc");
    }

    Eigen::MatrixXd rows(Xs.rows(), 3);
    rows.col(0) = Xs.col(0);
    rows.col(1) = mean;
    rows.col(2) = var;
    write_csv(out_path(cfg), provenance("regress-1d", cfg), {"x", "mean", "variance"}, rows);

    const double rmse = std::sqrt((train_mean - y).squaredNorm() / static_cast<double>(y.size()));
    const double nlpd = train_nlpd.mean();
    const double edge_ratio = edge_var / prior_var;
    const bool reversion_ok = edge_ratio >= reversion_threshold;

    const std::string metrics_path = out_path(cfg) + ".metrics.csv";
    std::ofstream mout(metrics_path);
    if (!mout) throw Error(ErrorCategory::io, "cannot write '" + metrics_path + "'");
    mout.precision(17);
    mout << "# " << provenance("regress-1d", cfg) << "\n";
    mout << "metric,value\n";
    mout << "rmse," << rmse << "\n";
    mout << "nlpd," << nlpd << "\n";
    mout << "edge_variance_ratio," << edge_ratio << "\n";
    mout << "reversion_threshold," << reversion_threshold << "\n";
    mout << "reversion_ok," << (reversion_ok ? 1 : 0) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stationary-kernel experiments with periodic-activation networks"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        void (*run)(const Config&);
    };
    const std::vector<Sub> subs = {
        {"gram", "Write a closed-form or Monte Carlo Gram matrix over a grid", cmd_gram},
        {"mc-verify", "Compare the MC kernel estimate to its closed-form dual", cmd_mc_verify},
        {"sweep", "Gram-error convergence sweep over network widths", cmd_sweep},
        {"triangle-error", "First-component truncation error of the harmonic mixture",
         cmd_triangle_error},
        {"gp-fit", "Exact GP regression on a training CSV", cmd_gp_fit},
        {"bnn-fit", "MAP-fit the network and write predictions", cmd_bnn_fit},
        {"bnn-hmc", "HMC posterior for the network and write predictions", cmd_bnn_hmc},
        {"banana-gen", "Generate the two-crescent classification dataset", cmd_banana_gen},
        {"regress-1d", "1D regression experiment (GP or BNN) with metrics", cmd_regress_1d},
    };

    std::vector<CommonOpts> opts(subs.size());
    std::vector<CLI::App*> apps;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        CLI::App* sub = app.add_subcommand(subs[i].name, subs[i].help);
        sub->add_option("--config", opts[i].config_path, "Flat key = value config file");
        sub->add_option("--out", opts[i].out_path, "Output CSV path");
        sub->add_option("--seed", opts[i].seed, "Seed override")
            ->each([&opts, i](const std::string&) { opts[i].seed_given = true; });
        apps.push_back(sub);
    }

    // Conveniences mapped onto config keys.
    std::map<std::string, std::string> extra;
    apps[4]->add_option("--data", extra["gp.data"], "Training CSV (x..., y)");
    apps[4]->add_option("--noise", extra["gp.noise"], "Observation noise variance");
    apps[5]->add_option("--data", extra["fit.data"], "Training CSV (features..., target)");
    apps[6]->add_option("--data", extra["hmc.data"], "Training CSV (features..., target)");
    apps[7]->add_option("--n-per-class", extra["banana.n"], "Points per class");
    apps[7]->add_option("--noise-std", extra["banana.noise"], "Gaussian noise std");
    apps[8]->add_option("--data", extra["reg.data"], "Training CSV (x, y)");

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (!apps[i]->parsed()) continue;
            Config cfg = load_config(opts[i], subs[i].name);
            auto apply = [&](const char* key, const char* cfg_key) {
                if (!extra[key].empty()) cfg.set(cfg_key, extra[key]);
            };
            apply("gp.data", "data");
            apply("gp.noise", "noise_var");
            apply("fit.data", "data");
            apply("hmc.data", "data");
            apply("banana.n", "n_per_class");
            apply("banana.noise", "noise_std");
            apply("reg.data", "data");
            subs[i].run(cfg);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error:" << category_name(e.category()) << ": " << e.what() << "\n";
        return exit_code(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error:internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
