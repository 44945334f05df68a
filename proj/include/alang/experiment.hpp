#pragma once

// Config-driven reproduction of the benchmark experiments: Laplace targets
// with iterations-to-threshold tables, heavy-tailed sampling, Bayesian
// logistic regression with sparsity penalties, and the two-layer ReLU
// network. Specs are flat key = value files (TOML-compatible) with one
// [experiment] section.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alang/dataset.hpp"
#include "alang/potential.hpp"
#include "alang/sampler.hpp"

namespace alang {

enum class ExperimentKind { laplace1d, laplace_md, logistic_det, logistic_gauss, neuralnet, heavytail };

ExperimentKind experiment_kind_from_string(const std::string& name);
std::string to_string(ExperimentKind kind);

struct Prior {
    enum class Kind { gaussian, uniform, laplace } kind = Kind::gaussian;
    double a = 1.0;  // gaussian: variance; uniform: lo; laplace: loc
    double b = 0.0;  // uniform: hi; laplace: scale

    double sample(RngStream& rng) const;
    std::string to_string() const;
};

Prior prior_from_string(const std::string& text);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::laplace1d;
    SamplerKind sampler = SamplerKind::anchored;
    double eta = 0.1;
    double mu = 1.0;
    int n_mc = 500;
    long n_steps = 1000;
    int n_repeats = 10;
    long n_chains = 5000;
    std::uint64_t seed = 20240901;
    Prior prior;
    long record_every = 1;
    double trim = 0.01;
    std::optional<double> threshold_w2;
    bool stop_on_threshold = false;

    // target parameters
    int d = 1;
    double rho = 0.0;       // laplace_md: correlation of the first coordinate pair
    double iota = 2.0;      // heavytail
    double beta = 1.0;      // heavytail reference exponent
    std::string penalty = "l1";
    double lambda = 1.0;
    double a = 10.0;
    double m0 = 0.0;
    double epsilon = 0.5;   // deterministic smoothing scale
    std::string dataset_path;
    std::string dataset_format = "wdbc";
    bool standardize = true;
    int hidden = 32;        // neuralnet layer width

    int threads = 0;  // 0 = hardware concurrency
};

// Parses `path` and validates every key for the declared kind; unknown keys
// are rejected.
ExperimentSpec parse_experiment_spec(const std::string& path);
ExperimentSpec spec_from_entries(const std::map<std::string, std::string>& entries);
std::string spec_echo(const ExperimentSpec& spec);

struct ExperimentResult {
    ExperimentSpec spec;
    std::string metric_name = "w2";
    std::vector<double> mean_series;
    std::vector<double> stderr_series;
    std::vector<std::vector<double>> repeat_series;
    // Secondary series (neural net loss); empty when unused.
    std::string aux_name;
    std::vector<double> aux_mean_series;

    std::vector<double> iters_to_threshold;  // per repeat, inf when never crossed
    double mean_iters_to_threshold = 0.0;    // inf if any repeat never crossed
    double final_metric = 0.0;
    double wall_seconds = 0.0;
    long record_every = 1;
    std::string version;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

ExperimentResult run_laplace_experiment(const ExperimentSpec& spec);
ExperimentResult run_heavytail_experiment(const ExperimentSpec& spec);
ExperimentResult run_logistic_experiment(const ExperimentSpec& spec, const Dataset& data);
ExperimentResult run_nn_experiment(const ExperimentSpec& spec, const Dataset& data);

// Writes metrics.csv, table.csv, spec.echo and long.csv into out_dir.
void emit_results(const ExperimentResult& result, const std::string& out_dir);

// First recorded index whose value drops below eps, as an iteration count;
// infinity when the series never crosses.
double iterations_to_threshold(const std::vector<double>& series, double eps,
                               long record_every);

// The iterations-to-threshold table over mu x eta cells.
struct TableSuite {
    std::vector<std::string> targets;  // e.g. laplace1d, laplace2d_rho0, ...
    std::vector<double> mus{1.0, 2.0, 3.0};
    std::vector<double> etas{0.1, 0.5};
    std::vector<std::string> samplers{"ula", "anchored"};
    long n_steps = 5000;
    int n_repeats = 10;
    long n_chains = 5000;
    int n_mc = 500;
    std::uint64_t seed = 20240901;
    int threads = 0;
};

TableSuite parse_table_suite(const std::string& path);
void run_table_suite(const TableSuite& suite, const std::string& out_dir);

// CDF of the density proportional to (1 + x^2)^{-iota} on the line
// (analytic for iota = 2, quadrature otherwise).
double heavy_tail_cdf(double iota, double x);

// Two-layer ReLU network pieces (exposed for the finite-difference tests).
struct NnEval {
    double loss = 0.0;
    double accuracy = 0.0;
};
NnEval nn_loss_accuracy(const Dataset& data, std::span<const double> w1,
                        std::span<const double> w2, int hidden);
void nn_second_layer_grad(const Dataset& data, std::span<const double> w1,
                          std::span<const double> w2, int hidden, std::span<double> out);

}  // namespace alang
