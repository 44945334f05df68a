#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "alang/experiment.hpp"

namespace alang {

namespace {

// 17 significant digits; infinities serialize as the literal "inf".
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);  // LF line endings everywhere
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

}  // namespace

void emit_results(const ExperimentResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir);
    const fs::path dir(out_dir);
    const ExperimentSpec& spec = result.spec;

    {
        auto out = open_out(dir / "metrics.csv");
        out << "iteration," << result.metric_name << "_mean," << result.metric_name << "_stderr";
        if (!result.aux_mean_series.empty()) out << "," << result.aux_name << "_mean";
        out << "\n";
        for (std::size_t t = 0; t < result.mean_series.size(); ++t) {
            out << (t + 1) * result.record_every << "," << fmt(result.mean_series[t]) << ","
                << fmt(result.stderr_series[t]);
            if (!result.aux_mean_series.empty()) out << "," << fmt(result.aux_mean_series[t]);
            out << "\n";
        }
    }
    {
        auto out = open_out(dir / "table.csv");
        out << "kind,sampler,mu,eta,iters_to_threshold_mean\n";
        out << to_string(spec.kind) << "," << to_string(spec.sampler) << "," << fmt(spec.mu)
            << "," << fmt(spec.eta) << "," << fmt(result.mean_iters_to_threshold) << "\n";
    }
    {
        auto out = open_out(dir / "spec.echo");
        out << spec_echo(spec);
        out << "# version = " << result.version << "\n";
        out << "# wall_seconds = " << fmt(result.wall_seconds) << "\n";
    }
    {
        auto out = open_out(dir / "long.csv");
        out << "kind,sampler,mu,eta,repeat,iteration," << result.metric_name << "\n";
        for (std::size_t r = 0; r < result.repeat_series.size(); ++r)
            for (std::size_t t = 0; t < result.repeat_series[r].size(); ++t)
                out << to_string(spec.kind) << "," << to_string(spec.sampler) << ","
                    << fmt(spec.mu) << "," << fmt(spec.eta) << "," << r << ","
                    << (t + 1) * result.record_every << ","
                    << fmt(result.repeat_series[r][t]) << "\n";
    }
}

void run_table_suite(const TableSuite& suite, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir);

    auto spec_for_target = [&suite](const std::string& target) {
        ExperimentSpec spec;
        if (target == "laplace1d") {
            spec.kind = ExperimentKind::laplace1d;
            spec.d = 1;
            spec.threshold_w2 = 0.1;
        } else if (target == "laplace2d_rho0") {
            spec.kind = ExperimentKind::laplace_md;
            spec.d = 2;
            spec.rho = 0.0;
            spec.threshold_w2 = 0.2;
        } else if (target == "laplace2d_rho05") {
            spec.kind = ExperimentKind::laplace_md;
            spec.d = 2;
            spec.rho = 0.5;
            spec.threshold_w2 = 0.2;
        } else if (target == "laplace3d") {
            spec.kind = ExperimentKind::laplace_md;
            spec.d = 3;
            spec.rho = 0.0;
            spec.threshold_w2 = 0.3;
        } else if (target == "laplace3d_rho05") {
            spec.kind = ExperimentKind::laplace_md;
            spec.d = 3;
            spec.rho = 0.5;
            spec.threshold_w2 = 0.3;
        } else {
            throw std::invalid_argument("unknown table target: " + target);
        }
        spec.prior = Prior{Prior::Kind::gaussian, 10.0, 0.0};
        spec.n_steps = suite.n_steps;
        spec.n_repeats = suite.n_repeats;
        spec.n_chains = suite.n_chains;
        spec.n_mc = suite.n_mc;
        spec.seed = suite.seed;
        spec.threads = suite.threads;
        spec.trim = 0.01;
        spec.stop_on_threshold = true;
        return spec;
    };

    auto out = open_out(fs::path(out_dir) / "table.csv");
    out << "target,sampler";
    for (double mu : suite.mus)
        for (double eta : suite.etas) out << ",mu=" << mu << " eta=" << eta;
    out << "\n";
    for (const auto& target : suite.targets) {
        for (const auto& sampler : suite.samplers) {
            out << target << "," << sampler;
            for (double mu : suite.mus) {
                for (double eta : suite.etas) {
                    ExperimentSpec spec = spec_for_target(target);
                    spec.sampler = sampler_kind_from_string(sampler);
                    spec.mu = mu;
                    spec.eta = eta;
                    const ExperimentResult res = run_laplace_experiment(spec);
                    out << "," << fmt(res.mean_iters_to_threshold);
                    out.flush();
                    std::cerr << target << " " << sampler << " mu=" << mu << " eta=" << eta
                              << ": " << fmt(res.mean_iters_to_threshold) << " ("
                              << fmt(res.wall_seconds) << "s)\n";
                }
            }
            out << "\n";
        }
    }
}

}  // namespace alang
